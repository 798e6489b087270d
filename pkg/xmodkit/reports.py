"""
Machine-readable reports for every xmodkit command.

Reports are pydantic models: ``model_dump_json()`` is the JSON form (stable
across runs for a fixed seed) and ``render_text()`` the human-readable one.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional, Type

from pydantic import BaseModel, Field

from .errors import XmodkitError
from .records import CochainRecord, ExtensionRecord


class Violation(BaseModel):
    """A single failed axiom with the elements that witness it."""

    rule: str = Field(..., description="Axiom name (e.g. 'equivariance', 'peiffer')")
    message: str = Field(..., description="Human readable description")
    witness: Dict[str, Any] = Field(default_factory=dict, description="Witnessing elements")


class ValidationReport(BaseModel):
    """Every violated axiom of one object; empty means valid."""

    subject: str = Field(..., description="What was validated")
    violations: List[Violation] = Field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def add(self, rule: str, message: str, **witness: Any) -> None:
        self.violations.append(Violation(rule=rule, message=message, witness=witness))

    def extend(self, other: ValidationReport) -> None:
        self.violations.extend(other.violations)

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def raise_for_violations(self, error_cls: Type[XmodkitError]) -> None:
        """Raise error_cls carrying the first violation, if there is one."""
        if self.violations:
            first = self.violations[0]
            more = f" (and {len(self.violations) - 1} more)" if len(self.violations) > 1 else ""
            raise error_cls(f"{self.subject}: {first.rule}: {first.message}{more}", witness=first.witness)

    def render_text(self) -> str:
        if self.is_valid:
            return f"{self.subject}: valid"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        for v in self.violations:
            lines.append(f"  - [{v.rule}] {v.message}")
        return "\n".join(lines)


class DerivedSummary(BaseModel):
    """Kernel, image, cokernel and the cokernel action on the kernel."""

    subject: str
    ker_d: List[int] = Field(..., description="Elements of Ker d (indices in B)")
    im_d: List[int] = Field(..., description="Elements of Im d (indices in D)")
    kernel_is_central: bool
    image_is_normal: bool
    coker_order: int
    coker_section: List[int] = Field(..., description="Representative in D of each coset")
    phi: List[List[int]] = Field(..., description="phi[s][i] = image of the i-th Ker d element under coset s")

    def render_text(self) -> str:
        return "\n".join(
            [
                f"{self.subject}",
                f"  Ker d = {self.ker_d} (central: {self.kernel_is_central})",
                f"  Im d  = {self.im_d} (normal: {self.image_is_normal})",
                f"  |Coker d| = {self.coker_order}, section = {self.coker_section}",
                f"  phi = {self.phi}",
            ]
        )


class ReductionReport(BaseModel):
    """The reduced Gr-category (Coker d, Ker d, k) for one stick."""

    subject: str
    seed: int
    reps: List[int] = Field(..., description="Coset representatives x_s in D")
    connecting: List[int] = Field(..., description="i_x in B for each x in D")
    pi0_order: int
    pi1: List[int] = Field(..., description="Ker d as indices in B")
    k: CochainRecord
    k_is_cocycle: bool
    k_class_zero: bool
    h3_order: int

    def render_text(self) -> str:
        status = "zero" if self.k_class_zero else "nonzero"
        return "\n".join(
            [
                f"{self.subject} (seed {self.seed})",
                f"  reps x_s = {self.reps}",
                f"  i_x = {self.connecting}",
                f"  pi0 order {self.pi0_order}, pi1 = {self.pi1}",
                f"  k = {self.k.values or '0'} (cocycle: {self.k_is_cocycle})",
                f"  class of k is {status} in H^3 (|H^3| = {self.h3_order})",
            ]
        )


class ObstructionReport(BaseModel):
    """The obstruction psi*k of a homomorphism psi: Q -> Coker d."""

    subject: str
    psi: List[int]
    obstruction: CochainRecord
    class_zero: bool
    h3_order: int

    def render_text(self) -> str:
        verdict = "class zero in H^3: extensions exist" if self.class_zero else "class nonzero in H^3"
        return "\n".join(
            [
                f"{self.subject}, psi = {self.psi}",
                f"  psi*k = {self.obstruction.values or '0'}",
                f"  {verdict} (|H^3| = {self.h3_order})",
            ]
        )


class ExtensionSummary(BaseModel):
    """One classified extension with a short structural fingerprint."""

    record: ExtensionRecord
    order: int
    element_orders: List[int] = Field(..., description="Sorted multiset of element orders of E")
    abelian: bool

    def describe(self) -> str:
        kind = "abelian" if self.abelian else "non-abelian"
        return f"|E| = {self.order}, {kind}, element orders {self.element_orders}"


class ClassificationReport(BaseModel):
    """Equivalence classes of extensions of one type inducing psi."""

    subject: str
    psi: List[int]
    obstruction_class_zero: bool
    h2_order: int
    classes: List[ExtensionSummary] = Field(default_factory=list)
    oracle_classes: Optional[int] = Field(None, description="Brute-force class count, when run")

    @property
    def oracle_agrees(self) -> Optional[bool]:
        if self.oracle_classes is None:
            return None
        return self.oracle_classes == len(self.classes)

    def render_text(self) -> str:
        lines = [f"{self.subject}, psi = {self.psi}"]
        if not self.obstruction_class_zero:
            lines.append("  obstruction class nonzero: no extensions")
        lines.append(f"  |H^2| = {self.h2_order}, {len(self.classes)} class(es)")
        for i, summary in enumerate(self.classes):
            lines.append(f"  [{i}] {summary.describe()}")
        if self.oracle_classes is not None:
            lines.append(f"  oracle: {self.oracle_classes} class(es), agrees: {self.oracle_agrees}")
        return "\n".join(lines)


class OracleReport(BaseModel):
    """Brute-force enumeration of factor sets and their equivalence classes."""

    subject: str
    psi: List[int]
    candidates: int = Field(..., description="Factor-set candidates enumerated")
    factor_sets: int = Field(..., description="Candidates passing both factor-set conditions")
    class_sizes: List[int] = Field(default_factory=list)

    @property
    def classes(self) -> int:
        return len(self.class_sizes)

    def render_text(self) -> str:
        return "\n".join(
            [
                f"{self.subject}, psi = {self.psi}",
                f"  {self.candidates} candidates, {self.factor_sets} factor sets",
                f"  {self.classes} class(es), sizes {self.class_sizes}",
            ]
        )


class SchreierReport(BaseModel):
    """Three (optionally four) independent counts of extension classes."""

    subject: str
    psi: List[int]
    h2_order: int
    functor_classes: int = Field(..., description="Homotopy classes of reduced Gr-functors of type (psi, 0)")
    classified: int = Field(..., description="Length of the classification")
    oracle_classes: int = Field(..., description="Brute-force class count")
    unreduced_classes: Optional[int] = Field(None, description="Direct count into the unreduced category")

    @property
    def agree(self) -> bool:
        counts = {self.functor_classes, self.classified, self.oracle_classes}
        if self.unreduced_classes is not None:
            counts.add(self.unreduced_classes)
        return len(counts) == 1

    def render_text(self) -> str:
        counts = f"{self.functor_classes} = {self.classified} = {self.oracle_classes}"
        if self.unreduced_classes is not None:
            counts += f" = {self.unreduced_classes}"
        verdict = "agree" if self.agree else "DISAGREE"
        return f"{self.subject}, psi = {self.psi}: {counts} ({verdict}; |H^2| = {self.h2_order})"


class ClassificationIsoReport(BaseModel):
    """Morphisms of crossed modules against Gr-functors between their categories."""

    source: str
    target: str
    morphisms: int
    single_functors: int
    functors: int = Field(..., description="All Gr-functors (f1, f0, c)")
    strong_homotopy_classes: int
    bijective: bool

    def render_text(self) -> str:
        return (
            f"{self.source} -> {self.target}: {self.morphisms} morphisms, "
            f"{self.single_functors} single functors, {self.functors} functors in "
            f"{self.strong_homotopy_classes} strong homotopy classes (bijective: {self.bijective})"
        )


class RoundTripReport(BaseModel):
    """Crossed module -> strict Gr-category -> crossed module."""

    subject: str
    objects: int
    arrows: int
    category: ValidationReport
    isomorphic: bool

    def render_text(self) -> str:
        lines = [
            f"{self.subject}: {self.objects} objects, {self.arrows} arrows, round trip isomorphic: {self.isomorphic}"
        ]
        if not self.category.is_valid:
            lines.append(self.category.render_text())
        return "\n".join(lines)


class ErrorReport(BaseModel):
    """A command that stopped on an error instead of producing its report."""

    error: str = Field(..., description="Exception class, e.g. 'BudgetExceeded'")
    message: str
    witness: Optional[Any] = Field(None, description="JSON-safe copy of the exception witness")

    @classmethod
    def from_exception(cls, exc: BaseException) -> ErrorReport:
        witness = getattr(exc, "witness", None)
        if witness is not None:
            try:
                witness = json.loads(json.dumps(witness, default=_jsonable))
            except (TypeError, ValueError):
                witness = str(witness)
        return cls(error=type(exc).__name__, message=str(exc), witness=witness)

    def render_text(self) -> str:
        text = f"{self.error}: {self.message}"
        return text if self.witness is None else f"{text} (witness {self.witness})"


def _jsonable(value: Any) -> Any:
    return value.tolist() if hasattr(value, "tolist") else str(value)
