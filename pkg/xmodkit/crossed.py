"""
Crossed modules (B, D, d, theta), their derived data and their morphisms.

B is written additively in messages and D multiplicatively; internally
both are table groups. theta is stored extensionally: ``theta[x]`` is the
image table of the automorphism theta_x of B.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .config import MAX_GROUP_ORDER
from .errors import CrossedModuleError, InputError
from .groups import (
    FiniteGroup,
    GroupHom,
    Quotient,
    Subgroup,
    center,
    homomorphisms,
    identity_hom,
    image,
    is_normal,
    kernel,
    quotient,
)
from .records import CrossedModuleRecord
from .reports import DerivedSummary, ValidationReport

logger = logging.getLogger(__name__)


class CrossedModule:
    """The quadruple (B, D, d, theta).

    Construction checks shapes and ranges only; use ``validate`` for the
    axioms, or ``require_valid`` to raise on the first violation.
    """

    def __init__(
        self,
        B: FiniteGroup,
        D: FiniteGroup,
        d: GroupHom | Sequence[int],
        theta: Sequence[Sequence[int]] | np.ndarray,
        name: str = "xm",
    ) -> None:
        if not isinstance(d, GroupHom):
            d = GroupHom(B, D, d)
        if d.source != B or d.target != D:
            raise InputError("d must be a homomorphism B -> D")
        table = np.array(theta, dtype=np.int64)
        if table.shape != (D.order, B.order):
            raise InputError(f"theta must have one row of {B.order} images per element of D, got shape {table.shape}")
        if ((table < 0) | (table >= B.order)).any():
            x, b = (int(v) for v in np.argwhere((table < 0) | (table >= B.order))[0])
            raise InputError(f"theta_{x}({b}) = {int(table[x, b])} is not an element of B", witness={"x": x, "b": b})
        table.flags.writeable = False
        self.B = B
        self.D = D
        self.d = d
        self.theta = table
        self.name = name

    def act(self, x: int, b: int) -> int:
        """theta_x(b)."""
        return int(self.theta[x, b])

    def theta_hom(self, x: int) -> GroupHom:
        return GroupHom(self.B, self.B, self.theta[x], check=False)

    def require_valid(self) -> CrossedModule:
        validate(self).raise_for_violations(CrossedModuleError)
        return self

    def to_record(self) -> CrossedModuleRecord:
        return CrossedModuleRecord(
            name=self.name,
            B=self.B.to_record(),
            D=self.D.to_record(),
            d=self.d.images.tolist(),
            theta=self.theta.tolist(),
        )

    @classmethod
    def from_record(cls, record: CrossedModuleRecord, *, max_order: int = MAX_GROUP_ORDER) -> CrossedModule:
        B = FiniteGroup.from_record(record.B, max_order=max_order)
        D = FiniteGroup.from_record(record.D, max_order=max_order)
        return cls(B, D, record.d, record.theta, record.name or "xm")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CrossedModule):
            return NotImplemented
        return self.d == other.d and bool(np.array_equal(self.theta, other.theta))

    def __hash__(self) -> int:
        return hash((self.d, self.theta.tobytes()))

    def __repr__(self) -> str:
        return f"CrossedModule({self.name!r}, |B|={self.B.order}, |D|={self.D.order})"


def validate(xm: CrossedModule) -> ValidationReport:
    """Check both crossed-module axioms and that theta is a homomorphism D -> Aut B.

    One violation per failed axiom, with the first witnessing pair.
    """
    report = ValidationReport(subject=f"crossed module {xm.name}")
    B, D, theta = xm.B, xm.D, xm.theta
    d = xm.d.images

    for x in D.elements:
        row = theta[x]
        if len(np.unique(row)) != B.order:
            report.add("theta_automorphism", f"theta_{x} is not a bijection of B", x=x)
            continue
        bad = np.argwhere(row[B.table] != B.table[row[:, None], row[None, :]])
        if len(bad):
            b, c = (int(v) for v in bad[0])
            report.add("theta_automorphism", f"theta_{x}({b}+{c}) != theta_{x}({b})+theta_{x}({c})", x=x, b=b, c=c)
    if not report.is_valid:
        return report

    if not np.array_equal(theta[0], np.arange(B.order)):
        b = int(np.argmax(theta[0] != np.arange(B.order)))
        report.add("theta_homomorphism", f"theta_1 is not the identity: theta_1({b}) = {int(theta[0, b])}", x=0, b=b)
    composed = theta[np.arange(D.order)[:, None, None], theta[None, :, :]]  # theta_x(theta_y(b))
    bad = np.argwhere(theta[D.table] != composed)
    if len(bad):
        x, y, b = (int(v) for v in bad[0])
        report.add("theta_homomorphism", f"theta_({x}*{y})({b}) != theta_{x}(theta_{y}({b}))", x=x, y=y, b=b)

    lhs = d[theta]  # d(theta_x(b))
    rhs = D.table[D.table[:, d], D.inverse[:, None]]  # x d(b) x^-1
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        x, b = (int(v) for v in bad[0])
        report.add(
            "equivariance",
            f"d(theta_{x}({b})) = {int(lhs[x, b])} but {x}*d({b})*{x}^-1 = {int(rhs[x, b])} "
            f"({len(bad)} failing pairs)",
            x=x,
            b=b,
        )

    lhs = theta[d]  # theta_{d(b)}(c)
    rhs = B.table[B.table, B.inverse[:, None]]  # b + c - b
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        b, c = (int(v) for v in bad[0])
        report.add(
            "peiffer",
            f"theta_d({b})({c}) = {int(lhs[b, c])} but {b}+{c}-{b} = {int(rhs[b, c])} ({len(bad)} failing pairs)",
            b=b,
            c=c,
        )
    return report


def from_normal_subgroup(D: FiniteGroup, N: Subgroup, name: Optional[str] = None) -> CrossedModule:
    """The inclusion N -> D with theta given by conjugation.

    Raises:
        InputError: If N is not normal in D
    """
    if N.parent != D:
        raise InputError("subgroup does not live in D")
    if not is_normal(N):
        raise InputError(f"subgroup {list(N.elements)} is not normal in {D.name}")
    B, inclusion = N.as_group(f"N({D.name})")
    members = np.array(N.elements)
    position = np.full(D.order, -1, dtype=np.int64)
    position[members] = np.arange(len(members))
    conjugates = D.table[D.table[:, members], D.inverse[:, None]]
    theta = position[conjugates]
    return CrossedModule(B, D, inclusion, theta, name or f"{B.order}<|{D.name}")


def trivial_action(B: FiniteGroup, D: FiniteGroup) -> np.ndarray:
    return np.tile(np.arange(B.order), (D.order, 1))


@dataclass(frozen=True)
class DerivedData:
    """Ker d, Im d, Coker d and the action phi of Coker d on Ker d.

    ``kernel_group`` is Ker d reindexed (members in increasing order) and
    ``phi[s]`` is the automorphism table of theta_{x_s} restricted to it.
    """

    xm: CrossedModule
    ker_d: Subgroup
    im_d: Subgroup
    coker: Quotient
    kernel_group: FiniteGroup
    kernel_inclusion: GroupHom
    phi: np.ndarray

    @property
    def coker_group(self) -> FiniteGroup:
        return self.coker.group

    def summary(self) -> DerivedSummary:
        members = np.array(self.ker_d.elements)
        return DerivedSummary(
            subject=f"crossed module {self.xm.name}",
            ker_d=list(self.ker_d.elements),
            im_d=list(self.im_d.elements),
            kernel_is_central=self.ker_d.is_subset_of(center(self.xm.B)),
            image_is_normal=is_normal(self.im_d),
            coker_order=self.coker.group.order,
            coker_section=list(self.coker.section),
            phi=members[self.phi].tolist(),
        )


def kernel_action(xm: CrossedModule, ker_d: Subgroup, reps: Sequence[int]) -> np.ndarray:
    """theta_{x_s} restricted to Ker d, in Ker d's own indexing, one row per coset."""
    members = np.array(ker_d.elements)
    position = np.full(xm.B.order, -1, dtype=np.int64)
    position[members] = np.arange(len(members))
    return position[xm.theta[np.array(reps)][:, members]]


def derive(xm: CrossedModule, section: Optional[Sequence[int]] = None) -> DerivedData:
    """Derived data of a valid crossed module.

    Args:
        xm: The crossed module
        section: Coset representatives to restrict theta along; defaults to
            the smallest member of each coset

    Raises:
        CrossedModuleError: If xm is invalid or a derived property fails
    """
    xm.require_valid()
    ker_d = kernel(xm.d)
    im_d = image(xm.d)

    if not ker_d.is_subset_of(center(xm.B)):
        b = next(b for b in ker_d if b not in center(xm.B))
        logger.error("Ker d not central in %s: %d", xm.name, b)
        raise CrossedModuleError(f"Ker d is not central: {b} does not commute with B", witness={"b": b})
    if not is_normal(im_d):
        raise CrossedModuleError("Im d is not normal in D")

    coker = quotient(xm.D, im_d, f"Coker({xm.name})")
    reps = list(section) if section is not None else list(coker.section)
    if len(reps) != coker.group.order or any(coker.coset_of(x) != s for s, x in enumerate(reps)):
        raise InputError(f"{reps} is not a section of Coker d")

    members = np.array(ker_d.elements)
    on_kernel = xm.theta[:, members]
    by_coset = on_kernel[np.array(reps)][coker.projection.images]
    bad = np.argwhere(on_kernel != by_coset)
    if len(bad):
        x, i = (int(v) for v in bad[0])
        raise CrossedModuleError(
            f"theta_{x} on Ker d depends on the coset representative (at {int(members[i])})",
            witness={"x": x, "b": int(members[i])},
        )

    kernel_group, inclusion = ker_d.as_group(f"Ker({xm.name})")
    phi = kernel_action(xm, ker_d, reps)
    phi.flags.writeable = False
    return DerivedData(xm, ker_d, im_d, coker, kernel_group, inclusion, phi)


class XModMorphism:
    """A morphism (f1, f0) of crossed modules."""

    def __init__(self, source: CrossedModule, target: CrossedModule, f1: GroupHom, f0: GroupHom) -> None:
        if f1.source != source.B or f1.target != target.B:
            raise CrossedModuleError("f1 must map B to B'")
        if f0.source != source.D or f0.target != target.D:
            raise CrossedModuleError("f0 must map D to D'")
        self.source = source
        self.target = target
        self.f1 = f1
        self.f0 = f0

    def is_isomorphism(self) -> bool:
        return self.f1.is_bijective() and self.f0.is_bijective()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, XModMorphism):
            return NotImplemented
        return self.f1 == other.f1 and self.f0 == other.f0

    def __hash__(self) -> int:
        return hash((self.f1, self.f0))

    def __repr__(self) -> str:
        return f"XModMorphism({self.source.name} -> {self.target.name}, f1={self.f1.images.tolist()}, f0={self.f0.images.tolist()})"


def validate_morphism(m: XModMorphism) -> ValidationReport:
    """Check that the square commutes and f1 is an operator homomorphism."""
    report = ValidationReport(subject=f"morphism {m.source.name} -> {m.target.name}")
    f1, f0 = m.f1.images, m.f0.images

    bad = np.flatnonzero(f0[m.source.d.images] != m.target.d.images[f1])
    if len(bad):
        b = int(bad[0])
        report.add("square", f"f0(d({b})) != d'(f1({b}))", b=b)

    lhs = f1[m.source.theta]  # f1(theta_x(b))
    rhs = m.target.theta[f0][:, f1]  # theta'_{f0 x}(f1 b)
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        x, b = (int(v) for v in bad[0])
        report.add("operator", f"f1(theta_{x}({b})) != theta'_f0({x})(f1({b}))", x=x, b=b)
    return report


def identity_morphism(xm: CrossedModule) -> XModMorphism:
    return XModMorphism(xm, xm, identity_hom(xm.B), identity_hom(xm.D))


def compose_morphisms(second: XModMorphism, first: XModMorphism) -> XModMorphism:
    """second after first, componentwise.

    Raises:
        CrossedModuleError: If first's target is not second's source
    """
    if first.target != second.source:
        raise CrossedModuleError(
            f"cannot compose: {first.target.name} is not the source {second.source.name}"
        )
    return XModMorphism(first.source, second.target, second.f1.compose(first.f1), second.f0.compose(first.f0))


def morphisms(source: CrossedModule, target: CrossedModule, *, budget: Optional[int] = None) -> List[XModMorphism]:
    """All morphisms source -> target, by filtering pairs of homomorphisms."""
    found = []
    for f1, f0 in itertools.product(
        homomorphisms(source.B, target.B, budget=budget), homomorphisms(source.D, target.D, budget=budget)
    ):
        m = XModMorphism(source, target, f1, f0)
        if validate_morphism(m).is_valid:
            found.append(m)
    logger.debug("Found %d morphisms %s -> %s", len(found), source.name, target.name)
    return found
