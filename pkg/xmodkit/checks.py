"""
Theorem-verification battery.

Each check is a named callable returning ``(passed, message)`` or a bool;
``TheoremChecker`` runs each in a span and aggregates the results into a
``BatteryReport``. Timings go to the check.latency_ms metric, never the report.
"""

from __future__ import annotations

import logging
import math
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from .catalog import actions, builtin_crossed_module, crossed_module_battery, extension_instances, klein_group, psi_of
from .cohomology import GModule, coboundary, cocycle_generators, h_order, h_order_exhaustive, random_cochain
from .config import MAX_AUTOMORPHISM_ORDER, XmodkitSettings
from .extensions import FactorSet, classify, crossed_product_table
from .grcat import check_classification_iso, roundtrip_isomorphism
from .groups import is_associative, is_isomorphic, make_cyclic, symmetric_group
from .observability import emit_metric, trace_operation
from .oracle import enumerate_extensions_bruteforce, schreier_check
from .reduction import choose_stick, reduce, stick_independence

logger = logging.getLogger(__name__)

CheckResultValue = Tuple[bool, str]


class CheckStatus(str, Enum):
    """Outcome of one check."""

    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"


class CheckResult(BaseModel):
    """Individual check result."""

    name: str = Field(..., description="Check name")
    status: CheckStatus = Field(..., description="Outcome")
    message: Optional[str] = Field(None, description="Optional status message")


class BatteryReport(BaseModel):
    """Aggregated outcome of a battery."""

    name: str
    version: str
    status: CheckStatus = Field(..., description="Overall outcome")
    checks: List[CheckResult] = Field(default_factory=list)

    def is_passing(self) -> bool:
        return self.status == CheckStatus.PASSED

    def render_text(self) -> str:
        lines = [f"{self.name} {self.version}: {self.status.value}"]
        for check in self.checks:
            lines.append(f"  [{check.status.value}] {check.name}: {check.message}")
        return "\n".join(lines)


def _interpret(result: Any) -> CheckResultValue:
    if isinstance(result, tuple):
        passed, message = result
        return bool(passed), str(message)
    if result:
        return True, "OK" if isinstance(result, bool) else str(result)
    return False, "Check failed"


class TheoremChecker:
    """Registry and runner for named checks."""

    def __init__(self, name: str, version: str) -> None:
        self.name = name
        self.version = version
        self.checks: Dict[str, Callable[[], Any]] = {}

    def register_check(self, name: str, check_fn: Callable[[], Any]) -> None:
        """Register a check.

        Args:
            name: Check name (e.g. "obstruction_necessity")
            check_fn: Returns True if the check passes, or a tuple (bool, message)
        """
        self.checks[name] = check_fn
        logger.debug("Registered check: %s", name)

    def run_check(self, name: str, check_fn: Callable[[], Any]) -> CheckResult:
        """Run one check in its own span; exceptions become an ERROR result."""
        try:
            with trace_operation(f"check.{name}", tags={"battery": self.name}) as span:
                passed, message = _interpret(check_fn())
                span.set_tag("passed", passed)
        except Exception as exc:
            logger.exception("Check '%s' raised: %s", name, exc)
            passed, message = False, f"Exception: {type(exc).__name__}: {exc}"
            status = CheckStatus.ERROR
        else:
            status = CheckStatus.PASSED if passed else CheckStatus.FAILED
        emit_metric("check.latency_ms", span.duration_ms(), {"check": name})
        logger.debug("Check %s: %s (trace %s)", name, status.value, span.context.trace_id)
        return CheckResult(name=name, status=status, message=message)

    def run_all(self) -> BatteryReport:
        results = [self.run_check(name, fn) for name, fn in self.checks.items()]
        if any(r.status == CheckStatus.ERROR for r in results):
            overall = CheckStatus.ERROR
        elif any(r.status == CheckStatus.FAILED for r in results):
            overall = CheckStatus.FAILED
        else:
            overall = CheckStatus.PASSED
        logger.info("Battery %s: %s", self.name, overall.value)
        return BatteryReport(name=self.name, version=self.version, status=overall, checks=results)


# Acceptance checks


def check_obstruction_necessity(budget: int) -> CheckResultValue:
    xm = builtin_crossed_module("inversion")
    reduced = reduce(xm, choose_stick(xm))
    k_value = reduced.k_in_B(1, 1, 1)
    psi = psi_of(xm, make_cyclic(2), [0, 1])
    classes = classify(xm, psi)
    oracle = enumerate_extensions_bruteforce(xm, psi, budget=budget)
    passed = (
        k_value == 2
        and len(reduced.k.items()) == 1
        and not classes
        and oracle.candidates == 4
        and not oracle.classes
    )
    return passed, f"k(1,1,1) = {k_value}, classify {len(classes)}, oracle {len(oracle.classes)} of {oracle.candidates}"


def check_classification_sufficiency(budget: int, bound: int = MAX_AUTOMORPHISM_ORDER) -> CheckResultValue:
    xm = builtin_crossed_module("central-z2")
    z2 = make_cyclic(2)
    psi = psi_of(xm, z2, [0, 0])
    classes = classify(xm, psi)
    oracle = enumerate_extensions_bruteforce(xm, psi, budget=budget)
    targets = [make_cyclic(4), klein_group()]
    matched = all(any(is_isomorphic(ext.E, target, bound=bound) is not None for ext in classes) for target in targets)
    passed = len(classes) == 2 and matched and len(oracle.classes) == 2
    return passed, f"{len(classes)} classes (Z4 and V4 found: {matched}), oracle {len(oracle.classes)}"


def check_schreier_bijection(budget: int) -> CheckResultValue:
    mismatches = []
    instances = extension_instances()
    for xm, psi, expected in instances:
        report = schreier_check(xm, psi, budget=budget)
        if not report.agree or report.classified != expected:
            mismatches.append(report.render_text())
    if mismatches:
        return False, "; ".join(mismatches)
    return True, f"{len(instances)} instances agree"


def check_roundtrip(max_size: int, budget: int) -> CheckResultValue:
    battery = crossed_module_battery(max_size)
    failures = [xm.name for xm in battery if roundtrip_isomorphism(xm, max_size=max_size)[2] is None]
    pairs = [
        ("central-z2", "central-z2"),
        ("central-z2", "trivial"),
        ("trivial", "central-z2"),
        ("inversion", "inversion-trivial"),
        ("a3-in-s3", "a3-in-s3"),
        ("z2-on-klein", "z2-on-klein"),
    ]
    iso_failures = []
    for a, b in pairs:
        report = check_classification_iso(builtin_crossed_module(a), builtin_crossed_module(b), budget=budget)
        if not report.bijective:
            iso_failures.append(f"{a}->{b}")
    passed = len(battery) >= 20 and not failures and not iso_failures
    return passed, f"{len(battery) - len(failures)}/{len(battery)} round trips, correspondence failures {iso_failures}"


def check_cocycle_infrastructure(seed: int, samples: int = 1000) -> CheckResultValue:
    rng = np.random.default_rng(seed)
    z2, z3, z4 = make_cyclic(2), make_cyclic(3), make_cyclic(4)
    modules = [
        GModule.trivial(z2, z2),
        GModule.trivial(make_cyclic(3), z4),
        GModule.trivial(klein_group(), z2),
        GModule(z2, z4, [[0, 1, 2, 3], [0, 3, 2, 1]]),
        GModule(z2, klein_group(), [[0, 1, 2, 3], [0, 2, 1, 3]]),
        GModule(symmetric_group(3), z3, actions(symmetric_group(3), z3)[-1]),
    ]
    for i in range(samples):
        module = modules[i % len(modules)]
        degree = int(rng.integers(0, 3))
        c = random_cochain(module, degree, rng)
        if not coboundary(coboundary(c)).is_zero:
            return False, f"dd != 0 for a degree-{degree} cochain over {module!r}"

    battery = crossed_module_battery()
    for xm in battery:
        reduce(xm)
        stick_independence(xm, choose_stick(xm, 0), choose_stick(xm, seed + 1))
    return True, f"dd = 0 on {samples} cochains; k is a cocycle and stick-independent on {len(battery)} crossed modules"


def random_factor_set(rng: np.random.Generator) -> FactorSet:
    """A valid factor set over abelian B: phi an action and f a random 2-cocycle."""
    Q = [make_cyclic(3), make_cyclic(4), klein_group(), symmetric_group(3)][int(rng.integers(0, 4))]
    B = [make_cyclic(2), make_cyclic(3), make_cyclic(4), klein_group()][int(rng.integers(0, 4))]
    choices = actions(Q, B)
    module = GModule(Q, B, choices[int(rng.integers(0, len(choices)))])
    f = coboundary(random_cochain(module, 1, rng))
    for gen in cocycle_generators(module, 2):
        for _ in range(int(rng.integers(0, B.order))):
            f = f + gen
    return FactorSet(B, Q, module.action, f.full())


def corrupt(fs: FactorSet, rng: np.random.Generator) -> FactorSet:
    """Change f at one non-identity pair."""
    q = fs.Q.order
    u, v = (int(x) for x in rng.integers(1, q, size=2))
    f = fs.f.copy()
    f[u, v] = (f[u, v] + int(rng.integers(1, fs.B.order))) % fs.B.order
    return FactorSet(fs.B, fs.Q, fs.phi, f)


def check_factor_set_associativity(seed: int, samples: int = 100) -> CheckResultValue:
    rng = np.random.default_rng(seed)
    for i in range(samples):
        fs = random_factor_set(rng)
        if not fs.validate().is_valid or is_associative(crossed_product_table(fs)) is not None:
            return False, f"valid factor set #{i} gave a non-associative product"
        broken = corrupt(fs, rng)
        if is_associative(crossed_product_table(broken)) is None:
            return False, f"corruption #{i} kept the product associative"
        if "twisted_cocycle" not in broken.validate().rules():
            return False, f"corruption #{i} not reported as a cocycle failure"
    return True, f"{samples} valid and {samples} corrupted factor sets"


def check_cohomology_cross_validation(budget: int) -> CheckResultValue:
    compared = 0
    for n in range(2, 5):
        for m in range(2, 5):
            module = GModule.trivial(make_cyclic(n), make_cyclic(m))
            if h_order(module, 2) != math.gcd(n, m):
                return False, f"|H^2(Z{n}, Z{m})| != gcd"
            for degree in (2, 3):
                if m ** ((n - 1) ** degree) > budget:
                    continue
                if h_order(module, degree) != h_order_exhaustive(module, degree, budget=budget):
                    return False, f"|H^{degree}(Z{n}, Z{m})| disagrees with enumeration"
                compared += 1
    z2 = make_cyclic(2)
    fixed = [(GModule.trivial(z2, z2), 3, 2), (GModule.trivial(klein_group(), z2), 2, 8)]
    for module, degree, expected in fixed:
        if h_order(module, degree) != expected or h_order_exhaustive(module, degree, budget=budget) != expected:
            return False, f"|H^{degree}| of {module!r} is not {expected}"
    return True, f"{compared + len(fixed)} cohomology orders agree"


def build_acceptance_battery(settings: XmodkitSettings) -> TheoremChecker:
    checker = TheoremChecker("xmodkit acceptance", settings.version)
    budget, seed = settings.budget, settings.seed
    checker.register_check("obstruction_necessity", lambda: check_obstruction_necessity(budget))
    checker.register_check(
        "classification_sufficiency",
        lambda: check_classification_sufficiency(budget, settings.max_automorphism_order),
    )
    checker.register_check("schreier_bijection", lambda: check_schreier_bijection(budget))
    checker.register_check("roundtrip", lambda: check_roundtrip(settings.max_category_size, budget))
    checker.register_check("cocycle_infrastructure", lambda: check_cocycle_infrastructure(seed))
    checker.register_check("factor_set_associativity", lambda: check_factor_set_associativity(seed))
    checker.register_check("cohomology_cross_validation", lambda: check_cohomology_cross_validation(budget))
    return checker
