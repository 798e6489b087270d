"""
Brute-force cross-checks of the classification.

Nothing here uses cohomology: factor sets are enumerated directly,
equivalence classes come from an exhaustive search for alpha, and the
unreduced count enumerates normalized Gr-functors Dis Q -> P(xm) and
their homotopies. ``schreier_check`` compares these with the reduced
count and with ``classify``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .cohomology import h_order
from .config import DEFAULT_BUDGET
from .crossed import CrossedModule, derive
from .errors import BudgetExceeded, ExtensionError
from .extensions import (
    Extension,
    FactorSet,
    are_equivalent,
    classify,
    coefficient_module,
    extension_from_factor_set,
    validate_extension,
)
from .groups import FiniteGroup, GroupHom
from .observability import emit_metric
from .reduction import choose_stick, reduce, reduced_functor_classes
from .reports import OracleReport, SchreierReport

logger = logging.getLogger(__name__)

CHUNK = 4096


@dataclass
class OracleResult:
    """Every candidate factor set, the valid ones, and their partition into classes."""

    candidates: int
    constrained: int
    extensions: List[Extension] = field(default_factory=list)
    classes: List[List[int]] = field(default_factory=list)

    def report(self, xm: CrossedModule, psi: GroupHom) -> OracleReport:
        return OracleReport(
            subject=f"crossed module {xm.name}",
            psi=psi.images.tolist(),
            candidates=self.candidates,
            factor_sets=len(self.extensions),
            class_sizes=[len(c) for c in self.classes],
        )


def _combinations(choices: List[np.ndarray]) -> Iterator[np.ndarray]:
    """Chunks of rows of the cartesian product of the choice lists."""
    batch = []
    for combo in itertools.product(*choices):
        batch.append(combo)
        if len(batch) == CHUNK:
            yield np.array(batch, dtype=np.int64)
            batch = []
    if batch:
        yield np.array(batch, dtype=np.int64)


def enumerate_extensions_bruteforce(
    xm: CrossedModule,
    psi: GroupHom,
    *,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> OracleResult:
    """Enumerate factor sets with phi(u) = theta_{x_psi(u)} and sort them into classes.

    The candidate space is every f: Q^2 -> B normalized at 1 (|B|^((|Q|-1)^2)
    of them); entries are pruned to d(f(u,v)) = x_s x_r x_sr^-1 before
    enumeration, and the budget bounds the pruned count.

    Raises:
        BudgetExceeded: If the pruned candidate count exceeds the budget
    """
    stick = choose_stick(xm, seed)
    derived = derive(xm)
    B, D, Q = xm.B, xm.D, psi.source
    q = Q.order
    reps = np.array(stick.reps)
    x = reps[psi.images]
    phi = xm.theta[x]

    pairs = [(u, v) for u in range(1, q) for v in range(1, q)]
    choices = []
    for u, v in pairs:
        needed = D.mul(D.mul(int(x[u]), int(x[v])), D.inv(int(x[Q.mul(u, v)])))
        choices.append(np.flatnonzero(xm.d.images == needed))
    candidates = B.order ** len(pairs)
    constrained = derived.ker_d.order ** len(pairs)
    if constrained > budget:
        raise BudgetExceeded(f"{constrained} constrained factor sets exceed the budget {budget}")
    logger.info("Oracle for %s: %d candidates, %d after the d constraint", xm.name, candidates, constrained)

    Bt, Qt = B.table, Q.table
    U, V, T = np.indices((q, q, q))
    U2, V2 = np.indices((q, q))
    result = OracleResult(candidates, constrained)
    for chunk in _combinations(choices):
        f = np.zeros((len(chunk), q, q), dtype=np.int64)
        f[:, 1:, 1:] = chunk.reshape(len(chunk), q - 1, q - 1)
        lhs = Bt[phi[U, f[:, V, T]], f[:, U, Qt[V, T]]]
        rhs = Bt[f[:, U, V], f[:, Qt[U, V], T]]
        cocycle = (lhs == rhs).reshape(len(chunk), -1).all(axis=1)
        fuv = f[:, U2, V2]
        composed = phi[U2[:, :, None], phi[V2]]
        conjugated = Bt[Bt[fuv[..., None], phi[Qt[U2, V2]][None]], B.inverse[fuv][..., None]]
        conj_ok = (conjugated == composed[None]).reshape(len(chunk), -1).all(axis=1)
        for row in np.flatnonzero(cocycle & conj_ok):
            fs = FactorSet(B, Q, phi, f[row])
            ext = extension_from_factor_set(xm, psi, stick, fs, f"F{len(result.extensions)}")
            report = validate_extension(ext)
            if not report.is_valid:
                logger.error("Crossed product of a valid factor set is not an extension: %s", report.rules())
                report.raise_for_violations(ExtensionError)
            result.extensions.append(ext)

    for i, ext in enumerate(result.extensions):
        for members in result.classes:
            if are_equivalent(result.extensions[members[0]], ext, method="exhaustive", budget=budget) is not None:
                members.append(i)
                break
        else:
            result.classes.append([i])
    logger.info("Oracle for %s: %d factor sets in %d classes", xm.name, len(result.extensions), len(result.classes))
    emit_metric("oracle.constrained", constrained)
    emit_metric("oracle.classes", len(result.classes))
    return result


# Normalized Gr-functors Dis Q -> P(xm) of type (psi, 0)


@dataclass(frozen=True)
class _UnreducedFunctor:
    objects: Tuple[int, ...]
    structure: np.ndarray


def _unreduced_functors(xm: CrossedModule, psi: GroupHom, budget: int) -> List[_UnreducedFunctor]:
    derived = derive(xm)
    D, Q = xm.D, psi.source
    q = Q.order
    fibers = [derived.coker.members(int(psi(u))) for u in range(1, q)]
    object_count = int(np.prod([len(f) for f in fibers])) if fibers else 1
    total = object_count * derived.ker_d.order ** ((q - 1) ** 2)
    if total > budget:
        raise BudgetExceeded(f"{total} unreduced functor candidates exceed the budget {budget}")

    found = []
    for tail in itertools.product(*fibers):
        F = np.array((0,) + tail, dtype=np.int64)
        choices = []
        for u in range(1, q):
            for v in range(1, q):
                needed = D.mul(D.mul(int(F[u]), int(F[v])), D.inv(int(F[Q.mul(u, v)])))
                choices.append(np.flatnonzero(xm.d.images == needed).tolist())
        for combo in itertools.product(*choices):
            s = np.zeros((q, q), dtype=np.int64)
            s[1:, 1:] = np.array(combo, dtype=np.int64).reshape(q - 1, q - 1)
            if _coherent(xm, Q, F, s):
                found.append(_UnreducedFunctor(tuple(int(v) for v in F), s))
    return found


def _coherent(xm: CrossedModule, Q: FiniteGroup, F: np.ndarray, s: np.ndarray) -> bool:
    """s(u,v) + s(uv,w) = theta_{F(u)}(s(v,w)) + s(u,vw)."""
    Bt, Qt = xm.B.table, Q.table
    q = Q.order
    U, V, W = np.indices((q, q, q))
    lhs = Bt[s[U, V], s[Qt[U, V], W]]
    rhs = Bt[xm.theta[F[U], s[V, W]], s[U, Qt[V, W]]]
    return bool(np.array_equal(lhs, rhs))


def _homotopic(xm: CrossedModule, Q: FiniteGroup, F: _UnreducedFunctor, G: _UnreducedFunctor) -> bool:
    """Some a with F(u) = d(a_u) G(u) and s_F(u,v) + a_uv = a_u + theta_{G(u)}(a_v) + s_G(u,v)."""
    B, D = xm.B, xm.D
    q = Q.order
    choices = []
    for u in range(1, q):
        needed = D.mul(F.objects[u], D.inv(G.objects[u]))
        candidates = np.flatnonzero(xm.d.images == needed).tolist()
        if not candidates:
            return False
        choices.append(candidates)
    Gobj = np.array(G.objects)
    U, V = np.indices((q, q))
    for tail in itertools.product(*choices):
        a = np.array((0,) + tail, dtype=np.int64)
        lhs = B.table[F.structure, a[Q.table[U, V]]]
        rhs = B.table[B.table[a[U], xm.theta[Gobj[U], a[V]]], G.structure]
        if np.array_equal(lhs, rhs):
            return True
    return False


def count_unreduced_functor_classes(xm: CrossedModule, psi: GroupHom, *, budget: int = DEFAULT_BUDGET) -> int:
    """Homotopy classes of normalized Gr-functors Dis Q -> P(xm) of type (psi, 0), by enumeration."""
    Q = psi.source
    reps: List[_UnreducedFunctor] = []
    for F in _unreduced_functors(xm, psi, budget):
        if not any(_homotopic(xm, Q, F, G) for G in reps):
            reps.append(F)
    return len(reps)


def schreier_check(
    xm: CrossedModule,
    psi: GroupHom,
    *,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    slow: bool = False,
) -> SchreierReport:
    """Compare reduced functor classes, ``classify`` and the brute-force oracle.

    With ``slow`` the unreduced functor count joins the comparison.
    """
    stick = choose_stick(xm, seed)
    functor_classes = len(reduced_functor_classes(reduce(xm, stick), psi))
    classified = len(classify(xm, psi, seed=seed))
    oracle = enumerate_extensions_bruteforce(xm, psi, budget=budget, seed=seed)
    unreduced: Optional[int] = count_unreduced_functor_classes(xm, psi, budget=budget) if slow else None
    report = SchreierReport(
        subject=f"crossed module {xm.name}",
        psi=psi.images.tolist(),
        h2_order=h_order(coefficient_module(xm, psi, stick), 2),
        functor_classes=functor_classes,
        classified=classified,
        oracle_classes=len(oracle.classes),
        unreduced_classes=unreduced,
    )
    if not report.agree:
        logger.error("Class counts disagree for %s: %s", xm.name, report.render_text())
    return report
