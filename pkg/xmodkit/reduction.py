"""
Sticks, reduction of a crossed module to (Coker d, Ker d, k), and the
obstruction theory of reduced Gr-functors.

A stick picks a representative x_s in D for every coset s of Im d
(x_1 = 1) and for every x in D an element i_x of B with d(i_x) x = x_s.
From it:

    c(s, r)    = -i_{x_s x_r}                       so d(c(s, r)) = x_s x_r x_sr^-1
    k(s, r, t) = theta_{x_s}(c(r, t)) + c(s, rt) - c(sr, t) - c(s, r)

evaluated in B in the order written; k lands in Ker d and is a 3-cocycle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cohomology import (
    Cochain,
    GModule,
    are_cohomologous,
    coboundary,
    h2_representatives,
    is_cocycle,
    pullback_cochain,
    pullback_module,
    pushforward_cochain,
    solve_coboundary,
)
from .crossed import CrossedModule, DerivedData, derive
from .errors import InputError, ReductionError
from .grcat import GrFunctor, action_from_category, from_crossed_module
from .groups import FiniteGroup, GroupHom, trivial_group
from .records import ReducedRecord

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Stick:
    """Coset representatives x_s and connecting elements i_x."""

    xm: CrossedModule
    reps: Tuple[int, ...]
    connecting: Tuple[int, ...]
    seed: int = 0

    def rep(self, s: int) -> int:
        return self.reps[s]

    def i(self, x: int) -> int:
        return self.connecting[x]

    def c(self, s: int, r: int) -> int:
        """-i_{x_s x_r}."""
        D, B = self.xm.D, self.xm.B
        return B.inv(self.connecting[D.mul(self.reps[s], self.reps[r])])


def _preimages(xm: CrossedModule) -> Dict[int, List[int]]:
    by_image: Dict[int, List[int]] = {}
    for b in xm.B.elements:
        by_image.setdefault(xm.d(b), []).append(b)
    return by_image


def validate_stick(stick: Stick, derived: DerivedData) -> None:
    """Raises ReductionError unless x_1 = 1, i_{x_s} = 0 and d(i_x) x = x_s."""
    xm = stick.xm
    D = xm.D
    proj = derived.coker.projection
    if len(stick.reps) != derived.coker_group.order or stick.reps[0] != 0:
        raise ReductionError("stick must have one representative per coset with x_1 = 1")
    for s, x in enumerate(stick.reps):
        if proj(x) != s:
            raise ReductionError(f"representative {x} is not in coset {s}", witness={"s": s, "x": x})
        if stick.connecting[x] != 0:
            raise ReductionError(f"i at the representative {x} must be 0", witness={"x": x})
    for x in D.elements:
        if D.mul(xm.d(stick.connecting[x]), x) != stick.reps[proj(x)]:
            raise ReductionError(f"d(i_{x}) * {x} is not the representative of its coset", witness={"x": x})


def make_stick(xm: CrossedModule, reps: Sequence[int], connecting: Sequence[int], seed: int = 0) -> Stick:
    stick = Stick(xm, tuple(int(r) for r in reps), tuple(int(i) for i in connecting), seed)
    validate_stick(stick, derive(xm))
    return stick


def choose_stick(xm: CrossedModule, seed: int = 0, derived: Optional[DerivedData] = None) -> Stick:
    """A stick, deterministic in seed.

    Seed 0 takes the smallest member of each coset and the smallest
    admissible i_x; other seeds draw them with ``np.random.default_rng(seed)``.
    """
    if seed < 0:
        raise InputError(f"stick seed must be non-negative, got {seed}")
    derived = derived or derive(xm)
    coker = derived.coker
    D = xm.D
    preimages = _preimages(xm)
    rng = np.random.default_rng(seed) if seed else None

    reps = [0]
    for s in range(1, coker.group.order):
        members = coker.members(s)
        reps.append(int(rng.choice(members)) if rng is not None else members[0])

    connecting = []
    for x in D.elements:
        x_s = reps[coker.coset_of(x)]
        if x == x_s:
            connecting.append(0)
            continue
        candidates = preimages[D.mul(x_s, D.inv(x))]
        connecting.append(int(rng.choice(candidates)) if rng is not None else candidates[0])

    stick = Stick(xm, tuple(reps), tuple(connecting), seed)
    validate_stick(stick, derived)
    logger.debug("Stick for %s (seed %d): reps %s", xm.name, seed, reps)
    return stick


@dataclass(frozen=True)
class ReducedGrCat:
    """A reduced Gr-category of type (pi0, pi1, k).

    ``inclusion`` maps pi1 into B when the category comes from a crossed module.
    """

    pi1: GModule
    k: Cochain
    inclusion: Optional[GroupHom] = None

    @property
    def pi0(self) -> FiniteGroup:
        return self.pi1.Q

    def k_in_B(self, s: int, r: int, t: int) -> int:
        if self.inclusion is None:
            raise ReductionError("reduced category carries no inclusion into B")
        return self.inclusion(self.k(s, r, t))

    def to_record(self) -> ReducedRecord:
        return ReducedRecord(pi0=self.pi0.to_record(), pi1=self.pi1.to_record(), k=self.k.to_record())

    @classmethod
    def from_record(cls, record: ReducedRecord) -> ReducedGrCat:
        pi1 = GModule.from_record(record.pi1)
        if pi1.Q != FiniteGroup.from_record(record.pi0):
            raise ReductionError("pi1 is not a module over pi0")
        k = Cochain.from_record(pi1, record.k)
        if k.degree != 3 or not is_cocycle(k):
            raise ReductionError("k must be a 3-cocycle")
        return cls(pi1, k)


def reduced_module(xm: CrossedModule, stick: Stick) -> Tuple[DerivedData, GModule]:
    derived = derive(xm, section=stick.reps)
    return derived, GModule(derived.coker_group, derived.kernel_group, derived.phi, f"Ker({xm.name})")


def reduce(xm: CrossedModule, stick: Optional[Stick] = None) -> ReducedGrCat:
    """The reduced Gr-category (Coker d, Ker d, k) of xm along a stick.

    Raises:
        ReductionError: If k leaves Ker d, is not normalized, or is not a cocycle
    """
    stick = stick or choose_stick(xm)
    derived, pi1 = reduced_module(xm, stick)
    B = xm.B
    Q = derived.coker_group
    position = {b: i for i, b in enumerate(derived.ker_d.elements)}

    def k_value(s: int, r: int, t: int) -> int:
        value = B.product(
            xm.act(stick.reps[s], stick.c(r, t)),
            stick.c(s, Q.mul(r, t)),
            B.inv(stick.c(Q.mul(s, r), t)),
            B.inv(stick.c(s, r)),
        )
        if value not in position:
            logger.error("k(%d, %d, %d) = %d is outside Ker d for %s", s, r, t, value, xm.name)
            raise ReductionError(f"k({s}, {r}, {t}) = {value} is not in Ker d", witness={"triple": [s, r, t]})
        return position[value]

    for s in Q.elements:
        for r in Q.elements:
            if k_value(0, s, r) or k_value(s, 0, r) or k_value(s, r, 0):
                raise ReductionError(f"k is not normalized at ({s}, {r})", witness={"pair": [s, r]})

    k = Cochain.from_function(pi1, 3, k_value)
    if not is_cocycle(k):
        bad = coboundary(k).items()
        logger.error("k fails the cocycle identity for %s: %s", xm.name, bad)
        raise ReductionError("k is not a 3-cocycle", witness={"tuples": [list(t) for t in bad]})
    return ReducedGrCat(pi1, k, derived.kernel_inclusion)


def stick_independence(xm: CrossedModule, stick1: Stick, stick2: Stick) -> Cochain:
    """g with dg = k1 - k2 for the reductions along two sticks.

    Raises:
        ReductionError: If no such g exists
    """
    k1, k2 = reduce(xm, stick1).k, reduce(xm, stick2).k
    g = are_cohomologous(k1, k2)
    if g is None:
        logger.error("Reductions of %s along two sticks are not cohomologous", xm.name)
        raise ReductionError(f"k depends on the stick for {xm.name}", witness={"k1": k1.items(), "k2": k2.items()})
    return g


def strict_action_collapse(xm: CrossedModule, stick: Stick) -> bool:
    """True when the categorical action gamma^-1 delta equals the derived phi."""
    P = from_crossed_module(xm)
    derived = derive(xm, section=stick.reps)
    return bool(np.array_equal(action_from_category(P, stick.reps), derived.phi))


def reduced_functor_type(F: GrFunctor) -> Tuple[GroupHom, GroupHom]:
    """(phi, f): the maps F induces on pi0 = Coker d and pi1 = Ker d.

    Raises:
        ReductionError: If the categories carry no crossed modules or f is not equivariant
    """
    if F.source.xm is None or F.target.xm is None:
        raise ReductionError("functor categories carry no crossed modules")
    src, tgt = derive(F.source.xm), derive(F.target.xm)
    phi_images = [tgt.coker.coset_of(F.f0(x)) for x in src.coker.section]
    phi = GroupHom(src.coker_group, tgt.coker_group, phi_images)

    position = {b: i for i, b in enumerate(tgt.ker_d.elements)}
    f_images = []
    for b in src.ker_d.elements:
        image = F.f1(b)
        if image not in position:
            raise ReductionError(f"f1 maps {b} in Ker d outside Ker d'", witness={"b": b})
        f_images.append(position[image])
    f = GroupHom(src.kernel_group, tgt.kernel_group, f_images)

    lhs = f.images[src.phi]  # f(s.a)
    rhs = tgt.phi[phi.images][:, f.images]  # phi(s).f(a)
    if not np.array_equal(lhs, rhs):
        s, a = (int(v) for v in np.argwhere(lhs != rhs)[0])
        raise ReductionError(f"f is not equivariant at ({s}, {a})", witness={"s": s, "a": a})
    return phi, f


def functor_obstruction(phi: GroupHom, f: GroupHom, k: Cochain, k2: Cochain) -> Cochain:
    """xi = phi*k' - f*k, a 3-cocycle over pi0 with coefficients in pi1' through phi.

    Raises:
        ReductionError: If the maps do not match the modules or xi is not a cocycle
    """
    if phi.source != k.module.Q or phi.target != k2.module.Q:
        raise ReductionError("phi does not map pi0 to pi0'")
    if f.source != k.module.A or f.target != k2.module.A:
        raise ReductionError("f does not map pi1 to pi1'")
    module = pullback_module(k2.module, phi)
    xi = pullback_cochain(k2, phi, module) - pushforward_cochain(k, f, module)
    if not is_cocycle(xi):
        raise ReductionError("obstruction is not a cocycle", witness=coboundary(xi).items())
    return xi


@dataclass(frozen=True)
class ReducedGrFunctor:
    """A reduced Gr-functor of type (phi, f) with monoidal structure g."""

    phi: GroupHom
    f: GroupHom
    g: Cochain


def realize_functor(phi: GroupHom, f: GroupHom, g: Cochain, k: Cochain, k2: Cochain) -> ReducedGrFunctor:
    """The reduced Gr-functor (phi, f, g), provided dg is the obstruction.

    Raises:
        ReductionError: If dg != phi*k' - f*k
    """
    xi = functor_obstruction(phi, f, k, k2)
    if g.module != xi.module or g.degree != 2 or coboundary(g) != xi:
        raise ReductionError("dg does not equal the obstruction", witness={"xi": xi.items()})
    return ReducedGrFunctor(phi, f, g)


def reduced_functors_homotopic(F: ReducedGrFunctor, G: ReducedGrFunctor) -> Optional[Cochain]:
    """A homotopy alpha with d(alpha) = g_F - g_G, when F and G share (phi, f)."""
    if F.phi != G.phi or F.f != G.f:
        return None
    return are_cohomologous(F.g, G.g)


def discrete_reduced(Q: FiniteGroup) -> ReducedGrCat:
    """Dis Q, of type (Q, 0, 0)."""
    module = GModule.trivial(Q, trivial_group(), "0")
    return ReducedGrCat(module, Cochain.zero(module, 3))


def reduced_functor_classes(reduced: ReducedGrCat, psi: GroupHom) -> List[ReducedGrFunctor]:
    """One reduced Gr-functor Dis Q -> reduced per homotopy class of type (psi, 0).

    Empty when the obstruction psi*k is not a coboundary; otherwise the
    solutions g0 + z for z running over H^2 representatives.
    """
    source = discrete_reduced(psi.source)
    zero = GroupHom(source.pi1.A, reduced.pi1.A, [0], check=False)
    xi = functor_obstruction(psi, zero, source.k, reduced.k)
    g0 = solve_coboundary(xi)
    if g0 is None:
        return []
    functors = [realize_functor(psi, zero, g0 + z, source.k, reduced.k) for z in h2_representatives(xi.module)]
    for i, F in enumerate(functors):
        for G in functors[:i]:
            if reduced_functors_homotopic(F, G) is not None:
                raise ReductionError("two H^2 representatives gave homotopic functors")
    return functors


def functor_class_count(xm: CrossedModule, psi: GroupHom, stick: Optional[Stick] = None) -> int:
    """Homotopy classes of Gr-functors Dis Q -> S_P(xm) of type (psi, 0)."""
    return len(reduced_functor_classes(reduce(xm, stick), psi))
