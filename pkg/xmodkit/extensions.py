"""
Extensions of type a crossed module, factor sets and the classification.

An extension of B by Q of type (B, D, d, theta) is an exact sequence
0 -> B -j-> E -p-> Q -> 1 with eps: E -> D such that (id, eps) is a
morphism from the conjugation crossed module (B, E, j) to (B, D, d, theta).

Elements of a crossed product B x^f Q are indexed b + |B| u.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cohomology import Cochain, GModule, h2_representatives, h_order, pullback_cochain, pullback_module, solve_coboundary
from .config import DEFAULT_BUDGET, MAX_GROUP_ORDER
from .crossed import CrossedModule, DerivedData, derive, validate
from .errors import BudgetExceeded, ExtensionError, FactorSetError, InputError
from .groups import FiniteGroup, GroupHom
from .records import CochainRecord, ExtensionRecord, PsiRecord, format_key
from .reduction import Stick, choose_stick, reduce, reduced_module
from .reports import ClassificationReport, ExtensionSummary, ObstructionReport, ValidationReport

logger = logging.getLogger(__name__)


# Homomorphisms into the cokernel


def psi_from_record(
    xm: CrossedModule,
    record: PsiRecord,
    derived: Optional[DerivedData] = None,
    *,
    max_order: int = MAX_GROUP_ORDER,
) -> GroupHom:
    """psi: Q -> Coker d from its document form.

    Raises:
        InputError: If the images do not define a homomorphism
    """
    derived = derived or derive(xm)
    return GroupHom(FiniteGroup.from_record(record.Q, max_order=max_order), derived.coker_group, record.images)


def psi_to_record(psi: GroupHom) -> PsiRecord:
    return PsiRecord(Q=psi.source.to_record(), images=psi.images.tolist())


def coefficient_module(xm: CrossedModule, psi: GroupHom, stick: Optional[Stick] = None) -> GModule:
    """Ker d as a Q-module through psi."""
    stick = stick or choose_stick(xm)
    _, pi1 = reduced_module(xm, stick)
    if psi.target != pi1.Q:
        raise InputError("psi does not land in Coker d")
    return pullback_module(pi1, psi, f"Ker({xm.name}) via psi")


def obstruction(xm: CrossedModule, psi: GroupHom, stick: Optional[Stick] = None) -> Cochain:
    """psi*k, the obstruction to extensions inducing psi."""
    stick = stick or choose_stick(xm)
    reduced = reduce(xm, stick)
    if psi.target != reduced.pi0:
        raise InputError("psi does not land in Coker d")
    return pullback_cochain(reduced.k, psi, pullback_module(reduced.pi1, psi))


def obstruction_report(xm: CrossedModule, psi: GroupHom, seed: int = 0) -> ObstructionReport:
    xi = obstruction(xm, psi, choose_stick(xm, seed))
    return ObstructionReport(
        subject=f"crossed module {xm.name}",
        psi=psi.images.tolist(),
        obstruction=xi.to_record(),
        class_zero=solve_coboundary(xi) is not None,
        h3_order=h_order(xi.module, 3),
    )


# Factor sets and crossed products


class FactorSet:
    """(phi, f) on Q with values in B.

    ``phi[u]`` is the automorphism table of phi(u) and ``f[u, v]`` the
    element f(u, v) of B.
    """

    def __init__(self, B: FiniteGroup, Q: FiniteGroup, phi: np.ndarray | Sequence, f: np.ndarray | Sequence) -> None:
        phi_arr = np.array(phi, dtype=np.int64)
        f_arr = np.array(f, dtype=np.int64)
        if phi_arr.shape != (Q.order, B.order) or f_arr.shape != (Q.order, Q.order):
            raise FactorSetError("phi must be |Q| x |B| and f must be |Q| x |Q|")
        if ((phi_arr < 0) | (phi_arr >= B.order)).any() or ((f_arr < 0) | (f_arr >= B.order)).any():
            raise FactorSetError("factor set takes values outside B")
        phi_arr.flags.writeable = False
        f_arr.flags.writeable = False
        self.B = B
        self.Q = Q
        self.phi = phi_arr
        self.f = f_arr

    def validate(self) -> ValidationReport:
        """Normalization, phi(u) in Aut B and the two compatibility conditions.

        ``twisted_cocycle``: phi(u)(f(v,t)) + f(u,vt) = f(u,v) + f(uv,t).
        ``conjugation``: phi(u) phi(v) = mu[f(u,v)] phi(uv).
        """
        report = ValidationReport(subject="factor set")
        B, Q, phi, f = self.B, self.Q, self.phi, self.f
        Bt, Qt, Binv = B.table, Q.table, B.inverse
        q = Q.order

        if f[0].any() or f[:, 0].any() or not np.array_equal(phi[0], np.arange(B.order)):
            report.add("normalization", "f(1, u), f(u, 1) must be 0 and phi(1) the identity")

        for u in Q.elements:
            row = phi[u]
            if len(np.unique(row)) != B.order or (row[Bt] != Bt[row[:, None], row[None, :]]).any():
                report.add("phi_automorphism", f"phi({u}) is not an automorphism of B", u=u)

        U, V, T = np.indices((q, q, q))
        lhs = Bt[phi[U, f[V, T]], f[U, Qt[V, T]]]
        rhs = Bt[f[U, V], f[Qt[U, V], T]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            u, v, t = (int(x) for x in bad[0])
            report.add("twisted_cocycle", f"fails at ({u}, {v}, {t})", triple=[u, v, t], count=len(bad))

        U2, V2 = np.indices((q, q))
        composed = phi[U2[:, :, None], phi[V2]]
        fuv = f[U2, V2]
        conjugated = Bt[Bt[fuv[:, :, None], phi[Qt[U2, V2]]], Binv[fuv][:, :, None]]
        bad = np.argwhere(composed != conjugated)
        if len(bad):
            u, v, b = (int(x) for x in bad[0])
            report.add("conjugation", f"phi({u})phi({v}) != mu[f({u},{v})]phi({u}{v}) at {b}", pair=[u, v], b=b)
        return report

    def to_record(self) -> CochainRecord:
        """f as a sparse degree-2 record with values in B."""
        q = self.Q.order
        items = {format_key((u, v)): int(self.f[u, v]) for u in range(1, q) for v in range(1, q) if self.f[u, v]}
        return CochainRecord(degree=2, values=items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FactorSet):
            return NotImplemented
        return (
            self.B == other.B
            and self.Q == other.Q
            and bool(np.array_equal(self.phi, other.phi))
            and bool(np.array_equal(self.f, other.f))
        )

    def __hash__(self) -> int:
        return hash((self.phi.tobytes(), self.f.tobytes()))


def crossed_product_table(fs: FactorSet) -> np.ndarray:
    """(b, u)(b', u') = (b + phi(u)b' + f(u, u'), uu'), with no checks."""
    B, Q = fs.B, fs.Q
    n = B.order * Q.order
    idx = np.arange(n)
    b, u = idx % B.order, idx // B.order
    new_b = B.table[B.table[b[:, None], fs.phi[u[:, None], b[None, :]]], fs.f[u[:, None], u[None, :]]]
    new_u = Q.table[u[:, None], u[None, :]]
    return new_b + B.order * new_u


@dataclass(frozen=True)
class CrossedProduct:
    group: FiniteGroup
    j: GroupHom
    p: GroupHom
    factor_set: FactorSet


def crossed_product(fs: FactorSet, name: str = "E", *, max_order: int = MAX_GROUP_ORDER) -> CrossedProduct:
    """The group B x^f Q with its inclusion of B and projection to Q.

    Raises:
        FactorSetError: If the factor set violates a rule; the witness names the tuple
    """
    report = fs.validate()
    if not report.is_valid:
        logger.debug("Rejected factor set: %s", report.rules())
    report.raise_for_violations(FactorSetError)
    nB = fs.B.order
    E = FiniteGroup(crossed_product_table(fs), name, max_order=max(max_order, nB * fs.Q.order), check=False)
    j = GroupHom(fs.B, E, np.arange(nB), check=False)
    p = GroupHom(E, fs.Q, np.arange(E.order) // nB, check=False)
    return CrossedProduct(E, j, p, fs)


def crossed_product_inverse(fs: FactorSet, b: int, u: int) -> Tuple[int, int]:
    """(b, u)^-1 = (c, u^-1) with phi(u)c = -b - f(u, u^-1)."""
    B, Q = fs.B, fs.Q
    u_inv = Q.inv(u)
    rhs = B.mul(B.inv(b), B.inv(int(fs.f[u, u_inv])))
    phi_inv = np.argsort(fs.phi[u])
    return int(phi_inv[rhs]), u_inv


# Extensions


class Extension:
    """An extension (E, j, p, eps) of B by Q of the type of xm."""

    def __init__(
        self,
        xm: CrossedModule,
        Q: FiniteGroup,
        E: FiniteGroup,
        j: GroupHom,
        p: GroupHom,
        eps: GroupHom,
        factor_set: Optional[FactorSet] = None,
    ) -> None:
        if j.source != xm.B or j.target != E:
            raise InputError("j must map B into E")
        if p.source != E or p.target != Q:
            raise InputError("p must map E onto Q")
        if eps.source != E or eps.target != xm.D:
            raise InputError("eps must map E into D")
        self.xm = xm
        self.Q = Q
        self.E = E
        self.j = j
        self.p = p
        self.eps = eps
        self.factor_set = factor_set

    @property
    def order(self) -> int:
        return self.E.order

    def conjugation_action(self) -> Optional[np.ndarray]:
        """theta'[e, b] = j^-1(e j(b) e^-1), or None when Im j is not normal or j not injective."""
        if not self.j.is_injective():
            return None
        position = np.full(self.E.order, -1, dtype=np.int64)
        position[self.j.images] = np.arange(self.xm.B.order)
        E = self.E
        conj = E.table[E.table[:, self.j.images], E.inverse[:, None]]
        action = position[conj]
        return None if (action < 0).any() else action

    def summary(self) -> ExtensionSummary:
        return ExtensionSummary(
            record=self.to_record(),
            order=self.E.order,
            element_orders=sorted(self.E.element_orders.tolist()),
            abelian=self.E.is_abelian,
        )

    def to_record(self) -> ExtensionRecord:
        fs = self.factor_set.to_record() if self.factor_set is not None else None
        return ExtensionRecord(
            E=self.E.to_record(),
            Q=self.Q.to_record(),
            j=self.j.images.tolist(),
            p=self.p.images.tolist(),
            eps=self.eps.images.tolist(),
            factor_set=fs,
        )

    @classmethod
    def from_record(cls, xm: CrossedModule, record: ExtensionRecord) -> Extension:
        E = FiniteGroup.from_record(record.E)
        Q = FiniteGroup.from_record(record.Q)
        return cls(xm, Q, E, GroupHom(xm.B, E, record.j), GroupHom(E, Q, record.p), GroupHom(E, xm.D, record.eps))

    def __repr__(self) -> str:
        return f"Extension({self.xm.name}, |E|={self.E.order}, |Q|={self.Q.order})"


def conjugation_crossed_module(ext: Extension) -> Optional[CrossedModule]:
    """(B, E, j, conjugation), or None when j(B) is not a normal subgroup isomorphic to B."""
    action = ext.conjugation_action()
    if action is None:
        return None
    return CrossedModule(ext.xm.B, ext.E, ext.j, action, f"conj({ext.xm.name})")


def validate_extension(ext: Extension) -> ValidationReport:
    """Exactness, the conjugation crossed module, the morphism (id, eps) and a well-defined psi."""
    report = ValidationReport(subject=f"extension {ext!r}")
    xm = ext.xm

    if not ext.j.is_injective():
        images = ext.j.images.tolist()
        b = next(i for i, x in enumerate(images) if images.index(x) != i)
        report.add("j_injective", f"j identifies {images.index(images[b])} and {b}", b=b)
    missing = sorted(set(ext.Q.elements) - set(ext.p.images.tolist()))
    if missing:
        report.add("p_surjective", f"{missing[0]} is not in the image of p", u=missing[0])
    im_j = set(ext.j.images.tolist())
    ker_p = set(np.flatnonzero(ext.p.images == 0).tolist())
    if im_j != ker_p:
        e = min(im_j ^ ker_p)
        report.add("exactness", f"Im j != Ker p (differ at {e})", e=e)

    conj = conjugation_crossed_module(ext)
    if conj is None:
        if ext.j.is_injective():
            report.add("normal_image", "j(B) is not normal in E")
    else:
        action = conj.theta
        for v in validate(conj).violations:
            report.add(f"conjugation_{v.rule}", v.message, **v.witness)
        bad = np.flatnonzero(ext.eps.images[ext.j.images] != xm.d.images)
        if len(bad):
            report.add("eps_d", f"eps(j({int(bad[0])})) != d({int(bad[0])})", b=int(bad[0]))
        moved = xm.theta[ext.eps.images]
        bad = np.argwhere(moved != action)
        if len(bad):
            e, b = (int(x) for x in bad[0])
            report.add("eps_operator", f"theta_eps({e})({b}) != j^-1({e} j({b}) {e}^-1)", e=e, b=b)

    if not missing:
        coset = derive(xm).coker.projection.images[ext.eps.images]
        for u in ext.Q.elements:
            values = np.unique(coset[ext.p.images == u])
            if len(values) > 1:
                report.add("psi_well_defined", f"eps sends the fiber over {u} to several cosets", u=u)
                break
    return report


def induced_psi(ext: Extension) -> GroupHom:
    """psi(u) = [eps(e)] for any e over u.

    Raises:
        ExtensionError: If the fibers of p do not map to single cosets
    """
    derived = derive(ext.xm)
    coset = derived.coker.projection.images[ext.eps.images]
    images = []
    for u in ext.Q.elements:
        values = np.unique(coset[ext.p.images == u])
        if len(values) != 1:
            raise ExtensionError(f"no well-defined psi at {u}", witness={"u": u})
        images.append(int(values[0]))
    return GroupHom(ext.Q, derived.coker_group, images)


def extension_from_factor_set(xm: CrossedModule, psi: GroupHom, stick: Stick, fs: FactorSet, name: str = "E") -> Extension:
    """B x^f Q with eps(b, u) = d(b) x_psi(u)."""
    product = crossed_product(fs, name)
    nB = xm.B.order
    idx = np.arange(product.group.order)
    reps = np.array(stick.reps)
    eps = xm.D.table[xm.d.images[idx % nB], reps[psi.images[idx // nB]]]
    return Extension(xm, psi.source, product.group, product.j, product.p, GroupHom(product.group, xm.D, eps, check=False), fs)


def extension_from_functor(xm: CrossedModule, psi: GroupHom, stick: Stick, h: Cochain, name: str = "E") -> Extension:
    """The crossed product with phi(u) = theta_{x_psi(u)} and f(u, v) = h(u, v) + c(psi u, psi v).

    h is a 2-cochain in Ker d with dh = -psi*k.

    Raises:
        ExtensionError: If the factor set or the resulting extension is invalid
    """
    derived = derive(xm, section=stick.reps)
    if h.module.Q != psi.source or h.module.A != derived.kernel_group or h.degree != 2:
        raise ExtensionError("h must be a 2-cochain on Q with values in Ker d")
    B = xm.B
    full = derived.kernel_inclusion.images[h.full()]
    q = psi.source.order
    f = np.array(
        [[B.mul(int(full[u, v]), stick.c(psi(u), psi(v))) for v in range(q)] for u in range(q)],
        dtype=np.int64,
    )
    phi = xm.theta[np.array(stick.reps)[psi.images]]
    fs = FactorSet(B, psi.source, phi, f)
    try:
        ext = extension_from_factor_set(xm, psi, stick, fs, name)
    except FactorSetError as exc:
        logger.error("h does not give a factor set for %s: %s", xm.name, exc)
        raise ExtensionError(f"h does not give a factor set: {exc}", witness=exc.witness) from exc
    validate_extension(ext).raise_for_violations(ExtensionError)
    if induced_psi(ext) != psi:
        raise ExtensionError("constructed extension induces a different psi")
    return ext


# Equivalence


@dataclass(frozen=True)
class NormalForm:
    """Lifts e_u with p(e_u) = u and eps(e_u) = x_psi(u), and the factor set they define."""

    lifts: Tuple[int, ...]
    f: np.ndarray
    j_inverse: np.ndarray


def normal_form(ext: Extension, stick: Stick, psi: Optional[GroupHom] = None) -> NormalForm:
    """Raises ExtensionError if some fiber has no element over x_psi(u)."""
    psi = psi or induced_psi(ext)
    E = ext.E
    lifts = []
    for u in ext.Q.elements:
        target = stick.reps[psi(u)]
        candidates = np.flatnonzero((ext.p.images == u) & (ext.eps.images == target))
        if not len(candidates):
            raise ExtensionError(f"no lift of {u} over x_{psi(u)}", witness={"u": u})
        lifts.append(int(candidates[0]))
    j_inverse = np.full(E.order, -1, dtype=np.int64)
    j_inverse[ext.j.images] = np.arange(ext.xm.B.order)
    l = np.array(lifts)
    q = ext.Q.order
    U, V = np.indices((q, q))
    f = j_inverse[E.table[E.table[l[U], l[V]], E.inverse[l[ext.Q.table[U, V]]]]]
    if (f < 0).any():
        raise ExtensionError("lift products leave j(B)")
    return NormalForm(tuple(lifts), f, j_inverse)


@dataclass(frozen=True)
class Equivalence:
    """eta: E1 -> E2 with eta j1 = j2, p2 eta = p1, eps2 eta = eps1, and eta(e_u) = j2(alpha_u) e'_u."""

    eta: GroupHom
    alpha: Tuple[int, ...]


def _build_equivalence(e1: Extension, e2: Extension, nf1: NormalForm, nf2: NormalForm, alpha: Sequence[int]) -> Optional[Equivalence]:
    B, E1, E2 = e1.xm.B, e1.E, e2.E
    l1, l2 = np.array(nf1.lifts), np.array(nf2.lifts)
    alpha_arr = np.array(alpha, dtype=np.int64)
    e = np.arange(E1.order)
    u = e1.p.images
    b = nf1.j_inverse[E1.table[e, E1.inverse[l1[u]]]]
    images = E2.table[e2.j.images[B.table[b, alpha_arr[u]]], l2[u]]
    eta = GroupHom(E1, E2, images, check=False)
    if (
        eta.homomorphism_violation() is None
        and eta.is_bijective()
        and np.array_equal(images[e1.j.images], e2.j.images)
        and np.array_equal(e2.p.images[images], e1.p.images)
        and np.array_equal(e2.eps.images[images], e1.eps.images)
    ):
        return Equivalence(eta, tuple(int(a) for a in alpha_arr))
    return None


def _alpha_condition(fs_phi: np.ndarray, f1: np.ndarray, f2: np.ndarray, Q: FiniteGroup, B: FiniteGroup, alpha: np.ndarray) -> bool:
    """f1(u,v) + alpha_uv = alpha_u + phi(u)alpha_v + f2(u,v) everywhere."""
    q = Q.order
    U, V = np.indices((q, q))
    lhs = B.table[f1, alpha[Q.table[U, V]]]
    rhs = B.table[B.table[alpha[U], fs_phi[U, alpha[V]]], f2]
    return bool(np.array_equal(lhs, rhs))


def are_equivalent(
    e1: Extension,
    e2: Extension,
    *,
    full_b: bool = False,
    method: str = "linear",
    budget: int = DEFAULT_BUDGET,
) -> Optional[Equivalence]:
    """An equivalence e1 -> e2, or None.

    Both extensions are put in normal form over the same stick; their
    factor sets then differ by a 2-cochain in Ker d, and an equivalence
    is a 1-cochain alpha with d(alpha) = f1 - f2. ``method`` picks the
    solver ("linear" or "exhaustive"); ``full_b`` searches alpha: Q -> B
    directly instead.

    Raises:
        ExtensionError: If a solved alpha fails to give an equivalence
        BudgetExceeded: If the full-B search exceeds the budget
    """
    xm = e1.xm
    if e2.xm != xm or e1.Q != e2.Q:
        return None
    psi = induced_psi(e1)
    if induced_psi(e2) != psi:
        return None
    stick = choose_stick(xm)
    nf1, nf2 = normal_form(e1, stick, psi), normal_form(e2, stick, psi)
    B, Q = xm.B, e1.Q
    phi = xm.theta[np.array(stick.reps)[psi.images]]

    if full_b:
        space = B.order ** (Q.order - 1)
        if space > budget:
            raise BudgetExceeded(f"alpha search over B needs {space} candidates, budget is {budget}")
        for tail in itertools.product(range(B.order), repeat=Q.order - 1):
            alpha = np.array((0,) + tail, dtype=np.int64)
            if _alpha_condition(phi, nf1.f, nf2.f, Q, B, alpha):
                found = _build_equivalence(e1, e2, nf1, nf2, alpha)
                if found is not None:
                    return found
        return None

    derived, pi1 = reduced_module(xm, stick)
    module = pullback_module(pi1, psi)
    position = np.full(B.order, -1, dtype=np.int64)
    position[np.array(derived.ker_d.elements)] = np.arange(derived.ker_d.order)
    delta = position[B.table[nf1.f, B.inverse[nf2.f]]]
    if (delta < 0).any():
        raise ExtensionError("normal-form factor sets differ outside Ker d")
    target = Cochain(module, 2, delta[1:, 1:].reshape(-1))
    solution = solve_coboundary(target, method=method, budget=budget)
    if solution is None:
        return None
    alpha = derived.kernel_inclusion.images[solution.full()]
    found = _build_equivalence(e1, e2, nf1, nf2, alpha)
    if found is None:
        logger.error("Solved alpha does not give an equivalence for %s", xm.name)
        raise ExtensionError("alpha solves the coboundary equation but eta is not an equivalence", witness=alpha.tolist())
    return found


# Classification


def classify(xm: CrossedModule, psi: GroupHom, *, seed: int = 0, verify: bool = True) -> List[Extension]:
    """One extension per equivalence class of extensions of type xm inducing psi.

    Empty when psi*k is not a coboundary. Otherwise the extensions come
    from h = -(g0 + z) with d(g0) = psi*k and z running over H^2
    representatives, so the list has |H^2(Q, Ker d)| entries.

    Raises:
        ExtensionError: If two listed extensions turn out equivalent (only with verify)
    """
    stick = choose_stick(xm, seed)
    xi = obstruction(xm, psi, stick)
    g0 = solve_coboundary(xi)
    if g0 is None:
        logger.info("Obstruction class is nonzero for %s: no extensions", xm.name)
        return []
    extensions = [
        extension_from_functor(xm, psi, stick, -(g0 + z), f"E{i}({xm.name})")
        for i, z in enumerate(h2_representatives(xi.module))
    ]
    if verify:
        for i, ext in enumerate(extensions):
            for other in extensions[:i]:
                if are_equivalent(ext, other) is not None:
                    raise ExtensionError("two classification entries are equivalent", witness={"index": i})
    logger.info("Classified %d extension class(es) for %s", len(extensions), xm.name)
    return extensions


def classify_report(xm: CrossedModule, psi: GroupHom, *, seed: int = 0) -> ClassificationReport:
    stick = choose_stick(xm, seed)
    xi = obstruction(xm, psi, stick)
    extensions = classify(xm, psi, seed=seed)
    return ClassificationReport(
        subject=f"crossed module {xm.name}",
        psi=psi.images.tolist(),
        obstruction_class_zero=solve_coboundary(xi) is not None,
        h2_order=h_order(xi.module, 2),
        classes=[ext.summary() for ext in extensions],
    )

