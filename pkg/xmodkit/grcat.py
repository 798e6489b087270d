"""
Finite strict Gr-categories, materialized arrow by arrow.

An arrow is a triple (x, b, y) from x to y carrying the label b, with
x = d(b)*y when the category comes from a crossed module. Arrows are
numbered ``y*|B| + b``. ``compose[i, j]`` is "i then j" (-1 where the pair
is not composable) and ``tensor[i, j]`` is i (x) j.

``to_crossed_module`` reads only the arrow, composition and tensor tables,
never the crossed module the category was built from, so the two
directions are independent code paths.
"""

from __future__ import annotations

import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import MAX_CATEGORY_SIZE
from .crossed import CrossedModule, XModMorphism, morphisms, validate, validate_morphism
from .errors import BudgetExceeded, GrCategoryError
from .groups import FiniteGroup, GroupHom, homomorphisms
from .reports import ClassificationIsoReport, RoundTripReport, ValidationReport

logger = logging.getLogger(__name__)

_CHUNK = 256


class StrictGrCat:
    """A finite strict Gr-category given by explicit tables."""

    def __init__(
        self,
        objects: FiniteGroup,
        labels: FiniteGroup,
        arrows: np.ndarray,
        compose: np.ndarray,
        tensor: np.ndarray,
        identities: np.ndarray,
        name: str = "P",
        xm: Optional[CrossedModule] = None,
    ) -> None:
        self.objects = objects
        self.labels = labels
        self.arrows = arrows
        self.compose = compose
        self.tensor = tensor
        self.identities = identities
        self.name = name
        self.xm = xm
        for arr in (arrows, compose, tensor, identities):
            arr.flags.writeable = False
        self._index: Dict[Tuple[int, int, int], int] = {
            (int(x), int(b), int(y)): i for i, (x, b, y) in enumerate(arrows)
        }

    @property
    def size(self) -> int:
        return int(self.arrows.shape[0])

    @property
    def sources(self) -> np.ndarray:
        return self.arrows[:, 0]

    @property
    def targets(self) -> np.ndarray:
        return self.arrows[:, 2]

    def arrow(self, x: int, b: int, y: int) -> Optional[int]:
        return self._index.get((x, b, y))

    def hom(self, x: int, y: int) -> List[int]:
        """Labels of the arrows x -> y."""
        mask = (self.arrows[:, 0] == x) & (self.arrows[:, 2] == y)
        return sorted(int(b) for b in self.arrows[mask, 1])

    def __repr__(self) -> str:
        return f"StrictGrCat({self.name!r}, objects={self.objects.order}, arrows={self.size})"


def from_crossed_module(xm: CrossedModule, *, max_size: int = MAX_CATEGORY_SIZE) -> StrictGrCat:
    """The strict Gr-category of a crossed module: Hom(x, y) = {b : x = d(b)y}.

    Raises:
        BudgetExceeded: If |B|*|D| exceeds max_size
    """
    xm.require_valid()
    B, D = xm.B, xm.D
    nb, nd = B.order, D.order
    if nb * nd > max_size:
        raise BudgetExceeded(f"category of {xm.name} has {nb * nd} arrows, bound is {max_size}")

    y = np.repeat(np.arange(nd), nb)
    b = np.tile(np.arange(nb), nd)
    x = D.table[xm.d.images[b], y]
    arrows = np.stack([x, b, y], axis=1)

    # i then j is defined when target(i) == source(j); label b_i + b_j, ending at target(j)
    composable = y[:, None] == x[None, :]
    composed = y[None, :] * nb + B.table[b[:, None], b[None, :]]
    compose = np.where(composable, composed, -1)

    # (x, b, y) (x) (x', b', y') = (xx', b + theta_y(b'), yy')
    label = B.table[b[:, None], xm.theta[y][:, b]]
    tensor = D.table[y[:, None], y[None, :]] * nb + label

    identities = np.arange(nd) * nb
    cat = StrictGrCat(D, B, arrows, compose, tensor, identities, f"P({xm.name})", xm)
    logger.debug("Built %r", cat)
    return cat


def validate_category(P: StrictGrCat) -> ValidationReport:
    """Check the strict Gr-category axioms exhaustively."""
    report = ValidationReport(subject=f"category {P.name}")
    n = P.size
    src, tgt = P.sources, P.targets
    ids = P.identities
    idx = np.arange(n)
    obj = P.objects

    composable = P.compose >= 0
    if not np.array_equal(composable, tgt[:, None] == src[None, :]):
        i, j = (int(v) for v in np.argwhere(composable != (tgt[:, None] == src[None, :]))[0])
        report.add("composition_domain", f"composability of arrows {i}, {j} disagrees with their ends", i=i, j=j)
        return report
    pairs = np.argwhere(composable)
    c = P.compose[pairs[:, 0], pairs[:, 1]]
    if (src[c] != src[pairs[:, 0]]).any() or (tgt[c] != tgt[pairs[:, 1]]).any():
        report.add("composition_ends", "a composite does not run from the first source to the last target")

    if not (np.array_equal(P.compose[ids[src], idx], idx) and np.array_equal(P.compose[idx, ids[tgt]], idx)):
        a = int(np.argmax((P.compose[ids[src], idx] != idx) | (P.compose[idx, ids[tgt]] != idx)))
        report.add("identity", f"identity arrows do not act trivially on arrow {a}", arrow=a)

    # (a then b) then c == a then (b then c), over composable triples
    ab = P.compose[pairs[:, 0], pairs[:, 1]]
    for start in range(0, len(pairs), _CHUNK):
        first = ab[start : start + _CHUNK]
        a, b = pairs[start : start + _CHUNK, 0], pairs[start : start + _CHUNK, 1]
        ok = tgt[b][:, None] == src[None, :]
        lhs = P.compose[first[:, None], idx[None, :]]
        rhs = P.compose[a[:, None], P.compose[b[:, None], idx[None, :]]]
        bad = np.argwhere(ok & (lhs != rhs))
        if len(bad):
            r, k = (int(v) for v in bad[0])
            report.add("composition_associative", "composition is not associative", arrows=[int(a[r]), int(b[r]), k])
            break

    has_inverse = ((P.compose == ids[src][:, None]) & (P.compose.T == ids[tgt][:, None])).any(axis=1)
    if not has_inverse.all():
        a = int(np.argmin(has_inverse))
        report.add("invertible", f"arrow {a} has no inverse", arrow=a)

    t = P.tensor
    if not (
        np.array_equal(src[t], obj.table[src[:, None], src[None, :]])
        and np.array_equal(tgt[t], obj.table[tgt[:, None], tgt[None, :]])
    ):
        report.add("tensor_ends", "the tensor of arrows does not run between tensors of objects")
    unit = ids[0]
    if not (np.array_equal(t[unit], idx) and np.array_equal(t[:, unit], idx)):
        report.add("tensor_unit", "the identity of the unit object is not a tensor unit")
    if not np.array_equal(t[ids[:, None], ids[None, :]], ids[obj.table]):
        report.add("tensor_identities", "the tensor of identities is not an identity")
    for i in range(n):
        bad = np.argwhere(t[t[i]] != t[i][t])
        if len(bad):
            j, k = (int(v) for v in bad[0])
            report.add("tensor_associative", "tensor of arrows is not strictly associative", arrows=[i, j, k])
            break

    # (a then c) (x) (a' then c') == (a (x) a') then (c (x) c')
    step = max(1, 2**20 // max(len(pairs), 1))
    for start in range(0, len(pairs), step):
        left = pairs[start : start + step]
        lc = P.compose[left[:, 0], left[:, 1]]
        lhs = t[lc[:, None], c[None, :]]
        rhs = P.compose[t[left[:, 0][:, None], pairs[:, 0][None, :]], t[left[:, 1][:, None], pairs[:, 1][None, :]]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            r, k = (int(v) for v in bad[0])
            report.add("interchange", "interchange law fails", pairs=[left[r].tolist(), pairs[k].tolist()])
            break

    return report


def to_crossed_module(P: StrictGrCat, name: Optional[str] = None) -> CrossedModule:
    """The crossed module of a strict Gr-category.

    B is the set of arrows into the unit object under tensor, D the object
    group, d(x -> 1) = x and theta_y(b) = id_y (x) b (x) id_{y^-1}.

    Raises:
        GrCategoryError: If P is malformed or the result is not a crossed module
    """
    validate_category(P).raise_for_violations(GrCategoryError)
    into_unit = np.flatnonzero(P.targets == 0)
    position = np.full(P.size, -1, dtype=np.int64)
    position[into_unit] = np.arange(len(into_unit))

    table = position[P.tensor[np.ix_(into_unit, into_unit)]]
    B = FiniteGroup(table, f"B({P.name})")
    D = P.objects
    d = P.sources[into_unit]

    ids = P.identities
    inverse_ids = ids[D.inverse]
    conjugated = P.tensor[P.tensor[ids[:, None], into_unit[None, :]], inverse_ids[:, None]]
    theta = position[conjugated]
    if (theta < 0).any():
        raise GrCategoryError("conjugating an arrow into the unit by identities left the unit")
    xm = CrossedModule(B, D, d, theta, name or f"C({P.name})")
    validate(xm).raise_for_violations(GrCategoryError)
    return xm


def roundtrip_isomorphism(xm: CrossedModule, *, max_size: int = MAX_CATEGORY_SIZE) -> Tuple[StrictGrCat, CrossedModule, Optional[XModMorphism]]:
    """Build P(xm) and C(P(xm)) and test the map b -> (d(b) -b-> 1), x -> x.

    Returns the category, the recovered crossed module and the isomorphism,
    or None in its place if the map is not one.
    """
    P = from_crossed_module(xm, max_size=max_size)
    back = to_crossed_module(P)
    into_unit = np.flatnonzero(P.targets == 0)
    position = {int(a): pos for pos, a in enumerate(into_unit)}
    images = []
    for b in xm.B.elements:
        a = P.arrow(xm.d(b), b, 0)
        if a is None or a not in position:
            return P, back, None
        images.append(position[a])
    f1 = GroupHom(xm.B, back.B, images, check=False)
    if f1.homomorphism_violation() is not None:
        return P, back, None
    f0 = GroupHom(xm.D, back.D, np.arange(xm.D.order), check=False)
    m = XModMorphism(xm, back, f1, f0)
    if not (m.is_isomorphism() and validate_morphism(m).is_valid):
        return P, back, None
    return P, back, m


def roundtrip_report(xm: CrossedModule, *, max_size: int = MAX_CATEGORY_SIZE) -> RoundTripReport:
    P = from_crossed_module(xm, max_size=max_size)
    category = validate_category(P)
    iso = roundtrip_isomorphism(xm, max_size=max_size)[2] if category.is_valid else None
    return RoundTripReport(
        subject=f"crossed module {xm.name}",
        objects=P.objects.order,
        arrows=P.size,
        category=category,
        isomorphic=iso is not None,
    )


def action_from_category(P: StrictGrCat, reps: Sequence[int]) -> np.ndarray:
    """The pi0-action on pi1 = Aut(1) computed as gamma_X^-1 delta_X.

    delta_X(u) = id_X (x) u and gamma_X(u) = u (x) id_X; row s is the action
    of the object reps[s], in the indexing of the loops at 1 by label.
    """
    loops = np.flatnonzero((P.sources == 0) & (P.targets == 0))
    loops = loops[np.argsort(P.arrows[loops, 1])]
    ids = P.identities
    rows = []
    for x in reps:
        delta = P.tensor[ids[x], loops]
        gamma = P.tensor[loops, ids[x]]
        match = gamma[None, :] == delta[:, None]
        if not match.any(axis=1).all():
            raise GrCategoryError(f"delta_{x}(u) is not in the image of gamma_{x}")
        rows.append(np.argmax(match, axis=1))
    return np.array(rows, dtype=np.int64)


def _or_missing(arrow: Optional[int]) -> int:
    return -1 if arrow is None else arrow


class GrFunctor:
    """A Gr-functor (F, F~) between categories of crossed modules.

    F acts by f0 on objects and f1 on labels; F~_{x,y} is the constant
    arrow with label ``c_tilde`` and the unit constraint has label -c_tilde.
    """

    def __init__(
        self,
        source: StrictGrCat,
        target: StrictGrCat,
        f1: GroupHom,
        f0: GroupHom,
        c_tilde: int = 0,
    ) -> None:
        if f1.source != source.labels or f1.target != target.labels:
            raise GrCategoryError("f1 must map labels of the source to labels of the target")
        if f0.source != source.objects or f0.target != target.objects:
            raise GrCategoryError("f0 must map objects of the source to objects of the target")
        self.source = source
        self.target = target
        self.f1 = f1
        self.f0 = f0
        self.c_tilde = int(c_tilde)

    @property
    def is_single(self) -> bool:
        return self.c_tilde == 0

    def arrow_map(self) -> np.ndarray:
        """Index of F(a) for every arrow a, -1 where (f0 x, f1 b, f0 y) is not an arrow."""
        x, b, y = self.source.arrows.T
        images = zip(self.f0.images[x], self.f1.images[b], self.f0.images[y])
        return np.array([_or_missing(self.target.arrow(int(fx), int(fb), int(fy))) for fx, fb, fy in images], dtype=np.int64)

    def structure_arrow(self, x: int, y: int) -> Optional[int]:
        """F~_{x,y}: F(x) (x) F(y) -> F(xy)."""
        Tobj = self.target.objects
        fx, fy = self.f0(x), self.f0(y)
        return self.target.arrow(Tobj.mul(fx, fy), self.c_tilde, self.f0(self.source.objects.mul(x, y)))

    def __repr__(self) -> str:
        return f"GrFunctor({self.source.name} -> {self.target.name}, c~={self.c_tilde})"


def validate_functor(F: GrFunctor) -> ValidationReport:
    """Functoriality, the constant-structure condition, naturality and coherence."""
    report = ValidationReport(subject=f"functor {F!r}")
    S, T = F.source, F.target
    fa = F.arrow_map()
    if (fa < 0).any():
        a = int(np.argmax(fa < 0))
        report.add("arrow_map", f"arrow {S.arrows[a].tolist()} has no image arrow", arrow=a)
        return report

    if not np.array_equal(fa[S.identities], T.identities[F.f0.images]):
        report.add("identities", "F does not preserve identity arrows")
    pairs = np.argwhere(S.compose >= 0)
    lhs = fa[S.compose[pairs[:, 0], pairs[:, 1]]]
    rhs = T.compose[fa[pairs[:, 0]], fa[pairs[:, 1]]]
    if (lhs != rhs).any():
        i, j = (int(v) for v in pairs[np.argmax(lhs != rhs)])
        report.add("composition", "F does not preserve composition", arrows=[i, j])

    c = F.c_tilde
    unit_loop = T.arrow(0, c, 0)
    if unit_loop is None:
        report.add("constant_kernel", f"c~ = {c} is not in the kernel of d'", c=c)
        return report
    fixed = T.tensor[T.tensor[T.identities[F.f0.images], unit_loop], T.identities[T.objects.inverse[F.f0.images]]]
    if (fixed != unit_loop).any():
        x = int(np.argmax(fixed != unit_loop))
        report.add("constant_fixed", f"theta'_F({x}) moves c~ = {c}", x=x, c=c)

    objs = S.objects
    n = objs.order
    structure = np.array(
        [[_or_missing(F.structure_arrow(x, y)) for y in range(n)] for x in range(n)],
        dtype=np.int64,
    )
    if (structure < 0).any():
        report.add("structure_arrows", "some F~_{x,y} is not an arrow of the target")
        return report

    # (Fa (x) Fa') then F~_{y,y'} == F~_{x,x'} then F(a (x) a')
    src, tgt = S.sources, S.targets
    for start in range(0, S.size, _CHUNK):
        a = np.arange(start, min(start + _CHUNK, S.size))
        lhs = T.compose[T.tensor[fa[a][:, None], fa[None, :]], structure[tgt[a][:, None], tgt[None, :]]]
        rhs = T.compose[structure[src[a][:, None], src[None, :]], fa[S.tensor[a]]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            r, k = (int(v) for v in bad[0])
            report.add("naturality", "F~ is not natural", arrows=[int(a[r]), k])
            break

    # (F~_{x,y} (x) id) then F~_{xy,z} == (id (x) F~_{y,z}) then F~_{x,yz}
    Tids = T.identities
    fx = F.f0.images
    x, y, z = (g.ravel() for g in np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij"))
    lhs = T.compose[T.tensor[structure[x, y], Tids[fx[z]]], structure[objs.table[x, y], z]]
    rhs = T.compose[T.tensor[Tids[fx[x]], structure[y, z]], structure[x, objs.table[y, z]]]
    if (lhs != rhs).any():
        k = int(np.argmax(lhs != rhs))
        report.add("coherence", "F~ is not coherent with the (identity) associativity", objects=[int(x[k]), int(y[k]), int(z[k])])

    unit_arrow = T.arrow(0, T.labels.inv(c), 0)
    objects = np.arange(n)
    left = T.compose[T.tensor[unit_arrow, Tids[fx]], structure[0, objects]]
    right = T.compose[T.tensor[Tids[fx], unit_arrow], structure[objects, 0]]
    if not (np.array_equal(left, Tids[fx]) and np.array_equal(right, Tids[fx])):
        report.add("unit", "the unit constraint -c~ is not coherent with F~")
    return report


def functor_from_morphism(
    m: XModMorphism,
    c_tilde: int = 0,
    *,
    source: Optional[StrictGrCat] = None,
    target: Optional[StrictGrCat] = None,
) -> GrFunctor:
    """The Gr-functor of a morphism of crossed modules with constant structure c~.

    Raises:
        GrCategoryError: If m is invalid or c~ is not in Ker d' or is moved by some theta'_{f0(x)}
    """
    validate_morphism(m).raise_for_violations(GrCategoryError)
    tgt = m.target
    if tgt.d(c_tilde) != 0:
        raise GrCategoryError(f"c~ = {c_tilde} is not in Ker d'", witness={"c": c_tilde})
    moved = np.flatnonzero(tgt.theta[m.f0.images, c_tilde] != c_tilde)
    if len(moved):
        x = int(moved[0])
        raise GrCategoryError(f"theta'_f0({x}) moves c~ = {c_tilde}", witness={"x": x, "c": c_tilde})
    source = source or from_crossed_module(m.source)
    target = target or from_crossed_module(m.target)
    return GrFunctor(source, target, m.f1, m.f0, c_tilde)


def morphism_from_single_functor(F: GrFunctor) -> XModMorphism:
    """The morphism (f1, f0) read off a single Gr-functor.

    f1(b) is the label of F(d(b) -b-> 1) and f0(x) is F(x).

    Raises:
        GrCategoryError: If F is not single or its categories do not come from crossed modules
    """
    if not F.is_single:
        raise GrCategoryError(f"functor is not single: c~ = {F.c_tilde}", witness={"c": F.c_tilde})
    if F.source.xm is None or F.target.xm is None:
        raise GrCategoryError("functor categories carry no crossed modules")
    validate_functor(F).raise_for_violations(GrCategoryError)
    xm, xm2 = F.source.xm, F.target.xm
    fa = F.arrow_map()
    f1 = [int(F.target.arrows[fa[F.source.arrow(xm.d(b), b, 0)], 1]) for b in xm.B.elements]
    f0 = F.f0.images
    m = XModMorphism(xm, xm2, GroupHom(xm.B, xm2.B, f1), GroupHom(xm.D, xm2.D, f0))
    validate_morphism(m).raise_for_violations(GrCategoryError)
    return m


def are_strong_homotopic(F: GrFunctor, G: GrFunctor) -> Optional[int]:
    """A constant homotopy a = c~(F) - c~(G) between functors with equal underlying maps.

    The witness satisfies c + a = a + theta'_{G(x)}(a) + c' for all x; None if
    the underlying maps differ.
    """
    if F.source is not G.source and F.source.xm != G.source.xm:
        return None
    if F.f1 != G.f1 or F.f0 != G.f0:
        return None
    B2 = F.target.labels
    theta = F.target.xm.theta if F.target.xm is not None else None
    c, c2 = F.c_tilde, G.c_tilde
    a = B2.mul(c, B2.inv(c2))
    if F.target.arrow(0, a, 0) is None:
        return None
    for x in F.source.objects.elements:
        gx = G.f0(x)
        moved = int(theta[gx, a]) if theta is not None else a
        if B2.mul(c, a) != B2.product(a, moved, c2):
            logger.debug("Homotopy square fails at object %d", x)
            return None
    return a


def enumerate_gr_functors(source: StrictGrCat, target: StrictGrCat, *, budget: Optional[int] = None) -> List[GrFunctor]:
    """All Gr-functors with constant structure, by brute force over (f1, f0, c~)."""
    found = []
    loop_labels = target.hom(0, 0)
    for f1, f0 in itertools.product(
        homomorphisms(source.labels, target.labels, budget=budget),
        homomorphisms(source.objects, target.objects, budget=budget),
    ):
        for c in loop_labels:
            F = GrFunctor(source, target, f1, f0, c)
            if validate_functor(F).is_valid:
                found.append(F)
    return found


def check_classification_iso(xm: CrossedModule, xm2: CrossedModule, *, budget: Optional[int] = None) -> ClassificationIsoReport:
    """Compare morphisms xm -> xm2 with Gr-functors P(xm) -> P(xm2) on one instance.

    Bijective means: single functors correspond one-to-one to morphisms via
    ``morphism_from_single_functor``, and strong homotopy classes of all
    functors are as many as the morphisms.
    """
    P, P2 = from_crossed_module(xm), from_crossed_module(xm2)
    ms = morphisms(xm, xm2, budget=budget)
    functors = enumerate_gr_functors(P, P2, budget=budget)
    singles = [F for F in functors if F.is_single]
    recovered = {morphism_from_single_functor(F) for F in singles}

    classes: List[GrFunctor] = []
    for F in functors:
        if not any(are_strong_homotopic(F, G) is not None for G in classes):
            classes.append(F)

    bijective = (
        len(singles) == len(ms)
        and recovered == set(ms)
        and len(classes) == len(ms)
        and all(validate_functor(functor_from_morphism(m, 0, source=P, target=P2)).is_valid for m in ms)
    )
    if not bijective:
        logger.error("Morphism/functor correspondence fails for %s -> %s", xm.name, xm2.name)
    return ClassificationIsoReport(
        source=xm.name,
        target=xm2.name,
        morphisms=len(ms),
        single_functors=len(singles),
        functors=len(functors),
        strong_homotopy_classes=len(classes),
        bijective=bijective,
    )


def kernel_loops(P: StrictGrCat) -> List[int]:
    """Labels of the loops at the unit object, i.e. pi1."""
    return P.hom(0, 0)

