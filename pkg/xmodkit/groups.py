"""
Exact finite-group arithmetic on Cayley tables.

Groups are explicit tables (``table[i, j] = i*j``) with the identity at
index 0. Element indexing of derived groups is fixed so that serialized
homomorphisms stay portable:

- ``direct_product(G, H)``: the pair (i, j) is element ``i*|H| + j``;
- ``quotient(G, N)``: cosets are numbered by increasing smallest member,
  so the identity coset is 0 and ``section[s]`` is that smallest member;
- ``Subgroup.as_group()``: members in increasing order.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from .config import MAX_AUTOMORPHISM_ORDER, MAX_GROUP_ORDER
from .errors import BudgetExceeded, GroupAxiomError, InputError
from .records import GroupRecord

logger = logging.getLogger(__name__)


def is_associative(table: np.ndarray) -> Optional[Tuple[int, int, int]]:
    """Return a triple (a, b, c) with (ab)c != a(bc), or None if associative."""
    table = np.asarray(table)
    n = table.shape[0]
    left = table[table]  # left[a, b, c] = (a*b)*c
    right = table[np.arange(n)[:, None, None], table[None, :, :]]  # a*(b*c)
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (int(v) for v in bad[0])
        return a, b, c
    return None


def _check_group_table(table: np.ndarray) -> None:
    n = table.shape[0]

    bad = np.argwhere((table < 0) | (table >= n))
    if len(bad):
        row, col = (int(v) for v in bad[0])
        raise GroupAxiomError(
            f"table entry at row {row}, column {col} is {int(table[row, col])}, outside 0..{n - 1}",
            witness={"row": row, "column": col},
        )

    ident = np.arange(n)
    if not np.array_equal(table[0], ident):
        col = int(np.argmax(table[0] != ident))
        raise GroupAxiomError(
            f"element 0 is not a left identity: row 0, column {col} holds {int(table[0, col])}",
            witness={"row": 0, "column": col},
        )
    if not np.array_equal(table[:, 0], ident):
        row = int(np.argmax(table[:, 0] != ident))
        raise GroupAxiomError(
            f"element 0 is not a right identity: row {row}, column 0 holds {int(table[row, 0])}",
            witness={"row": row, "column": 0},
        )

    has_zero = (table == 0).any(axis=1)
    if not has_zero.all():
        row = int(np.argmin(has_zero))
        raise GroupAxiomError(f"element {row} has no inverse: row {row} never contains 0", witness={"row": row})
    inverse = np.argmax(table == 0, axis=1)
    left_ok = table[inverse, ident] == 0
    if not left_ok.all():
        row = int(np.argmin(left_ok))
        raise GroupAxiomError(
            f"element {row} has a right inverse {int(inverse[row])} that is not a left inverse",
            witness={"row": int(inverse[row]), "column": row},
        )

    triple = is_associative(table)
    if triple is not None:
        a, b, c = triple
        raise GroupAxiomError(
            f"associativity fails for ({a}*{b})*{c} != {a}*({b}*{c}) (row {a}, column {b})",
            witness={"triple": list(triple), "row": a, "column": b},
        )


class FiniteGroup:
    """A finite group given by its Cayley table, identity at index 0.

    Values are immutable: the table array is read-only after construction.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        name: str = "G",
        *,
        max_order: int = MAX_GROUP_ORDER,
        check: bool = True,
    ) -> None:
        """Build and validate a group.

        Args:
            table: n x n multiplication table on indices 0..n-1
            name: Display name
            max_order: Storage bound on n
            check: Run the full axiom scan (closure, identity, inverses, associativity)

        Raises:
            GroupAxiomError: If the table is not a group table
            BudgetExceeded: If n exceeds max_order
        """
        arr = np.array(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise GroupAxiomError(f"Cayley table must be a non-empty square matrix, got shape {arr.shape}")
        if arr.shape[0] > max_order:
            raise BudgetExceeded(f"group order {arr.shape[0]} exceeds the storage bound {max_order}")
        if check:
            _check_group_table(arr)
        arr.flags.writeable = False
        self._table = arr
        self.name = name

    # Basic structure

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def order(self) -> int:
        return int(self._table.shape[0])

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.argmax(self._table == 0, axis=1).astype(np.int64)
        inv.flags.writeable = False
        return inv

    def mul(self, a: int, b: int) -> int:
        return int(self._table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return int(self._table[self._table[g, x], self.inverse[g]])

    def product(self, *elements: int) -> int:
        result = 0
        for e in elements:
            result = int(self._table[result, e])
        return result

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = 0
        for _ in range(k):
            result = int(self._table[result, a])
        return result

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        current = idx.copy()
        for k in range(1, n + 1):
            hit = (current == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            current = self._table[current, idx]
        orders.flags.writeable = False
        return orders

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self._table, self._table.T))

    @property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    def with_name(self, name: str) -> FiniteGroup:
        return FiniteGroup(self._table, name, max_order=max(self.order, 1), check=False)

    def to_record(self) -> GroupRecord:
        return GroupRecord(name=self.name, order=self.order, table=self._table.tolist())

    @classmethod
    def from_record(cls, record: GroupRecord, *, max_order: int = MAX_GROUP_ORDER) -> FiniteGroup:
        return cls(record.table, record.name, max_order=max_order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or bool(np.array_equal(self._table, other._table))

    def __hash__(self) -> int:
        return hash(self._table.tobytes())

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


def from_function(
    elements: Sequence[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    name: str = "G",
    *,
    max_order: int = MAX_GROUP_ORDER,
) -> FiniteGroup:
    """Build a group from a list of elements (identity first) and a product."""
    position = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.zeros((n, n), dtype=np.int64)
    for (i, a), (j, b) in itertools.product(enumerate(elements), repeat=2):
        try:
            table[i, j] = position[mul(a, b)]
        except KeyError as exc:
            raise GroupAxiomError(f"product of {a!r} and {b!r} is not in the element list") from exc
    return FiniteGroup(table, name, max_order=max_order)


def make_cyclic(n: int) -> FiniteGroup:
    """Z/n under addition."""
    if n < 1:
        raise InputError(f"cyclic group order must be positive, got {n}")
    idx = np.arange(n)
    return FiniteGroup(np.add.outer(idx, idx) % n, f"Z{n}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], "1")


def direct_product(G: FiniteGroup, H: FiniteGroup, name: Optional[str] = None) -> FiniteGroup:
    """G x H with (i, j) stored at index i*|H| + j."""
    h = H.order
    table = G.table[:, None, :, None] * h + H.table[None, :, None, :]
    n = G.order * h
    return FiniteGroup(table.reshape(n, n), name or f"{G.name}x{H.name}")


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on permutations in lexicographic order; (s*t)(i) = s(t(i))."""
    perms = list(itertools.permutations(range(n)))
    return from_function(perms, lambda s, t: tuple(s[i] for i in t), f"S{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, r^k s^e stored at index e*n + k."""
    elements = [(k, e) for e in range(2) for k in range(n)]

    def mul(x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
        (a, e), (b, f) = x, y
        return ((a + (b if e == 0 else -b)) % n, (e + f) % 2)

    return from_function(elements, mul, f"D{n}")


class GroupHom:
    """A homomorphism given by its table of images."""

    def __init__(
        self,
        source: FiniteGroup,
        target: FiniteGroup,
        images: Sequence[int] | np.ndarray,
        *,
        check: bool = True,
    ) -> None:
        arr = np.array(images, dtype=np.int64)
        if arr.shape != (source.order,):
            raise InputError(f"expected {source.order} images, got shape {arr.shape}")
        if ((arr < 0) | (arr >= target.order)).any():
            bad = int(np.argmax((arr < 0) | (arr >= target.order)))
            raise InputError(f"image of {bad} is {int(arr[bad])}, not an element of {target.name}")
        arr.flags.writeable = False
        self.source = source
        self.target = target
        self._images = arr
        if check:
            violation = self.homomorphism_violation()
            if violation is not None:
                a, b = violation
                raise InputError(
                    f"not a homomorphism {source.name} -> {target.name}: f({a}*{b}) != f({a})*f({b})",
                    witness={"a": a, "b": b},
                )

    @property
    def images(self) -> np.ndarray:
        return self._images

    def __call__(self, a: int) -> int:
        return int(self._images[a])

    def homomorphism_violation(self) -> Optional[Tuple[int, int]]:
        f = self._images
        lhs = f[self.source.table]
        rhs = self.target.table[f[:, None], f[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return int(bad[0][0]), int(bad[0][1])
        return None

    def compose(self, first: GroupHom) -> GroupHom:
        """self after first."""
        if first.target != self.source:
            raise InputError("cannot compose: target of the first map is not the source of the second")
        return GroupHom(first.source, self.target, self._images[first.images], check=False)

    def is_injective(self) -> bool:
        return len(np.unique(self._images)) == self.source.order

    def is_surjective(self) -> bool:
        return len(np.unique(self._images)) == self.target.order

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and self.is_injective()

    def inverse(self) -> GroupHom:
        if not self.is_bijective():
            raise InputError("only bijective homomorphisms have inverses")
        inv = np.empty(self.source.order, dtype=np.int64)
        inv[self._images] = np.arange(self.source.order)
        return GroupHom(self.target, self.source, inv, check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and bool(np.array_equal(self._images, other._images))
        )

    def __hash__(self) -> int:
        return hash(self._images.tobytes())

    def __repr__(self) -> str:
        return f"GroupHom({self.source.name} -> {self.target.name}, {self._images.tolist()})"


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order), check=False)


def trivial_hom(G: FiniteGroup, H: FiniteGroup) -> GroupHom:
    return GroupHom(G, H, np.zeros(G.order, dtype=np.int64), check=False)


class Subgroup:
    """A subset of a parent group closed under products and inverses."""

    def __init__(self, parent: FiniteGroup, members: Iterable[int], *, check: bool = True) -> None:
        self.parent = parent
        self.elements: Tuple[int, ...] = tuple(sorted({int(m) for m in members}))
        self._members = frozenset(self.elements)
        if check:
            if 0 not in self._members:
                raise InputError("subgroup must contain the identity")
            m = np.array(self.elements)
            products = parent.table[np.ix_(m, m)]
            outside = ~np.isin(products, m)
            if outside.any():
                i, j = np.argwhere(outside)[0]
                raise InputError(
                    f"subset is not closed: {int(m[i])}*{int(m[j])} = {int(products[i, j])} is missing",
                    witness={"a": int(m[i]), "b": int(m[j])},
                )

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, a: object) -> bool:
        return a in self._members

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    @property
    def members(self) -> frozenset[int]:
        return self._members

    def is_normal(self) -> bool:
        return is_normal(self)

    def is_subset_of(self, other: Subgroup) -> bool:
        return self._members <= other._members

    def as_group(self, name: Optional[str] = None) -> Tuple[FiniteGroup, GroupHom]:
        """The subgroup as a standalone group (members in increasing order) and its inclusion."""
        m = np.array(self.elements)
        position = np.full(self.parent.order, -1, dtype=np.int64)
        position[m] = np.arange(len(m))
        table = position[self.parent.table[np.ix_(m, m)]]
        group = FiniteGroup(table, name or f"sub({self.parent.name})", check=False)
        return group, GroupHom(group, self.parent, m, check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent == other.parent and self._members == other._members

    def __hash__(self) -> int:
        return hash(self._members)

    def __repr__(self) -> str:
        return f"Subgroup({self.parent.name}, {list(self.elements)})"


def kernel(f: GroupHom) -> Subgroup:
    return Subgroup(f.source, np.flatnonzero(f.images == 0).tolist(), check=False)


def image(f: GroupHom) -> Subgroup:
    return Subgroup(f.target, np.unique(f.images).tolist(), check=False)


def is_normal(N: Subgroup) -> bool:
    G = N.parent
    m = np.array(N.elements)
    conjugates = G.table[G.table[:, m], G.inverse[:, None]]
    return bool(np.isin(conjugates, m).all())


def center(G: FiniteGroup) -> Subgroup:
    central = np.all(G.table == G.table.T, axis=1)
    return Subgroup(G, np.flatnonzero(central).tolist(), check=False)


def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    members = {0}
    frontier = deque([0])
    gens = list(gens)
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = G.mul(x, g)
            if y not in members:
                members.add(y)
                frontier.append(y)
    return Subgroup(G, members, check=False)


def subgroups(G: FiniteGroup) -> List[Subgroup]:
    """All subgroups, by joining cyclic subgroups until nothing new appears."""
    cyclic = {generated_subgroup(G, [g]).members for g in G.elements}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new: set[frozenset[int]] = set()
        for a in frontier:
            for c in cyclic:
                if c <= a:
                    continue
                joined = generated_subgroup(G, a | c).members
                if joined not in found:
                    new.add(joined)
        found |= new
        frontier = new
    return sorted((Subgroup(G, s, check=False) for s in found), key=lambda s: (s.order, s.elements))


def normal_subgroups(G: FiniteGroup) -> List[Subgroup]:
    return [N for N in subgroups(G) if is_normal(N)]


@dataclass(frozen=True)
class Quotient:
    """G/N with its coset section and projection."""

    group: FiniteGroup
    section: Tuple[int, ...]
    projection: GroupHom

    def lift(self, coset: int) -> int:
        return self.section[coset]

    def coset_of(self, g: int) -> int:
        return self.projection(g)

    def members(self, coset: int) -> List[int]:
        return np.flatnonzero(self.projection.images == coset).tolist()


def quotient(G: FiniteGroup, N: Subgroup, name: Optional[str] = None) -> Quotient:
    """Quotient by a normal subgroup.

    Raises:
        InputError: If N is not normal in G
    """
    if N.parent != G:
        raise InputError("subgroup does not live in this group")
    if not is_normal(N):
        m = np.array(N.elements)
        conjugates = G.table[G.table[:, m], G.inverse[:, None]]
        g, i = np.argwhere(~np.isin(conjugates, m))[0]
        raise InputError(
            f"subgroup is not normal: {int(g)}*{int(m[i])}*{int(g)}^-1 is not in it",
            witness={"g": int(g), "n": int(m[i])},
        )
    m = np.array(N.elements)
    smallest = G.table[:, m].min(axis=1)  # smallest member of each left coset gN
    reps = np.unique(smallest)
    coset_index = np.searchsorted(reps, smallest)
    table = coset_index[G.table[np.ix_(reps, reps)]]
    group = FiniteGroup(table, name or f"{G.name}/N", check=False)
    projection = GroupHom(G, group, coset_index, check=False)
    return Quotient(group, tuple(int(r) for r in reps), projection)


def generators(G: FiniteGroup) -> List[int]:
    """A small generating set chosen greedily by element order."""
    gens: List[int] = []
    span = generated_subgroup(G, [])
    by_order = sorted(G.elements, key=lambda g: (-G.element_order(g), g))
    for g in by_order:
        if span.order == G.order:
            break
        if g not in span:
            gens.append(g)
            span = generated_subgroup(G, gens)
    return gens


def _spanning_tree(G: FiniteGroup, gens: Sequence[int]) -> List[Tuple[int, int, int]]:
    """BFS order of (element, generator position, predecessor) with element = gen * predecessor."""
    seen = {0}
    tree: List[Tuple[int, int, int]] = []
    frontier = deque([0])
    while frontier:
        x = frontier.popleft()
        for pos, g in enumerate(gens):
            y = G.mul(g, x)
            if y not in seen:
                seen.add(y)
                tree.append((y, pos, x))
                frontier.append(y)
    return tree


def homomorphisms(source: FiniteGroup, target: FiniteGroup, *, budget: Optional[int] = None) -> List[GroupHom]:
    """All homomorphisms source -> target, by assigning images to generators.

    Raises:
        BudgetExceeded: If the number of generator assignments exceeds budget
    """
    gens = generators(source)
    tree = _spanning_tree(source, gens)
    target_orders = target.element_orders
    choices = [
        np.flatnonzero(source.element_order(g) % target_orders == 0).tolist() for g in gens
    ]
    total = int(np.prod([len(c) for c in choices])) if choices else 1
    if budget is not None and total > budget:
        raise BudgetExceeded(
            f"{total} generator assignments for {source.name} -> {target.name} exceed the budget {budget}"
        )

    found: List[GroupHom] = []
    for assignment in itertools.product(*choices):
        images = np.zeros(source.order, dtype=np.int64)
        for elem, pos, prev in tree:
            images[elem] = target.table[assignment[pos], images[prev]]
        candidate = GroupHom(source, target, images, check=False)
        if candidate.homomorphism_violation() is None:
            found.append(candidate)
    found.sort(key=lambda f: f.images.tolist())
    logger.debug("Found %d homomorphisms %s -> %s", len(found), source.name, target.name)
    return found


def automorphism_group(G: FiniteGroup, *, bound: int = MAX_AUTOMORPHISM_ORDER) -> List[GroupHom]:
    """All automorphisms of G, identity first.

    Raises:
        BudgetExceeded: If |G| exceeds bound
    """
    if G.order > bound:
        raise BudgetExceeded(f"automorphism search limited to order {bound}, got {G.order}")
    return [f for f in homomorphisms(G, G) if f.is_bijective()]


def is_isomorphic(G: FiniteGroup, H: FiniteGroup, *, bound: int = MAX_AUTOMORPHISM_ORDER) -> Optional[GroupHom]:
    """Some isomorphism G -> H, or None."""
    if G.order != H.order:
        return None
    if sorted(G.element_orders.tolist()) != sorted(H.element_orders.tolist()):
        return None
    if G == H:
        return GroupHom(G, H, np.arange(G.order), check=False)
    if G.order > bound:
        raise BudgetExceeded(f"isomorphism search limited to order {bound}, got {G.order}")
    for f in homomorphisms(G, H):
        if f.is_bijective():
            return f
    return None


class AbelianDecomposition:
    """A coordinate bijection between an abelian group and a sum of Z/m_i.

    Moduli are prime powers ordered by prime, then by decreasing exponent;
    ``generators[i]`` is the element with coordinate vector e_i.
    """

    def __init__(self, group: FiniteGroup, moduli: Sequence[int], generators: Sequence[int]) -> None:
        self.group = group
        self.moduli: Tuple[int, ...] = tuple(int(m) for m in moduli)
        self.generators: Tuple[int, ...] = tuple(int(g) for g in generators)
        self.primes: Tuple[int, ...] = tuple(next(iter(factorint(m))) for m in self.moduli)

        shape = self.moduli
        element_of = np.zeros(shape, dtype=np.int64) if shape else np.zeros((), dtype=np.int64)
        coords = np.zeros((group.order, len(shape)), dtype=np.int64)
        seen = np.zeros(group.order, dtype=bool)
        for c in np.ndindex(*shape):
            e = 0
            for g, k in zip(self.generators, c):
                e = group.mul(e, group.power(g, k))
            if seen[e]:
                raise InputError(f"generators {self.generators} do not give a coordinate bijection")
            seen[e] = True
            element_of[c] = e
            coords[e] = c
        if not seen.all():
            raise InputError(f"generators {self.generators} do not span {group.name}")

        m = np.array(self.moduli, dtype=np.int64)
        transported = (coords[:, None, :] + coords[None, :, :]) % m if len(m) else None
        if transported is not None and not np.array_equal(coords[group.table], transported):
            raise InputError("coordinate bijection does not transport the group operation")

        coords.flags.writeable = False
        element_of.flags.writeable = False
        self.coords = coords
        self.element_of = element_of

    @property
    def rank(self) -> int:
        return len(self.moduli)

    def to_coords(self, a: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.coords[a])

    def from_coords(self, c: Sequence[int]) -> int:
        reduced = tuple(int(v) % m for v, m in zip(c, self.moduli))
        return int(self.element_of[reduced])

    def prime_blocks(self) -> dict[int, List[int]]:
        """Coordinate positions grouped by prime."""
        blocks: dict[int, List[int]] = {}
        for pos, p in enumerate(self.primes):
            blocks.setdefault(p, []).append(pos)
        return blocks

    def __repr__(self) -> str:
        return f"AbelianDecomposition({self.group.name}, moduli={list(self.moduli)})"


def _p_part_basis(A: FiniteGroup, p: int) -> Tuple[List[int], List[int]]:
    orders = A.element_orders
    p_elements = [a for a in A.elements if orders[a] == p ** _valuation(int(orders[a]), p)]

    # r_j = number of cyclic factors of order >= p^j, from |A[p^j]|
    counts = []
    j = 0
    while True:
        size = sum(1 for a in p_elements if (p**j) % orders[a] == 0)
        counts.append(size)
        if size == len(p_elements):
            break
        j += 1
    ranks = [_valuation(counts[i] // counts[i - 1], p) for i in range(1, len(counts))]
    exponents: List[int] = []
    for e in range(len(ranks), 0, -1):
        exactly = ranks[e - 1] - (ranks[e] if e < len(ranks) else 0)
        exponents.extend([e] * exactly)

    def extend(chosen: List[int], span: frozenset[int]) -> Optional[List[int]]:
        if len(chosen) == len(exponents):
            return chosen
        want = p ** exponents[len(chosen)]
        for g in p_elements:
            if orders[g] != want:
                continue
            multiples = [A.power(g, k) for k in range(want)]
            new_span = frozenset(A.mul(s, t) for s in span for t in multiples)
            if len(new_span) == len(span) * want:
                result = extend(chosen + [g], new_span)
                if result is not None:
                    return result
        return None

    basis = extend([], frozenset({0}))
    if basis is None:
        raise InputError(f"no cyclic basis found for the {p}-part of {A.name}")
    return [p**e for e in exponents], basis


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0 and n > 1:
        n //= p
        v += 1
    return v


def abelian_decompose(A: FiniteGroup) -> AbelianDecomposition:
    """Primary cyclic decomposition of an abelian group with explicit coordinates.

    Raises:
        InputError: If A is not abelian
    """
    if not A.is_abelian:
        a, b = (int(v) for v in np.argwhere(A.table != A.table.T)[0])
        raise InputError(f"{A.name} is not abelian: {a}*{b} != {b}*{a}", witness={"a": a, "b": b})
    moduli: List[int] = []
    gens: List[int] = []
    for p in sorted(factorint(A.order)):
        mods, basis = _p_part_basis(A, int(p))
        moduli.extend(mods)
        gens.extend(basis)
    return AbelianDecomposition(A, moduli, gens)
