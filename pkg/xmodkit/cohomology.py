"""
Normalized group cochains with coefficients in a finite Q-module.

A degree-n cochain is stored densely over the non-identity tuples of Q^n
(row-major over the elements 1..|Q|-1), so normalization is built in.
The coboundary is

    (dg)(u1, ..., u_{n+1}) = u1.g(u2, ..., u_{n+1})
                             + sum_i (-1)^i g(..., u_i u_{i+1}, ...)
                             + (-1)^(n+1) g(u1, ..., u_n)

which in degree 2 reads u.f(v, t) - f(uv, t) + f(u, vt) - f(u, v), the
twisted cocycle condition satisfied by factor sets.

Linear algebra runs prime by prime through ``linalg.LocalSmithForm``;
exhaustive counterparts are kept as oracles for small instances.
"""

from __future__ import annotations

import itertools
import logging
from functools import cached_property, lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_BUDGET
from .errors import BudgetExceeded, CohomologyError
from .groups import AbelianDecomposition, FiniteGroup, GroupHom, abelian_decompose
from .linalg import LocalSmithForm
from .records import CochainRecord, ModuleRecord, format_key, parse_key

logger = logging.getLogger(__name__)

MAX_DEGREE = 4
# entries of the largest coboundary batch evaluated at once
MAX_BATCH_ENTRIES = 2**24


class GModule:
    """A finite abelian group A with an action of Q; ``action[u]`` is the table of u acting on A."""

    def __init__(
        self,
        Q: FiniteGroup,
        A: FiniteGroup,
        action: Sequence[Sequence[int]] | np.ndarray,
        name: str = "A",
    ) -> None:
        if not A.is_abelian:
            raise CohomologyError(f"coefficient group {A.name} is not abelian")
        table = np.array(action, dtype=np.int64)
        if table.shape != (Q.order, A.order):
            raise CohomologyError(f"action must have shape ({Q.order}, {A.order}), got {table.shape}")
        if ((table < 0) | (table >= A.order)).any():
            raise CohomologyError("action takes values outside A")
        for u in Q.elements:
            row = table[u]
            if len(np.unique(row)) != A.order or (row[A.table] != A.table[row[:, None], row[None, :]]).any():
                raise CohomologyError(f"element {u} of Q does not act by an automorphism", witness={"u": u})
        if not np.array_equal(table[Q.table], table[np.arange(Q.order)[:, None, None], table[None, :, :]]):
            raise CohomologyError("action is not a homomorphism Q -> Aut A")
        table.flags.writeable = False
        self.Q = Q
        self.A = A
        self.action = table
        self.name = name

    @classmethod
    def trivial(cls, Q: FiniteGroup, A: FiniteGroup, name: str = "A") -> GModule:
        return cls(Q, A, np.tile(np.arange(A.order), (Q.order, 1)), name)

    @cached_property
    def decomposition(self) -> AbelianDecomposition:
        return abelian_decompose(self.A)

    def act(self, u: int, a: int) -> int:
        return int(self.action[u, a])

    @property
    def is_trivial_action(self) -> bool:
        return bool((self.action == np.arange(self.A.order)).all())

    def tuples(self, degree: int) -> int:
        """Number of non-identity tuples of Q^degree."""
        return (self.Q.order - 1) ** degree

    def to_record(self) -> ModuleRecord:
        return ModuleRecord(Q=self.Q.to_record(), A=self.A.to_record(), action=self.action.tolist())

    @classmethod
    def from_record(cls, record: ModuleRecord) -> GModule:
        return cls(FiniteGroup.from_record(record.Q), FiniteGroup.from_record(record.A), record.action)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GModule):
            return NotImplemented
        return self.Q == other.Q and self.A == other.A and bool(np.array_equal(self.action, other.action))

    def __hash__(self) -> int:
        return hash((self.Q, self.A, self.action.tobytes()))

    def __repr__(self) -> str:
        return f"GModule({self.name!r}, |Q|={self.Q.order}, |A|={self.A.order})"


def _check_degree(degree: int) -> None:
    if not 0 <= degree <= MAX_DEGREE:
        raise CohomologyError(f"cochain degree must be in 0..{MAX_DEGREE}, got {degree}")


class Cochain:
    """A normalized n-cochain Q^n -> A."""

    def __init__(self, module: GModule, degree: int, values: Sequence[int] | np.ndarray) -> None:
        _check_degree(degree)
        arr = np.array(values, dtype=np.int64).reshape(-1)
        if arr.shape != (module.tuples(degree),):
            raise CohomologyError(
                f"degree-{degree} cochain needs {module.tuples(degree)} values, got {arr.shape[0]}"
            )
        if ((arr < 0) | (arr >= module.A.order)).any():
            raise CohomologyError("cochain takes values outside A")
        arr.flags.writeable = False
        self.module = module
        self.degree = degree
        self.values = arr

    @classmethod
    def zero(cls, module: GModule, degree: int) -> Cochain:
        return cls(module, degree, np.zeros(module.tuples(degree), dtype=np.int64))

    @classmethod
    def from_function(cls, module: GModule, degree: int, fn: Callable[..., int]) -> Cochain:
        """Tabulate fn on non-identity tuples; identity arguments are forced to 0."""
        values = [fn(*args) for args in nonidentity_tuples(module.Q, degree)]
        return cls(module, degree, values)

    @classmethod
    def from_items(cls, module: GModule, degree: int, items: Dict[Tuple[int, ...], int]) -> Cochain:
        """Build from a sparse mapping; tuples containing the identity must map to 0."""
        values = np.zeros(module.tuples(degree), dtype=np.int64)
        for args, a in items.items():
            if 0 in args:
                if a != 0:
                    raise CohomologyError(f"normalized cochain must vanish on {args}")
                continue
            values[tuple_index(module.Q, args)] = a
        return cls(module, degree, values)

    def __call__(self, *args: int) -> int:
        if len(args) != self.degree:
            raise CohomologyError(f"expected {self.degree} arguments, got {len(args)}")
        if 0 in args:
            return 0
        return int(self.values[tuple_index(self.module.Q, args)])

    def full(self) -> np.ndarray:
        """Values on all of Q^n (zero on tuples containing the identity)."""
        return _full_tables(self.module, self.degree, self.values[None, :])[0]

    @property
    def is_zero(self) -> bool:
        return not self.values.any()

    def items(self) -> Dict[Tuple[int, ...], int]:
        """Nonzero values keyed by argument tuple."""
        return {
            args: int(v)
            for args, v in zip(nonidentity_tuples(self.module.Q, self.degree), self.values)
            if v != 0
        }

    def _same_space(self, other: Cochain) -> None:
        if self.module != other.module or self.degree != other.degree:
            raise CohomologyError("cochains live in different cochain groups")

    def __add__(self, other: Cochain) -> Cochain:
        self._same_space(other)
        return Cochain(self.module, self.degree, self.module.A.table[self.values, other.values])

    def __neg__(self) -> Cochain:
        return Cochain(self.module, self.degree, self.module.A.inverse[self.values])

    def __sub__(self, other: Cochain) -> Cochain:
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.module == other.module and self.degree == other.degree and bool(
            np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.values.tobytes()))

    def __repr__(self) -> str:
        return f"Cochain(degree={self.degree}, {self.items() or 0})"

    def to_record(self) -> CochainRecord:
        return CochainRecord(degree=self.degree, values={format_key(k): v for k, v in self.items().items()})

    @classmethod
    def from_record(cls, module: GModule, record: CochainRecord) -> Cochain:
        items = {parse_key(key, record.degree): value for key, value in record.values.items()}
        for args in items:
            if any(not 0 <= a < module.Q.order for a in args):
                raise CohomologyError(f"cochain key {args} is not a tuple of elements of Q")
        return cls.from_items(module, record.degree, items)


def nonidentity_tuples(Q: FiniteGroup, degree: int) -> Iterator[Tuple[int, ...]]:
    return itertools.product(range(1, Q.order), repeat=degree)


def tuple_index(Q: FiniteGroup, args: Sequence[int]) -> int:
    """Position of a non-identity tuple in the dense storage."""
    index = 0
    for a in args:
        index = index * (Q.order - 1) + (a - 1)
    return index


def _full_tables(module: GModule, degree: int, values: np.ndarray) -> np.ndarray:
    """Batch of dense values (K, N) -> tables (K, |Q|, ..., |Q|)."""
    q = module.Q.order
    K = values.shape[0]
    full = np.zeros((K,) + (q,) * degree, dtype=np.int64)
    full[(slice(None),) + (slice(1, None),) * degree] = values.reshape((K,) + (q - 1,) * degree)
    return full


def _coboundary_batch(module: GModule, degree: int, values: np.ndarray) -> np.ndarray:
    """Coboundaries of a batch of degree-n cochains, (K, N_n) -> (K, N_{n+1})."""
    q = module.Q.order
    n = degree
    K = values.shape[0]
    if K * q ** (n + 1) > MAX_BATCH_ENTRIES:
        raise BudgetExceeded(f"coboundary batch of {K} cochains over |Q| = {q} in degree {n} is too large")
    full = _full_tables(module, n, values)
    U = np.indices((q,) * (n + 1))
    batch = np.arange(K).reshape((K,) + (1,) * (n + 1))
    add, neg = module.A.table, module.A.inverse
    Qt = module.Q.table

    def g(args: Sequence[np.ndarray]) -> np.ndarray:
        return full[(batch,) + tuple(args)]

    result = module.action[U[0][None], g(U[1:])]
    for i in range(1, n + 1):
        args = [U[j] for j in range(i - 1)] + [Qt[U[i - 1], U[i]]] + [U[j] for j in range(i + 1, n + 1)]
        term = g(args)
        result = add[result, neg[term] if i % 2 else term]
    last = g(U[:n])
    result = add[result, neg[last] if (n + 1) % 2 else last]
    return result[(slice(None),) + (slice(1, None),) * (n + 1)].reshape(K, -1)


def coboundary(c: Cochain) -> Cochain:
    """The coboundary of a cochain of degree < 4.

    Raises:
        CohomologyError: If the degree is out of range
    """
    if c.degree >= MAX_DEGREE:
        raise CohomologyError(f"coboundary is defined up to degree {MAX_DEGREE - 1}, got {c.degree}")
    return Cochain(c.module, c.degree + 1, _coboundary_batch(c.module, c.degree, c.values[None, :])[0])


def is_cocycle(c: Cochain) -> bool:
    return coboundary(c).is_zero


class _Differential:
    """d: C^n -> C^(n+1) as one local Smith form per prime of |A|."""

    def __init__(self, module: GModule, degree: int) -> None:
        self.module = module
        self.degree = degree
        dec = module.decomposition
        n_in, n_out = module.tuples(degree), module.tuples(degree + 1)
        self.blocks: List[Tuple[int, List[int], int, LocalSmithForm, np.ndarray]] = []
        for p, positions in dec.prime_blocks().items():
            exps = [_exponent(dec.moduli[j], p) for j in positions]
            E = max(exps)
            width = len(positions)

            basis = np.zeros((n_in * width, n_in), dtype=np.int64)
            for t in range(n_in):
                for pos, j in enumerate(positions):
                    basis[t * width + pos, t] = dec.generators[j]
            images = _coboundary_batch(module, degree, basis) if len(basis) else np.zeros((0, n_out), dtype=np.int64)
            coords = dec.coords[images][:, :, positions]  # (columns, n_out, width)
            matrix = coords.reshape(n_in * width, n_out * width).T
            # embed Z/p^b into Z/p^E by multiplying with p^(E-b)
            row_scale = np.tile([p ** (E - e) for e in exps], n_out).astype(np.int64)
            snf = LocalSmithForm(matrix * row_scale[:, None], p, E)
            self.blocks.append((p, positions, E, snf, row_scale))

    def image_order(self) -> int:
        order = 1
        for _, _, _, snf, _ in self.blocks:
            order *= snf.image_order()
        return order

    def solve(self, target: np.ndarray) -> Optional[np.ndarray]:
        dec = self.module.decomposition
        n_in = self.module.tuples(self.degree)
        coords = dec.coords[target]  # (n_out, k)
        result = np.zeros((n_in, dec.rank), dtype=np.int64)
        for p, positions, E, snf, row_scale in self.blocks:
            y = coords[:, positions].reshape(-1) * row_scale
            x = snf.solve(y)
            if x is None:
                return None
            result[:, positions] = x.reshape(n_in, len(positions)) % np.array([dec.moduli[j] for j in positions])
        return _elements(dec, result)

    def kernel_generators(self) -> List[np.ndarray]:
        dec = self.module.decomposition
        n_in = self.module.tuples(self.degree)
        gens = []
        for p, positions, E, snf, _ in self.blocks:
            basis = snf.kernel_basis()
            mods = np.array([dec.moduli[j] for j in positions])
            for col in basis.T:
                coords = np.zeros((n_in, dec.rank), dtype=np.int64)
                coords[:, positions] = col.reshape(n_in, len(positions)) % mods
                if coords.any():
                    gens.append(_elements(dec, coords))
        return gens


def _exponent(m: int, p: int) -> int:
    e = 0
    while m % p == 0 and m > 1:
        m //= p
        e += 1
    return e


def _elements(dec: AbelianDecomposition, coords: np.ndarray) -> np.ndarray:
    if dec.rank == 0:
        return np.zeros(coords.shape[0], dtype=np.int64)
    return dec.element_of[tuple(coords.T)]


@lru_cache(maxsize=256)
def differential(module: GModule, degree: int) -> _Differential:
    """Cached local Smith forms of d in the given degree."""
    return _Differential(module, degree)


def solve_coboundary(target: Cochain, *, method: str = "linear", budget: int = DEFAULT_BUDGET) -> Optional[Cochain]:
    """Some g with dg = target, or None if target is not a coboundary.

    Args:
        target: Cochain of degree >= 1
        method: "linear" (Smith normal form) or "exhaustive" (enumeration)
        budget: Candidate bound for the exhaustive method
    """
    if target.degree < 1:
        raise CohomologyError("only cochains of degree >= 1 can be coboundaries")
    if method == "exhaustive":
        return solve_coboundary_exhaustive(target, budget=budget)
    if method != "linear":
        raise CohomologyError(f"unknown solver method {method!r}")
    module, n = target.module, target.degree - 1
    if target.is_zero:
        return Cochain.zero(module, n)
    values = differential(module, n).solve(target.values)
    if values is None:
        return None
    g = Cochain(module, n, values)
    if coboundary(g) != target:
        logger.error("Linear solver returned a wrong preimage for %r", target)
        raise CohomologyError("coboundary solver produced an invalid solution", witness=target.items())
    return g


def are_cohomologous(c1: Cochain, c2: Cochain) -> Optional[Cochain]:
    """Some g with dg = c1 - c2, or None."""
    return solve_coboundary(c1 - c2)


def _cochain_group_order(module: GModule, degree: int) -> int:
    return module.A.order ** module.tuples(degree)


def h_order(module: GModule, n: int) -> int:
    """|H^n(Q, A)| = |C^n| / |B^(n+1)| / |B^n| for n in {2, 3}."""
    if n not in (2, 3):
        raise CohomologyError(f"cohomology is computed in degrees 2 and 3, got {n}")
    cochains = _cochain_group_order(module, n)
    cocycles = cochains // differential(module, n).image_order()
    coboundaries = differential(module, n - 1).image_order()
    if cocycles % coboundaries:
        raise CohomologyError(f"|Z^{n}| = {cocycles} is not divisible by |B^{n}| = {coboundaries}")
    return cocycles // coboundaries


def cocycle_generators(module: GModule, n: int) -> List[Cochain]:
    """Cocycles generating Z^n."""
    return [Cochain(module, n, values) for values in differential(module, n).kernel_generators()]


def h2_representatives(module: GModule) -> List[Cochain]:
    """One cocycle per class of H^2, the zero cocycle first.

    Classes are reached by adding generators of Z^2 breadth first; two
    candidates are the same class when their difference solves dg = c - c'.
    """
    expected = h_order(module, 2)
    generators = cocycle_generators(module, 2)
    reps = [Cochain.zero(module, 2)]
    frontier = list(reps)
    while frontier and len(reps) < expected:
        next_frontier = []
        for rep in frontier:
            for gen in generators:
                candidate = rep + gen
                if all(are_cohomologous(candidate, r) is None for r in reps):
                    reps.append(candidate)
                    next_frontier.append(candidate)
                    if len(reps) == expected:
                        break
            if len(reps) == expected:
                break
        frontier = next_frontier
    if len(reps) != expected:
        raise CohomologyError(f"found {len(reps)} classes of H^2, expected {expected}")
    return reps


# Exhaustive oracles


def _all_values(module: GModule, degree: int, budget: int) -> Iterator[np.ndarray]:
    """All degree-n cochain value arrays, in chunks."""
    a, N = module.A.order, module.tuples(degree)
    total = a**N
    if total > budget:
        raise BudgetExceeded(f"{total} cochains of degree {degree} exceed the budget {budget}")
    chunk = max(1, min(total, MAX_BATCH_ENTRIES // max(module.Q.order ** (degree + 1), 1), 4096))
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.zeros((len(idx), N), dtype=np.int64)
        for pos in range(N - 1, -1, -1):
            idx, digits[:, pos] = np.divmod(idx, a)
        yield digits


def h_order_exhaustive(module: GModule, n: int, *, budget: int = DEFAULT_BUDGET) -> int:
    """|H^n| by enumerating every n-cochain and every (n-1)-cochain."""
    if n < 1 or n >= MAX_DEGREE:
        raise CohomologyError(f"exhaustive cohomology needs 1 <= n < {MAX_DEGREE}, got {n}")
    cocycles = 0
    for chunk in _all_values(module, n, budget):
        cocycles += int((~_coboundary_batch(module, n, chunk).any(axis=1)).sum())
    boundaries = set()
    for chunk in _all_values(module, n - 1, budget):
        boundaries.update(row.tobytes() for row in _coboundary_batch(module, n - 1, chunk))
    return cocycles // len(boundaries)


def solve_coboundary_exhaustive(target: Cochain, *, budget: int = DEFAULT_BUDGET) -> Optional[Cochain]:
    """First g (in enumeration order) with dg = target, or None."""
    module, n = target.module, target.degree - 1
    for chunk in _all_values(module, n, budget):
        hits = np.flatnonzero((_coboundary_batch(module, n, chunk) == target.values[None, :]).all(axis=1))
        if len(hits):
            return Cochain(module, n, chunk[hits[0]])
    return None


def random_cochain(module: GModule, degree: int, rng: np.random.Generator) -> Cochain:
    return Cochain(module, degree, rng.integers(0, module.A.order, size=module.tuples(degree)))


# Change of groups


def pullback_module(module: GModule, psi: GroupHom, name: Optional[str] = None) -> GModule:
    """A as a Q'-module through psi: Q' -> Q."""
    if psi.target != module.Q:
        raise CohomologyError("psi does not land in the acting group")
    return GModule(psi.source, module.A, module.action[psi.images], name or module.name)


def pullback_cochain(c: Cochain, psi: GroupHom, module: Optional[GModule] = None) -> Cochain:
    """psi*c (u1, ..., un) = c(psi u1, ..., psi un)."""
    module = module or pullback_module(c.module, psi)
    if module.Q != psi.source or module.A != c.module.A:
        raise CohomologyError("target module does not match psi and the coefficients")
    full = c.full()
    q = psi.source.order
    if c.degree == 0:
        return Cochain(module, 0, full.reshape(1))
    grids = np.indices((q - 1,) * c.degree) + 1
    values = full[tuple(psi.images[g] for g in grids)]
    return Cochain(module, c.degree, values.reshape(-1))


def pushforward_cochain(c: Cochain, f: GroupHom, module: GModule) -> Cochain:
    """f*c = f o c for a coefficient homomorphism f: A -> A'."""
    if f.source != c.module.A or f.target != module.A or module.Q != c.module.Q:
        raise CohomologyError("coefficient map does not match the modules")
    return Cochain(module, c.degree, f.images[c.values])
