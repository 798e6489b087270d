from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xmodkit.cohomology import (
    Cochain,
    GModule,
    are_cohomologous,
    coboundary,
    cocycle_generators,
    h2_representatives,
    h_order,
    h_order_exhaustive,
    is_cocycle,
    pullback_cochain,
    pullback_module,
    pushforward_cochain,
    random_cochain,
    solve_coboundary,
)
from xmodkit.errors import BudgetExceeded, CohomologyError, InputError
from xmodkit.groups import FiniteGroup, GroupHom, make_cyclic
from xmodkit.records import CochainRecord


def inversion_module(n: int) -> GModule:
    """Z/2 acting on Z/n by a -> -a."""
    return GModule(make_cyclic(2), make_cyclic(n), [list(range(n)), [(-a) % n for a in range(n)]], f"Z{n}-")


def test_coefficients_must_be_abelian(z2: FiniteGroup, s3: FiniteGroup) -> None:
    with pytest.raises(CohomologyError, match="not abelian"):
        GModule.trivial(z2, s3)


def test_action_must_be_by_automorphisms(z2: FiniteGroup, z3: FiniteGroup) -> None:
    with pytest.raises(CohomologyError) as exc:
        GModule(z2, z3, [[0, 1, 2], [0, 0, 0]])
    assert exc.value.witness == {"u": 1}


def test_cochain_storage(z3: FiniteGroup) -> None:
    module = GModule.trivial(z3, z3)
    c = Cochain.from_items(module, 2, {(1, 2): 1, (2, 2): 2, (0, 1): 0})
    assert c.values.shape == (4,)
    assert c(1, 2) == 1
    assert c(0, 2) == 0
    assert c.items() == {(1, 2): 1, (2, 2): 2}
    assert c.full().shape == (3, 3)
    assert (c - c).is_zero
    assert (c + Cochain.zero(module, 2)) == c


def test_cochain_errors(z3: FiniteGroup) -> None:
    module = GModule.trivial(z3, z3)
    with pytest.raises(CohomologyError, match="vanish"):
        Cochain.from_items(module, 2, {(0, 1): 1})
    with pytest.raises(CohomologyError, match="needs 4 values"):
        Cochain(module, 2, [0, 1])
    with pytest.raises(CohomologyError, match="degree"):
        Cochain.zero(module, 5)
    with pytest.raises(CohomologyError, match="arguments"):
        Cochain.zero(module, 2)(1)
    with pytest.raises(CohomologyError, match="different"):
        Cochain.zero(module, 2) + Cochain.zero(module, 3)


def test_cochain_records(z3: FiniteGroup) -> None:
    module = GModule.trivial(z3, z3)
    c = Cochain.from_items(module, 2, {(1, 1): 2})
    assert c.to_record().values == {"1,1": 2}
    assert Cochain.from_record(module, CochainRecord.model_validate_json(c.to_record().model_dump_json())) == c
    with pytest.raises(CohomologyError, match="not a tuple of elements"):
        Cochain.from_record(module, CochainRecord(degree=2, values={"1,7": 1}))
    with pytest.raises(InputError):
        Cochain.from_record(module, CochainRecord(degree=2, values={"1": 1}))


def test_coboundary_formula_in_degree_one(z4: FiniteGroup) -> None:
    module = GModule.trivial(z4, z4)
    g = Cochain.from_function(module, 1, lambda u: u)
    # g is a homomorphism, so its coboundary vanishes
    assert is_cocycle(g)
    h = Cochain.from_items(module, 1, {(1,): 1})
    assert coboundary(h)(1, 1) == 2
    assert coboundary(h)(1, 2) == 1
    assert coboundary(h)(2, 2) == 0


def test_coboundary_degree_bound(z2: FiniteGroup) -> None:
    with pytest.raises(CohomologyError):
        coboundary(Cochain.zero(GModule.trivial(z2, z2), 4))
    with pytest.raises(CohomologyError):
        h_order(GModule.trivial(z2, z2), 4)


@pytest.mark.parametrize("n,m", [(1, 3), (2, 2), (2, 3), (3, 3), (4, 2), (2, 4), (4, 6), (6, 4), (5, 5)])
def test_cyclic_cohomology_with_trivial_action(n: int, m: int) -> None:
    module = GModule.trivial(make_cyclic(n), make_cyclic(m))
    assert h_order(module, 2) == math.gcd(n, m)
    assert h_order(module, 3) == math.gcd(n, m)


def test_klein_four_with_z2_coefficients(v4: FiniteGroup, z2: FiniteGroup) -> None:
    module = GModule.trivial(v4, z2)
    assert h_order(module, 2) == 8
    assert h_order_exhaustive(module, 2) == 8


def test_twisted_coefficients() -> None:
    module = inversion_module(4)
    assert h_order(module, 2) == 2
    assert h_order(module, 3) == 2
    assert h_order_exhaustive(module, 2) == 2
    assert h_order(inversion_module(3), 2) == 1


@pytest.mark.parametrize("n,m", [(2, 2), (3, 3), (2, 3)])
def test_exhaustive_agrees_in_degree_three(n: int, m: int) -> None:
    module = GModule.trivial(make_cyclic(n), make_cyclic(m))
    assert h_order_exhaustive(module, 3) == h_order(module, 3)


def test_exhaustive_budget(z4: FiniteGroup, z2: FiniteGroup) -> None:
    with pytest.raises(BudgetExceeded):
        h_order_exhaustive(GModule.trivial(z4, z2), 3)
    with pytest.raises(CohomologyError):
        h_order_exhaustive(GModule.trivial(z2, z2), 4)


def test_the_nontrivial_three_class_over_z2(z2: FiniteGroup) -> None:
    module = GModule.trivial(z2, z2)
    k = Cochain.from_items(module, 3, {(1, 1, 1): 1})
    assert is_cocycle(k)
    assert solve_coboundary(k) is None
    assert solve_coboundary(k, method="exhaustive") is None
    with pytest.raises(CohomologyError, match="unknown solver"):
        solve_coboundary(k, method="guess")


def test_h2_representatives(v4: FiniteGroup, z2: FiniteGroup) -> None:
    module = GModule.trivial(v4, z2)
    reps = h2_representatives(module)
    assert len(reps) == 8
    assert reps[0].is_zero
    assert all(is_cocycle(r) for r in reps)
    for i, a in enumerate(reps):
        for b in reps[i + 1 :]:
            assert are_cohomologous(a, b) is None


def test_cocycle_generators_are_cocycles() -> None:
    module = inversion_module(4)
    for n in (2, 3):
        gens = cocycle_generators(module, n)
        assert gens
        assert all(is_cocycle(g) for g in gens)


MODULES = [
    GModule.trivial(make_cyclic(2), make_cyclic(2)),
    GModule.trivial(make_cyclic(3), make_cyclic(6)),
    GModule.trivial(make_cyclic(4), make_cyclic(4)),
    inversion_module(4),
    inversion_module(6),
]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(MODULES), st.integers(min_value=0, max_value=2), st.integers(min_value=0, max_value=2**31))
def test_coboundaries_are_cocycles(module: GModule, degree: int, seed: int) -> None:
    g = random_cochain(module, degree, np.random.default_rng(seed))
    assert is_cocycle(coboundary(g))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(MODULES), st.integers(min_value=1, max_value=2), st.integers(min_value=0, max_value=2**31))
def test_linear_solver_finds_preimages(module: GModule, degree: int, seed: int) -> None:
    target = coboundary(random_cochain(module, degree, np.random.default_rng(seed)))
    g = solve_coboundary(target)
    assert g is not None
    assert coboundary(g) == target


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**31))
def test_solvers_agree_on_random_two_cochains(seed: int) -> None:
    module = GModule.trivial(make_cyclic(3), make_cyclic(3))
    target = random_cochain(module, 2, np.random.default_rng(seed))
    linear = solve_coboundary(target)
    exhaustive = solve_coboundary(target, method="exhaustive")
    assert (linear is None) == (exhaustive is None)


def test_pullback_and_pushforward(z2: FiniteGroup, z4: FiniteGroup) -> None:
    module = GModule.trivial(z2, z2)
    k = Cochain.from_items(module, 3, {(1, 1, 1): 1})
    projection = GroupHom(z4, z2, [0, 1, 0, 1])
    pulled = pullback_cochain(k, projection)
    assert pulled.module == pullback_module(module, projection)
    assert pulled(1, 3, 1) == 1
    assert pulled(2, 1, 1) == 0
    assert is_cocycle(pulled)

    doubling = GroupHom(z2, z4, [0, 2])
    pushed = pushforward_cochain(k, doubling, GModule.trivial(z2, z4))
    assert pushed(1, 1, 1) == 2
    assert is_cocycle(pushed)
    with pytest.raises(CohomologyError):
        pushforward_cochain(k, doubling, GModule.trivial(z4, z4))
