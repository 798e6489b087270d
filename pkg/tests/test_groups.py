from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from xmodkit.catalog import klein_group
from xmodkit.config import MAX_GROUP_ORDER
from xmodkit.errors import BudgetExceeded, GroupAxiomError, InputError
from xmodkit.groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    abelian_decompose,
    automorphism_group,
    center,
    direct_product,
    generated_subgroup,
    generators,
    homomorphisms,
    image,
    is_associative,
    is_isomorphic,
    is_normal,
    kernel,
    make_cyclic,
    normal_subgroups,
    quotient,
    trivial_group,
)

# A Latin square with identity 0 that is not associative: (1*1)*2 = 2 but 1*(1*2) = 4.
LOOP_OF_ORDER_5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def test_make_cyclic() -> None:
    assert make_cyclic(1).order == 1
    z4 = make_cyclic(4)
    assert z4.inv(1) == 3
    assert z4.mul(2, 3) == 1
    with pytest.raises(InputError):
        make_cyclic(0)


def test_tables_are_read_only(z4: FiniteGroup) -> None:
    with pytest.raises(ValueError):
        z4.table[1, 1] = 0


def test_missing_inverse_names_the_row() -> None:
    with pytest.raises(GroupAxiomError) as exc:
        FiniteGroup([[0, 1], [1, 1]])
    assert exc.value.witness == {"row": 1}
    assert "row 1" in str(exc.value)


def test_non_associative_table_is_rejected() -> None:
    assert is_associative(np.array(LOOP_OF_ORDER_5)) is not None
    with pytest.raises(GroupAxiomError, match="associativity"):
        FiniteGroup(LOOP_OF_ORDER_5)


def test_storage_bound() -> None:
    with pytest.raises(BudgetExceeded):
        FiniteGroup(np.zeros((3, 3), dtype=int), max_order=2)


def test_direct_product(z2: FiniteGroup, z3: FiniteGroup, s3: FiniteGroup) -> None:
    v4 = direct_product(z2, z2)
    assert v4.order == 4
    assert v4.exponent == 2
    assert is_isomorphic(direct_product(z2, z3), make_cyclic(6)) is not None
    assert is_isomorphic(direct_product(s3, trivial_group()), s3) is not None


def test_kernel_image_and_center(z4: FiniteGroup, s3: FiniteGroup) -> None:
    doubling = GroupHom(z4, z4, [0, 2, 0, 2])
    assert kernel(doubling).elements == (0, 2)
    assert image(doubling).elements == (0, 2)
    assert is_normal(image(doubling))
    assert center(s3).elements == (0,)


def test_non_homomorphism_is_rejected(z2: FiniteGroup, z4: FiniteGroup) -> None:
    with pytest.raises(InputError) as exc:
        GroupHom(z4, z2, [0, 1, 1, 0])
    assert set(exc.value.witness) == {"a", "b"}


def test_subgroup_must_be_closed(z4: FiniteGroup) -> None:
    with pytest.raises(InputError, match="not closed"):
        Subgroup(z4, [0, 1])


def test_quotients(z4: FiniteGroup, s3: FiniteGroup) -> None:
    q = quotient(z4, Subgroup(z4, [0, 2]))
    assert q.group.order == 2
    assert q.lift(0) == 0
    assert all(q.coset_of(q.lift(s)) == s for s in q.group.elements)
    assert q.members(1) == [1, 3]
    assert kernel(q.projection).elements == (0, 2)

    assert is_isomorphic(quotient(s3, Subgroup(s3, [0])).group, s3) is not None
    assert quotient(s3, Subgroup(s3, s3.elements)).group.order == 1


def test_quotient_by_non_normal_subgroup(s3: FiniteGroup) -> None:
    transposition = Subgroup(s3, [0, 1])
    assert not is_normal(transposition)
    with pytest.raises(InputError, match="not normal"):
        quotient(s3, transposition)


def test_normal_subgroups_of_s3(s3: FiniteGroup) -> None:
    assert [N.order for N in normal_subgroups(s3)] == [1, 3, 6]


def test_generators(z4: FiniteGroup, s3: FiniteGroup) -> None:
    assert generators(trivial_group()) == []
    assert generators(z4) == [1]
    gens = generators(s3)
    assert len(gens) == 2
    assert generated_subgroup(s3, gens).order == 6
    assert generated_subgroup(z4, [2]).members == {0, 2}


def test_automorphism_groups(z4: FiniteGroup) -> None:
    assert len(automorphism_group(z4)) == 2
    assert len(automorphism_group(klein_group())) == 6
    assert len(automorphism_group(trivial_group())) == 1
    with pytest.raises(BudgetExceeded):
        automorphism_group(make_cyclic(17))


def test_automorphisms_are_closed_under_composition() -> None:
    autos = automorphism_group(klein_group())
    assert np.array_equal(autos[0].images, np.arange(4))
    for a in autos:
        for b in autos:
            assert a.compose(b) in autos


def test_isomorphism_search(z4: FiniteGroup) -> None:
    assert is_isomorphic(z4, klein_group()) is None
    assert np.array_equal(is_isomorphic(z4, z4).images, np.arange(4))
    assert is_isomorphic(make_cyclic(6), direct_product(make_cyclic(2), make_cyclic(3))) is not None


def test_homomorphism_counts(z2: FiniteGroup, z4: FiniteGroup, s3: FiniteGroup) -> None:
    assert len(homomorphisms(z2, z4)) == 2
    assert len(homomorphisms(z4, z2)) == 2
    assert len(homomorphisms(s3, z2)) == 2
    assert len(homomorphisms(s3, s3)) == 10
    with pytest.raises(BudgetExceeded):
        homomorphisms(s3, s3, budget=1)


def test_abelian_decomposition(z4: FiniteGroup) -> None:
    assert abelian_decompose(z4).moduli == (4,)
    assert abelian_decompose(klein_group()).moduli == (2, 2)
    assert math.prod(abelian_decompose(make_cyclic(6)).moduli) == 6


def test_abelian_decomposition_rejects_non_abelian(s3: FiniteGroup) -> None:
    with pytest.raises(InputError, match="not abelian"):
        abelian_decompose(s3)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=2, max_value=6), min_size=1, max_size=3))
def test_decomposition_transports_addition(orders: list[int]) -> None:
    assume(math.prod(orders) <= MAX_GROUP_ORDER)
    A = make_cyclic(orders[0])
    for n in orders[1:]:
        A = direct_product(A, make_cyclic(n))
    dec = abelian_decompose(A)
    assert math.prod(dec.moduli) == A.order
    for a in A.elements:
        for b in A.elements:
            summed = tuple(x + y for x, y in zip(dec.to_coords(a), dec.to_coords(b)))
            assert dec.from_coords(summed) == A.mul(a, b)


def test_direct_product_above_the_storage_bound() -> None:
    A = direct_product(make_cyclic(2), make_cyclic(6))
    assert A.order == 12
    with pytest.raises(BudgetExceeded):
        direct_product(A, make_cyclic(6))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=24), st.integers(min_value=0, max_value=23))
def test_cyclic_element_orders(n: int, a: int) -> None:
    G = make_cyclic(n)
    a %= n
    assert G.element_order(a) == n // math.gcd(a, n)
    assert G.power(a, n) == 0
