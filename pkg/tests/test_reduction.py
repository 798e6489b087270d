from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xmodkit.catalog import builtin_crossed_module, psi_of
from xmodkit.cohomology import Cochain, GModule, coboundary
from xmodkit.crossed import CrossedModule, identity_morphism
from xmodkit.errors import InputError, ReductionError
from xmodkit.grcat import functor_from_morphism
from xmodkit.groups import FiniteGroup, GroupHom, identity_hom, trivial_hom
from xmodkit.records import ReducedRecord
from xmodkit.reduction import (
    ReducedGrCat,
    ReducedGrFunctor,
    choose_stick,
    discrete_reduced,
    functor_class_count,
    functor_obstruction,
    make_stick,
    realize_functor,
    reduce,
    reduced_functor_classes,
    reduced_functor_type,
    reduced_functors_homotopic,
    stick_independence,
    strict_action_collapse,
)


def test_canonical_stick_for_inversion(inversion: CrossedModule) -> None:
    stick = choose_stick(inversion)
    assert stick.reps == (0, 1)
    assert stick.connecting == (0, 0, 1, 1)
    assert stick.c(1, 1) == 3
    assert stick.c(0, 1) == 0


def test_inversion_reduces_to_the_nontrivial_class(inversion: CrossedModule) -> None:
    reduced = reduce(inversion)
    assert reduced.pi0.order == 2
    assert reduced.pi1.A.order == 2
    assert reduced.k.items() == {(1, 1, 1): 1}
    assert reduced.k_in_B(1, 1, 1) == 2
    assert reduced.k_in_B(0, 1, 1) == 0


def test_trivial_action_gives_zero_k(inversion_trivial: CrossedModule) -> None:
    assert reduce(inversion_trivial).k.is_zero


def test_alternative_stick(inversion: CrossedModule) -> None:
    other = make_stick(inversion, [0, 1], [0, 0, 3, 3])
    assert reduce(inversion, other).k == reduce(inversion).k
    g = stick_independence(inversion, choose_stick(inversion), other)
    assert coboundary(g).is_zero


def test_invalid_sticks(inversion: CrossedModule) -> None:
    with pytest.raises(ReductionError, match="x_1 = 1"):
        make_stick(inversion, [1, 0], [0, 0, 1, 1])
    with pytest.raises(ReductionError) as exc:
        make_stick(inversion, [0, 1], [0, 0, 0, 1])
    assert exc.value.witness == {"x": 2}
    with pytest.raises(ReductionError, match="must be 0"):
        make_stick(inversion, [0, 1], [0, 2, 1, 1])
    with pytest.raises(InputError, match="non-negative"):
        choose_stick(inversion, -1)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["inversion", "inversion-trivial", "klein-in-d4", "a3-in-s3"]), st.integers(1, 10_000))
def test_k_class_does_not_depend_on_the_stick(name: str, seed: int) -> None:
    xm = builtin_crossed_module(name)
    stick = choose_stick(xm, seed)
    assert stick.seed == seed
    assert strict_action_collapse(xm, stick)
    stick_independence(xm, choose_stick(xm), stick)


def test_reduced_records(inversion: CrossedModule, z3: FiniteGroup) -> None:
    reduced = reduce(inversion)
    again = ReducedGrCat.from_record(ReducedRecord.model_validate_json(reduced.to_record().model_dump_json()))
    assert again.k == reduced.k
    assert again.inclusion is None
    with pytest.raises(ReductionError, match="no inclusion"):
        again.k_in_B(1, 1, 1)

    module = GModule.trivial(z3, z3)
    broken = ReducedRecord(
        pi0=z3.to_record(),
        pi1=module.to_record(),
        k=Cochain.from_items(module, 3, {(1, 1, 1): 1}).to_record(),
    )
    with pytest.raises(ReductionError, match="3-cocycle"):
        ReducedGrCat.from_record(broken)


def test_functor_type_of_the_identity(inversion: CrossedModule) -> None:
    phi, f = reduced_functor_type(functor_from_morphism(identity_morphism(inversion)))
    reduced = reduce(inversion)
    assert phi == identity_hom(reduced.pi0)
    assert f == identity_hom(reduced.pi1.A)

    xi = functor_obstruction(phi, f, reduced.k, reduced.k)
    assert xi.is_zero
    F = realize_functor(phi, f, Cochain.zero(xi.module, 2), reduced.k, reduced.k)
    assert reduced_functors_homotopic(F, F) is not None


def test_unrealizable_type(inversion: CrossedModule) -> None:
    reduced = reduce(inversion)
    phi = identity_hom(reduced.pi0)
    zero = trivial_hom(reduced.pi1.A, reduced.pi1.A)
    xi = functor_obstruction(phi, zero, reduced.k, reduced.k)
    assert xi == reduced.k
    with pytest.raises(ReductionError, match="obstruction"):
        realize_functor(phi, zero, Cochain.zero(xi.module, 2), reduced.k, reduced.k)


def test_functors_with_different_types_are_not_homotopic(inversion_trivial: CrossedModule) -> None:
    reduced = reduce(inversion_trivial)
    Q, A = reduced.pi0, reduced.pi1.A
    g = Cochain.zero(reduced.pi1, 2)
    F = ReducedGrFunctor(identity_hom(Q), identity_hom(A), g)
    G = ReducedGrFunctor(identity_hom(Q), trivial_hom(A, A), g)
    assert reduced_functors_homotopic(F, G) is None


def test_discrete_reduced(z3: FiniteGroup) -> None:
    dis = discrete_reduced(z3)
    assert dis.pi0 == z3
    assert dis.pi1.A.order == 1
    assert dis.k.is_zero


def test_functor_classes_into_a_central_extension(central_z2: CrossedModule, trivial_psi: GroupHom) -> None:
    classes = reduced_functor_classes(reduce(central_z2), trivial_psi)
    assert len(classes) == 2
    assert reduced_functors_homotopic(classes[0], classes[1]) is None
    assert functor_class_count(central_z2, trivial_psi) == 2


def test_obstructed_type_has_no_functors(inversion: CrossedModule, inversion_psi: GroupHom, z2: FiniteGroup) -> None:
    assert functor_class_count(inversion, inversion_psi) == 0
    assert functor_class_count(inversion, psi_of(inversion, z2, [0, 0])) == 2
