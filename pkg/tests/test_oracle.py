from __future__ import annotations

import pytest

from xmodkit.catalog import extension_instances, psi_of
from xmodkit.crossed import CrossedModule
from xmodkit.errors import BudgetExceeded
from xmodkit.extensions import classify, validate_extension
from xmodkit.groups import FiniteGroup, GroupHom
from xmodkit.oracle import count_unreduced_functor_classes, enumerate_extensions_bruteforce, schreier_check


def test_oracle_over_a_point(central_z2: CrossedModule, trivial_psi: GroupHom) -> None:
    result = enumerate_extensions_bruteforce(central_z2, trivial_psi)
    assert result.candidates == 2
    assert result.constrained == 2
    assert len(result.extensions) == 2
    assert result.classes == [[0], [1]]
    assert all(validate_extension(ext).is_valid for ext in result.extensions)

    report = result.report(central_z2, trivial_psi)
    assert report.factor_sets == 2
    assert report.classes == 2
    assert report.class_sizes == [1, 1]


def test_oracle_finds_nothing_when_obstructed(inversion: CrossedModule, inversion_psi: GroupHom) -> None:
    result = enumerate_extensions_bruteforce(inversion, inversion_psi)
    assert result.candidates == 4
    assert result.constrained == 2
    assert result.extensions == []
    assert result.classes == []


def test_oracle_over_the_klein_group(central_z2: CrossedModule, v4: FiniteGroup) -> None:
    psi = psi_of(central_z2, v4, [0, 0, 0, 0])
    result = enumerate_extensions_bruteforce(central_z2, psi)
    assert result.candidates == 512
    assert len(result.extensions) == 16
    assert sorted(len(c) for c in result.classes) == [2] * 8


def test_oracle_budget(central_z2: CrossedModule, trivial_psi: GroupHom) -> None:
    with pytest.raises(BudgetExceeded):
        enumerate_extensions_bruteforce(central_z2, trivial_psi, budget=1)
    with pytest.raises(BudgetExceeded):
        count_unreduced_functor_classes(central_z2, trivial_psi, budget=1)


def test_unreduced_counts(
    central_z2: CrossedModule, trivial_psi: GroupHom, inversion: CrossedModule, inversion_psi: GroupHom, z2: FiniteGroup
) -> None:
    assert count_unreduced_functor_classes(central_z2, trivial_psi) == 2
    assert count_unreduced_functor_classes(inversion, inversion_psi) == 0
    assert count_unreduced_functor_classes(inversion, psi_of(inversion, z2, [0, 0])) == 2


def test_schreier_check(central_z2: CrossedModule, trivial_psi: GroupHom) -> None:
    report = schreier_check(central_z2, trivial_psi, slow=True)
    assert report.h2_order == 2
    assert (report.functor_classes, report.classified, report.oracle_classes, report.unreduced_classes) == (2, 2, 2, 2)
    assert report.agree
    assert "2 = 2 = 2 = 2" in report.render_text()


def test_schreier_check_without_the_slow_count(inversion: CrossedModule, inversion_psi: GroupHom) -> None:
    report = schreier_check(inversion, inversion_psi)
    assert report.unreduced_classes is None
    assert report.classified == 0
    assert report.agree


@pytest.mark.slow
@pytest.mark.parametrize(
    "xm,psi,expected",
    extension_instances(),
    ids=lambda v: v.name if isinstance(v, CrossedModule) else None,
)
def test_every_count_agrees_on_known_instances(xm: CrossedModule, psi: GroupHom, expected: int) -> None:
    report = schreier_check(xm, psi, slow=True)
    assert report.agree
    assert report.classified == expected
    assert len(classify(xm, psi, seed=3)) == expected
