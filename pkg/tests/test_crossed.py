from __future__ import annotations

import numpy as np
import pytest

from xmodkit.catalog import crossed_module_battery
from xmodkit.crossed import (
    CrossedModule,
    XModMorphism,
    compose_morphisms,
    derive,
    from_normal_subgroup,
    identity_morphism,
    morphisms,
    trivial_action,
    validate,
    validate_morphism,
)
from xmodkit.errors import CrossedModuleError, InputError
from xmodkit.groups import FiniteGroup, GroupHom, Subgroup, identity_hom, trivial_group, trivial_hom
from xmodkit.records import CrossedModuleRecord

BATTERY = crossed_module_battery(max_size=24, max_cyclic=4)


def test_named_crossed_modules_are_valid(inversion: CrossedModule, a3_in_s3: CrossedModule) -> None:
    assert validate(inversion).is_valid
    assert validate(a3_in_s3).is_valid
    assert "valid" in validate(inversion).render_text()


def test_non_abelian_group_over_a_point_breaks_peiffer(s3: FiniteGroup) -> None:
    point = trivial_group()
    xm = CrossedModule(s3, point, trivial_hom(s3, point), trivial_action(s3, point), "s3-point")
    report = validate(xm)
    assert report.rules() == {"peiffer"}
    with pytest.raises(CrossedModuleError, match="peiffer"):
        xm.require_valid()


def test_inverting_identity_breaks_equivariance(z4: FiniteGroup) -> None:
    inversion = [[b if x % 2 == 0 else (-b) % 4 for b in z4.elements] for x in z4.elements]
    report = validate(CrossedModule(z4, z4, identity_hom(z4), inversion, "bad"))
    assert {"equivariance", "peiffer"} <= report.rules()


def test_non_bijective_theta_stops_validation(z2: FiniteGroup) -> None:
    report = validate(CrossedModule(z2, z2, trivial_hom(z2, z2), [[0, 1], [0, 0]], "collapse"))
    assert report.rules() == {"theta_automorphism"}
    assert report.violations[0].witness == {"x": 1}


def test_theta_shape_is_checked(z2: FiniteGroup, z3: FiniteGroup) -> None:
    with pytest.raises(InputError, match="one row"):
        CrossedModule(z2, z3, trivial_hom(z2, z3), [[0, 1]])
    with pytest.raises(InputError) as exc:
        CrossedModule(z2, z2, trivial_hom(z2, z2), [[0, 1], [0, 2]])
    assert exc.value.witness == {"x": 1, "b": 1}


def test_derive_inversion(inversion: CrossedModule) -> None:
    data = derive(inversion)
    assert data.ker_d.elements == (0, 2)
    assert data.im_d.elements == (0, 2)
    assert data.coker_group.order == 2
    assert data.coker.section == (0, 1)
    # theta_1 fixes both kernel elements
    assert data.phi.tolist() == [[0, 1], [0, 1]]

    summary = data.summary()
    assert summary.kernel_is_central
    assert summary.image_is_normal
    assert summary.phi == [[0, 2], [0, 2]]


def test_derive_a_normal_inclusion(a3_in_s3: CrossedModule) -> None:
    data = derive(a3_in_s3)
    assert data.ker_d.order == 1
    assert data.coker_group.order == 2


def test_derive_rejects_invalid_input(s3: FiniteGroup) -> None:
    point = trivial_group()
    with pytest.raises(CrossedModuleError):
        derive(CrossedModule(s3, point, trivial_hom(s3, point), trivial_action(s3, point)))


def test_derive_rejects_a_bad_section(inversion: CrossedModule) -> None:
    with pytest.raises(InputError, match="section"):
        derive(inversion, section=[0, 2])
    assert derive(inversion, section=[2, 3]).coker.section == (0, 1)


def test_normal_inclusion_requires_normality(s3: FiniteGroup) -> None:
    with pytest.raises(InputError, match="not normal"):
        from_normal_subgroup(s3, Subgroup(s3, [0, 1]))


def test_record_roundtrip(inversion: CrossedModule) -> None:
    record = CrossedModuleRecord.model_validate_json(inversion.to_record().model_dump_json())
    again = CrossedModule.from_record(record)
    assert again == inversion
    assert again.name == "inversion"


def test_self_morphisms_of_central_z2(central_z2: CrossedModule) -> None:
    found = morphisms(central_z2, central_z2)
    assert len(found) == 2
    assert identity_morphism(central_z2) in found
    assert sum(m.is_isomorphism() for m in found) == 1


def test_square_violation(inversion: CrossedModule, z4: FiniteGroup) -> None:
    m = XModMorphism(inversion, inversion, identity_hom(z4), GroupHom(z4, z4, [0, 0, 0, 0]))
    report = validate_morphism(m)
    assert "square" in report.rules()
    square = next(v for v in report.violations if v.rule == "square")
    assert square.witness == {"b": 1}


def test_composition(inversion: CrossedModule, central_z2: CrossedModule) -> None:
    ident = identity_morphism(inversion)
    assert compose_morphisms(ident, ident) == ident
    with pytest.raises(CrossedModuleError, match="cannot compose"):
        compose_morphisms(identity_morphism(central_z2), ident)


def test_composites_of_morphisms_are_morphisms(inversion: CrossedModule) -> None:
    found = morphisms(inversion, inversion)
    for a in found:
        for b in found:
            assert validate_morphism(compose_morphisms(a, b)).is_valid


def test_morphism_components_must_match(central_z2: CrossedModule, z2: FiniteGroup) -> None:
    with pytest.raises(CrossedModuleError):
        XModMorphism(central_z2, central_z2, identity_hom(z2), identity_hom(z2))


@pytest.mark.parametrize("xm", BATTERY, ids=lambda xm: xm.name)
def test_battery_derived_data(xm: CrossedModule) -> None:
    assert validate(xm).is_valid
    data = derive(xm)
    assert data.ker_d.order * data.im_d.order == xm.B.order
    assert data.coker_group.order * data.im_d.order == xm.D.order
    k = data.kernel_group.order
    for row in data.phi:
        assert sorted(row.tolist()) == list(range(k))
    assert np.array_equal(data.phi[0], np.arange(k))
