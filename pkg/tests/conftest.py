"""Shared fixtures: small groups, the named crossed modules and psi maps into their cokernels."""

from __future__ import annotations

import pytest

from xmodkit.catalog import builtin_crossed_module, klein_group, psi_of
from xmodkit.crossed import CrossedModule
from xmodkit.groups import FiniteGroup, GroupHom, make_cyclic, symmetric_group


@pytest.fixture
def z2() -> FiniteGroup:
    return make_cyclic(2)


@pytest.fixture
def z3() -> FiniteGroup:
    return make_cyclic(3)


@pytest.fixture
def z4() -> FiniteGroup:
    return make_cyclic(4)


@pytest.fixture
def v4() -> FiniteGroup:
    return klein_group()


@pytest.fixture
def s3() -> FiniteGroup:
    return symmetric_group(3)


@pytest.fixture
def central_z2() -> CrossedModule:
    """Z/2 -> 1."""
    return builtin_crossed_module("central-z2")


@pytest.fixture
def inversion() -> CrossedModule:
    """Z/4 -2x-> Z/4 with theta_x = inversion^x."""
    return builtin_crossed_module("inversion")


@pytest.fixture
def inversion_trivial() -> CrossedModule:
    return builtin_crossed_module("inversion-trivial")


@pytest.fixture
def a3_in_s3() -> CrossedModule:
    return builtin_crossed_module("a3-in-s3")


@pytest.fixture
def z2_on_klein() -> CrossedModule:
    return builtin_crossed_module("z2-on-klein")


@pytest.fixture
def trivial_psi(central_z2: CrossedModule, z2: FiniteGroup) -> GroupHom:
    """Z/2 -> Coker(Z/2 -> 1) = 1."""
    return psi_of(central_z2, z2, [0, 0])


@pytest.fixture
def inversion_psi(inversion: CrossedModule, z2: FiniteGroup) -> GroupHom:
    """The identity Z/2 -> Coker d of the inversion crossed module."""
    return psi_of(inversion, z2, [0, 1])
