"""
Standard groups, named crossed modules and the batteries built from them.

Named crossed modules are addressable from documents and the command
line as ``builtin:<name>``.
"""

from __future__ import annotations

import itertools
import logging
from typing import Callable, Dict, List, Tuple

import numpy as np

from .config import MAX_CATEGORY_SIZE
from .crossed import CrossedModule, derive, from_normal_subgroup, trivial_action, validate
from .errors import InputError
from .groups import (
    FiniteGroup,
    GroupHom,
    automorphism_group,
    dihedral_group,
    direct_product,
    from_function,
    homomorphisms,
    make_cyclic,
    normal_subgroups,
    symmetric_group,
    trivial_group,
    trivial_hom,
)

logger = logging.getLogger(__name__)

Quaternion = Tuple[int, int, int, int]


def quaternion_group() -> FiniteGroup:
    """Q8 as the unit quaternions +-1, +-i, +-j, +-k."""

    def mul(x: Quaternion, y: Quaternion) -> Quaternion:
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        return (
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    units = [tuple(int(v) for v in row) for row in np.eye(4, dtype=int)]
    elements = units + [tuple(-v for v in u) for u in units]
    return from_function(elements, mul, "Q8")


def klein_group() -> FiniteGroup:
    return direct_product(make_cyclic(2), make_cyclic(2), "V4")


def catalog_groups() -> List[FiniteGroup]:
    """Every group of order at most 8, up to isomorphism."""
    z2 = make_cyclic(2)
    return [
        trivial_group(),
        *(make_cyclic(n) for n in range(2, 9)),
        klein_group(),
        direct_product(z2, make_cyclic(4), "Z2xZ4"),
        direct_product(z2, klein_group(), "Z2^3"),
        symmetric_group(3),
        dihedral_group(4),
        quaternion_group(),
    ]


def automorphism_table_group(G: FiniteGroup) -> Tuple[FiniteGroup, List[GroupHom]]:
    """Aut G as a table group (identity first) with the automorphism behind each index."""
    autos = sorted(automorphism_group(G), key=lambda a: (not np.array_equal(a.images, np.arange(G.order)), a.images.tolist()))
    keys = [tuple(a.images.tolist()) for a in autos]
    group = from_function(keys, lambda s, t: tuple(s[i] for i in t), f"Aut({G.name})")
    return group, autos


def actions(D: FiniteGroup, B: FiniteGroup) -> List[np.ndarray]:
    """Every action of D on B by automorphisms, as theta tables."""
    aut, autos = automorphism_table_group(B)
    return [np.array([autos[h(x)].images for x in D.elements]) for h in homomorphisms(D, aut)]


# Named crossed modules


def _central(B: FiniteGroup, name: str) -> CrossedModule:
    D = trivial_group()
    return CrossedModule(B, D, trivial_hom(B, D), trivial_action(B, D), name)


def _doubling(inverting: bool, name: str) -> CrossedModule:
    z4 = make_cyclic(4)
    d = GroupHom(z4, z4, [(2 * b) % 4 for b in z4.elements])
    theta = [[(-b) % 4 if inverting and x % 2 else b for b in z4.elements] for x in z4.elements]
    return CrossedModule(z4, z4, d, theta, name)


def _normal_inclusion(D: FiniteGroup, order: int, exponent: int, name: str) -> CrossedModule:
    for N in normal_subgroups(D):
        group, _ = N.as_group()
        if N.order == order and group.exponent == exponent:
            return from_normal_subgroup(D, N, name)
    raise InputError(f"{D.name} has no normal subgroup of order {order} and exponent {exponent}")


def _swap_on_klein() -> CrossedModule:
    B, D = klein_group(), make_cyclic(2)
    swap = [0, 2, 1, 3]
    return CrossedModule(B, D, trivial_hom(B, D), [list(B.elements), swap], "z2-on-klein")


CROSSED_MODULES: Dict[str, Callable[[], CrossedModule]] = {
    "trivial": lambda: _central(trivial_group(), "trivial"),
    "central-z2": lambda: _central(make_cyclic(2), "central-z2"),
    "central-z3": lambda: _central(make_cyclic(3), "central-z3"),
    "inversion": lambda: _doubling(True, "inversion"),
    "inversion-trivial": lambda: _doubling(False, "inversion-trivial"),
    "a3-in-s3": lambda: _normal_inclusion(symmetric_group(3), 3, 3, "a3-in-s3"),
    "klein-in-d4": lambda: _normal_inclusion(dihedral_group(4), 4, 2, "klein-in-d4"),
    "z2-on-klein": _swap_on_klein,
}


def builtin_crossed_module(name: str) -> CrossedModule:
    """Raises InputError for unknown names."""
    try:
        factory = CROSSED_MODULES[name]
    except KeyError:
        raise InputError(f"unknown builtin crossed module {name!r}; known: {sorted(CROSSED_MODULES)}") from None
    return factory().require_valid()


# Batteries


def crossed_module_battery(max_size: int = MAX_CATEGORY_SIZE, *, max_cyclic: int = 6) -> List[CrossedModule]:
    """Valid crossed modules from normal subgroups, cyclic maps and abelian actions.

    Args:
        max_size: Bound on |B|*|D|
        max_cyclic: Largest n used for Z/m -> Z/n
    """
    battery: List[CrossedModule] = []

    for G in catalog_groups():
        for N in normal_subgroups(G):
            if N.order * G.order <= max_size:
                battery.append(from_normal_subgroup(G, N, f"{N.order}<|{G.name}"))

    for m, n in itertools.product(range(1, max_cyclic + 1), repeat=2):
        B, D = make_cyclic(m), make_cyclic(n)
        inversion = np.array([[(-b) % m if x % 2 else b for b in B.elements] for x in D.elements])
        for a in range(n):
            if (m * a) % n:
                continue
            d = GroupHom(B, D, [(a * b) % n for b in B.elements])
            thetas = [("id", trivial_action(B, D))]
            if n % 2 == 0 and m > 2:
                thetas.append(("inv", inversion))
            for label, theta in thetas:
                xm = CrossedModule(B, D, d, theta, f"Z{m}-{a}x->Z{n}/{label}")
                if validate(xm).is_valid:
                    battery.append(xm)

    for B in (make_cyclic(3), make_cyclic(4), klein_group()):
        for D in (make_cyclic(2), make_cyclic(3), symmetric_group(3)):
            if B.order * D.order > max_size:
                continue
            for i, theta in enumerate(actions(D, B)):
                battery.append(CrossedModule(B, D, trivial_hom(B, D), theta, f"{D.name}-on-{B.name}#{i}"))

    logger.debug("Crossed module battery: %d entries", len(battery))
    return battery


def psi_of(xm: CrossedModule, Q: FiniteGroup, images: List[int]) -> GroupHom:
    return GroupHom(Q, derive(xm).coker_group, images)


def extension_instances() -> List[Tuple[CrossedModule, GroupHom, int]]:
    """(xm, psi, expected class count) for small desk-scale classification problems."""
    z2, z3, z4, v4 = make_cyclic(2), make_cyclic(3), make_cyclic(4), klein_group()
    c2, c3 = builtin_crossed_module("central-z2"), builtin_crossed_module("central-z3")
    inversion = builtin_crossed_module("inversion")
    flat = builtin_crossed_module("inversion-trivial")
    a3, klein = builtin_crossed_module("a3-in-s3"), builtin_crossed_module("klein-in-d4")
    swap = builtin_crossed_module("z2-on-klein")
    trivial = builtin_crossed_module("trivial")
    return [
        (c2, psi_of(c2, z2, [0, 0]), 2),
        (c2, psi_of(c2, v4, [0, 0, 0, 0]), 8),
        (c2, psi_of(c2, z3, [0, 0, 0]), 1),
        (c2, psi_of(c2, z4, [0, 0, 0, 0]), 2),
        (c3, psi_of(c3, z3, [0, 0, 0]), 3),
        (inversion, psi_of(inversion, z2, [0, 1]), 0),
        (inversion, psi_of(inversion, z2, [0, 0]), 2),
        (flat, psi_of(flat, z2, [0, 1]), 2),
        (a3, psi_of(a3, z2, [0, 1]), 1),
        (klein, psi_of(klein, z2, [0, 1]), 1),
        (swap, psi_of(swap, z2, [0, 1]), 1),
        (swap, psi_of(swap, z2, [0, 0]), 4),
        (trivial, psi_of(trivial, z2, [0, 0]), 1),
    ]
