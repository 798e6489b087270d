from __future__ import annotations

import itertools

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from xmodkit.linalg import LocalSmithForm, valuations

PRIME_POWERS = st.sampled_from([(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])


@st.composite
def local_problems(draw: st.DrawFn) -> tuple[int, int, np.ndarray]:
    p, E = draw(PRIME_POWERS)
    rows = draw(st.integers(min_value=1, max_value=3))
    cols = draw(st.integers(min_value=1, max_value=3))
    entries = draw(st.lists(st.integers(min_value=0, max_value=p**E - 1), min_size=rows * cols, max_size=rows * cols))
    return p, E, np.array(entries, dtype=np.int64).reshape(rows, cols)


def _span(A: np.ndarray, q: int) -> set[tuple[int, ...]]:
    return {tuple((A @ np.array(x)) % q) for x in itertools.product(range(q), repeat=A.shape[1])}


def test_valuations() -> None:
    assert valuations(np.array([0, 1, 2, 4]), 2, 3).tolist() == [3, 0, 1, 2]
    assert valuations(np.array([9, 3, 6]), 3, 2).tolist() == [2, 1, 1]


def test_single_entry_over_z4() -> None:
    snf = LocalSmithForm(np.array([[2]]), 2, 2)
    assert snf.rank == 1
    assert snf.pivots == (1,)
    assert snf.image_order() == 2
    assert snf.solve(np.array([1])) is None
    x = snf.solve(np.array([2]))
    assert x is not None and (2 * x[0]) % 4 == 2
    assert snf.kernel_basis().tolist() == [[2]]


def test_zero_matrix() -> None:
    snf = LocalSmithForm(np.zeros((2, 3), dtype=np.int64), 3, 1)
    assert snf.rank == 0
    assert snf.image_order() == 1
    assert snf.solve(np.zeros(2, dtype=np.int64)).tolist() == [0, 0, 0]
    assert snf.solve(np.array([1, 0])) is None
    assert snf.kernel_basis().shape == (3, 3)


@settings(max_examples=60, deadline=None)
@given(local_problems(), st.data())
def test_solve_recovers_a_preimage(problem: tuple[int, int, np.ndarray], data: st.DataObject) -> None:
    p, E, A = problem
    q = p**E
    x = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=A.shape[1], max_size=A.shape[1])))
    y = (A @ x) % q
    found = LocalSmithForm(A, p, E).solve(y)
    assert found is not None
    assert np.array_equal((A @ found) % q, y)


@settings(max_examples=40, deadline=None)
@given(local_problems())
def test_image_and_kernel_sizes(problem: tuple[int, int, np.ndarray]) -> None:
    p, E, A = problem
    q = p**E
    snf = LocalSmithForm(A, p, E)
    span = _span(A, q)
    assert snf.image_order() == len(span)

    K = snf.kernel_basis()
    assert not ((A @ K) % q).any()
    assert len(_span(K, q)) * len(span) == q ** A.shape[1]


@settings(max_examples=40, deadline=None)
@given(local_problems())
def test_unreachable_targets_are_rejected(problem: tuple[int, int, np.ndarray]) -> None:
    p, E, A = problem
    q = p**E
    snf = LocalSmithForm(A, p, E)
    span = _span(A, q)
    for y in itertools.product(range(q), repeat=A.shape[0]):
        assert (snf.solve(np.array(y)) is not None) == (y in span)
