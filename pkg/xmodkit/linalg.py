"""
Smith normal form over the local rings Z/p^E.

Cochain groups with coefficients in a finite abelian group split into
p-primary parts, and every differential respects the split, so all the
linear algebra needed for cohomology happens one prime at a time over
Z/p^E. Over a local ring an entry of minimal p-valuation divides every
other entry, which makes elimination exact.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)


def valuations(x: np.ndarray, p: int, E: int) -> np.ndarray:
    """p-adic valuation of each entry of x mod p^E (E for zero entries)."""
    x = np.asarray(x) % p**E
    v = np.full(x.shape, E, dtype=np.int64)
    for j in range(E - 1, -1, -1):
        v[(x % p ** (j + 1) != 0)] = j
    return v


class LocalSmithForm:
    """S A T = D over Z/p^E with D diagonal, entries p^v_k on the first ``rank`` positions.

    S is kept as a log of row operations (so it can be applied to any
    right-hand side in O(rows * rank)); T is kept explicitly.
    """

    def __init__(self, matrix: np.ndarray, p: int, E: int) -> None:
        self.p = p
        self.E = E
        self.modulus = q = p**E
        A = np.array(matrix, dtype=np.int64) % q
        rows, cols = A.shape
        self.shape = (rows, cols)
        T = np.eye(cols, dtype=np.int64)
        ops: List[Tuple[int, int, int, np.ndarray]] = []
        pivots: List[int] = []

        k = 0
        while k < min(rows, cols):
            sub = A[k:, k:]
            if not sub.any():
                break
            vals = valuations(sub, p, E)
            i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
            i, j = int(i) + k, int(j) + k
            v = int(vals[i - k, j - k])

            A[[k, i]] = A[[i, k]]
            A[:, [k, j]] = A[:, [j, k]]
            T[:, [k, j]] = T[:, [j, k]]

            unit = int(A[k, k]) // p**v
            unit_inv = pow(unit, -1, q)
            A[k] = (A[k] * unit_inv) % q

            factors = A[:, k] // p**v
            factors[k] = 0
            A = (A - np.outer(factors, A[k])) % q
            ops.append((k, i, unit_inv, factors))

            col_factors = A[k] // p**v
            col_factors[k] = 0
            A = (A - np.outer(A[:, k], col_factors)) % q
            T = (T - np.outer(T[:, k], col_factors)) % q

            pivots.append(v)
            k += 1

        self._ops = ops
        self.pivots: Tuple[int, ...] = tuple(pivots)
        self.T = T
        logger.debug("Local SNF over Z/%d^%d of %dx%d: rank %d", p, E, rows, cols, self.rank)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def apply_rows(self, y: np.ndarray) -> np.ndarray:
        """S y."""
        q = self.modulus
        y = np.array(y, dtype=np.int64) % q
        for k, i, unit_inv, factors in self._ops:
            y[[k, i]] = y[[i, k]]
            y[k] = (y[k] * unit_inv) % q
            y = (y - np.multiply.outer(factors, y[k])) % q
        return y

    def image_order(self) -> int:
        """Size of the column span of A in (Z/p^E)^rows."""
        return int(self.p) ** sum(self.E - v for v in self.pivots)

    def solve(self, y: np.ndarray) -> Optional[np.ndarray]:
        """Some x with A x = y, or None."""
        rows, cols = self.shape
        q = self.modulus
        sy = self.apply_rows(y)
        u = np.zeros(cols, dtype=np.int64)
        for k, v in enumerate(self.pivots):
            step = self.p**v
            if sy[k] % step:
                return None
            u[k] = sy[k] // step
        if sy[self.rank :].any():
            return None
        return (self.T @ u) % q

    def kernel_basis(self) -> np.ndarray:
        """Columns generating {x : A x = 0} as a Z/p^E-module."""
        rows, cols = self.shape
        q = self.modulus
        scale = np.ones(cols, dtype=np.int64)
        scale[: self.rank] = [self.p ** (self.E - v) for v in self.pivots]
        basis = (self.T * scale[None, :]) % q
        keep = basis.any(axis=0)
        return basis[:, keep]
