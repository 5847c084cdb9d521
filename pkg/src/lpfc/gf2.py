"""Dense GF(2) linear algebra on uint8 matrices."""

from __future__ import annotations

import itertools
from collections.abc import Iterator

import numpy as np


def as_gf2(matrix) -> np.ndarray:
    """Return a 2-D uint8 copy of ``matrix`` reduced mod 2."""
    arr = np.array(matrix, dtype=np.int64, copy=True)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    return (arr % 2).astype(np.uint8)


def row_reduce(matrix) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2).

    Returns the reduced matrix and the list of pivot columns.
    """
    work = as_gf2(matrix)
    rows, cols = work.shape
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(work[r:, col])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        others = np.flatnonzero(work[:, col])
        others = others[others != r]
        if others.size:
            work[others] ^= work[r]
        pivots.append(col)
        r += 1
    return work, pivots


def rank(matrix) -> int:
    return len(row_reduce(matrix)[1])


def nullspace_basis(matrix) -> np.ndarray:
    """Basis of {x : H x = 0} over GF(2), one basis vector per row.

    The result has ``cols - rank(H)`` rows.
    """
    reduced, pivots = row_reduce(matrix)
    cols = reduced.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, p in enumerate(pivots):
            basis[k, p] = reduced[r, f]
    return basis


def syndrome(matrix, x) -> np.ndarray:
    h = np.asarray(matrix, dtype=np.int64)
    return (h @ np.asarray(x, dtype=np.int64)) % 2


def span(basis) -> Iterator[np.ndarray]:
    """Yield all 2^k GF(2) combinations of the rows of ``basis`` (zero vector first)."""
    b = np.asarray(basis, dtype=np.uint8)
    k, n = b.shape
    if k == 0:
        yield np.zeros(n, dtype=np.uint8)
        return
    for coeffs in itertools.product((0, 1), repeat=k):
        yield (np.asarray(coeffs, dtype=np.int64) @ b % 2).astype(np.uint8)
