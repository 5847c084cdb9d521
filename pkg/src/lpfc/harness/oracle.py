"""Exhaustive maximum-likelihood decoding for small codes."""

from __future__ import annotations

import itertools

import numpy as np

from lpfc.codes import TannerGraph

MAX_DIMENSION = 28
_CHUNK_BITS = 12


def codewords(graph: TannerGraph) -> np.ndarray:
    """All codewords as rows (2^k of them)."""
    basis = graph.codeword_basis()
    k = basis.shape[0]
    if k > 20:
        raise ValueError(f"refusing to materialize 2^{k} codewords")
    coeffs = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.int64).reshape(-1, k)
    return (coeffs @ basis % 2).astype(np.uint8)


def brute_force_ml(graph: TannerGraph, llr, tie_tol: float = 1e-9) -> tuple[np.ndarray, float, bool]:
    """Minimize ``sum(llr * x)`` over every codeword.

    Returns ``(bits, objective, tied)``. Among minimizers within ``tie_tol``
    the lexicographically smallest word wins and ``tied`` is set.
    """
    llr = np.asarray(llr, dtype=np.float64)
    basis = graph.codeword_basis().astype(np.int64)
    k = basis.shape[0]
    if k > MAX_DIMENSION:
        raise ValueError(f"code dimension {k} exceeds the enumeration bound {MAX_DIMENSION}")
    low_k = min(k, _CHUNK_BITS)
    low = np.array(list(itertools.product((0, 1), repeat=low_k)), dtype=np.int64).reshape(-1, low_k)
    low_words = low @ basis[k - low_k :] % 2
    high_basis = basis[: k - low_k]

    best_val = np.inf
    best_words: list[tuple[int, ...]] = []
    for high in itertools.product((0, 1), repeat=k - low_k):
        offset = np.asarray(high, dtype=np.int64) @ high_basis % 2 if high else 0
        words = low_words ^ offset
        costs = words @ llr
        m = costs.min()
        if m < best_val - tie_tol:
            best_val = float(m)
            best_words = []
        if m <= best_val + tie_tol:
            hits = np.flatnonzero(costs <= best_val + tie_tol)
            best_words.extend(tuple(int(b) for b in words[h]) for h in hits)
            best_val = min(best_val, float(m))
            best_words = [w for w in best_words if float(np.dot(w, llr)) <= best_val + tie_tol]
    bits = min(best_words)
    return np.asarray(bits, dtype=np.uint8), float(np.dot(bits, llr)), len(set(best_words)) > 1
