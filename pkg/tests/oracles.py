"""Independent brute-force checks shared by the test modules."""

from __future__ import annotations

import itertools

import numpy as np


def enumerate_codewords(h) -> list[tuple[int, ...]]:
    h = np.asarray(h, dtype=np.int64)
    n = h.shape[1]
    return [x for x in itertools.product((0, 1), repeat=n) if not np.any(h @ np.array(x) % 2)]


def forced_implications(support) -> set[tuple[str, int, str, int]]:
    """Every premise ``x_a = va`` that pins ``x_b`` within ``support`` (pairs (x_i, x_j)).

    Derived directly from the logic: ``x_a = va`` forces ``x_b = vb`` when
    every supported pair with ``x_a = va`` has ``x_b = vb``.
    """
    out = set()
    for role in ("i", "j"):
        for va in (0, 1):
            matching = [p for p in support if p[0 if role == "i" else 1] == va]
            if not matching:
                continue
            other = {p[1 if role == "i" else 0] for p in matching}
            if len(other) == 1:
                out.add((role, va, "j" if role == "i" else "i", other.pop()))
    return out


def pair_support(beliefs, clique, u, v, eps):
    configs, vals = beliefs.clique_beliefs[clique]
    pu, pv = clique.members.index(u), clique.members.index(v)
    table = np.zeros((2, 2))
    for cfg, val in zip(configs, vals):
        table[cfg[pu], cfg[pv]] += val
    return {(a, b) for a in (0, 1) for b in (0, 1) if table[a, b] > eps}


def satisfying_assignments(beliefs, literal_path, sources, eps):
    """All assignments of the path's variables meeting every edge source's pairwise support."""
    variables = sorted({u >> 1 for u in literal_path})
    pos = {v: k for k, v in enumerate(variables)}
    constraints = []
    for (u, w), src in zip(zip(literal_path, literal_path[1:]), sources):
        a, b = u >> 1, w >> 1
        constraints.append((a, b, pair_support(beliefs, src, a, b, eps)))
    sols = []
    for x in itertools.product((0, 1), repeat=len(variables)):
        if all((x[pos[a]], x[pos[b]]) in sup for a, b, sup in constraints):
            sols.append(dict(zip(variables, x)))
    return sols


def witness_is_sound(beliefs, fc, eps) -> bool:
    """True kind: the CSP over the walk's supports has no solution.

    Quasi kind: every solution sets the pivot opposite to the path's start literal.
    """
    sols = satisfying_assignments(beliefs, fc.literal_path, fc.edge_sources, eps)
    if fc.kind.value == "True":
        return not sols
    start_value = fc.literal_path[0] & 1
    return all(s[fc.pivot] != start_value for s in sols)


def point_mass(index, bits, num_vars) -> np.ndarray:
    """LP point putting all belief on ``bits``: each clique holds its restriction of the word."""
    bits = np.asarray(bits, dtype=np.int64)
    x = np.zeros(num_vars)
    x[2 * np.arange(len(bits)) + bits] = 1.0
    for cid, block in index.cliques.items():
        local = bits[list(cid.members)]
        hit = np.flatnonzero(np.all(block.configs == local, axis=1))
        assert len(hit) == 1, f"{cid} has no configuration {local}"
        x[block.cols[hit[0]]] = 1.0
    return x


def forced_by_path(beliefs, path, sources, eps) -> bool:
    """Every assignment meeting the path's supports sets var(path[0]) opposite to path[0]."""
    sols = satisfying_assignments(beliefs, path, sources, eps)
    return all(s[path[0] >> 1] != (path[0] & 1) for s in sols)
