"""Turn a frustrated variable cycle into new clique beliefs and consistency rows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from lpfc.decoder import (
    BeliefIndex,
    CliqueBlock,
    CliqueId,
    all_configs,
    consistency_rows,
)
from lpfc.frustration import FrustratedCycle
from lpfc.lp import LinearProgram, Row, extend


class NoProgress(ValueError):
    """An augmentation request that cannot add information."""


@dataclass(frozen=True)
class TriangulationPlan:
    """Fan triangulation of ``cycle`` from ``cycle[0]``.

    ``triangles[t]`` covers the ordered vertices ``(cycle[0], cycle[t+1], cycle[t+2])``;
    ``edge_bindings`` maps each sorted cycle edge to the clique it came from.
    """

    cycle: tuple[int, ...]
    triangles: tuple[CliqueId, ...]
    ordered: tuple[tuple[int, int, int], ...]
    edge_bindings: dict[tuple[int, int], CliqueId]

    def chords(self) -> list[tuple[int, int]]:
        return [(self.cycle[0], self.cycle[t]) for t in range(2, len(self.cycle) - 1)]

    def triangle_of_edge(self, edge: tuple[int, int]) -> CliqueId:
        for tid in self.triangles:
            if set(edge) <= set(tid.members):
                return tid
        raise KeyError(edge)


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def triangulate(cycle, sources=None, anchor: int | None = None) -> TriangulationPlan:
    cycle = [int(v) for v in cycle]
    k = len(cycle)
    if k < 3:
        raise ValueError("triangulation needs a cycle of length >= 3")
    if len(set(cycle)) != k:
        raise ValueError(f"cycle {cycle} is not simple")
    if sources is None:
        sources = [None] * k
    if len(sources) != k:
        raise ValueError("need one source clique per cycle edge")
    if anchor is None or anchor not in cycle:
        anchor = min(cycle)
    shift = cycle.index(anchor)
    cyc = cycle[shift:] + cycle[:shift]
    srcs = list(sources[shift:]) + list(sources[:shift])
    ordered = tuple((cyc[0], cyc[t], cyc[t + 1]) for t in range(1, k - 1))
    bindings = {_edge(cyc[e], cyc[(e + 1) % k]): srcs[e] for e in range(k)}
    return TriangulationPlan(
        tuple(cyc), tuple(CliqueId.triangle(t) for t in ordered), ordered, bindings
    )


def _register(index: BeliefIndex, cid: CliqueId, next_col: int) -> int:
    """Give ``cid`` columns for all 2^|c| configurations unless it already has them."""
    if cid in index.cliques:
        return 0
    configs = all_configs(len(cid.members))
    index.cliques[cid] = CliqueBlock(configs, np.arange(next_col, next_col + len(configs)))
    return len(configs)


def _normalization(index: BeliefIndex, cid: CliqueId) -> Row:
    cols = tuple(int(c) for c in index.cliques[cid].cols)
    return Row(cols, (1.0,) * len(cols), 1.0, ("cnorm", cid))


def _pair_agreement(index: BeliefIndex, left: CliqueId, right: CliqueId, u: int, v: int, tag: str) -> list[Row]:
    """Rows equating the (u, v) marginals of two cliques, one per (x_u, x_v)."""
    u, v = _edge(u, v)
    a, b = sorted((left, right))
    rows = []
    for xu in (0, 1):
        for xv in (0, 1):
            pos = index.marginal_terms(a, {u: xu, v: xv})
            neg = index.marginal_terms(b, {u: xu, v: xv})
            rows.append(
                Row(
                    tuple(pos + neg),
                    (1.0,) * len(pos) + (-1.0,) * len(neg),
                    0.0,
                    (tag, a, b, u, v, xu, xv),
                )
            )
    return rows


def _validate_sources(index: BeliefIndex, bindings) -> None:
    for (u, v), src in bindings.items():
        if src is None or src not in index.cliques:
            raise KeyError(f"edge ({u}, {v}) is bound to unknown clique {src}")
        if u not in src.members or v not in src.members:
            raise KeyError(f"clique {src} does not contain edge ({u}, {v})")


def emit_constraints(plan: TriangulationPlan, index: BeliefIndex, next_col: int) -> tuple[int, list[Row]]:
    """Register the plan's triangles in ``index`` and return (new column count, rows).

    Per triangle: one normalization row and singleton-consistency rows for its
    three vertices. Per chord: agreement of the two adjacent triangles. Per
    cycle edge: agreement of its triangle with the bound source clique.
    """
    _validate_sources(index, plan.edge_bindings)
    added = 0
    for tid in plan.triangles:
        added += _register(index, tid, next_col + added)
    rows: list[Row] = []
    for tid in plan.triangles:
        rows.append(_normalization(index, tid))
    for t, (u, v) in enumerate(plan.chords()):
        rows += _pair_agreement(index, plan.triangles[t], plan.triangles[t + 1], u, v, "chord")
    for edge, src in plan.edge_bindings.items():
        rows += _pair_agreement(index, plan.triangle_of_edge(edge), src, *edge, "edge")
    for tid in plan.triangles:
        rows += consistency_rows(index, tid)
    return added, rows


def bind_two_cycle(pair, sources, index: BeliefIndex, next_col: int) -> tuple[int, list[Row]]:
    """Pair clique on ``(i, j)`` agreeing with both source cliques and the singletons."""
    i, j = _edge(*pair)
    s1, s2 = sources
    if s1 == s2:
        raise NoProgress(f"both edges of the 2-cycle ({i}, {j}) come from {s1}")
    _validate_sources(index, {(i, j): s1})
    _validate_sources(index, {(i, j): s2})
    pid = CliqueId.pair((i, j))
    added = _register(index, pid, next_col)
    rows = [_normalization(index, pid)]
    rows += _pair_agreement(index, pid, s1, i, j, "edge")
    rows += _pair_agreement(index, pid, s2, i, j, "edge")
    rows += consistency_rows(index, pid)
    return added, rows


@dataclass(frozen=True)
class AugmentationResult:
    new_variable_count: int
    new_row_count: int
    cliques: tuple[CliqueId, ...]
    plan: TriangulationPlan | None = None


def augment(
    lp: LinearProgram, index: BeliefIndex, fc: FrustratedCycle
) -> tuple[LinearProgram, BeliefIndex, AugmentationResult]:
    """Add the cliques of a projected frustrated cycle to ``lp``.

    Returns new LP and index objects; the inputs are left untouched.
    """
    if not fc.variable_cycle:
        raise ValueError("project the frustrated cycle onto variables first")
    index = index.copy()
    cycle, srcs = fc.variable_cycle, fc.cycle_sources
    if len(cycle) == 2:
        added, rows = bind_two_cycle(cycle, srcs, index, lp.num_vars)
        plan = None
        cliques = (CliqueId.pair(cycle),)
    else:
        plan = triangulate(cycle, srcs, anchor=fc.pivot)
        added, rows = emit_constraints(plan, index, lp.num_vars)
        cliques = plan.triangles
    new_lp = extend(lp, np.zeros(added), rows)
    result = AugmentationResult(added, new_lp.num_rows - lp.num_rows, cliques, plan)
    return new_lp, index, result


def min_violation(lp: LinearProgram, old_rows: int, old_vars: int, x_old) -> float:
    """Smallest L1 violation of the rows past ``old_rows`` with old columns fixed at ``x_old``.

    Zero means the previous solution extends to the new columns; a positive
    value means the new rows cut it off.
    """
    new_rows = lp.rows[old_rows:]
    if not new_rows:
        return 0.0
    sub = LinearProgram(lp.objective, lp.lower, lp.upper, tuple(new_rows)).matrix().tocsc()
    a_old, a_new = sub[:, :old_vars], sub[:, old_vars:]
    rhs = np.array([r.rhs for r in new_rows]) - a_old @ np.asarray(x_old)[:old_vars]
    m, k = a_new.shape
    eye = sp.identity(m, format="csc")
    a_eq = sp.hstack([a_new, eye, -eye], format="csc")
    cost = np.concatenate([np.zeros(k), np.ones(2 * m)])
    bounds = [(lo, hi) for lo, hi in zip(lp.lower[old_vars:], lp.upper[old_vars:])] + [(0, None)] * (2 * m)
    res = linprog(cost, A_eq=a_eq, b_eq=rhs, bounds=bounds, method="highs")
    if res.status != 0:
        raise RuntimeError(f"violation LP failed: {res.message}")
    return float(res.fun)
