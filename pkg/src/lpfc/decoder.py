"""Basic LP relaxation of ML decoding over variable and check beliefs.

Column layout: ``b_i(0), b_i(1)`` occupy columns ``2i, 2i+1``; every
clique then owns one column per admissible configuration. Checks admit only
even-parity configurations, so odd ones never become LP variables.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from lpfc.codes import TannerGraph
from lpfc.lp import LinearProgram, LpStats, Row, Tolerances, extend, solve

INT_TOL = 1e-6


class CliqueKind(enum.IntEnum):
    CHECK = 0
    TRIANGLE = 1
    PAIR = 2


@dataclass(frozen=True, order=True)
class CliqueId:
    kind: CliqueKind
    members: tuple[int, ...]
    label: int = 0

    def __post_init__(self):
        if tuple(sorted(set(self.members))) != self.members:
            raise ValueError(f"clique members must be distinct and sorted: {self.members}")

    def __str__(self):
        body = ",".join(map(str, self.members))
        if self.kind is CliqueKind.CHECK:
            return f"check{self.label}({body})"
        return f"{self.kind.name.lower()}({body})"

    @classmethod
    def check(cls, index: int, members) -> CliqueId:
        return cls(CliqueKind.CHECK, tuple(sorted(members)), index)

    @classmethod
    def triangle(cls, members) -> CliqueId:
        return cls(CliqueKind.TRIANGLE, tuple(sorted(members)))

    @classmethod
    def pair(cls, members) -> CliqueId:
        return cls(CliqueKind.PAIR, tuple(sorted(members)))


def even_configs(size: int) -> np.ndarray:
    allc = np.array(list(itertools.product((0, 1), repeat=size)), dtype=np.uint8)
    return allc[allc.sum(axis=1) % 2 == 0]


def all_configs(size: int) -> np.ndarray:
    return np.array(list(itertools.product((0, 1), repeat=size)), dtype=np.uint8)


@dataclass(frozen=True)
class CliqueBlock:
    """Admissible configurations of a clique and the LP columns holding them."""

    configs: np.ndarray
    cols: np.ndarray

    def position(self, cid: CliqueId, var: int) -> int:
        return cid.members.index(var)


@dataclass
class BeliefIndex:
    """Maps beliefs to LP columns; grows as cliques are added."""

    n: int
    cliques: dict[CliqueId, CliqueBlock] = field(default_factory=dict)

    def var_col(self, i: int, value: int) -> int:
        return 2 * i + value

    def copy(self) -> BeliefIndex:
        return BeliefIndex(self.n, dict(self.cliques))

    def marginal_terms(self, cid: CliqueId, assignment: dict[int, int]) -> list[int]:
        """Columns of ``cid`` whose configuration agrees with ``assignment``."""
        block = self.cliques[cid]
        mask = np.ones(len(block.cols), dtype=bool)
        for var, val in assignment.items():
            mask &= block.configs[:, cid.members.index(var)] == val
        return [int(c) for c in block.cols[mask]]


def consistency_rows(index: BeliefIndex, cid: CliqueId, members=None) -> list[Row]:
    """Rows ``b_i(v) = sum_{x_c : x_i = v} b_c(x_c)`` for the given members of ``cid``."""
    rows = []
    for i in cid.members if members is None else members:
        for v in (0, 1):
            terms = index.marginal_terms(cid, {i: v})
            rows.append(
                Row(
                    (index.var_col(i, v), *terms),
                    (1.0, *([-1.0] * len(terms))),
                    0.0,
                    ("single", cid, i, v),
                )
            )
    return rows


def build_basic_lp(graph: TannerGraph, llr) -> tuple[LinearProgram, BeliefIndex]:
    llr = np.asarray(llr, dtype=np.float64)
    if llr.shape != (graph.n,):
        raise ValueError(f"LLR vector has length {llr.shape}, expected ({graph.n},)")
    if not np.all(np.isfinite(llr)):
        raise ValueError("LLR vector has non-finite entries")
    n = graph.n
    cost = np.zeros(2 * n)
    cost[1::2] = llr
    index = BeliefIndex(n)
    next_col = 2 * n
    for c, members in enumerate(graph.check_members):
        configs = even_configs(len(members))
        cols = np.arange(next_col, next_col + len(configs))
        index.cliques[CliqueId.check(c, members)] = CliqueBlock(configs, cols)
        next_col += len(configs)

    rows = [Row((2 * i, 2 * i + 1), (1.0, 1.0), 1.0, ("norm", i)) for i in range(n)]
    for cid in index.cliques:
        rows.extend(consistency_rows(index, cid))
    lp = extend(LinearProgram.box(cost), np.zeros(next_col - 2 * n), rows)
    return lp, index


@dataclass(frozen=True)
class BeliefSolution:
    var_beliefs: np.ndarray
    clique_beliefs: dict[CliqueId, tuple[np.ndarray, np.ndarray]]
    objective_value: float

    @classmethod
    def from_values(cls, index: BeliefIndex, x, objective_value: float) -> BeliefSolution:
        x = np.asarray(x, dtype=np.float64)
        var = x[: 2 * index.n].reshape(index.n, 2)
        cliques = {cid: (blk.configs, x[blk.cols]) for cid, blk in index.cliques.items()}
        return cls(var, cliques, objective_value)

    @property
    def n(self) -> int:
        return self.var_beliefs.shape[0]

    def max_violation(self) -> float:
        """Largest violation of normalization, check consistency, and the unit box."""
        worst = float(np.max(np.abs(self.var_beliefs.sum(axis=1) - 1.0)))
        for cid, (configs, vals) in self.clique_beliefs.items():
            worst = max(worst, float(np.max(-vals, initial=0.0)), float(np.max(vals - 1, initial=0.0)))
            for pos, i in enumerate(cid.members):
                for v in (0, 1):
                    marg = vals[configs[:, pos] == v].sum()
                    worst = max(worst, abs(marg - self.var_beliefs[i, v]))
        worst = max(worst, float(np.max(-self.var_beliefs)), float(np.max(self.var_beliefs - 1)))
        return worst


@dataclass(frozen=True)
class Assignment:
    """Either ``bits`` (integral LP output) or the set of fractional variables."""

    bits: np.ndarray | None = None
    fractional_set: tuple[int, ...] = ()

    @property
    def is_integral(self) -> bool:
        return self.bits is not None

    def __repr__(self):
        if self.is_integral:
            return f"Integral({''.join(map(str, self.bits))})"
        return f"Fractional({list(self.fractional_set)})"


class ParityViolation(AssertionError):
    """An integral LP output that fails a parity check; the LP itself is broken."""


def classify(graph: TannerGraph, beliefs: BeliefSolution, int_tol: float = INT_TOL) -> Assignment:
    p1 = beliefs.var_beliefs[:, 1]
    dist = np.minimum(np.abs(p1), np.abs(1.0 - p1))
    frac = (dist > int_tol) | (p1 == 0.5)
    if np.any(frac):
        return Assignment(fractional_set=tuple(int(i) for i in np.flatnonzero(frac)))
    bits = (p1 > 0.5).astype(np.uint8)
    if not graph.is_codeword(bits):
        raise ParityViolation("integral LP solution is not a codeword")
    return Assignment(bits=bits)


def is_ml_certificate(a: Assignment) -> bool:
    return a.is_integral


class DecoderError(RuntimeError):
    """The LP solver did not return an optimal solution."""


def decode_basic(
    graph: TannerGraph,
    llr,
    tols: Tolerances = Tolerances(),
    int_tol: float = INT_TOL,
    backend: str = "highs",
) -> tuple[Assignment, BeliefSolution, LpStats]:
    lp, index = build_basic_lp(graph, llr)
    sol = solve(lp, tols, backend)
    if not sol.optimal:
        raise DecoderError(f"basic LP: {sol.status.value} {sol.message}")
    beliefs = BeliefSolution.from_values(index, sol.values, sol.objective_value)
    return classify(graph, beliefs, int_tol), beliefs, lp.stats(sol.iterations)
