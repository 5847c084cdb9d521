"""Sparse equality-constrained linear programs over box-bounded variables."""

from __future__ import annotations

import enum
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    ITERATION_LIMIT = "IterationLimit"


@dataclass(frozen=True)
class Tolerances:
    feasibility: float = 1e-7
    optimality: float = 1e-9


@dataclass(frozen=True)
class Row:
    """One equality ``sum(coeffs * x[cols]) == rhs``.

    ``key`` identifies the row for deduplication; rows with equal keys are
    inserted once.
    """

    cols: tuple[int, ...]
    coeffs: tuple[float, ...]
    rhs: float = 0.0
    key: Hashable = None

    def __post_init__(self):
        if len(self.cols) != len(self.coeffs):
            raise ValueError("cols and coeffs differ in length")


@dataclass(frozen=True)
class LpStats:
    rows: int
    cols: int
    nonzeros: int
    solve_iterations: int = 0


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    values: np.ndarray
    objective_value: float
    iterations: int = 0
    message: str = ""

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


@dataclass(frozen=True)
class LinearProgram:
    """``min c.x  s.t.  A x = b,  lo <= x <= hi``.

    Instances are treated as immutable; :func:`extend` returns a new program
    that shares the existing rows.
    """

    objective: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    rows: tuple[Row, ...] = ()
    _keys: frozenset = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self):
        n = self.objective.shape[0]
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError("bounds must match the number of variables")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")

    @classmethod
    def box(cls, objective, lo: float = 0.0, hi: float = 1.0) -> LinearProgram:
        c = np.asarray(objective, dtype=np.float64)
        return cls(c, np.full(c.shape, lo), np.full(c.shape, hi))

    @property
    def num_vars(self) -> int:
        return int(self.objective.shape[0])

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def nonzeros(self) -> int:
        return sum(len(r.cols) for r in self.rows)

    def stats(self, iterations: int = 0) -> LpStats:
        return LpStats(self.num_rows, self.num_vars, self.nonzeros, iterations)

    def has_row(self, key: Hashable) -> bool:
        return key is not None and key in self._keys

    def matrix(self) -> sp.csr_matrix:
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for r in self.rows:
            indices.extend(r.cols)
            data.extend(r.coeffs)
            indptr.append(len(indices))
        return sp.csr_matrix(
            (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64), indptr),
            shape=(self.num_rows, self.num_vars),
        )

    def rhs(self) -> np.ndarray:
        return np.array([r.rhs for r in self.rows], dtype=np.float64)

    def residual(self, x) -> float:
        """Largest absolute equality violation at ``x``."""
        if not self.rows:
            return 0.0
        return float(np.max(np.abs(self.matrix() @ np.asarray(x) - self.rhs())))

    def bound_violation(self, x) -> float:
        x = np.asarray(x)
        if x.size == 0:
            return 0.0
        return float(max(np.max(self.lower - x), np.max(x - self.upper), 0.0))


def _checked_rows(rows: Iterable[Row], num_vars: int) -> list[Row]:
    out = []
    for r in rows:
        if any(not 0 <= c < num_vars for c in r.cols):
            raise ValueError(f"row {r.key!r} references a variable outside 0..{num_vars - 1}")
        out.append(r)
    return out


def extend(
    lp: LinearProgram,
    objective: Sequence[float] = (),
    new_rows: Iterable[Row] = (),
    lo: float = 0.0,
    hi: float = 1.0,
) -> LinearProgram:
    """Append ``len(objective)`` variables in ``[lo, hi]`` and the given rows.

    Rows whose key is already present are skipped.
    """
    add = np.asarray(objective, dtype=np.float64)
    num_vars = lp.num_vars + add.size
    rows = list(lp.rows)
    keys = set(lp._keys)
    for r in _checked_rows(new_rows, num_vars):
        if r.key is not None:
            if r.key in keys:
                continue
            keys.add(r.key)
        rows.append(r)
    if add.size == 0 and len(rows) == len(lp.rows):
        return lp
    return LinearProgram(
        np.concatenate([lp.objective, add]),
        np.concatenate([lp.lower, np.full(add.size, lo)]),
        np.concatenate([lp.upper, np.full(add.size, hi)]),
        tuple(rows),
        frozenset(keys),
    )


def dump(lp: LinearProgram) -> str:
    """Plain-text standard form: objective, equality rows, then bounds.

    ``obj c0 c1 ...`` / ``eq rhs j:a j:a ...`` / ``bnd j lo hi``, one per line.
    """
    lines = ["obj " + " ".join(repr(float(c)) for c in lp.objective)]
    for r in lp.rows:
        terms = " ".join(f"{j}:{a!r}" for j, a in zip(r.cols, r.coeffs))
        lines.append(f"eq {r.rhs!r} {terms}")
    for j, (lo, hi) in enumerate(zip(lp.lower, lp.upper)):
        lines.append(f"bnd {j} {float(lo)!r} {float(hi)!r}")
    return "\n".join(lines) + "\n"


def load_dump(text: str) -> LinearProgram:
    objective: list[float] = []
    rows: list[Row] = []
    bounds: dict[int, tuple[float, float]] = {}
    for line in text.splitlines():
        tag, *rest = line.split()
        if tag == "obj":
            objective = [float(v) for v in rest]
        elif tag == "eq":
            pairs = [t.split(":") for t in rest[1:]]
            rows.append(
                Row(tuple(int(j) for j, _ in pairs), tuple(float(a) for _, a in pairs), float(rest[0]))
            )
        elif tag == "bnd":
            bounds[int(rest[0])] = (float(rest[1]), float(rest[2]))
        else:
            raise ValueError(f"unknown record {tag!r}")
    lo = np.array([bounds[j][0] for j in range(len(objective))])
    hi = np.array([bounds[j][1] for j in range(len(objective))])
    lp = LinearProgram(np.asarray(objective, dtype=np.float64), lo, hi)
    return extend(lp, (), rows)
