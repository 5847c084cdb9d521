"""Implication graphs over fractional LP beliefs and frustrated-cycle search.

Literal ``2*i`` stands for ``x_i = 0`` (written ``i+``) and ``2*i + 1`` for
``x_i = 1`` (``i-``); the negation of literal ``u`` is ``u ^ 1``.
"""

from __future__ import annotations

import enum
import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field

import numpy as np

from lpfc.decoder import INT_TOL, BeliefSolution, CliqueId

EPS = 1e-6

Config = tuple[int, int]


def lit(var: int, value: int) -> int:
    return 2 * var + value


def lit_var(u: int) -> int:
    return u >> 1


def lit_name(u: int) -> str:
    return f"{u >> 1}{'-' if u & 1 else '+'}"


# Restrictive pairwise supports and the implications they license, written as
# ((value of x_i, value of x_j) premise -> conclusion) pairs over roles "i"/"j".
_RULES: dict[frozenset, tuple[tuple[str, int, str, int], ...]] = {
    frozenset({(0, 1), (1, 0)}): (
        ("i", 0, "j", 1), ("i", 1, "j", 0), ("j", 0, "i", 1), ("j", 1, "i", 0),
    ),
    frozenset({(0, 1), (1, 0), (1, 1)}): (("i", 0, "j", 1), ("j", 0, "i", 1)),
    frozenset({(0, 1), (1, 0), (0, 0)}): (("i", 1, "j", 0), ("j", 1, "i", 0)),
    frozenset({(0, 0), (1, 1)}): (
        ("i", 0, "j", 0), ("i", 1, "j", 1), ("j", 0, "i", 0), ("j", 1, "i", 1),
    ),
    frozenset({(0, 0), (1, 1), (1, 0)}): (("i", 0, "j", 0), ("j", 1, "i", 1)),
    frozenset({(0, 0), (1, 1), (0, 1)}): (("i", 1, "j", 1), ("j", 0, "i", 0)),
}


def implications(i: int, j: int, support) -> list[tuple[int, int]]:
    """Literal edges ``(u, v)`` implied by the pairwise support of ``(x_i, x_j)``."""
    rule = _RULES.get(frozenset(support), ())
    var = {"i": i, "j": j}
    return [(lit(var[a], va), lit(var[b], vb)) for a, va, b, vb in rule]


@dataclass(frozen=True)
class PairwiseSupport:
    i: int
    j: int
    support: frozenset
    source: CliqueId


def pairwise_marginal(b: BeliefSolution, c: CliqueId, i: int, j: int) -> np.ndarray:
    """2x2 table ``b_ij(x_i, x_j)`` obtained by summing out the rest of ``c``."""
    if i == j or i not in c.members or j not in c.members:
        raise ValueError(f"({i}, {j}) is not a pair of distinct members of {c}")
    configs, vals = b.clique_beliefs[c]
    pi, pj = c.members.index(i), c.members.index(j)
    table = np.zeros((2, 2))
    np.add.at(table, (configs[:, pi], configs[:, pj]), vals)
    return table


def project_pairwise(b: BeliefSolution, c: CliqueId, i: int, j: int, eps: float = EPS) -> PairwiseSupport:
    table = pairwise_marginal(b, c, i, j)
    support = frozenset((xi, xj) for xi in (0, 1) for xj in (0, 1) if table[xi, xj] > eps)
    return PairwiseSupport(i, j, support, c)


@dataclass
class ImplicationGraph:
    n: int
    edges: dict[tuple[int, int], list[CliqueId]] = field(default_factory=dict)

    @property
    def num_nodes(self) -> int:
        return 2 * self.n

    def add(self, u: int, v: int, source: CliqueId) -> None:
        srcs = self.edges.setdefault((u, v), [])
        if source not in srcs:
            srcs.append(source)
            srcs.sort()

    def successors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for u, v in sorted(self.edges):
            out[u].append(v)
        return out

    def predecessors(self) -> list[list[int]]:
        inc: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for u, v in sorted(self.edges):
            inc[v].append(u)
        return inc

    def source(self, u: int, v: int) -> CliqueId:
        return self.edges[(u, v)][0]

    def active_vars(self) -> list[int]:
        return sorted({lit_var(u) for e in self.edges for u in e})

    def to_text(self) -> str:
        """One edge per line: ``literal literal source-clique``."""
        lines = []
        for (u, v), srcs in sorted(self.edges.items()):
            lines.extend(f"{lit_name(u)} {lit_name(v)} {s}" for s in srcs)
        return "\n".join(lines) + ("\n" if lines else "")


def fractional_vars(b: BeliefSolution, int_tol: float = INT_TOL) -> np.ndarray:
    p1 = b.var_beliefs[:, 1]
    return (np.minimum(np.abs(p1), np.abs(1.0 - p1)) > int_tol) | (p1 == 0.5)


def build_implication_graph(b: BeliefSolution, eps: float = EPS, int_tol: float = INT_TOL) -> ImplicationGraph:
    """Edges from every restrictive pairwise projection of every clique of size >= 2.

    Variables with integral beliefs never receive edges.
    """
    frac = fractional_vars(b, int_tol)
    g = ImplicationGraph(b.n)
    for cid in b.clique_beliefs:
        members = [i for i in cid.members if frac[i]]
        for i, j in itertools.combinations(members, 2):
            ps = project_pairwise(b, cid, i, j, eps)
            for u, v in implications(i, j, ps.support):
                g.add(u, v, cid)
    return g


class FrustrationKind(enum.Enum):
    TRUE = "True"
    QUASI = "Quasi"


@dataclass(frozen=True)
class FrustratedCycle:
    """A frustration witness in the implication graph.

    ``literal_path`` is the closed walk ``i+ ... i- ... i+`` (true kind) or the
    one-directional path between the two literals of the pivot (quasi kind);
    ``edge_sources[k]`` is the clique behind its k-th edge. ``variable_cycle``
    and ``cycle_sources`` are filled by :func:`project_to_variables`; cycle edge
    k joins ``variable_cycle[k]`` and ``variable_cycle[k + 1]`` (cyclically).
    """

    kind: FrustrationKind
    pivot: int
    literal_path: tuple[int, ...]
    edge_sources: tuple[CliqueId, ...]
    score: int
    variable_cycle: tuple[int, ...] = ()
    cycle_sources: tuple[CliqueId, ...] = ()
    witness: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.literal_path) - 1

    def describe(self) -> str:
        path = "->".join(lit_name(u) for u in self.literal_path)
        return f"{self.kind.value} pivot={self.pivot} {path}"


def _distances_to(target: int, preds: list[list[int]]) -> np.ndarray:
    dist = np.full(len(preds), -1, dtype=np.int64)
    dist[target] = 0
    queue = deque([target])
    while queue:
        v = queue.popleft()
        for u in preds[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def _lex_shortest_path(start: int, dist: np.ndarray, succ: list[list[int]]) -> list[int]:
    path = [start]
    cur = start
    while dist[cur] > 0:
        cur = next(v for v in succ[cur] if dist[v] == dist[cur] - 1)
        path.append(cur)
    return path


def find_frustrated_cycle(g: ImplicationGraph) -> FrustratedCycle | None:
    """Minimum-score frustration witness over all variables, or ``None``.

    For each variable the BFS distances i+ -> i- and i- -> i+ are computed;
    both finite gives a true witness scored by their sum, exactly one finite a
    quasi witness scored by that length. Ties go to the smaller variable index,
    then the lexicographically smaller literal path.
    """
    if not g.edges:
        return None
    succ, preds = g.successors(), g.predecessors()
    best = None
    for i in g.active_vars():
        plus, minus = lit(i, 0), lit(i, 1)
        to_minus = _distances_to(minus, preds)
        to_plus = _distances_to(plus, preds)
        d_down, d_up = to_minus[plus], to_plus[minus]
        if d_down < 0 and d_up < 0:
            continue
        if d_down >= 0 and d_up >= 0:
            kind = FrustrationKind.TRUE
            score = int(d_down + d_up)
            down = _lex_shortest_path(plus, to_minus, succ)
            up = _lex_shortest_path(minus, to_plus, succ)
            path = tuple(down + up[1:])
        else:
            kind = FrustrationKind.QUASI
            if d_down >= 0:
                score, path = int(d_down), tuple(_lex_shortest_path(plus, to_minus, succ))
            else:
                score, path = int(d_up), tuple(_lex_shortest_path(minus, to_plus, succ))
        key = (score, i, path)
        if best is None or key < best[0]:
            best = (key, kind)
    if best is None:
        return None
    (score, i, path), kind = best
    sources = tuple(g.source(u, v) for u, v in zip(path, path[1:]))
    return FrustratedCycle(kind, i, path, sources, score)


class DegenerateProjection(ValueError):
    """A witness projected onto fewer than two distinct variables."""


def _innermost_witness(path: list[int], sources: list[CliqueId]) -> tuple[list[int], list[CliqueId]]:
    """Shrink a literal path ``p -> ... -> not p`` until its interior variables are distinct.

    A repeated interior variable must appear with both polarities, so the
    enclosed stretch is itself a path between the two literals of that
    variable and is an equally valid (shorter) witness. Loops returning to
    the same literal carry no information and are cut out.
    """
    while True:
        last = len(path) - 1
        seen: dict[int, int] = {}
        best = None
        for q, u in enumerate(path):
            var = lit_var(u)
            p = seen.get(var)
            if p is not None and (p, q) != (0, last):
                if best is None or q - p < best[1] - best[0]:
                    best = (p, q)
            seen[var] = q
        if best is None:
            return path, sources
        a, b = best
        if path[a] == path[b]:
            path, sources = path[:a] + path[b:], sources[:a] + sources[b:]
        else:
            path, sources = path[a : b + 1], sources[a:b]


def project_to_variables(fc: FrustratedCycle) -> FrustratedCycle:
    """Fill ``variable_cycle`` with a simple cycle of variables through the witness.

    A true walk splits into its two halves (i+ -> i- and i- -> i+); each half,
    like a quasi path, already forces the pivot's value. The shortest half
    whose projection keeps the original pivot is used, falling back to a
    shrunken sub-witness around another variable when needed.
    """
    path, srcs = list(fc.literal_path), list(fc.edge_sources)
    if fc.kind is FrustrationKind.TRUE:
        mid = path.index(fc.literal_path[0] ^ 1)
        halves = [(path[: mid + 1], srcs[:mid]), (path[mid:], srcs[mid:])]
    else:
        halves = [(path, srcs)]
    options = []
    for order, (hp, hs) in enumerate(halves):
        wp, ws = _innermost_witness(hp, hs)
        kept_pivot = lit_var(wp[0]) == fc.pivot
        options.append((not kept_pivot, len(wp), order, wp, ws))
    *_, witness, wsrc = min(options, key=lambda o: o[:3])
    cycle = tuple(lit_var(u) for u in witness[:-1])
    if len(set(cycle)) < 2:
        raise DegenerateProjection(f"witness {witness} covers fewer than two variables")
    return FrustratedCycle(
        fc.kind, fc.pivot, fc.literal_path, fc.edge_sources, fc.score,
        cycle, tuple(wsrc), tuple(witness),
    )
