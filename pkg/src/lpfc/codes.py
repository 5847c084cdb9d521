"""Tanner graphs for LDPC codes: alist I/O, random regular ensembles, Tanner-155."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from lpfc import gf2


class AlistError(ValueError):
    """Raised for malformed alist input."""


class SamplingError(RuntimeError):
    """Raised when a simple regular graph cannot be sampled."""


@dataclass(frozen=True)
class TannerGraph:
    """Bipartite variable/check structure of a binary linear code.

    ``check_members[c]`` lists the variables of check ``c`` in increasing
    order; ``var_checks[i]`` lists the checks touching variable ``i``.
    """

    n: int
    m: int
    check_members: tuple[tuple[int, ...], ...]
    var_checks: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        if len(self.check_members) != self.m or len(self.var_checks) != self.n:
            raise ValueError("adjacency lengths do not match (n, m)")
        for c, members in enumerate(self.check_members):
            if len(set(members)) != len(members):
                raise ValueError(f"check {c} repeats a variable")
            for i in members:
                if not 0 <= i < self.n or c not in self.var_checks[i]:
                    raise ValueError(f"check {c} / variable {i} adjacency inconsistent")
        total = sum(len(cs) for cs in self.var_checks)
        if total != sum(len(ms) for ms in self.check_members):
            raise ValueError("edge counts of the two adjacency views differ")

    @classmethod
    def from_checks(cls, n: int, checks) -> TannerGraph:
        members = tuple(tuple(sorted(int(i) for i in c)) for c in checks)
        var_checks: list[list[int]] = [[] for _ in range(n)]
        for c, ms in enumerate(members):
            for i in ms:
                if not 0 <= i < n:
                    raise ValueError(f"variable index {i} out of range for n={n}")
                var_checks[i].append(c)
        return cls(n, len(members), members, tuple(tuple(v) for v in var_checks))

    @classmethod
    def from_parity_matrix(cls, h) -> TannerGraph:
        h = gf2.as_gf2(h)
        return cls.from_checks(h.shape[1], [np.flatnonzero(row) for row in h])

    @property
    def var_degrees(self) -> list[int]:
        return [len(cs) for cs in self.var_checks]

    @property
    def check_degrees(self) -> list[int]:
        return [len(ms) for ms in self.check_members]

    @property
    def num_edges(self) -> int:
        return sum(self.check_degrees)

    def is_regular(self, d_l: int, d_r: int) -> bool:
        return all(d == d_l for d in self.var_degrees) and all(
            d == d_r for d in self.check_degrees
        )

    def parity_matrix(self) -> np.ndarray:
        h = np.zeros((self.m, self.n), dtype=np.uint8)
        for c, ms in enumerate(self.check_members):
            h[c, list(ms)] = 1
        return h

    def is_codeword(self, bits) -> bool:
        x = np.asarray(bits, dtype=np.int64)
        if x.shape != (self.n,):
            return False
        return all(int(x[list(ms)].sum()) % 2 == 0 for ms in self.check_members)

    def rank(self) -> int:
        return gf2.rank(self.parity_matrix())

    @property
    def dimension(self) -> int:
        return self.n - self.rank()

    def codeword_basis(self) -> np.ndarray:
        return gf2.nullspace_basis(self.parity_matrix())


# -- alist -------------------------------------------------------------------


def _int_rows(text: str) -> list[list[int]]:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise AlistError(f"non-integer token in line {line!r}") from exc
    return rows


def load_alist(text: str) -> TannerGraph:
    """Parse alist text into a :class:`TannerGraph`.

    Both neighbour blocks are read and cross-checked; zero padding is
    accepted only after the declared degree of each row.
    """
    rows = _int_rows(text)
    if len(rows) < 4 or len(rows[0]) != 2 or len(rows[1]) != 2:
        raise AlistError("header must be 'n m' followed by 'max_var_deg max_check_deg'")
    n, m = rows[0]
    max_dv, max_dc = rows[1]
    if n <= 0 or m <= 0:
        raise AlistError(f"invalid sizes n={n}, m={m}")
    var_deg, check_deg = rows[2], rows[3]
    if len(var_deg) != n or len(check_deg) != m:
        raise AlistError("degree list lengths do not match n and m")
    if max(var_deg) != max_dv or max(check_deg) != max_dc:
        raise AlistError("declared maximum degrees disagree with degree lists")
    if len(rows) != 4 + n + m:
        raise AlistError(f"expected {n + m} adjacency lines, found {len(rows) - 4}")

    def parse_block(block, degrees, limit, what):
        out = []
        for k, (line, deg) in enumerate(zip(block, degrees)):
            if any(v < 0 for v in line):
                raise AlistError(f"{what} {k}: negative index")
            head, tail = line[:deg], line[deg:]
            if len(head) != deg or 0 in head:
                raise AlistError(f"{what} {k}: expected {deg} neighbours, got {line}")
            if any(v != 0 for v in tail):
                raise AlistError(f"{what} {k}: nonzero entries past declared degree")
            if any(v > limit for v in head):
                raise AlistError(f"{what} {k}: index out of range 1..{limit}")
            if len(set(head)) != deg:
                raise AlistError(f"{what} {k}: repeated neighbour")
            out.append([v - 1 for v in head])
        return out

    var_nbrs = parse_block(rows[4 : 4 + n], var_deg, m, "variable")
    check_nbrs = parse_block(rows[4 + n :], check_deg, n, "check")
    from_vars = {(c, i) for i, cs in enumerate(var_nbrs) for c in cs}
    from_checks = {(c, i) for c, vs in enumerate(check_nbrs) for i in vs}
    if from_vars != from_checks:
        raise AlistError("variable and check adjacency blocks disagree")
    if any(d < 2 for d in check_deg):
        raise AlistError("checks of degree < 2 are not supported")
    return TannerGraph.from_checks(n, check_nbrs)


def write_alist(graph: TannerGraph) -> str:
    dv, dc = graph.var_degrees, graph.check_degrees
    max_dv, max_dc = max(dv), max(dc)

    def padded(vals, width):
        vals = [v + 1 for v in vals] + [0] * (width - len(vals))
        return " ".join(map(str, vals))

    lines = [
        f"{graph.n} {graph.m}",
        f"{max_dv} {max_dc}",
        " ".join(map(str, dv)),
        " ".join(map(str, dc)),
    ]
    lines += [padded(cs, max_dv) for cs in graph.var_checks]
    lines += [padded(ms, max_dc) for ms in graph.check_members]
    return "\n".join(lines) + "\n"


# -- constructions -----------------------------------------------------------

MAX_RESAMPLES = 10_000


def sample_regular(n: int, d_l: int, d_r: int, seed: int) -> TannerGraph:
    """Draw a simple (d_l, d_r)-regular Tanner graph from the configuration model.

    The whole socket permutation is redrawn whenever it produces a repeated
    variable inside a check, so the returned graph is exactly regular.
    """
    if n <= 0 or d_l <= 0 or d_r <= 1:
        raise ValueError("need n > 0, d_l > 0, d_r > 1")
    if (n * d_l) % d_r:
        raise ValueError(f"n*d_l = {n * d_l} is not divisible by d_r = {d_r}")
    if d_r > n:
        raise ValueError("check degree exceeds blocklength")
    m = n * d_l // d_r
    rng = np.random.default_rng(seed)
    sockets = np.repeat(np.arange(n), d_l)
    for _ in range(MAX_RESAMPLES):
        perm = rng.permutation(sockets).reshape(m, d_r)
        ordered = np.sort(perm, axis=1)
        if np.all(ordered[:, 1:] != ordered[:, :-1]):
            return TannerGraph.from_checks(n, ordered)
    raise SamplingError(
        f"no simple ({d_l},{d_r}) graph with n={n} after {MAX_RESAMPLES} draws"
    )


def circulant_code(shifts, size: int) -> TannerGraph:
    """Code whose parity matrix is a block array of ``size``-circulant permutations.

    Block (i, j) has a one at (r, (r + shifts[i][j]) % size).
    """
    shifts = np.asarray(shifts, dtype=np.int64)
    rows_b, cols_b = shifts.shape
    checks = []
    for i in range(rows_b):
        for r in range(size):
            checks.append([j * size + (r + shifts[i, j]) % size for j in range(cols_b)])
    return TannerGraph.from_checks(cols_b * size, checks)


def tanner155_shifts() -> list[list[int]]:
    """Shift exponents b^i * a^j mod 31 with a = 2 (order 5) and b = 5 (order 3)."""
    a, b, p = 2, 5, 31
    return [[(pow(b, i, p) * pow(a, j, p)) % p for j in range(5)] for i in range(3)]


def build_tanner155() -> TannerGraph:
    graph = circulant_code(tanner155_shifts(), 31)
    if (graph.n, graph.m) != (155, 93) or not graph.is_regular(3, 5):
        raise AssertionError("Tanner-155 construction failed structural validation")
    if graph.rank() != 91:
        raise AssertionError("Tanner-155 parity matrix does not have GF(2) rank 91")
    return graph


def load_bundled(name: str) -> TannerGraph:
    """Load one of the alist files shipped in ``lpfc/data``."""
    text = resources.files("lpfc.data").joinpath(f"{name}.alist").read_text()
    return load_alist(text)


HAMMING_7_4_CHECKS = ((0, 1, 2, 4), (0, 1, 3, 5), (0, 2, 3, 6))


def hamming74() -> TannerGraph:
    return TannerGraph.from_checks(7, HAMMING_7_4_CHECKS)
