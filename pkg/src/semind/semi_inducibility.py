"""Embedding counts of two-coloured patterns and exhaustive extremal search.

An embedding of H into G is an injection V(H) -> V(G) sending red edges
to edges of G and blue edges to non-edges of G.  Counting is done with
bitmask candidate sets: vertices of H are placed one at a time and the
last one is counted with a popcount.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, perm
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graphs import (
    MAX_ENUMERATION_ORDER,
    Graph,
    GraphError,
    density_vector,
    enumerate_graph6,
    graph6_rows_array,
)

Pair = tuple[int, int]


def _norm_edges(edges: Iterable[Sequence[int]], kappa: int, colour: str) -> tuple[Pair, ...]:
    out = set()
    for e in edges:
        u, w = (int(x) for x in e)
        if u == w:
            raise ValueError(f"{colour} self-loop at {u}")
        if not (0 <= u < kappa and 0 <= w < kappa):
            raise ValueError(f"{colour} edge {u}{w} outside [0, {kappa})")
        out.add((min(u, w), max(u, w)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class TwoColoredGraph:
    """A pattern H on ``range(kappa)`` with disjoint red and blue edge sets."""

    kappa: int
    red: tuple[Pair, ...]
    blue: tuple[Pair, ...]

    def __post_init__(self) -> None:
        if self.kappa < 0:
            raise ValueError("negative pattern order")
        red = _norm_edges(self.red, self.kappa, "red")
        blue = _norm_edges(self.blue, self.kappa, "blue")
        if set(red) & set(blue):
            raise ValueError("an edge cannot be both red and blue")
        object.__setattr__(self, "red", red)
        object.__setattr__(self, "blue", blue)

    def swap_colours(self) -> "TwoColoredGraph":
        return TwoColoredGraph(self.kappa, self.blue, self.red)

    def relabel(self, perm: Sequence[int]) -> "TwoColoredGraph":
        red = [(perm[u], perm[w]) for u, w in self.red]
        blue = [(perm[u], perm[w]) for u, w in self.blue]
        return TwoColoredGraph(self.kappa, red, blue)

    def red_graph(self) -> Graph:
        return Graph.from_edges(self.kappa, self.red)

    def to_json(self) -> dict:
        return {"kappa": self.kappa, "red": [list(e) for e in self.red], "blue": [list(e) for e in self.blue]}

    @classmethod
    def from_json(cls, data: Mapping | str) -> "TwoColoredGraph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["kappa"]), data.get("red", []), data.get("blue", []))


def _h(red: str, blue: str) -> TwoColoredGraph:
    def pairs(text: str) -> list[Pair]:
        return [(int(t[0]), int(t[1])) for t in text.split()]

    return TwoColoredGraph(4, pairs(red), pairs(blue))


# The eighteen patterns on four vertices, as (red, blue) edge lists.
BUILTIN: tuple[TwoColoredGraph, ...] = (
    _h("01", "23"),
    _h("01", "02 03"),
    _h("01", "12 03"),
    _h("12", "01 03"),
    _h("02 03 12", "01"),
    _h("01 02 03", "23"),
    _h("12", "02 03 23"),
    _h("03", "32 12 10"),
    _h("32 03 12 10", "02"),
    _h("01 02 12 23", "03"),
    _h("01 12", "02 03"),
    _h("02 03", "01 23"),
    _h("01 03", "12 23"),
    _h("01 23", "03 12"),
    _h("02 12 23", "01 03"),
    _h("02 03", "01 12 23"),
    _h("03 23", "02 01 12"),
    _h("02 03 12", "01 23"),
)


@dataclass(frozen=True)
class TableRow:
    """Reference value of lambda_H for one pattern with the construction attaining it.

    ``kind`` is "quasirandom" (p-random graphs), "blowup" (a weighted base
    graph), "regular" (a closed-form family of regular graphs) or "bounds"
    (only an interval is known).  ``value`` is the printed constant as a
    float; for bounds it is the lower end.
    """

    index: int
    printed: str
    value: float
    kind: str
    base: str | None = None
    ratios: tuple[float, ...] = ()
    lower: float | None = None
    upper: float | None = None


_SQ57 = 57 ** 0.5
_ALPHA5 = (13 - _SQ57) / 56

TABLE1: tuple[TableRow, ...] = (
    TableRow(0, "1/4", 1 / 4, "quasirandom"),
    TableRow(1, "4/27", 4 / 27, "quasirandom"),
    TableRow(2, "4/27", 4 / 27, "quasirandom"),
    TableRow(3, "[0.150083407311578, 0.1500834091519]", 0.150083407311578, "bounds",
             lower=0.150083407311578, upper=0.1500834091519),
    TableRow(4, "4/27", 4 / 27, "blowup", "K3", (1 / 3,) * 3),
    TableRow(5, "(171 sqrt57 + 7879)/43904", (171 * _SQ57 + 7879) / 43904, "blowup", "K5",
             (_ALPHA5,) * 4 + (1 - 4 * _ALPHA5,)),
    TableRow(6, "1/8", 1 / 8, "blowup", "K2", (1 / 2, 1 / 2)),
    TableRow(7, "27/256", 27 / 256, "quasirandom"),
    TableRow(8, "4/27", 4 / 27, "blowup", "K3", (1 / 3,) * 3),
    TableRow(9, "12/125", 12 / 125, "blowup", "K5", (1 / 5,) * 5),
    TableRow(10, "1/8", 1 / 8, "blowup", "K2", (1 / 2, 1 / 2)),
    TableRow(11, "1/8", 1 / 8, "blowup", "K2", (1 / 2, 1 / 2)),
    TableRow(12, "1/8", 1 / 8, "blowup", "K2", (1 / 2, 1 / 2)),
    TableRow(13, "1/8", 1 / 8, "blowup", "K2", (1 / 2, 1 / 2)),
    TableRow(14, "1/8", 1 / 8, "blowup", "K2", (1 / 2, 1 / 2)),
    TableRow(15, "1/27", 1 / 27, "regular"),
    TableRow(16, "1/8", 1 / 8, "blowup", "K2", (1 / 2, 1 / 2)),
    TableRow(17, "1/8", 1 / 8, "blowup", "K2", (1 / 2, 1 / 2)),
)


def quasirandom_density(h: TwoColoredGraph, p: Fraction) -> Fraction:
    """Limit of lambda_H in p-quasirandom graphs: p^red (1-p)^blue."""
    return Fraction(p) ** len(h.red) * (1 - Fraction(p)) ** len(h.blue)


def quasirandom_optimum(h: TwoColoredGraph) -> tuple[Fraction, Fraction]:
    """Best edge density p = r/(r+b) and the resulting limit density."""
    r, b = len(h.red), len(h.blue)
    if r + b == 0:
        return Fraction(0), Fraction(1)
    p = Fraction(r, r + b)
    return p, quasirandom_density(h, p)


def builtin_h(i: int) -> TwoColoredGraph:
    if not 0 <= i < len(BUILTIN):
        raise IndexError(f"pattern index {i} outside 0..{len(BUILTIN) - 1}")
    return BUILTIN[i]


# counting -------------------------------------------------------------------

@dataclass(frozen=True)
class _Plan:
    order: tuple[int, ...]
    # for each step, the earlier steps constrained to be adjacent / non-adjacent
    red_back: tuple[tuple[int, ...], ...]
    blue_back: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def _plan(h: TwoColoredGraph, first: int | None = None) -> _Plan:
    """Greedy vertex order: each next vertex has the most constraints to those placed."""
    adj: dict[int, set[int]] = {v: set() for v in range(h.kappa)}
    for u, w in h.red + h.blue:
        adj[u].add(w)
        adj[w].add(u)
    order: list[int] = []
    remaining = set(range(h.kappa))
    while remaining:
        if not order and first is not None:
            v = first
        else:
            v = max(sorted(remaining), key=lambda x: (len(adj[x] & set(order)), len(adj[x])))
        order.append(v)
        remaining.discard(v)
    pos = {v: i for i, v in enumerate(order)}
    red = {frozenset(e) for e in h.red}
    blue = {frozenset(e) for e in h.blue}
    red_back, blue_back = [], []
    for i, v in enumerate(order):
        red_back.append(tuple(pos[w] for w in order[:i] if frozenset((v, w)) in red))
        blue_back.append(tuple(pos[w] for w in order[:i] if frozenset((v, w)) in blue))
    return _Plan(tuple(order), tuple(red_back), tuple(blue_back))


def _count_rows(plan: _Plan, rows: Sequence[int], n: int, fixed: int | None = None) -> int:
    full = (1 << n) - 1
    k = len(plan.order)
    images = [0] * k

    def candidates(step: int, used: int) -> int:
        cand = full & ~used
        for j in plan.red_back[step]:
            cand &= rows[images[j]]
        for j in plan.blue_back[step]:
            cand &= ~rows[images[j]]
        return cand

    def rec(step: int, used: int) -> int:
        cand = candidates(step, used)
        if step == 0 and fixed is not None:
            cand &= 1 << fixed
        if step == k - 1:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            images[step] = low.bit_length() - 1
            total += rec(step + 1, used | low)
            cand ^= low
        return total

    if k == 0:
        return 1
    return rec(0, 0)


def count_embeddings(h: TwoColoredGraph, g: Graph) -> int:
    """Lambda_H(G): the number of embeddings of H into G."""
    if g.n < h.kappa:
        raise GraphError(f"graph order {g.n} is smaller than pattern order {h.kappa}")
    return _count_rows(_plan(h), g.rows, g.n)


def embedding_density(h: TwoColoredGraph, g: Graph) -> Fraction:
    """lambda_H(G): the probability that a random injection is an embedding."""
    return Fraction(count_embeddings(h, g), perm(g.n, h.kappa))


def per_vertex_count(h: TwoColoredGraph, g: Graph, u: int) -> int:
    """Number of embeddings of H into G whose image contains ``u``."""
    if not 0 <= u < g.n:
        raise GraphError(f"vertex {u} outside graph of order {g.n}")
    if g.n < h.kappa:
        raise GraphError(f"graph order {g.n} is smaller than pattern order {h.kappa}")
    return sum(_count_rows(_plan(h, i), g.rows, g.n, fixed=u) for i in range(h.kappa))


def count_embeddings_batch(h: TwoColoredGraph, rows: np.ndarray) -> np.ndarray:
    """Vectorised Lambda_H over a (B, n) array of adjacency row masks."""
    rows = np.asarray(rows, dtype=np.uint32)
    batch, n = rows.shape
    if n < h.kappa:
        raise GraphError(f"graph order {n} is smaller than pattern order {h.kappa}")
    plan = _plan(h)
    k = len(plan.order)
    full = np.uint32((1 << n) - 1)
    totals = np.zeros(batch, dtype=np.int64)
    if k == 0:
        return totals + 1
    cols = [rows[:, v] for v in range(n)]
    ncols = [~c & full for c in cols]
    images = [0] * k

    def candidates(step: int, used: int) -> np.ndarray:
        cand = np.full(batch, ~used & ((1 << n) - 1), dtype=np.uint32)
        for j in plan.red_back[step]:
            cand &= cols[images[j]]
        for j in plan.blue_back[step]:
            cand &= ncols[images[j]]
        return cand

    def rec(step: int, used: int, alive: np.ndarray) -> None:
        nonlocal totals
        cand = candidates(step, used) & alive
        if step == k - 1:
            totals += np.bitwise_count(cand)
            return
        for v in range(n):
            if used >> v & 1:
                continue
            hit = (cand >> np.uint32(v)) & np.uint32(1)
            if not hit.any():
                continue
            images[step] = v
            # 0 - 1 wraps to all ones: graphs where v is not a candidate drop out
            rec(step + 1, used | (1 << v), (np.uint32(0) - hit) & full)

    rec(0, 0, np.full(batch, full, dtype=np.uint32))
    return totals


# gamma functionals -------------------------------------------------------------

@dataclass(frozen=True)
class GammaFunction:
    """A value for every isomorphism class of graphs of order kappa (keys: canonical graph6)."""

    kappa: int
    values: Mapping[str, Fraction]

    def __post_init__(self) -> None:
        expected = set(enumerate_graph6(self.kappa))
        if set(self.values) != expected:
            raise ValueError(f"gamma must assign a value to each of the {len(expected)} classes of order {self.kappa}")

    def __getitem__(self, key: str) -> Fraction:
        return self.values[key]

    @classmethod
    def constant(cls, kappa: int, value: Fraction | int = 1) -> "GammaFunction":
        return cls(kappa, {g6: Fraction(value) for g6 in enumerate_graph6(kappa)})


def gamma_from_h(h: TwoColoredGraph) -> GammaFunction:
    """gamma(F) = lambda_H(F) on every class F of order kappa."""
    values = {}
    norm = factorial(h.kappa)
    for g6 in enumerate_graph6(h.kappa):
        values[g6] = Fraction(count_embeddings(h, Graph.from_graph6(g6)), norm)
    return GammaFunction(h.kappa, values)


def lambda_gamma(gamma: GammaFunction, g: Graph) -> Fraction:
    """Sum over classes F of gamma(F) times the induced density p(F, G)."""
    if g.n < gamma.kappa:
        raise GraphError(f"graph order {g.n} is smaller than gamma order {gamma.kappa}")
    dens = density_vector(g, gamma.kappa)
    return sum((gamma.values[key] * p for key, p in dens.items() if p), Fraction(0))


# exhaustive search --------------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    n: int
    max_count: int
    max_density: Fraction
    extremal: tuple[str, ...]

    def to_json(self) -> dict:
        d = self.max_density
        return {
            "n": self.n,
            "max": self.max_count,
            "density": f"{d.numerator}/{d.denominator}",
            "extremal_count": len(self.extremal),
            "extremal": list(self.extremal),
        }


def default_threads() -> int:
    env = os.environ.get("SEMIND_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


_CHUNK = 1 << 15


def _chunk_max(h: TwoColoredGraph, n: int, chunk: Sequence[str]) -> tuple[int, list[str]]:
    counts = count_embeddings_batch(h, graph6_rows_array(chunk, n))
    best = int(counts.max())
    return best, [chunk[i] for i in np.flatnonzero(counts == best)]


def brute_force_max(h: TwoColoredGraph, n: int, threads: int = 1) -> SearchResult:
    """Exact Lambda_H(n) over all graphs of order n with every extremal class."""
    if not h.kappa <= n <= MAX_ENUMERATION_ORDER:
        raise GraphError(f"order {n} outside {h.kappa}..{MAX_ENUMERATION_ORDER}")
    classes = enumerate_graph6(n)
    chunks = [classes[i:i + _CHUNK] for i in range(0, len(classes), _CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_chunk_max, [h] * len(chunks), [n] * len(chunks), chunks))
    else:
        parts = [_chunk_max(h, n, c) for c in chunks]
    best = max(p[0] for p in parts)
    extremal = sorted(g6 for value, graphs in parts if value == best for g6 in graphs)
    return SearchResult(n, best, Fraction(best, perm(n, h.kappa)), tuple(extremal))
