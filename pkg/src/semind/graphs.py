"""Simple graphs on at most 32 vertices with bitset adjacency rows.

Besides the basic vocabulary (degrees, complements, induced subgraphs,
flips and clones) this module provides graph6 I/O, a canonical labelling
based on colour refinement plus individualisation, isomorph-free
enumeration of small graphs and induced subgraph densities.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_VERTICES = 32
MAX_ENUMERATION_ORDER = 9


class GraphError(ValueError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertex set ``range(n)``.

    ``rows[u]`` is the neighbourhood of ``u`` encoded as a bitmask.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"order {self.n} outside 0..{MAX_VERTICES}")
        if len(self.rows) != self.n:
            raise GraphError("need exactly one adjacency row per vertex")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~full:
                raise GraphError(f"row {u} mentions a vertex outside the graph")
            if row >> u & 1:
                raise GraphError(f"self-loop at {u}")
            for w in _bits(row):
                if not self.rows[w] >> u & 1:
                    raise GraphError(f"asymmetric adjacency between {u} and {w}")

    # construction -----------------------------------------------------
    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << u) for u in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = [0] * n
        for u, w in edges:
            if u == w:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= w < n):
                raise GraphError(f"edge {u}{w} outside [0, {n})")
            rows[u] |= 1 << w
            rows[w] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_graph6(cls, text: str) -> "Graph":
        return decode_graph6(text)

    # queries ----------------------------------------------------------
    def has_edge(self, u: int, w: int) -> bool:
        return bool(self.rows[u] >> w & 1)

    def neighbours(self, u: int) -> list[int]:
        return list(_bits(self.rows[u]))

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.rows]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, w) for u in range(self.n) for w in _bits(self.rows[u]) if u < w]

    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def triangles(self) -> int:
        total = 0
        for u, w in self.edges():
            total += (self.rows[u] & self.rows[w]).bit_count()
        return total // 3

    # edits ------------------------------------------------------------
    def _check_pair(self, u: int, w: int) -> None:
        if not (0 <= u < self.n and 0 <= w < self.n):
            raise GraphError(f"vertex out of range for order {self.n}")
        if u == w:
            raise GraphError("need two distinct vertices")

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~row & ~(1 << u) for u, row in enumerate(self.rows)))

    def flip(self, u: int, w: int) -> "Graph":
        """Toggle the adjacency between ``u`` and ``w``."""
        self._check_pair(u, w)
        rows = list(self.rows)
        rows[u] ^= 1 << w
        rows[w] ^= 1 << u
        return Graph(self.n, tuple(rows))

    def clone_onto(self, u: int, w: int) -> "Graph":
        """Make ``w`` a clone of ``u``: its new neighbourhood is N(u) minus w."""
        self._check_pair(u, w)
        new_row = self.rows[u] & ~(1 << w)
        rows = list(self.rows)
        bit_w = 1 << w
        for v in range(self.n):
            if v == w:
                continue
            if new_row >> v & 1:
                rows[v] |= bit_w
            else:
                rows[v] &= ~bit_w
        rows[w] = new_row
        return Graph(self.n, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            row = 0
            for w in _bits(self.rows[v]):
                if w in index:
                    row |= 1 << index[w]
            rows.append(row)
        return Graph(len(vertices), tuple(rows))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph in which vertex ``v`` is renamed ``perm[v]``."""
        rows = [0] * self.n
        for v in range(self.n):
            row = 0
            for w in _bits(self.rows[v]):
                row |= 1 << perm[w]
            rows[perm[v]] = row
        return Graph(self.n, tuple(rows))

    def disjoint_union(self, other: "Graph") -> "Graph":
        shift = self.n
        rows = list(self.rows) + [row << shift for row in other.rows]
        return Graph(self.n + other.n, tuple(rows))

    def to_graph6(self) -> str:
        return encode_graph6(self)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, g6={self.to_graph6()!r})"


def edit(g: Graph, mode: str, u: int | None = None, w: int | None = None) -> Graph:
    """Dispatch one of the elementary edits: ``flip``, ``clone_onto`` or ``complement``."""
    if mode == "complement":
        return g.complement()
    if u is None or w is None:
        raise GraphError(f"{mode} needs two vertices")
    if mode == "flip":
        return g.flip(u, w)
    if mode == "clone_onto":
        return g.clone_onto(u, w)
    raise GraphError(f"unknown edit {mode!r}")


# graph6 ---------------------------------------------------------------

def _encode_order(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise GraphError("order too large for graph6")


def _upper_bits(g: Graph) -> Iterator[int]:
    rows = g.rows
    for j in range(1, g.n):
        row = rows[j]
        for i in range(j):
            yield row >> i & 1


def encode_graph6(g: Graph) -> str:
    out = [_encode_order(g.n)]
    bits = list(_upper_bits(g))
    bits.extend([0] * (-len(bits) % 6))
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k:k + 6]:
            value = value << 1 | b
        out.append(chr(value + 63))
    return "".join(out)


def decode_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphError("empty graph6 string")
    codes = [ord(c) - 63 for c in s]
    if any(not 0 <= c <= 63 for c in codes):
        raise GraphError(f"invalid graph6 character in {text!r}")
    if codes[0] == 63:
        if len(codes) < 4:
            raise GraphError("truncated graph6 header")
        n = codes[1] << 12 | codes[2] << 6 | codes[3]
        body = codes[4:]
    else:
        n = codes[0]
        body = codes[1:]
    need = comb(n, 2)
    if len(body) != (need + 5) // 6:
        raise GraphError(f"graph6 body has wrong length for order {n}")
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if body[k // 6] >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph(n, tuple(rows))


def graph6_rows_array(strings: Sequence[str], n: int) -> np.ndarray:
    """Decode many graph6 strings of the same order ``n`` into a (len, n) array of row masks."""
    nbits = comb(n, 2)
    width = 1 + (nbits + 5) // 6
    rows = np.zeros((len(strings), n), dtype=np.uint32)
    if not strings or n < 2:
        return rows
    raw = np.frombuffer("".join(strings).encode("ascii"), dtype=np.uint8)
    if raw.size != width * len(strings) or n > 62:
        raise GraphError(f"expected graph6 strings of order {n}")
    body = raw.reshape(len(strings), width)[:, 1:] - 63
    bits = np.unpackbits(body[:, :, None], axis=2)[:, :, 2:].reshape(len(strings), -1)
    k = 0
    for j in range(1, n):
        for i in range(j):
            b = bits[:, k].astype(np.uint32)
            rows[:, i] |= b << j
            rows[:, j] |= b << i
            k += 1
    return rows


# canonical labelling ------------------------------------------------------

@dataclass(frozen=True)
class CanonicalKey:
    graph: Graph
    graph6: str
    perm: tuple[int, ...]  # perm[v] = canonical position of original vertex v

    def __lt__(self, other: "CanonicalKey") -> bool:
        return self.graph6 < other.graph6


def _refine(nbrs: Sequence[Sequence[int]], colours: list[int]) -> list[int]:
    """Colour refinement; colours are cell start positions and only ever split."""
    n = len(nbrs)
    ncells = len(set(colours))
    while True:
        sigs = [(colours[v], tuple(sorted([colours[w] for w in nbrs[v]]))) for v in range(n)]
        order = sorted(range(n), key=sigs.__getitem__)
        new = [0] * n
        start = 0
        prev = None
        count = 0
        for pos, v in enumerate(order):
            sig = sigs[v]
            if sig != prev:
                start = pos
                prev = sig
                count += 1
            new[v] = start
        colours = new
        if count == ncells or count == n:
            return colours
        ncells = count


def _leaf_code(rows: Sequence[int], colours: Sequence[int]) -> int:
    n = len(rows)
    inv = [0] * n
    for v, c in enumerate(colours):
        inv[c] = v
    code = 0
    for j in range(1, n):
        row = rows[inv[j]]
        for i in range(j):
            code = code << 1 | (row >> inv[i] & 1)
    return code


def _code_to_graph6(n: int, code: int) -> str:
    nbits = n * (n - 1) // 2
    pad = -nbits % 6
    code <<= pad
    nchars = (nbits + pad) // 6
    chars = [chr(((code >> (6 * (nchars - 1 - k))) & 63) + 63) for k in range(nchars)]
    return _encode_order(n) + "".join(chars)


def _orbit_root(parent: list[int], v: int) -> int:
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


def _canonical_search(rows: Sequence[int], colours: list[int]) -> tuple[int, list[int]]:
    """Return (code, colours) of the minimal leaf; code is the graph6 bit string."""
    n = len(rows)
    nbrs = [list(_bits(row)) for row in rows]
    best: list = [None, None]
    autos: list[list[int]] = []

    def equivalent(v: int, tried: list[int], path: tuple[int, ...]) -> bool:
        row_v = rows[v]
        for u in tried:
            if (rows[u] & ~(1 << v)) == (row_v & ~(1 << u)):
                return True
        if not autos:
            return False
        parent = list(range(n))
        for gamma in autos:
            if all(gamma[p] == p for p in path):
                for x in range(n):
                    a, b = _orbit_root(parent, x), _orbit_root(parent, gamma[x])
                    if a != b:
                        parent[a] = b
        root = _orbit_root(parent, v)
        return any(_orbit_root(parent, u) == root for u in tried)

    def search(colours: list[int], path: tuple[int, ...]) -> None:
        colours = _refine(nbrs, colours)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colours):
            cells.setdefault(c, []).append(v)
        if len(cells) == n:
            code = _leaf_code(rows, colours)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, colours
            elif code == best[0]:
                # both leaves give the same graph: record the automorphism
                inv_best = [0] * n
                for v, c in enumerate(best[1]):
                    inv_best[c] = v
                autos.append([inv_best[colours[v]] for v in range(n)])
            return
        target_colour = min(c for c, members in cells.items() if len(members) > 1)
        target = cells[target_colour]
        tried: list[int] = []
        for v in target:
            if tried and equivalent(v, tried, path):
                continue
            child = list(colours)
            for w in target:
                if w != v:
                    child[w] = target_colour + 1
            search(child, path + (v,))
            tried.append(v)

    search(colours, ())
    return best[0], best[1]


def _canonical_perm(rows: Sequence[int], colours: list[int]) -> tuple[int, ...]:
    return tuple(_canonical_search(rows, colours)[1])


def _initial_colours(rows: Sequence[int], roots: Sequence[int]) -> list[int]:
    n = len(rows)
    colours = [len(roots)] * n
    for i, r in enumerate(roots):
        colours[r] = i
    return colours


def canonical_form(g: Graph, roots: Sequence[int] = ()) -> CanonicalKey:
    """Canonical relabelling of ``g``.

    With ``roots`` the listed vertices are pinned to positions 0..t-1 in the
    given order, which yields the canonical form of a rooted graph (a flag).
    The key is the smallest graph6 string over the leaves of the search tree.
    """
    if len(set(roots)) != len(roots):
        raise GraphError("roots must be distinct")
    perm = _canonical_perm(g.rows, _initial_colours(g.rows, roots))
    cg = g.relabel(perm)
    return CanonicalKey(cg, cg.to_graph6(), perm)


def canonical_graph6(g: Graph) -> str:
    return canonical_form(g).graph6


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.num_edges() == h.num_edges() and canonical_graph6(g) == canonical_graph6(h)


# enumeration ----------------------------------------------------------------

def _cache_dir() -> Path:
    base = os.environ.get("SEMIND_CACHE") or os.path.join(
        os.environ.get("XDG_CACHE_HOME") or os.path.expanduser("~/.cache"), "semind"
    )
    return Path(base)


def _augment(parents: Iterable[Graph], n: int) -> list[str]:
    seen: set[str] = set()
    for p in parents:
        for mask in range(1 << (n - 1)):
            rows = [row | ((mask >> u & 1) << (n - 1)) for u, row in enumerate(p.rows)]
            rows.append(mask)
            code, _ = _canonical_search(rows, [0] * n)
            seen.add(_code_to_graph6(n, code))
    return sorted(seen)


@lru_cache(maxsize=None)
def _enumerate_g6(n: int) -> tuple[str, ...]:
    if n == 0:
        return (Graph.empty(0).to_graph6(),)
    cache_file = _cache_dir() / f"graphs{n}.g6"
    if n >= 8 and cache_file.exists():
        lines = tuple(cache_file.read_text().split())
        if len(lines) == KNOWN_CLASS_COUNTS.get(n, -1):
            return lines
    parents = [decode_graph6(s) for s in _enumerate_g6(n - 1)]
    result = tuple(_augment(parents, n))
    if n >= 8:
        try:
            cache_file.parent.mkdir(parents=True, exist_ok=True)
            cache_file.write_text("\n".join(result) + "\n")
        except OSError:
            pass
    return result


# OEIS A000088; only used to validate the on-disk cache
KNOWN_CLASS_COUNTS = {0: 1, 1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044, 8: 12346, 9: 274668}


def enumerate_graphs(n: int, cap: int = MAX_ENUMERATION_ORDER) -> list[Graph]:
    """One canonical representative per isomorphism class of order ``n``.

    Built by adding a vertex in every possible way to the classes of order
    n-1 and deduplicating canonical forms; sorted by canonical graph6.
    Orders 8 and above are cached on disk (``$SEMIND_CACHE``).
    """
    if n < 0 or n > cap:
        raise GraphError(f"enumeration order {n} outside 0..{cap}")
    return [decode_graph6(s) for s in _enumerate_g6(n)]


def enumerate_graph6(n: int, cap: int = MAX_ENUMERATION_ORDER) -> tuple[str, ...]:
    if n < 0 or n > cap:
        raise GraphError(f"enumeration order {n} outside 0..{cap}")
    return _enumerate_g6(n)


# induced densities -------------------------------------------------------------

@lru_cache(maxsize=None)
def _class_table(k: int) -> tuple[tuple[str, ...], tuple[int, ...]]:
    """Map every labelled graph on k vertices (edge bitmask) to its class index."""
    classes = list(_enumerate_g6(k))
    index = {g6: i for i, g6 in enumerate(classes)}
    pairs = list(itertools.combinations(range(k), 2))
    table = []
    for mask in range(1 << len(pairs)):
        g = Graph.from_edges(k, [p for b, p in enumerate(pairs) if mask >> b & 1])
        table.append(index[canonical_graph6(g)])
    return tuple(classes), tuple(table)


def _subset_codes(g: Graph, k: int) -> Iterator[int]:
    pairs = list(itertools.combinations(range(k), 2))
    rows = g.rows
    for subset in itertools.combinations(range(g.n), k):
        code = 0
        for b, (i, j) in enumerate(pairs):
            if rows[subset[i]] >> subset[j] & 1:
                code |= 1 << b
        yield code


def induced_counts(g: Graph, k: int) -> dict[str, int]:
    """Number of k-subsets of V(g) inducing each class of order k (canonical graph6 keys)."""
    if k > g.n:
        raise GraphError(f"pattern order {k} exceeds graph order {g.n}")
    classes, table = _class_table(k)
    counts = [0] * len(classes)
    for code in _subset_codes(g, k):
        counts[table[code]] += 1
    return dict(zip(classes, counts))


def density_vector(g: Graph, k: int) -> dict[str, Fraction]:
    total = comb(g.n, k)
    return {key: Fraction(c, total) for key, c in induced_counts(g, k).items()}


def induced_density(f: Graph, g: Graph) -> Fraction:
    """p(F, G): fraction of v(F)-subsets of V(G) that induce a copy of F."""
    if f.n > g.n:
        raise GraphError(f"pattern order {f.n} exceeds graph order {g.n}")
    return density_vector(g, f.n)[canonical_graph6(f)]


# complete multipartite structure ------------------------------------------------

def complete_multipartite_parts(g: Graph) -> list[list[int]] | None:
    """Parts of g (largest first) if g is complete multipartite, else None.

    g is complete multipartite exactly when non-adjacency is an equivalence
    relation, i.e. every pair of non-adjacent vertices are clones.
    """
    full = (1 << g.n) - 1
    parts: list[list[int]] = []
    assigned = 0
    for u in range(g.n):
        if assigned >> u & 1:
            continue
        part_mask = full & ~g.rows[u]
        part = list(_bits(part_mask))
        for v in part:
            if g.rows[v] != g.rows[u]:
                return None
        assigned |= part_mask
        parts.append(part)
    parts.sort(key=lambda p: (-len(p), p))
    return parts


def co_cherry() -> Graph:
    """The 3-vertex graph with exactly one edge (complement of the path P3)."""
    return Graph.from_edges(3, [(0, 1)])
