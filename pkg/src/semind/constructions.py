"""Named graph constructions: Turán and complete multipartite graphs,
quasi-cliques, bipartite and ordinary circulants, and the special builds
used for the patterns H6, H15 and H3."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor, prod
from typing import Sequence

from .graphs import MAX_VERTICES, Graph, GraphError


def pi_s(s: int, n: int) -> int:
    """Maximum product of s nonnegative integers summing to n."""
    if s < 1:
        raise ValueError("s must be positive")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return prod((n + i) // s for i in range(s))


def _check_order(n: int) -> None:
    if n > MAX_VERTICES:
        raise GraphError(f"construction would have {n} > {MAX_VERTICES} vertices")


def multipartite(sizes: Sequence[int]) -> Graph:
    """Complete multipartite graph; part i occupies the next sizes[i] vertices."""
    if any(s < 0 for s in sizes):
        raise GraphError("part sizes must be nonnegative")
    n = sum(sizes)
    _check_order(n)
    part = [i for i, s in enumerate(sizes) for _ in range(s)]
    return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n) if part[a] != part[b]])


def turan_sizes(m: int, n: int) -> list[int]:
    return [(n + i) // m for i in range(m)]


def turan(m: int, n: int) -> Graph:
    if m < 1:
        raise GraphError("need at least one part")
    return multipartite(turan_sizes(m, n))


def quasi_clique(n: int, e: int) -> Graph:
    """K_{k+1} minus a star of C(k+1,2)-e edges, plus isolated vertices; exactly e edges.

    k is the largest integer with C(k,2) < e.  The star is centred at vertex k
    and removes its edges to 0, 1, ...
    """
    _check_order(n)
    if not 0 <= e <= comb(n, 2):
        raise GraphError(f"edge count {e} outside 0..{comb(n, 2)}")
    if e == 0:
        return Graph.empty(n)
    k = 1
    while comb(k + 1, 2) < e:
        k += 1
    removed = comb(k + 1, 2) - e
    edges = [(a, b) for a in range(k + 1) for b in range(a + 1, k + 1)]
    edges = [(a, b) for a, b in edges if not (b == k and a < removed)]
    return Graph.from_edges(n, edges)


def bipartite_circulant(m: int, d: int) -> Graph:
    """B_{m,d}: u_i = i and w_j = m + j are adjacent iff (i + j) mod m < d."""
    if not 0 <= d <= m:
        raise GraphError("need 0 <= d <= m")
    _check_order(2 * m)
    return Graph.from_edges(2 * m, [(i, m + j) for i in range(m) for j in range(m) if (i + j) % m < d])


def circulant_r(m: int, k: int) -> Graph:
    """R_{m,k}: residues mod 2m+1, adjacent iff the difference lies in [m+1-k, m+k]."""
    if m < 1 or k < 1 or not 3 * k < m + 2:
        raise GraphError("need positive m, k with 3k < m + 2")
    n = 2 * m + 1
    _check_order(n)
    diffs = set(range(m + 1 - k, m + k + 1))
    return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n) if (b - a) % n in diffs])


def regular_circulant(n: int, d: int) -> Graph:
    """A d-regular circulant on n vertices: offsets 1..d//2, plus n/2 when d is odd."""
    _check_order(n)
    if not 0 <= d < max(n, 1) or (d % 2 and n % 2):
        raise GraphError(f"no {d}-regular circulant on {n} vertices")
    offsets = set(range(1, d // 2 + 1))
    if d % 2:
        offsets.add(n // 2)
    return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n)
                                if min((b - a) % n, (a - b) % n) in offsets])


def _h15_6k1(k: int) -> Graph:
    m = 3 * k
    a = k // 2
    # u_i = i, w_j = m + j, extra vertex 2m
    allowed = set(range(0, k - 1)) | {k} | set(range(2 * k, 3 * k))
    edges = [(i, m + j) for i in range(m) for j in range(m) if (i + j) % m in allowed]
    # the sums k-1 are missing from the pattern; use them for the extra edges
    edges += [(i, m + (k - 1 - i)) for i in range(a)]
    edges += [(2 * m, m + j) for j in range(k, 3 * k)]
    return Graph.from_edges(2 * m + 1, edges)


def _h15_6k4(k: int) -> Graph:
    a = -(-(3 * k + 2) // 2)
    b = 3 * k + 2 - a
    # U0, U1, W0, W1 occupy consecutive blocks
    u0 = list(range(0, a))
    u1 = list(range(a, a + b))
    w0 = list(range(a + b, a + 2 * b))
    w1 = list(range(a + 2 * b, 2 * a + 2 * b))
    edges = [(x, y) for x in u0 for y in u1] + [(x, y) for x in w0 for y in w1]
    edges += [(u0[i], w1[j]) for i in range(a) for j in range(a) if (i + j) % a < a - k]
    edges += [(u1[i], w0[j]) for i in range(b) for j in range(b) if (i + j) % b < 2 * k + 1 - a]
    return Graph.from_edges(2 * (a + b), edges)


def h15_special(n: int) -> Graph:
    """The constructions used for n = 6k+1 and n = 6k+4 (triangle-free, nearly regular)."""
    _check_order(n)
    if n % 6 == 1 and n >= 7:
        return _h15_6k1((n - 1) // 6)
    if n % 6 == 4 and n >= 10:
        return _h15_6k4((n - 4) // 6)
    raise GraphError("h15_special needs n = 6k+1 or 6k+4 with k >= 1")


def h15_special_claimed_defect(n: int) -> int:
    """Total defect of h15_special(n) as stated for the two builds."""
    if n % 6 == 1:
        k = (n - 1) // 6
        a = k // 2
        return (2 * k + 2 * a) * 2 * k + 2 * (k - a) * (2 * k - a)
    if n % 6 == 4:
        k = (n - 4) // 6
        a = -(-(3 * k + 2) // 2)
        return 2 * a * (2 * k + 1) + 2 * (3 * k + 2 - a) * (2 * k + 1 - a)
    raise GraphError("need n = 6k+1 or 6k+4")


def h6_augmented(n: int, a: int) -> Graph:
    """K_{a, n-a}; a = 0 gives the empty graph."""
    if not 0 <= a <= n:
        raise GraphError("need 0 <= a <= n")
    return multipartite([a, n - a]) if a else Graph.empty(n)


@dataclass(frozen=True)
class H3Witness:
    graph: Graph
    regular_order: int
    degree: int
    degree_adjusted: bool


def h3_witness(n: int, beta: float, gamma: float) -> H3Witness:
    """Disjoint union of a floor(gamma n)-regular circulant on floor(beta n) vertices and a clique.

    If the degree and the order of the regular part are both odd, the degree
    is lowered by one (recorded in ``degree_adjusted``).
    """
    _check_order(n)
    if not 0 <= gamma <= beta <= 1:
        raise GraphError("need 0 <= gamma <= beta <= 1")
    b = floor(beta * n)
    d = min(floor(gamma * n), max(b - 1, 0))
    adjusted = False
    if d % 2 and b % 2:
        d -= 1
        adjusted = True
    regular = regular_circulant(b, d) if b else Graph.empty(0)
    return H3Witness(regular.disjoint_union(Graph.complete(n - b)), b, d, adjusted)


def g_nx(n: int, x: Sequence[Fraction | float]) -> Graph:
    """The complete partite graph G_{n,x} for a finite nonincreasing weight vector x.

    With x_0 = 1 - sum(x) = 0 the part sizes are the largest-remainder
    rounding of x_i n.  Otherwise parts with x_i n >= 2 get floor(x_i n)
    vertices and every remaining vertex is a singleton part.
    """
    _check_order(n)
    xs = [Fraction(v) if not isinstance(v, float) else v for v in x]
    if any(v < 0 for v in xs) or any(xs[i] < xs[i + 1] for i in range(len(xs) - 1)):
        raise GraphError("x must be nonnegative and nonincreasing")
    total = sum(xs)
    if total > 1 + (1e-12 if any(isinstance(v, float) for v in xs) else 0):
        raise GraphError("x must sum to at most 1")
    residual = 1 - total
    if residual <= (1e-12 if isinstance(residual, float) else 0):
        raw = [v * n for v in xs]
        sizes = [floor(r) for r in raw]
        order = sorted(range(len(xs)), key=lambda i: (-(raw[i] - sizes[i]), i))
        for i in order[: n - sum(sizes)]:
            sizes[i] += 1
    else:
        sizes = [floor(v * n) for v in xs if v * n >= 2]
        sizes += [1] * (n - sum(sizes))
    return multipartite([s for s in sizes if s])
