"""Blow-ups of a base graph: limit densities, optimisation on the simplex,
flip margins and the strictness polynomial.

A homomorphism f: H -> B sends red edges of H to edges of B and blue edges
to non-edges of B or to a single vertex (two clones in one part are never
adjacent).  The limit density of H in the blow-up B(x) is the sum over
homomorphisms of prod_i x_{f(i)}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence

import numpy as np

from .graphs import Graph, GraphError, MAX_VERTICES
from .poly import Polynomial
from .semi_inducibility import TwoColoredGraph

Number = Fraction | float


@dataclass(frozen=True)
class WeightedBase:
    base: Graph
    x: tuple[Number, ...]

    def __post_init__(self) -> None:
        x = tuple(self.x)
        object.__setattr__(self, "x", x)
        if len(x) != self.base.n:
            raise ValueError("one weight per base vertex is required")
        if any(v < 0 for v in x):
            raise ValueError("weights must be nonnegative")
        if all(isinstance(v, (int, Rational)) for v in x):
            if sum(Fraction(v) for v in x) != 1:
                raise ValueError("weights must sum to 1")
        elif abs(float(sum(float(v) for v in x)) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 within 1e-12")

    @classmethod
    def uniform(cls, base: Graph) -> "WeightedBase":
        return cls(base, tuple(Fraction(1, base.n) for _ in range(base.n)))


def _red_ok(base: Graph, a: int, b: int) -> bool:
    return a != b and base.has_edge(a, b)


def _blue_ok(base: Graph, a: int, b: int) -> bool:
    return a == b or not base.has_edge(a, b)


def homomorphisms(h: TwoColoredGraph, base: Graph) -> list[tuple[int, ...]]:
    """All maps f (f[i] = part of H-vertex i) that are homomorphisms H -> base."""
    out = []
    for f in itertools.product(range(base.n), repeat=h.kappa):
        if all(_red_ok(base, f[u], f[w]) for u, w in h.red) and all(
            _blue_ok(base, f[u], f[w]) for u, w in h.blue
        ):
            out.append(f)
    return out


@lru_cache(maxsize=None)
def density_polynomial(h: TwoColoredGraph, base: Graph) -> Polynomial:
    terms: dict[tuple[int, ...], Fraction] = {}
    for f in homomorphisms(h, base):
        e = [0] * base.n
        for v in f:
            e[v] += 1
        key = tuple(e)
        terms[key] = terms.get(key, Fraction(0)) + 1
    return Polynomial(base.n, terms)


def blowup_density(h: TwoColoredGraph, wb: WeightedBase) -> Number:
    """Limit density of H in the blow-up B(x); exact when x is rational."""
    return density_polynomial(h, wb.base)(wb.x)


def blowup_graph(base: Graph, sizes: Sequence[int]) -> Graph:
    """Replace base vertex i by an independent set of ``sizes[i]`` clones (parts in order)."""
    if len(sizes) != base.n:
        raise GraphError("one part size per base vertex is required")
    if any(s < 0 for s in sizes):
        raise GraphError("part sizes must be nonnegative")
    total = sum(sizes)
    if total > MAX_VERTICES:
        raise GraphError(f"blow-up would have {total} > {MAX_VERTICES} vertices")
    part_of = [i for i, s in enumerate(sizes) for _ in range(s)]
    edges = [(a, b) for a in range(total) for b in range(a + 1, total) if base.has_edge(part_of[a], part_of[b])]
    return Graph.from_edges(total, edges)


def round_sizes(x: Sequence[float], n: int) -> list[int]:
    """Largest-remainder rounding of x*n to integers summing to n."""
    raw = [float(v) * n for v in x]
    sizes = [int(np.floor(r)) for r in raw]
    order = sorted(range(len(x)), key=lambda i: (-(raw[i] - sizes[i]), i))
    for i in order[: n - sum(sizes)]:
        sizes[i] += 1
    return sizes


# optimisation -------------------------------------------------------------------

def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = 1}."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def kkt_residual(poly: Polynomial, x: np.ndarray) -> float:
    return float(np.linalg.norm(x - project_simplex(x + poly.gradient(x))))


def simplex_grid(m: int, steps: int) -> np.ndarray:
    """All points of the simplex with coordinates in (1/steps)Z."""
    pts = []
    for bars in itertools.combinations(range(steps + m - 1), m - 1):
        prev = -1
        comp = []
        for b in bars:
            comp.append(b - prev - 1)
            prev = b
        comp.append(steps + m - 2 - prev)
        pts.append(comp)
    return np.array(pts, dtype=float) / steps


def _grid_local_maxima(points: np.ndarray, values: np.ndarray, steps: int) -> list[int]:
    """Indices of grid points no worse than any neighbour (move 1/steps between two coordinates)."""
    keys = np.rint(points * steps).astype(np.int64)
    index = {tuple(k): i for i, k in enumerate(keys)}
    m = points.shape[1]
    out = []
    for i, k in enumerate(keys):
        best = True
        for a in range(m):
            if k[a] == 0:
                continue
            for b in range(m):
                if a == b:
                    continue
                nb = list(k)
                nb[a] -= 1
                nb[b] += 1
                if values[index[tuple(nb)]] > values[i] + 1e-15:
                    best = False
                    break
            if not best:
                break
        if best:
            out.append(i)
    return out


def _ascend(poly: Polynomial, x: np.ndarray, tol: float, max_iter: int = 5000) -> np.ndarray:
    step = 1.0
    fx = poly(x)
    for _ in range(max_iter):
        g = poly.gradient(x)
        if np.linalg.norm(x - project_simplex(x + g)) < tol:
            break
        while True:
            cand = project_simplex(x + step * g)
            fc = poly(cand)
            d = cand - x
            if fc >= fx + 1e-4 / step * float(d @ d) or step < 1e-14:
                break
            step *= 0.5
        if fc < fx:
            break
        x, fx = cand, fc
        step = min(step * 2.0, 1e3)
    return x


def _newton_polish(poly: Polynomial, x: np.ndarray, iters: int = 30) -> np.ndarray:
    """Newton's method on the KKT system restricted to the support of x."""
    support = np.flatnonzero(x > 1e-9)
    if len(support) <= 1:
        y = np.zeros_like(x)
        y[support] = 1.0
        return y if poly(y) >= poly(x) else x
    best, best_res = x, kkt_residual(poly, x)
    y = np.zeros_like(x)
    y[support] = x[support] / x[support].sum()
    s = len(support)
    for _ in range(iters):
        g = poly.gradient(y)[support]
        hmat = poly.hessian(y)[np.ix_(support, support)]
        mu = g.mean()
        kkt = np.zeros((s + 1, s + 1))
        kkt[:s, :s] = hmat
        kkt[:s, s] = -1.0
        kkt[s, :s] = 1.0
        rhs = -np.concatenate([g - mu, [y[support].sum() - 1.0]])
        try:
            delta = np.linalg.solve(kkt, rhs)
        except np.linalg.LinAlgError:
            break
        z = y.copy()
        z[support] += delta[:s]
        if (z[support] <= 0).any():
            break
        y = z
        res = kkt_residual(poly, y)
        if res < best_res and poly(y) >= poly(best) - 1e-14:
            best, best_res = y.copy(), res
        if np.abs(delta[:s]).max() < 1e-16:
            break
    return best


@dataclass(frozen=True)
class OptimizeResult:
    x: tuple[float, ...]
    value: float
    kkt_residual: float
    starts: int
    converged: bool
    grid_best: float = field(default=0.0)

    def to_json(self) -> dict:
        return {
            "x*": [repr(v) for v in self.x],
            "value": repr(self.value),
            "kkt_residual": self.kkt_residual,
            "starts": self.starts,
            "converged": self.converged,
        }


def optimize_polynomial(
    poly: Polynomial,
    pitch: float = 0.05,
    tol: float = 1e-12,
    max_starts: int = 64,
) -> OptimizeResult:
    """Multi-start projected gradient ascent of ``poly`` over the simplex.

    Starts are the discrete local maxima of a simplex grid of the given
    pitch (best first, capped at ``max_starts``) plus the grid maximum, so
    the result is never worse than the best grid point.
    """
    m = poly.nvars
    steps = max(1, round(1 / pitch))
    grid = simplex_grid(m, steps)
    values = poly.evaluate_many(grid)
    if len(grid) <= 60000:
        cands = _grid_local_maxima(grid, values, steps)
    else:
        cands = list(np.argsort(-values, kind="stable")[:max_starts])
    cands.sort(key=lambda i: (-values[i], tuple(grid[i])))
    cands = cands[:max_starts]
    results = []
    for i in cands:
        x = _ascend(poly, grid[i].copy(), tol)
        x = _newton_polish(poly, x)
        results.append((float(poly(x)), x))
    best_val = max(v for v, _ in results)
    # ties within rounding are broken by the lexicographically smallest x
    tied = [x for v, x in results if round(v, 11) == round(best_val, 11)]
    x = min(tied, key=lambda t: tuple(np.round(t, 9)))
    res = kkt_residual(poly, x)
    return OptimizeResult(tuple(float(v) for v in x), float(poly(x)), res, len(cands), res < max(tol, 1e-12) * 10,
                          float(values.max()))


def optimize_on_base(h: TwoColoredGraph, base: Graph, tol: float = 1e-12, pitch: float = 0.05) -> OptimizeResult:
    if base.n > 8:
        raise GraphError("bases with more than 8 vertices are not supported")
    return optimize_polynomial(density_polynomial(h, base), pitch=pitch, tol=tol)


# flip-averseness ----------------------------------------------------------------

def flip_averse_margin(h: TwoColoredGraph, base: Graph, x: Sequence[Number], u: int, w: int) -> Number:
    """Limit of n^2 (lambda(G) - lambda(G + flip)) for a pair of blow-up vertices in parts u, w.

    Summed over ordered pairs (i, j) of distinct H-vertices sent to the two
    flipped vertices; all other H-pairs see the adjacency of B while the pair
    (i, j) sees B before and after flipping.  u == w means both vertices lie
    in the same part, which are non-adjacent before the flip.
    """
    colour = {}
    for e in h.red:
        colour[e] = "red"
    for e in h.blue:
        colour[e] = "blue"
    before = u != w and base.has_edge(u, w)
    after = not before
    total: Number = Fraction(0) if all(isinstance(v, (int, Rational)) for v in x) else 0.0
    for i, j in itertools.permutations(range(h.kappa), 2):
        c = colour.get((min(i, j), max(i, j)))
        if c is None:
            continue
        sign = int(before == (c == "red")) - int(after == (c == "red"))
        if sign == 0:
            continue
        rest = [v for v in range(h.kappa) if v not in (i, j)]
        for images in itertools.product(range(base.n), repeat=len(rest)):
            f = {i: u, j: w, **dict(zip(rest, images))}
            ok = True
            for (a, b), col in colour.items():
                if {a, b} == {i, j}:
                    continue
                fa, fb = f[a], f[b]
                if col == "red" and not _red_ok(base, fa, fb):
                    ok = False
                    break
                if col == "blue" and not _blue_ok(base, fa, fb):
                    ok = False
                    break
            if ok:
                term = 1
                for v in rest:
                    term = term * x[f[v]]
                total = total + sign * term
    return total


def flip_margins(h: TwoColoredGraph, base: Graph, x: Sequence[Number]) -> list[tuple[int, int, Number]]:
    return [(u, w, flip_averse_margin(h, base, x, u, w)) for u in range(base.n) for w in range(u, base.n)]


# strictness -------------------------------------------------------------------------

@dataclass(frozen=True)
class StrictnessInstance:
    """Base B, weights x and the auxiliary graphs B' and B'' of the strictness test.

    B' blows each base vertex i up into the part {i, i+m}; B'' adds vertex 2m
    whose neighbourhood is exactly [m].
    """

    h: TwoColoredGraph
    base: Graph
    x: tuple[Number, ...]
    b_prime: Graph = field(init=False)
    b_double: Graph = field(init=False)

    def __post_init__(self) -> None:
        m = self.base.n
        object.__setattr__(self, "x", tuple(self.x))
        if len(self.x) != m:
            raise ValueError("one weight per base vertex is required")
        bp = blowup_graph(self.base, [2] * m)
        # blowup_graph numbers the clones 2i, 2i+1; rename so that part i is {i, i+m}
        bp = bp.relabel([i // 2 + (i % 2) * m for i in range(2 * m)])
        object.__setattr__(self, "b_prime", bp)
        edges = bp.edges() + [(i, 2 * m) for i in range(m)]
        object.__setattr__(self, "b_double", Graph.from_edges(2 * m + 1, edges))

    @property
    def m(self) -> int:
        return self.base.n

    def target(self) -> Number:
        """kappa * lambda_H(B(x)), the value attained at clones of base vertices."""
        return self.h.kappa * density_polynomial(self.h, self.base)(self.x)

    def polynomial(self) -> Polynomial:
        """p(x, .) as a polynomial in y_0..y_{m-1}."""
        m = self.m
        special = 2 * m
        one = Polynomial.constant(m, Fraction(1))
        factors = []
        for i in range(m):
            yi = Polynomial.variable(m, i)
            factors.append(yi * self.x[i])
        for i in range(m):
            factors.append((one - Polynomial.variable(m, i)) * self.x[i])
        total = Polynomial(m, {})
        for f in homomorphisms(self.h, self.b_double):
            if sum(1 for v in f if v == special) != 1:
                continue
            term = one
            for v in f:
                if v != special:
                    term = term * factors[v]
            total = total + term
        return total

    def indicator_rows(self) -> list[tuple[int, ...]]:
        return [tuple(int(self.base.has_edge(i, j)) for j in range(self.m)) for i in range(self.m)]


_POLY_CACHE: dict = {}


def _instance_poly(inst: StrictnessInstance) -> Polynomial:
    key = (inst.h, inst.base, inst.x)
    if key not in _POLY_CACHE:
        _POLY_CACHE[key] = inst.polynomial()
    return _POLY_CACHE[key]


def strictness_eval(inst: StrictnessInstance, y: Sequence[Number]) -> Number:
    if len(y) != inst.m:
        raise ValueError(f"expected {inst.m} coordinates")
    if any(v < 0 or v > 1 for v in y):
        raise ValueError("y must lie in the unit box")
    return _instance_poly(inst)(y)


@dataclass(frozen=True)
class StrictnessReport:
    target: float
    maximum: float
    maximizers: tuple[tuple[tuple[float, ...], float, float], ...]  # (y, value, distance to indicator rows)
    grid_pitch: float
    verdict: str

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "maximum": self.maximum,
            "grid_pitch": self.grid_pitch,
            "maximizers": [{"y": list(y), "value": v, "distance": d} for y, v, d in self.maximizers],
            "verdict": self.verdict,
            "evidence": "numeric",
        }


def _box_ascend(poly: Polynomial, y: np.ndarray, max_iter: int = 3000) -> np.ndarray:
    step = 1.0
    fy = poly(y)
    for _ in range(max_iter):
        g = poly.gradient(y)
        if np.linalg.norm(y - np.clip(y + g, 0, 1)) < 1e-13:
            break
        while True:
            cand = np.clip(y + step * g, 0.0, 1.0)
            fc = poly(cand)
            d = cand - y
            if fc >= fy + 1e-4 / step * float(d @ d) or step < 1e-14:
                break
            step *= 0.5
        if fc <= fy:
            break
        y, fy = cand, fc
        step = min(step * 2.0, 1e3)
    return y


def _grid_maxima_box(values: np.ndarray) -> np.ndarray:
    """Boolean mask of discrete local maxima on a box grid (axis neighbours)."""
    keep = np.ones(values.shape, dtype=bool)
    for axis in range(values.ndim):
        pad = [(0, 0)] * values.ndim
        pad[axis] = (1, 1)
        padded = np.pad(values, pad, constant_values=-np.inf)
        lo = [slice(None)] * values.ndim
        hi = [slice(None)] * values.ndim
        lo[axis] = slice(0, -2)
        hi[axis] = slice(2, None)
        keep &= values >= padded[tuple(lo)] - 1e-15
        keep &= values >= padded[tuple(hi)] - 1e-15
    return keep


def strictness_scan(inst: StrictnessInstance, resolution: int = 64, tol: float = 1e-6) -> StrictnessReport:
    """Grid search plus box-constrained ascent for the maximisers of p(x, .).

    The grid has ``resolution`` steps per axis, reduced so that the total
    number of grid points stays below two million.
    """
    m = inst.m
    if m > 5:
        raise ValueError("strictness scans support bases with at most 5 vertices")
    poly = _instance_poly(inst)
    steps = resolution
    while (steps + 1) ** m > 2_000_000:
        steps //= 2
    axis = np.linspace(0.0, 1.0, steps + 1)
    mesh = np.stack(np.meshgrid(*([axis] * m), indexing="ij"), axis=-1).reshape(-1, m)
    values = poly.evaluate_many(mesh)
    grid_values = values.reshape((steps + 1,) * m)
    starts = np.flatnonzero(_grid_maxima_box(grid_values).ravel())
    found: list[tuple[np.ndarray, float]] = []
    for idx in starts[np.argsort(-values[starts], kind="stable")][:256]:
        y = _box_ascend(poly, mesh[idx].copy())
        val = float(poly(y))
        if not any(np.abs(y - z).max() < 1e-5 for z, _ in found):
            found.append((y, val))
    target = float(inst.target())
    maximum = max(v for _, v in found)
    rows = [np.array(r, dtype=float) for r in inst.indicator_rows()]
    near = []
    for y, val in sorted(found, key=lambda t: (-t[1], tuple(t[0]))):
        if val >= max(maximum, target) - tol:
            dist = min(float(np.abs(y - r).max()) for r in rows)
            snapped = tuple(float(round(v, 9)) + 0.0 for v in y)
            near.append((snapped, val, dist))
    consistent = abs(maximum - target) <= tol and all(d <= tol for _, _, d in near)
    verdict = "strict-consistent" if consistent else "not strict"
    return StrictnessReport(target, maximum, tuple(near), 1.0 / steps, verdict)
