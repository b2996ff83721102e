"""Closed-form extremal values, exact counting identities and the H15 defect calculus.

Identities are evaluated along two separate paths: the embedding count
comes from ``count_embeddings`` while the right-hand sides use only
degrees, edge counts and per-edge triangle counts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .constructions import h15_special, pi_s, quasi_clique, turan
from .graphs import Graph, GraphError, canonical_graph6, decode_graph6, enumerate_graph6
from .poly import Polynomial, univariate
from .semi_inducibility import brute_force_max, builtin_h, count_embeddings


@dataclass(frozen=True)
class Prediction:
    family: str
    n: int
    lower: int
    upper: int
    description: str
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None

    def to_json(self) -> dict:
        out = {"family": self.family, "n": self.n, "description": self.description}
        if self.exact:
            out["value"] = self.lower
        else:
            out["lower"], out["upper"] = self.lower, self.upper
        for k, v in self.details.items():
            out[k] = f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else v
        return out


def falling(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


# H0 ------------------------------------------------------------------------------

def h0_discriminant(n: int) -> int:
    return 2 * n * n - 10 * n + 13


def h0_k0(n: int) -> int:
    """floor((3 + sqrt(2n^2 - 10n + 13)) / 2), computed with integer square roots."""
    return (3 + isqrt(h0_discriminant(n))) // 2


def _h0_formula(g: Graph) -> int:
    n, e = g.n, g.num_edges()
    return 4 * e * (comb(n, 2) - e) - 4 * sum(d * (n - 1 - d) for d in g.degrees())


def _predict_h0(n: int) -> Prediction:
    k0 = h0_k0(n)
    qc = quasi_clique(n, comb(k0 + 1, 2))
    value = _h0_formula(qc)
    d = h0_discriminant(n)
    square = isqrt(d) ** 2 == d
    desc = f"QC({n},{comb(k0 + 1, 2)}) and its complement"
    if square:
        desc += f"; square case, at least {2 * (k0 + 1)} extremal graphs"
    return Prediction("H0", n, value, value, desc, {"k0": k0, "square": square})


# H1 ------------------------------------------------------------------------------

def h1_defect(n: int, d: int) -> int:
    return pi_s(3, 2 * n - 3) - 2 * d * (n - 1 - d) * (n - 2 - d)


def _h1_case_defect(n: int) -> int:
    """Minimum of the summed vertex defects over all degree sequences, by residue of n mod 6."""
    k, r = divmod(n, 6)
    if r in (1, 2, 4):
        return 0
    if r == 0:
        return 6 * k * (4 * k - 1)
    if r == 3:
        return (6 * k + 3) * (4 * k + 1)
    return 8 * k + 4


def _predict_h1(n: int) -> Prediction:
    # Lambda = (n pi_3(2n-3) - sum of vertex defects) / 2, so the case correction is halved too
    value = (n * pi_s(3, 2 * n - 3) - _h1_case_defect(n)) // 2
    k, r = divmod(n, 6)
    if r in (1, 2, 4):
        desc = f"{n // 3}-regular graphs"
    elif r == 0:
        desc = f"all degrees in {{{2 * k - 1},{2 * k}}}"
    elif r == 3:
        desc = f"all degrees in {{{2 * k},{2 * k + 1}}}"
    else:
        desc = f"{n - 1} vertices of degree {2 * k + 1}, one of degree {2 * k + 2}"
    return Prediction("H1", n, value, value, desc, {"printed_formula_value": h1_printed_value(n)})


def h1_printed_value(n: int) -> Fraction:
    """n pi_3(2n-3)/2 minus the unhalved case correction, as it is usually quoted."""
    return Fraction(n * pi_s(3, 2 * n - 3), 2) - _h1_case_defect(n)


def h1_extremal_predicate(n: int, g: Graph) -> bool:
    degs = sorted(g.degrees())
    k = n // 6
    r = n % 6
    if r in (1, 2, 4):
        return set(degs) == {n // 3}
    if r == 0:
        return set(degs) <= {2 * k - 1, 2 * k}
    if r == 3:
        return set(degs) <= {2 * k, 2 * k + 1}
    return degs == [2 * k + 1] * (n - 1) + [2 * k + 2]


# H15 -----------------------------------------------------------------------------

@dataclass(frozen=True)
class DefectReport:
    n: int
    vertex_defects: dict[int, int]
    pair_defects: dict[tuple[int, int], int]

    @property
    def total(self) -> int:
        return sum(self.vertex_defects.values()) + sum(self.pair_defects.values())

    def to_json(self) -> dict:
        return {
            "vertex_defects": {str(u): d for u, d in self.vertex_defects.items()},
            "pair_defects": {f"{a},{b}": d for (a, b), d in self.pair_defects.items()},
            "total": self.total,
        }


def h15_vertex_defect(n: int, m: int) -> int:
    return pi_s(3, n - 1) - m * pi_s(2, n - 1 - m)


def h15_defect(g: Graph) -> DefectReport:
    """Vertex defects D(deg u) and pair defects D(u0, u1) over ordered adjacent pairs."""
    n = g.n
    if n < 4:
        raise GraphError("defects are defined for graphs with at least 4 vertices")
    degs = g.degrees()
    vertex = {u: h15_vertex_defect(n, degs[u]) for u in range(n)}
    pair = {}
    for u0 in range(n):
        for u1 in g.neighbours(u0):
            t = (g.rows[u0] & g.rows[u1]).bit_count()
            d0, d1 = degs[u0], degs[u1]
            pair[(u0, u1)] = pi_s(2, n - 1 - d1) - (d0 - 1 - t) * (n - d0 - d1 + t)
    return DefectReport(n, vertex, pair)


def _predict_h15(n: int) -> Prediction:
    top = n * pi_s(3, n - 1)
    r = n % 6
    if r in (0, 2, 5):
        return Prediction("H15", n, top, top, f"{-(-n // 3)}-regular triangle-free graphs")
    if r == 3:
        k = n // 6
        return Prediction("H15", n, top - 2 * k, top - 2 * k,
                          f"triangle-free, {n - 1} vertices of degree {2 * k + 1}, one of degree {2 * k} or {2 * k + 2}")
    if n >= 7:
        lower = top - h15_defect(h15_special(n)).total
        return Prediction("H15", n, lower, top, "construction lower bound, degree-product upper bound")
    # n = 4 lies below the special builds; only the upper bound and an easy witness apply
    lower = top - h15_defect(quasi_clique(n, 0)).total
    return Prediction("H15", n, lower, top, "empty-graph lower bound, degree-product upper bound")


def h15_extremal_predicate(n: int, g: Graph) -> bool:
    if g.triangles():
        return False
    degs = sorted(g.degrees())
    r = n % 6
    if r in (0, 2, 5):
        return set(degs) == {-(-n // 3)}
    if r == 3:
        k = n // 6
        rest = [d for d in degs if d != 2 * k + 1]
        return len(rest) == 1 and rest[0] in (2 * k, 2 * k + 2)
    raise ValueError("no characterisation for n = 1, 4 mod 6")


# H4 / H6 ---------------------------------------------------------------------------

def _predict_h4_upper(n: int) -> Prediction:
    value = n * pi_s(3, 2 * n - 2) // 2
    lower = count_embeddings(builtin_h(4), turan(3, n)) if n <= 32 else 0
    return Prediction("H4_upper", n, lower, value, "degree-product upper bound, Turan lower bound")


def h6_p_n(n: int, a: int) -> int:
    return falling(a, 3) * (n - a) + a * falling(n - a, 3)


def h6_profile(n: int) -> tuple[int, int]:
    """Largest integer a maximising P_n(a) and the maximum value."""
    if n < 4:
        raise GraphError("need n >= 4")
    best = max(range(n + 1), key=lambda a: (h6_p_n(n, a), a))
    return best, h6_p_n(n, best)


def _predict_h6(n: int) -> Prediction:
    a, value = h6_profile(n)
    return Prediction("H6_bipartite", n, value, value, f"K_{{{a},{n - a}}}", {"a": a})


def h6_q(x0: Fraction | float, x1: Fraction | float) -> Fraction | float:
    return x0 * x1 * (1 - 2 * x0 * x1 + (1 - x0 - x1) ** 2)


def h6_p(x: Fraction | float, y: Fraction | float) -> Fraction | float:
    return (x ** 3 + x ** 2 * y + x * y ** 2 + y ** 3) / 8 - x * y / 2 - x / 8 - y / 8 + Fraction(1, 2)


def h6_p_maximizers(resolution: int = 256, tol: float = 1e-9) -> list[tuple[float, float]]:
    """Grid points of [0,1]^2 where p is within tol of its grid maximum."""
    t = np.linspace(0.0, 1.0, resolution + 1)
    xx, yy = np.meshgrid(t, t, indexing="ij")
    vals = (xx ** 3 + xx ** 2 * yy + xx * yy ** 2 + yy ** 3) / 8 - xx * yy / 2 - xx / 8 - yy / 8 + 0.5
    top = vals.max()
    idx = np.argwhere(vals >= top - tol)
    return sorted((float(t[i]), float(t[j])) for i, j in idx)


# predictions -------------------------------------------------------------------------

FAMILIES = ("H0", "H1", "H15", "H4_upper", "H6_bipartite")
FAMILY_PATTERN = {"H0": 0, "H1": 1, "H15": 15, "H4_upper": 4, "H6_bipartite": 6}


def predicted_value(family: str, n: int) -> Prediction:
    if n < 4:
        raise GraphError("predictions need n >= 4")
    table = {
        "H0": _predict_h0,
        "H1": _predict_h1,
        "H15": _predict_h15,
        "H4_upper": _predict_h4_upper,
        "H6_bipartite": _predict_h6,
    }
    if family not in table:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    return table[family](n)


# identities ----------------------------------------------------------------------------

IDENTITIES = ("H0_degsq", "H1_sum", "H15_defect")


def identity_rhs(family: str, g: Graph) -> int:
    n = g.n
    if family == "H0_degsq":
        return _h0_formula(g)
    if family == "H1_sum":
        twice = sum(pi_s(3, 2 * n - 3) - h1_defect(n, d) for d in g.degrees())
        return twice // 2
    if family == "H15_defect":
        return n * pi_s(3, n - 1) - h15_defect(g).total
    raise ValueError(f"unknown identity {family!r}; choose from {', '.join(IDENTITIES)}")


def identity_residual(family: str, g: Graph) -> int:
    """LHS - RHS of the exact counting identity; LHS counts embeddings directly."""
    if g.n < 4:
        raise GraphError("identities need at least 4 vertices")
    pattern = {"H0_degsq": 0, "H1_sum": 1, "H15_defect": 15}
    if family not in pattern:
        raise ValueError(f"unknown identity {family!r}; choose from {', '.join(IDENTITIES)}")
    return count_embeddings(builtin_h(pattern[family]), g) - identity_rhs(family, g)


def random_graph(n: int, seed: int, index: int, p: float | None = None) -> Graph:
    """Reproducible G(n, p) sample keyed by (seed, index); p itself is drawn when not given."""
    rng = np.random.default_rng((seed, index))
    if p is None:
        p = float(rng.random())
    upper = rng.random((n, n)) < p
    return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n) if upper[a, b]])


# H0 square branch -------------------------------------------------------------------------

@dataclass(frozen=True)
class SquareBranchReport:
    n: int
    discriminant: int
    square: bool
    k0: int
    family_size: int
    verified: bool | None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def h0_square_branch(n: int, check_brute: bool = True) -> SquareBranchReport:
    """Detect the square case; for n <= 9 check the quasi-clique family against exhaustive search."""
    if n < 5:
        raise GraphError("the square branch concerns n >= 5")
    d = h0_discriminant(n)
    square = isqrt(d) ** 2 == d
    k0 = h0_k0(n)
    verified = None
    if square and check_brute and n <= 9:
        res = brute_force_max(builtin_h(0), n)
        keys = set(res.extremal)
        family = [quasi_clique(n, comb(k0, 2) + ell) for ell in range(k0 + 1)]
        verified = all(canonical_graph6(g) in keys and canonical_graph6(g.complement()) in keys for g in family)
        verified = verified and len(keys) >= 2 * (k0 + 1)
    return SquareBranchReport(n, d, square, k0, 2 * (k0 + 1) if square else 2, verified)


def first_square_case(lo: int = 5, hi: int = 10 ** 4) -> int | None:
    for n in range(lo, hi + 1):
        d = h0_discriminant(n)
        if isqrt(d) ** 2 == d:
            return n
    return None


# H3 profile ------------------------------------------------------------------------------

H3_QUINTIC = univariate([Fraction(1), Fraction(-10, 3), Fraction(2521, 576), Fraction(-407, 144),
                         Fraction(43, 48), Fraction(-1, 9)])
H3_QUARTIC = univariate([Fraction(1), Fraction(-37, 16), Fraction(57, 32), Fraction(-9, 16), Fraction(1, 16)])


def h3_polynomial() -> Polynomial:
    """p(beta, gamma) for the clique plus regular graph construction."""
    b = Polynomial.variable(2, 0)
    g = Polynomial.variable(2, 1)
    one = Polynomial.constant(2, Fraction(1))
    return (b * (one - b) * (one - g) * (one - b)
            + (one - b) * b * g * b
            + b * (b - g) * (one - g) * g)


@dataclass(frozen=True)
class H3Profile:
    """Optimum of p(beta, g); ``gamma`` is the degree of the regular part
    relative to its own order (g / beta), the quantity whose value and
    quartic are quoted, while ``gamma_abs`` = g is relative to n."""

    beta: float
    gamma: float
    gamma_abs: float
    value: float
    quintic_residual: float
    quartic_residual: float
    converged: bool

    def to_json(self) -> dict:
        return {k: (repr(v) if isinstance(v, float) else v) for k, v in self.__dict__.items()}


def h3_profile(tol: float = 1e-12) -> H3Profile:
    """Maximise p over 0 <= gamma <= beta <= 1 (multi-start Nelder-Mead, then Newton)."""
    p = h3_polynomial()

    def neg(v: np.ndarray) -> float:
        b, g = v
        if not 0 <= g <= b <= 1:
            return 1.0
        return -float(p((b, g)))

    best = None
    for b0 in (0.2, 0.4, 0.6, 0.8):
        for frac in (0.25, 0.5, 0.75):
            res = minimize(neg, np.array([b0, b0 * frac]), method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
            if best is None or res.fun < best.fun:
                best = res
    v = np.array(best.x, dtype=float)
    for _ in range(20):
        grad = p.gradient(v)
        if np.linalg.norm(grad) < tol:
            break
        v = v - np.linalg.solve(p.hessian(v), grad)
    beta, g = float(v[0]), float(v[1])
    converged = bool(np.linalg.norm(p.gradient(v)) < 1e-10 and 0 <= g <= beta <= 1)
    gamma = g / beta
    return H3Profile(beta, gamma, g, float(p((beta, g))), abs(float(H3_QUINTIC((beta,)))),
                     abs(float(H3_QUARTIC((gamma,)))), converged)


def extremal_matches(family: str, n: int, extremal: Sequence[str]) -> bool:
    """Compare an exhaustive extremal set with the stated characterisation."""
    graphs = [decode_graph6(s) for s in extremal]
    if family == "H0":
        k0 = h0_k0(n)
        qc = quasi_clique(n, comb(k0 + 1, 2))
        expected = {canonical_graph6(qc), canonical_graph6(qc.complement())}
        d = h0_discriminant(n)
        if isqrt(d) ** 2 == d:
            return expected <= set(extremal) and len(extremal) >= 2 * (k0 + 1)
        return expected == set(extremal)
    if family == "H1":
        pred = {s for s in enumerate_graph6(n) if h1_extremal_predicate(n, decode_graph6(s))}
        return pred == set(extremal)
    if family == "H15":
        if n % 6 in (1, 4):
            return all(g.n == n for g in graphs)
        pred = {s for s in enumerate_graph6(n) if h15_extremal_predicate(n, decode_graph6(s))}
        return pred == set(extremal)
    raise ValueError(f"no characterisation for {family!r}")
