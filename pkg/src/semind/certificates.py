"""Exact verification of small flag-algebra certificates (N <= 5).

A certificate claims that for every graph F on N vertices

    u - lambda_gamma(F) - sum over blocks of a_F(block) = c_F >= 0,

where a_F(block) is the expansion of a rooted quadratic form with a PSD
matrix Q.  Densities of pairs of flags use one fixed convention: a uniform
random injection of the labels followed by a uniform random ordered split of
the remaining vertices.

Finite-graph evaluations (used for asymptotic sanity checks) work on dense
numpy adjacency matrices, so they are not bound by the 32-vertex cap of
:class:`~semind.graphs.Graph`.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, perm
from typing import Mapping, Sequence

import numpy as np

from .graphs import Graph, GraphError, canonical_form, canonical_graph6, co_cherry, density_vector, enumerate_graph6
from .semi_inducibility import GammaFunction, builtin_h, gamma_from_h, lambda_gamma

MAX_N = 5
THEORIES = ("all", "complete_partite")


class CertificateError(ValueError):
    """Malformed certificate data."""


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_q(text) -> Fraction:
    try:
        return Fraction(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise CertificateError(f"not a rational: {text!r}") from exc


# types and flags ----------------------------------------------------------------

@dataclass(frozen=True)
class FlagType:
    """A fully labelled graph; label i is vertex i."""

    sigma: Graph

    @property
    def t(self) -> int:
        return self.sigma.n


@dataclass(frozen=True)
class Flag:
    """A graph with an injective root map; ``graph.induced(roots)`` must equal sigma exactly."""

    ftype: FlagType
    graph: Graph
    roots: tuple[int, ...]

    def __post_init__(self) -> None:
        roots = tuple(self.roots)
        object.__setattr__(self, "roots", roots)
        if len(set(roots)) != len(roots) or any(not 0 <= r < self.graph.n for r in roots):
            raise GraphError("root map must be injective into the flag's vertices")
        if len(roots) != self.ftype.t:
            raise GraphError("root map must cover every label of the type")
        if self.graph.induced(roots).rows != self.ftype.sigma.rows:
            raise GraphError("rooted subgraph differs from the type")

    @property
    def k(self) -> int:
        return self.graph.n

    @property
    def key(self) -> str:
        return rooted_key(self.graph, self.roots)

    def to_json(self) -> dict:
        return {"graph6": self.graph.to_graph6(), "roots": list(self.roots)}


@lru_cache(maxsize=None)
def _rooted_key_cached(g: Graph, roots: tuple[int, ...]) -> str:
    return canonical_form(g, roots).graph6


def rooted_key(g: Graph, roots: Sequence[int]) -> str:
    """Invariant of a rooted graph under root-preserving isomorphism."""
    return _rooted_key_cached(g, tuple(roots))


def enumerate_flags(ftype: FlagType, k: int) -> list[Flag]:
    """All flags of type ``ftype`` on k vertices up to root-preserving isomorphism.

    Flags are returned in canonical form (roots at positions 0..t-1), sorted by key.
    """
    t = ftype.t
    if k < t:
        raise GraphError(f"flag order {k} is smaller than the type order {t}")
    if k > MAX_N:
        raise GraphError(f"flag order {k} exceeds {MAX_N}")
    free = [(a, b) for a in range(k) for b in range(a + 1, k) if b >= t]
    base = ftype.sigma.edges()
    seen: dict[str, Flag] = {}
    for mask in range(1 << len(free)):
        g = Graph.from_edges(k, base + [p for i, p in enumerate(free) if mask >> i & 1])
        ck = canonical_form(g, tuple(range(t)))
        if ck.graph6 not in seen:
            seen[ck.graph6] = Flag(ftype, ck.graph, tuple(range(t)))
    return [seen[key] for key in sorted(seen)]


def pair_density_coeff(f1: Flag, f2: Flag, big: Graph) -> Fraction:
    """Probability that a random labelling plus ordered split of ``big`` shows (f1, f2).

    The t labels go to a uniformly random injection theta; the remaining
    vertices are split uniformly into A of size k1 - t and B.  Success means
    theta induces sigma, big[theta + A] is f1 and big[theta + B] is f2 (as
    rooted graphs).
    """
    if f1.ftype.sigma.rows != f2.ftype.sigma.rows or f1.ftype.t != f2.ftype.t:
        raise GraphError("flags have different types")
    t = f1.ftype.t
    s1, s2 = f1.k - t, f2.k - t
    if big.n != t + s1 + s2:
        raise GraphError(f"need a graph on k1 + k2 - t = {t + s1 + s2} vertices, got {big.n}")
    return _pair_coeff(f1.key, f2.key, f1.ftype.sigma, s1, s2, big)


@lru_cache(maxsize=None)
def _pair_coeff(key1: str, key2: str, sigma: Graph, s1: int, s2: int, big: Graph) -> Fraction:
    t = sigma.n
    n = big.n
    hits = 0
    for theta in itertools.permutations(range(n), t):
        if big.induced(theta).rows != sigma.rows:
            continue
        rest = [v for v in range(n) if v not in theta]
        for a in itertools.combinations(rest, s1):
            if rooted_key(big.induced(theta + a), range(t)) != key1:
                continue
            b = tuple(v for v in rest if v not in a)
            if rooted_key(big.induced(theta + b), range(t)) == key2:
                hits += 1
    return Fraction(hits, perm(n, t) * comb(n - t, s1))


# blocks ------------------------------------------------------------------------

Matrix = tuple[tuple[Fraction, ...], ...]


def _as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class Block:
    ftype: FlagType
    flags: tuple[Flag, ...]
    Q: Matrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "flags", tuple(self.flags))
        object.__setattr__(self, "Q", _as_matrix(self.Q))
        d = len(self.flags)
        if len(self.Q) != d or any(len(row) != d for row in self.Q):
            raise CertificateError(f"Q must be {d}x{d} to match the flag basis")
        if len({f.k for f in self.flags}) > 1:
            raise CertificateError("all flags of a block must have the same order")
        if any(f.ftype.sigma.rows != self.ftype.sigma.rows for f in self.flags):
            raise CertificateError("flag type differs from the block type")

    @property
    def order(self) -> int:
        """Order of the graphs the block expands over: 2k - t."""
        if not self.flags:
            return self.ftype.t
        return 2 * self.flags[0].k - self.ftype.t

    def to_json(self) -> dict:
        return {
            "sigma": {"graph6": self.ftype.sigma.to_graph6(), "roots": list(range(self.ftype.t))},
            "flags": [f.to_json() for f in self.flags],
            "Q": [[_q(x) for x in row] for row in self.Q],
        }


def expand_block(block: Block, n_order: int | None = None) -> dict[str, Fraction]:
    """Coefficients a_F = sum_ij Q_ij c(f_i, f_j; F) over all classes F of order N.

    If N exceeds 2k - t the coefficients are lifted by averaging over
    induced subgraphs of order 2k - t.
    """
    base = block.order
    n_order = base if n_order is None else n_order
    if n_order < base:
        raise CertificateError(f"block needs graphs of order at least {base}")
    if n_order > MAX_N:
        raise CertificateError(f"order {n_order} exceeds {MAX_N}")
    coeffs: dict[str, Fraction] = {}
    for g6 in enumerate_graph6(base):
        big = Graph.from_graph6(g6)
        total = Fraction(0)
        for i, fi in enumerate(block.flags):
            for j, fj in enumerate(block.flags):
                if block.Q[i][j]:
                    total += block.Q[i][j] * pair_density_coeff(fi, fj, big)
        coeffs[g6] = total
    if n_order == base:
        return coeffs
    lifted = {}
    for g6 in enumerate_graph6(n_order):
        dens = density_vector(Graph.from_graph6(g6), base)
        lifted[g6] = sum((coeffs[k] * p for k, p in dens.items() if p), Fraction(0))
    return lifted


# PSD check ---------------------------------------------------------------------

@dataclass(frozen=True)
class PSDReport:
    psd: bool
    pivots: tuple[Fraction, ...]
    rank: int
    witness: tuple[Fraction, ...] | None = None

    def to_json(self) -> dict:
        return {
            "psd": self.psd,
            "rank": self.rank,
            "pivots": [_q(p) for p in self.pivots],
            "witness": None if self.witness is None else [_q(x) for x in self.witness],
        }


def _quad(q: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Fraction:
    d = len(v)
    return sum((v[i] * q[i][j] * v[j] for i in range(d) for j in range(d) if v[i] and v[j]), Fraction(0))


def check_psd(q: Sequence[Sequence]) -> PSDReport:
    """Exact LDL^T with symmetric (largest diagonal) pivoting.

    On failure the witness v satisfies v^T Q v < 0 exactly.
    """
    a = [list(row) for row in _as_matrix(q)]
    d = len(a)
    if any(len(row) != d for row in a):
        raise ValueError("matrix is not square")
    if any(a[i][j] != a[j][i] for i in range(d) for j in range(i)):
        raise ValueError("matrix is not symmetric")
    active = list(range(d))
    pivots: list[Fraction] = []
    history: list[tuple[int, Fraction, dict[int, Fraction]]] = []

    def lift(y: dict[int, Fraction]) -> tuple[Fraction, ...]:
        # back-substitute eliminated pivots so that x^T Q x equals the Schur form of y
        x = [Fraction(0)] * d
        for i, val in y.items():
            x[i] = val
        for p, piv, row in reversed(history):
            x[p] = -sum((row[j] * x[j] for j in row), Fraction(0)) / piv
        return tuple(x)

    while active:
        p = max(active, key=lambda i: (a[i][i], -i))
        piv = a[p][p]
        if piv < 0:
            return PSDReport(False, tuple(pivots + [piv]), len(pivots), lift({p: Fraction(1)}))
        if piv == 0:
            for i in active:
                for j in active:
                    if a[i][j] != 0:
                        sign = 1 if a[i][j] > 0 else -1
                        return PSDReport(False, tuple(pivots), len(pivots),
                                         lift({i: Fraction(1), j: Fraction(-sign)}))
            pivots.extend(Fraction(0) for _ in active)
            break
        active.remove(p)
        row = {j: a[p][j] for j in active if a[p][j]}
        for i in row:
            for j in row:
                a[i][j] -= row[i] * row[j] / piv
        history.append((p, piv, row))
        pivots.append(piv)
    rank = sum(1 for x in pivots if x)
    return PSDReport(True, tuple(pivots), rank)


# certificates ------------------------------------------------------------------

def theory_classes(n_order: int, theory: str) -> tuple[str, ...]:
    """Classes of order N admitted by the theory (complete partite: no induced co-cherry)."""
    if theory not in THEORIES:
        raise CertificateError(f"unknown theory {theory!r}; choose from {', '.join(THEORIES)}")
    classes = enumerate_graph6(n_order)
    if theory == "all":
        return classes
    key = canonical_graph6(co_cherry())
    return tuple(g6 for g6 in classes
                 if n_order < 3 or density_vector(Graph.from_graph6(g6), 3)[key] == 0)


@dataclass(frozen=True)
class Certificate:
    u: Fraction
    N: int
    theory: str
    gamma: GammaFunction
    blocks: tuple[Block, ...]
    slacks: Mapping[str, Fraction]
    h_index: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not 1 <= self.N <= MAX_N:
            raise CertificateError(f"N must lie in 1..{MAX_N}")
        if self.theory not in THEORIES:
            raise CertificateError(f"unknown theory {self.theory!r}")
        if self.gamma.kappa > self.N:
            raise CertificateError("gamma order exceeds N")
        for b in self.blocks:
            if b.order > self.N:
                raise CertificateError(f"block of order {b.order} does not fit N = {self.N}")
        expected = set(theory_classes(self.N, self.theory))
        given = set(self.slacks)
        if given != expected:
            missing = sorted(expected - given)
            extra = sorted(given - expected)
            raise CertificateError(f"slack keys do not match the classes (missing {missing}, unexpected {extra})")

    def with_u(self, u: Fraction) -> "Certificate":
        """Same certificate with the bound moved to u and every slack shifted by u - self.u."""
        u = Fraction(u)
        shift = u - self.u
        return Certificate(u, self.N, self.theory, self.gamma, self.blocks,
                           {k: v + shift for k, v in self.slacks.items()}, self.h_index)

    def to_json(self) -> dict:
        return {
            "u": _q(self.u),
            "N": self.N,
            "theory": self.theory,
            "h_index": self.h_index,
            "gamma": None if self.h_index is not None else {k: _q(v) for k, v in sorted(self.gamma.values.items())},
            "blocks": [b.to_json() for b in self.blocks],
            "slacks": {k: _q(v) for k, v in sorted(self.slacks.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, data: Mapping | str) -> "Certificate":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, Mapping):
            raise CertificateError("certificate must be a JSON object")
        for name in ("u", "N", "theory", "blocks", "slacks"):
            if name not in data:
                raise CertificateError(f"missing field {name!r}")
        theory = str(data["theory"]).replace("-", "_")
        h_index = data.get("h_index")
        raw_gamma = data.get("gamma")
        try:
            if raw_gamma is not None:
                vals = {k: _parse_q(v) for k, v in raw_gamma.items()}
                kappa = {Graph.from_graph6(k).n for k in vals}
                if len(kappa) != 1:
                    raise CertificateError("gamma keys must all have the same order")
                gamma = GammaFunction(kappa.pop(), {canonical_graph6(Graph.from_graph6(k)): v for k, v in vals.items()})
            elif h_index is not None:
                gamma = gamma_from_h(builtin_h(int(h_index)))
            else:
                raise CertificateError("need either gamma or h_index")
            blocks = [_block_from_json(b) for b in data["blocks"]]
            slacks = {canonical_graph6(Graph.from_graph6(k)): _parse_q(v) for k, v in data["slacks"].items()}
        except (GraphError, IndexError, AttributeError, TypeError) as exc:
            raise CertificateError(str(exc)) from exc
        except ValueError as exc:
            if isinstance(exc, CertificateError):
                raise
            raise CertificateError(str(exc)) from exc
        return cls(_parse_q(data["u"]), int(data["N"]), theory, gamma, tuple(blocks), slacks,
                   None if h_index is None else int(h_index))


def _block_from_json(data: Mapping) -> Block:
    sig = data["sigma"]
    if isinstance(sig, str):
        sig = {"graph6": sig}
    g = Graph.from_graph6(sig["graph6"])
    roots = sig.get("roots", list(range(g.n)))
    sigma = FlagType(g.induced(roots))
    flags = []
    for f in data["flags"]:
        fg = Graph.from_graph6(f["graph6"] if isinstance(f, Mapping) else f)
        froots = f.get("roots", list(range(sigma.t))) if isinstance(f, Mapping) else list(range(sigma.t))
        flags.append(Flag(sigma, fg, tuple(froots)))
    return Block(sigma, tuple(flags), [[_parse_q(x) for x in row] for row in data["Q"]])


@dataclass
class VerifyReport:
    verdict: bool
    psd: list[PSDReport]
    residuals: dict[str, Fraction]
    listed: dict[str, Fraction]
    mismatched: list[str] = field(default_factory=list)
    negative: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": "PASS" if self.verdict else "FAIL",
            "psd": [p.to_json() for p in self.psd],
            "residuals": {k: _q(v) for k, v in sorted(self.residuals.items())},
            "mismatched": self.mismatched,
            "negative": self.negative,
        }


def residuals(cert: Certificate, theory: str | None = None) -> dict[str, Fraction]:
    """u - lambda_gamma(F) - sum of block expansions, for every admitted class F."""
    expansions = [expand_block(b, cert.N) for b in cert.blocks]
    out = {}
    for g6 in theory_classes(cert.N, theory or cert.theory):
        f = Graph.from_graph6(g6)
        out[g6] = cert.u - lambda_gamma(cert.gamma, f) - sum((e[g6] for e in expansions), Fraction(0))
    return out


def verify_certificate(cert: Certificate, theory: str | None = None) -> VerifyReport:
    """PASS iff every residual equals its listed slack, all slacks are >= 0 and every Q is PSD.

    ``theory`` overrides the certificate's own theory; a class admitted by
    the override but absent from the slacks counts as a mismatch.
    """
    theory = None if theory is None else theory.replace("-", "_")
    psd = [check_psd(b.Q) for b in cert.blocks]
    res = residuals(cert, theory)
    listed = {k: v for k, v in cert.slacks.items() if k in res}
    mismatched = [k for k in res if listed.get(k) != res[k]]
    negative = [k for k in res if res[k] < 0 or listed.get(k, 0) < 0]
    ok = all(p.psd for p in psd) and not mismatched and not negative
    return VerifyReport(ok, psd, res, listed, mismatched, negative)


# finite-size sanity bound ------------------------------------------------------

def finite_size_correction(cert: Certificate, n: int) -> Fraction:
    """Upper bound on how far lambda of an order-n graph may exceed u.

    The expansion of a PSD block on a finite graph uses disjoint flag
    samples; compared with independent samples (whose quadratic form is
    nonnegative) it can be negative by at most P(overlap)/P(disjoint) times
    max |Q_ij|.
    """
    total = Fraction(0)
    for b in cert.blocks:
        if not b.flags:
            continue
        t = b.ftype.t
        s = b.flags[0].k - t
        m = n - t
        if m < 2 * s:
            raise CertificateError(f"order {n} too small for a block of order {b.order}")
        disjoint = Fraction(comb(m - s, s), comb(m, s))
        qmax = max(abs(x) for row in b.Q for x in row) if b.Q else Fraction(0)
        total += (1 - disjoint) / disjoint * qmax
    return total


# finite dense graphs -----------------------------------------------------------

def random_dense_graph(n: int, seed: int, index: int, p: float = 0.5) -> np.ndarray:
    """Symmetric boolean adjacency matrix of a G(n, p) sample keyed by (seed, index)."""
    rng = np.random.default_rng((seed, index))
    upper = np.triu(rng.random((n, n)) < p, 1)
    return upper | upper.T


def _adjacency(g: Graph | np.ndarray) -> np.ndarray:
    if isinstance(g, Graph):
        return np.array([[g.has_edge(a, b) for b in range(g.n)] for a in range(g.n)], dtype=bool)
    adj = np.asarray(g, dtype=bool)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or (adj != adj.T).any() or adj.diagonal().any():
        raise GraphError("need a symmetric loopless adjacency matrix")
    return adj


def _combinations(items: Sequence[int], r: int) -> np.ndarray:
    count = comb(len(items), r)
    flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(items, r)),
                       dtype=np.int64, count=count * r)
    return flat.reshape(count, r)


def _codes(adj: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Edge bitmask (pairs in lexicographic order) of each row of ``verts``."""
    k = verts.shape[1]
    code = np.zeros(verts.shape[0], dtype=np.int64)
    for b, (i, j) in enumerate(itertools.combinations(range(k), 2)):
        code |= adj[verts[:, i], verts[:, j]].astype(np.int64) << b
    return code


@lru_cache(maxsize=None)
def _labelled_classes(k: int) -> tuple[tuple[str, ...], np.ndarray]:
    classes = enumerate_graph6(k)
    index = {g6: i for i, g6 in enumerate(classes)}
    pairs = list(itertools.combinations(range(k), 2))
    table = np.empty(1 << len(pairs), dtype=np.int64)
    for mask in range(len(table)):
        g = Graph.from_edges(k, [p for b, p in enumerate(pairs) if mask >> b & 1])
        table[mask] = index[canonical_graph6(g)]
    return classes, table


def dense_density_vector(g: Graph | np.ndarray, k: int) -> dict[str, Fraction]:
    """p(F, G) for every class F of order k; G may have more than 32 vertices."""
    adj = _adjacency(g)
    n = adj.shape[0]
    if k > n:
        raise GraphError(f"pattern order {k} exceeds graph order {n}")
    classes, table = _labelled_classes(k)
    counts = np.bincount(table[_codes(adj, _combinations(range(n), k))], minlength=len(classes))
    total = comb(n, k)
    return {g6: Fraction(int(c), total) for g6, c in zip(classes, counts)}


def expansion_on_graph(block: Block, g: Graph | np.ndarray, n_order: int | None = None) -> Fraction:
    """sum_F a_F p(F, G) for the block's expansion over classes of order N."""
    coeffs = expand_block(block, n_order)
    order = Graph.from_graph6(next(iter(coeffs))).n
    dens = dense_density_vector(g, order)
    return sum((coeffs[k] * p for k, p in dens.items() if p), Fraction(0))


def _flag_lookup(block: Block) -> np.ndarray:
    """Flag index of every labelled graph on k vertices (roots 0..t-1), -1 if none."""
    t, k = block.ftype.t, block.flags[0].k
    keys = {f.key: i for i, f in enumerate(block.flags)}
    pairs = list(itertools.combinations(range(k), 2))
    table = np.full(1 << len(pairs), -1, dtype=np.int64)
    for mask in range(len(table)):
        g = Graph.from_edges(k, [p for b, p in enumerate(pairs) if mask >> b & 1])
        if g.induced(range(t)).rows == block.ftype.sigma.rows:
            table[mask] = keys.get(rooted_key(g, range(t)), -1)
    return table


def rooted_form_on_graph(block: Block, g: Graph | np.ndarray) -> Fraction:
    """E_theta[ 1(theta induces sigma) p^T Q p ] with p the flag densities at theta.

    Flags at a labelling are sampled independently, so this differs from
    :func:`expansion_on_graph` by O(1/n).
    """
    adj = _adjacency(g)
    n = adj.shape[0]
    t = block.ftype.t
    if not block.flags:
        return Fraction(0)
    s = block.flags[0].k - t
    table = _flag_lookup(block)
    d = len(block.flags)
    denom = 1
    for row in block.Q:
        for x in row:
            denom = denom * x.denominator // np.gcd(denom, x.denominator)
    qint = np.array([[int(x * denom) for x in row] for row in block.Q], dtype=object)
    sigma_rows = block.ftype.sigma.rows
    total = 0
    for theta in itertools.permutations(range(n), t):
        if any(bool(adj[theta[a], theta[b]]) != bool(sigma_rows[a] >> b & 1)
               for a in range(t) for b in range(a + 1, t)):
            continue
        rest = [v for v in range(n) if v not in theta]
        combos = _combinations(rest, s)
        verts = np.hstack([np.tile(np.array(theta, dtype=np.int64), (len(combos), 1)), combos])
        idx = table[_codes(adj, verts)]
        counts = np.bincount(idx[idx >= 0], minlength=d).astype(object)
        total += int(counts @ qint @ counts)
    return Fraction(total, denom * perm(n, t) * comb(n - t, s) ** 2)


# the H11 certificate -----------------------------------------------------------

def _attachment_flag(flags: Sequence[Flag], to_first: bool, to_second: bool) -> int:
    for i, f in enumerate(flags):
        if f.graph.has_edge(2, 0) == to_first and f.graph.has_edge(2, 1) == to_second:
            return i
    raise LookupError("no such flag")


def h11_blocks() -> tuple[Block, Block]:
    """Edge-type and non-edge-type blocks of the explicit N = 4 bound for H11.

    Both sums run over ordered pairs (u, w).  Edge type: (3/8) times the sum
    of (deg u - deg w)^2 over adjacent pairs, i.e. Q = (3/8) v v^T with
    v = [first only] - [second only].  Non-edge type: (1/8) times the sum of
    (common neighbours - common non-neighbours)^2 over non-adjacent pairs,
    i.e. Q = (1/8) w w^T with w = [both] - [neither].  Summing over
    unordered pairs instead halves both coefficients and leaves C4 with a
    negative slack.
    """
    def rank_one(flags: Sequence[Flag], coef: Fraction, plus: int, minus: int) -> Block:
        v = [0] * len(flags)
        v[plus], v[minus] = 1, -1
        return Block(flags[0].ftype, tuple(flags), [[coef * a * b for b in v] for a in v])

    edge = enumerate_flags(FlagType(Graph.complete(2)), 3)
    non_edge = enumerate_flags(FlagType(Graph.empty(2)), 3)
    return (
        rank_one(edge, Fraction(3, 8), _attachment_flag(edge, True, False), _attachment_flag(edge, False, True)),
        rank_one(non_edge, Fraction(1, 8), _attachment_flag(non_edge, True, True),
                 _attachment_flag(non_edge, False, False)),
    )


def build_h11_n4_certificate(u: Fraction = Fraction(1, 8)) -> Certificate:
    """Certificate for lambda_{H11} <= u with the slacks filled in from the residuals."""
    gamma = gamma_from_h(builtin_h(11))
    blocks = h11_blocks()
    draft = Certificate.__new__(Certificate)
    for name, value in (("u", Fraction(u)), ("N", 4), ("theory", "all"), ("gamma", gamma),
                        ("blocks", blocks), ("slacks", {}), ("h_index", 11)):
        object.__setattr__(draft, name, value)
    return Certificate(Fraction(u), 4, "all", gamma, blocks, residuals(draft), 11)


def zero_certificate(n_order: int, kappa: int | None = None) -> Certificate:
    """The trivial certificate for gamma = 0 with u = 0 and no blocks."""
    kappa = n_order if kappa is None else kappa
    slacks = {g6: Fraction(0) for g6 in enumerate_graph6(n_order)}
    return Certificate(Fraction(0), n_order, "all", GammaFunction.constant(kappa, 0), (), slacks)


@dataclass(frozen=True)
class GateResult:
    n: int
    max_lambda: Fraction
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.max_lambda <= self.bound


def sanity_gate(cert: Certificate, n: int) -> GateResult:
    """Largest lambda_gamma over graphs of order n against u plus the finite-size correction.

    Uses exhaustive search, so n is limited by the enumeration cap.  Under
    the complete partite theory only complete partite graphs are scanned.
    """
    from .graphs import complete_multipartite_parts, enumerate_graphs
    from .semi_inducibility import brute_force_max

    bound = cert.u + finite_size_correction(cert, n)
    if cert.theory == "all" and cert.h_index is not None:
        best = brute_force_max(builtin_h(cert.h_index), n).max_density
    else:
        graphs = enumerate_graphs(n)
        if cert.theory == "complete_partite":
            graphs = [g for g in graphs if complete_multipartite_parts(g) is not None]
        best = max(lambda_gamma(cert.gamma, g) for g in graphs)
    return GateResult(n, best, bound)
