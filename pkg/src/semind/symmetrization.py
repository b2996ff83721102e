"""Clone inequalities and the reduction of a graph to a complete partite one.

G_{uw} denotes the graph in which w is made a clone of u.  When the clone
inequality 2 lambda(G) <= lambda(G_{wu}) + lambda(G_{uw}) holds for every
non-edge uw, any graph can be turned into a complete partite graph without
decreasing lambda, editing at most n-1 pairs per step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import Graph, GraphError, complete_multipartite_parts
from .semi_inducibility import GammaFunction, TwoColoredGraph, lambda_gamma


class MonotonicityError(AssertionError):
    """A step decreased lambda during a run that was promised to be monotone."""


@dataclass(frozen=True)
class ShapeVerdict:
    applies: bool
    red_parts: tuple[tuple[int, ...], ...] | None
    # per part the vertices ordered by inclusion of their blue neighbourhoods,
    # or (part index, u, w) for the first non-nested pair
    nesting_witness: tuple

    def to_json(self) -> dict:
        return {
            "applies": self.applies,
            "red_parts": None if self.red_parts is None else [list(p) for p in self.red_parts],
            "nesting_witness": [list(x) if isinstance(x, tuple) else x for x in self.nesting_witness],
        }


def shape_check(h: TwoColoredGraph) -> ShapeVerdict:
    """Is the red graph complete partite with nested in-part blue neighbourhoods?"""
    parts = complete_multipartite_parts(h.red_graph())
    if parts is None:
        return ShapeVerdict(False, None, ())
    parts = sorted((tuple(sorted(p)) for p in parts), key=lambda p: (p[0], len(p)))
    blue = Graph.from_edges(h.kappa, h.blue)
    chains = []
    for idx, part in enumerate(parts):
        inside = set(part)
        for a in part:
            for b in part:
                if a >= b:
                    continue
                rest = inside - {a, b}
                na = set(blue.neighbours(a)) & rest
                nb = set(blue.neighbours(b)) & rest
                if not (na <= nb or nb <= na):
                    return ShapeVerdict(False, tuple(parts), (idx, a, b))
        chains.append(tuple(sorted(part, key=lambda v: (len(set(blue.neighbours(v)) & inside), v))))
    return ShapeVerdict(True, tuple(parts), tuple(chains))


def clone(g: Graph, u: int, w: int) -> Graph:
    """G_{uw}: w becomes a clone of u."""
    return g.clone_onto(u, w)


def strong_symm_margin(gamma: GammaFunction, g: Graph, u: int, w: int) -> Fraction:
    """lambda(G_{wu}) + lambda(G_{uw}) - 2 lambda(G) for a non-adjacent pair u, w."""
    if u == w or g.has_edge(u, w):
        raise GraphError("the clone inequality is stated for non-adjacent distinct vertices")
    return lambda_gamma(gamma, clone(g, w, u)) + lambda_gamma(gamma, clone(g, u, w)) - 2 * lambda_gamma(gamma, g)


def _are_clones(g: Graph, u: int, w: int) -> bool:
    return not g.has_edge(u, w) and g.rows[u] == g.rows[w]


@dataclass
class SymmetrizeResult:
    graph: Graph
    lambda_before: Fraction
    lambda_after: Fraction
    steps: list[dict] = field(default_factory=list)
    guaranteed: bool = True

    def to_json(self) -> dict:
        def q(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"

        return {
            "graph6": self.graph.to_graph6(),
            "lambda_before": q(self.lambda_before),
            "lambda_after": q(self.lambda_after),
            "guaranteed": self.guaranteed,
            "steps": [{**s, "lambda": q(s["lambda"])} for s in self.steps],
        }


def symmetrize(gamma: GammaFunction, g: Graph, guaranteed: bool = True) -> SymmetrizeResult:
    """Turn g into a complete partite graph by clone operations.

    Vertices are processed in increasing order.  For the current vertex u
    and its smallest non-adjacent non-clone w (both not yet in a finished
    part): if making w a clone of u does not decrease lambda it is done;
    otherwise every clone of u (u included) is made a clone of w in turn.
    Once all non-neighbours of u are its clones, the clone class of u is a
    finished part, adjacent to every other vertex.

    With ``guaranteed`` a decreasing step raises MonotonicityError.  In
    best-effort mode such a step is replaced by making w a clone of u
    anyway (recorded as forced), so the output is still complete partite.
    """
    if g.n < gamma.kappa:
        raise GraphError(f"graph order {g.n} is smaller than gamma order {gamma.kappa}")
    cur = g
    value = lambda_gamma(gamma, cur)
    start = value
    steps: list[dict] = []
    done = 0  # bitmask of vertices in finished parts
    n = g.n
    batches_left = n * n

    def record(op: str, src: int, dst: int, val: Fraction, forced: bool = False) -> None:
        entry = {"op": op, "source": src, "target": dst, "lambda": val}
        if forced:
            entry["forced"] = True
        steps.append(entry)

    while done != (1 << n) - 1:
        u = next(v for v in range(n) if not done >> v & 1)
        w = next(
            (v for v in range(n)
             if v != u and not done >> v & 1 and not cur.has_edge(u, v) and not _are_clones(cur, u, v)),
            None,
        )
        if w is None:
            part = [v for v in range(n) if not done >> v & 1 and (v == u or _are_clones(cur, u, v))]
            for v in part:
                done |= 1 << v
            continue
        forward = clone(cur, u, w)
        fval = lambda_gamma(gamma, forward)
        if fval >= value:
            cur, value = forward, fval
            record("clone", u, w, value)
            continue
        # clone-back: move the whole clone class of u onto w
        cls = [v for v in range(n) if not done >> v & 1 and (v == u or _are_clones(cur, u, v))]
        trial, tval, ok = cur, value, True
        trial_steps = []
        for v in cls:
            nxt = clone(trial, w, v)
            nval = lambda_gamma(gamma, nxt)
            if nval < tval:
                ok = False
                break
            trial, tval = nxt, nval
            trial_steps.append((w, v, nval))
        if ok and (guaranteed or (tval > value and batches_left > 0)):
            batches_left -= 1
            cur, value = trial, tval
            for src, dst, val in trial_steps:
                record("clone_back", src, dst, val)
            continue
        if guaranteed:
            raise MonotonicityError(f"no non-decreasing clone step for the pair ({u}, {w})")
        cur, value = forward, fval
        record("clone", u, w, value, forced=True)

    if complete_multipartite_parts(cur) is None:  # pragma: no cover - guarded by the invariant above
        raise AssertionError("symmetrisation ended on a graph that is not complete partite")
    return SymmetrizeResult(cur, start, value, steps, guaranteed)
