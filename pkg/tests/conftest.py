"""Shared oracles for the test-suite.

These helpers deliberately avoid the package's canonical labelling and
counting code so that they can serve as independent references.
"""
from __future__ import annotations

import itertools
from math import perm

import networkx as nx
import pytest

from semind.graphs import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def permutation_isomorphic(g: Graph, h: Graph) -> bool:
    """Isomorphism by trying every bijection."""
    if g.n != h.n or g.num_edges() != h.num_edges():
        return False
    ge = {frozenset(e) for e in g.edges()}
    he = {frozenset(e) for e in h.edges()}
    for p in itertools.permutations(range(g.n)):
        if {frozenset((p[a], p[b])) for a, b in ge} == he:
            return True
    return False


def naive_embeddings(red, blue, g: Graph, kappa: int = 4) -> int:
    """Count injections sending red pairs to edges and blue pairs to non-edges, one tuple at a time."""
    total = 0
    for f in itertools.permutations(range(g.n), kappa):
        if all(g.has_edge(f[a], f[b]) for a, b in red) and all(not g.has_edge(f[a], f[b]) for a, b in blue):
            total += 1
    return total


def naive_density(red, blue, g: Graph, kappa: int = 4):
    from fractions import Fraction
    return Fraction(naive_embeddings(red, blue, g, kappa), perm(g.n, kappa))


@pytest.fixture(scope="session")
def small_graphs():
    """All labelled graphs on 5 vertices with random-looking labels (every edge set)."""
    pairs = list(itertools.combinations(range(5), 2))
    return [Graph.from_edges(5, [p for i, p in enumerate(pairs) if m >> i & 1]) for m in range(1 << 10)]


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance(capsys):
    """Record one PASS/FAIL line for an acceptance criterion and echo it immediately."""
    def record(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print(f"\n{line}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
