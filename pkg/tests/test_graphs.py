from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semind.graphs import (
    Graph,
    GraphError,
    canonical_form,
    canonical_graph6,
    co_cherry,
    complete_multipartite_parts,
    decode_graph6,
    density_vector,
    edit,
    encode_graph6,
    enumerate_graph6,
    enumerate_graphs,
    induced_density,
    is_isomorphic,
)

from conftest import permutation_isomorphic, to_nx


@st.composite
def graphs(draw, max_n: int = 7, min_n: int = 0):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.integers(0, (1 << len(pairs)) - 1)) if pairs else 0
    return Graph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def relabelled(g: Graph, seed: int) -> Graph:
    import random
    perm = list(range(g.n))
    random.Random(seed).shuffle(perm)
    return g.relabel(perm)


# construction and validation -------------------------------------------------

def test_graph_rejects_bad_rows():
    with pytest.raises(GraphError):
        Graph(2, (0b10, 0))  # asymmetric
    with pytest.raises(GraphError):
        Graph(1, (1,))  # loop
    with pytest.raises(GraphError):
        Graph(33, (0,) * 33)
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 3)])


def test_basic_queries():
    c5 = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert c5.degrees() == [2] * 5
    assert c5.num_edges() == 5
    assert c5.triangles() == 0
    assert Graph.complete(4).triangles() == 4
    assert sorted(c5.neighbours(0)) == [1, 4]


# graph6 ------------------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(graphs(max_n=12))
def test_graph6_matches_networkx(g):
    ours = encode_graph6(g)
    theirs = nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert ours == theirs
    assert decode_graph6(theirs) == g


def test_graph6_known_strings():
    assert encode_graph6(Graph.empty(0)) == "?"
    assert encode_graph6(Graph.complete(2)) == "A_"
    assert decode_graph6(">>graph6<<A_") == Graph.complete(2)
    with pytest.raises(GraphError):
        decode_graph6("A")
    with pytest.raises(GraphError):
        decode_graph6("A\x10")


def test_graph6_long_header_roundtrip():
    g = Graph.from_edges(32, [(i, (i + 5) % 32) for i in range(32)])
    assert decode_graph6(encode_graph6(g)) == g


# canonical form ------------------------------------------------------------------

def test_canonical_c5_relabellings():
    c5 = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    key = canonical_graph6(c5)
    for perm in itertools.permutations(range(5)):
        assert canonical_graph6(c5.relabel(perm)) == key


def test_canonical_idempotent_on_k3():
    k3 = Graph.complete(3)
    once = canonical_form(k3)
    assert canonical_form(once.graph).graph6 == once.graph6
    assert once.graph.to_graph6() == once.graph6


def test_canonical_p4_labellings():
    a = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    b = Graph.from_edges(4, [(0, 2), (2, 1), (1, 3)])
    assert permutation_isomorphic(a, b)
    assert canonical_graph6(a) == canonical_graph6(b)


def test_canonical_perm_maps_graph():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5)])
    key = canonical_form(g)
    assert g.relabel(key.perm) == key.graph


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=6), graphs(max_n=6))
def test_canonical_iff_isomorphic(g, h):
    assert (canonical_graph6(g) == canonical_graph6(h)) == permutation_isomorphic(g, h)


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=10), st.integers(0, 10 ** 6))
def test_canonical_invariant_under_relabelling(g, seed):
    assert canonical_graph6(relabelled(g, seed)) == canonical_graph6(g)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9, min_n=1), st.integers(0, 10 ** 6))
def test_rooted_canonical_form_respects_roots(g, seed):
    roots = (0,)
    key = canonical_form(g, roots)
    assert key.perm[0] == 0
    import random
    rest = list(range(1, g.n))
    random.Random(seed).shuffle(rest)
    perm = [0] + rest
    assert canonical_form(g.relabel(perm), roots).graph6 == key.graph6


def test_is_isomorphic():
    assert is_isomorphic(Graph.from_edges(3, [(0, 1)]), Graph.from_edges(3, [(1, 2)]))
    assert not is_isomorphic(Graph.from_edges(3, [(0, 1)]), Graph.complete(3))


def test_strongly_regular_pair_distinguished():
    # 4x4 rook graph and the Shrikhande graph share parameters (16, 6, 2, 2)
    rook = nx.convert_node_labels_to_integers(nx.cartesian_product(nx.complete_graph(4), nx.complete_graph(4)))
    shrikhande = nx.Graph()
    for a, b in itertools.product(range(4), repeat=2):
        for da, db in ((0, 1), (1, 0), (1, 1)):
            shrikhande.add_edge(a * 4 + b, ((a + da) % 4) * 4 + (b + db) % 4)
    g1 = Graph.from_edges(16, rook.edges())
    g2 = Graph.from_edges(16, shrikhande.edges())
    assert sorted(g1.degrees()) == sorted(g2.degrees())
    assert canonical_graph6(g1) != canonical_graph6(g2)
    assert canonical_graph6(relabelled(g2, 3)) == canonical_graph6(g2)


# enumeration --------------------------------------------------------------------

def _oracle_classes(n: int) -> int:
    """Count isomorphism classes over all 2^C(n,2) edge sets with networkx isomorphism tests."""
    pairs = list(itertools.combinations(range(n), 2))
    buckets: dict = {}
    for mask in range(1 << len(pairs)):
        h = nx.Graph()
        h.add_nodes_from(range(n))
        h.add_edges_from(p for i, p in enumerate(pairs) if mask >> i & 1)
        key = (h.number_of_edges(), tuple(sorted(d for _, d in h.degree())))
        reps = buckets.setdefault(key, [])
        if not any(nx.is_isomorphic(h, r) for r in reps):
            reps.append(h)
    return sum(len(v) for v in buckets.values())


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4, 5, 6])
def test_enumeration_count_matches_edge_set_oracle(n):
    assert len(enumerate_graphs(n)) == _oracle_classes(n)


def test_enumeration_small_examples():
    assert len(enumerate_graphs(3)) == 4
    assert len(enumerate_graphs(4)) == 11
    assert enumerate_graphs(0) == [Graph.empty(0)]


@pytest.mark.parametrize("n,count", [(7, 1044), (8, 12346)])
def test_enumeration_counts_larger(n, count):
    # reference counts of unlabelled graphs (OEIS A000088)
    gs = enumerate_graph6(n)
    assert len(gs) == count
    assert len(set(gs)) == count


def test_enumeration_sorted_canonical_and_deterministic():
    gs = enumerate_graph6(6)
    assert list(gs) == sorted(gs)
    assert all(canonical_graph6(decode_graph6(s)) == s for s in gs)
    assert enumerate_graph6(6) == gs


def test_enumeration_cap():
    with pytest.raises(GraphError):
        enumerate_graphs(10)
    assert len(enumerate_graphs(3, cap=3)) == 4


# densities ----------------------------------------------------------------------

def test_density_examples():
    k2 = Graph.complete(2)
    assert induced_density(k2, Graph.complete(3)) == 1
    c5 = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert induced_density(k2, c5) == Fraction(1, 2)
    k222 = Graph.from_edges(6, [(a, b) for a in range(6) for b in range(a + 1, 6) if a // 2 != b // 2])
    assert induced_density(co_cherry(), k222) == 0
    with pytest.raises(GraphError):
        induced_density(Graph.complete(4), Graph.complete(3))


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8, min_n=4), st.integers(2, 4))
def test_density_vector_sums_to_one(g, k):
    assert sum(density_vector(g, k).values()) == 1


def test_density_against_direct_count():
    g = Graph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (0, 3), (2, 6)])
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    direct = sum(1 for s in itertools.combinations(range(7), 3)
                 if permutation_isomorphic(g.induced(s), p3))
    assert induced_density(p3, g) == Fraction(direct, 35)


# edits and partite structure --------------------------------------------------------

def test_edit_examples():
    assert edit(Graph.complete(2), "flip", 0, 1) == Graph.empty(2)
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert edit(c4, "clone_onto", 0, 2) == c4
    with pytest.raises(GraphError):
        edit(c4, "flip", 1, 1)
    with pytest.raises(GraphError):
        edit(c4, "flip", 0, 7)
    with pytest.raises(GraphError):
        edit(c4, "rotate", 0, 1)


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=6))
def test_complement_involution(g):
    assert edit(edit(g, "complement"), "complement") == g


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=8, min_n=2), st.data())
def test_flip_and_clone_semantics(g, data):
    u = data.draw(st.integers(0, g.n - 1))
    w = data.draw(st.integers(0, g.n - 1).filter(lambda v: v != u))
    f = g.flip(u, w)
    changed = [(a, b) for a, b in itertools.combinations(range(g.n), 2) if f.has_edge(a, b) != g.has_edge(a, b)]
    assert changed == [(min(u, w), max(u, w))]
    c = g.clone_onto(u, w)
    assert set(c.neighbours(w)) == set(g.neighbours(u)) - {w}
    for a, b in itertools.combinations([v for v in range(g.n) if v != w], 2):
        assert c.has_edge(a, b) == g.has_edge(a, b)


def test_partite_examples():
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert sorted(len(p) for p in complete_multipartite_parts(c4)) == [2, 2]
    assert complete_multipartite_parts(Graph.from_edges(4, [(0, 1)])) is None
    assert [len(p) for p in complete_multipartite_parts(Graph.complete(5))] == [1] * 5


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=8, min_n=3))
def test_partite_iff_no_co_cherry(g):
    parts = complete_multipartite_parts(g)
    assert (parts is not None) == (induced_density(co_cherry(), g) == 0)
    if parts is not None:
        sizes = [len(p) for p in parts]
        assert sizes == sorted(sizes, reverse=True)
        assert sorted(v for p in parts for v in p) == list(range(g.n))
