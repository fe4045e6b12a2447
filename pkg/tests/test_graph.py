from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causal_ident.errors import InputError
from causal_ident.graph import (
    MixedGraph,
    ancestors,
    children,
    descendants,
    district_of,
    districts,
    graph_from_json,
    induced_subgraph,
    is_ancestral,
    m_separated,
    markov_blanket,
    parents,
    relatives,
    siblings,
    strict_parents,
    topological_order,
)
from causal_ident.oracle import canonical_latent_dag
from causal_ident.swig import marginal_swig, split

from gen import random_admg


def chain(*names):
    return MixedGraph.build(names, list(zip(names, names[1:])))


@st.composite
def admgs(draw, n_max=6):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_admg(np.random.default_rng(seed), n_max=n_max)


# examples

def test_ancestors_and_parents_two_path(two_path):
    assert ancestors(two_path, {"Y"}) == {"Y", "U", "W", "X1", "X2"}
    assert ancestors(two_path, set()) == frozenset()
    assert parents(two_path, {"Y"}) == {"U", "W"}


def test_strict_parents(two_path):
    assert strict_parents(two_path, {"U", "Y"}) == {"W", "X2"}
    assert strict_parents(two_path, set()) == frozenset()
    assert strict_parents(chain("A", "B", "C"), {"B", "C"}) == {"A"}


def test_districts(two_path, chain4):
    assert districts(two_path) == [frozenset({"X1", "X2", "W", "U", "Y"})]
    assert set(districts(chain4)) == {frozenset("A"), frozenset("BD"), frozenset("C")}
    assert districts(chain("A", "B")) == [frozenset("A"), frozenset("B")]


def test_district_of_fixed_vertex_rejected(two_path):
    g = split(two_path, {"X1": "x1"}).graph
    with pytest.raises(InputError):
        district_of(g, "X1=x1")


def test_markov_blanket(two_path, chain4):
    assert markov_blanket(chain4, "D") == {"A", "B", "C"}
    assert markov_blanket(MixedGraph.build(["V"]), "V") == frozenset()
    assert markov_blanket(two_path, "W") == {"X1", "X2", "U", "Y"}


def test_induced_subgraph(two_path):
    assert induced_subgraph(two_path, two_path.vertices) == two_path
    sub = induced_subgraph(two_path, {"Y", "U", "W"})
    assert sub.directed == {("U", "Y"), ("W", "Y")}
    assert sub.bidirected == {("U", "Y")}
    assert induced_subgraph(two_path, set()).vertices == frozenset()


def test_topological_order(two_path):
    assert topological_order(chain("A", "B", "C")) == ["A", "B", "C"]
    assert topological_order(MixedGraph.build(["B", "A"])) == ["A", "B"]
    order = topological_order(split(two_path, {"X1": "x1"}).graph)
    assert order[0] == "X1=x1"


def test_m_separation_examples(two_path):
    assert m_separated(MixedGraph.build(["A", "B", "C"]), {"A"}, {"B"}, set())
    collider = MixedGraph.build(["A", "B", "C"], [("A", "C"), ("B", "C")])
    assert not m_separated(collider, {"A"}, {"B"}, {"C"})
    assert m_separated(collider, {"A"}, {"B"}, set())
    # Y(x2) against the random X1 given U and W in the x2-split graph
    g2 = split(two_path, {"X2": "x2"}).graph
    assert m_separated(g2, {"Y"}, {"X1"}, {"U", "W"})


def test_m_separation_overlap_rejected():
    g = chain("A", "B")
    with pytest.raises(InputError):
        m_separated(g, {"A"}, {"A", "B"}, set())


def test_is_ancestral(two_path):
    assert is_ancestral(marginal_swig(two_path, {"X1": "x1"}, ["W"]).graph, {"W"})
    g4 = split(two_path, {"X2": "x2"}).graph
    assert not is_ancestral(g4, {"Y", "W"})
    assert is_ancestral(two_path, two_path.random)


def test_unknown_vertex_rejected(two_path):
    with pytest.raises(InputError):
        relatives(two_path, {"Q"}, "parents")


@pytest.mark.parametrize("doc,msg", [
    ({"random": ["A", "B"], "directed": [["A", "B"], ["B", "A"]]}, "cycle"),
    ({"random": ["A"], "directed": [["A", "A"]]}, "self-loop"),
    ({"random": ["A"], "fixed": ["B"], "directed": [["A", "B"]]}, "B"),
    ({"random": ["A"], "fixed": ["B"], "bidirected": [["A", "B"]]}, "B"),
    ({"random": ["A", "A"]}, "A"),
    ({"random": ["A", "B"], "directed": [["A", "B"], ["A", "B"]]}, "duplicate"),
    ({"random": ["A"], "directed": [["A", "Z"]]}, "Z"),
])
def test_loader_reports_violation(doc, msg):
    with pytest.raises(InputError, match=msg):
        graph_from_json(doc)


def test_json_round_trip(two_path):
    assert graph_from_json(two_path.to_json()) == two_path


# properties

@given(admgs())
def test_districts_partition(g):
    ds = districts(g)
    assert frozenset().union(*ds) == g.random
    assert sum(len(d) for d in ds) == len(g.random)
    for d in ds:
        for v in d:
            assert district_of(g, v) == d


@given(admgs(), st.data())
def test_relatives_monotone(g, data):
    names = sorted(g.vertices)
    t = set(data.draw(st.lists(st.sampled_from(names), unique=True)))
    s = set(data.draw(st.lists(st.sampled_from(sorted(t)), unique=True))) if t else set()
    for kind in ("parents", "children", "ancestors", "descendants", "siblings"):
        assert relatives(g, s, kind) <= relatives(g, t, kind)


@given(admgs(), st.data())
def test_genealogy_matches_networkx(g, data):
    d = nx.DiGraph()
    d.add_nodes_from(g.vertices)
    d.add_edges_from(g.directed)
    v = data.draw(st.sampled_from(sorted(g.vertices)))
    assert ancestors(g, {v}) == nx.ancestors(d, v) | {v}
    assert descendants(g, {v}) == nx.descendants(d, v) | {v}
    assert parents(g, {v}) == set(d.predecessors(v))
    assert children(g, {v}) == set(d.successors(v))
    assert siblings(g, {v}) == {b if a == v else a for a, b in g.bidirected if v in (a, b)}


@given(admgs(), st.data())
def test_induced_subgraph_never_adds_edges(g, data):
    s = data.draw(st.sets(st.sampled_from(sorted(g.vertices))))
    sub = induced_subgraph(g, s)
    assert sub.directed <= g.directed and sub.bidirected <= g.bidirected


@given(admgs())
def test_topological_order_respects_edges(g):
    order = topological_order(g)
    pos = {v: i for i, v in enumerate(order)}
    assert sorted(order) == sorted(g.vertices)
    assert all(pos[a] < pos[b] for a, b in g.directed)


def _triples(names):
    for x, y in itertools.combinations(names, 2):
        rest = [v for v in names if v not in (x, y)]
        for k in range(len(rest) + 1):
            for z in itertools.combinations(rest, k):
                yield {x}, {y}, set(z)


@settings(max_examples=40, deadline=None)
@given(admgs(n_max=5))
def test_m_separation_matches_d_separation_on_latent_dag(g):
    # exact equivalence with d-separation in the canonical hidden-variable DAG
    dag = canonical_latent_dag(g)
    d = nx.DiGraph()
    d.add_nodes_from(dag.observed | dag.hidden)
    d.add_edges_from(dag.directed)
    for x, y, z in _triples(sorted(g.random)):
        ours = m_separated(g, x, y, z)
        assert ours == m_separated(g, y, x, z)
        assert ours == nx.is_d_separator(d, x, y, z)


@given(admgs(), st.data())
def test_ancestral_sets_closed_under_intersection(g, data):
    names = sorted(g.random)
    a = ancestors(g, data.draw(st.sets(st.sampled_from(names)))) & g.random
    b = ancestors(g, data.draw(st.sets(st.sampled_from(names)))) & g.random
    assert is_ancestral(g, g.random)
    assert is_ancestral(g, a) and is_ancestral(g, b) and is_ancestral(g, a & b)
