from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from causal_ident.errors import InputError
from causal_ident.graph import MixedGraph, ancestors, is_ancestral
from causal_ident.swig import (
    base_label,
    consistent,
    fixed_label,
    latent_project,
    marginal_swig,
    parse_intervention,
    split,
    token_of,
    ystar,
)

from conftest import fixture_path
from causal_ident.formats import load_graph
from gen import random_admg


@st.composite
def admg_and_subset(draw, n_max=6):
    g = random_admg(np.random.default_rng(draw(st.integers(0, 2**32 - 1))), n_max=n_max)
    keep = draw(st.sets(st.sampled_from(sorted(g.random))))
    return g, keep


def test_split_single(two_path):
    s = split(two_path, {"X1": "x1"})
    g = s.graph
    assert g.fixed == {"X1=x1"}
    assert s.values == {"X1=x1": "x1"}
    assert g.random == two_path.random
    assert ("X1=x1", "W") in g.directed and ("X1", "W") not in g.directed
    assert {("X2", "U"), ("U", "Y"), ("W", "Y")} <= g.directed
    # bidirected edges stay on the random half
    assert g.bidirected == two_path.bidirected


def test_split_empty_is_identity(two_path):
    assert split(two_path, {}).graph == two_path


def test_split_both(two_path):
    g = split(two_path, {"X1": "x1", "X2": "x2"}).graph
    assert g.fixed == {"X1=x1", "X2=x2"}
    assert g.directed == {("X1=x1", "W"), ("X2=x2", "U"), ("U", "Y"), ("W", "Y")}


def test_split_unknown_vertex(two_path):
    with pytest.raises(InputError):
        split(two_path, {"Q": "q"})


def test_project_identity(two_path):
    assert latent_project(two_path, two_path.random) == two_path


def test_project_canonical_confounder():
    g = MixedGraph.build(["H", "X1", "X2"], [("H", "X1"), ("H", "X2")])
    p = latent_project(g, {"X1", "X2"})
    assert p.bidirected == {("X1", "X2")} and not p.directed


def test_project_eid_experiment_graph():
    g = load_graph(fixture_path("eid.graph.json"))
    p = marginal_swig(g, {"X2": "x2"}, ["J", "R1", "R2", "C", "W2"]).graph
    drawn = {("X2=x2", "W2"), ("W2", "R2"), ("J", "C")}
    assert drawn <= p.directed
    assert p.bidirected == {("C", "W2"), ("R1", "R2")}
    # J -> W1 -> R1 with W1 projected out leaves a directed edge J -> R1
    assert p.directed == drawn | {("J", "R1")}


def test_marginal_swig_examples(two_path):
    g4 = marginal_swig(two_path, {"X2": "x2"}, ["Y", "W"]).graph
    assert g4.directed == {("X2=x2", "Y"), ("W", "Y")} and not g4.bidirected
    g3 = marginal_swig(two_path, {"X1": "x1"}, ["W"]).graph
    assert g3.directed == {("X1=x1", "W")} and not g3.bidirected
    assert marginal_swig(two_path, {"X1": "x1"}, two_path.random).graph == split(two_path, {"X1": "x1"}).graph


def test_ystar_examples(two_path):
    assert ystar(two_path, {"Y"}, {"X1": "x1", "X2": "x2"}) == {"Y", "U", "W"}
    assert ystar(MixedGraph.build(["Y"]), {"Y"}, {}) == {"Y"}
    g = load_graph(fixture_path("eid.graph.json"))
    assert ystar(g, {"R1", "R2"}, {"X1": "x1", "X2": "x2"}) == {"R1", "R2", "W1", "W2", "J"}
    with pytest.raises(InputError):
        ystar(two_path, {"Y", "X1"}, {"X1": "x1"})


def test_labels_and_tokens():
    assert fixed_label("X1", "x1") == "X1=x1"
    assert base_label("X1=x1") == "X1" and base_label("W") == "W"
    assert token_of("X1=0") == 0 and token_of("X1=x1") == "x1" and token_of("W") is None
    assert parse_intervention("X1=x1, X2=0") == {"X1": "x1", "X2": 0}
    assert consistent({"A": "a", "B": 0}, {"A": "a", "C": 1})
    assert not consistent({"A": "a"}, {"A": 0})
    for bad in ("X1", "X1=x1,X1=x2", "=3", "X1=a=b"):
        with pytest.raises(InputError):
            parse_intervention(bad)


@given(admg_and_subset(), st.data())
def test_split_and_project_commute(gk, data):
    g, keep = gk
    if not keep:
        return
    a_keys = data.draw(st.sets(st.sampled_from(sorted(keep))))
    a = {k: k.lower() for k in a_keys}
    first = latent_project(split(g, a).graph, keep)
    second = split(latent_project(g, keep), a).graph
    assert first == second


@given(admg_and_subset(), st.data())
def test_projection_staged(gk, data):
    g, k1 = gk
    k2 = data.draw(st.sets(st.sampled_from(sorted(k1)))) if k1 else set()
    assert latent_project(latent_project(g, k1), k2) == latent_project(g, k2)


@given(admg_and_subset(), st.data())
def test_ystar_ancestral_and_split_counts(gk, data):
    g, y = gk
    if not y or y == g.random:
        return
    rest = sorted(g.random - y)
    a = {k: k.lower() for k in data.draw(st.sets(st.sampled_from(rest)))}
    s = split(g, a).graph
    ys = ystar(g, y, a)
    assert y <= ys and is_ancestral(s, ys)
    assert ys == ancestors(s, y) & s.random
    assert len(s.random) == len(g.random) and len(s.fixed) == len(a)
