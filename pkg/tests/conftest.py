from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from causal_ident.formats import inputs_from_json, load_graph, load_json, query_from_json
from causal_ident.kernels import evaluate
from causal_ident.oracle import bindings, canonical_latent_dag, input_tables, parameterize, token_ranges

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load_problem(graph: str, query: str | None = None, inputs: str | None = None):
    g = load_graph(fixture_path(graph))
    q = query_from_json(load_json(fixture_path(query))) if query else None
    z = inputs_from_json(load_json(fixture_path(inputs))) if inputs else []
    return g, q, z


def formula_gap(g, q, pairs, trials: int = 3, seed: int = 0) -> float:
    """Largest difference between formulas evaluated on shared oracle tables.

    ``pairs`` is a list of ``(inputs, formula)``; every formula is compared
    with the first one on each parameterization and token binding.
    """
    dag = canonical_latent_dag(g)
    all_inputs = [z for zs, _ in pairs for z in zs]
    binds = bindings(token_ranges(q, all_inputs, dag.cards))
    worst = 0.0
    for ss in np.random.SeedSequence(seed).spawn(trials):
        param = parameterize(dag, np.random.default_rng(ss))
        for b in binds:
            tables = [evaluate(f, input_tables(dag, param, zs, b), dag.cards, b) for zs, f in pairs]
            for t in tables[1:]:
                worst = max(worst, tables[0].max_abs_diff(t))
    return worst


@pytest.fixture
def two_path():
    return load_graph(fixture_path("two_path.graph.json"))


@pytest.fixture
def chain4():
    return load_graph(fixture_path("chain4.graph.json"))
