"""Identification of counterfactual distributions in hidden-variable causal models."""
from __future__ import annotations

from .errors import InputError, PositivityError, PreconditionError, ResourceError
from .graph import MixedGraph, graph_from_json
from .identify import (
    IdentResult,
    InputDist,
    Query,
    Status,
    a_id,
    chain_rule_close,
    e_id,
    g_id,
    id_classic,
    identify,
    m_id,
    selection_id,
)
from .kernels import TabularDist, evaluate, render, simplify
from .oracle import canonical_latent_dag, check_formula, ground_truth

__version__ = "0.1.0"

__all__ = [
    "InputError", "PositivityError", "PreconditionError", "ResourceError",
    "MixedGraph", "graph_from_json",
    "IdentResult", "InputDist", "Query", "Status",
    "a_id", "chain_rule_close", "e_id", "g_id", "id_classic", "identify", "m_id", "selection_id",
    "TabularDist", "evaluate", "render", "simplify",
    "canonical_latent_dag", "check_formula", "ground_truth",
]
