"""Brute-force ground truth from a hidden-variable DAG.

The canonical construction adds one binary-or-wider hidden parent per
bidirected edge. Interventional, marginal and conditional distributions are
computed exactly from the truncated factorization, and emitted formulas are
checked against them.
"""
from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, PositivityError
from .graph import MixedGraph, topological_order
from .kernels import Expr, TabularDist, evaluate
from .swig import latent_project

_LETTERS = string.ascii_letters
CONSTRUCTION = "one hidden vertex per bidirected edge"


@dataclass(frozen=True)
class LatentDag:
    observed: frozenset[str]
    hidden: frozenset[str]
    directed: frozenset[tuple[str, str]]
    cards: Mapping[str, int] = field(compare=False)

    def parents(self, v: str) -> tuple[str, ...]:
        return tuple(sorted(t for t, h in self.directed if h == v))

    def order(self) -> list[str]:
        g = MixedGraph(random=self.observed | self.hidden, directed=self.directed)
        return topological_order(g)

    def project(self) -> MixedGraph:
        g = MixedGraph(random=self.observed | self.hidden, directed=self.directed)
        return latent_project(g, self.observed)


def canonical_latent_dag(g: MixedGraph, cards: Mapping[str, int] | None = None,
                         hidden_card: int = 2) -> LatentDag:
    """DAG with a hidden parent ``H[a,b]`` for each bidirected edge ``a<->b``."""
    if g.fixed:
        raise InputError("the canonical latent DAG needs a graph without fixed vertices")
    cards = dict(cards or {})
    for v in g.random:
        cards.setdefault(v, 2)
        if not 2 <= cards[v] <= 4:
            raise InputError(f"cardinality of {v!r} must be between 2 and 4")
    directed = set(g.directed)
    hidden = set()
    for a, b in sorted(g.bidirected):
        h = f"H[{a},{b}]"
        hidden.add(h)
        cards[h] = hidden_card
        directed.add((h, a))
        directed.add((h, b))
    return LatentDag(frozenset(g.random), frozenset(hidden), frozenset(directed), cards)


@dataclass
class Parameterization:
    """Conditional table per vertex; axes are the sorted parents, then the vertex."""

    cpts: dict[str, np.ndarray]
    parents: dict[str, tuple[str, ...]]
    seed: int | None = None


def parameterize(dag: LatentDag, rng: np.random.Generator | int | None = None,
                 floor: float = 0.01) -> Parameterization:
    """Dirichlet(1, ..., 1) rows, floored at ``floor`` and renormalized."""
    seed = rng if isinstance(rng, int) else None
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    cpts, pars = {}, {}
    for v in dag.order():
        pa = dag.parents(v)
        k = dag.cards[v]
        shape = tuple(dag.cards[p] for p in pa)
        rows = rng.dirichlet(np.ones(k), size=shape if shape else None)
        rows = np.maximum(rows, floor)
        rows = rows / rows.sum(axis=-1, keepdims=True)
        cpts[v] = np.asarray(rows).reshape(shape + (k,))
        pars[v] = pa
    return Parameterization(cpts, pars, seed)


def interventional(
    dag: LatentDag,
    param: Parameterization,
    outcomes: Iterable[str],
    do: Mapping[str, int] | None = None,
    given: Iterable[str] = (),
    pinned: Mapping[str, int] | None = None,
) -> TabularDist:
    """Exact ``p(outcomes(do) | given(do))`` with ``pinned`` members sliced.

    Every vertex keeps its own table; children of an intervened vertex read
    the intervention level instead of its natural value.
    """
    do = dict(do or {})
    pinned = dict(pinned or {})
    outcomes, given = frozenset(outcomes), frozenset(given)
    for v in outcomes | given | set(do):
        if v not in dag.observed:
            raise InputError(f"unknown observed variable {v!r}")
    if outcomes & given or (outcomes | given) & set(do):
        raise InputError("outcomes, conditioning and intervened variables must be disjoint")
    order = dag.order()
    letters = {v: _LETTERS[i] for i, v in enumerate(order)}
    if len(order) > len(_LETTERS):
        raise InputError("too many variables for exact evaluation")
    arrays, subs = [], []
    for v in order:
        t = param.cpts[v]
        idx = []
        sub = ""
        for p in param.parents[v]:
            if p in do:
                idx.append(do[p])
            else:
                idx.append(slice(None))
                sub += letters[p]
        t = t[tuple(idx) + (slice(None),)]
        arrays.append(t)
        subs.append(sub + letters[v])
    keep = sorted(outcomes | given)
    spec = ",".join(subs) + "->" + "".join(letters[v] for v in keep)
    joint = np.einsum(spec, *arrays, optimize="greedy")
    cards = tuple(dag.cards[v] for v in keep)
    if given:
        axes = tuple(i for i, v in enumerate(keep) if v in outcomes)
        den = joint.sum(axis=axes, keepdims=True)
        if np.any(den == 0):
            raise PositivityError("conditioning slice has probability zero")
        joint = joint / den
    out = TabularDist(tuple(keep), cards, joint, given)
    if pinned:
        out = out.slice(pinned)
    return out


def _levels(assign, binding: Mapping[str, int]) -> dict[str, int]:
    out = {}
    for k, tok in assign:
        out[k] = tok if isinstance(tok, int) else binding[tok]
    return out


def ground_truth(dag: LatentDag, param: Parameterization, spec,
                 binding: Mapping[str, int] | None = None) -> TabularDist:
    """Table for an input declaration or a query under a token binding."""
    binding = binding or {}
    if hasattr(spec, "y"):
        return interventional(dag, param, spec.y, _levels(spec.a, binding))
    return interventional(dag, param, spec.outcomes, _levels(spec.do, binding), spec.given,
                          _levels(spec.pinned, binding))


def token_ranges(q, inputs: Sequence, cards: Mapping[str, int]) -> dict[str, int]:
    """Number of levels each symbolic token may take (smallest card it labels)."""
    out: dict[str, int] = {}
    items = list(q.a)
    for z in inputs:
        items += list(z.do) + list(z.pinned)
    for k, tok in items:
        if isinstance(tok, str):
            out[tok] = min(out.get(tok, 99), cards[k])
    return out


def bindings(ranges: Mapping[str, int]) -> list[dict[str, int]]:
    toks = sorted(ranges)
    return [dict(zip(toks, combo))
            for combo in itertools.product(*(range(ranges[t]) for t in toks))]


def input_tables(dag: LatentDag, param: Parameterization, inputs: Sequence,
                 binding: Mapping[str, int]) -> dict[int, TabularDist]:
    """Registry of input tables; derived inputs are evaluated from their derivation."""
    reg: dict[int, TabularDist] = {}
    for z in inputs:
        if getattr(z, "derivation", None) is None:
            reg[z.id] = ground_truth(dag, param, z, binding)
    for z in inputs:
        if getattr(z, "derivation", None) is not None:
            t = evaluate(z.derivation, reg, dag.cards, binding)
            t.given = frozenset(z.given) - {k for k, _ in z.pinned}
            reg[z.id] = t
    return reg


@dataclass
class CheckReport:
    max_dev: float
    per_trial: list[float]
    flags: list[str]
    trials: int
    seed: int
    construction: str = CONSTRUCTION

    @property
    def passed(self) -> bool:
        return self.max_dev < 1e-9

    def to_json(self) -> dict:
        return {"max_dev": self.max_dev, "per_trial": self.per_trial, "flags": self.flags,
                "trials": self.trials, "seed": self.seed, "construction": self.construction}


def check_formula(g: MixedGraph, z: Sequence, q, result, trials: int = 50, seed: int = 7,
                  cards: Mapping[str, int] | None = None, formula: Expr | None = None) -> CheckReport:
    """Compare an identified formula with the oracle over random parameterizations.

    Every binding of symbolic value tokens to levels is checked. Free
    variables left in the formula must not change its value.
    """
    formula = formula if formula is not None else result.formula
    if formula is None:
        raise InputError("check_formula needs an identified formula")
    inputs = list(getattr(result, "inputs", None) or z)
    dag = canonical_latent_dag(g, cards)
    binds = bindings(token_ranges(q, inputs, dag.cards))
    per_trial, flags = [], []
    children = np.random.SeedSequence(seed).spawn(trials)
    for t, ss in enumerate(children):
        param = parameterize(dag, np.random.default_rng(ss))
        worst = 0.0
        for b in binds:
            reg = input_tables(dag, param, inputs, b)
            got = evaluate(formula, reg, dag.cards, b)
            flags.extend(f"trial {t}: {f}" for f in got.flags)
            truth = ground_truth(dag, param, q, b)
            if not set(truth.variables) <= set(got.variables):
                worst = float("inf")
                flags.append(f"trial {t}: formula lacks outcome variables")
                continue
            worst = max(worst, got.max_abs_diff(truth))
        per_trial.append(worst)
    return CheckReport(max(per_trial, default=0.0), per_trial, flags, trials, seed)
