"""Single-world intervention graphs: node splitting and latent projection.

Splitting ``A`` under ``do(A=a)`` keeps a random half labelled ``A`` (with
incoming and bidirected edges) and adds a fixed half labelled ``"A=a"`` that
carries the outgoing directed edges. Vertex labels supplied by users may not
contain ``=``, so the base label is always recoverable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .errors import InputError
from .graph import MixedGraph, ancestors

ValueToken = Union[str, int]
Intervention = Mapping[str, ValueToken]


def check_token(tok) -> ValueToken:
    if isinstance(tok, bool) or not isinstance(tok, (str, int)):
        raise InputError(f"value token must be a string or a non-negative integer, got {tok!r}")
    if isinstance(tok, int) and tok < 0:
        raise InputError(f"concrete value token must be >= 0, got {tok}")
    if isinstance(tok, str) and (not tok or "=" in tok):
        raise InputError(f"symbolic value token {tok!r} must be non-empty and free of '='")
    return tok


def fixed_label(base: str, tok: ValueToken) -> str:
    """Label of the fixed half created by intervening on ``base``."""
    return f"{base}={tok}"


def base_label(label: str) -> str:
    return label.split("=", 1)[0]


def token_of(label: str) -> ValueToken | None:
    """Token carried by a fixed-half label, or None for a plain label."""
    if "=" not in label:
        return None
    raw = label.split("=", 1)[1]
    return int(raw) if raw.isdigit() else raw


def is_intervention_half(label: str) -> bool:
    return "=" in label


def consistent(a: Intervention, b: Intervention) -> bool:
    """True iff the two interventions agree on every shared key."""
    return all(a[k] == b[k] for k in set(a) & set(b))


def format_intervention(a: Intervention) -> str:
    return ",".join(f"{k}={a[k]}" for k in sorted(a))


def parse_intervention(text: str) -> dict[str, ValueToken]:
    """Parse ``"X1=x1,X2=0"``; all-digit values become concrete levels."""
    out: dict[str, ValueToken] = {}
    text = text.strip()
    if not text:
        return out
    for part in text.split(","):
        if "=" not in part:
            raise InputError(f"intervention item {part!r} must look like VAR=value")
        k, v = (s.strip() for s in part.split("=", 1))
        if not k:
            raise InputError(f"intervention item {part!r} has an empty variable name")
        if k in out:
            raise InputError(f"variable {k!r} intervened on twice")
        out[k] = check_token(int(v) if v.isdigit() else v)
    return out


@dataclass(frozen=True)
class Swig:
    """A graph whose intervention-created fixed vertices carry value tokens."""

    graph: MixedGraph
    values: Mapping[str, ValueToken] = field(default_factory=dict)
    base_random: Mapping[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = self.graph.to_json()
        doc["values"] = {k: self.values[k] for k in sorted(self.values)}
        return doc


def _check_labels(g: MixedGraph):
    for v in g.vertices:
        if "=" in v and v not in g.fixed:
            raise InputError(f"random vertex label {v!r} may not contain '='")


def split(g: MixedGraph, a: Intervention) -> Swig:
    """Split every vertex in ``a`` into a random half and a token-labelled fixed half."""
    for k in sorted(a):
        if k not in g.vertices:
            raise InputError(f"intervention on unknown vertex {k!r}")
        if k in g.fixed:
            raise InputError(f"cannot intervene on fixed vertex {k!r}")
        check_token(a[k])
    _check_labels(g)
    halves = {k: fixed_label(k, a[k]) for k in a}
    directed = frozenset((halves.get(t, t), h) for t, h in g.directed)
    values = {v: token_of(v) for v in g.fixed if is_intervention_half(v)}
    values.update({halves[k]: a[k] for k in a})
    out = MixedGraph(
        random=g.random,
        fixed=g.fixed | frozenset(halves.values()),
        directed=directed,
        bidirected=g.bidirected,
    )
    return Swig(out, values, {v: v for v in sorted(g.random)})


def latent_project(g: MixedGraph, keep: Iterable[str]) -> MixedGraph:
    """Project out the random vertices not in ``keep``; fixed vertices stay."""
    keep = frozenset(keep)
    bad = keep - g.vertices
    if bad:
        raise InputError(f"unknown vertex {sorted(bad)[0]!r}")
    hidden = g.random - keep
    keep = keep | g.fixed
    if not hidden:
        return g
    # hidden vertices with an all-hidden directed path into each kept vertex
    hanc: dict[str, frozenset[str]] = {}
    for v in keep:
        seen: set[str] = set()
        todo = [p for p in g._pa.get(v, ()) if p in hidden]
        while todo:
            h = todo.pop()
            if h in seen:
                continue
            seen.add(h)
            todo.extend(p for p in g._pa.get(h, ()) if p in hidden)
        hanc[v] = frozenset(seen)
    directed = set()
    for v in keep:
        for u in g._pa.get(v, ()):
            if u in keep:
                directed.add((u, v))
        for h in hanc[v]:
            for u in g._pa.get(h, ()):
                if u in keep:
                    directed.add((u, v))
    bidirected = set()
    kept_random = sorted(keep & g.random)
    ext = {v: hanc[v] | {v} for v in kept_random}
    for i, u in enumerate(kept_random):
        sib_u = set().union(*(g._sib.get(x, ()) for x in ext[u]))
        for v in kept_random[i + 1:]:
            if hanc[u] & hanc[v] or sib_u & ext[v]:
                bidirected.add((u, v))
    return MixedGraph(
        random=g.random & keep,
        fixed=g.fixed,
        directed=frozenset(directed),
        bidirected=frozenset(bidirected),
        _skip_check=True,
    )


def marginal_swig(g: MixedGraph, a: Intervention, keep: Iterable[str]) -> Swig:
    """Split on ``a`` and then project onto ``keep`` (fixed halves always kept)."""
    keep = frozenset(keep)
    bad = keep - g.random
    if bad:
        raise InputError(f"kept vertex {sorted(bad)[0]!r} is not a random vertex")
    s = split(g, a)
    pg = latent_project(s.graph, keep)
    return Swig(pg, s.values, {v: v for v in sorted(pg.random)})


def ystar(g: MixedGraph, y: Iterable[str], a: Intervention) -> frozenset[str]:
    """Random ancestors of ``y`` in the graph split on ``a``."""
    y = frozenset(y)
    if y & set(a):
        raise InputError(f"outcome {sorted(y & set(a))[0]!r} is also intervened on")
    s = split(g, a)
    return ancestors(s.graph, y) & s.graph.random
