"""The fixing operator on graphs and kernels, s-fixing, and reachable sets.

A random vertex ``v`` is fixable when its descendants meet its district only
in ``v`` itself. Fixing moves ``v`` to the fixed set, deletes the edges with
arrowheads into it, and divides the kernel by ``q(v | mb(v))``.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InputError, PreconditionError, ResourceError
from .graph import (
    MixedGraph,
    ancestors,
    descendants,
    district_of,
    districts,
    induced_subgraph,
    markov_blanket,
    topological_order,
)
from .kernels import Expr, Ratio, conditional_of, marginalize, product, simplify

DEFAULT_MAX_VERTICES = 12
ENV_MAX_VERTICES = "CAUSAL_IDENT_MAX_VERTICES"


def blocking_descendants(g: MixedGraph, v: str) -> frozenset[str]:
    """Descendants of ``v`` inside its district, other than ``v``."""
    return (descendants(g, {v}) & district_of(g, v)) - {v}


def is_fixable(g: MixedGraph, v: str) -> bool:
    return not blocking_descendants(g, v)


def _fix_unchecked(g: MixedGraph, v: str) -> MixedGraph:
    return MixedGraph(
        random=g.random - {v},
        fixed=g.fixed | {v},
        directed=frozenset(e for e in g.directed if e[1] != v),
        bidirected=frozenset(e for e in g.bidirected if v not in e),
        _skip_check=True,
    )


def fix_graph(g: MixedGraph, v: str) -> MixedGraph:
    block = blocking_descendants(g, v)
    if block:
        raise PreconditionError(
            f"{v!r} is not fixable: descendants {sorted(block)} share its district")
    return _fix_unchecked(g, v)


def fix_kernel(e: Expr, v: str, g: MixedGraph) -> Expr:
    """``e / e(v | mb(v))``; fixed members of the blanket stay implicit."""
    if not is_fixable(g, v):
        raise PreconditionError(
            f"{v!r} is not fixable: descendants {sorted(blocking_descendants(g, v))} share its district")
    if v not in e.outcomes:
        raise PreconditionError(f"{v!r} is not an outcome of the kernel")
    return Ratio(e, conditional_of(e, {v}, markov_blanket(g, v)))


def apply_sequence(e: Expr, g: MixedGraph, seq: Sequence[str]) -> tuple[Expr, MixedGraph]:
    """Fix ``seq`` in order on both the kernel and the graph."""
    for v in seq:
        e = fix_kernel(e, v, g)
        g = fix_graph(g, v)
    return e, g


@dataclass(frozen=True)
class FixResult:
    graph: MixedGraph
    sequence: tuple[str, ...]


def fix_set(g: MixedGraph, s: Iterable[str]) -> FixResult | None:
    """Greedily fix every member of ``s``; None if the loop stalls."""
    s = frozenset(s)
    bad = s - g.random
    if bad:
        raise InputError(f"cannot fix {sorted(bad)[0]!r}: not a random vertex")
    todo = set(s)
    seq: list[str] = []
    while todo:
        for v in sorted(todo):
            if is_fixable(g, v):
                g = _fix_unchecked(g, v)
                seq.append(v)
                todo.remove(v)
                break
        else:
            return None
    return FixResult(g, tuple(seq))


def reach(g: MixedGraph, target: Iterable[str]) -> FixResult | None:
    """Fix everything outside ``target``; None if ``target`` is not reachable."""
    return fix_set(g, g.random - frozenset(target))


def is_intrinsic(g: MixedGraph, d: Iterable[str]) -> bool:
    d = frozenset(d)
    if not d or not d <= g.random:
        return False
    r = reach(g, d)
    return r is not None and len(districts(r.graph)) == 1


@dataclass
class ReachEntry:
    sequence: tuple[str, ...]
    graph: MixedGraph
    intrinsic: bool


@dataclass
class IntrinsicCatalog:
    """Every nonempty reachable set of a graph with one witnessing sequence."""

    fingerprint: str
    entries: dict[frozenset[str], ReachEntry] = field(default_factory=dict)

    @property
    def reachable(self) -> list[frozenset[str]]:
        return sorted(self.entries, key=lambda s: (len(s), sorted(s)))

    @property
    def intrinsic(self) -> list[frozenset[str]]:
        return [s for s in self.reachable if self.entries[s].intrinsic]


def vertex_limit() -> int:
    raw = os.environ.get(ENV_MAX_VERTICES)
    if raw is None:
        return DEFAULT_MAX_VERTICES
    try:
        val = int(raw)
    except ValueError:
        raise InputError(f"{ENV_MAX_VERTICES} must be an integer, got {raw!r}") from None
    if val < 1:
        raise InputError(f"{ENV_MAX_VERTICES} must be positive, got {val}")
    return val


def enumerate_reachable(g: MixedGraph, limit: int | None = None) -> IntrinsicCatalog:
    """Breadth-first search over reached graphs, keyed by their random set.

    Fixing is order-invariant on graphs, so the random set determines the
    reached graph and each state is expanded once.
    """
    limit = vertex_limit() if limit is None else limit
    if len(g.random) > limit:
        raise ResourceError(
            f"graph has {len(g.random)} random vertices, above the enumeration limit {limit} "
            f"(set {ENV_MAX_VERTICES} to raise it)")
    cat = IntrinsicCatalog(g.fingerprint())
    start = frozenset(g.random)
    if not start:
        return cat
    cat.entries[start] = ReachEntry((), g, len(districts(g)) == 1)
    queue = deque([start])
    while queue:
        s = queue.popleft()
        ent = cat.entries[s]
        for v in sorted(s):
            nxt = s - {v}
            if not nxt or nxt in cat.entries or not is_fixable(ent.graph, v):
                continue
            h = _fix_unchecked(ent.graph, v)
            cat.entries[nxt] = ReachEntry(ent.sequence + (v,), h, len(districts(h)) == 1)
            queue.append(nxt)
    return cat


# district-recursive kernel construction


def district_factor(e: Expr, g: MixedGraph, dd: Iterable[str],
                    priority: Iterable[str] = ()) -> Expr:
    """Kernel of district ``dd`` as a product of ordered-blanket conditionals.

    ``e`` must be a kernel whose outcomes are the random vertices of ``g``.
    Each ``u`` in ``dd`` contributes ``e(u | mb(u))`` with the blanket taken
    in the subgraph of ``u`` and its predecessors.
    """
    dd = frozenset(dd)
    order = [v for v in topological_order(g, priority) if v in g.random]
    factors = []
    seen: set[str] = set()
    for u in order:
        if u in dd:
            sub = induced_subgraph(g, seen | {u} | g.fixed)
            blanket = markov_blanket(sub, u) & g.random
            factors.append(conditional_of(e, {u}, blanket & e.outcomes))
        seen.add(u)
    return product(factors)


def restrict_to(g: MixedGraph, keep: Iterable[str]) -> MixedGraph:
    """Fix every random vertex outside ``keep`` without checking fixability."""
    keep = frozenset(keep)
    out = g
    for v in sorted(g.random - keep):
        out = _fix_unchecked(out, v)
    return out


@dataclass
class KernelDerivation:
    kernel: Expr
    graph: MixedGraph
    steps: list[tuple[str, tuple[str, ...]]]


def intrinsic_kernel(e: Expr, g: MixedGraph, d: Iterable[str],
                     priority: Iterable[str] = ()) -> KernelDerivation:
    """Kernel for intrinsic ``d`` from kernel ``e`` over ``random(g)``.

    Alternates two moves that agree with fixing under the model: summing out
    random vertices that are not ancestors of ``d``, and replacing the kernel
    by the district factor of the district containing ``d``.
    """
    d = frozenset(d)
    if not d or not d <= g.random:
        raise PreconditionError(f"{sorted(d)} is not a nonempty set of random vertices")
    if frozenset(e.outcomes) != g.random:
        raise PreconditionError(
            f"kernel outcomes {sorted(e.outcomes)} differ from random vertices {sorted(g.random)}")
    steps: list[tuple[str, tuple[str, ...]]] = []
    while True:
        t = ancestors(g, d) & g.random
        if t != g.random:
            drop = g.random - t
            e = marginalize(e, drop)
            g = induced_subgraph(g, t | g.fixed)
            steps.append(("marginalize", tuple(sorted(drop))))
        if t == d:
            return KernelDerivation(e, g, steps)
        dd = district_of(g, min(d))
        if not d <= dd or dd == g.random:
            raise PreconditionError(f"{sorted(d)} is not reachable as a single district")
        e = district_factor(e, g, dd, priority)
        g = restrict_to(g, dd)
        steps.append(("district", tuple(sorted(dd))))


def reachable_kernels(e: Expr, g: MixedGraph,
                      cat: IntrinsicCatalog | None = None) -> dict[frozenset[str], Expr]:
    """Kernel of every reachable set as a product of intrinsic kernels.

    ``e`` is the joint over ``random(g)``. Each reachable set gets the
    product of the kernels of the districts of its reached graph.
    """
    cat = enumerate_reachable(g) if cat is None else cat
    kernels = {d: simplify(intrinsic_kernel(e, g, d).kernel) for d in cat.intrinsic}
    return {s: product([kernels[d] for d in districts(cat.entries[s].graph)]) for s in cat.reachable}


# s-fixing


def is_s_fixable(g: MixedGraph, v: str, c: Iterable[str]) -> bool:
    c = frozenset(c)
    if v in c:
        raise InputError(f"{v!r} is conditioned on and cannot be s-fixed")
    bad = c - g.random
    if bad:
        raise InputError(f"conditioned vertex {sorted(bad)[0]!r} is not random")
    de = descendants(g, {v})
    return not (de & c) and (de & district_of(g, v)) == {v}


def s_fix_graph(g: MixedGraph, v: str, c: Iterable[str]) -> MixedGraph:
    if not is_s_fixable(g, v, c):
        raise PreconditionError(f"{v!r} is not s-fixable given {sorted(c)}")
    return _fix_unchecked(g, v)


def s_fix_kernel(e: Expr, v: str, c: Iterable[str], c_values: Mapping | None,
                 g: MixedGraph) -> Expr:
    """``e / e(v | mb(v) minus c)`` where ``e`` is already held at the ``c`` level."""
    c = frozenset(c)
    if not is_s_fixable(g, v, c):
        raise PreconditionError(f"{v!r} is not s-fixable given {sorted(c)}")
    if c_values is not None and set(c_values) - c:
        raise InputError("conditioning levels given for variables outside the conditioned set")
    if v not in e.outcomes:
        raise PreconditionError(f"{v!r} is not an outcome of the kernel")
    return Ratio(e, conditional_of(e, {v}, markov_blanket(g, v) - c))


def find_s_fixing_sequence(
    g: MixedGraph,
    targets: Iterable[str],
    c: Iterable[str],
    suffix_constraint: Iterable[str] | None = None,
) -> tuple[str, ...] | None:
    """Backtracking search for an s-fixing sequence of ``targets``.

    Members of ``suffix_constraint`` are fixed after all other targets.
    Candidates are tried latest-first in the topological order of ``g``.
    Returns None when no sequence exists.
    """
    targets, c = frozenset(targets), frozenset(c)
    if targets & c:
        raise InputError(f"{sorted(targets & c)[0]!r} is both a target and conditioned on")
    suffix = frozenset(suffix_constraint or ()) & targets
    rank = {v: i for i, v in enumerate(topological_order(g))}
    dead: set[frozenset[str]] = set()

    def search(h: MixedGraph, left: frozenset[str]) -> list[str] | None:
        if not left:
            return []
        if left in dead:
            return None
        pool = left - suffix if left - suffix else left
        for v in sorted(pool, key=lambda x: -rank[x]):
            if is_s_fixable(h, v, c):
                rest = search(_fix_unchecked(h, v), left - {v})
                if rest is not None:
                    return [v] + rest
        dead.add(left)
        return None

    seq = search(g, targets)
    return None if seq is None else tuple(seq)
