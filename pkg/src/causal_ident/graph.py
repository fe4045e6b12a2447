"""Conditional acyclic directed mixed graphs (CADMGs).

A graph has random vertices, fixed vertices, directed edges and bidirected
edges. Fixed vertices never receive arrowheads. Graphs are immutable values:
every operation returns a new graph.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InputError

Vertex = str
Edge = tuple[str, str]

RELATIVE_KINDS = ("parents", "children", "ancestors", "descendants", "siblings")


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class MixedGraph:
    """A CADMG with random vertices ``random`` and fixed vertices ``fixed``.

    Bidirected edges are stored as sorted pairs. Construction validates every
    structural invariant and raises :class:`InputError` naming the first
    violation found.
    """

    random: frozenset[str] = frozenset()
    fixed: frozenset[str] = frozenset()
    directed: frozenset[Edge] = frozenset()
    bidirected: frozenset[Edge] = frozenset()
    _skip_check: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "random", frozenset(self.random))
        object.__setattr__(self, "fixed", frozenset(self.fixed))
        object.__setattr__(self, "directed", frozenset(tuple(e) for e in self.directed))
        object.__setattr__(
            self, "bidirected", frozenset(_pair(*e) for e in self.bidirected)
        )
        if not self._skip_check:
            self._validate()

    @classmethod
    def build(
        cls,
        random: Iterable[str] = (),
        directed: Iterable[Iterable[str]] = (),
        bidirected: Iterable[Iterable[str]] = (),
        fixed: Iterable[str] = (),
    ) -> "MixedGraph":
        """Build a graph from plain iterables, rejecting duplicate edges."""
        random, fixed = list(random), list(fixed)
        seen: set = set()
        for v in random + fixed:
            if not isinstance(v, str) or not v:
                raise InputError(f"vertex labels must be non-empty strings, got {v!r}")
            if v in seen:
                raise InputError(f"duplicate vertex {v!r}")
            seen.add(v)
        dedges: list[Edge] = []
        for e in directed:
            e = tuple(e)
            if len(e) != 2:
                raise InputError(f"directed edge {list(e)!r} must have two endpoints")
            if e in dedges:
                raise InputError(f"duplicate directed edge {e[0]}->{e[1]}")
            dedges.append(e)
        bedges: list[Edge] = []
        for e in bidirected:
            e = tuple(e)
            if len(e) != 2:
                raise InputError(f"bidirected edge {list(e)!r} must have two endpoints")
            p = _pair(*e)
            if p in bedges:
                raise InputError(f"duplicate bidirected edge {e[0]}<->{e[1]}")
            bedges.append(p)
        return cls(frozenset(random), frozenset(fixed), frozenset(dedges), frozenset(bedges))

    def _validate(self):
        both = self.random & self.fixed
        if both:
            raise InputError(f"vertex {min(both)!r} is both random and fixed")
        verts = self.vertices
        for v in sorted(verts):
            if not isinstance(v, str) or not v:
                raise InputError(f"vertex labels must be non-empty strings, got {v!r}")
        for t, h in sorted(self.directed):
            for x in (t, h):
                if x not in verts:
                    raise InputError(f"directed edge {t}->{h} references unknown vertex {x!r}")
            if t == h:
                raise InputError(f"directed edge {t}->{h} is a self-loop")
            if h in self.fixed:
                raise InputError(f"directed edge {t}->{h} points into fixed vertex {h!r}")
        for a, b in sorted(self.bidirected):
            for x in (a, b):
                if x not in verts:
                    raise InputError(f"bidirected edge {a}<->{b} references unknown vertex {x!r}")
            if a == b:
                raise InputError(f"bidirected edge {a}<->{b} is a self-loop")
            for x in (a, b):
                if x in self.fixed:
                    raise InputError(f"bidirected edge {a}<->{b} touches fixed vertex {x!r}")
        cycle = self._find_cycle()
        if cycle is not None:
            t, h = cycle
            raise InputError(f"directed edge {t}->{h} closes a directed cycle")

    def _find_cycle(self) -> Edge | None:
        # DFS over sorted adjacency; returns the back edge of the first cycle
        colour: dict[str, int] = {}
        for root in sorted(self.vertices):
            if root in colour:
                continue
            stack = [(root, iter(sorted(self._ch.get(root, ()))))]
            colour[root] = 1
            while stack:
                v, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    colour[v] = 2
                    stack.pop()
                elif colour.get(nxt) == 1:
                    return (v, nxt)
                elif nxt not in colour:
                    colour[nxt] = 1
                    stack.append((nxt, iter(sorted(self._ch.get(nxt, ())))))
        return None

    # adjacency caches

    @cached_property
    def vertices(self) -> frozenset[str]:
        return self.random | self.fixed

    @cached_property
    def _pa(self) -> dict[str, set[str]]:
        out: dict[str, set[str]] = {}
        for t, h in self.directed:
            out.setdefault(h, set()).add(t)
        return out

    @cached_property
    def _ch(self) -> dict[str, set[str]]:
        out: dict[str, set[str]] = {}
        for t, h in self.directed:
            out.setdefault(t, set()).add(h)
        return out

    @cached_property
    def _sib(self) -> dict[str, set[str]]:
        out: dict[str, set[str]] = {}
        for a, b in self.bidirected:
            out.setdefault(a, set()).add(b)
            out.setdefault(b, set()).add(a)
        return out

    @cached_property
    def _districts(self) -> dict[str, frozenset[str]]:
        comp: dict[str, frozenset[str]] = {}
        for v in sorted(self.random):
            if v in comp:
                continue
            seen = {v}
            todo = [v]
            while todo:
                u = todo.pop()
                for w in self._sib.get(u, ()):
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
            members = frozenset(seen)
            for u in members:
                comp[u] = members
        return comp

    def fingerprint(self) -> str:
        """Canonical text form; equal graphs give equal fingerprints."""
        return "R[{}]F[{}]D[{}]B[{}]".format(
            ",".join(sorted(self.random)),
            ",".join(sorted(self.fixed)),
            ",".join(f"{t}>{h}" for t, h in sorted(self.directed)),
            ",".join(f"{a}~{b}" for a, b in sorted(self.bidirected)),
        )

    def to_json(self) -> dict:
        return {
            "random": sorted(self.random),
            "fixed": sorted(self.fixed),
            "directed": [list(e) for e in sorted(self.directed)],
            "bidirected": [list(e) for e in sorted(self.bidirected)],
        }

    def __repr__(self) -> str:
        return f"MixedGraph({self.fingerprint()})"


def graph_from_json(doc: Mapping) -> MixedGraph:
    """Parse the graph JSON document, validating every invariant."""
    if not isinstance(doc, Mapping):
        raise InputError("graph document must be a JSON object")
    unknown = set(doc) - {"random", "fixed", "directed", "bidirected"}
    if unknown:
        raise InputError(f"unknown graph field {sorted(unknown)[0]!r}")
    if "random" not in doc:
        raise InputError("graph document needs a 'random' vertex list")
    for key in ("random", "fixed", "directed", "bidirected"):
        if not isinstance(doc.get(key, []), list):
            raise InputError(f"graph field {key!r} must be a list")
    return MixedGraph.build(
        random=doc["random"],
        fixed=doc.get("fixed", []),
        directed=doc.get("directed", []),
        bidirected=doc.get("bidirected", []),
    )


def _check_members(g: MixedGraph, s: Iterable[str]) -> frozenset[str]:
    s = frozenset(s)
    missing = s - g.vertices
    if missing:
        raise InputError(f"unknown vertex {sorted(missing)[0]!r}")
    return s


def _closure(start: frozenset[str], step: Mapping[str, set[str]]) -> frozenset[str]:
    seen = set(start)
    todo = list(start)
    while todo:
        v = todo.pop()
        for w in step.get(v, ()):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return frozenset(seen)


def relatives(g: MixedGraph, s: Iterable[str], kind: str) -> frozenset[str]:
    """Union of the ``kind`` relatives of each member of ``s``.

    Ancestors and descendants are reflexive.
    """
    s = _check_members(g, s)
    if kind == "parents":
        return frozenset().union(*(g._pa.get(v, ()) for v in s))
    if kind == "children":
        return frozenset().union(*(g._ch.get(v, ()) for v in s))
    if kind == "siblings":
        return frozenset().union(*(g._sib.get(v, ()) for v in s))
    if kind == "ancestors":
        return _closure(s, g._pa)
    if kind == "descendants":
        return _closure(s, g._ch)
    raise InputError(f"unknown relative kind {kind!r}; expected one of {RELATIVE_KINDS}")


def parents(g: MixedGraph, s: Iterable[str]) -> frozenset[str]:
    return relatives(g, s, "parents")


def children(g: MixedGraph, s: Iterable[str]) -> frozenset[str]:
    return relatives(g, s, "children")


def ancestors(g: MixedGraph, s: Iterable[str]) -> frozenset[str]:
    return relatives(g, s, "ancestors")


def descendants(g: MixedGraph, s: Iterable[str]) -> frozenset[str]:
    return relatives(g, s, "descendants")


def siblings(g: MixedGraph, s: Iterable[str]) -> frozenset[str]:
    return relatives(g, s, "siblings")


def strict_parents(g: MixedGraph, s: Iterable[str]) -> frozenset[str]:
    s = frozenset(s)
    return parents(g, s) - s


def _check_random(g: MixedGraph, v: str):
    if v not in g.vertices:
        raise InputError(f"unknown vertex {v!r}")
    if v in g.fixed:
        raise InputError(f"vertex {v!r} is fixed; expected a random vertex")


def district_of(g: MixedGraph, v: str) -> frozenset[str]:
    _check_random(g, v)
    return g._districts[v]


def districts(g: MixedGraph) -> list[frozenset[str]]:
    """Districts of ``g`` sorted by their smallest label."""
    uniq = {d for d in g._districts.values()}
    return sorted(uniq, key=lambda d: sorted(d))


def markov_blanket(g: MixedGraph, v: str) -> frozenset[str]:
    """(dis(v) ∪ pa(dis(v))) minus v."""
    d = district_of(g, v)
    return (d | parents(g, d)) - {v}


def induced_subgraph(g: MixedGraph, s: Iterable[str]) -> MixedGraph:
    s = _check_members(g, s)
    return MixedGraph(
        random=g.random & s,
        fixed=g.fixed & s,
        directed=frozenset(e for e in g.directed if e[0] in s and e[1] in s),
        bidirected=frozenset(e for e in g.bidirected if e[0] in s and e[1] in s),
        _skip_check=True,
    )


def topological_order(g: MixedGraph, priority: Iterable[str] = ()) -> list[str]:
    """Fixed vertices first, then a topological order of the random ones.

    Ties go to members of ``priority`` first, then lexicographically.
    """
    pri = frozenset(priority)
    order = sorted(g.fixed)
    indeg = {v: len(g._pa.get(v, set()) & g.random) for v in g.random}
    heap = [(v not in pri, v) for v in g.random if indeg[v] == 0]
    heapq.heapify(heap)
    while heap:
        _, v = heapq.heappop(heap)
        order.append(v)
        for w in g._ch.get(v, ()):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, (w not in pri, w))
    return order


# plural alias; one deterministic order is returned
topological_orders = topological_order


def m_separated(
    g: MixedGraph, x: Iterable[str], y: Iterable[str], z: Iterable[str] = ()
) -> bool:
    """True iff ``x`` and ``y`` are m-separated given ``z`` and the fixed vertices.

    Walks paths with a (vertex, arrived-with-arrowhead) state. A vertex entered
    and left through arrowheads is a collider and passes only if it is an
    ancestor of the conditioning set; any other vertex passes only if it is
    not conditioned on.
    """
    x, y, z = (_check_members(g, s) for s in (x, y, z))
    if not x or not y:
        raise InputError("m-separation needs non-empty x and y")
    for a, b, name in ((x, y, "x and y"), (x, z, "x and z"), (y, z, "y and z")):
        if a & b:
            raise InputError(f"{name} overlap at {sorted(a & b)[0]!r}")
    cond = (z | g.fixed) - x - y
    an_cond = ancestors(g, cond)

    def moves(v: str):
        # (neighbour, arrowhead at v, arrowhead at neighbour)
        for w in g._ch.get(v, ()):
            yield w, False, True
        for w in g._pa.get(v, ()):
            yield w, True, False
        for w in g._sib.get(v, ()):
            yield w, True, True

    seen: set[tuple[str, bool]] = set()
    todo: list[tuple[str, bool]] = []
    for v in x:
        for w, _, head_w in moves(v):
            todo.append((w, head_w))
    while todo:
        state = todo.pop()
        if state in seen:
            continue
        seen.add(state)
        v, head_in = state
        if v in y:
            return False
        if v in x:
            continue
        for w, head_v, head_w in moves(v):
            if head_in and head_v:
                ok = v in an_cond
            else:
                ok = v not in cond
            if ok:
                todo.append((w, head_w))
    return True


def is_ancestral(g: MixedGraph, s: Iterable[str]) -> bool:
    s = _check_members(g, s)
    return (ancestors(g, s) & g.random) <= s


def ancestral_violation(g: MixedGraph, s: Iterable[str]) -> tuple[str, str] | None:
    """First (member, missing random ancestor) pair, or None if ``s`` is ancestral."""
    s = _check_members(g, s)
    for v in sorted(s):
        missing = (ancestors(g, {v}) & g.random) - s
        if missing:
            return v, min(missing)
    return None
