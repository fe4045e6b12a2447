"""Symbolic kernel expressions over input distributions, plus exact evaluation.

An expression is a tree of ``Base``, ``Marginal``, ``Conditional``, ``Ratio``,
``Product`` and ``EvalAt`` nodes. Every node exposes its free ``outcomes`` and
``given`` variables. Variables are base vertex labels; the intervention context
of an input lives in its :class:`DistRef`, never in variable names.

Numeric evaluation works on dense :class:`TabularDist` tables.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, PositivityError
from .swig import ValueToken, check_token

Assignment = tuple[tuple[str, ValueToken], ...]


def as_assignment(a: Mapping[str, ValueToken] | Assignment | None) -> Assignment:
    if a is None:
        return ()
    items = a.items() if isinstance(a, Mapping) else a
    return tuple(sorted(((k, v) for k, v in items), key=lambda kv: kv[0]))


@dataclass(frozen=True)
class DistRef:
    """Reference to input distribution ``p(scope(context) | given)``.

    ``pinned`` lists the members of ``given`` that are only available at one
    level. ``display`` maps a variable to the context items shown next to it
    when rendering; it does not take part in equality.
    """

    input_id: int
    scope: frozenset[str]
    context: Assignment = ()
    given: frozenset[str] = frozenset()
    pinned: Assignment = ()
    display: Assignment = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "scope", frozenset(self.scope))
        object.__setattr__(self, "given", frozenset(self.given))
        object.__setattr__(self, "context", as_assignment(self.context))
        object.__setattr__(self, "pinned", as_assignment(self.pinned))
        object.__setattr__(self, "display", tuple(sorted(
            ((k, tuple(v)) for k, v in self.display), key=lambda kv: kv[0])))
        ctx = {k for k, _ in self.context}
        if self.scope & ctx:
            raise InputError(f"variable {sorted(self.scope & ctx)[0]!r} is both an outcome and intervened on")
        if self.scope & self.given:
            raise InputError(f"variable {sorted(self.scope & self.given)[0]!r} is both an outcome and conditioned on")
        if not {k for k, _ in self.pinned} <= self.given:
            raise InputError("pinned variables must be conditioning variables")

    @property
    def free_given(self) -> frozenset[str]:
        return self.given - {k for k, _ in self.pinned}

    def context_for(self, var: str) -> Assignment:
        """Context items displayed next to ``var`` (full context by default)."""
        for k, v in self.display:
            if k == var:
                return v
        return self.context if not self.display else ()


class Expr:
    """Base class of kernel expression nodes."""

    @property
    def outcomes(self) -> frozenset[str]:
        raise NotImplementedError

    @property
    def given(self) -> frozenset[str]:
        raise NotImplementedError

    @property
    def free(self) -> frozenset[str]:
        return self.outcomes | self.given

    def bases(self) -> list["Base"]:
        out: list[Base] = []
        stack: list[Expr] = [self]
        while stack:
            e = stack.pop()
            if isinstance(e, Base):
                out.append(e)
            else:
                stack.extend(e.children_nodes())
        return out

    def children_nodes(self) -> tuple["Expr", ...]:
        return ()


@dataclass(frozen=True)
class Base(Expr):
    ref: DistRef

    @cached_property
    def outcomes(self):
        return self.ref.scope

    @cached_property
    def given(self):
        return self.ref.free_given


@dataclass(frozen=True)
class Marginal(Expr):
    child: Expr
    sum_out: frozenset[str]

    @cached_property
    def outcomes(self):
        return self.child.outcomes - self.sum_out

    @cached_property
    def given(self):
        return self.child.given

    def children_nodes(self):
        return (self.child,)


@dataclass(frozen=True)
class Conditional(Expr):
    child: Expr
    on: frozenset[str]

    @cached_property
    def outcomes(self):
        return self.child.outcomes - self.on

    @cached_property
    def given(self):
        return self.child.given | self.on

    def children_nodes(self):
        return (self.child,)


@dataclass(frozen=True)
class Ratio(Expr):
    num: Expr
    den: Expr

    @cached_property
    def outcomes(self):
        return self.num.outcomes - self.den.outcomes

    @cached_property
    def given(self):
        return (self.num.free | self.den.free) - self.outcomes

    def children_nodes(self):
        return (self.num, self.den)


@dataclass(frozen=True)
class Product(Expr):
    children: tuple[Expr, ...]

    @cached_property
    def outcomes(self):
        return frozenset().union(*(c.outcomes for c in self.children))

    @cached_property
    def given(self):
        return frozenset().union(*(c.given for c in self.children)) - self.outcomes

    def children_nodes(self):
        return self.children


@dataclass(frozen=True)
class EvalAt(Expr):
    child: Expr
    assignment: Assignment

    @cached_property
    def keys(self) -> frozenset[str]:
        return frozenset(k for k, _ in self.assignment)

    @cached_property
    def outcomes(self):
        return self.child.outcomes - self.keys

    @cached_property
    def given(self):
        return self.child.given - self.keys

    def children_nodes(self):
        return (self.child,)


UNIT = Product(())


# constructors


def marginalize(e: Expr, s: Iterable[str]) -> Expr:
    s = frozenset(s)
    if not s:
        return e
    if not s <= e.outcomes:
        raise InputError(f"cannot sum out {sorted(s - e.outcomes)} : not outcomes of the kernel")
    return Marginal(e, s)


def condition(e: Expr, s: Iterable[str]) -> Expr:
    """Condition ``e`` on the outcome variables ``s``."""
    s = frozenset(s)
    if not s <= e.outcomes:
        raise InputError(f"cannot condition on {sorted(s - e.outcomes)} : not outcomes of the kernel")
    return Conditional(e, s)


def conditional_of(e: Expr, target: Iterable[str], on: Iterable[str]) -> Expr:
    """``e(target | on)`` where ``on`` may also name conditioning variables of ``e``."""
    target = frozenset(target)
    on = frozenset(on) & e.outcomes
    rest = e.outcomes - target - on
    if not on:
        # a marginal of a kernel is already normalized
        return marginalize(e, rest)
    return condition(marginalize(e, rest), on)


def product(es: Sequence[Expr]) -> Expr:
    flat: list[Expr] = []
    for e in es:
        flat.extend(e.children if isinstance(e, Product) else [e])
    seen: set[str] = set()
    for e in flat:
        if e.outcomes & seen:
            raise InputError(f"product factors share outcome {sorted(e.outcomes & seen)[0]!r}")
        seen |= e.outcomes
    if len(flat) == 1:
        return flat[0]
    return Product(tuple(flat))


def ratio(n: Expr, d: Expr) -> Expr:
    return Ratio(n, d)


def eval_at(e: Expr, a: Mapping[str, ValueToken] | Assignment) -> Expr:
    a = as_assignment(a)
    if not a:
        return e
    bad = [k for k, _ in a if k not in e.free]
    if bad:
        raise InputError(f"cannot evaluate at {bad[0]!r}: not a variable of the kernel")
    for _, v in a:
        check_token(v)
    return EvalAt(e, a)


# numeric tables


@dataclass
class TabularDist:
    """Dense table over ``variables`` (row-major, axis i is variables[i]).

    ``given`` names the conditioning variables; the table sums to one over
    the others for each conditioning slice. ``flags`` records degenerate
    0/0 divisions met during evaluation.
    """

    variables: tuple[str, ...]
    cards: tuple[int, ...]
    table: np.ndarray
    given: frozenset[str] = frozenset()
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        self.variables = tuple(self.variables)
        self.cards = tuple(int(c) for c in self.cards)
        self.table = np.asarray(self.table, dtype=float)
        self.given = frozenset(self.given)
        if len(set(self.variables)) != len(self.variables):
            raise InputError("table variables must be distinct")
        if self.table.shape != self.cards:
            raise InputError(f"table shape {self.table.shape} does not match cards {self.cards}")

    @property
    def outcomes(self) -> frozenset[str]:
        return frozenset(self.variables) - self.given

    def card_map(self) -> dict[str, int]:
        return dict(zip(self.variables, self.cards))

    def reorder(self, order: Sequence[str]) -> "TabularDist":
        if set(order) != set(self.variables):
            raise InputError(f"cannot reorder {self.variables} to {tuple(order)}")
        perm = [self.variables.index(v) for v in order]
        return TabularDist(tuple(order), tuple(self.cards[i] for i in perm),
                           np.transpose(self.table, perm), self.given, self.flags)

    def expand(self, order: Sequence[str]) -> np.ndarray:
        """View broadcastable against a table over ``order``."""
        present = [v for v in order if v in self.variables]
        if set(present) != set(self.variables):
            missing = set(self.variables) - set(order)
            raise InputError(f"cannot broadcast over {sorted(missing)}")
        t = np.transpose(self.table, [self.variables.index(v) for v in present])
        shape = [self.cards[self.variables.index(v)] if v in self.variables else 1 for v in order]
        return t.reshape(shape)

    def sum_out(self, s: Iterable[str]) -> "TabularDist":
        s = set(s)
        axes = tuple(i for i, v in enumerate(self.variables) if v in s)
        keep = [i for i, v in enumerate(self.variables) if v not in s]
        return TabularDist(tuple(self.variables[i] for i in keep), tuple(self.cards[i] for i in keep),
                           self.table.sum(axis=axes), self.given - s, self.flags)

    def slice(self, assign: Mapping[str, int]) -> "TabularDist":
        idx = tuple(assign[v] if v in assign else slice(None) for v in self.variables)
        keep = [i for i, v in enumerate(self.variables) if v not in assign]
        return TabularDist(tuple(self.variables[i] for i in keep), tuple(self.cards[i] for i in keep),
                           self.table[idx], self.given - set(assign), self.flags)

    def max_abs_diff(self, other: "TabularDist") -> float:
        order = sorted(set(self.variables) | set(other.variables))
        cm = {**self.card_map(), **other.card_map()}
        shape = tuple(cm[v] for v in order)
        a = np.broadcast_to(self.expand(order), shape)
        b = np.broadcast_to(other.expand(order), shape)
        return float(np.max(np.abs(a - b))) if a.size else 0.0


def _divide(num: np.ndarray, den: np.ndarray, order: Sequence[str], flags: list[str],
            strict: bool, what: str) -> np.ndarray:
    num, den = np.broadcast_arrays(num, den)
    zero = den == 0
    if zero.any():
        bad = zero & (num != 0)
        if bad.any():
            idx = np.argwhere(bad)[0]
            where = ", ".join(f"{v}={int(i)}" for v, i in zip(order, idx))
            raise PositivityError(f"{what}: nonzero divided by zero at slice {{{where}}}")
        idx = np.argwhere(zero)[0]
        where = ", ".join(f"{v}={int(i)}" for v, i in zip(order, idx))
        msg = f"{what}: 0/0 evaluated as 0 at slice {{{where}}}"
        if strict:
            raise PositivityError(msg)
        flags.append(msg)
    out = np.zeros(num.shape)
    np.divide(num, den, out=out, where=~zero)
    return out


def _level(tok: ValueToken, binding: Mapping[str, int] | None, var: str, card: int) -> int:
    if isinstance(tok, int):
        lvl = tok
    else:
        if binding is None or tok not in binding:
            raise InputError(f"no level bound for symbolic value {tok!r} of {var!r}")
        lvl = int(binding[tok])
    if not 0 <= lvl < card:
        raise InputError(f"level {lvl} out of range for {var!r} with {card} levels")
    return lvl


def evaluate(
    e: Expr,
    registry: Mapping[int, TabularDist],
    cards: Mapping[str, int],
    binding: Mapping[str, int] | None = None,
    strict: bool = False,
) -> TabularDist:
    """Exact table for ``e``; variables come out in sorted order.

    ``binding`` maps symbolic value tokens to levels. Ratios treat 0/0 as 0
    and record a flag (an error when ``strict``); nonzero/0 always raises.
    """
    flags: list[str] = []
    memo: dict[int, TabularDist] = {}

    def card(v: str) -> int:
        if v not in cards:
            raise InputError(f"no cardinality for variable {v!r}")
        return int(cards[v])

    def table(order: Sequence[str], arr: np.ndarray, given) -> TabularDist:
        return TabularDist(tuple(order), tuple(card(v) for v in order), arr, frozenset(given))

    def go(node: Expr) -> TabularDist:
        key = id(node)
        if key in memo:
            return memo[key]
        order = sorted(node.free)
        if isinstance(node, Base):
            ref = node.ref
            if ref.input_id not in registry:
                raise InputError(f"no table registered for input {ref.input_id}")
            t = registry[ref.input_id]
            if set(t.variables) != set(order):
                raise InputError(
                    f"table for input {ref.input_id} has variables {sorted(t.variables)}, expected {order}")
            out = t.reorder(order)
            out = table(order, out.table, node.given)
        elif isinstance(node, Marginal):
            c = go(node.child).sum_out(node.sum_out)
            out = table(order, c.reorder(order).table, node.given)
        elif isinstance(node, Conditional):
            c = go(node.child)
            corder = sorted(node.child.free)
            ct = c.reorder(corder).table
            axes = tuple(i for i, v in enumerate(corder) if v in node.outcomes)
            den = ct.sum(axis=axes, keepdims=True)
            arr = _divide(ct, den, corder, flags, strict, "conditional")
            out = table(order, arr, node.given)
        elif isinstance(node, Ratio):
            n, d = go(node.num), go(node.den)
            arr = _divide(n.expand(order), d.expand(order), order, flags, strict, "ratio")
            shape = tuple(card(v) for v in order)
            out = table(order, np.broadcast_to(arr, shape).copy(), node.given)
        elif isinstance(node, Product):
            shape = tuple(card(v) for v in order)
            arr = np.ones(shape)
            # fixed multiplication order keeps results bitwise reproducible
            for c in sorted(node.children, key=_sort_key):
                arr = arr * go(c).expand(order)
            out = table(order, np.broadcast_to(arr, shape).copy(), node.given)
        elif isinstance(node, EvalAt):
            c = go(node.child)
            assign = {k: _level(v, binding, k, card(k)) for k, v in node.assignment}
            s = c.slice(assign)
            out = table(order, s.reorder(order).table, node.given)
        else:
            raise InputError(f"unknown expression node {type(node).__name__}")
        memo[key] = out
        return out

    res = go(e)
    res.flags = tuple(flags)
    return res


# simplification


def _normalized(e: Expr) -> bool:
    if isinstance(e, (Base, Conditional)):
        return True
    if isinstance(e, Marginal):
        return _normalized(e.child)
    if isinstance(e, EvalAt):
        return _normalized(e.child) and e.keys <= e.child.given
    return False


def _rewrite(e: Expr) -> Expr:
    if isinstance(e, Marginal):
        if not e.sum_out:
            return e.child
        c = e.child
        if isinstance(c, Marginal):
            return Marginal(c.child, c.sum_out | e.sum_out)
        if isinstance(c, Conditional):
            return Conditional(Marginal(c.child, e.sum_out), c.on)
        return e
    if isinstance(e, Conditional):
        c = e.child
        if isinstance(c, Conditional):
            return Conditional(c.child, c.on | e.on)
        if not e.on and _normalized(c):
            return c
        return e
    if isinstance(e, Ratio):
        n, d = e.num, e.den
        if n == d:
            return UNIT
        if isinstance(d, Product) and not d.children:
            return n
        if isinstance(d, Marginal) and d.child == n:
            return Conditional(n, d.outcomes)
        if isinstance(d, Conditional):
            inner = d.child
            if inner == n and len(d.outcomes) == 1 and d.on == n.outcomes - d.outcomes:
                return Marginal(n, d.outcomes)
        return e
    if isinstance(e, Product):
        flat: list[Expr] = []
        changed = False
        for c in e.children:
            if isinstance(c, Product):
                flat.extend(c.children)
                changed = True
            else:
                flat.append(c)
        if len(flat) == 1:
            return flat[0]
        return Product(tuple(flat)) if changed else e
    if isinstance(e, EvalAt):
        keep = tuple((k, v) for k, v in e.assignment if k in e.child.free)
        if not keep:
            return e.child
        if isinstance(e.child, EvalAt):
            return EvalAt(e.child.child, as_assignment(dict(e.child.assignment) | dict(keep)))
        if len(keep) != len(e.assignment):
            return EvalAt(e.child, keep)
        return e
    return e


def _rebuild(e: Expr, kids: list[Expr]) -> Expr:
    if isinstance(e, Marginal):
        return Marginal(kids[0], e.sum_out)
    if isinstance(e, Conditional):
        return Conditional(kids[0], e.on)
    if isinstance(e, Ratio):
        return Ratio(kids[0], kids[1])
    if isinstance(e, Product):
        return Product(tuple(kids))
    if isinstance(e, EvalAt):
        return EvalAt(kids[0], e.assignment)
    return e


def simplify(e: Expr) -> Expr:
    """Apply evaluation-preserving syntactic rewrites until nothing changes.

    Rules: cancel identical ratio terms, turn ``e / Σ_S e`` into a
    conditional, turn ``e / e(v | rest)`` into ``Σ_v e``, merge nested
    marginals and nested conditionals, commute a marginal inside a
    conditional, drop empty marginals and assignments to absent variables,
    and flatten products. Equivalence holds wherever denominators are positive.
    """
    memo: dict[Expr, Expr] = {}

    def go(node: Expr) -> Expr:
        if node in memo:
            return memo[node]
        kids = node.children_nodes()
        cur = _rebuild(node, [go(k) for k in kids]) if kids else node
        while True:
            nxt = _rewrite(cur)
            if nxt == cur:
                break
            cur = go(nxt)
        memo[node] = cur
        return cur

    return go(e)


# rendering

_SUBSCRIPT = re.compile(r"^(.*?[^\d_])_?(\d+)$")


def _tok_text(tok: ValueToken, latex: bool) -> str:
    if isinstance(tok, int):
        return str(tok)
    m = _SUBSCRIPT.match(tok)
    if not m:
        return tok
    return f"{m.group(1)}_{{{m.group(2)}}}" if latex else f"{m.group(1)}_{m.group(2)}"


def _sum_text(vars_: Iterable[str], latex: bool) -> str:
    vs = ",".join(sorted(vars_))
    if latex:
        return f"\\sum_{{{vs}}} "
    return f"Σ_{vs} " if len(vs.split(",")) == 1 else f"Σ_{{{vs}}} "


@dataclass
class _PLike:
    ref: DistRef
    out: dict[str, ValueToken | None]
    cond: dict[str, ValueToken | None]


def _as_plike(e: Expr) -> _PLike | None:
    if isinstance(e, Base):
        pinned = dict(e.ref.pinned)
        cond = {v: pinned.get(v) for v in e.ref.given}
        return _PLike(e.ref, {v: None for v in e.ref.scope}, cond)
    if isinstance(e, Marginal):
        p = _as_plike(e.child)
        if p is None:
            return None
        for v in e.sum_out:
            p.out.pop(v)
        return p
    if isinstance(e, Conditional):
        p = _as_plike(e.child)
        if p is None:
            return None
        for v in e.on:
            p.cond[v] = p.out.pop(v)
        return p
    if isinstance(e, EvalAt):
        p = _as_plike(e.child)
        if p is None:
            return None
        for k, tok in e.assignment:
            if k in p.out and p.out[k] is None:
                p.out[k] = tok
            elif k in p.cond and p.cond[k] is None:
                p.cond[k] = tok
            else:
                return None
        return p
    return None


def _var_text(ref: DistRef, v: str, tok: ValueToken | None, latex: bool, do_form: bool) -> str:
    ctx = ref.context_for(v)
    s = v
    if ctx and not do_form:
        s += "(" + ",".join(_tok_text(t, latex) for _, t in ctx) + ")"
    if tok is not None:
        s += "=" + _tok_text(tok, latex)
    return s


def _render_plike(p: _PLike, latex: bool, do_form: bool) -> str:
    bar = " \\mid " if latex else " | "
    outs = ", ".join(_var_text(p.ref, v, p.out[v], latex, do_form) for v in sorted(p.out))
    conds = [_var_text(p.ref, v, p.cond[v], latex, do_form) for v in sorted(p.cond)]
    if do_form and p.ref.context:
        conds.append("do(" + ", ".join(f"{k}={_tok_text(t, latex)}" for k, t in p.ref.context) + ")")
    body = outs + (bar + ", ".join(conds) if conds else "")
    return f"p({body})"


def render(e: Expr, fmt: str = "text", do_form: bool = False, order: Sequence[str] | None = None) -> str:
    """Render ``e`` as ``text``, ``latex`` or ``json``.

    ``order`` is a vertex order used to list product factors (latest vertex
    first); without it factors are listed by their sorted outcome labels.
    ``do_form`` prints contexts as ``do(...)`` instead of counterfactual labels.
    """
    if fmt == "json":
        return json.dumps(to_json(e), sort_keys=True, ensure_ascii=False)
    if fmt not in ("text", "latex"):
        raise InputError(f"unknown render format {fmt!r}")
    latex = fmt == "latex"
    pos = {v: i for i, v in enumerate(order)} if order is not None else None

    def factor_key(c: Expr):
        outs = sorted(c.outcomes)
        if pos is not None:
            return (-max((pos.get(v, -1) for v in outs), default=-1), outs)
        return (0, outs)

    def go(node: Expr, wrap: bool) -> str:
        p = _as_plike(node)
        if p is not None:
            return _render_plike(p, latex, do_form)
        if isinstance(node, Marginal):
            s = _sum_text(node.sum_out, latex) + go(node.child, False)
            return f"[{s}]" if wrap else s
        if isinstance(node, Product):
            if not node.children:
                return "1"
            kids = sorted(node.children, key=factor_key)
            return (" \\cdot " if latex else " ").join(go(c, True) for c in kids)
        if isinstance(node, Ratio):
            if latex:
                return f"\\frac{{{go(node.num, False)}}}{{{go(node.den, False)}}}"
            return f"[{go(node.num, False)}] / [{go(node.den, False)}]"
        if isinstance(node, Conditional):
            on = ", ".join(sorted(node.on))
            inner = go(node.child, False)
            return f"\\left.{inner}\\right|_{{{on}}}" if latex else f"cond[{inner} ; {on}]"
        if isinstance(node, EvalAt):
            a = ", ".join(f"{k}={_tok_text(t, latex)}" for k, t in node.assignment)
            inner = go(node.child, True)
            return f"\\left.{inner}\\right|_{{{a}}}" if latex else f"{inner}|_{{{a}}}"
        raise InputError(f"unknown expression node {type(node).__name__}")

    return go(e, False)


# json


def _assign_json(a: Assignment) -> dict:
    return {k: v for k, v in a}


def to_json(e: Expr) -> dict:
    if isinstance(e, Base):
        r = e.ref
        doc = {"kind": "base", "input": r.input_id, "scope": sorted(r.scope),
               "context": _assign_json(r.context), "given": sorted(r.given),
               "pinned": _assign_json(r.pinned)}
        if r.display:
            doc["display"] = {k: _assign_json(v) for k, v in r.display}
        return doc
    if isinstance(e, Marginal):
        return {"kind": "marginal", "sum_out": sorted(e.sum_out), "child": to_json(e.child)}
    if isinstance(e, Conditional):
        return {"kind": "conditional", "on": sorted(e.on), "child": to_json(e.child)}
    if isinstance(e, Ratio):
        return {"kind": "ratio", "num": to_json(e.num), "den": to_json(e.den)}
    if isinstance(e, Product):
        return {"kind": "product", "children": [to_json(c) for c in e.children]}
    if isinstance(e, EvalAt):
        return {"kind": "eval_at", "assignment": _assign_json(e.assignment), "child": to_json(e.child)}
    raise InputError(f"unknown expression node {type(e).__name__}")


def from_json(doc) -> Expr:
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        kind = doc["kind"]
        if kind == "base":
            ref = DistRef(int(doc["input"]), frozenset(doc["scope"]), as_assignment(doc["context"]),
                          frozenset(doc["given"]), as_assignment(doc["pinned"]),
                          tuple((k, as_assignment(v)) for k, v in doc.get("display", {}).items()))
            return Base(ref)
        if kind == "marginal":
            return Marginal(from_json(doc["child"]), frozenset(doc["sum_out"]))
        if kind == "conditional":
            return Conditional(from_json(doc["child"]), frozenset(doc["on"]))
        if kind == "ratio":
            return Ratio(from_json(doc["num"]), from_json(doc["den"]))
        if kind == "product":
            return Product(tuple(from_json(c) for c in doc["children"]))
        if kind == "eval_at":
            return EvalAt(from_json(doc["child"]), as_assignment(doc["assignment"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed expression JSON: {exc}") from exc
    raise InputError(f"unknown expression kind {doc.get('kind')!r}")


def _sort_key(e: Expr) -> str:
    return json.dumps(to_json(e), sort_keys=True)
