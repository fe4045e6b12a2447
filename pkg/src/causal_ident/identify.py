"""Identification of counterfactual queries ``p(Y(a))`` from input menus.

Every algorithm follows the same outline. Take the random ancestors ``Y*`` of
``Y`` in the graph split on ``a``. Possibly shrink them to a margin ``Y'``.
Then, for each district ``D`` of the target graph ``G(Y'(a))``, find an
input whose graph yields a kernel for ``D``. The answer is the product of
those kernels evaluated at ``a`` and summed over ``Y' \\ Y``.

Statuses: ``Identified``; ``NotIdentified`` (only from ``id``, ``gid`` and
``aid``, which are complete); ``Unknown`` (search exhausted elsewhere);
``NotApplicable`` (selection inputs whose levels or conditioning clash with
the query).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .errors import InputError, ResourceError
from .fixing import (
    find_s_fixing_sequence,
    intrinsic_kernel,
    is_intrinsic,
    reach,
    restrict_to,
    s_fix_graph,
    s_fix_kernel,
    district_factor,
)
from .graph import (
    MixedGraph,
    ancestors,
    ancestral_violation,
    descendants,
    districts,
    m_separated,
    parents,
    strict_parents,
    topological_order,
)
from .kernels import (
    Assignment,
    Base,
    DistRef,
    Expr,
    as_assignment,
    conditional_of,
    eval_at,
    marginalize,
    product,
    render,
    simplify,
    to_json,
)
from .swig import (
    base_label,
    check_token,
    fixed_label,
    is_intervention_half,
    marginal_swig,
    split,
    ystar,
)

MAX_YSTAR_EXTRA = 16
ALGORITHMS = ("id", "gid", "aid", "mid", "eid")


class Status(str, Enum):
    IDENTIFIED = "Identified"
    NOT_IDENTIFIED = "NotIdentified"
    UNKNOWN = "Unknown"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class InputDist:
    """Available distribution ``p(outcomes(do) | given(do))``.

    ``pinned`` holds the conditioning variables available at one level only.
    Inputs produced by chain-rule closure carry their ``derivation`` in terms
    of the original inputs.
    """

    outcomes: frozenset[str]
    do: Assignment = ()
    given: frozenset[str] = frozenset()
    pinned: Assignment = ()
    id: int = 0
    derivation: Expr | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "outcomes", frozenset(self.outcomes))
        object.__setattr__(self, "given", frozenset(self.given))
        object.__setattr__(self, "do", as_assignment(self.do))
        object.__setattr__(self, "pinned", as_assignment(self.pinned))

    @property
    def do_map(self) -> dict:
        return dict(self.do)

    @property
    def pinned_map(self) -> dict:
        return dict(self.pinned)

    @property
    def conditional(self) -> bool:
        return bool(self.given)

    def signature(self) -> tuple:
        return (self.outcomes, self.do, self.given, self.pinned)

    def describe(self) -> str:
        out = ",".join(sorted(self.outcomes))
        ctx = ",".join(str(t) for _, t in self.do)
        s = f"{{{out}}}" + (f"({ctx})" if ctx else "")
        if self.given:
            pin = self.pinned_map
            conds = [f"{v}={pin[v]}" if v in pin else v for v in sorted(self.given)]
            s += " | " + ",".join(conds)
        return f"p({s})"

    def to_json(self) -> dict:
        doc = {"outcomes": sorted(self.outcomes), "do": dict(self.do), "given": sorted(self.given)}
        if self.pinned:
            doc["pinned"] = dict(self.pinned)
        if self.derivation is not None:
            doc["derivation"] = to_json(self.derivation)
        return doc


@dataclass(frozen=True)
class Query:
    y: frozenset[str]
    a: Assignment = ()

    def __post_init__(self):
        object.__setattr__(self, "y", frozenset(self.y))
        object.__setattr__(self, "a", as_assignment(self.a))

    @property
    def a_map(self) -> dict:
        return dict(self.a)

    def describe(self) -> str:
        ctx = ",".join(str(t) for _, t in self.a)
        return "p({" + ",".join(sorted(self.y)) + "}" + (f"({ctx})" if ctx else "") + ")"


@dataclass
class DistrictRecord:
    district: tuple[str, ...]
    input_id: int
    method: str
    sequence: tuple[str, ...]
    steps: list
    kernel: Expr
    z_d: tuple[str, ...] | None = None
    d_bar: tuple[str, ...] | None = None

    def to_json(self) -> dict:
        doc = {"district": list(self.district), "input": self.input_id, "method": self.method,
               "sequence": list(self.sequence),
               "steps": [[k, list(v)] for k, v in self.steps],
               "kernel": render(self.kernel)}
        if self.z_d is not None:
            doc["z_d"] = list(self.z_d)
            doc["d_bar"] = list(self.d_bar)
        return doc


@dataclass
class Attempt:
    y_prime: tuple[str, ...]
    identified: bool
    failed: list[tuple[str, ...]]
    reasons: dict[tuple[str, ...], list[tuple[int, str]]]

    def to_json(self) -> dict:
        return {"y_prime": list(self.y_prime), "identified": self.identified,
                "failed_districts": [list(d) for d in self.failed],
                "reasons": {",".join(d): [[i, r] for i, r in rs] for d, rs in sorted(self.reasons.items())}}


@dataclass
class IdentResult:
    status: Status
    algorithm: str
    query: Query
    formula: Expr | None = None
    y_prime: tuple[str, ...] | None = None
    provenance: list[DistrictRecord] = field(default_factory=list)
    attempts: list[Attempt] = field(default_factory=list)
    witness: list[tuple[str, ...]] = field(default_factory=list)
    inputs: list[InputDist] = field(default_factory=list)
    closure_log: list[dict] = field(default_factory=list)
    free: tuple[str, ...] = ()
    order: tuple[str, ...] = ()
    reason: str = ""

    @property
    def identified(self) -> bool:
        return self.status is Status.IDENTIFIED

    def render(self, fmt: str = "text", do_form: bool = False) -> str:
        if self.formula is None:
            return ""
        return render(self.formula, fmt, do_form=do_form, order=self.order)

    def to_json(self, fmt: str = "text") -> dict:
        doc = {
            "status": self.status.value,
            "algorithm": self.algorithm,
            "query": self.query.describe(),
            "formula": None if self.formula is None else self.render("text"),
            "formula_tree": None if self.formula is None else to_json(self.formula),
            "y_prime": None if self.y_prime is None else list(self.y_prime),
            "free_variables": list(self.free),
            "provenance": [r.to_json() for r in self.provenance],
            "attempts": [a.to_json() for a in self.attempts],
            "witness": [list(d) for d in self.witness],
            "inputs": [dict(z.to_json(), id=z.id, text=z.describe()) for z in self.inputs],
            "closure_log": self.closure_log,
        }
        if fmt == "latex" and self.formula is not None:
            doc["formula_latex"] = self.render("latex")
        if self.reason:
            doc["reason"] = self.reason
        return doc


# validation


def _check_assignment(g: MixedGraph, a: Assignment, what: str):
    for k, tok in a:
        if k not in g.random:
            raise InputError(f"{what} names unknown vertex {k!r}")
        check_token(tok)


def validate_query(g: MixedGraph, q: Query):
    if g.fixed:
        raise InputError("identification needs a graph without fixed vertices")
    if not q.y:
        raise InputError("query outcome set is empty")
    bad = q.y - g.random
    if bad:
        raise InputError(f"query outcome {sorted(bad)[0]!r} is not a vertex")
    _check_assignment(g, q.a, "query intervention")
    both = q.y & set(q.a_map)
    if both:
        raise InputError(f"query variable {sorted(both)[0]!r} is both outcome and intervened on")


def validate_inputs(g: MixedGraph, z: Sequence[InputDist]):
    ids = set()
    for inp in z:
        if inp.id in ids:
            raise InputError(f"duplicate input id {inp.id}")
        ids.add(inp.id)
        if not inp.outcomes:
            raise InputError(f"input {inp.id} has no outcome variables")
        for s, name in ((inp.outcomes, "outcome"), (inp.given, "conditioning")):
            bad = s - g.random
            if bad:
                raise InputError(f"input {inp.id} {name} variable {sorted(bad)[0]!r} is not a vertex")
        _check_assignment(g, inp.do, f"input {inp.id} intervention")
        keys = set(inp.do_map)
        if inp.outcomes & inp.given or (inp.outcomes | inp.given) & keys:
            raise InputError(f"input {inp.id}: outcomes, conditioning and intervened sets must be disjoint")
        bad = set(inp.pinned_map) - inp.given
        if bad:
            raise InputError(f"input {inp.id} pins {sorted(bad)[0]!r}, which is not a conditioning variable")
        for _, tok in inp.pinned:
            check_token(tok)


def _validate_full(g: MixedGraph, z: Sequence[InputDist]):
    for inp in z:
        if inp.given or inp.outcomes | set(inp.do_map) != g.random:
            raise InputError(
                f"input {inp.id} {inp.describe()} is not a full joint over the non-intervened vertices; "
                "use aid, mid or eid for marginal or conditional inputs")


def _validate_marginal(z: Sequence[InputDist], algo: str):
    for inp in z:
        if inp.given:
            raise InputError(f"input {inp.id} {inp.describe()} is conditional; {algo} needs marginal inputs (use eid)")


def _validate_ancestral(g: MixedGraph, z: Sequence[InputDist]):
    _validate_marginal(z, "aid")
    for inp in z:
        sg = split(g, inp.do_map).graph
        bad = ancestral_violation(sg, inp.outcomes)
        if bad is not None:
            v, anc = bad
            raise InputError(
                f"input {inp.id} {inp.describe()} is not ancestral: {anc!r} is a random ancestor of {v!r} "
                "in its intervened graph; use mid or eid")


# display labelling


def input_ref(g: MixedGraph, inp: InputDist) -> DistRef:
    """Reference to ``inp`` whose display shows only the interventions upstream of each variable."""
    sg = split(g, inp.do_map).graph
    disp = []
    for v in sorted(inp.outcomes | inp.given):
        anc = ancestors(sg, {v})
        disp.append((v, tuple((k, t) for k, t in inp.do if fixed_label(k, t) in anc)))
    return DistRef(inp.id, inp.outcomes, inp.do, inp.given, inp.pinned, tuple(disp))


# per-district machinery


class _Context:
    """Caches graphs shared by the district searches of one query."""

    def __init__(self, g: MixedGraph, q: Query):
        self.g = g
        self.q = q
        self.a = q.a_map
        self._input_graphs: dict[int, MixedGraph] = {}
        self._refs: dict[int, DistRef] = {}

    def input_graph(self, inp: InputDist) -> MixedGraph:
        if inp.id not in self._input_graphs:
            self._input_graphs[inp.id] = marginal_swig(self.g, inp.do_map, inp.outcomes | inp.given).graph
        return self._input_graphs[inp.id]

    def ref(self, inp: InputDist) -> DistRef:
        if inp.id not in self._refs:
            self._refs[inp.id] = input_ref(self.g, inp)
        return self._refs[inp.id]


def _guard(ctx: _Context, inp: InputDist, gi: MixedGraph, d: frozenset[str],
           target: MixedGraph, match: bool) -> str | None:
    """Reason the input cannot supply district ``d`` of ``target``, or None."""
    for k, t in inp.do + inp.pinned:
        if k in ctx.a and ctx.a[k] != t:
            return f"input level {k}={t} disagrees with the query level {k}={ctx.a[k]}"
    pa_in = strict_parents(gi, d)
    for p in sorted(pa_in):
        if is_intervention_half(p) and p not in target.fixed:
            return f"input holds {p} but the query does not"
    pin = inp.pinned_map
    for p in sorted(pa_in & inp.given):
        if p in pin:
            if ctx.a.get(p) != pin[p]:
                return f"conditioning {p}={pin[p]} is a parent of the district but the query does not set {p} to it"
    if match:
        pa_t = strict_parents(target, d)
        bi = {base_label(p) for p in pa_in}
        bt = {base_label(p) for p in pa_t}
        if bi != bt:
            return f"strict parents differ: input {sorted(bi)} vs target {sorted(bt)}"
    return None


def _try_marginal(ctx: _Context, inp: InputDist, d: frozenset[str], target: MixedGraph,
                  match: bool) -> DistrictRecord | str:
    gi = ctx.input_graph(inp)
    if not d <= gi.random:
        return "district not covered by the input outcomes"
    r = reach(gi, d)
    if r is None or len(districts(r.graph)) != 1:
        return "district is not intrinsic in the input graph"
    reason = _guard(ctx, inp, gi, d, target, match)
    if reason:
        return reason
    deriv = intrinsic_kernel(Base(ctx.ref(inp)), gi, d)
    return DistrictRecord(tuple(sorted(d)), inp.id, "fixing", r.sequence, deriv.steps,
                          simplify(deriv.kernel))


def _subsets_by_size(pool: Sequence[str]):
    for k in range(len(pool) + 1):
        for combo in itertools.combinations(pool, k):
            yield frozenset(combo)


def selection_kernel(g_in: MixedGraph, base: Expr, c: frozenset[str], d: frozenset[str],
                     z_d: frozenset[str], d_bar: frozenset[str], pinned: Mapping | None = None):
    """Kernel for ``d`` from a conditional input via a given ``z_d`` and ``d_bar``.

    Returns (kernel, s-fixing sequence, steps) or None when the pair is not
    admissible: ``z_d`` must be s-fixable with ``d_bar`` last, ``d_bar`` must
    be a district once the rest of ``z_d`` is fixed, and ``d`` must be
    intrinsic in the graph where only ``d_bar`` is random.
    """
    seq = find_s_fixing_sequence(g_in, z_d, c, d_bar)
    if seq is None:
        return None
    prefix = seq[: len(z_d) - len(d_bar)]
    k, h = base, g_in
    for v in prefix:
        k = s_fix_kernel(k, v, c, pinned, h)
        h = s_fix_graph(h, v, c)
    if d_bar not in districts(h):
        return None
    hd = restrict_to(h, d_bar)
    if not is_intrinsic(hd, d):
        return None
    # blankets are taken in an order that puts the conditioned set early
    qbar = district_factor(k, h, d_bar, priority=ancestors(h, c))
    deriv = intrinsic_kernel(qbar, hd, d)
    steps = [("s-fix", tuple(prefix)), ("district", tuple(sorted(d_bar)))] + deriv.steps
    return simplify(deriv.kernel), seq, steps


def _try_selection(ctx: _Context, inp: InputDist, d: frozenset[str], target: MixedGraph,
                   match: bool) -> DistrictRecord | str:
    h = ctx.input_graph(inp)
    c = inp.given
    if not d <= inp.outcomes:
        return "district not covered by the input outcomes"
    if descendants(h, d) & c:
        return f"conditioned {sorted(descendants(h, d) & c)} descends from the district"
    reason = _guard(ctx, inp, h, d, target, match)
    if reason:
        return reason
    base = Base(ctx.ref(inp))
    extra = sorted(inp.outcomes - d)
    for add in _subsets_by_size(extra):
        z_d = d | add
        for bar_add in _subsets_by_size(sorted(add)):
            d_bar = d | bar_add
            got = selection_kernel(h, base, c, d, z_d, d_bar, inp.pinned_map)
            if got is None:
                continue
            kernel, seq, steps = got
            return DistrictRecord(tuple(sorted(d)), inp.id, "selection", seq, steps, kernel,
                                  tuple(sorted(z_d)), tuple(sorted(d_bar)))
    return "no admissible Z_D, D-bar pair"


def _yprime_candidates(y: frozenset[str], ys: frozenset[str]) -> list[frozenset[str]]:
    extra = sorted(ys - y)
    if len(extra) > MAX_YSTAR_EXTRA:
        raise ResourceError(
            f"margin search over {len(extra)} extra ancestors exceeds the limit {MAX_YSTAR_EXTRA}")
    out = []
    for k in range(len(extra), -1, -1):
        for combo in itertools.combinations(extra, k):
            out.append(y | frozenset(combo))
    return out


def _solve(g: MixedGraph, z: Sequence[InputDist], q: Query, algorithm: str, *,
           search_margin: bool, match: bool, fail_status: Status,
           closure_log: list | None = None) -> IdentResult:
    ctx = _Context(g, q)
    ys = ystar(g, q.y, q.a_map)
    cands = _yprime_candidates(q.y, ys) if search_margin else [ys]
    order = tuple(topological_order(g))
    attempts: list[Attempt] = []
    for yp in cands:
        target = marginal_swig(g, q.a_map, yp).graph
        records, failed, reasons = [], [], {}
        for d in districts(target):
            key = tuple(sorted(d))
            why = []
            rec = None
            for inp in z:
                if inp.conditional:
                    r = _try_selection(ctx, inp, d, target, match)
                else:
                    r = _try_marginal(ctx, inp, d, target, match)
                if isinstance(r, DistrictRecord):
                    rec = r
                    break
                why.append((inp.id, r))
            if rec is None:
                failed.append(key)
                reasons[key] = why
                if search_margin and yp != cands[0]:
                    break
            else:
                records.append(rec)
        attempts.append(Attempt(tuple(sorted(yp)), not failed, failed, reasons))
        if failed:
            continue
        terms = []
        for rec in records:
            k = rec.kernel
            terms.append(eval_at(k, {v: t for v, t in q.a if v in k.free}))
        formula = simplify(marginalize(product(terms), yp - q.y))
        return IdentResult(Status.IDENTIFIED, algorithm, q, formula, tuple(sorted(yp)), records,
                           attempts, [], list(z), closure_log or [],
                           tuple(sorted(formula.given)), order)
    witness = attempts[0].failed if attempts else []
    return IdentResult(fail_status, algorithm, q, None, None, [], attempts, witness, list(z),
                       closure_log or [], (), order,
                       reason="no admissible input for district(s) " +
                              "; ".join(",".join(d) for d in witness))


def full_observational(g: MixedGraph, id: int = 0) -> InputDist:
    return InputDist(g.random, (), frozenset(), (), id)


def id_classic(g: MixedGraph, q: Query) -> IdentResult:
    """Identification from the observational joint alone."""
    validate_query(g, q)
    return _solve(g, [full_observational(g)], q, "id", search_margin=False, match=False,
                  fail_status=Status.NOT_IDENTIFIED)


def g_id(g: MixedGraph, z: Sequence[InputDist], q: Query) -> IdentResult:
    """Identification from full joints under (possibly empty) interventions."""
    validate_query(g, q)
    validate_inputs(g, z)
    _validate_full(g, z)
    return _solve(g, z, q, "gid", search_margin=False, match=False,
                  fail_status=Status.NOT_IDENTIFIED)


def a_id(g: MixedGraph, z: Sequence[InputDist], q: Query) -> IdentResult:
    """Identification from ancestral marginal inputs."""
    validate_query(g, q)
    validate_inputs(g, z)
    _validate_ancestral(g, z)
    return _solve(g, z, q, "aid", search_margin=False, match=False,
                  fail_status=Status.NOT_IDENTIFIED)


def m_id(g: MixedGraph, z: Sequence[InputDist], q: Query) -> IdentResult:
    """Identification from arbitrary marginal inputs, searching over margins ``Y'``."""
    validate_query(g, q)
    validate_inputs(g, z)
    _validate_marginal(z, "mid")
    return _solve(g, z, q, "mid", search_margin=True, match=True, fail_status=Status.UNKNOWN)


def selection_id(g: MixedGraph, inp: InputDist, q: Query) -> IdentResult:
    """Identification from one conditional input over the margin ``Y*``."""
    validate_query(g, q)
    validate_inputs(g, [inp])
    ys = ystar(g, q.y, q.a_map)
    sg = split(g, inp.do_map).graph
    clash = descendants(sg, ys) & inp.given
    if clash:
        return IdentResult(Status.NOT_APPLICABLE, "selection", q, inputs=[inp],
                           reason=f"conditioned {sorted(clash)} descends from Y*")
    pa = parents(g, ys)
    a = q.a_map
    for k, tok in list(inp.do) + list(inp.pinned):
        if k in pa and k in a and a[k] != tok:
            return IdentResult(Status.NOT_APPLICABLE, "selection", q, inputs=[inp],
                               reason=f"input level {k}={tok} disagrees with the query level {k}={a[k]}")
    return _solve(g, [inp], q, "selection", search_margin=False, match=True,
                  fail_status=Status.UNKNOWN)


# chain-rule closure


def _expr_of(g: MixedGraph, inp: InputDist) -> Expr:
    return inp.derivation if inp.derivation is not None else Base(input_ref(g, inp))


def chain_rule_close(z: Sequence[InputDist], g: MixedGraph, max_rounds: int = 3,
                     log: list | None = None) -> list[InputDist]:
    """Append inputs obtained by composing conditional inputs via the chain rule.

    For a conditional input ``p(S | C1, C2)`` and another input giving
    ``p(C1 | K)`` in the same intervention world with ``K ⊆ C2``, the product
    ``p(S, C1 | C2)`` is added when ``C1`` is m-separated from ``C2 \\ K``
    given ``K`` in that world's split graph. Every attempted certification is
    written to ``log``.
    """
    log = [] if log is None else log
    out = list(z)
    seen = {inp.signature() for inp in out}
    next_id = max((inp.id for inp in out), default=-1) + 1
    for rnd in range(max_rounds):
        added = False
        snapshot = list(out)
        for i in snapshot:
            if not i.given:
                continue
            pin_i = i.pinned_map
            for c1 in _subsets_by_size(sorted(i.given)):
                if not c1 or c1 & set(pin_i):
                    continue
                c2 = i.given - c1
                for j in snapshot:
                    if j.id == i.id or j.do != i.do or not c1 <= j.outcomes:
                        continue
                    if not j.given <= c2:
                        continue
                    pin_j = j.pinned_map
                    if any(v not in pin_i or pin_i[v] != t for v, t in pin_j.items()):
                        continue
                    k = j.given | ((j.outcomes - c1) & c2)
                    rest = c2 - k
                    sg = split(g, i.do_map).graph
                    if rest:
                        holds = m_separated(sg, c1, rest, k)
                    else:
                        holds = True
                    entry = {
                        "round": rnd + 1, "target": i.id, "source": j.id,
                        "moved": sorted(c1), "kept": sorted(c2),
                        "statement": (f"{','.join(sorted(c1))} ⊥ {','.join(sorted(rest))} | "
                                      f"{','.join(sorted(k))}" if rest else "none needed"),
                        "context": dict(i.do), "holds": holds,
                    }
                    new = InputDist(i.outcomes | c1, i.do, c2,
                                    tuple((v, t) for v, t in i.pinned if v in c2), next_id)
                    if new.signature() in seen:
                        continue
                    if not holds:
                        entry["result"] = "rejected"
                        log.append(entry)
                        continue
                    part = conditional_of(_expr_of(g, j), c1, k)
                    pins = {v: pin_i[v] for v in part.free if v in pin_i}
                    part = eval_at(part, pins)
                    deriv = product([_expr_of(g, i), part])
                    new = InputDist(new.outcomes, new.do, new.given, new.pinned, next_id, deriv)
                    entry["result"] = f"added input {next_id}: {new.describe()}"
                    log.append(entry)
                    out.append(new)
                    seen.add(new.signature())
                    next_id += 1
                    added = True
        if not added:
            break
    return out


def e_id(g: MixedGraph, z: Sequence[InputDist], q: Query, max_rounds: int = 3) -> IdentResult:
    """Identification from marginal and conditional inputs after chain-rule closure."""
    validate_query(g, q)
    validate_inputs(g, z)
    log: list = []
    closed = chain_rule_close(z, g, max_rounds, log)
    return _solve(g, closed, q, "eid", search_margin=True, match=True,
                  fail_status=Status.UNKNOWN, closure_log=log)


def choose_algorithm(g: MixedGraph, z: Sequence[InputDist]) -> str:
    """Narrowest algorithm whose input preconditions the menu meets."""
    if not z or all(not i.given and not i.do and i.outcomes == g.random for i in z):
        return "id"
    try:
        _validate_full(g, z)
        return "gid"
    except InputError:
        pass
    try:
        _validate_ancestral(g, z)
        return "aid"
    except InputError:
        pass
    try:
        _validate_marginal(z, "mid")
        return "mid"
    except InputError:
        return "eid"


def identify(g: MixedGraph, z: Sequence[InputDist], q: Query, algorithm: str = "auto") -> IdentResult:
    if algorithm == "auto":
        algorithm = choose_algorithm(g, z)
    if algorithm == "id":
        if z and not all(not i.given and not i.do and i.outcomes == g.random for i in z):
            raise InputError("id uses only the observational joint; use gid, aid, mid or eid")
        return id_classic(g, q)
    if algorithm == "gid":
        return g_id(g, z, q)
    if algorithm == "aid":
        return a_id(g, z, q)
    if algorithm == "mid":
        return m_id(g, z, q)
    if algorithm == "eid":
        return e_id(g, z, q)
    raise InputError(f"unknown algorithm {algorithm!r}; expected auto or one of {ALGORITHMS}")
