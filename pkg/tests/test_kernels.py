from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causal_ident.errors import InputError, PositivityError
from causal_ident.fixing import intrinsic_kernel
from causal_ident.kernels import (
    UNIT,
    Base,
    DistRef,
    Marginal,
    Product,
    TabularDist,
    condition,
    conditional_of,
    eval_at,
    evaluate,
    from_json,
    marginalize,
    product,
    ratio,
    render,
    simplify,
    to_json,
)
from causal_ident.oracle import canonical_latent_dag, interventional, parameterize

VARS = ("A", "B", "C", "D")
CARDS = {"A": 2, "B": 3, "C": 2, "D": 2}
JOINT = Base(DistRef(0, frozenset(VARS)))
# p(A, B | C) with C free, and p(D | A) available at A = 1 only
COND = Base(DistRef(1, frozenset("AB"), given=frozenset("C")))
PINNED = Base(DistRef(2, frozenset("D"), given=frozenset("A"), pinned=(("A", 1),)))


def registry(rng: np.random.Generator) -> dict[int, TabularDist]:
    joint = rng.dirichlet(np.ones(24)).reshape(2, 3, 2, 2)
    cond = rng.dirichlet(np.ones(6), size=2).reshape(2, 2, 3).transpose(1, 2, 0)
    pin = rng.dirichlet(np.ones(2))
    return {
        0: TabularDist(VARS, (2, 3, 2, 2), joint),
        1: TabularDist(("A", "B", "C"), (2, 3, 2), cond, frozenset("C")),
        2: TabularDist(("D",), (2,), pin),
    }


def random_expr(rng: np.random.Generator, depth: int = 3):
    e = [JOINT, COND, PINNED][int(rng.integers(3))]
    for _ in range(depth):
        outs = sorted(e.outcomes)
        op = int(rng.integers(6))
        if len(outs) < 2:
            op = 5 if op < 4 else op
        if op == 0:
            k = int(rng.integers(1, len(outs)))
            e = marginalize(e, rng.choice(outs, k, replace=False).tolist())
        elif op == 1:
            k = int(rng.integers(1, len(outs)))
            e = condition(e, rng.choice(outs, k, replace=False).tolist())
        elif op == 2:
            v = str(rng.choice(outs))
            e = ratio(e, conditional_of(e, {v}, set(outs) - {v}))
        elif op == 3:
            s2 = set(rng.choice(outs, int(rng.integers(1, len(outs))), replace=False).tolist())
            e = product([conditional_of(e, set(outs) - s2, s2), marginalize(e, set(outs) - s2)])
        elif op == 4:
            e = ratio(e, e)
        else:
            free = sorted(e.given)
            if free:
                v = str(rng.choice(free))
                e = eval_at(e, {v: int(rng.integers(CARDS[v]))})
    return e


# constructors and rendering

def test_constructor_examples():
    p_ab = marginalize(JOINT, {"C", "D"})
    assert marginalize(JOINT, set()) is JOINT
    assert render(condition(p_ab, {"A"})) == "p(B | A)"
    with pytest.raises(InputError):
        marginalize(COND, {"C"})
    with pytest.raises(InputError):
        product([p_ab, marginalize(JOINT, {"B", "C", "D"})])
    with pytest.raises(InputError):
        eval_at(JOINT, {"Q": 0})


def test_render_counterfactual_and_latex():
    w = Base(DistRef(0, frozenset("W"), (("X1", "x1"),)))
    assert render(w) == "p(W(x_1))"
    assert render(w, do_form=True) == "p(W | do(X1=x_1))"
    assert render(w, "latex") == "p(W(x_{1}))"
    two = marginalize(Base(DistRef(0, frozenset("UWY"))), {"U", "W"})
    assert render(two).startswith("p(Y")
    y = conditional_of(Base(DistRef(1, frozenset("UWY"))), {"Y"}, {"U", "W"})
    uw = Base(DistRef(0, frozenset("UW")))
    assert render(Marginal(product([y, uw]), frozenset("UW"))) == "Σ_{U,W} p(U, W) p(Y | U, W)"
    assert render(Marginal(product([y, uw]), frozenset("UW")), order=["U", "W", "Y"]).startswith("Σ_{U,W} p(Y | U, W)")


def test_simplify_examples():
    e = marginalize(JOINT, {"A"})
    assert simplify(ratio(e, e)) == UNIT
    assert simplify(marginalize(marginalize(JOINT, {"A"}), {"B"})) == marginalize(JOINT, {"A", "B"})


def test_markov_rewrite_not_applied():
    # dropping a conditioning variable needs graphical reasoning, which simplify never does
    p = Base(DistRef(0, frozenset(VARS)))
    e = conditional_of(p, {"D"}, {"A", "B", "C"})
    s = simplify(e)
    assert s.given == {"A", "B", "C"}


def test_nested_factorization_product_is_joint(chain4):
    # q_A(A) q_C(C|B,A) q_{B,D}(B,D|C,A) reproduces p(A,B,C,D)
    parts = [simplify(intrinsic_kernel(JOINT, chain4, set(d)).kernel) for d in ("A", "C", "BD")]
    rng = np.random.default_rng(3)
    dag = canonical_latent_dag(chain4)
    for _ in range(5):
        param = parameterize(dag, rng)
        reg = {0: interventional(dag, param, VARS)}
        got = evaluate(product(parts), reg, {v: 2 for v in VARS})
        assert got.max_abs_diff(reg[0]) < 1e-12


# evaluation

def test_evaluate_base_is_table():
    reg = registry(np.random.default_rng(0))
    out = evaluate(JOINT, reg, CARDS)
    assert out.variables == VARS and np.array_equal(out.table, reg[0].table)


def test_zero_over_zero_flagged_and_strict():
    t = TabularDist(("A", "B"), (2, 2), np.array([[0.5, 0.5], [0.0, 0.0]]))
    e = condition(Base(DistRef(0, frozenset("AB"))), {"A"})
    out = evaluate(e, {0: t}, {"A": 2, "B": 2})
    assert out.flags and np.allclose(out.table[1], 0.0)
    with pytest.raises(PositivityError):
        evaluate(e, {0: t}, {"A": 2, "B": 2}, strict=True)


def test_nonzero_over_zero_raises():
    num = TabularDist(("A",), (2,), np.array([0.5, 0.5]))
    den = TabularDist(("A",), (2,), np.array([1.0, 0.0]))
    e = ratio(Base(DistRef(0, frozenset("A"))), Base(DistRef(1, frozenset(), given=frozenset("A"))))
    with pytest.raises(PositivityError, match="A=1"):
        evaluate(e, {0: num, 1: TabularDist(("A",), (2,), den.table, frozenset("A"))}, {"A": 2})


def test_missing_registry_entry():
    with pytest.raises(InputError):
        evaluate(JOINT, {}, CARDS)


# properties

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_simplify_preserves_evaluation(seed):
    rng = np.random.default_rng(seed)
    e = random_expr(rng, depth=int(rng.integers(1, 5)))
    reg = registry(rng)
    a = evaluate(e, reg, CARDS)
    b = evaluate(simplify(e), reg, CARDS)
    assert a.max_abs_diff(b) < 1e-12


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_chain_rule(seed):
    rng = np.random.default_rng(seed)
    e = random_expr(rng, depth=int(rng.integers(0, 3)))
    outs = sorted(e.outcomes)
    if len(outs) < 2:
        return
    s = set(rng.choice(outs, int(rng.integers(1, len(outs))), replace=False).tolist())
    reg = registry(rng)
    whole = evaluate(e, reg, CARDS)
    cond = evaluate(condition(e, s), reg, CARDS)
    marg = evaluate(marginalize(e, set(outs) - s), reg, CARDS)
    order = list(whole.variables)
    assert np.max(np.abs(cond.expand(order) * marg.expand(order) - whole.table)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_product_order_invariant(seed):
    rng = np.random.default_rng(seed)
    kids = [conditional_of(JOINT, {"D"}, {"A", "B", "C"}), conditional_of(JOINT, {"C"}, {"A", "B"}),
            marginalize(JOINT, {"C", "D"})]
    reg = registry(rng)
    base = evaluate(Product(tuple(kids)), reg, CARDS)
    for perm in ([2, 1, 0], [1, 2, 0]):
        other = evaluate(Product(tuple(kids[i] for i in perm)), reg, CARDS)
        assert np.array_equal(base.table, other.table)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_json_round_trip(seed):
    rng = np.random.default_rng(seed)
    e = random_expr(rng, depth=int(rng.integers(0, 5)))
    assert from_json(to_json(e)) == e
    assert from_json(render(e, "json")) == e


def test_json_rejects_garbage():
    with pytest.raises(InputError):
        from_json({"kind": "nope"})
    with pytest.raises(InputError):
        from_json({"kind": "ratio"})
