from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from b2p1.oracle import golden
from b2p1.oracle.derive import (ORDERINGS, derive_eta, derive_scalar_equation, derive_unreduced,
                                zeroth_order_replace)
from b2p1.oracle.plan import EvaluationPlan, emit_evaluator, evaluate_plan
from b2p1.oracle.printed import case1_scalar_unreduced, printed_eta, printed_scalar
from b2p1.oracle.termsum import (DerivativeOrderError, TermSum, diff_termsums, parse_params,
                                 parse_symbol, params_name, symbol_name)
from b2p1.params import Regime

T = TermSum.term
W1 = (1, 1, 1, 1, 0)

# -- strategies ----------------------------------------------------------------

_factor = st.tuples(st.sampled_from(["f", "eta"]), st.integers(0, 2), st.integers(0, 2),
                    st.integers(0, 1))
_exps = st.tuples(st.integers(0, 2), st.integers(0, 1), st.integers(0, 1), st.integers(0, 1),
                  st.just(0))
_term = st.tuples(_exps, st.lists(_factor, min_size=1, max_size=2).map(tuple),
                  st.fractions(-3, 3, max_denominator=4))
sums = st.lists(_term, max_size=4).map(TermSum.from_items)


# -- algebra -------------------------------------------------------------------

def test_product_rule_example():
    fx = TermSum.symbol("f_x")
    assert (fx * fx).diff("x") == T(2, "1", "f_x", "f_2x")


def test_truncate_example():
    a = T(1, "alpha", "f_t")
    b = T(1, "beta", "f_2xt")
    assert not a.multiply(b).truncate(W1, 1)


def test_inversion_trick():
    u = T(1, "alpha*beta", "f_2xt")
    prod = (TermSum.one() - u).multiply(TermSum.one() + u, W1, 2)
    assert prod == TermSum.one()


@given(sums, sums)
@settings(max_examples=60, deadline=None)
def test_diff_is_a_derivation(a, b):
    for ax in "xyt":
        assert (a * b).diff(ax) == a.diff(ax) * b + a * b.diff(ax)


@given(sums, sums, st.integers(0, 4))
@settings(max_examples=60, deadline=None)
def test_truncate_idempotent_and_additive(a, b, k):
    assert a.truncate(W1, k).truncate(W1, k) == a.truncate(W1, k)
    assert (a + b).truncate(W1, k) == a.truncate(W1, k) + b.truncate(W1, k)


@given(sums)
@settings(max_examples=40, deadline=None)
def test_self_diff_empty_and_normal_form(a):
    assert not diff_termsums(a, a)
    assert TermSum.from_items(list(a)[::-1]) == a


def test_derivative_order_overflow():
    with pytest.raises(DerivativeOrderError):
        TermSum.symbol("f_8x").diff("y")


@pytest.mark.parametrize("text,factor", [("f_2x2yt", ("f", 2, 2, 1)), ("h_y", ("h", 0, 1, 0)),
                                         ("eta", ("eta", 0, 0, 0))])
def test_symbol_roundtrip(text, factor):
    assert parse_symbol(text) == factor
    assert symbol_name(factor) == text


def test_param_parsing():
    assert parse_params("alpha^2*gamma/beta") == (2, -1, 1, 0, 0)
    assert parse_params("r*delta") == (0, -1, 1, 1, 0)
    assert params_name((2, -1, 1, 0, 0)) == "alpha^2*gamma/beta"
    with pytest.raises(ValueError):
        parse_params("kappa")


# -- derivations vs printed equations -----------------------------------------

def test_case1_unreduced_matches_printed():
    assert not diff_termsums(derive_unreduced(Regime.CASE1), case1_scalar_unreduced())


def test_case1_zeroth_order_replacement_step():
    reduced = zeroth_order_replace(case1_scalar_unreduced(), ORDERINGS[Regime.CASE1].weights)
    assert not diff_termsums(reduced, printed_scalar(Regime.CASE1))


def test_case1_scalar_empty_diff():
    assert not diff_termsums(derive_scalar_equation(Regime.CASE1), printed_scalar(Regime.CASE1))


def test_case3_scalar_diff_is_sixth_order_sign():
    d = diff_termsums(derive_scalar_equation(Regime.CASE3), printed_scalar(Regime.CASE3))
    assert d == T(Fraction(1, 60), "beta^2", "f_6x")


def test_case4_scalar_diff_is_enumerated():
    d = diff_termsums(derive_scalar_equation(Regime.CASE4), printed_scalar(Regime.CASE4))
    expected = (T(-1, "r*delta", "f_y", "h_y") + T(-1, "r*delta", "f_2y", "h")
                + T(1, "delta", "f_y", "h_y") + T(1, "delta", "f_2y", "h")
                + T(-2, "alpha^2*r", "f_x", "f_y", "f_xy") + T(4, "alpha^2", "f_x", "f_y", "f_xt"))
    assert d == expected


def test_case2_scalar_diff_contains_enumerated_items():
    d = diff_termsums(derive_scalar_equation(Regime.CASE2), printed_scalar(Regime.CASE2))
    assert d.coefficient("r*delta", "f_y", "h_h") == 1
    assert d.coefficient("delta", "f_x", "h") == 1
    assert d.coefficient("alpha^4*gamma/beta^4", "f_t", "f_x", "f_x2yt") == 1


@pytest.mark.parametrize("r", [Regime.CASE1, Regime.CASE3, Regime.CASE4])
def test_eta_recovery_matches_printed(r):
    assert not diff_termsums(derive_eta(r), printed_eta(r))


def test_case3st_has_no_scalar_equation():
    with pytest.raises(ValueError):
        derive_unreduced(Regime.CASE3ST)


# -- plans ---------------------------------------------------------------------

def test_empty_plan():
    plan = emit_evaluator(TermSum())
    assert len(plan) == 0 and plan.requests == ()


def test_single_term_plan():
    plan = emit_evaluator(T(1, "alpha", "f_t", "f_2x"))
    assert plan.requests == (("f", 0, 0, 1), ("f", 2, 0, 0))
    assert plan.terms[0].exps == (1, 0, 0, 0, 0) and plan.terms[0].coef == 1


def test_plan_json_roundtrip():
    plan = emit_evaluator(derive_scalar_equation(Regime.CASE4), "x")
    assert EvaluationPlan.from_json(plan.to_json()) == plan


def test_plan_evaluation(p01):
    plan = emit_evaluator(T(3, "alpha", "f_x", "f_x") + T(-1, "1", "f"))
    vals = {("f", 0, 0, 0): np.array([2.0]), ("f", 1, 0, 0): np.array([0.5])}
    assert evaluate_plan(plan, vals.__getitem__, p01)[0] == pytest.approx(3 * 0.1 * 0.25 - 2.0)


def test_golden_regeneration_is_byte_identical(tmp_path):
    written = golden.regenerate(tmp_path)
    assert len(written) == 16
    for path in written:
        assert path.read_bytes() == (golden.GOLDEN_DIR / path.name).read_bytes(), path.name
