import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from tetration.basekit import (
    DomainError,
    EvalResult,
    Status,
    cexpm1,
    iter_exp,
    make_base,
    q_analog,
    q_power,
)

bases = st.one_of(st.floats(0.05, 0.95), st.floats(1.05, 3.0))


def test_base_constants_r2():
    ctx = make_base(2.0)
    assert ctx.q.real == pytest.approx(math.log(2.0), rel=1e-15)
    assert ctx.s.real == pytest.approx(O.S_2, rel=1e-14)
    assert ctx.omega.real == pytest.approx(O.OMEGA_2, rel=1e-14)
    assert ctx.is_real_base and not ctx.q_near_one


def test_omega_limit_at_e():
    ctx = make_base(math.e)
    assert ctx.omega == 1.0
    assert ctx.q_near_one
    # approaching e from either side stays continuous
    for r in (math.e * (1 + 1e-9), math.e * (1 - 1e-9)):
        assert abs(make_base(r).omega - 1.0) < 1e-8


@pytest.mark.parametrize("bad", [0.0, 1.0, math.inf, math.nan])
def test_rejected_bases(bad):
    with pytest.raises(DomainError):
        make_base(bad)


def test_require_real():
    with pytest.raises(DomainError):
        make_base(-2.0)
    with pytest.raises(DomainError):
        make_base(1j)
    ctx = make_base(-2.0, require_real=False)
    assert not ctx.is_real_base
    assert ctx.q == cmath.log(-2.0)


def test_q_analog_examples():
    ctx = make_base(2.0)
    assert q_analog(0.0, ctx) == 0
    assert q_analog(1.0, ctx) == pytest.approx(1.0, abs=1e-15)
    assert q_analog(0.5, ctx).real == pytest.approx(O.QANALOG_HALF_2, rel=1e-14)
    assert q_analog(0.5, make_base(math.e)) == 0.5


def test_cexpm1_small_and_real():
    w = complex(1e-12, 2e-12)
    assert cexpm1(w) == pytest.approx(w, rel=1e-11)
    assert cexpm1(complex(0.3, 0.0)).imag == 0.0
    assert cexpm1(complex(0.4, 1.3)) == pytest.approx(cmath.exp(complex(0.4, 1.3)) - 1, rel=1e-15)


def test_q_power():
    ctx = make_base(2.0)
    assert q_power(2.0, ctx).real == pytest.approx(math.log(2.0) ** 2, rel=1e-15)


def test_iter_exp_examples():
    ctx = make_base(2.0)
    assert iter_exp(ctx, 0, 0.7).value == 0.7
    assert iter_exp(ctx, 2, 1.0).value == pytest.approx(4.0, rel=1e-15)
    assert iter_exp(ctx, -1, 4.0).value == pytest.approx(2.0, rel=1e-15)
    v = iter_exp(ctx, -1, -1.0).value
    assert v.real == pytest.approx(0.0, abs=1e-15)
    assert v.imag == pytest.approx(O.LOG2_OF_MINUS1_IM, rel=1e-14)


def test_iter_exp_overflow_and_log_zero():
    ctx = make_base(3.0)
    res = iter_exp(ctx, 5, 1.0)
    assert res.status is Status.OVERFLOW_POS and math.isinf(res.value.real)
    assert iter_exp(ctx, -1, 0.0).status is Status.DOMAIN_ERROR
    neg = iter_exp(make_base(2.0), 1, complex(2000.0, math.pi / math.log(2.0)))
    assert neg.status is Status.OVERFLOW_NEG


def test_eval_result_helpers():
    assert EvalResult(1 + 0j).ok
    bad = EvalResult.domain_error("x")
    assert not bad.ok and math.isnan(bad.value.real)
    assert complex(EvalResult(2j)) == 2j


@settings(max_examples=200, deadline=None)
@given(r=bases, x=st.floats(-3.0, 3.0))
def test_q_analog_shift_identity(r, x):
    ctx = make_base(r)
    lhs = q_analog(x + 1.0, ctx)
    rhs = 1.0 + ctx.q * q_analog(x, ctx)
    assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs))


@settings(max_examples=200, deadline=None)
@given(r=st.floats(1.01, 3.0), x=st.floats(-3.0, 3.0))
def test_q_analog_real_for_real_base_above_one(r, x):
    if abs(r - math.e) < 1e-6:
        r += 1e-3
    assert q_analog(x, make_base(r)).imag == 0.0


@settings(max_examples=100, deadline=None)
@given(r=st.floats(1.1, 2.0), n=st.integers(-2, 2), m=st.integers(-2, 2), f=st.floats(0.5, 1.5))
def test_iter_exp_composes(r, n, m, f):
    ctx = make_base(r)
    inner = iter_exp(ctx, m, f)
    if not inner.ok:
        return
    a = iter_exp(ctx, n, inner.value)
    b = iter_exp(ctx, n + m, f)
    if a.ok and b.ok:
        assert abs(a.value - b.value) <= 1e-12 * max(1.0, abs(b.value))


def test_q_analog_continuity_across_e():
    for r in (math.e * (1 + 1e-9), math.e * (1 - 1e-9)):
        ctx = make_base(r)
        for x in (-1.5, 0.3, 2.2):
            assert abs(q_analog(x, ctx) - x) < 1e-7
