import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from tetration import analysiskit as ak
from tetration.basekit import DomainError, make_base
from tetration.suites import noninteger_base_tower
from tetration.tetracore import tau, tau_complex_base, tau_complex_height

R2 = make_base(2.0)


def test_slog_examples():
    assert ak.slog(R2, 4.0).result == pytest.approx(2.0, abs=1e-14)
    assert ak.slog(R2, 1.0).result == 0.0
    assert ak.slog(R2, 0.0).result == -1.0
    assert ak.slog(R2, O.TAU_2_HALF).result == pytest.approx(O.SLOG_2_OF_TAU_HALF, abs=1e-13)
    sol = ak.slog(R2, 10.0)
    assert sol.lo <= sol.result <= sol.hi and sol.iterations <= 200


def test_slog_domain():
    with pytest.raises(DomainError):
        ak.slog(make_base(0.5), 0.3)
    with pytest.raises(DomainError):
        ak.slog(make_base(math.sqrt(2.0)), 2.5)  # above the fixed point 2
    with pytest.raises(DomainError):
        ak.slog(R2, math.inf)


def test_sroot_examples():
    assert ak.sroot(2.0, 4.0).result == pytest.approx(2.0, abs=1e-14)
    assert ak.sroot(1.0, 3.0).result == pytest.approx(3.0, abs=1e-14)
    assert ak.sroot(1.5, O.TAU_2_1P5).result == pytest.approx(O.SROOT_1P5_OF_TAU_2_1P5, abs=1e-13)
    assert ak.sroot(-0.5, tau(make_base(2.0), -0.5).value.real).result == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("h,v", [(-1.0, 0.5), (0.0, 2.0), (2.0, 0.5), (-0.5, 1.5)])
def test_sroot_domain(h, v):
    with pytest.raises(DomainError):
        ak.sroot(h, v)


@settings(max_examples=100, deadline=None)
@given(r=st.sampled_from([1.3, 2.0, math.e]), x=st.floats(-1.9, 3.0))
def test_slog_round_trip(r, x):
    ctx = make_base(r)
    assert ak.slog(ctx, tau(ctx, x).value.real).result == pytest.approx(x, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(h=st.sampled_from([-0.5, 0.5, 1.5, 2.0]), b=st.floats(1.1, 3.0))
def test_sroot_round_trip(h, b):
    v = tau(make_base(b), h).value.real
    assert ak.sroot(h, v).result == pytest.approx(b, abs=1e-9)


def test_cr_residual_examples():
    assert ak.cr_residual(lambda z: z, 0.3 + 0.2j).residual < 1e-12
    assert ak.cr_residual(lambda z: z.conjugate(), 0.3 + 0.2j).residual == pytest.approx(2.0, rel=1e-9)
    assert ak.cr_residual(lambda z: tau_complex_height(R2, z), 0.5 + 0.4j).residual < 1e-4
    with pytest.raises(DomainError):
        ak.cr_residual(lambda z: tau_complex_height(R2, z), 1e-5 + 0.4j)  # stencil hits Re z = 0
    with pytest.raises(ValueError):
        ak.cr_residual(lambda z: z, 0j, step=0.0)


def test_boundary_jumps():
    assert ak.boundary_jump(R2, 0, 0.0) < 1e-6
    assert ak.boundary_jump(R2, 0, 0.5) > 1e-3
    assert ak.boundary_jump(R2, 1, 1.0) > 1e-3


def test_boundary_limits_closed_form():
    left, right = ak.boundary_limits(R2, 0.5)
    assert left == pytest.approx(O.BOUNDARY_LEFT_2_Y05, rel=1e-13)
    assert right == pytest.approx(O.BOUNDARY_RIGHT_2_Y05, rel=1e-13)
    assert tau_complex_height(R2, complex(1e-9, 0.5)).value == pytest.approx(right, rel=1e-7)
    with pytest.raises(DomainError):
        ak.boundary_limits(make_base(math.e), 0.5)


def test_integer_tower_holomorphic_noninteger_not_on_cut():
    for n in (1, 2, 3):
        assert ak.cr_residual(lambda z: tau_complex_base(z, n), 1.2 + 0.1j).residual < 1e-4
    # non-integer heights: discontinuous across (0, 1), where ln z < 0
    assert ak.cr_residual(noninteger_base_tower, 0.5 + 0j).residual > 1e-2
    # away from branch cuts the q-analog seed is analytic in the base
    assert ak.cr_residual(noninteger_base_tower, 2.0 + 0.3j).residual < 1e-6


def test_symmetry():
    assert ak.symmetry_check(-0.5, 0.5) < 1e-10
    for x in (0.3, 2.0):
        lhs, rhs = ak.symmetry_sides(-1.0, x)
        assert lhs == 0 and rhs == pytest.approx(0.0, abs=1e-15)
        lhs, rhs = ak.symmetry_sides(0.0, x)
        assert lhs == 1 and rhs == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DomainError):
        ak.symmetry_check(-0.5, 1.0)
    with pytest.raises(DomainError):
        ak.symmetry_check(0.5, 2.0)


@settings(max_examples=80, deadline=None)
@given(h=st.floats(-0.99, -0.01), x=st.one_of(st.floats(0.1, 0.95), st.floats(1.2, 4.0)))
def test_symmetry_property(h, x):
    assert ak.symmetry_check(h, x) < 1e-10


def test_limit_probe():
    assert ak.limit_probe(1, 1e-8) == pytest.approx(1e-8, rel=1e-12)
    assert ak.limit_probe(2, 1e-8).real - 1.0 == pytest.approx(O.XX_1EM8_MINUS_1, rel=1e-8)
    assert abs(ak.limit_probe(3, 1e-8)) < 1e-6
    assert ak.limit_probe(-1, 1e-8) == 0
    with pytest.raises(DomainError):
        ak.limit_probe(2, 0.1)
    with pytest.raises(DomainError):
        ak.limit_probe(1.5, 1e-8)
