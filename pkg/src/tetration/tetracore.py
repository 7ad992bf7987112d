"""Closed-form continuous tetration ``^x r`` and the multi-tetrational product.

The height is split into an integer part ``n = floor(x)`` and a fractional
part ``f = x - n``; the value is ``exp_r^(n+1)`` applied to the seed
``[f]_q``.  At integer heights ``f == 0`` so the seed is 0 and the formula
reduces to the integer tower with no special casing.
"""
from __future__ import annotations

import cmath
import math

from .basekit import (
    BaseContext,
    DomainError,
    EvalResult,
    iter_exp,
    make_base,
    q_analog,
    q_power,
)

__all__ = [
    "VARIANTS",
    "split_height",
    "seed_value",
    "tau",
    "mu",
    "tau_prime",
    "tau_partials",
    "tau_complex_height",
    "tau_complex_base",
    "tau_inf",
    "EULER_LOW",
    "EULER_HIGH",
]

# "qanalog" is the default seed [f]_q; "linear" is the seed f used by the
# ultra exponential construction, which is C1 only at r = e.
VARIANTS = ("qanalog", "linear")

EULER_LOW = math.exp(-math.e)
EULER_HIGH = math.exp(1.0 / math.e)


def split_height(x: float) -> tuple[int, float]:
    """Return ``(floor(x), x - floor(x))`` with the fraction in ``[0, 1)``."""
    n = math.floor(x)
    frac = x - n
    if frac >= 1.0:
        # x just below an integer can round the fraction up to 1
        n += 1
        frac = 0.0
    return int(n), frac


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def seed_value(ctx: BaseContext, frac, variant: str = "qanalog") -> complex:
    """Value of the base segment ``^(frac-1) r`` for ``frac`` in ``[0, 1)``."""
    if variant == "linear":
        return complex(frac)
    return q_analog(frac, ctx)


def _seed_slope(ctx: BaseContext, frac: float, variant: str) -> complex:
    # d(seed)/d(frac)
    if variant == "linear":
        return complex(1.0, 0.0)
    return ctx.omega * q_power(frac - 1.0, ctx)


def _reject_low_integer(x: float) -> EvalResult | None:
    if x <= -2 and float(x).is_integer():
        return EvalResult.domain_error(f"height {x} is an integer <= -2")
    return None


def tau(ctx: BaseContext, x: float, variant: str = "qanalog") -> EvalResult:
    """Continuous tetration ``^x r = exp_r^(floor(x)+1) [{x}]_q``.

    Parameters
    ----------
    ctx : BaseContext
    x : float
        Height.  Integers ``<= -2`` are outside the domain.  Non-integer
        heights below -2 are evaluated with principal logarithms and are
        complex in general.
    variant : {"qanalog", "linear"}
        Seed used on the base segment.  "linear" reproduces the ultra
        exponential construction (equal to the default at ``r = e``).

    Returns
    -------
    EvalResult
    """
    _check_variant(variant)
    bad = _reject_low_integer(x)
    if bad is not None:
        return bad
    n, frac = split_height(x)
    return iter_exp(ctx, n + 1, seed_value(ctx, frac, variant))


def _mu_from_seed(ctx: BaseContext, n: int, seed: complex) -> EvalResult:
    if n == -1:
        return EvalResult(complex(1.0, 0.0))
    q = ctx.q
    if n >= 0:
        v = seed
        prod = complex(1.0, 0.0)
        for _ in range(n + 1):
            step = iter_exp(ctx, 1, v)
            if not step.ok:
                return step
            v = step.value
            prod *= v
            if not (math.isfinite(prod.real) and math.isfinite(prod.imag)):
                return EvalResult.overflow(prod.real >= 0 or math.isnan(prod.real))
        return EvalResult(prod)
    # n <= -2: extended product, 1 / (exp^0 seed * exp^-1 seed * ... * exp^(n+2) seed)
    v = seed
    denom = complex(1.0, 0.0)
    for k in range(-n - 1):
        if k:
            if v == 0:
                return EvalResult.domain_error("logarithm of zero in extended product")
            v = cmath.log(v) / q
        if v == 0:
            return EvalResult.domain_error("zero factor in extended product")
        denom *= v
    if denom == 0:
        return EvalResult.domain_error("extended product underflowed to zero")
    return EvalResult(1.0 / denom)


def mu(ctx: BaseContext, x: float, variant: str = "qanalog") -> EvalResult:
    """Multi-tetrational function ``prod_{k=0}^{floor(x)} exp_r^(k+1)[{x}]_q``.

    For ``floor(x) == -1`` the product is empty (value 1); for
    ``floor(x) <= -2`` the extended product is the reciprocal of the
    factors ``exp_r^j [{x}]_q`` for ``j = floor(x)+2 .. 0``.
    """
    _check_variant(variant)
    bad = _reject_low_integer(x)
    if bad is not None:
        return bad
    n, frac = split_height(x)
    return _mu_from_seed(ctx, n, seed_value(ctx, frac, variant))


def tau_prime(ctx: BaseContext, x: float, variant: str = "qanalog") -> EvalResult:
    """Height derivative of :func:`tau`.

    With the q-analog seed this is ``omega * q**x * mu(x)``.  In general it
    is ``seed'({x}) * q**(floor(x)+1) * mu(x)``, which is what the
    "linear" variant uses.
    """
    _check_variant(variant)
    m = mu(ctx, x, variant)
    if not m.ok:
        return m
    if variant == "qanalog":
        return EvalResult(ctx.omega * q_power(x, ctx) * m.value)
    n, frac = split_height(x)
    return EvalResult(_seed_slope(ctx, frac, variant) * q_power(n + 1, ctx) * m.value)


def _gen_binom(a: float, j: int) -> float:
    out = 1.0
    for i in range(j):
        out *= (a - i) / (i + 1)
    return out


def _dqanalog_dq(a: float, q: float) -> float:
    """d/dq of (q**a - 1)/(q - 1) for real q > 0."""
    eps = q - 1.0
    if abs(eps) < 0.05:
        # (q**a - 1)/(q - 1) = sum_k C(a, k+1) eps**k
        total = 0.0
        for k in range(1, 30):
            total += k * _gen_binom(a, k + 1) * eps ** (k - 1)
        return total
    qa = q**a
    return (a * q ** (a - 1.0) * eps - (qa - 1.0)) / (eps * eps)


def tau_partials(r: float, x: float) -> tuple[complex, complex]:
    """Partial derivatives of ``^x r`` with respect to base and height.

    Seeds the closed-form partials on ``[-1, 0)`` and carries them one
    unit-height segment at a time with the chain rule of
    ``^(x+1) r = exp(ln(r) * ^x r)`` (or its inverse below -1).

    Only the monotone region ``r > 1``, ``x > -2`` is supported.

    Returns
    -------
    (d_base, d_height) : tuple of complex

    Raises
    ------
    DomainError
    """
    if not (r > 1.0 and math.isfinite(r)):
        raise DomainError(f"tau_partials needs a real base r > 1, got {r!r}")
    if not x > -2.0:
        raise DomainError(f"tau_partials needs height x > -2, got {x!r}")
    ctx = make_base(r)
    q = ctx.q.real
    n, frac = split_height(x)
    # height frac - 1 on the seed segment
    t = q_analog(frac, ctx).real
    dt_dr = _dqanalog_dq(frac, q) / r
    dt_dx = (ctx.omega * q_power(frac - 1.0, ctx)).real
    if n == -2:
        if t <= 0.0:
            raise DomainError("seed value is not positive")
        t_lo = math.log(t) / q
        dt_dr = (dt_dr / t - t_lo / r) / q
        dt_dx = dt_dx / (q * t)
        t = t_lo
    for _ in range(n + 1):
        t_up = math.exp(q * t)
        dt_dr = t_up * (t / r + q * dt_dr)
        dt_dx = q * t_up * dt_dx
        t = t_up
    return complex(dt_dr), complex(dt_dx)


def tau_complex_height(ctx: BaseContext, z) -> EvalResult:
    """``^z r`` for a complex height ``z`` and real base.

    The seed is the q-analog at ``{Re z} + i Im z``, followed by
    ``floor(Re z) + 1`` exponentials (or logarithms).  Off the real axis
    the segment boundaries ``Re z in Z`` are excluded.
    """
    z = complex(z)
    if z.imag == 0.0:
        return tau(ctx, z.real)
    if float(z.real).is_integer():
        return EvalResult.domain_error(
            f"Re(z) = {z.real} lies on a segment boundary (Im(z) != 0)"
        )
    n, frac = split_height(z.real)
    seed = q_analog(complex(frac, z.imag), ctx)
    return iter_exp(ctx, n + 1, seed)


def tau_complex_base(z, n: int) -> EvalResult:
    """Integer tower ``^n z = exp_z^n 1`` for complex ``z`` (principal branch)."""
    if int(n) != n:
        raise DomainError(f"complex-base tetration needs an integer height, got {n!r}")
    n = int(n)
    if n < -1:
        return EvalResult.domain_error(f"height {n} < -1")
    if n == -1:
        return EvalResult(complex(0.0, 0.0))
    z = complex(z)
    if n == 0:
        return EvalResult(complex(1.0, 0.0))
    if z == 0:
        return EvalResult.domain_error("base z = 0")
    lz = cmath.log(z)
    v = complex(1.0, 0.0)
    for _ in range(n):
        w = v * lz
        try:
            v = cmath.exp(w)
        except OverflowError:
            return EvalResult.overflow(math.cos(w.imag) >= 0.0)
    return EvalResult(v)


def _fixed_point_residual(q: float, t: float) -> float:
    return t - math.exp(q * t)


def tau_inf(ctx: BaseContext, tol: float = 1e-12, max_iter: int = 20000) -> EvalResult:
    """Infinite tower ``^inf r``, the attracting solution of ``t = r**t``.

    Runs fixed-point iteration from ``t = 1`` (damped by 0.5 for ``r < 1``)
    and, when that stalls near the parabolic endpoint ``e**(1/e)``, finishes
    with bisection on ``t - r**t``.
    """
    if not ctx.is_real_base:
        return EvalResult.domain_error("tau_inf needs a real base")
    r = ctx.real_r
    if not (EULER_LOW <= r <= EULER_HIGH):
        return EvalResult.domain_error(
            f"r = {r} is outside the convergence interval [e^-e, e^(1/e)]"
        )
    q = ctx.q.real
    damping = 0.5 if r < 1.0 else 1.0
    t = 1.0
    for _ in range(max_iter):
        g = math.exp(q * t)
        if abs(t - g) < 0.1 * tol:
            break
        t = t + damping * (g - t)
    if abs(_fixed_point_residual(q, t)) < tol:
        return EvalResult(complex(t, 0.0))

    # bracket the attracting root of h(t) = t - r**t
    if r < 1.0:
        lo, hi = 0.0, 1.0  # h increasing, h(0) = -1, h(1) = 1 - r
    else:
        lo, hi = 1.0, -math.log(q) / q  # h(1) < 0, h maximal at hi
        if _fixed_point_residual(q, hi) <= 0.0:
            # tangency (r at the upper endpoint up to rounding)
            return EvalResult(complex(hi, 0.0))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _fixed_point_residual(q, mid) < 0.0:
            lo = mid
        else:
            hi = mid
    t = lo if abs(_fixed_point_residual(q, lo)) <= abs(_fixed_point_residual(q, hi)) else hi
    return EvalResult(complex(t, 0.0))

