"""Inverses of tetration and numerical probes of its analytic structure."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .basekit import BaseContext, DomainError, EvalResult, make_base
from .tetracore import EULER_HIGH, tau, tau_complex_height, tau_inf

__all__ = [
    "BracketSolve",
    "CRReport",
    "slog",
    "sroot",
    "cr_residual",
    "boundary_jump",
    "boundary_limits",
    "symmetry_check",
    "symmetry_sides",
    "limit_probe",
]

MAX_BISECTIONS = 200
# integer heights tried when bracketing a value just below the fixed point
MAX_LADDER = 100_000
CR_STEP = 1e-5


@dataclass(frozen=True)
class BracketSolve:
    lo: float
    hi: float
    iterations: int
    result: float
    residual: float


@dataclass(frozen=True)
class CRReport:
    point: complex
    residual: float
    step: float


def _bisect(f: Callable[[float], float], lo: float, hi: float, f_lo_sign: int) -> tuple[float, float, float, int]:
    """Shrink ``[lo, hi]`` around a sign change of ``f`` to machine precision.

    ``f_lo_sign`` is the sign of ``f`` on the ``lo`` side (the endpoint
    itself may be unevaluable).  Returns ``(lo, hi, best, iterations)``.
    """
    best, best_abs = None, math.inf
    it = 0
    for it in range(1, MAX_BISECTIONS + 1):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            it -= 1
            break
        fm = f(mid)
        if abs(fm) < best_abs:
            best, best_abs = mid, abs(fm)
        if fm == 0.0:
            return mid, mid, mid, it
        if (fm > 0.0) == (f_lo_sign > 0):
            lo = mid
        else:
            hi = mid
    if best is None:
        best = 0.5 * (lo + hi)
    return lo, hi, best, it


def _real_value(res: EvalResult) -> float:
    if res.ok:
        return res.value.real
    if res.status.value == "overflow_pos":
        return math.inf
    if res.status.value == "overflow_neg":
        return -math.inf
    return math.nan


def slog(ctx: BaseContext, v: float) -> BracketSolve:
    """Super-logarithm: the height ``x > -2`` with ``^x r = v``.

    ``^x r`` is increasing in ``x`` for ``r > 1``.  The root is bracketed
    between consecutive integer heights and then bisected to machine
    precision.

    Raises
    ------
    DomainError
        For bases ``r <= 1`` and for ``v`` at or above the fixed point
        ``^inf r`` when ``r <= e**(1/e)``.
    """
    if not (ctx.is_real_base and ctx.real_r > 1.0):
        raise DomainError("slog needs a real base r > 1")
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"slog of non-finite value {v}")
    if v == 0.0:
        return BracketSolve(-1.0, -1.0, 0, -1.0, 0.0)
    if v == 1.0:
        return BracketSolve(0.0, 0.0, 0, 0.0, 0.0)
    r = ctx.real_r
    if r <= EULER_HIGH:
        t_inf = tau_inf(ctx)
        if t_inf.ok and v >= t_inf.value.real:
            raise DomainError(
                f"v = {v} is not below the fixed point {t_inf.value.real} of base {r}"
            )
    q = ctx.q.real
    # integer ladder: tau(-1) = 0, tau(k+1) = r**tau(k)
    k, val = -1, 0.0
    while val < v:
        if k >= MAX_LADDER:
            raise DomainError(f"v = {v} could not be bracketed below height {MAX_LADDER}")
        val = math.exp(q * val) if q * val < 709.0 else math.inf
        k += 1
    lo, hi = float(k - 1), float(k)

    def f(x: float) -> float:
        return _real_value(tau(ctx, x)) - v

    lo, hi, best, it = _bisect(f, lo, hi, -1)
    return BracketSolve(lo, hi, it, best, abs(f(best)))


def sroot(h: float, v: float) -> BracketSolve:
    """Super-root: the base ``x >= 1`` with ``^h x = v`` for a fixed height ``h > -1``.

    For ``h > 0`` the map ``x -> ^h x`` increases from 1 (its limit at
    ``x -> 1+``); for ``-1 < h < 0`` it decreases from 1 towards 0.

    Raises
    ------
    DomainError
        When ``v`` is not in the range of ``x -> ^h x`` on ``x > 1``.
    """
    h, v = float(h), float(v)
    if not h > -1.0:
        raise DomainError(f"sroot needs height h > -1, got {h}")
    if h == 0.0:
        raise DomainError("^0 x = 1 for every base; no super-root")
    if v == 1.0:
        return BracketSolve(1.0, 1.0, 0, 1.0, 0.0)
    increasing = h > 0.0
    if increasing and not v > 1.0:
        raise DomainError(f"for h = {h} the super-root needs v > 1, got {v}")
    if not increasing and not 0.0 < v < 1.0:
        raise DomainError(f"for h = {h} the super-root needs 0 < v < 1, got {v}")

    def f(x: float) -> float:
        return _real_value(tau(make_base(x), h)) - v

    lo, hi = 1.0, 2.0
    while (f(hi) > 0.0) != increasing:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise DomainError(f"v = {v} could not be bracketed")
    lo, hi, best, it = _bisect(f, lo, hi, -1 if increasing else 1)
    return BracketSolve(lo, hi, it, best, abs(f(best)))


def _call(f, z: complex) -> complex:
    out = f(z)
    if isinstance(out, EvalResult):
        if not out.ok:
            raise DomainError(f"stencil point {z} is invalid: {out.status.value}")
        out = out.value
    out = complex(out)
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise DomainError(f"stencil point {z} gave a non-finite value")
    return out


def cr_residual(f, z0, step: float = CR_STEP) -> CRReport:
    """Cauchy-Riemann defect of ``f`` at ``z0`` from central differences.

    ``residual = max(|u_x - v_y|, |u_y + v_x|)``.  ``f`` may return a
    complex number or an :class:`EvalResult`.
    """
    if not step > 0.0:
        raise ValueError("step must be positive")
    z0 = complex(z0)
    dx = _call(f, z0 + step) - _call(f, z0 - step)
    dy = _call(f, z0 + 1j * step) - _call(f, z0 - 1j * step)
    ux, vx = dx.real / (2 * step), dx.imag / (2 * step)
    uy, vy = dy.real / (2 * step), dy.imag / (2 * step)
    return CRReport(z0, max(abs(ux - vy), abs(uy + vx)), step)


def boundary_jump(ctx: BaseContext, n: int, y: float, eps: float = 1e-8) -> float:
    """``|^(n-eps+iy) r - ^(n+eps+iy) r|``, the jump across a segment boundary."""
    left = _call(lambda z: tau_complex_height(ctx, z), complex(n - eps, y))
    right = _call(lambda z: tau_complex_height(ctx, z), complex(n + eps, y))
    return abs(left - right)


def boundary_limits(ctx: BaseContext, y: float) -> tuple[complex, complex]:
    """Closed-form one-sided limits of ``^(x+iy) r`` as ``x -> 0``.

    From the left the seed segment tends to ``[1+iy]_q``, i.e.
    ``(q cos(sy) - 1 + i q sin(sy))/(q - 1)``; from the right the next
    segment tends to ``r**[iy]_q = exp(q (cos(sy) - 1 + i sin(sy))/(q - 1))``.
    Needs ``r > 1`` with ``r != e``.
    """
    if not (ctx.is_real_base and ctx.real_r > 1.0) or ctx.q_near_one:
        raise DomainError("closed-form limits need a real base r > 1, r != e")
    q, s = ctx.q.real, ctx.s.real
    c, sn = math.cos(s * y), math.sin(s * y)
    left = complex(q * c - 1.0, q * sn) / (q - 1.0)
    right = cmath.exp(q * complex(c - 1.0, sn) / (q - 1.0))
    return left, right


def symmetry_sides(h: float, x: float) -> tuple[complex, complex]:
    """Both sides of ``conj(^h x) = 1 - ^(-(1+h)) y`` with ``ln y = 1/ln x``."""
    if not -1.0 <= h <= 0.0:
        raise DomainError(f"symmetry needs -1 <= h <= 0, got {h}")
    if not x > 0.0:
        raise DomainError(f"symmetry needs x > 0, got {x}")
    if x == 1.0:
        raise DomainError("x = 1 has ln x = 0")
    try:
        y = math.exp(1.0 / math.log(x))
    except OverflowError:
        raise DomainError(f"partner base exp(1/ln {x}) overflows") from None
    left = tau(make_base(x), h)
    right = tau(make_base(y), -(1.0 + h))
    if not (left.ok and right.ok):
        raise DomainError(f"symmetry sides not evaluable at h={h}, x={x}")
    return left.value.conjugate(), 1.0 - right.value


def symmetry_check(h: float, x: float) -> float:
    """Residual ``|conj(^h x) - (1 - ^(-(1+h)) y)|`` with ``ln y = 1/ln x``."""
    lhs, rhs = symmetry_sides(h, x)
    return abs(lhs - rhs)


def limit_probe(n: int, x_small: float) -> complex:
    """``^n x`` at a small base, for watching the limit ``x -> 0+``.

    Even heights tend to 1 and odd heights to 0.
    """
    if int(n) != n or n < -1:
        raise DomainError(f"limit probe needs an integer height >= -1, got {n}")
    if not 0.0 < x_small <= 1e-4:
        raise DomainError(f"x_small must be in (0, 1e-4], got {x_small}")
    res = tau(make_base(x_small, require_real=False), int(n))
    if not res.ok:
        raise DomainError(f"evaluation failed: {res.status.value}")
    return res.value
