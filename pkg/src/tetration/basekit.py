"""Scalar substrate: validated bases, the q-analog and iterated exp/log.

Every value is carried as a Python ``complex``.  Real-only pipelines keep
``imag == 0.0`` exactly, so callers can test for realness without a
tolerance.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

__all__ = [
    "DomainError",
    "Status",
    "EvalResult",
    "BaseContext",
    "make_base",
    "cexpm1",
    "q_analog",
    "q_power",
    "iter_exp",
]

# omega = s*q/(q-1) is replaced by its limit 1 inside this radius of q == 1
OMEGA_LIMIT_RADIUS = 1e-12
Q_NEAR_ONE_RADIUS = 1e-8
# q_analog returns x unchanged when |ln q| is below this
QANALOG_LINEAR_CUTOFF = 1e-14


class DomainError(ValueError):
    """Raised when an argument lies outside the function's domain."""


class Status(str, enum.Enum):
    OK = "ok"
    OVERFLOW_POS = "overflow_pos"
    OVERFLOW_NEG = "overflow_neg"
    DOMAIN_ERROR = "domain_error"


@dataclass(frozen=True)
class EvalResult:
    """A function value together with an evaluation status.

    Overflow and domain failures are reported through ``status`` instead of
    raising, so grid sweeps can continue past blow-up points.
    """

    value: complex
    status: Status = Status.OK
    message: str = field(default="", compare=False)

    @property
    def ok(self) -> bool:
        return self.status is Status.OK

    def __complex__(self) -> complex:
        return self.value

    @classmethod
    def domain_error(cls, message: str = "") -> "EvalResult":
        return cls(complex(math.nan, math.nan), Status.DOMAIN_ERROR, message)

    @classmethod
    def overflow(cls, positive: bool = True) -> "EvalResult":
        if positive:
            return cls(complex(math.inf, 0.0), Status.OVERFLOW_POS)
        return cls(complex(-math.inf, 0.0), Status.OVERFLOW_NEG)


@dataclass(frozen=True)
class BaseContext:
    """A tetration base ``r`` with its derived constants.

    Attributes
    ----------
    r : complex
        The base.
    q : complex
        Principal ``ln r``.
    s : complex
        Principal ``ln q``.
    omega : complex
        ``s*q/(q-1)``, the slope constant that makes the segments join C1.
    is_real_base : bool
        True when ``r`` is real and positive.
    q_near_one : bool
        True when ``|q - 1| < 1e-8`` (base within ~1e-8 of e).
    """

    r: complex
    q: complex
    s: complex
    omega: complex
    is_real_base: bool
    q_near_one: bool

    @property
    def real_r(self) -> float:
        return self.r.real


def _as_complex(v) -> complex:
    if isinstance(v, complex):
        return v
    return complex(float(v), 0.0)


def make_base(r, require_real: bool = True) -> BaseContext:
    """Build a :class:`BaseContext` for base ``r``.

    Parameters
    ----------
    r : float or complex
        The base.  Must be nonzero; ``r == 1`` is rejected because then
        ``q = 0`` and ``s = ln q`` is undefined.
    require_real : bool
        If true, ``r`` must be real and strictly positive.

    Raises
    ------
    DomainError
    """
    rc = _as_complex(r)
    if not (math.isfinite(rc.real) and math.isfinite(rc.imag)):
        raise DomainError(f"base must be finite, got {r!r}")
    if rc == 0:
        raise DomainError("base r = 0 has no logarithm")
    is_real_base = rc.imag == 0.0 and rc.real > 0.0
    if require_real and not is_real_base:
        raise DomainError(f"a real positive base is required, got {r!r}")
    if rc == 1:
        raise DomainError("base r = 1 gives q = ln r = 0, for which s = ln q is undefined")
    if is_real_base:
        q = complex(math.log(rc.real), 0.0)
    else:
        q = cmath.log(rc)
    s = cmath.log(q)
    dq = q - 1
    if abs(dq) < OMEGA_LIMIT_RADIUS:
        omega = complex(1.0, 0.0)
    else:
        omega = s * q / dq
    return BaseContext(
        r=rc,
        q=q,
        s=s,
        omega=omega,
        is_real_base=is_real_base,
        q_near_one=abs(dq) < Q_NEAR_ONE_RADIUS,
    )


def cexpm1(w: complex) -> complex:
    """``exp(w) - 1`` without cancellation for small ``|w|``."""
    a, b = w.real, w.imag
    if b == 0.0:
        return complex(math.expm1(a), 0.0)
    half = math.sin(0.5 * b)
    re = math.expm1(a) * math.cos(b) - 2.0 * half * half
    im = math.exp(a) * math.sin(b)
    return complex(re, im)


def q_power(x, ctx: BaseContext) -> complex:
    """Principal ``q**x`` computed as ``exp(x * ln q)``."""
    return cmath.exp(_as_complex(x) * ctx.s)


def q_analog(x, ctx: BaseContext) -> complex:
    """The q-number ``[x]_q = (q**x - 1)/(q - 1)`` with ``q = ln r``.

    Evaluated as ``expm1(x ln q)/expm1(ln q)`` so the removable singularity
    at ``q = 1`` (``r = e``) costs nothing; there ``[x]_q -> x``.
    ``x`` may be complex (complex-height pipeline).
    """
    xc = _as_complex(x)
    if abs(ctx.s) < QANALOG_LINEAR_CUTOFF:
        return xc
    return cexpm1(xc * ctx.s) / cexpm1(ctx.s)


def _overflow_sign(w: complex) -> bool:
    # sign of Re(exp(w)) once |exp(w)| has left binary64
    return math.cos(w.imag) >= 0.0 if math.isfinite(w.imag) else True


def iter_exp(ctx: BaseContext, n: int, f) -> EvalResult:
    """Extended iterated exponential ``exp_r^n f``.

    For ``n >= 0`` applies ``v -> r**v`` (as ``exp(q v)``) ``n`` times; for
    ``n < 0`` applies the principal ``v -> ln(v)/ln(r)`` ``|n|`` times.
    """
    v = _as_complex(f)
    q = ctx.q
    if n >= 0:
        for _ in range(n):
            w = q * v
            if not (math.isfinite(w.real) and math.isfinite(w.imag)):
                return EvalResult.overflow(_overflow_sign(w))
            try:
                v = cmath.exp(w)
            except OverflowError:
                return EvalResult.overflow(_overflow_sign(w))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                return EvalResult.overflow(_overflow_sign(w))
    else:
        for _ in range(-n):
            if v == 0:
                return EvalResult.domain_error("logarithm of zero")
            v = cmath.log(v) / q
    return EvalResult(v)
