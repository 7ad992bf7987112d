"""Extended exponentiation (``vee``), power (``wedge``) and the rule sweep.

``^x r vee f`` means ``exp_r^x f``: the left operand is an operator, not a
number.  Operands that are towers over the same base carry their height
(:class:`HeightTerm`), so ``vee`` on them is height addition.  Raw numbers
under a fractional operator are lifted to a height with
:func:`~tetration.analysiskit.slog` first.

Each of the 16 identities is checked numerically by :func:`check_rule` on
randomly drawn bases and heights; samples whose subterms leave the domain
are counted as skipped rather than aborting the sweep.
"""
from __future__ import annotations

import cmath
import math
import statistics
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analysiskit import slog
from .basekit import BaseContext, DomainError, EvalResult, iter_exp, make_base, q_analog, q_power
from .tetracore import split_height, tau

__all__ = [
    "HeightTerm",
    "RuleReport",
    "RULE_IDS",
    "RULE_TOLERANCES",
    "RULE_LABELS",
    "vee",
    "wedge",
    "iterated_tetra",
    "rel_residual",
    "check_rule",
    "check_all_rules",
    "additivity_violation_residual",
    "rebased_vee_residual",
]

RULE_IDS = tuple(range(1, 17))

# pure height arithmetic 1e-11, q-number identities 1e-12, routes through
# logarithms/exponentials of tower values or finite differences 1e-9
RULE_TOLERANCES = {
    1: 1e-11, 9: 1e-11, 10: 1e-11, 11: 1e-11, 13: 1e-11,
    12: 1e-12, 14: 1e-12,
    2: 1e-9, 3: 1e-9, 4: 1e-9, 5: 1e-9, 6: 1e-9, 7: 1e-9, 8: 1e-9,
    15: 1e-9, 16: 1e-9,
}

RULE_LABELS = {
    1: "^x r v 1 = ^x r",
    2: "-^x r = ^-1 r v (1/^(x+1) r)",
    3: "1/^x r = r v (-^(x-1) r)",
    4: "^x r + ^y r = ^-1 r v (^(x+1) r * ^(y+1) r)",
    5: "^x r - ^y r = ^-1 r v (^(x+1) r / ^(y+1) r)",
    6: "^x r ^ ^y r = ^(y+1) r ^ ^(x-1) r",
    7: "^x r * ^y r = ^-1 r v (^(x+1) r ^ ^y r) = r v (^(x-1) r + ^(y-1) r)",
    8: "^x r / ^y r = ^-1 r v (^(x+1) r ^ 1/^y r) = r v (^(x-1) r - ^(y-1) r)",
    9: "^x r v ^y r = ^y r v ^x r = ^(x+y) r",
    10: "^y(^x r) = ^x(^y r) = ^(xy) r",
    11: "^z(^x r v ^y r) = ^(z(x+y)) r",
    12: "^{x} r = r ^ [{x}]_q",
    13: "^x r = ^floor(x) r v ^{x} r",
    14: "^({x}+{y}-1) r = ^({x}-1) r + q^{x} ^({y}-1) r,  {x}+{y} < 1",
    15: "^x r = ^(floor(x)+1) r v conj(1 - ^(-{x}) t),  ln r ln t = 1",
    16: "d ^x r / d ^({x}-1) r = q^(floor(x)+1) prod_k (^k r v ^{x} r)",
}

MIN_VALID = 30


@dataclass(frozen=True)
class HeightTerm:
    """The number ``^h r`` kept in height coordinates."""

    ctx: BaseContext
    h: float

    @property
    def value(self) -> complex:
        return _value(tau(self.ctx, self.h))


@dataclass(frozen=True)
class RuleReport:
    rule_id: int
    samples: int
    max_rel_residual: float
    skipped: int

    @property
    def valid(self) -> int:
        return self.samples - self.skipped

    @property
    def tolerance(self) -> float:
        return RULE_TOLERANCES[self.rule_id]

    @property
    def passed(self) -> bool:
        return self.valid >= MIN_VALID and self.max_rel_residual <= self.tolerance

    def line(self) -> str:
        return (
            f"rule={self.rule_id} samples={self.samples} skipped={self.skipped} "
            f"max_rel_residual={self.max_rel_residual:.3e}"
        )


def _value(res: EvalResult) -> complex:
    if not res.ok:
        raise DomainError(f"subterm not evaluable: {res.status.value} {res.message}".strip())
    return res.value


def _real_operand(f) -> float:
    f = complex(f)
    if f.imag != 0.0:
        raise DomainError(f"operand {f} is not real")
    return f.real


def vee(x: float, t, ctx: BaseContext) -> complex:
    """``^x r vee t = exp_r^x t``.

    A :class:`HeightTerm` operand over the same base adds heights.  A raw
    number ``f`` under an integer ``x`` gets ``|x|`` exponentials or
    logarithms directly; under a fractional ``x`` it is first lifted to the
    height ``slog_r(f)``.
    """
    if isinstance(t, HeightTerm):
        if t.ctx.r != ctx.r:
            raise DomainError("HeightTerm operand has a different base")
        return _value(tau(ctx, x + t.h))
    f = _real_operand(t)
    if float(x).is_integer():
        return _value(iter_exp(ctx, int(x), f))
    return _value(tau(ctx, x + slog(ctx, f).result))


def wedge(a, b) -> complex:
    """Ordinary power ``a ** b`` on the principal branch."""
    a, b = complex(a), complex(b)
    if a == 0:
        if b.real > 0:
            return complex(0.0, 0.0)
        raise DomainError("0 raised to a power with non-positive real part")
    try:
        return cmath.exp(b * cmath.log(a))
    except OverflowError:
        raise DomainError(f"{a} ** {b} overflows") from None


def iterated_tetra(ctx: BaseContext, x: float, y: float, f_height: float = 0.0) -> complex:
    """``^x(^y r) vee ^f r = exp_r^(x*y) ^f r``: iterating the operator multiplies heights."""
    return _value(tau(ctx, x * y + f_height))


def rel_residual(lhs, rhs) -> float:
    """``|lhs - rhs| / max(1, |lhs|, |rhs|)``.

    The unit floor keeps cancellation in sums and differences of tower
    values near zero from masquerading as an identity failure.
    """
    lhs, rhs = complex(lhs), complex(rhs)
    if not all(math.isfinite(v) for v in (lhs.real, lhs.imag, rhs.real, rhs.imag)):
        raise DomainError("non-finite side")
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def _T(ctx: BaseContext, h: float) -> complex:
    return _value(tau(ctx, h))


def _real_T(ctx: BaseContext, h: float) -> float:
    return _real_operand(_T(ctx, h))


def _extended_product(factors: Callable[[int], complex], m: int, n: int) -> complex:
    # prod_{k=m}^{n}, with the reciprocal convention when n < m
    prod = complex(1.0, 0.0)
    if n >= m:
        for k in range(m, n + 1):
            prod *= factors(k)
        return prod
    for k in range(n + 1, m):
        prod *= factors(k)
    if prod == 0:
        raise DomainError("zero factor in extended product")
    return 1.0 / prod


def _complex_step(f: Callable[[complex], complex], x: float) -> float:
    h = 1e-20 * max(1.0, abs(x))
    return f(complex(x, h)).imag / h


# --- per-rule samplers and evaluators -------------------------------------
# a sampler draws a parameter dict; an evaluator returns (lhs, [rhs, ...])

def _base(rng, allow_small: bool = False) -> float:
    if allow_small and rng.random() < 0.5:
        return float(rng.uniform(0.1, 0.9))
    return float(rng.uniform(1.2, 2.5))


def _h(rng, lo: float = -1.9, hi: float = 3.0) -> float:
    return float(rng.uniform(lo, hi))


def _sample_xy(rng, lo=-1.9, hi=3.0):
    return {"r": _base(rng), "x": _h(rng, lo, hi), "y": _h(rng, lo, hi)}


def _rule1(p):
    ctx = make_base(p["r"])
    return vee(p["x"], 1.0, ctx), [_T(ctx, p["x"])]


def _rule2(p):
    ctx = make_base(p["r"])
    x = p["x"]
    return -_T(ctx, x), [vee(-1.0, 1.0 / _real_T(ctx, x + 1.0), ctx)]


def _rule3(p):
    ctx = make_base(p["r"])
    x = p["x"]
    return 1.0 / _T(ctx, x), [vee(1.0, -_real_T(ctx, x - 1.0), ctx)]


def _rule4(p):
    ctx = make_base(p["r"])
    x, y = p["x"], p["y"]
    return _T(ctx, x) + _T(ctx, y), [vee(-1.0, _real_T(ctx, x + 1) * _real_T(ctx, y + 1), ctx)]


def _rule5(p):
    ctx = make_base(p["r"])
    x, y = p["x"], p["y"]
    return _T(ctx, x) - _T(ctx, y), [vee(-1.0, _real_T(ctx, x + 1) / _real_T(ctx, y + 1), ctx)]


def _rule6(p):
    ctx = make_base(p["r"])
    x, y = p["x"], p["y"]
    return wedge(_T(ctx, x), _T(ctx, y)), [wedge(_T(ctx, y + 1), _T(ctx, x - 1))]


def _rule7(p):
    ctx = make_base(p["r"])
    x, y = p["x"], p["y"]
    lhs = _T(ctx, x) * _T(ctx, y)
    via_power = vee(-1.0, wedge(_T(ctx, x + 1), _T(ctx, y)), ctx)
    via_sum = vee(1.0, _real_T(ctx, x - 1) + _real_T(ctx, y - 1), ctx)
    return lhs, [via_power, via_sum]


def _rule8(p):
    ctx = make_base(p["r"])
    x, y = p["x"], p["y"]
    lhs = _T(ctx, x) / _T(ctx, y)
    via_power = vee(-1.0, wedge(_T(ctx, x + 1), 1.0 / _T(ctx, y)), ctx)
    via_diff = vee(1.0, _real_T(ctx, x - 1) - _real_T(ctx, y - 1), ctx)
    return lhs, [via_power, via_diff]


def _rule9(p):
    ctx = make_base(p["r"])
    x, y = p["x"], p["y"]
    return vee(x, HeightTerm(ctx, y), ctx), [
        vee(y, HeightTerm(ctx, x), ctx),
        _T(ctx, x + y),
        vee(x, _real_T(ctx, y), ctx),  # operand collapsed to a number, lifted back by slog
    ]


def _rule10(p):
    ctx = make_base(p["r"])
    x, y = p["x"], p["y"]
    n = int(x)
    # (exp_r^y)^n 1 applied one operator at a time to plain numbers
    v = 1.0
    for _ in range(n):
        v = _real_operand(vee(y, v, ctx))
    return complex(v), [iterated_tetra(ctx, x, y), iterated_tetra(ctx, y, x), _T(ctx, x * y)]


def _rule11(p):
    ctx = make_base(p["r"])
    x, y, z = p["x"], p["y"], p["z"]
    n = int(z)
    v = 1.0
    for _ in range(n):
        v = _real_operand(vee(x + y, v, ctx))
    return complex(v), [iterated_tetra(ctx, z, x + y), _T(ctx, z * (x + y))]


def _rule12(p):
    ctx = make_base(p["r"], require_real=False)
    _, frac = split_height(p["x"])
    rhs = complex(p["r"]) ** q_analog(frac, ctx)
    return _T(ctx, frac), [rhs]


def _rule13(p):
    ctx = make_base(p["r"])
    x = p["x"]
    n, frac = split_height(x)
    return _T(ctx, x), [vee(float(n), HeightTerm(ctx, frac), ctx), _value(iter_exp(ctx, n, _T(ctx, frac)))]


def _rule14_sides(r: float, fx: float, fy: float) -> tuple[complex, complex]:
    ctx = make_base(r)
    lhs = _T(ctx, fx + fy - 1.0)
    rhs = _T(ctx, fx - 1.0) + q_power(fx, ctx) * _T(ctx, fy - 1.0)
    return lhs, rhs


def _rule14(p):
    lhs, rhs = _rule14_sides(p["r"], p["fx"], p["fy"])
    return lhs, [rhs]


def _rule15(p):
    ctx = make_base(p["r"])
    x = p["x"]
    n, frac = split_height(x)
    t_ctx = make_base(math.exp(1.0 / ctx.q.real))
    partner = (1.0 - _T(t_ctx, -frac)).conjugate()
    return _T(ctx, x), [vee(float(n + 1), partner, ctx)]


def _rule16(p):
    ctx = make_base(p["r"])
    x = p["x"]
    n, frac = split_height(x)
    sigma = q_analog(frac, ctx).real

    def tower(s: complex) -> complex:
        return _value(iter_exp(ctx, n + 1, s))

    lhs = _complex_step(tower, sigma)
    prod = _extended_product(lambda k: vee(float(k), HeightTerm(ctx, frac), ctx), 0, n)
    return complex(lhs), [q_power(n + 1, ctx) * prod]


def _s_rule10(rng):
    x = int(rng.integers(1, 4))
    y = float(rng.uniform(-1.9 / x + 0.01, 4.0 / x - 0.01))
    y = min(max(y, -0.9), 3.0)
    return {"r": _base(rng), "x": float(x), "y": y}


def _s_rule11(rng):
    z = int(rng.integers(1, 4))
    s = float(rng.uniform(-0.9, 4.0 / z - 0.01))
    x = float(rng.uniform(-0.9, 2.0))
    return {"r": _base(rng), "x": x, "y": s - x, "z": float(z)}


def _s_rule14(rng):
    fx = float(rng.uniform(0.0, 1.0))
    fy = float(rng.uniform(0.0, 1.0 - fx))
    return {"r": _base(rng, allow_small=True), "fx": fx, "fy": fy}


_RULES: dict[int, tuple[Callable, Callable]] = {
    1: (lambda rng: {"r": _base(rng), "x": _h(rng)}, _rule1),
    2: (lambda rng: {"r": _base(rng), "x": _h(rng)}, _rule2),
    3: (lambda rng: {"r": _base(rng), "x": _h(rng, -0.99, 3.0)}, _rule3),
    4: (_sample_xy, _rule4),
    5: (_sample_xy, _rule5),
    6: (lambda rng: _sample_xy(rng, -0.99, 2.9), _rule6),
    7: (lambda rng: _sample_xy(rng, -0.99, 2.9), _rule7),
    8: (lambda rng: _sample_xy(rng, -0.99, 2.9), _rule8),
    9: (lambda rng: {"r": _base(rng), "x": _h(rng, -0.95, 2.0), "y": _h(rng, -0.95, 2.0)}, _rule9),
    10: (_s_rule10, _rule10),
    11: (_s_rule11, _rule11),
    12: (lambda rng: {"r": _base(rng, allow_small=True), "x": _h(rng)}, _rule12),
    13: (lambda rng: {"r": _base(rng), "x": _h(rng)}, _rule13),
    14: (_s_rule14, _rule14),
    15: (lambda rng: {"r": _base(rng), "x": _h(rng, -0.99, 3.0)}, _rule15),
    16: (lambda rng: {"r": _base(rng), "x": _h(rng)}, _rule16),
}


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(salt)])


def check_rule(rule_id: int, seed: int = 0, target_valid: int = 60, max_draws: int = 2000) -> RuleReport:
    """Sweep one identity over random samples and report its worst residual.

    Draws until ``target_valid`` domain-valid samples are collected (or
    ``max_draws`` is reached).  A sample is skipped when any subterm raises
    :class:`DomainError` or overflows.
    """
    if rule_id not in _RULES:
        raise ValueError(f"rule id must be in 1..16, got {rule_id}")
    sampler, evaluate = _RULES[rule_id]
    rng = _rng(seed, rule_id)
    worst = 0.0
    drawn = skipped = 0
    while drawn - skipped < target_valid and drawn < max_draws:
        drawn += 1
        params = sampler(rng)
        try:
            lhs, rhss = evaluate(params)
            res = max(rel_residual(lhs, rhs) for rhs in rhss)
        except (DomainError, OverflowError, ZeroDivisionError):
            skipped += 1
            continue
        worst = max(worst, res)
    return RuleReport(rule_id, drawn, worst, skipped)


def check_all_rules(seed: int = 0, target_valid: int = 60) -> list[RuleReport]:
    return [check_rule(i, seed, target_valid) for i in RULE_IDS]


def additivity_violation_residual(seed: int = 0, samples: int = 40) -> float:
    """Smallest rule-14 residual when the side condition ``{x}+{y} < 1`` is broken.

    Both sides agree at ``{x}+{y} = 1`` by continuity, so the probe draws
    ``{x}+{y}`` from ``[1.25, 1.9]``.  A large value shows the condition is
    necessary.
    """
    rng = _rng(seed, 1014)
    least = math.inf
    for _ in range(samples):
        total = float(rng.uniform(1.25, 1.9))
        fx = float(rng.uniform(total - 0.99, 0.99))
        fy = total - fx
        lhs, rhs = _rule14_sides(_base(rng), fx, fy)
        least = min(least, rel_residual(lhs, rhs))
    return least


def rebased_vee_residual(seed: int = 0, samples: int = 40) -> float:
    """Median residual of rule 9 when ``^x r`` is wrongly treated as a new base.

    Compares ``exp_b^y 1`` with ``b = ^x r`` against ``^(x+y) r``.
    """
    rng = _rng(seed, 1009)
    out = []
    while len(out) < samples:
        r = _base(rng)
        x, y = float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.1, 1.5))
        ctx = make_base(r)
        b = _real_T(ctx, x)
        if abs(b - 1.0) < 1e-3:
            continue
        wrong = _T(make_base(b), y)
        out.append(rel_residual(wrong, _T(ctx, x + y)))
    return statistics.median(out)
