"""Property suites behind ``tetration verify``.

Each suite returns a list of :class:`Check` records.  A check carries the
measured quantity, a threshold and the comparison it must satisfy, so a
report can show how close every property came to its limit.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import analysiskit as ak
from . import ruleskit as rk
from . import serieskit as sk
from .basekit import DomainError, iter_exp, make_base, q_analog
from .tetracore import (
    EULER_HIGH,
    EULER_LOW,
    mu,
    split_height,
    tau,
    tau_complex_base,
    tau_complex_height,
    tau_inf,
    tau_partials,
    tau_prime,
)

__all__ = [
    "Check",
    "SUITES",
    "run_suite",
    "core_checks",
    "series_checks",
    "rules_checks",
    "analysis_checks",
    "c1_jump",
    "continuity_jump",
]

SQRT2 = math.sqrt(2.0)
GRID_BASES = (1.3, SQRT2, math.e, 2.0)
GRID_HEIGHTS = (-1, 0, 1, 2, 3)
FD_REL = 1e-6


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    op: str  # "<", "<=" or ">"

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        if self.op == "<":
            return self.value < self.threshold
        if self.op == "<=":
            return self.value <= self.threshold
        return self.value > self.threshold

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"check={self.name} value={self.value:.3e} required={self.op}{self.threshold:.0e} {flag}"

    def to_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


def _rel(a: complex, b: complex) -> float:
    return rk.rel_residual(a, b)


def _val(res) -> complex:
    if not res.ok:
        raise DomainError(res.status.value)
    return res.value


def _mixed_base(rng) -> float:
    # (0, e^(1/e)] away from 1, or [1.1, 2.5]
    if rng.random() < 0.5:
        return float(rng.uniform(1.1, 2.5))
    while True:
        r = float(rng.uniform(0.02, EULER_HIGH))
        if abs(r - 1.0) > 1e-3:
            return r


def _non_integer(rng, lo: float, hi: float, gap: float = 1e-4) -> float:
    while True:
        x = float(rng.uniform(lo, hi))
        if abs(x - round(x)) > gap:
            return x


def _worst(n: int, draw: Callable, measure: Callable, max_draws: int | None = None) -> float:
    """Max of ``measure(*draw())`` over ``n`` samples where it is defined."""
    worst, got, tries = 0.0, 0, 0
    max_draws = max_draws or 20 * n
    while got < n and tries < max_draws:
        tries += 1
        args = draw()
        try:
            v = measure(*args)
        except (DomainError, OverflowError, ZeroDivisionError):
            continue
        worst = max(worst, v)
        got += 1
    return worst if got == n else math.inf


def _fd(f: Callable[[float], complex], x: float) -> complex:
    h = FD_REL * max(1.0, abs(x))
    return (f(x + h) - f(x - h)) / (2.0 * h)


# --- core -----------------------------------------------------------------

def continuity_jump(r: float, n: int, eps: float = 1e-10, variant: str = "qanalog") -> float:
    ctx = make_base(r)
    c = _val(tau(ctx, n, variant))
    lo, hi = _val(tau(ctx, n - eps, variant)), _val(tau(ctx, n + eps, variant))
    return max(abs(lo - c), abs(hi - c), abs(lo - hi))


def c1_jump(r: float, n: int, eps: float = 1e-10, variant: str = "qanalog") -> float:
    ctx = make_base(r)
    return abs(_val(tau_prime(ctx, n - eps, variant)) - _val(tau_prime(ctx, n + eps, variant)))


def _scaled(jump: Callable[..., float], value: Callable, r: float, n: int, variant: str) -> float:
    return jump(r, n, variant=variant) / max(1.0, abs(_val(value(make_base(r), n, variant))))


def _anchor_error() -> float:
    worst = 0.0
    for r in np.linspace(EULER_LOW, 2.5, 51)[1:]:
        if r == 1.0:
            continue
        ctx = make_base(float(r))
        worst = max(worst, abs(_val(tau(ctx, -1))), abs(_val(tau(ctx, 0)) - 1.0))
    return worst


def _functional_equation(rng) -> float:
    def draw():
        return _mixed_base(rng), _non_integer(rng, -1.9, 4.0, 0.0)

    def measure(r, x):
        ctx = make_base(r)
        return _rel(_val(tau(ctx, x)), complex(r) ** _val(tau(ctx, x - 1.0)))

    return _worst(500, draw, measure)


def _dde(rng) -> float:
    def draw():
        return _mixed_base(rng), _non_integer(rng, -0.99, 3.0)

    def measure(r, x):
        ctx = make_base(r)
        lhs = _val(tau_prime(ctx, x))
        rhs = ctx.q * _val(tau(ctx, x)) * _val(tau_prime(ctx, x - 1.0))
        return _rel(lhs, rhs)

    return _worst(200, draw, measure)


def _tau_prime_vs_fd(rng) -> float:
    def draw():
        return float(rng.uniform(1.1, 2.5)), _non_integer(rng, -1.9, 3.0, 1e-3)

    def measure(r, x):
        ctx = make_base(r)
        return _rel(_val(tau_prime(ctx, x)), _fd(lambda t: _val(tau(ctx, t)), x))

    return _worst(100, draw, measure)


def _mu_recursion(rng) -> float:
    def draw():
        return _mixed_base(rng), _non_integer(rng, -0.99, 3.0)

    def measure(r, x):
        ctx = make_base(r)
        return _rel(_val(mu(ctx, x)), _val(tau(ctx, x)) * _val(mu(ctx, x - 1.0)))

    return _worst(200, draw, measure)


def _mu_unit_on_seed_segment(rng) -> float:
    worst = 0.0
    for _ in range(50):
        ctx = make_base(_mixed_base(rng))
        worst = max(worst, abs(_val(mu(ctx, float(rng.uniform(-1.0, 0.0)))) - 1.0))
    return worst


def _partials(rng) -> tuple[float, float]:
    height_err, base_err = 0.0, 0.0
    for i in range(60):
        r = math.e if i == 0 else float(rng.uniform(1.1, 2.5))
        x = _non_integer(rng, -1.9, 3.0, 1e-3)
        d_base, d_height = tau_partials(r, x)
        height_err = max(height_err, _rel(d_height, _val(tau_prime(make_base(r), x))))
        fd = _fd(lambda b: _val(tau(make_base(b), x)), r)
        base_err = max(base_err, _rel(d_base, fd))
    return height_err, base_err


def _mu_vs_seed_derivative(rng) -> float:
    def draw():
        return float(rng.uniform(1.1, 2.5)), _non_integer(rng, -1.9, 3.0)

    def measure(r, x):
        ctx = make_base(r)
        n, frac = split_height(x)
        sigma = q_analog(frac, ctx).real
        d = _fd(lambda s: _val(iter_exp(ctx, n + 1, s)), sigma)
        return _rel(_val(mu(ctx, x)), d / ctx.q ** (n + 1))

    return _worst(100, draw, measure)


def _linear_seed_reduction() -> float:
    ctx = make_base(math.e)
    worst = 0.0
    for x in np.linspace(-1.995, 2.995, 300):
        x = float(x)
        n, frac = split_height(x)
        v = frac
        if n == -2:
            v = math.log(v) if v > 0 else -math.inf
        for _ in range(n + 1):
            v = math.exp(v)
        if not math.isfinite(v):
            continue
        worst = max(worst, _rel(_val(tau(ctx, x)), v))
    return worst


def _fixed_point_grid(height: int = 200) -> tuple[float, float]:
    eq_err, lim_err = 0.0, 0.0
    for r in np.linspace(EULER_LOW + 0.01, EULER_HIGH - 0.01, 12):
        r = float(r)
        if abs(r - 1.0) < 1e-9:
            continue
        ctx = make_base(r)
        t = _val(tau_inf(ctx)).real
        eq_err = max(eq_err, abs(t - r**t))
        lim_err = max(lim_err, abs(t - _val(tau(ctx, height)).real))
    return eq_err, lim_err


def core_checks(seed: int = 0, variant: str = "qanalog") -> list[Check]:
    """Closed form: anchors, functional and delay equations, smoothness, fixed point.

    ``variant`` only affects the continuity and C1 grid, so passing
    ``"linear"`` demonstrates that the grid catches a wrong seed slope.
    """
    rng = np.random.default_rng(seed)
    out = [
        Check("anchors_exact", _anchor_error(), 2.3e-16, "<="),
        Check("functional_equation", _functional_equation(rng), 1e-11, "<"),
        Check("delay_differential_equation", _dde(rng), 1e-10, "<"),
        Check("tau_prime_vs_finite_difference", _tau_prime_vs_fd(rng), 1e-5, "<"),
        Check("mu_recursion", _mu_recursion(rng), 1e-11, "<"),
        Check("mu_unit_on_seed_segment", _mu_unit_on_seed_segment(rng), 2.3e-16, "<="),
    ]
    cont = max(continuity_jump(r, n, variant=variant) for r in GRID_BASES for n in GRID_HEIGHTS)
    c1 = max(c1_jump(r, n, variant=variant) for r in GRID_BASES for n in GRID_HEIGHTS)
    # the absolute bounds cannot hold where |tau'| is ~1e8 (r = e, n = 3); the
    # scaled companions divide by max(1, |tau(n)|) or max(1, |tau'(n)|)
    cont_rel = max(_scaled(continuity_jump, tau, r, n, variant) for r in GRID_BASES for n in GRID_HEIGHTS)
    c1_rel = max(_scaled(c1_jump, tau_prime, r, n, variant) for r in GRID_BASES for n in GRID_HEIGHTS)
    out += [
        Check("continuity_at_integers", cont, 1e-8, "<"),
        Check("continuity_at_integers_scaled", cont_rel, 1e-8, "<"),
        Check("c1_at_integers", c1, 1e-6, "<"),
        Check("c1_at_integers_scaled", c1_rel, 1e-6, "<"),
        Check("linear_seed_c1_jump_r2", max(c1_jump(2.0, n, variant="linear") for n in GRID_HEIGHTS), 1e-6, ">"),
        Check("linear_seed_c1_jump_e", max(c1_jump(math.e, n, variant="linear") for n in GRID_HEIGHTS), 1e-6, "<"),
        Check(
            "linear_seed_c1_jump_e_scaled",
            max(_scaled(c1_jump, tau_prime, math.e, n, "linear") for n in GRID_HEIGHTS),
            1e-6,
            "<",
        ),
    ]
    h_err, b_err = _partials(rng)
    out += [
        Check("partial_height_vs_tau_prime", h_err, 1e-12, "<"),
        Check("partial_base_vs_finite_difference", b_err, 1e-5, "<"),
        Check("mu_vs_seed_derivative", _mu_vs_seed_derivative(rng), 1e-6, "<"),
        Check("linear_seed_reduction_at_e", _linear_seed_reduction(), 1e-12, "<"),
    ]
    sqrt2 = make_base(SQRT2)
    eq_err, lim_err = _fixed_point_grid()
    out += [
        Check("tau_inf_sqrt2", abs(_val(tau_inf(sqrt2)).real - 2.0), 1e-12, "<"),
        Check("tau_sqrt2_height_200", abs(_val(tau(sqrt2, 200)).real - 2.0), 1e-6, "<"),
        Check("tau_inf_fixed_point_equation", eq_err, 1e-12, "<"),
        Check("tau_inf_vs_height_200", lim_err, 1e-6, "<"),
        # near e^-e the contraction factor is ~0.97, so 200 steps are not enough
        Check("tau_inf_vs_height_2000", _fixed_point_grid(2000)[1], 1e-6, "<"),
    ]
    return out


# --- series ---------------------------------------------------------------

def _egf_error(N: int = 40) -> float:
    worst = 0.0
    for k in range(1, 7):
        for t in (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0):
            lhs = sum(sk.stirling2(n, k) * t**n / math.factorial(n) for n in range(k, N + 1))
            rhs = math.expm1(t) ** k / math.factorial(k)
            worst = max(worst, abs(lhs - rhs))
    return worst


def _stirling_convolution_defect() -> int:
    bad = 0
    for n in range(21):
        for k in range(n + 1):
            conv = sum(math.comb(n, j) * sk.stirling2(j, k) for j in range(k, n + 1))
            bad += conv != sk.stirling2(n + 1, k + 1)
    return bad


SERIES_BASES = (1.3, SQRT2, math.e, 2.0, 2.5)


def _series_vs_closed_form() -> float:
    worst = 0.0
    for r in SERIES_BASES:
        ctx = make_base(r)
        for x in np.linspace(0.0, 0.99, 34):
            x = float(x)
            worst = max(
                worst,
                _rel(sk.tetra_series(ctx, x, 40, "tau").value, _val(tau(ctx, x))),
                _rel(sk.tetra_series(ctx, x, 40, "tau_shift_minus1").value, _val(tau(ctx, x - 1.0))),
                _rel(sk.tetra_series(ctx, x, 40, "mu").value, _val(mu(ctx, x))),
                _rel(sk.tetra_series(ctx, x, 40, "mu_shift_minus1").value, _val(mu(ctx, x - 1.0))),
            )
    return worst


def _tail_bound_violation() -> float:
    # actual error over (|phi|^(N+1)/(N+1)! * e^|phi| + rounding allowance); must stay <= 1
    worst = 0.0
    for r in SERIES_BASES:
        ctx = make_base(r)
        for x in (0.3, 0.7, 0.95):
            exact = _val(tau(ctx, x))
            for N in (4, 8, 12):
                sv = sk.tetra_series(ctx, x, N, "tau")
                bound = sv.tail * math.exp(abs(sk.phi(ctx, x))) + 8e-16 * abs(exact)
                worst = max(worst, abs(sv.value - exact) / bound)
    return worst


def _relations(convention: str, B=None) -> float:
    worst = 0.0
    for r in SERIES_BASES:
        ctx = make_base(r)
        table = sk.determined_table(8) if B is None else sk.table_from_B(B, 8, convention)
        coeffs = sk.taylor_coeffs(ctx, table, 8)
        worst = max(worst, sk.coefficient_relation_residuals(ctx, coeffs, 8))
    return worst


def _nth_derivative(g: Callable[[float], complex], n: int, h: float) -> complex:
    def central(step: float) -> complex:
        acc = 0j
        for k in range(n + 1):
            acc += (-1) ** k * math.comb(n, k) * g((n / 2.0 - k) * step)
        return acc / step**n

    return (4.0 * central(h / 2.0) - central(h)) / 3.0


def _taylor_vs_fd() -> float:
    worst = 0.0
    for r in (1.3, 2.0, 2.5):
        ctx = make_base(r)
        a, _, _, _ = sk.taylor_coeffs(ctx, sk.determined_table(4), 4)

        def segment(x: float) -> complex:
            # analytic continuation of the [0, 1) piece through x = 0
            return _val(iter_exp(ctx, 1, q_analog(x, ctx)))

        for n in range(1, 5):
            worst = max(worst, abs(a[n] - _nth_derivative(segment, n, 0.02)) / max(abs(a[n]), 1e-300))
    return worst


def _shifted_vs_closed_form() -> float:
    ctx = make_base(2.0)
    return max(_rel(sk.shifted_series(ctx, n, 0.3, 30), _val(tau(ctx, n + 0.3))) for n in (0, 1, 2, 3))


def series_checks(seed: int = 0) -> list[Check]:
    """Stirling numbers, coefficient relations and series against the closed form."""
    rng = np.random.default_rng(seed)
    B = [0.0, 1.0] + [float(v) for v in rng.uniform(-1.0, 1.0, 8)]
    return [
        Check("stirling_S42_minus_7", float(abs(sk.stirling2(4, 2) - 7)), 0.0, "<="),
        Check("stirling_S43_minus_6", float(abs(sk.stirling2(4, 3) - 6)), 0.0, "<="),
        Check("stirling_convolution_defects", float(_stirling_convolution_defect()), 0.0, "<="),
        Check("stirling_egf_N40", _egf_error(40), 1e-10, "<"),
        Check("stirling_egf_N50", _egf_error(50), 1e-10, "<"),
        Check("series_vs_closed_form_N40", _series_vs_closed_form(), 1e-11, "<"),
        Check("series_tail_bound_ratio", _tail_bound_violation(), 1.0, "<="),
        Check("coefficient_relations_determined_N8", _relations("stated"), 1e-10, "<"),
        Check("coefficient_relations_random_B_N8", _relations("consistent", B), 1e-10, "<"),
        Check("taylor_vs_finite_difference", _taylor_vs_fd(), 1e-4, "<"),
        Check("shifted_series_vs_closed_form", _shifted_vs_closed_form(), 1e-9, "<"),
    ]


# --- rules ----------------------------------------------------------------

def rules_checks(seed: int = 0) -> tuple[list[rk.RuleReport], list[Check]]:
    reports = rk.check_all_rules(seed)
    extra = [
        Check("rule14_violated_condition", rk.additivity_violation_residual(seed), 1e-3, ">"),
        Check("rule9_rebased_operand", rk.rebased_vee_residual(seed), 1e-2, ">"),
    ]
    return reports, extra


def _report_check(rep: rk.RuleReport) -> Check:
    value = rep.max_rel_residual if rep.valid >= rk.MIN_VALID else math.inf
    return Check(f"rule{rep.rule_id}", value, rep.tolerance, "<=")


# --- analysis -------------------------------------------------------------

def _slog_round_trip() -> float:
    worst = 0.0
    for r in (1.3, 2.0, math.e):
        ctx = make_base(r)
        for x in np.linspace(-1.9, 3.0, 40):
            x = float(x)
            v = _val(tau(ctx, x)).real
            worst = max(worst, abs(ak.slog(ctx, v).result - x))
    return worst


def _sroot_round_trip() -> float:
    worst = 0.0
    for h in (-0.5, 0.5, 1.5, 2.0, 3.0):
        for b in (1.2, 1.5, 2.0, 2.5):
            v = _val(tau(make_base(b), h)).real
            worst = max(worst, abs(ak.sroot(h, v).result - b))
    return worst


def _cr_complex_height() -> float:
    worst = 0.0
    for r in (1.5, 2.0):
        ctx = make_base(r)
        for re in (0.25, 0.5, 0.75, 1.25, 1.5):
            for im in (-0.4, -0.2, 0.2, 0.4, 0.6):
                rep = ak.cr_residual(lambda z: tau_complex_height(ctx, z), complex(re, im))
                worst = max(worst, rep.residual)
    return worst


def _boundary_jump_min() -> float:
    return min(ak.boundary_jump(make_base(r), n, 0.5) for r in (1.5, 2.0) for n in (0, 1))


def _boundary_jump_real_axis() -> float:
    return max(ak.boundary_jump(make_base(r), n, 0.0) for r in (1.5, 2.0) for n in (0, 1, 2))


def _boundary_limits_match() -> float:
    worst = 0.0
    for r in (1.5, 2.0, 2.5):
        ctx = make_base(r)
        for y in (0.25, 0.5, 1.0):
            left, right = ak.boundary_limits(ctx, y)
            worst = max(
                worst,
                abs(left - _val(tau_complex_height(ctx, complex(-1e-9, y)))),
                abs(right - _val(tau_complex_height(ctx, complex(1e-9, y)))),
            )
    return worst


def _cr_integer_towers(rng) -> float:
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(10):
            rad, ang = 0.45 * math.sqrt(rng.random()), 2 * math.pi * rng.random()
            z = 1.0 + complex(rad * math.cos(ang), rad * math.sin(ang))
            worst = max(worst, ak.cr_residual(lambda w: tau_complex_base(w, n), z).residual)
    return worst


# points on (0, 1), where ln z < 0 and the seed's ln(ln z) is discontinuous
NONINTEGER_BASE_PROBES = (0.3, 0.5, 0.7)


def noninteger_base_tower(z: complex, h: float = -0.5) -> complex:
    """``^h z`` for a complex base, seeded by the q-analog with ``q = ln z``."""
    return _val(tau(make_base(z, require_real=False), h))


def _cr_noninteger_base_min() -> float:
    return min(ak.cr_residual(noninteger_base_tower, complex(p, 0.0)).residual for p in NONINTEGER_BASE_PROBES)


SYMMETRY_X = (0.2, 0.3, 0.5, 0.7, 0.9, 1.5, 2.0, 2.5, 3.0)


def _symmetry_grid() -> float:
    hs = np.linspace(-0.9, -0.1, 9)
    return max(ak.symmetry_check(float(h), x) for h in hs for x in SYMMETRY_X)


def _limits() -> tuple[float, float]:
    even = max(abs(ak.limit_probe(n, 1e-8) - 1.0) for n in (0, 2, 4))
    odd = max(abs(ak.limit_probe(n, 1e-8)) for n in (1, 3))
    return even, odd


def analysis_checks(seed: int = 0) -> list[Check]:
    """Inverses, holomorphy probes, conjugate symmetry and small-base limits."""
    rng = np.random.default_rng(seed)
    even, odd = _limits()
    return [
        Check("slog_round_trip", _slog_round_trip(), 1e-9, "<"),
        Check("sroot_round_trip", _sroot_round_trip(), 1e-9, "<"),
        Check("cr_complex_height", _cr_complex_height(), 1e-4, "<"),
        Check("boundary_jump_im_0.5", _boundary_jump_min(), 1e-3, ">"),
        Check("boundary_jump_real_axis", _boundary_jump_real_axis(), 1e-6, "<"),
        Check("boundary_closed_form_limits", _boundary_limits_match(), 1e-6, "<"),
        Check("cr_integer_height_complex_base", _cr_integer_towers(rng), 1e-4, "<"),
        Check("cr_noninteger_height_complex_base", _cr_noninteger_base_min(), 1e-2, ">"),
        Check("conjugate_symmetry_9x9", _symmetry_grid(), 1e-10, "<"),
        Check("small_base_limit_even", even, 1e-6, "<"),
        Check("small_base_limit_odd", odd, 1e-6, "<"),
    ]


SUITES = ("core", "series", "rules", "analysis")


def run_suite(name: str, seed: int = 0, variant: str = "qanalog") -> tuple[list[str], list[Check]]:
    """Run one suite; returns the printable lines and the flat list of checks."""
    if name == "core":
        checks = core_checks(seed, variant)
        return [c.line() for c in checks], checks
    if name == "series":
        checks = series_checks(seed)
        return [c.line() for c in checks], checks
    if name == "analysis":
        checks = analysis_checks(seed)
        return [c.line() for c in checks], checks
    if name == "rules":
        reports, extra = rules_checks(seed)
        lines = [rep.line() for rep in reports] + [c.line() for c in extra]
        return lines, [_report_check(rep) for rep in reports] + extra
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
