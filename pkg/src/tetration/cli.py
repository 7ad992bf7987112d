"""``tetration`` command line: point values, sample grids, coefficient dumps, verification.

Exit codes: 0 success, 1 a verification check failed, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field

from . import serieskit as sk
from .analysiskit import slog, sroot
from .basekit import DomainError, EvalResult, make_base
from .suites import SUITES, run_suite
from .tetracore import EULER_HIGH, EULER_LOW, VARIANTS, mu, tau, tau_complex_base, tau_complex_height

__all__ = ["main", "build_parser", "SampleGrid", "RECIPES", "recipe_grid", "parse_scalar"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(v: float) -> str:
    return format(v + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0


def parse_scalar(text: str) -> complex:
    """Parse ``"2"``, ``"i"``, ``"1+2i"`` or ``"0.5-1j"`` into a complex number."""
    t = text.strip().replace(" ", "").replace("i", "j")
    if t in ("j", "+j", "-j"):
        t = t.replace("j", "1j")
    try:
        return complex(t)
    except ValueError:
        raise UsageError(f"cannot parse number {text!r}") from None


@dataclass
class SampleGrid:
    """Rows of ``(inputs..., re, im, status)`` in axis order."""

    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def add(self, inputs: tuple[float, ...], res: EvalResult) -> None:
        if res.ok:
            self.rows.append((*inputs, res.value.real + 0.0, res.value.imag + 0.0, res.status.value))
        else:
            self.rows.append((*inputs, None, None, res.status.value))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            cells = ["" if v is None else v if isinstance(v, str) else _fmt(v) for v in row]
            buf.write(",".join(cells) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"columns": list(self.columns), "rows": [list(r) for r in self.rows]}, indent=1)

    def render(self, fmt: str) -> str:
        return self.to_json() + "\n" if fmt == "json" else self.to_csv()


def axis(start: float, stop: float, step: float) -> list[float]:
    """``start, start+step, ...`` up to and including ``stop`` (no drift)."""
    if not step > 0:
        raise UsageError("--step must be positive")
    if stop < start:
        raise UsageError("--to must not be below --from")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(count)]


def _safe(fn, *args) -> EvalResult:
    try:
        return fn(*args)
    except DomainError as exc:
        return EvalResult.domain_error(str(exc))


def _eval_tau(base: float, h: float, func: str) -> EvalResult:
    try:
        ctx = make_base(base, require_real=False)
    except DomainError as exc:
        return EvalResult.domain_error(str(exc))
    return _safe(mu if func == "mu" else tau, ctx, h)


def height_sweep(base: float, heights: list[float], func: str = "tau") -> SampleGrid:
    grid = SampleGrid(("x", "re", "im", "status"))
    for x in heights:
        grid.add((x,), _eval_tau(base, x, func))
    return grid


def base_sweep(heights: list[float], bases: list[float], func: str = "tau") -> SampleGrid:
    """Grid over (height h, base x), ordered by height then base."""
    grid = SampleGrid(("h", "x", "re", "im", "status"))
    for h in heights:
        for b in bases:
            grid.add((h, b), _eval_tau(b, h, func))
    return grid


def multi_base_curves(bases: list[float], heights: list[float], func: str) -> SampleGrid:
    """One height curve per base, ordered by base then height (``h,x`` columns)."""
    grid = SampleGrid(("h", "x", "re", "im", "status"))
    for b in bases:
        for h in heights:
            grid.add((h, b), _eval_tau(b, h, func))
    return grid


def complex_height_grid(base: float, res_: list[float], ims: list[float]) -> SampleGrid:
    grid = SampleGrid(("re_z", "im_z", "re", "im", "status"))
    ctx = make_base(base)
    for re in res_:
        for im in ims:
            grid.add((re, im), _safe(tau_complex_height, ctx, complex(re, im)))
    return grid


FIG2_BASES = (EULER_HIGH, math.sqrt(2.0), math.e, 1.0 / math.e, EULER_LOW)

RECIPES = {
    "fig2": "tau over -2 < x <= 4 (step 0.01) for bases e^(1/e), sqrt2, e, 1/e, e^-e",
    "fig3": "mu over -2 < x <= 4 (step 0.01) for the same bases",
    "fig4": "tau over heights -1..3 (step 0.2) and bases 0 < x <= 3 (step 0.01)",
    "fig5": "complex tau over heights -0.9..-0.1 (step 0.1) and bases 0 < x < 1 (step 0.01)",
}


def recipe_grid(name: str) -> SampleGrid:
    """Data behind one of the figure recipes in :data:`RECIPES`."""
    if name in ("fig2", "fig3"):
        heights = axis(-1.99, 4.0, 0.01)
        return multi_base_curves(list(FIG2_BASES), heights, "tau" if name == "fig2" else "mu")
    if name == "fig4":
        return base_sweep(axis(-1.0, 3.0, 0.2), axis(0.01, 3.0, 0.01))
    if name == "fig5":
        return base_sweep(axis(-0.9, -0.1, 0.1), axis(0.01, 0.99, 0.01))
    raise UsageError(f"unknown recipe {name!r}; expected one of {sorted(RECIPES)}")


# --- commands -------------------------------------------------------------

def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _point(res: EvalResult, fmt: str) -> str:
    if fmt == "json":
        payload = {"status": res.status.value}
        if res.ok:
            payload.update(re=res.value.real + 0.0, im=res.value.imag + 0.0)
        elif res.message:
            payload["message"] = res.message
        return json.dumps(payload) + "\n"
    cells = [_fmt(res.value.real), _fmt(res.value.imag)] if res.ok else ["", ""]
    return "re,im,status\n" + ",".join(cells + [res.status.value]) + "\n"


def _scalar_arg(args, name: str) -> complex | None:
    raw = getattr(args, name)
    if raw is None:
        return None
    v = parse_scalar(raw)
    im = getattr(args, f"{name}_im")
    if im is not None:
        if v.imag != 0.0:
            raise UsageError(f"--{name} already has an imaginary part")
        v = complex(v.real, im)
    return v


def cmd_eval(args) -> int:
    base, height = _scalar_arg(args, "base"), _scalar_arg(args, "height")
    if base is None or height is None:
        raise UsageError("eval needs --base and --height")
    if base.imag != 0.0 and height.imag != 0.0:
        raise DomainError("base and height cannot both be complex")
    if base.imag != 0.0 or base.real <= 0.0:
        if height.imag != 0.0 or not float(height.real).is_integer():
            raise DomainError("a complex or non-positive base needs an integer height")
        res = tau_complex_base(base, int(height.real))
    elif height.imag != 0.0:
        res = tau_complex_height(make_base(base.real), height)
    else:
        res = tau(make_base(base.real, require_real=False), height.real, args.variant)
    if res.status.value == "domain_error":
        raise DomainError(res.message or "domain error")
    _emit(_point(res, args.format), args.out)
    return EXIT_OK


def cmd_mu(args) -> int:
    base, height = _scalar_arg(args, "base"), _scalar_arg(args, "height")
    if base is None or height is None:
        raise UsageError("mu needs --base and --height")
    if base.imag != 0.0 or height.imag != 0.0:
        raise DomainError("mu takes a real base and a real height")
    res = mu(make_base(base.real, require_real=False), height.real, args.variant)
    if res.status.value == "domain_error":
        raise DomainError(res.message or "domain error")
    _emit(_point(res, args.format), args.out)
    return EXIT_OK


def _solve_payload(sol, fmt: str, key: str) -> str:
    if fmt == "json":
        return json.dumps({key: sol.result, "residual": sol.residual, "iterations": sol.iterations}) + "\n"
    return f"{key},residual,iterations\n{_fmt(sol.result)},{_fmt(sol.residual)},{sol.iterations}\n"


def cmd_slog(args) -> int:
    base = _scalar_arg(args, "base")
    if base is None or args.value is None:
        raise UsageError("slog needs --base and --value")
    if base.imag != 0.0:
        raise DomainError("slog needs a real base")
    _emit(_solve_payload(slog(make_base(base.real), args.value), args.format, "height"), args.out)
    return EXIT_OK


def cmd_sroot(args) -> int:
    height = _scalar_arg(args, "height")
    if height is None or args.value is None:
        raise UsageError("sroot needs --height and --value")
    if height.imag != 0.0:
        raise DomainError("sroot needs a real height")
    _emit(_solve_payload(sroot(height.real, args.value), args.format, "base"), args.out)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    base = _scalar_arg(args, "base")
    if base is None:
        raise UsageError("coeffs needs --base")
    if base.imag != 0.0:
        raise DomainError("coeffs needs a real base")
    if not 0 <= args.order <= sk.MAX_ORDER - 1:
        raise UsageError(f"--order must be in 0..{sk.MAX_ORDER - 1}")
    ctx = make_base(base.real)
    table = sk.determined_table(args.order)
    coeffs = sk.taylor_coeffs(ctx, table, args.order)
    payload = {"base": base.real, "order": args.order, **table.to_dict()}
    if args.order >= 1:
        r1, r2, r3 = sk.relation_residuals(ctx, coeffs, args.order)
        payload["relation_residuals"] = [r1, r2, r3]
        payload["residual"] = max(r1, r2, r3)
    else:
        payload["relation_residuals"] = [0.0, 0.0, 0.0]
        payload["residual"] = 0.0
    _emit(json.dumps(payload, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.recipe:
        grid = recipe_grid(args.recipe)
    else:
        if args.start is None or args.stop is None or args.step is None:
            raise UsageError("sample needs --recipe or --from/--to/--step")
        steps = axis(args.start, args.stop, args.step)
        base = _scalar_arg(args, "base")
        height = _scalar_arg(args, "height")
        if args.im_from is not None:
            if base is None:
                raise UsageError("a complex-height grid needs --base")
            if args.im_to is None or args.im_step is None:
                raise UsageError("a complex-height grid needs --im-from/--im-to/--im-step")
            grid = complex_height_grid(base.real, steps, axis(args.im_from, args.im_to, args.im_step))
        elif base is not None and height is None:
            grid = height_sweep(base.real, steps, args.func)
        elif height is not None and base is None:
            grid = base_sweep([height.real], steps, args.func)
        else:
            raise UsageError("give exactly one of --base (height sweep) or --height (base sweep)")
    _emit(grid.render(args.format), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    report = {"seed": args.seed, "variant": args.variant, "suites": {}}
    failed = 0
    for name in names:
        lines, checks = run_suite(name, args.seed, args.variant)
        n_pass = sum(c.passed for c in checks)
        failed += len(checks) - n_pass
        print(f"# suite={name}")
        for line in lines:
            print(line)
        print(f"suite={name} passed={n_pass}/{len(checks)}")
        report["suites"][name] = [c.to_dict() for c in checks]
    report["failed"] = failed
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=1)
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tetration", description="Continuous tetration with a q-analog seed.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, base=True, height=True):
        if base:
            sp.add_argument("--base", help="base r (real, or complex such as 'i' or '1+2i')")
            sp.add_argument("--base-im", type=float, help="imaginary part added to --base")
        if height:
            sp.add_argument("--height", help="height x (real or complex)")
            sp.add_argument("--height-im", type=float, help="imaginary part added to --height")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--variant", choices=VARIANTS, default="qanalog", help=argparse.SUPPRESS)

    sp = sub.add_parser("eval", help="tau at one point")
    common(sp)
    sp.set_defaults(func_=cmd_eval)

    sp = sub.add_parser("mu", help="multi-tetrational product at one point")
    common(sp)
    sp.set_defaults(func_=cmd_mu)

    sp = sub.add_parser("sample", help="grid of values for plotting")
    common(sp)
    sp.add_argument("--from", dest="start", type=float)
    sp.add_argument("--to", dest="stop", type=float)
    sp.add_argument("--step", type=float)
    sp.add_argument("--im-from", type=float, help="imaginary axis start for a complex-height grid")
    sp.add_argument("--im-to", type=float)
    sp.add_argument("--im-step", type=float)
    sp.add_argument("--func", choices=("tau", "mu"), default="tau")
    sp.add_argument("--recipe", choices=sorted(RECIPES), help="preset grid for a figure")
    sp.set_defaults(func_=cmd_sample)

    sp = sub.add_parser("slog", help="super-logarithm")
    common(sp, height=False)
    sp.add_argument("--value", type=float)
    sp.set_defaults(func_=cmd_slog)

    sp = sub.add_parser("sroot", help="super-root")
    common(sp, base=False)
    sp.add_argument("--value", type=float)
    sp.set_defaults(func_=cmd_sroot)

    sp = sub.add_parser("coeffs", help="series coefficients as JSON")
    common(sp, height=False)
    sp.add_argument("--order", type=int, default=8)
    sp.set_defaults(func_=cmd_coeffs)

    sp = sub.add_parser("verify", help="run property suites")
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--report", help="write a JSON report here")
    sp.add_argument(
        "--variant", choices=VARIANTS, default="qanalog",
        help="seed used by the smoothness grid; 'linear' should make it fail",
    )
    sp.set_defaults(func_=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func_(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
