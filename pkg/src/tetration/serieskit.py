"""Stirling numbers, coefficient recurrences and the tetrational series.

On the base segment ``0 <= x < 1`` the Taylor series of ``^x r`` and of the
multi-tetrational product resum, through the exponential generating
function of the Stirling numbers of the second kind, into power series in

    phi(x) = omega * (q**x - 1) / s = q * [x]_q.

With the determined coefficients (``A_n = 1``, ``B = (0, 1, 0, ...)``) the
series for ``^x r`` is just ``exp(phi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Sequence

from .basekit import BaseContext, DomainError, q_analog
from .tetracore import tau

__all__ = [
    "MAX_ORDER",
    "CoeffTable",
    "SeriesValue",
    "stirling2",
    "stirling2_table",
    "coeff_recurrence",
    "determined_table",
    "table_from_B",
    "taylor_coeffs",
    "relation_residuals",
    "coefficient_relation_residuals",
    "phi",
    "tetra_series",
    "shifted_coeffs",
    "shifted_series",
]

MAX_ORDER = 64

SeriesKind = Literal["tau", "tau_shift_minus1", "mu", "mu_shift_minus1"]
SERIES_KINDS = ("tau", "tau_shift_minus1", "mu", "mu_shift_minus1")


@lru_cache(maxsize=1)
def _stirling_rows() -> tuple[tuple[int, ...], ...]:
    rows = [(1,)]
    for n in range(1, MAX_ORDER + 2):
        prev = rows[-1]
        row = [0] * (n + 1)
        for k in range(1, n + 1):
            left = prev[k - 1]
            stay = prev[k] if k < n else 0
            row[k] = k * stay + left
        rows.append(tuple(row))
    return tuple(rows)


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind ``S(n, k)``, exact.

    Built from ``S(n, k) = k S(n-1, k) + S(n-1, k-1)``.  Indices are limited
    to ``0 <= k <= n <= 65`` (coefficient order 64 needs ``n + 1``).
    """
    if not (0 <= k <= n <= MAX_ORDER + 1):
        raise DomainError(f"stirling2 needs 0 <= k <= n <= {MAX_ORDER + 1}, got ({n}, {k})")
    return _stirling_rows()[n][k]


def stirling2_table(N: int) -> list[list[int]]:
    """Triangular table ``[[S(n, k) for k in 0..n] for n in 0..N]``."""
    if not 0 <= N <= MAX_ORDER + 1:
        raise DomainError(f"table order must be in [0, {MAX_ORDER + 1}]")
    return [list(row) for row in _stirling_rows()[: N + 1]]


def _check_order(N: int) -> None:
    if not 0 <= N <= MAX_ORDER:
        raise DomainError(f"order must be in [0, {MAX_ORDER}], got {N}")


def coeff_recurrence(
    B: Sequence[float],
    N: int,
    convention: Literal["stated", "consistent"] = "stated",
) -> list[float]:
    """Coefficients ``A_0..A_N`` generated from a ``B`` sequence.

    ``A_0 = A_1 = 1`` and, for ``n >= 2``,

    * ``"stated"``:      ``A_n = sum_{k=1}^n C(n, k-1)   A_{n-k} B_k``
    * ``"consistent"``:  ``A_n = sum_{k=1}^n C(n-1, k-1) A_{n-k} B_k``

    The "consistent" form is the one obtained by differentiating
    ``mu(x) = tau(x) mu(x-1)`` in ``phi``; only with it do the three
    coefficient relations (see :func:`relation_residuals`) hold for an
    arbitrary ``B``.  Both agree on the determined sequence
    ``B = (0, 1, 0, ...)``.

    Entries of ``B`` beyond its length are taken as 0.
    """
    _check_order(N)
    if len(B) < 2 or B[0] != 0 or B[1] != 1:
        raise DomainError("B must start with the seeds B_0 = 0, B_1 = 1")
    if convention not in ("stated", "consistent"):
        raise ValueError(f"unknown convention {convention!r}")
    Bx = list(B) + [0.0] * max(0, N + 1 - len(B))
    A = [1.0, 1.0][: N + 1]
    for n in range(2, N + 1):
        top = n if convention == "stated" else n - 1
        A.append(sum(math.comb(top, k - 1) * A[n - k] * Bx[k] for k in range(1, n + 1)))
    return A


@dataclass
class CoeffTable:
    """Coefficient sequences of the tetrational series.

    ``A``/``B`` generate the series; ``a, b, c, d`` are the Taylor
    coefficients of ``tau(x)``, ``tau(x-1)``, ``mu(x)``, ``mu(x-1)`` about
    ``x = 0`` (filled by :func:`taylor_coeffs`).  ``shifted`` maps an integer
    shift ``n`` to its ``(A^[n], B^[n])`` pair.
    """

    A: list
    B: list
    a: list = field(default_factory=list)
    b: list = field(default_factory=list)
    c: list = field(default_factory=list)
    d: list = field(default_factory=list)
    shifted: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def enc(seq):
            return [_encode(v) for v in seq]

        out = {"A": enc(self.A), "B": enc(self.B), "a": enc(self.a),
               "b": enc(self.b), "c": enc(self.c), "d": enc(self.d)}
        if self.shifted:
            out["shifted"] = {
                str(n): {"A": enc(An), "B": enc(Bn)} for n, (An, Bn) in self.shifted.items()
            }
        return out


def _encode(v):
    v = complex(v)
    if v.imag == 0.0:
        return v.real
    return {"re": v.real, "im": v.imag}


def determined_table(N: int) -> CoeffTable:
    """``A_n = 1`` for all n and ``B = (0, 1, 0, 0, ...)``, through order ``N + 1``."""
    _check_order(N)
    A = [1.0] * (N + 2)
    B = [0.0] * (N + 2)
    B[1] = 1.0
    return CoeffTable(A=A, B=B)


def table_from_B(B: Sequence[float], N: int, convention: Literal["stated", "consistent"] = "stated") -> CoeffTable:
    """A table whose ``A`` sequence is generated from ``B`` (orders through ``N + 1``)."""
    _check_order(N)
    Bx = list(B) + [0.0] * max(0, N + 2 - len(B))
    A = coeff_recurrence(Bx, min(N + 1, MAX_ORDER), convention)
    if len(A) < N + 2:
        A = A + [math.nan] * (N + 2 - len(A))
    return CoeffTable(A=A, B=Bx[: N + 2])


def _powers(z: complex, n: int) -> list[complex]:
    out = [complex(1.0, 0.0)]
    for _ in range(n):
        out.append(out[-1] * z)
    return out


def taylor_coeffs(ctx: BaseContext, table: CoeffTable, N: int):
    """Taylor coefficients ``a, b, c, d`` through order ``N``.

    ``a_n = sum_k S(n,k) A_k s^(n-k) omega^k`` and likewise ``q b_n`` (with
    ``B_k``), ``c_n`` (with ``A_{k+1}``), ``d_n`` (with ``B_{k+1}``).  The
    zeroth coefficients are ``A_0``, ``B_0/q``, ``A_1`` and ``B_1``.

    The results are also stored on ``table``.
    """
    _check_order(N)
    A, B = table.A, table.B
    if len(A) < N + 2 or len(B) < N + 2:
        raise DomainError(f"table must hold A and B through order {N + 1}")
    s_pow = _powers(ctx.s, N)
    w_pow = _powers(ctx.omega, N)
    q = ctx.q
    a = [complex(A[0])]
    b = [complex(B[0]) / q]
    c = [complex(A[1])]
    d = [complex(B[1])]
    for n in range(1, N + 1):
        sa = sb = sc = sd = 0j
        for k in range(1, n + 1):
            w = stirling2(n, k) * s_pow[n - k] * w_pow[k]
            sa += w * A[k]
            sb += w * B[k]
            sc += w * A[k + 1]
            sd += w * B[k + 1]
        a.append(sa)
        b.append(sb / q)
        c.append(sc)
        d.append(sd)
    table.a, table.b, table.c, table.d = a, b, c, d
    return a, b, c, d


def relation_residuals(ctx: BaseContext, coeffs, N: int) -> tuple[float, float, float]:
    """Largest defects of the three coefficient relations for ``n = 1..N``.

    1. ``a_n   = omega sum_k C(n-1,k-1) c_{k-1} s^(n-k)``
    2. ``q b_n = omega sum_k C(n-1,k-1) d_{k-1} s^(n-k)``
    3. ``c_n   = sum_k C(n,k) a_{n-k} d_k``
    """
    a, b, c, d = coeffs
    s_pow = _powers(ctx.s, N)
    om, q = ctx.omega, ctx.q
    r1 = r2 = r3 = 0.0
    for n in range(1, N + 1):
        e1 = om * sum(math.comb(n - 1, k - 1) * c[k - 1] * s_pow[n - k] for k in range(1, n + 1))
        e2 = om * sum(math.comb(n - 1, k - 1) * d[k - 1] * s_pow[n - k] for k in range(1, n + 1))
        e3 = sum(math.comb(n, k) * a[n - k] * d[k] for k in range(0, n + 1))
        r1 = max(r1, abs(a[n] - e1))
        r2 = max(r2, abs(q * b[n] - e2))
        r3 = max(r3, abs(c[n] - e3))
    return r1, r2, r3


def coefficient_relation_residuals(ctx: BaseContext, coeffs, N: int) -> float:
    """Maximum absolute defect over all three coefficient relations."""
    return max(relation_residuals(ctx, coeffs, N))


def phi(ctx: BaseContext, x) -> complex:
    """Series variable ``omega (q**x - 1)/s``, evaluated as ``q [x]_q``."""
    return ctx.q * q_analog(x, ctx)


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail: float  # |phi|**(N+1)/(N+1)!, the size of the first omitted unit-coefficient term
    terms: int


def tetra_series(
    ctx: BaseContext,
    x: float,
    N: int,
    which: SeriesKind = "tau",
    table: CoeffTable | None = None,
) -> SeriesValue:
    """Partial sum through ``phi**N`` of one of the four tetrational series.

    ``which`` selects ``tau(x)`` (coefficients ``A_n``), ``tau(x-1)``
    (``B_n/q``), ``mu(x)`` (``A_{n+1}``) or ``mu(x-1)`` (``B_{n+1}``).
    """
    _check_order(N)
    if not 0.0 <= x < 1.0:
        raise DomainError(f"series variable needs 0 <= x < 1, got {x}")
    if which not in SERIES_KINDS:
        raise ValueError(f"unknown series {which!r}")
    if table is None:
        table = determined_table(N)
    p = phi(ctx, x)
    if which == "tau":
        coef = table.A
    elif which == "tau_shift_minus1":
        coef = [complex(v) / ctx.q for v in table.B]
    elif which == "mu":
        coef = table.A[1:]
    else:
        coef = table.B[1:]
    if len(coef) < N + 1:
        raise DomainError(f"table too short for order {N}")
    term = complex(1.0, 0.0)  # phi**n / n!
    total = coef[0] * term
    for n in range(1, N + 1):
        term = term * p / n
        total += coef[n] * term
    tail = abs(p) ** (N + 1) / math.factorial(N + 1)
    return SeriesValue(total, tail, N + 1)


def shifted_coeffs(ctx: BaseContext, n: int, M: int) -> tuple[list[complex], list[complex]]:
    """Coefficients ``A^[n]_0..M`` and ``B^[n]_0..M`` of the series shifted by ``n``.

    They satisfy ``tau(x+n) = q**n sum_k A^[n]_k phi**k/k!`` and
    ``tau(x+n-1) = q**(n-1) sum_k B^[n]_k phi**k/k!`` on ``0 <= x < 1``,
    together with

        A^[n]_m = q**n sum_{k=1}^m C(m-1, k-1) A^[n]_{m-k} B^[n]_k.

    Matching the constant terms gives ``A^[n]_0 = tau(n)/q**n`` and
    ``B^[n]_0 = tau(n-1)/q**(n-1)``; ``B^[n] = A^[n-1]`` because both
    describe the same segment.  Only ``n >= 0`` is supported: below that the
    segment value is a logarithm of ``[x]_q`` and has no series at ``x = 0``.

    Raises
    ------
    OverflowError
        If ``tau(n)`` overflows.
    """
    _check_order(M)
    if n < 0:
        raise DomainError("shifted series exist only for n >= 0")
    q = ctx.q
    A = [complex(1.0, 0.0)] * (M + 1)
    B = [complex(1.0 if m == 1 else 0.0, 0.0) for m in range(M + 1)]
    for j in range(1, n + 1):
        t = tau(ctx, j)
        if not t.ok:
            raise OverflowError(f"tau({j}) is not finite: {t.status.value}")
        qj = q**j
        B = A
        A = [t.value / qj]
        for m in range(1, M + 1):
            acc = sum(math.comb(m - 1, k - 1) * A[m - k] * B[k] for k in range(1, m + 1))
            A.append(qj * acc)
    return A, B


def shifted_series(ctx: BaseContext, n: int, x: float, M: int) -> complex:
    """Evaluate ``q**n sum_{k<=M} A^[n]_k phi(x)**k/k!`` (approximates ``tau(x+n)``)."""
    A, _ = shifted_coeffs(ctx, n, M)
    p = phi(ctx, x)
    term = complex(1.0, 0.0)
    total = A[0]
    for k in range(1, M + 1):
        term = term * p / k
        total += A[k] * term
    return ctx.q**n * total
