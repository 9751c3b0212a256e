"""Zero-error capacity and constant-weight capacity.

The characteristic series is

    v(x) = (q - 1) * sum over blocks (i, j) of x**L(i, j),

whose unique positive root of ``v(x) = 1`` is ``rho``; the capacity is
``-log2(rho)`` bits per symbol.  All exponents ``L(i, j)`` are distinct, so a
series truncated before exponent ``K`` misses at most
``(q - 1) * x**K / (1 - x)``.  Root finding is plain bisection in mpmath at a
working precision derived from the requested tolerance; every sign decision
is certified by that tail bound.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, List, NamedTuple, Optional, Tuple

import mpmath
from mpmath import mpf

from .core import INF, ChannelParams, InvariantViolation, format_r
from .codebook import count

DEFAULT_TOL = 1e-12
# tighter tolerances start from a root this accurate and polish it
COARSE_TOL = 1e-15
# upper end of the bracket for q = 2, where v diverges at 1
Q2_EPS = mpf(2) ** -20


def working_precision(tol) -> int:
    bits = -math.log2(float(tol)) if tol > 0 else 53
    return max(96, int(math.ceil(bits)) + 48)


def _level_lengths(params: ChannelParams, i: int) -> Iterator[Tuple[int, int, int]]:
    step = params.r * params.ell + 1
    L, j = i, 0
    while True:
        yield L, i, j
        L = L * step + params.ell
        j += 1


@dataclass(frozen=True)
class CharSeries:
    params: ChannelParams

    @property
    def finite(self) -> bool:
        return not self.params.bounded

    def terms(self) -> Iterator[Tuple[int, int, int]]:
        """``(L, i, j)`` by increasing exponent ``L``; each has multiplicity q - 1."""
        p = self.params
        if not p.bounded:
            return iter([(i, i, 0) for i in range(1, p.ell + 1)])
        return heapq.merge(*(_level_lengths(p, i) for i in range(1, p.ell + 1)))


class SeriesValue(NamedTuple):
    value: mpf
    tail: mpf
    levels: int


def eval_v(series: CharSeries, x, max_level: Optional[int] = None,
           tail_tol=None) -> SeriesValue:
    """Partial sum of ``v(x)`` with a bound on the omitted tail.

    Truncation is either at a level count (``j < max_level``) or as soon as
    the tail bound drops to ``tail_tol``.
    """
    x = mpf(x)
    mult = series.params.q - 1
    if x <= 0:
        raise ValueError("v is evaluated on (0, 1)")
    if series.finite:
        return SeriesValue(mult * sum(x ** L for L, _, _ in series.terms()), mpf(0), 1)
    if x >= 1:
        raise ValueError("the series diverges for x >= 1")
    if max_level is None and tail_tol is None:
        tail_tol = mpf(2) ** (-mpmath.mp.prec)
    total = mpf(0)
    levels = 0
    for L, _, j in series.terms():
        tail = mult * x ** L / (1 - x)
        if max_level is not None and j >= max_level:
            return SeriesValue(total, tail, levels)
        if tail_tol is not None and tail <= tail_tol:
            return SeriesValue(total, tail, levels)
        total += mult * x ** L
        levels = max(levels, j + 1)
    raise AssertionError("unreachable: the series is infinite")


def _compare_v(series: CharSeries, x, eps) -> Tuple[int, int]:
    """Sign of ``v(x) - 1`` (0 only if undecidable below ``eps``) and levels used."""
    mult = series.params.q - 1
    if series.finite:
        d = eval_v(series, x).value - 1
        return (d > 0) - (d < 0), 1
    total = mpf(0)
    levels = 0
    for L, _, j in series.terms():
        term = mult * x ** L
        tail = term / (1 - x)
        if total > 1:
            return 1, levels
        if total + tail < 1:
            return -1, levels
        if tail <= eps:
            d = total - 1
            return (d > 0) - (d < 0), levels
        total += term
        levels = max(levels, j + 1)
    raise AssertionError("unreachable: the series is infinite")


@dataclass(frozen=True)
class CapacityResult:
    params: ChannelParams
    rho: mpf
    c0: mpf
    truncation_J: int
    root_tolerance: mpf


@lru_cache(maxsize=4096)
def solve_rho(params: ChannelParams, tol: float = DEFAULT_TOL) -> CapacityResult:
    if tol <= 0:
        raise ValueError("tol must be positive")
    series = CharSeries(params)
    q = params.q
    if tol < COARSE_TOL:
        coarse = solve_rho(params, COARSE_TOL)
        if coarse.root_tolerance == 0:
            return coarse
        polished = _polish(params, series, coarse.rho, tol)
        if polished is not None:
            return polished
    with mpmath.workprec(working_precision(tol)):
        tol_m = mpf(tol)
        eps = tol_m * mpf(2) ** -24
        lo = mpf(1) / q
        if q >= 3:
            hi = mpf(1) / (q - 1)
        elif series.finite:
            hi = mpf(1)
        else:
            hi = 1 - Q2_EPS
        depth = 0
        s_lo, J = _compare_v(series, lo, eps)
        if s_lo >= 0:
            raise InvariantViolation(f"v(1/q) >= 1 for {params}")
        s_hi, J_hi = _compare_v(series, hi, eps)
        while s_hi < 0:
            if q != 2 or series.finite or depth > 200:
                raise InvariantViolation(f"no bracket for the root of v = 1 ({params})")
            hi = 1 - (1 - hi) / 2
            depth += 1
            s_hi, J_hi = _compare_v(series, hi, eps)
        J = max(J, J_hi)
        if s_hi == 0 and series.finite:
            # polynomial hits 1 exactly at the upper end (binary, ell = 1)
            return CapacityResult(params, +hi, -mpmath.log(hi, 2), J, mpf(0))
        while hi - lo > tol_m:
            mid = (lo + hi) / 2
            s, used = _compare_v(series, mid, eps)
            J = max(J, used)
            if s < 0:
                lo = mid
            else:
                hi = mid
        rho = (lo + hi) / 2
        c0 = -mpmath.log(rho, 2)
        return CapacityResult(params, +rho, +c0, J, (hi - lo) / 2)


def _polish(params, series, x, tol) -> Optional[CapacityResult]:
    """Newton steps from a coarse root, then a certified bracket of width ``tol``.

    Returns None when the bracket cannot be certified (caller bisects).
    """
    mult = params.q - 1
    with mpmath.workprec(working_precision(tol)):
        tol_m = mpf(tol)
        eps = tol_m * mpf(2) ** -24
        x = mpf(x)
        for _ in range(12):
            s0, s1 = _moments(params, x, eps)
            step = (mult * s0 - 1) * x / (mult * s1)
            x -= step
            if abs(step) < tol_m / 8:
                break
        lo, hi = x - tol_m / 2, x + tol_m / 2
        if lo <= 0 or (not series.finite and hi >= 1):
            return None
        s_lo, j_lo = _compare_v(series, lo, eps)
        s_hi, j_hi = _compare_v(series, hi, eps)
        if s_lo >= 0 or s_hi <= 0:
            return None
        return CapacityResult(params, +x, -mpmath.log(x, 2), max(j_lo, j_hi), tol_m / 2)


def capacity(params: ChannelParams, tol: float = DEFAULT_TOL) -> mpf:
    return solve_rho(params, tol).c0


def _moments(params: ChannelParams, x, eps) -> Tuple[mpf, mpf]:
    """``(sum x**L, sum L * x**L)`` over all blocks, per unit multiplicity."""
    series = CharSeries(params)
    if series.finite or x == 0:
        terms = list(series.terms()) if series.finite else [(1, 1, 0)]
        return (sum(x ** L for L, _, _ in terms), sum(L * x ** L for L, _, _ in terms))
    s0 = mpf(0)
    s1 = mpf(0)
    for L, _, _ in series.terms():
        xk = x ** L
        t0 = xk / (1 - x)
        t1 = xk * (L - (L - 1) * x) / (1 - x) ** 2
        if s0 > 0 and t0 <= eps * s0 and t1 <= eps * s1:
            return s0, s1
        s0 += xk
        s1 += L * xk
    raise AssertionError("unreachable: the series is infinite")


def _mean_length(params, x, eps):
    if x == 0:
        return mpf(1)
    s0, s1 = _moments(params, x, eps)
    return s1 / s0


@dataclass(frozen=True)
class CWCapacityResult:
    params: ChannelParams
    omega: mpf
    rho_omega: mpf
    c0_omega: mpf
    clipped: bool = False


def cw_capacity(params: ChannelParams, omega, tol: float = DEFAULT_TOL) -> CWCapacityResult:
    """Constant-weight capacity at relative weight ``omega``.

    ``rho_omega`` solves ``sum (L - 1/omega) x**L = 0``, i.e. the mean block
    length under weights ``x**L`` equals ``1/omega``.  That mean increases
    with ``x``, which gives the bracket.  For unbounded ``r`` the mean stays
    below ``(ell + 1)/2`` on ``(0, 1]``; small weights then sit at ``x = 1``
    (``clipped``), where the rate is ``omega * log2((q - 1) * ell)``.
    """
    q = params.q
    with mpmath.workprec(working_precision(tol)):
        om = mpf(omega)
        if om < 0 or om > 1:
            raise ValueError(f"omega must lie in [0, 1], got {omega}")
        if om == 0:
            return CWCapacityResult(params, om, mpf(1), mpf(0))
        if om == 1:
            return CWCapacityResult(params, om, mpf(0), mpmath.log(q - 1, 2))
        target = 1 / om
        tol_m = mpf(tol)
        eps = tol_m * mpf(2) ** -24
        clipped = False
        lo = mpf(0)
        if not params.bounded:
            hi = mpf(1)
            if _mean_length(params, hi, eps) <= target:
                clipped = True
                lo = hi
        else:
            hi = 1 - Q2_EPS
            depth = 0
            while _mean_length(params, hi, eps) <= target:
                if depth > 400:
                    raise InvariantViolation(f"no bracket for rho_omega at omega={omega}")
                hi = 1 - (1 - hi) / 2
                depth += 1
        while hi - lo > tol_m:
            mid = (lo + hi) / 2
            if _mean_length(params, mid, eps) < target:
                lo = mid
            else:
                hi = mid
        x = (lo + hi) / 2
        s0, _ = _moments(params, x, eps)
        c0 = om * mpmath.log((q - 1) * s0, 2) - mpmath.log(x, 2)
        return CWCapacityResult(params, +om, +x, +c0, clipped)


class OmegaStar(NamedTuple):
    omega: mpf
    rho: mpf
    c0: mpf
    degenerate: bool


def omega_star(params: ChannelParams, tol: float = DEFAULT_TOL, verify: bool = False) -> OmegaStar:
    """Relative weight at which the constant-weight capacity peaks.

    ``degenerate`` marks channels with zero capacity (binary, ``ell = 1``,
    unbounded ``r``), where the curve is identically 0 and the maximiser
    carries no information.  With ``verify`` a golden-section search over
    ``omega`` confirms that no weight beats the returned one.
    """
    res = solve_rho(params, tol)
    with mpmath.workprec(working_precision(tol)):
        eps = mpf(tol) * mpf(2) ** -24
        _, s1 = _moments(params, res.rho, eps)
        omega = 1 / ((params.q - 1) * s1)
        degenerate = res.c0 < 10 * tol
        out = OmegaStar(+omega, res.rho, res.c0, bool(degenerate))
    if verify and not degenerate:
        _check_peak(params, out, tol)
    return out


def _check_peak(params, star: OmegaStar, tol):
    scan_tol = max(tol, 1e-12)
    f = lambda w: cw_capacity(params, w, scan_tol).c0_omega
    invphi = (mpmath.sqrt(5) - 1) / 2
    a, b = mpf(scan_tol), 1 - mpf(scan_tol)
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-7:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    best_w, best = (c, fc) if fc > fd else (d, fd)
    at_star = f(star.omega)
    if best > at_star + 10 * scan_tol or abs(at_star - star.c0) > 10 * scan_tol:
        raise InvariantViolation(
            f"constant-weight capacity peaks at {best_w} ({best}), not at omega*={star.omega}"
        )


class CapacityRow(NamedTuple):
    q: int
    ell: int
    r: object
    rho: mpf
    c0: mpf
    c0_inf: mpf
    penalty: mpf


def capacity_table(grid: Iterable[Tuple[int, int, object]], tol: float = DEFAULT_TOL) -> List[CapacityRow]:
    rows = []
    for q, ell, r in grid:
        res = solve_rho(ChannelParams(q, ell, r), tol)
        inf = solve_rho(ChannelParams(q, ell, INF), tol)
        with mpmath.workprec(working_precision(tol)):
            penalty = mpmath.log(inf.rho / res.rho, 2)
        rows.append(CapacityRow(q, ell, r, res.rho, res.c0, inf.c0, +penalty))
    return rows


def code_rate(params: ChannelParams, n: int, weight: Optional[int] = None) -> float:
    """``log2 |C(n)| / n`` (or of ``C(n; weight)``) from exact counts."""
    table = count(params, n, max_weight=weight)
    size = table.size(n, weight)
    return math.log2(size) / n


CAPACITY_COLUMNS = ("q", "ell", "r", "rho", "c0", "c0_inf", "penalty")
CW_COLUMNS = ("q", "ell", "r", "omega", "rho_omega", "c0_omega")


def row_values(row: CapacityRow, digits: int = 15) -> list:
    return [row.q, row.ell, format_r(row.r)] + [mpmath.nstr(v, digits) for v in row[3:]]
