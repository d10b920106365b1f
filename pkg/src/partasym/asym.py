"""Asymptotic main terms for p(n), p_S(n) and p_{-S}(n) at extended precision.

All reals are ``mpmath.mpf`` values evaluated under ``mp.workprec(prec)``;
``prec`` defaults to 256 bits.  The ``log_*`` variants stay finite for
arguments where the linear value would be astronomically large.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

import mpmath
from mpmath import mp, mpf

from .config import DEFAULT_PRECISION_BITS, DomainError
from .count import ForbiddenSet, as_set, avoiding_count_dp, avoiding_count_ie, partition_count

P_MODES = ("exact", "hr_strong", "hr_leading")


@dataclass(frozen=True)
class HRConstants:
    C: mpf
    D: mpf
    precision_bits: int


def hr_constants(prec: int = DEFAULT_PRECISION_BITS, D=None) -> HRConstants:
    """C = pi*sqrt(2/3); D defaults to 3C/4 and must lie strictly in (C/2, C)."""
    with mp.workprec(prec):
        C = mp.pi * mp.sqrt(mpf(2) / 3)
        D = C * 3 / 4 if D is None else mpf(D)
        if not C / 2 < D < C:
            raise DomainError(f"D={D} outside (C/2, C)")
        return HRConstants(+C, +D, prec)


def hr_C(prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    with mp.workprec(prec):
        return mp.pi * mp.sqrt(mpf(2) / 3)


@dataclass(frozen=True)
class LambdaN:
    n: int
    value: mpf

    @classmethod
    def of(cls, n, prec: int = DEFAULT_PRECISION_BITS) -> "LambdaN":
        if n < 1:
            raise DomainError(f"lambda_n needs n >= 1, got {n}")
        with mp.workprec(prec):
            return cls(n, mp.sqrt(mpf(n) - mpf(1) / 24))


def guard_prec(n, prec: int) -> int:
    """Working precision for e^{C sqrt n}: the exponent's integer bits are lost to rounding."""
    return prec + 24 + max(0, int(mp.mag(mpf(n))) // 2 + 2)


def _check_n(n) -> None:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")


def log_hr_leading(n, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """C*sqrt(n) - log(4*n*sqrt(3)); ``n`` may be any real >= 1."""
    _check_n(n)
    with mp.workprec(prec + 24):
        n = mpf(n)
        v = hr_C(prec + 24) * mp.sqrt(n) - mp.log(4 * n * mp.sqrt(3))
    with mp.workprec(prec):
        return +v


def hr_leading(n, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    wp = guard_prec(n, prec)
    with mp.workprec(wp):
        v = mp.exp(log_hr_leading(n, wp))
    with mp.workprec(prec):
        return +v


def log_hr_strong(n, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    _check_n(n)
    with mp.workprec(prec + 24):
        C = hr_C(prec + 24)
        lam = mp.sqrt(mpf(n) - mpf(1) / 24)
        v = C * lam - mp.log(4 * mp.pi * mp.sqrt(2) * lam**2) + mp.log(C - 1 / lam)
    with mp.workprec(prec):
        return +v


def hr_strong(n, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """e^{C*lam}/(4*pi*sqrt(2)*lam^2) * (C - 1/lam) with lam = sqrt(n - 1/24)."""
    _check_n(n)
    wp = guard_prec(n, prec)
    with mp.workprec(wp):
        C = hr_C(wp)
        lam = mp.sqrt(mpf(n) - mpf(1) / 24)
        v = mp.exp(C * lam) / (4 * mp.pi * mp.sqrt(2) * lam**2) * (C - 1 / lam)
    with mp.workprec(prec):
        return +v


def strong_error_envelope(n, D=None, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """Heuristic relative error scale e^{D sqrt(n)} / hr_strong(n); the implied constant is unknown."""
    with mp.workprec(prec):
        consts = hr_constants(prec, D)
        return mp.exp(consts.D * mp.sqrt(n) - log_hr_strong(n, prec))


def schur_estimate(n, allowed, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """n^{t-1} / ((t-1)! * prod(allowed)) for a finite allowed set with gcd 1."""
    _check_n(n)
    allowed = as_set(allowed)
    t = allowed.t
    if t == 0:
        raise DomainError("allowed set must be nonempty")
    g = 0
    for s in allowed:
        g = gcd(g, s)
    if g != 1:
        raise DomainError(f"gcd of allowed parts is {g}, Schur asymptotic needs gcd 1")
    with mp.workprec(prec):
        denom = mp.factorial(t - 1)
        for s in allowed:
            denom *= s
        return mpf(n) ** (t - 1) / denom


def _p_factor(n, p_mode: str, prec: int) -> mpf:
    if p_mode == "exact":
        return mpf(partition_count(n))
    if p_mode == "hr_strong":
        return hr_strong(n, prec)
    if p_mode == "hr_leading":
        return hr_leading(n, prec)
    raise DomainError(f"unknown p_mode {p_mode!r}; expected one of {P_MODES}")


def comp_schur_factor(n, S, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """prod over s in S of C*s/(2*sqrt(n))."""
    S = as_set(S)
    with mp.workprec(prec + 16):
        C = hr_C(prec + 16)
        root = mp.sqrt(n)
        out = mpf(1)
        for s in S:
            out *= C * s / (2 * root)
    with mp.workprec(prec):
        return +out


def comp_schur_estimate(n, S, p_mode: str = "exact", prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """p(n) * prod_{s in S} C*s/(2*sqrt(n)), with p(n) taken from ``p_mode``."""
    _check_n(n)
    wp = prec + 16
    with mp.workprec(wp):
        v = _p_factor(n, p_mode, wp) * comp_schur_factor(n, S, wp)
    with mp.workprec(prec):
        return +v


def log_ratio(exact: int, estimate: mpf, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    with mp.workprec(prec):
        return mp.log(mpf(exact)) - mp.log(estimate)


@dataclass(frozen=True)
class RatioRow:
    n: int
    exact: int
    estimate: mpf
    ratio: mpf
    abs_err: mpf

    def as_strings(self, digits: int) -> list[str]:
        fmt = lambda v: mpmath.nstr(v, digits, strip_zeros=False)
        return [str(self.n), str(self.exact), fmt(self.estimate), fmt(self.ratio), fmt(self.abs_err)]


def ratio_row(n: int, S, p_mode: str = "exact", prec: int = DEFAULT_PRECISION_BITS,
              method: str = "ie") -> RatioRow:
    S = as_set(S)
    exact = avoiding_count_ie(n, S) if method == "ie" else avoiding_count_dp(n, S)
    with mp.workprec(prec):
        est = comp_schur_estimate(n, S, p_mode, prec)
        ratio = mp.exp(log_ratio(exact, est, prec)) if exact > 0 else mpf(0)
        return RatioRow(n, exact, est, ratio, abs(ratio - 1))


def ratio_report(n_grid: Iterable[int], S, p_mode: str = "exact",
                 prec: int = DEFAULT_PRECISION_BITS, method: str = "ie") -> list[RatioRow]:
    """Rows (n, exact p_{-S}(n), estimate, ratio, |ratio - 1|) over an ascending grid."""
    grid = list(n_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError(f"grid must be strictly ascending: {grid}")
    if grid:
        # one pass to fill the memo before per-row work
        partition_count(grid[-1])
    return [ratio_row(n, S, p_mode, prec, method) for n in grid]


__all__ = [
    "ForbiddenSet",
    "HRConstants",
    "LambdaN",
    "RatioRow",
    "comp_schur_estimate",
    "comp_schur_factor",
    "hr_constants",
    "hr_leading",
    "hr_strong",
    "log_hr_leading",
    "log_hr_strong",
    "ratio_report",
    "ratio_row",
    "schur_estimate",
    "strong_error_envelope",
]
