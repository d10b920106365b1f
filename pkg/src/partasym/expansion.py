"""Truncated series in x = n^(-1/2) whose coefficients are polynomials in s.

Builds the coefficient polynomials of the expansion

    p(n - s) ~ e^{C sqrt n} / (4 pi n sqrt 2) * sum_z g(z, s) n^{-z/2}

from three ingredients: the constants a_k of e^{-C sqrt n} q(n), the
polynomials f(w, s) from re-expanding (n - s)^{-k/2-1}, and the polynomials
d(i, s) of e^{C sqrt(n-s) - C sqrt n}.  Coefficients are mpf at the working
precision; the alternating-sum identity is checked with exact integers.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Iterable, Sequence

import mpmath
from mpmath import mp, mpf

from .asym import hr_C
from .config import DEFAULT_PRECISION_BITS, DomainError, check_cap
from .count import partition_count, signed_subset_sums


def _is_zero(c) -> bool:
    return c == 0


class SPoly:
    """Univariate polynomial in the formal symbol s; ``coeffs[j]`` multiplies s^j.

    Coefficients may be ints, Fractions or mpf; arithmetic only uses + and *.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "SPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, j: int):
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def __add__(self, other):
        other = _as_spoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SPoly(self.coeff(j) + other.coeff(j) for j in range(n))

    __radd__ = __add__

    def __neg__(self):
        return SPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_spoly(other))

    def __rsub__(self, other):
        return _as_spoly(other) - self

    def __mul__(self, other):
        if isinstance(other, (Number, mpf)):
            return SPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return SPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return SPoly(out)

    __rmul__ = __mul__

    def __call__(self, s):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def __eq__(self, other):
        if isinstance(other, (Number, mpf)):
            other = SPoly.const(other)
        return isinstance(other, SPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"SPoly({list(self.coeffs)!r})"

    def to_json(self, digits: int | None = None) -> list[str]:
        return [_num_str(c, digits) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "SPoly":
        return cls(mpf(c) for c in data)


def _as_spoly(v) -> SPoly:
    return v if isinstance(v, SPoly) else SPoly.const(v)


def _num_str(c, digits: int | None) -> str:
    if isinstance(c, mpf):
        if digits is None:
            digits = mpmath.libmp.prec_to_dps(mp.prec) + 1
        return mpmath.nstr(c, digits, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf) \
            if abs(c) < 1e30 else mpmath.nstr(c, digits, strip_zeros=False)
    return str(c)


class SeriesPoly:
    """Truncated series sum_{k<=order} coeffs[k] x^k with SPoly coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable = ()):
        if order < 0:
            raise DomainError("truncation order must be >= 0")
        cs = [_as_spoly(c) for c in coeffs][: order + 1]
        cs += [SPoly()] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = cs

    @classmethod
    def one(cls, order: int) -> "SeriesPoly":
        return cls(order, [SPoly.const(1)])

    @classmethod
    def monomial(cls, order: int, power: int, coeff) -> "SeriesPoly":
        cs = [SPoly()] * (order + 1)
        if power <= order:
            cs[power] = _as_spoly(coeff)
        return cls(order, cs)

    def __getitem__(self, k: int) -> SPoly:
        return self.coeffs[k] if 0 <= k <= self.order else SPoly()

    def truncate(self, order: int) -> "SeriesPoly":
        return SeriesPoly(order, self.coeffs[: order + 1])

    def _check(self, other: "SeriesPoly") -> None:
        if self.order != other.order:
            raise DomainError(f"truncation orders differ: {self.order} vs {other.order}")

    def __add__(self, other):
        if not isinstance(other, SeriesPoly):
            other = SeriesPoly(self.order, [other])
        self._check(other)
        return SeriesPoly(self.order, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return SeriesPoly(self.order, (-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, SeriesPoly) else SPoly.const(-other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SeriesPoly):
            return SeriesPoly(self.order, (c * other for c in self.coeffs))
        return series_mul(self, other)

    __rmul__ = __mul__

    def mul_x(self) -> "SeriesPoly":
        return SeriesPoly(self.order, [SPoly()] + self.coeffs[:-1])

    def div_x(self) -> "SeriesPoly":
        """Divide by x; the result is known only to order - 1."""
        if not self.coeffs[0].is_zero():
            raise DomainError("div_x needs a zero constant term")
        return SeriesPoly(self.order - 1, self.coeffs[1:])

    def evaluate(self, x, s=0):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c(s)
        return acc

    def __repr__(self):
        return f"SeriesPoly({self.order}, {self.coeffs!r})"

    def to_json(self, digits: int | None = None) -> dict:
        return {"order": self.order, "coeffs": [c.to_json(digits) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "SeriesPoly":
        return cls(data["order"], [SPoly.from_json(c) for c in data["coeffs"]])


def series_mul(a: SeriesPoly, b: SeriesPoly) -> SeriesPoly:
    a._check(b)
    T = a.order
    out = []
    for k in range(T + 1):
        acc = SPoly()
        for i in range(k + 1):
            if a.coeffs[i].coeffs and b.coeffs[k - i].coeffs:
                acc = acc + a.coeffs[i] * b.coeffs[k - i]
        out.append(acc)
    return SeriesPoly(T, out)


def series_exp(u: SeriesPoly) -> SeriesPoly:
    """exp(u) for a series with zero constant term, via k E_k = sum_j j u_j E_{k-j}."""
    if not u[0].is_zero():
        raise DomainError("series_exp needs a zero constant term")
    T = u.order
    E = [SPoly.const(1)]
    for k in range(1, T + 1):
        acc = SPoly()
        for j in range(1, k + 1):
            if u.coeffs[j].coeffs and E[k - j].coeffs:
                acc = acc + u.coeffs[j] * E[k - j] * j
        E.append(_scale(acc, Fraction(1, k)))
    return SeriesPoly(T, E)


def series_binom(base: SeriesPoly, alpha) -> SeriesPoly:
    """base^alpha for base = 1 + u with u(0) = 0, any rational alpha.

    Uses (1 + u) B' = alpha u' B, i.e. k B_k = sum_j (alpha j - (k - j)) u_j B_{k-j}.
    """
    if base[0] != SPoly.const(1):
        raise DomainError("series_binom needs constant term 1")
    alpha = Fraction(alpha)
    T = base.order
    B = [SPoly.const(1)]
    for k in range(1, T + 1):
        acc = SPoly()
        for j in range(1, k + 1):
            u = base.coeffs[j]
            if u.coeffs and B[k - j].coeffs:
                w = alpha * j - (k - j)
                if w:
                    acc = acc + _scale(u * B[k - j], w)
        B.append(_scale(acc, Fraction(1, k)))
    return SeriesPoly(T, B)


def _scale(poly: SPoly, q: Fraction) -> SPoly:
    """Multiply by a rational, keeping Fraction coefficients exact.

    mpf * Fraction would silently go through float, so mpf coefficients get
    an mpf copy of ``q`` instead.
    """
    if q.denominator == 1:
        return poly * int(q)
    qm = None
    out = []
    for c in poly.coeffs:
        if isinstance(c, mpf):
            if qm is None:
                qm = mpf(q.numerator) / q.denominator
            out.append(c * qm)
        else:
            out.append(c * q)
    return SPoly(out)


def gen_binomial(alpha, l: int) -> Fraction:
    """binom(alpha, l) = alpha (alpha-1) ... (alpha-l+1) / l! for rational alpha."""
    alpha = Fraction(alpha)
    out = Fraction(1)
    for j in range(l):
        out = out * (alpha - j) / (j + 1)
    return out


def _sqrt_shift_exponent(T: int, x2_coeff: SPoly, C: mpf) -> SeriesPoly:
    """(C/x) * ((1 + c x^2)^{1/2} - 1) as a series of order T."""
    base = SeriesPoly.one(T + 1) + SeriesPoly.monomial(T + 1, 2, x2_coeff)
    root = series_binom(base, Fraction(1, 2))
    return (root - 1).div_x() * C


@lru_cache(maxsize=None)
def _a_series(T: int, prec: int) -> tuple:
    with mp.workprec(prec):
        C = hr_C(prec)
        shrink = SeriesPoly.one(T) + SeriesPoly.monomial(T, 2, mpf(-1) / 24)
        # e^{C(lambda_n - sqrt n)} with lambda_n = sqrt(n) (1 - x^2/24)^{1/2}
        expo = series_exp(_sqrt_shift_exponent(T, SPoly.const(mpf(-1) / 24), C))
        inv_lam2 = series_binom(shrink, -1)  # n / lambda_n^2
        inv_lam = series_binom(shrink, Fraction(-1, 2)).mul_x()  # 1 / lambda_n
        bracket = expo * inv_lam2 * (C - inv_lam)
        return tuple(bracket[k].coeff(0) for k in range(T + 1))


def compute_a_coeffs(t: int, prec: int = DEFAULT_PRECISION_BITS) -> list[mpf]:
    """a_0..a_t with e^{-C sqrt n} q(n) = sum_k a_k n^{-k/2-1} + O(n^{-(t+3)/2})."""
    if t < 0:
        raise DomainError("t must be >= 0")
    if t > 16:
        raise DomainError(f"t={t} exceeds the supported order 16")
    return list(_a_series(2 * t + 2, prec)[: t + 1])


def q_scaled(n, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """e^{-C sqrt n} q(n), evaluated directly from lambda_n."""
    with mp.workprec(prec):
        C = hr_C(prec)
        n = mpf(n)
        lam = mp.sqrt(n - mpf(1) / 24)
        return mp.exp(C * (lam - mp.sqrt(n))) / lam**2 * (C - 1 / lam)


def a_series_residual(t: int, n, prec: int = DEFAULT_PRECISION_BITS) -> tuple[mpf, mpf]:
    """(|q_scaled(n) - sum_k a_k n^{-k/2-1}|, n^{-(t+3)/2})."""
    a = compute_a_coeffs(t, prec)
    with mp.workprec(prec):
        x = 1 / mp.sqrt(n)
        approx = sum(a[k] * x ** (k + 2) for k in range(t + 1))
        return abs(q_scaled(n, prec) - approx), x ** (t + 3)


def compute_f_poly(w: int, a: Sequence | None = None, prec: int = DEFAULT_PRECISION_BITS) -> SPoly:
    """f(w, s) = sum_{k + 2l = w} (-1)^l a_k binom(-1 - k/2, l) s^l."""
    if w < 0:
        raise DomainError("w must be >= 0")
    if a is None:
        a = compute_a_coeffs(w, prec)
    with mp.workprec(prec):
        coeffs = [mpf(0)] * (w // 2 + 1)
        for l in range(w // 2 + 1):
            k = w - 2 * l
            if k >= len(a):
                continue
            b = gen_binomial(Fraction(-2 - k, 2), l)
            coeffs[l] += (-1) ** l * a[k] * (mpf(b.numerator) / b.denominator)
        return SPoly(coeffs)


@lru_cache(maxsize=None)
def _d_series(T: int, prec: int) -> SeriesPoly:
    with mp.workprec(prec):
        C = hr_C(prec)
        # e^{C sqrt(n - s) - C sqrt n} = exp((C/x)((1 - s x^2)^{1/2} - 1))
        return series_exp(_sqrt_shift_exponent(T, SPoly([0, -1]), C))


def compute_d_poly(i: int, prec: int = DEFAULT_PRECISION_BITS) -> SPoly:
    if i < 0:
        raise DomainError("i must be >= 0")
    return _d_series(max(2 * i + 2, 2), prec)[i]


@lru_cache(maxsize=None)
def _g_polys(t: int, prec: int) -> tuple:
    with mp.workprec(prec):
        a = compute_a_coeffs(t, prec)
        f = [compute_f_poly(w, a, prec) for w in range(t + 1)]
        d = _d_series(2 * t + 2, prec)
        return tuple(
            sum((d[i] * f[z - i] for i in range(z + 1)), SPoly())
            for z in range(t + 1)
        )


def compute_g_poly(z: int, prec: int = DEFAULT_PRECISION_BITS) -> SPoly:
    """g(z, s) = sum_{i + w = z} d(i, s) f(w, s)."""
    if z < 0:
        raise DomainError("z must be >= 0")
    return _g_polys(z, prec)[z]


def g_leading_coeff(z: int, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """(-1)^z C^{z+1} / (2^z z!)."""
    with mp.workprec(prec):
        C = hr_C(prec)
        return (-1) ** z * C ** (z + 1) / (2**z * mp.factorial(z))


def d_leading_coeff(i: int, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    with mp.workprec(prec):
        C = hr_C(prec)
        return (-1) ** i * C**i / (2**i * mp.factorial(i))


def expansion_main_term(n: int, s: int, t: int, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """e^{C sqrt n}/(4 pi n sqrt 2) * sum_{z<=t} g(z, s) n^{-z/2}."""
    g = _g_polys(t, prec)
    with mp.workprec(prec):
        C = hr_C(prec)
        x = 1 / mp.sqrt(n)
        total = sum(g[z](s) * x**z for z in range(t + 1))
        return mp.exp(C * mp.sqrt(n)) / (4 * mp.pi * n * mp.sqrt(2)) * total


def verify_expansion(n: int, s: int, t: int, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """(p(n - s) - main term) / (e^{C sqrt n} n^{-(t+3)/2})."""
    if not n > s >= 1:
        raise DomainError(f"need n > s >= 1, got n={n}, s={s}")
    if t < 0:
        raise DomainError("t must be >= 0")
    exact = partition_count(n - s)
    with mp.workprec(prec):
        C = hr_C(prec)
        resid = mpf(exact) - expansion_main_term(n, s, t, prec)
        return resid / (mp.exp(C * mp.sqrt(n)) * mpf(n) ** (-mpf(t + 3) / 2))


def predicted_residual(s: int, t: int, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """Large-n limit of ``verify_expansion``: g(t+1, s) / (4 pi sqrt 2)."""
    with mp.workprec(prec):
        return compute_g_poly(t + 1, prec)(s) / (4 * mp.pi * mp.sqrt(2))


def alternating_moment(svals: Sequence[int], z: int) -> int:
    """sum over J subset of [t] of (-1)^|J| (sum_{i in J} s_i)^z, exactly (0^0 = 1)."""
    check_cap("moment_cap", len(svals))
    if z < 0:
        raise DomainError("z must be >= 0")
    return sum(c * e**z for e, c in signed_subset_sums(svals).items())


def top_moment_value(svals: Sequence[int]) -> int:
    """(-1)^t t! prod s_i, the value of alternating_moment at z = t."""
    t = len(svals)
    out = (-1) ** t
    for k in range(2, t + 1):
        out *= k
    for s in svals:
        out *= s
    return out


def alternating_poly_moment(svals: Sequence[int], poly: SPoly):
    """sum_J (-1)^|J| poly(sum_J s); zero whenever deg poly <= t - 1.

    Returns the exact value (int/Fraction for rational coefficients).
    """
    t = len(svals)
    check_cap("moment_cap", t)
    if poly.degree >= t:
        raise DomainError(f"polynomial degree {poly.degree} must be <= t - 1 = {t - 1}")
    coeffs = [Fraction(c) for c in poly.coeffs]
    p = SPoly(coeffs)
    return sum(c * p(e) for e, c in signed_subset_sums(svals).items())


__all__ = [
    "SPoly",
    "SeriesPoly",
    "a_series_residual",
    "alternating_moment",
    "alternating_poly_moment",
    "compute_a_coeffs",
    "compute_d_poly",
    "compute_f_poly",
    "compute_g_poly",
    "gen_binomial",
    "g_leading_coeff",
    "predicted_residual",
    "q_scaled",
    "series_binom",
    "series_exp",
    "series_mul",
    "verify_expansion",
]
