"""Partition ideals: subpartition order, basis-avoiding counts, Cohen-Remmel
checks, the growth bound for bases with independent elements, and the
oscillating interval-ideal construction with its log-space certificate.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil, isqrt
from operator import add, sub
from typing import Iterable, Sequence

from mpmath import mp, mpf

from .asym import comp_schur_factor, hr_C, log_hr_leading
from .config import DEFAULT_PRECISION_BITS, LIMITS, DomainError, ResourceLimitError, check_cap
from .count import (
    ForbiddenSet,
    PartitionMultiset,
    avoiding_count_ie,
    iter_part_lists,
    partition_count,
    partition_table,
)

BASIS_ENUM_CAP = 60
COHEN_REMMEL_CAP = 15


def _pm(p) -> PartitionMultiset:
    return p if isinstance(p, PartitionMultiset) else PartitionMultiset.from_parts(p)


def is_subpartition(lam, gam) -> bool:
    """True iff every part occurs in ``lam`` at most as often as in ``gam``."""
    g = _pm(gam).as_dict()
    return all(g.get(p, 0) >= m for p, m in _pm(lam).entries)


def union(ps: Iterable) -> PartitionMultiset:
    """Per-part maximum multiplicity; the empty union is the empty partition."""
    out: dict[int, int] = {}
    for p in ps:
        for part, m in _pm(p).entries:
            if m > out.get(part, 0):
                out[part] = m
    return PartitionMultiset.from_counts(out)


def independent(a, b) -> bool:
    return not (_pm(a).support() & _pm(b).support())


def pairwise_independent(ps: Sequence) -> bool:
    ps = [_pm(p) for p in ps]
    return all(independent(ps[i], ps[j]) for i in range(len(ps)) for j in range(i + 1, len(ps)))


@dataclass(frozen=True)
class Basis:
    """An antichain of forbidden partitions; F_Z is everything avoiding all of them."""

    elements: tuple[PartitionMultiset, ...] = ()

    def __post_init__(self):
        els = tuple(_pm(e) for e in self.elements)
        object.__setattr__(self, "elements", els)
        for i, a in enumerate(els):
            for j, b in enumerate(els):
                if i != j and is_subpartition(a, b):
                    raise DomainError(f"basis elements {a} and {b} are comparable")

    @classmethod
    def of(cls, parts_lists: Iterable) -> "Basis":
        return cls(tuple(_pm(p) for p in parts_lists))

    @classmethod
    def from_json(cls, text: str) -> "Basis":
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["basis"]
        return cls.of(data)

    def to_json(self) -> str:
        return json.dumps([list(e.parts()) for e in self.elements])

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def _elements(Z) -> tuple[PartitionMultiset, ...]:
    if isinstance(Z, Basis):
        return Z.elements
    return tuple(_pm(z) for z in Z)


def _contains(counts: dict[int, int], lam: PartitionMultiset) -> bool:
    return all(counts.get(p, 0) >= m for p, m in lam.entries)


def _counts(parts: tuple[int, ...]) -> dict[int, int]:
    c: dict[int, int] = {}
    for p in parts:
        c[p] = c.get(p, 0) + 1
    return c


def basis_avoiding_count_enum(n: int, Z) -> int:
    """Partitions of n containing no element of Z, by exhaustive enumeration."""
    if n > BASIS_ENUM_CAP:
        raise ResourceLimitError("basis_enum_cap", BASIS_ENUM_CAP, n)
    els = _elements(Z)
    return sum(
        1 for parts in iter_part_lists(n)
        if not any(_contains(c, lam) for c in (_counts(parts),) for lam in els)
    )


def union_norm_polynomial(Z) -> dict[int, int]:
    """Signed subset counts keyed by union norm: sum_I (-1)^|I| x^{|union_I|}."""
    els = _elements(Z)
    check_cap("subset_cap", len(els))
    poly: dict[int, int] = {}

    def walk(start: int, acc: dict[int, int], norm: int, sign: int) -> None:
        poly[norm] = poly.get(norm, 0) + sign
        for i in range(start, len(els)):
            nxt = dict(acc)
            extra = 0
            for p, m in els[i].entries:
                have = nxt.get(p, 0)
                if m > have:
                    extra += p * (m - have)
                    nxt[p] = m
            walk(i + 1, nxt, norm + extra, -sign)

    walk(0, {}, 0, 1)
    return {e: c for e, c in poly.items() if c}


def basis_avoiding_count_ie(n: int, Z) -> int:
    """sum over I of (-1)^|I| p(n - |union of lambda^i, i in I|)."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    poly = union_norm_polynomial(Z)
    P = partition_table(n)
    return sum(c * P[n - e] for e, c in poly.items() if e <= n)


def basis_avoiding_table_ie(N: int, Z) -> list[int]:
    poly = union_norm_polynomial(Z)
    P = partition_table(N)
    return [sum(c * P[n - e] for e, c in poly.items() if e <= n) for n in range(N + 1)]


@dataclass
class CohenRemmelReport:
    size: int
    N: int
    hypothesis_holds: bool
    violations: list[tuple[tuple[int, ...], int, int]] = field(default_factory=list)
    # rows (n, enum_lambda, enum_gamma, ie_lambda, ie_gamma) that disagree anywhere
    mismatches: list[tuple[int, int, int, int, int]] = field(default_factory=list)
    counts: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.hypothesis_holds and not self.mismatches

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "N": self.N,
            "hypothesis_holds": self.hypothesis_holds,
            "violations": [{"I": list(I), "lambda_norm": a, "gamma_norm": b} for I, a, b in self.violations],
            "mismatches": [list(m) for m in self.mismatches],
            "counts": [list(c) for c in self.counts],
            "passed": self.passed,
        }


def union_norm_violations(Lam: Sequence, Gam: Sequence, limit: int = 20) -> list:
    """Index sets I (1-based) where |union_I lambda| != |union_I gamma|."""
    L, G = _elements(Lam), _elements(Gam)
    out = []

    def grow(acc: dict[int, int], lam: PartitionMultiset) -> tuple[dict[int, int], int]:
        nxt = dict(acc)
        extra = 0
        for p, m in lam.entries:
            have = nxt.get(p, 0)
            if m > have:
                extra += p * (m - have)
                nxt[p] = m
        return nxt, extra

    def walk(start, I, accL, nL, accG, nG):
        if I and nL != nG:
            if len(out) < limit:
                out.append((tuple(I), nL, nG))
        for i in range(start, len(L)):
            aL, eL = grow(accL, L[i])
            aG, eG = grow(accG, G[i])
            walk(i + 1, I + [i + 1], aL, nL + eL, aG, nG + eG)

    walk(0, [], {}, 0, {}, 0)
    return out


def cohen_remmel_check(Lam: Sequence, Gam: Sequence, N: int) -> CohenRemmelReport:
    L, G = _elements(Lam), _elements(Gam)
    if len(L) != len(G):
        raise DomainError(f"sequences differ in length: {len(L)} vs {len(G)}")
    if len(L) > COHEN_REMMEL_CAP:
        raise ResourceLimitError("cohen_remmel_cap", COHEN_REMMEL_CAP, len(L))
    if N > BASIS_ENUM_CAP:
        raise ResourceLimitError("basis_enum_cap", BASIS_ENUM_CAP, N)
    violations = union_norm_violations(L, G)
    report = CohenRemmelReport(len(L), N, not violations, violations)
    if violations:
        return report
    ieL = basis_avoiding_table_ie(N, L)
    ieG = basis_avoiding_table_ie(N, G)
    for n in range(1, N + 1):
        eL = basis_avoiding_count_enum(n, L)
        eG = basis_avoiding_count_enum(n, G)
        report.counts.append((n, eL, eG))
        if not eL == eG == ieL[n] == ieG[n]:
            report.mismatches.append((n, eL, eG, ieL[n], ieG[n]))
    return report


def select_independent(Z, count: int) -> list[PartitionMultiset]:
    """Greedily pick ``count`` pairwise independent elements with strictly increasing norms."""
    chosen: list[PartitionMultiset] = []
    for lam in sorted(_elements(Z), key=lambda e: (e.norm(), e.parts())):
        if len(chosen) == count:
            break
        if chosen and lam.norm() <= chosen[-1].norm():
            continue
        if all(independent(lam, c) for c in chosen):
            chosen.append(lam)
    if len(chosen) < count:
        raise DomainError(f"basis has fewer than {count} pairwise independent elements of distinct norms")
    return chosen


@dataclass
class GrowthReport:
    k: int
    selected: list[PartitionMultiset]
    gamma: ForbiddenSet
    K: mpf
    rows: list[dict]

    @property
    def bounded(self) -> bool:
        return all(r["scaled"] <= self.K for r in self.rows)

    @property
    def consistent(self) -> bool:
        return all(r["p_lambda"] == r["p_gamma"] and
                   (r["p_FZ"] is None or r["p_FZ"] <= r["p_lambda"]) for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.bounded and self.consistent


def growth_bound_check(Z, k: int, n_grid: Iterable[int], K=None,
                       prec: int = DEFAULT_PRECISION_BITS) -> GrowthReport:
    """Compare p(n, F_Z) <= p_{-Lambda}(n) = p_{-Gamma}(n) and bound p_{-Gamma}(n) n^k e^{-C sqrt n}.

    Lambda is 2k-1 independent basis elements; Gamma the singletons of their
    norms.  Without an explicit ``K`` the bound defaults to the complementary
    main-term constant (C/2)^t prod|lambda| / (4 sqrt 3).
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    t = 2 * k - 1
    chosen = select_independent(Z, t)
    gamma = ForbiddenSet(tuple(c.norm() for c in chosen))
    els = _elements(Z)
    with mp.workprec(prec):
        C = hr_C(prec)
        if K is None:
            K = (C / 2) ** t / (4 * mp.sqrt(3))
            for g in gamma:
                K *= g
        K = mpf(K)
        rows = []
        for n in n_grid:
            p_gamma = avoiding_count_ie(n, gamma)
            p_lambda = basis_avoiding_count_ie(n, chosen)
            p_fz = basis_avoiding_count_ie(n, els) if len(els) <= LIMITS.subset_cap else None
            scaled = mpf(p_gamma) * mpf(n) ** k * mp.exp(-C * mp.sqrt(n))
            rows.append({"n": n, "p_FZ": p_fz, "p_lambda": p_lambda, "p_gamma": p_gamma, "scaled": scaled})
    return GrowthReport(k, chosen, gamma, K, rows)


# ---------------------------------------------------------------------------
# interval ideals and the oscillating construction


@dataclass(frozen=True)
class IntervalIdealSpec:
    """Stages (s_i, t_i): parts from [s_i, t_i], each used at most t_i times."""

    stages: tuple[tuple[int, int], ...]

    def __post_init__(self):
        stages = tuple((int(s), int(t)) for s, t in self.stages)
        object.__setattr__(self, "stages", stages)
        prev_t = 0
        for s, t in stages:
            if not 1 <= s <= t:
                raise DomainError(f"stage ({s}, {t}) needs 1 <= s <= t")
            if s <= prev_t:
                raise DomainError(f"stage starting at {s} overlaps the previous interval")
            prev_t = t

    @classmethod
    def from_json(cls, text: str) -> "IntervalIdealSpec":
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["stages"]
        return cls(tuple((d["s"], d["t"]) for d in data))

    def to_json(self) -> str:
        return json.dumps([{"s": s, "t": t} for s, t in self.stages])

    def cap_of(self, part: int) -> int | None:
        for s, t in self.stages:
            if s <= part <= t:
                return t
        return None


def interval_ideal_table(n: int, spec: IntervalIdealSpec) -> list[int]:
    """p(m, X) for m = 0..n from the generating function prod_j (1 - x^{j(cap+1)}) / (1 - x^j).

    When the allowed parts are dense it is cheaper to start from P(x) and
    multiply by (1 - x^j) for the few excluded parts; otherwise the allowed
    parts are multiplied in one at a time.  Each factor is one O(n) pass.
    """
    check_cap("exact_cap", n)
    allowed = [(j, t) for s, t in spec.stages for j in range(s, min(t, n) + 1)]
    cuts = [j * (t + 1) for j, t in allowed if j * (t + 1) <= n]
    excluded = n - len(allowed)
    if excluded < len(allowed):
        a = partition_table(n)
        inside = {j for j, _ in allowed}
        for j in range(1, n + 1):
            if j not in inside:
                a[j:] = map(sub, a[j:], a[: n + 1 - j])
    else:
        a = [1] + [0] * n
        for j, _ in allowed:
            for lo in range(j, n + 1, j):
                hi = min(lo + j, n + 1)
                a[lo:hi] = map(add, a[lo:hi], a[lo - j : hi - j])
    for d in cuts:
        a[d:] = map(sub, a[d:], a[: n + 1 - d])
    return a


def interval_ideal_count(n: int, spec: IntervalIdealSpec) -> int:
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    return interval_ideal_table(n, spec)[n]


def interval_ideal_count_dp(n: int, spec: IntervalIdealSpec) -> int:
    """Bounded-multiplicity knapsack, one sliding window per allowed part."""
    check_cap("exact_cap", n)
    a = [1] + [0] * n
    for s, cap in spec.stages:
        for j in range(s, min(cap, n) + 1):
            b = a[:]
            span = j * (cap + 1)
            for m in range(j, n + 1):
                b[m] = b[m - j] + a[m] - (a[m - span] if m >= span else 0)
            a = b
    return a[n]


def stage_mass(spec: IntervalIdealSpec, i: int) -> int:
    """Largest total reachable with stages 1..i: sum_l t_l * sum_{j=s_l}^{t_l} j."""
    return sum(t * (s + t) * (t - s + 1) // 2 for s, t in spec.stages[:i])


def zero_window_check(spec: IntervalIdealSpec, i: int, next_s: int | None = None) -> bool:
    """Mass bound for stages <= i lies below s_{i+1} - 1, so p(s_{i+1} - 1, X) = 0.

    ``next_s`` defaults to stage i+1's start, else t_i^3 + 2.  The exact
    count is cross-checked whenever s_{i+1} - 1 fits under the exact cap.
    """
    if not 1 <= i <= len(spec.stages):
        raise DomainError(f"stage {i} not defined")
    if next_s is None:
        next_s = spec.stages[i][0] if i < len(spec.stages) else spec.stages[i - 1][1] ** 3 + 2
    window = next_s - 1
    ok = stage_mass(spec, i) < window
    if window <= LIMITS.exact_cap:
        prefix = IntervalIdealSpec(spec.stages[:i])
        zero = interval_ideal_count(window, prefix) == 0
        if ok and not zero:
            raise AssertionError(f"mass bound holds but p({window}, X) != 0")
        ok = ok and zero
    return ok


@dataclass(frozen=True)
class Magnitude:
    """A positive quantity carried exactly when small enough, always by its logarithm."""

    log: mpf
    exact: int | None = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @classmethod
    def of_int(cls, v: int) -> "Magnitude":
        return cls(mp.log(mpf(v)), v)


@dataclass(frozen=True)
class OscillationParams:
    eps: mpf
    surrogate_n0: int

    def __post_init__(self):
        object.__setattr__(self, "eps", mpf(self.eps))
        if not 0 < self.eps < 1 and self.eps != 1:
            raise DomainError(f"eps={self.eps} outside (0, 1)")
        if self.surrogate_n0 < 1:
            raise DomainError("surrogate_n0 must be positive")

    def f(self, n) -> mpf:
        """f(n), only where the construction uses it: n >= n0 and f(n) in (1/2, 1)."""
        if n < self.surrogate_n0:
            raise DomainError(f"f({n}) requested below surrogate n0={self.surrogate_n0}")
        v = oscillation_f(n, self.eps)
        if not mpf(1) / 2 < v < 1:
            raise DomainError(f"f({n}) = {v} outside (1/2, 1)")
        return v


def oscillation_f(n, eps) -> mpf:
    """(1 - log^{1+eps}(n) / sqrt(n))^2."""
    n = mpf(n)
    return (1 - mp.log(n) ** (1 + mpf(eps)) / mp.sqrt(n)) ** 2


def _log_shortfall(logn: mpf, eps: mpf) -> mpf:
    return (1 + eps) * mp.log(logn) - logn / 2


def _exp_or_zero(v: mpf) -> mpf:
    # exponents far below -prec*log 2 only perturb O(1) quantities below precision
    if v < -(mp.prec + 64) * mp.ln2 * 4:
        return mpf(0)
    return mp.exp(v)


def _shortfall_from_log(logn: mpf, eps: mpf) -> mpf:
    """log^{1+eps}(n)/sqrt(n) = 1 - sqrt(f(n)), from log n alone."""
    return _exp_or_zero(_log_shortfall(logn, eps))


def f_threshold(eps, prec: int = DEFAULT_PRECISION_BITS) -> int:
    """Smallest n past the peak of log^{1+eps}(n)/sqrt(n) with f(n) > 1/2.

    The shortfall decreases for n > e^{2(1+eps)}, so f stays in (1/2, 1) from here on.
    """
    with mp.workprec(prec):
        eps = mpf(eps)
        lo = int(mp.ceil(mp.exp(2 * (1 + eps))))
        target = 1 - 1 / mp.sqrt(2)
        hi = lo
        while _shortfall_from_log(mp.log(hi), eps) >= target:
            hi *= 2
        while lo < hi:
            mid = (lo + hi) // 2
            if _shortfall_from_log(mp.log(mid), eps) < target:
                hi = mid
            else:
                lo = mid + 1
        return lo


@dataclass
class SurrogateReport:
    n0: int
    s_i: int
    n_max: int
    f_ok: bool
    hr_bounds_ok: bool
    comp_bound_ok: bool
    first_failure: int | None
    extrapolated: bool

    @property
    def passed(self) -> bool:
        return self.f_ok and self.hr_bounds_ok and self.comp_bound_ok


def check_surrogate_n0(n0: int, s_i: int, eps, n_max: int | None = None,
                       prec: int = DEFAULT_PRECISION_BITS) -> SurrogateReport:
    """Verify the properties asked of n_0(s_i) on [n0, n_max] with exact counts.

    f(n) in (1/2, 1) follows for all n >= n0 once n0 is past ``f_threshold``;
    the two count inequalities are only checked up to ``n_max`` and anything
    beyond is flagged as extrapolated.
    """
    if n_max is None:
        n_max = min(LIMITS.exact_cap, max(n0, 2 * n0))
    with mp.workprec(prec):
        f_ok = n0 >= f_threshold(eps, prec)
        P = partition_table(n_max)
        S = ForbiddenSet(tuple(range(1, s_i + 1)))
        fact = mp.factorial(s_i)
        first_fail = None
        hr_ok = comp_ok = True
        for n in range(max(n0, s_i + 1), n_max + 1):
            lead = mp.exp(log_hr_leading(n, prec))
            p = mpf(P[n])
            if not (2 * lead > p > lead / 2):
                hr_ok = False
            avoid = avoiding_count_ie(n, S)
            if not mpf(avoid) > p * comp_schur_factor(n, S, prec) / 2:
                comp_ok = False
            if first_fail is None and not (hr_ok and comp_ok):
                first_fail = n
        del fact
    return SurrogateReport(n0, s_i, n_max, f_ok, hr_ok, comp_ok, first_fail, True)


@dataclass(frozen=True)
class Stage:
    index: int
    s: Magnitude
    t: Magnitude


def _t_exponent_log(log_s: mpf, s_exact: int | None, eps: mpf, C: mpf) -> mpf:
    """log of exp(((3 s + 10)/(2C))^{1/eps}), i.e. ((3 s + 10)/(2C))^{1/eps}."""
    if s_exact is not None:
        return ((3 * mpf(s_exact) + 10) / (2 * C)) ** (1 / eps)
    # s is astronomically large here, the +10 is below working precision
    return mp.exp((log_s + mp.log(3) - mp.log(2 * C)) / eps)


def oscillation_sequence(params: OscillationParams, i_max: int,
                         prec: int = DEFAULT_PRECISION_BITS) -> list[Stage]:
    """s_1 = 2, t_i = max{s_i, ceil(exp(((3 s_i + 10)/(2C))^{1/eps})), 2 n0}, s_{i+1} = t_i^3 + 2.

    Values stay exact while their decimal length is under ``LIMITS.digit_budget``;
    beyond that only the logarithm is kept.
    """
    if i_max < 1:
        return []
    if i_max > 3:
        raise ResourceLimitError("oscillation_stage_cap", 3, i_max)
    budget_log = mpf(LIMITS.digit_budget) * mp.log(10)
    with mp.workprec(prec):
        C = hr_C(prec)
        eps = params.eps
        s = Magnitude.of_int(2)
        out = []
        for i in range(1, i_max + 1):
            log_e = _t_exponent_log(s.log, s.exact, eps, C)
            two_n0 = mpf(2 * params.surrogate_n0)
            if s.exact is not None and log_e < budget_log:
                cands = [s.exact, int(mp.ceil(mp.exp(log_e))), 2 * params.surrogate_n0]
                t = Magnitude.of_int(max(cands))
            else:
                log_t = max(s.log, log_e, mp.log(two_n0))
                t = Magnitude(log_t)
            out.append(Stage(i, s, t))
            if t.exact is not None and 3 * t.log < budget_log:
                s = Magnitude.of_int(t.exact**3 + 2)
            else:
                s = Magnitude(3 * t.log)
        return out


def zero_window_margin(stages: Sequence[Stage], i: int, prec: int = DEFAULT_PRECISION_BITS) -> mpf:
    """log(s_{i+1} - 1) - log(mass bound) for the generated sequence.

    Exact stages use the exact mass of stages 1..i; otherwise the bound
    t_i^2 (t_i + 1)/2 against s_{i+1} - 1 = t_i^3 + 1 gives
    log 2 + log(1 + t^-3) - log(1 + t^-1).
    """
    st = stages[i - 1]
    with mp.workprec(prec):
        if all(x.s.is_exact and x.t.is_exact for x in stages[:i]):
            spec = IntervalIdealSpec(tuple((x.s.exact, x.t.exact) for x in stages[:i]))
            window = st.t.exact**3 + 1
            return mp.log(mpf(window)) - mp.log(mpf(stage_mass(spec, i)))
        inv_t = _exp_or_zero(-st.t.log)
        return mp.ln2 + mp.log1p(inv_t**3) - mp.log1p(inv_t)


def _exact_log_p(n: Magnitude | int) -> mpf | None:
    v = n if isinstance(n, int) else n.exact
    if v is not None and v <= LIMITS.exact_cap:
        return mp.log(mpf(partition_count(v)))
    return None


@dataclass
class CertificateReport:
    stage: int
    eps: mpf
    log_t: mpf
    s: mpf
    f_value: mpf
    exact: bool
    margins: dict[str, mpf]
    notes: list[str] = field(default_factory=list)
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        ok = all(m > 0 for m in self.margins.values())
        if self.witness is not None:
            ok = ok and self.witness["holds"]
        return ok


def oscillation_certificate(params: OscillationParams, stages: Sequence[Stage], i: int,
                            prec: int = DEFAULT_PRECISION_BITS,
                            witness: bool = True) -> CertificateReport:
    """Check in log-space the inequality chain that gives p(t_i, X) > p(t_i f(t_i)).

    Margins (each must be positive):
      shortfall_vs_poly  (1 - sqrt f) log p(t) - (3 s/2) log t
      root_vs_shift      sqrt(f) log p(t) + log 8 - log p(floor(t f))
      final_factor       s log(C t / 2) + log s! - log 16
      K_vs_16            log(16 K) with K = 1/(8 sqrt 3)
    With ``witness`` and t_i under the exact cap the conclusion itself is
    also checked with exact counts.
    """
    stage = stages[i - 1]
    with mp.workprec(prec):
        C = hr_C(prec)
        eps = params.eps
        logt = stage.t.log
        if stage.s.exact is not None:
            s_val = mpf(stage.s.exact)
        else:
            s_val = mp.exp(stage.s.log)
        short = _shortfall_from_log(logt, eps)
        f = (1 - short) ** 2
        if not (mpf(1) / 2 < f and _log_shortfall(logt, eps) < 0):
            raise DomainError(f"f(t_{i}) outside (1/2, 1)")
        if stage.t.exact is not None and stage.t.exact < params.surrogate_n0:
            raise DomainError(f"t_{i}={stage.t.exact} below surrogate n0={params.surrogate_n0}")
        notes = []
        logp_t = _exact_log_p(stage.t)
        tf_int = int(mp.floor(mpf(stage.t.exact) * f)) if stage.t.exact is not None else None
        logp_tf = _exact_log_p(tf_int) if tf_int is not None else None
        exact = logp_t is not None and logp_tf is not None
        log_fact = mp.loggamma(s_val + 1)
        if exact:
            margins = {
                "shortfall_vs_poly": short * logp_t - 3 * s_val / 2 * logt,
                "root_vs_shift": mp.sqrt(f) * logp_t + mp.log(8) - logp_tf,
            }
        else:
            # e^{C sqrt n}/(8 sqrt 3 n) < p(n) < e^{C sqrt n}/(2 sqrt 3 n) (the n0 property),
            # expanded so the e^{C sqrt t} sized terms cancel symbolically:
            # short * C sqrt(t) = C log^{1+eps} t and sqrt(t f) = sqrt(t) (1 - short).
            notes.append("log p bounds from the leading asymptotic within a factor 2 (n0 property)")
            A = mp.log(4 * mp.sqrt(3))
            ln2 = mp.ln2
            margins = {
                "shortfall_vs_poly": C * logt ** (1 + eps) - 3 * s_val / 2 * logt
                - _exp_or_zero(_log_shortfall(logt, eps) + mp.log(A + logt + ln2)),
                "root_vs_shift": _exp_or_zero(_log_shortfall(logt, eps) + mp.log(A + logt))
                + 2 * mp.log1p(-short) + mp.log(8) - (2 - short) * ln2,
            }
        margins["final_factor"] = s_val * (mp.log(C / 2) + logt) + log_fact - mp.log(16)
        margins["K_vs_16"] = mp.log(16 / (8 * mp.sqrt(3)))
        wit = None
        if witness and exact:
            t_int = stage.t.exact
            # stages after i only use parts > t_i, so they cannot matter at n = t_i
            prefix = IntervalIdealSpec(tuple(
                (st.s.exact, st.t.exact) for st in stages[:i]
            ))
            p_x = interval_ideal_count(t_int, prefix)
            p_tf = partition_count(tf_int)
            wit = {"n": t_int, "p_n_X": p_x, "n_f": tf_int, "p_n_f": p_tf, "holds": p_x > p_tf}
        return CertificateReport(i, eps, logt, s_val, f, exact, margins, notes, wit)


# ---------------------------------------------------------------------------
# growth exponent probe


@dataclass(frozen=True)
class GrowthFit:
    K_hat: mpf
    k_hat: mpf
    nearest_half: mpf
    half_distance: mpf
    points: int


def fit_growth_exponent(counts: Sequence[tuple[int, int]],
                        prec: int = DEFAULT_PRECISION_BITS) -> GrowthFit:
    """Least squares of log p(n, X) - C sqrt n = log K - (1 + k) log n."""
    pts = [(int(n), int(v)) for n, v in counts]
    if len(pts) < 8:
        raise DomainError(f"need at least 8 points, got {len(pts)}")
    if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
        raise DomainError("counts must be strictly ascending in n")
    if any(v <= 0 for _, v in pts):
        raise DomainError("counts must be positive to take logarithms")
    with mp.workprec(prec):
        C = hr_C(prec)
        xs = [mp.log(n) for n, _ in pts]
        ys = [mp.log(mpf(v)) - C * mp.sqrt(n) for n, v in pts]
        m = len(pts)
        xbar = sum(xs) / m
        ybar = sum(ys) / m
        slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / sum((x - xbar) ** 2 for x in xs)
        intercept = ybar - slope * xbar
        k_hat = -slope - 1
        nearest = mp.nint(2 * k_hat) / 2
        return GrowthFit(mp.exp(intercept), k_hat, nearest, abs(k_hat - nearest), m)


def geometric_grid(lo: int, hi: int, points: int) -> list[int]:
    """``points`` distinct integers spaced geometrically from lo to hi inclusive."""
    if points < 2:
        return [hi]
    ratio = (hi / lo) ** (1 / (points - 1))
    grid = sorted({round(lo * ratio**j) for j in range(points)})
    return grid


__all__ = [
    "Basis",
    "CertificateReport",
    "CohenRemmelReport",
    "GrowthFit",
    "GrowthReport",
    "IntervalIdealSpec",
    "Magnitude",
    "OscillationParams",
    "Stage",
    "basis_avoiding_count_enum",
    "basis_avoiding_count_ie",
    "check_surrogate_n0",
    "cohen_remmel_check",
    "f_threshold",
    "fit_growth_exponent",
    "geometric_grid",
    "growth_bound_check",
    "independent",
    "interval_ideal_count",
    "interval_ideal_count_dp",
    "is_subpartition",
    "oscillation_certificate",
    "oscillation_f",
    "oscillation_sequence",
    "pairwise_independent",
    "select_independent",
    "union",
    "union_norm_polynomial",
    "zero_window_check",
    "zero_window_margin",
]
