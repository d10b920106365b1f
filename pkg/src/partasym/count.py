"""Exact partition counting with Python integers.

Unrestricted counts come from Euler's pentagonal-number recurrence backed by a
shared memo table.  Allowed/forbidden-part counts use a coin-change style DP,
and the inclusion-exclusion route re-expresses forbidden-part counts through
the unrestricted table, which makes the two routes independent cross-checks.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import islice
from operator import add
from typing import Iterable, Iterator

from .config import LIMITS, DomainError, check_cap


@dataclass(frozen=True, order=True)
class PartitionMultiset:
    """A partition stored as sorted ``(part, multiplicity)`` pairs."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = 0
        for part, mult in self.entries:
            if part <= prev:
                raise DomainError(f"parts must be positive and strictly increasing: {self.entries}")
            if mult < 1:
                raise DomainError(f"multiplicity of {part} must be >= 1")
            prev = part

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "PartitionMultiset":
        counts: dict[int, int] = {}
        for p in parts:
            p = int(p)
            if p <= 0:
                raise DomainError(f"part {p} is not a positive integer")
            counts[p] = counts.get(p, 0) + 1
        return cls(tuple(sorted(counts.items())))

    @classmethod
    def from_counts(cls, counts: dict[int, int]) -> "PartitionMultiset":
        return cls(tuple(sorted((int(p), int(m)) for p, m in counts.items() if m)))

    def norm(self) -> int:
        return sum(p * m for p, m in self.entries)

    def length(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity(self, part: int) -> int:
        return self.as_dict().get(part, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def support(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.entries)

    def parts(self) -> tuple[int, ...]:
        """Parts in nonincreasing order, e.g. ``(3, 2, 2)``."""
        out: list[int] = []
        for p, m in reversed(self.entries):
            out.extend([p] * m)
        return tuple(out)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts())) + ")"


@dataclass(frozen=True)
class ForbiddenSet:
    """A finite set of distinct positive integers, kept strictly increasing."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(s) for s in self.parts)
        if any(s <= 0 for s in parts):
            raise DomainError(f"set elements must be positive integers: {parts}")
        if len(set(parts)) != len(parts):
            raise DomainError(f"duplicate entries in {parts}")
        object.__setattr__(self, "parts", tuple(sorted(parts)))

    @property
    def t(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __contains__(self, item):
        return item in self.parts


def as_set(parts) -> ForbiddenSet:
    if isinstance(parts, ForbiddenSet):
        return parts
    if isinstance(parts, (set, frozenset)):
        parts = sorted(parts)
    return ForbiddenSet(tuple(parts))


# Generalized pentagonal numbers k(3k-1)/2 for k = 1, -1, 2, -2, ... with the
# recurrence sign (+, +, -, -, ...).  Extended on demand.
_pent: list[tuple[int, int]] = []
_table: list[int] = [1]
_lock = threading.Lock()


def _ensure_pentagonals(n: int) -> None:
    k = len(_pent) // 2 + 1
    while not _pent or _pent[-1][0] <= n:
        sign = 1 if k % 2 else -1
        _pent.append((k * (3 * k - 1) // 2, sign))
        _pent.append((k * (3 * k + 1) // 2, sign))
        k += 1


def _extend_table(n: int) -> None:
    with _lock:
        P = _table
        if len(P) > n:
            return
        _ensure_pentagonals(n)
        plus = [g for g, s in _pent if s > 0]
        minus = [g for g, s in _pent if s < 0]
        for m in range(len(P), n + 1):
            total = 0
            for g in plus:
                if g > m:
                    break
                total += P[m - g]
            for g in minus:
                if g > m:
                    break
                total -= P[m - g]
            P.append(total)


def partition_count(n: int) -> int:
    """Exact p(n); a call populates the memo for every m <= n."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    check_cap("exact_cap", n)
    if n >= len(_table):
        _extend_table(n)
    return _table[n]


def partition_table(n: int) -> list[int]:
    """Copy of ``[p(0), ..., p(n)]``."""
    partition_count(n)
    return _table[: n + 1]


def _p_or_zero(m: int) -> int:
    return _table[m] if m >= 0 else 0


def restricted_table(n: int, allowed: Iterable[int]) -> list[int]:
    """Counts of partitions of 0..n with every part drawn from ``allowed``."""
    check_cap("exact_cap", n)
    a = [1] + [0] * n
    for k in allowed:
        if k > n:
            continue
        # a[m] += a[m - k] for m ascending, done one stride-k block at a time
        for lo in range(k, n + 1, k):
            hi = min(lo + k, n + 1)
            a[lo:hi] = map(add, a[lo:hi], a[lo - k : hi - k])
    return a


def restricted_count(n: int, allowed) -> int:
    allowed = as_set(allowed)
    if not allowed.parts:
        raise DomainError("allowed set must be nonempty")
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    return restricted_table(n, allowed.parts)[n]


def avoiding_table(n: int, S) -> list[int]:
    S = as_set(S)
    return restricted_table(n, (k for k in range(1, n + 1) if k not in S.parts))


def avoiding_count_dp(n: int, S) -> int:
    """p_{-S}(n) by knapsack DP over the parts {1..n} \\ S."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    return avoiding_table(n, S)[n]


def signed_subset_sums(values: Iterable[int]) -> dict[int, int]:
    """Map each subset sum to the signed number of subsets reaching it.

    The sign of a subset J is (-1)^|J|, so the result encodes
    ``prod_j (1 - x^{s_j})`` as a sparse polynomial.
    """
    poly = {0: 1}
    for s in values:
        nxt = dict(poly)
        for e, c in poly.items():
            nxt[e + s] = nxt.get(e + s, 0) - c
        poly = {e: c for e, c in nxt.items() if c}
    return poly


def avoiding_count_ie(n: int, S) -> int:
    """p_{-S}(n) = sum over J of (-1)^|J| p(n - sum_J s), with p(m<0) = 0."""
    S = as_set(S)
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    check_cap("subset_cap", S.t)
    partition_count(n)
    return sum(c * _p_or_zero(n - e) for e, c in signed_subset_sums(S.parts).items())


def iter_part_lists(n: int) -> Iterator[tuple[int, ...]]:
    """All partitions of n as nonincreasing tuples, in reverse-lexicographic order.

    Zoghbi-Stojmenovic ZS1 generation, so (n) comes first and (1,...,1) last.
    """
    check_cap("enum_cap", n)
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    if n == 0:
        yield ()
        return
    x = [1] * (n + 1)
    x[1] = n
    m = h = 1
    yield (n,)
    while x[1] != 1:
        if x[h] == 2:
            m += 1
            x[h] = 1
            h -= 1
        else:
            r = x[h] - 1
            t = m - h + 1
            x[h] = r
            while t >= r:
                h += 1
                x[h] = r
                t -= r
            if t == 0:
                m = h
            else:
                m = h + 1
                if t > 1:
                    h += 1
                    x[h] = t
        yield tuple(x[1 : m + 1])


def enumerate_partitions(n: int) -> Iterator[PartitionMultiset]:
    for parts in iter_part_lists(n):
        yield PartitionMultiset.from_parts(parts)


def count_enumerated(n: int, keep=None) -> int:
    """Count enumerated partitions of n (as part tuples) accepted by ``keep``."""
    if keep is None:
        return sum(1 for _ in iter_part_lists(n))
    return sum(1 for parts in iter_part_lists(n) if keep(parts))


def first_partitions(n: int, k: int) -> list[PartitionMultiset]:
    return list(islice(enumerate_partitions(n), k))


def clear_cache() -> None:
    """Drop the memo table (used by tests that check recomputation)."""
    with _lock:
        del _table[1:]


def cached_upto() -> int:
    return len(_table) - 1


__all__ = [
    "ForbiddenSet",
    "LIMITS",
    "PartitionMultiset",
    "avoiding_count_dp",
    "avoiding_count_ie",
    "avoiding_table",
    "count_enumerated",
    "enumerate_partitions",
    "iter_part_lists",
    "partition_count",
    "partition_table",
    "restricted_count",
    "restricted_table",
    "signed_subset_sums",
]
