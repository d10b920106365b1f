"""Brute-force references kept deliberately naive and separate from the package."""
from itertools import combinations


def partitions(n, max_part=None):
    """All partitions of n as nonincreasing tuples (plain recursion)."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def count_where(n, pred):
    return sum(1 for p in partitions(n) if pred(p))


def multiplicities(parts):
    out = {}
    for p in parts:
        out[p] = out.get(p, 0) + 1
    return out


def contains(parts, sub):
    have = multiplicities(parts)
    return all(have.get(p, 0) >= m for p, m in multiplicities(sub).items())


def subsets(seq):
    for r in range(len(seq) + 1):
        yield from combinations(seq, r)
