import random

import pytest
from hypothesis import assume, given, strategies as st
from mpmath import mp, mpf

from partasym.asym import hr_C
from partasym.config import DomainError, ResourceLimitError
from partasym.count import PartitionMultiset, avoiding_count_dp, avoiding_count_ie, partition_count
from partasym.ideals import (
    Basis,
    IntervalIdealSpec,
    Magnitude,
    OscillationParams,
    Stage,
    basis_avoiding_count_enum,
    basis_avoiding_count_ie,
    check_surrogate_n0,
    cohen_remmel_check,
    f_threshold,
    fit_growth_exponent,
    geometric_grid,
    growth_bound_check,
    interval_ideal_count,
    interval_ideal_count_dp,
    is_subpartition,
    oscillation_certificate,
    oscillation_f,
    oscillation_sequence,
    pairwise_independent,
    select_independent,
    stage_mass,
    union,
    zero_window_check,
    zero_window_margin,
)

from .oracles import contains, count_where

PM = PartitionMultiset.from_parts

partitions_st = st.lists(st.integers(1, 6), max_size=6).map(PM)


# ---- order and union -----------------------------------------------------


@pytest.mark.parametrize("lam,gam,want", [
    ([2, 2], [2, 2, 5], True),
    ([2, 2, 2], [2, 2, 5], False),
    ([], [4, 1], True),
])
def test_subpartition_examples(lam, gam, want):
    assert is_subpartition(lam, gam) is want


def test_union_examples():
    u = union([[2, 2, 3], [2, 3, 3]])
    assert u == PM([2, 2, 3, 3]) and u.norm() == 10
    assert union([[5, 1, 1]]) == PM([5, 1, 1])
    assert union([[1], [2]]) == PM([1, 2])
    assert union([]) == PM([])


@given(partitions_st)
def test_order_reflexive(a):
    assert is_subpartition(a, a)


@given(partitions_st, partitions_st)
def test_order_antisymmetric(a, b):
    if is_subpartition(a, b) and is_subpartition(b, a):
        assert a == b


@given(partitions_st, partitions_st, partitions_st)
def test_order_transitive(a, b, c):
    if is_subpartition(a, b) and is_subpartition(b, c):
        assert is_subpartition(a, c)


@given(partitions_st, partitions_st, partitions_st)
def test_union_laws(a, b, c):
    assert union([a, a]) == a
    assert union([a, b]) == union([b, a])
    assert union([union([a, b]), c]) == union([a, union([b, c])])
    u = union([a, b, c])
    assert all(is_subpartition(x, u) for x in (a, b, c))


def test_basis_must_be_antichain():
    with pytest.raises(DomainError):
        Basis.of([[1], [1, 2]])
    assert len(Basis.of([[1, 1], [2]])) == 2


def test_basis_json():
    Z = Basis.from_json("[[2, 2, 3], [5]]")
    assert Z.elements == (PM([2, 2, 3]), PM([5]))
    assert Basis.from_json(Z.to_json()) == Z


# ---- basis-avoiding counts ------------------------------------------------


def test_basis_examples():
    assert basis_avoiding_count_enum(4, [[1, 1]]) == 3
    assert basis_avoiding_count_ie(4, [[1, 1]]) == partition_count(4) - partition_count(2) == 3
    assert basis_avoiding_count_enum(4, [[1]]) == 2 == avoiding_count_dp(4, {1})
    assert basis_avoiding_count_enum(9, []) == partition_count(9)
    assert basis_avoiding_count_ie(9, Basis()) == partition_count(9)
    Z = [[2, 2], [2, 3]]
    assert basis_avoiding_count_ie(8, Z) == 22 - 5 - 3 + 1 == 15
    assert basis_avoiding_count_enum(8, Z) == 15
    assert count_where(8, lambda p: not any(contains(p, z) for z in Z)) == 15


def test_basis_enum_guard():
    with pytest.raises(ResourceLimitError):
        basis_avoiding_count_enum(61, [[1]])


def test_singleton_basis_reduces_to_forbidden_parts():
    rng = random.Random(8)
    for _ in range(20):
        S = rng.sample(range(1, 30), rng.randint(0, 6))
        n = rng.randint(0, 400)
        assert basis_avoiding_count_ie(n, [[s] for s in S]) == avoiding_count_ie(n, S)


@st.composite
def bases(draw):
    els = draw(st.lists(
        st.dictionaries(st.integers(1, 6), st.integers(1, 3), min_size=1, max_size=3),
        min_size=0, max_size=4))
    ps = [PartitionMultiset.from_counts(e) for e in els]
    # keep an antichain: drop anything comparable with an earlier element
    kept = []
    for p in ps:
        if not any(is_subpartition(p, q) or is_subpartition(q, p) for q in kept):
            kept.append(p)
    return Basis(tuple(kept))


@given(bases(), st.integers(0, 30))
def test_enum_equals_ie(Z, n):
    assert basis_avoiding_count_enum(n, Z) == basis_avoiding_count_ie(n, Z)


def test_enum_equals_ie_up_to_40():
    rng = random.Random(21)
    for _ in range(3):
        els = []
        while len(els) < 4:
            cand = PartitionMultiset.from_counts({rng.randint(1, 6): rng.randint(1, 3) for _ in range(2)})
            if not any(is_subpartition(cand, e) or is_subpartition(e, cand) for e in els):
                els.append(cand)
        for n in range(0, 41, 4):
            assert basis_avoiding_count_enum(n, els) == basis_avoiding_count_ie(n, els)


# ---- Cohen-Remmel ----------------------------------------------------------


def test_cohen_remmel_euler_pair():
    lam = [[i, i] for i in range(1, 11)]
    gam = [[2 * i] for i in range(1, 11)]
    rep = cohen_remmel_check(lam, gam, 20)
    assert rep.hypothesis_holds and rep.passed
    assert dict((n, a) for n, a, _ in rep.counts)[10] == 10


def test_cohen_remmel_trivial_and_failing():
    assert cohen_remmel_check([[1, 2]], [[1, 2]], 10).passed
    rep = cohen_remmel_check([[1]], [[2]], 10)
    assert not rep.hypothesis_holds and rep.violations == [((1,), 1, 2)]
    with pytest.raises(DomainError):
        cohen_remmel_check([[1]], [], 5)


def test_cohen_remmel_nontrivial_pair():
    # unions of {(1,2), (3)} and {(3), (1,2)}-style reshuffles with equal norms
    lam = [[1, 2], [4]]
    gam = [[3], [4]]
    rep = cohen_remmel_check(lam, gam, 30)
    assert rep.passed


# ---- growth bound ------------------------------------------------------------


def test_independence():
    assert not pairwise_independent([[2, 3], [3, 4]])
    assert pairwise_independent([[2, 3], [4, 5], [1]])
    with pytest.raises(DomainError):
        growth_bound_check(Basis.of([[2, 3], [3, 4]]), 2, [100])


def test_growth_k1():
    Z = Basis.of([[1], [2, 2]])
    rep = growth_bound_check(Z, 1, [100, 400, 1600])
    assert rep.gamma.parts == (1,)
    for row in rep.rows:
        n = row["n"]
        assert row["p_gamma"] == partition_count(n) - partition_count(n - 1)
    assert rep.passed


def test_growth_k2():
    Z = Basis.of([[1], [2], [3], [5, 5]])
    assert [p.norm() for p in select_independent(Z, 3)] == [1, 2, 3]
    rep = growth_bound_check(Z, 2, list(range(100, 2001, 100)))
    assert rep.passed
    vals = [r["scaled"] for r in rep.rows]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_growth_with_nonsingleton_elements():
    Z = Basis.of([[1, 1], [2, 3], [4, 4, 4]])
    rep = growth_bound_check(Z, 2, [200, 800])
    assert rep.gamma.parts == (2, 5, 12)
    assert rep.consistent and rep.bounded


# ---- interval ideals ---------------------------------------------------------


def test_interval_examples():
    spec = IntervalIdealSpec(((2, 3),))
    assert interval_ideal_count(28, spec) == 0
    assert stage_mass(spec, 1) == 15
    assert interval_ideal_count(5, spec) == 1
    assert interval_ideal_count(0, spec) == 1


def test_interval_spec_validation():
    with pytest.raises(DomainError):
        IntervalIdealSpec(((3, 2),))
    with pytest.raises(DomainError):
        IntervalIdealSpec(((2, 5), (4, 9)))
    spec = IntervalIdealSpec.from_json('[{"s": 2, "t": 3}, {"s": 29, "t": 40}]')
    assert spec.stages == ((2, 3), (29, 40))
    assert IntervalIdealSpec.from_json(spec.to_json()) == spec


@pytest.mark.parametrize("stages", [((2, 3),), ((1, 2), (5, 6)), ((2, 4), (70, 75)), ((3, 3), (9, 12))])
def test_interval_count_routes_agree(stages):
    spec = IntervalIdealSpec(stages)
    for n in range(0, 61, 3):
        gf = interval_ideal_count(n, spec)
        assert gf == interval_ideal_count_dp(n, spec)
        if n <= 40:
            want = count_where(n, lambda p: all(
                spec.cap_of(q) is not None and p.count(q) <= spec.cap_of(q) for q in set(p)))
            assert gf == want


def test_zero_window():
    spec = IntervalIdealSpec(((2, 3),))
    assert zero_window_check(spec, 1)
    assert zero_window_check(spec, 1, next_s=29)
    # second stage starts inside the reachable mass
    assert not zero_window_check(IntervalIdealSpec(((2, 3), (10, 12))), 1)
    two = IntervalIdealSpec(((2, 3), (29, 30)))
    assert zero_window_check(two, 2)
    assert interval_ideal_count(30**3 + 1, two) == 0


# ---- oscillation construction ------------------------------------------------


def test_f_definition_and_domain():
    with mp.workprec(256):
        n = mpf(10**6)
        assert abs(oscillation_f(n, 0.5) - (1 - mp.log(n) ** 1.5 / mp.sqrt(n)) ** 2) < mpf(2) ** -240
    n0 = f_threshold(0.5)
    params = OscillationParams(0.5, n0)
    with pytest.raises(DomainError):
        params.f(2)
    assert mpf(1) / 2 < params.f(n0) < 1
    assert not oscillation_f(n0 - 1, 0.5) > mpf(1) / 2


def test_f_threshold_is_tight():
    for eps in (0.25, 0.5, 1):
        n0 = f_threshold(eps)
        with mp.workprec(256):
            assert oscillation_f(n0, eps) > mpf(1) / 2
            assert oscillation_f(n0 - 1, eps) <= mpf(1) / 2
            # past the threshold f only increases
            vals = [oscillation_f(n, eps) for n in (n0, 2 * n0, 10 * n0, 100 * n0)]
            assert all(b > a for a, b in zip(vals, vals[1:]))


def test_sequence_start():
    with mp.workprec(256):
        seq = oscillation_sequence(OscillationParams(1, 1), 2)
        assert seq[0].s.exact == 2
        C = hr_C()
        expo = 16 / (2 * C)
        assert abs(expo - mpf("3.1186")) < 5e-4
        assert seq[0].t.exact == int(mp.ceil(mp.exp(expo)))
        assert seq[1].s.exact == seq[0].t.exact ** 3 + 2


def test_sequence_respects_2n0():
    seq = oscillation_sequence(OscillationParams(0.5, 20000), 2)
    assert seq[0].t.exact == 40000
    assert seq[1].s.exact == 40000**3 + 2


def test_sequence_goes_log_space(limits):
    seq = oscillation_sequence(OscillationParams(0.5, f_threshold(0.5)), 3)
    assert seq[1].s.is_exact and not seq[1].t.is_exact
    assert not seq[2].s.is_exact
    with mp.workprec(256):
        assert abs(seq[2].s.log - 3 * seq[1].t.log) < seq[2].s.log * mpf(2) ** -240
    with pytest.raises(ResourceLimitError):
        oscillation_sequence(OscillationParams(0.5, 10), 4)


def test_certificate_stage1():
    params = OscillationParams(0.5, f_threshold(0.5))
    seq = oscillation_sequence(params, 1)
    cert = oscillation_certificate(params, seq, 1)
    assert cert.exact and cert.passed
    assert all(m > 0 for m in cert.margins.values())
    w = cert.witness
    assert w["holds"] and w["p_n_X"] == partition_count(w["n"]) - partition_count(w["n"] - 1)


def test_certificate_later_stages_log_space():
    params = OscillationParams(0.5, f_threshold(0.5))
    seq = oscillation_sequence(params, 3)
    for i in (2, 3):
        cert = oscillation_certificate(params, seq, i)
        assert not cert.exact and cert.passed and cert.witness is None
        assert zero_window_margin(seq, i) > 0
    assert zero_window_margin(seq, 1) > 0


def test_K_constant():
    with mp.workprec(256):
        K = 1 / (8 * mp.sqrt(3))
        assert K > mpf(1) / 16


def test_certificate_rejects_small_stage():
    params = OscillationParams(0.5, 10**4)
    fake = [Stage(1, Magnitude.of_int(2), Magnitude.of_int(3))]
    with pytest.raises(DomainError):
        oscillation_certificate(params, fake, 1)


def test_surrogate_check():
    n0 = f_threshold(0.5)
    rep = check_surrogate_n0(n0, 2, 0.5, n0 + 2000)
    assert rep.passed and rep.extrapolated
    assert not check_surrogate_n0(50, 2, 0.5, 100).f_ok


# ---- growth exponent probe ---------------------------------------------------


def test_fit_needs_points():
    with pytest.raises(DomainError):
        fit_growth_exponent([(n, partition_count(n)) for n in range(10, 17)])


def test_fit_recovers_known_exponents():
    grid = geometric_grid(1000, 20000, 12)
    assert len(grid) == 12 and grid[0] == 1000 and grid[-1] == 20000
    full = fit_growth_exponent([(n, partition_count(n)) for n in grid])
    assert abs(full.k_hat) < 0.02
    one = fit_growth_exponent([(n, avoiding_count_ie(n, {1})) for n in grid])
    assert abs(one.k_hat - 0.5) < 0.05 and one.nearest_half == mpf(1) / 2
    two = fit_growth_exponent([(n, avoiding_count_ie(n, {1, 2})) for n in grid])
    assert abs(two.k_hat - 1) < 0.1
