import pytest
from mpmath import mp, mpf

from partasym.asym import (
    LambdaN,
    comp_schur_estimate,
    comp_schur_factor,
    hr_C,
    hr_constants,
    hr_leading,
    hr_strong,
    log_hr_leading,
    log_hr_strong,
    ratio_report,
    schur_estimate,
)
from partasym.config import DomainError
from partasym.count import partition_count, restricted_count

PREC = 256


def rel_err(approx, exact):
    with mp.workprec(PREC):
        return abs(mpf(approx) / mpf(exact) - 1)


def test_constants():
    k = hr_constants()
    with mp.workprec(PREC):
        assert abs(k.C - mp.pi * mp.sqrt(mpf(2) / 3)) < mpf(2) ** -250
        assert k.C / 2 < k.D < k.C
    assert abs(float(k.C) - 2.565) < 1e-3
    with pytest.raises(DomainError):
        hr_constants(D=1)


def test_lambda_n():
    lam = LambdaN.of(1)
    with mp.workprec(PREC):
        assert abs(lam.value**2 - mpf(23) / 24) < mpf(2) ** -250
    with pytest.raises(DomainError):
        LambdaN.of(0)


def test_leading_ratio_improves():
    e1000 = rel_err(hr_leading(1000), partition_count(1000))
    e10000 = rel_err(hr_leading(10000), partition_count(10000))
    assert e10000 < e1000
    assert hr_leading(1) > 0


def test_log_leading_huge_n():
    with mp.workprec(PREC):
        v = log_hr_leading(10**6)
        want = hr_C() * 1000 - mp.log(4 * mpf(10) ** 6 * mp.sqrt(3))
        assert mp.isfinite(v) and abs(v - want) < mpf(2) ** -240


def test_log_and_linear_views_agree():
    with mp.workprec(PREC):
        for n in (1, 50, 2000, 40000):
            lin = hr_leading(n)
            assert abs(mp.exp(log_hr_leading(n)) / lin - 1) < mpf(2) ** (8 - PREC)
            assert abs(mp.exp(log_hr_strong(n)) / hr_strong(n) - 1) < mpf(2) ** (8 - PREC)


def test_strong_beats_leading_at_100():
    p100 = 190569292
    assert partition_count(100) == p100
    assert rel_err(hr_strong(100), p100) < rel_err(hr_leading(100), p100)


def test_strong_error_decreases():
    errs = [rel_err(hr_strong(n), partition_count(n)) for n in (100, 200, 400, 800, 1600)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_strong_at_one():
    v = hr_strong(1)
    assert mp.isfinite(v) and v > 0


def test_strong_over_leading_tends_to_one():
    with mp.workprec(PREC):
        gaps = [abs(hr_strong(n) / hr_leading(n) - 1) for n in (100, 1000, 10000, 100000)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_precision_stability():
    for n in (10, 1000, 40000):
        lo = hr_strong(n, prec=PREC)
        hi = hr_strong(n, prec=2 * PREC)
        with mp.workprec(2 * PREC):
            assert abs(lo / hi - 1) < mpf(2) ** (4 - PREC)


def test_schur_pair():
    with mp.workprec(PREC):
        for n in (10, 100, 1000):
            assert schur_estimate(n, {1, 2}) == mpf(n) / 2
            assert restricted_count(n, {1, 2}) == n // 2 + 1
        gaps = [abs(restricted_count(n, {1, 2}) / schur_estimate(n, {1, 2}) - 1) for n in (10, 100, 1000)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_schur_single_and_gcd():
    assert schur_estimate(37, {1}) == 1 == restricted_count(37, {1})
    with pytest.raises(DomainError):
        schur_estimate(10, {2, 4})


def test_schur_three_parts_converges():
    S = {2, 3, 5}
    with mp.workprec(PREC):
        gaps = [abs(restricted_count(n, S) / schur_estimate(n, S) - 1) for n in (100, 1000, 10000)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_comp_schur_empty_is_p():
    with mp.workprec(PREC):
        assert comp_schur_estimate(500, set()) == mpf(partition_count(500))


def test_comp_schur_is_arithmetic_identity():
    with mp.workprec(PREC):
        for n, S in [(300, {1}), (1000, {2, 3}), (5000, {1, 5, 6})]:
            want = mpf(partition_count(n))
            for s in S:
                want *= hr_C() * s / (2 * mp.sqrt(n))
            assert abs(comp_schur_estimate(n, S) / want - 1) < mpf(2) ** (8 - PREC)
            assert abs(comp_schur_factor(n, S) * partition_count(n) / want - 1) < mpf(2) ** (8 - PREC)


def test_comp_schur_forbid_one():
    rows = ratio_report([1000, 4000, 16000], {1})
    assert [r.exact for r in rows] == [partition_count(n) - partition_count(n - 1) for n in (1000, 4000, 16000)]
    errs = [r.abs_err for r in rows]
    assert errs[0] > errs[1] > errs[2]


def test_comp_schur_modes():
    for mode in ("hr_strong", "hr_leading"):
        rows = ratio_report([1000, 4000], {2, 3}, p_mode=mode)
        assert rows[1].abs_err < rows[0].abs_err
    with pytest.raises(DomainError):
        comp_schur_estimate(10, {1}, p_mode="bogus")


def test_ratio_report_shapes():
    assert ratio_report([], {1}) == []
    (row,) = ratio_report([100], set())
    assert row.exact == 190569292 and row.ratio == 1
    with pytest.raises(DomainError):
        ratio_report([200, 100], set())


def test_ratio_report_dp_route_matches():
    a = ratio_report([300, 600], {1, 4}, method="ie")
    b = ratio_report([300, 600], {1, 4}, method="dp")
    assert [r.exact for r in a] == [r.exact for r in b]
