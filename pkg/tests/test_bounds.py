import math

import pytest

from rmboost import (
    BoundReport,
    ParameterError,
    RmCode,
    base_case_margin,
    bhattacharyya,
    boost_step_bound,
    bsc,
    capacity,
    capacity_gap,
    conditional_tail_bound,
    list_error_log_bound,
    rate,
    weight_enum_log_bound,
)
from rmboost.bounds import BOUND_NAMES, evaluate


def test_base_case_margin():
    assert base_case_margin(1.0) == pytest.approx((math.sqrt(2.0) - 1.0) / 2.0, abs=1e-15)
    assert base_case_margin(0.5) == pytest.approx((2.0 ** 0.25 - 1.0) / 2.0, abs=1e-15)
    for bad in (0.0, -0.2, 1.5):
        with pytest.raises(ParameterError):
            base_case_margin(bad)


def test_conditional_tail_bound_formula():
    p, k, eps = 0.1, 2, 0.1
    inner = 4.0 * math.log(64.0 / (eps * (1.0 - eps))) / math.log(1.0 / p)
    want = 18.0 * p ** 1.25 + 9.0 * p * inner ** k
    assert conditional_tail_bound(p, k, eps) == pytest.approx(want, rel=1e-12)
    assert conditional_tail_bound(0.0, 3, 0.1) == 0.0
    with pytest.raises(ParameterError):
        conditional_tail_bound(1.0, 2, 0.1)
    with pytest.raises(ParameterError):
        conditional_tail_bound(0.1, -1, 0.1)


def test_boost_step_bound_adds_majority_term():
    p, k, gap, eps = 0.1, 2, 1, 0.1
    want = conditional_tail_bound(p, k, eps) + (8.0 / 9.0) ** (2.0 ** gap)
    assert boost_step_bound(p, k, gap, eps) == pytest.approx(want, rel=1e-12)
    with pytest.raises(ParameterError):
        boost_step_bound(0.1, 2, -1, 0.1)


def test_weight_enum_log_bound_reference_values():
    # sum over j of 17 m (j-1)(j+2) + 17 (j+2) binom_le(m-j+1, r-j+1)
    def direct(m, r, l):
        total = 0
        for j in range(l, r + 1):
            tail = sum(math.comb(m - j + 1, i) for i in range(r - j + 2))
            total += 17 * m * (j - 1) * (j + 2) + 17 * (j + 2) * tail
        return float(total)

    assert weight_enum_log_bound(6, 3, 3) == 1445.0
    for m, r in [(4, 2), (6, 3), (5, 1)]:
        for l in range(1, r + 2):
            assert weight_enum_log_bound(m, r, l) == direct(m, r, l), (m, r, l)
    # l = r + 1 has an empty sum
    assert weight_enum_log_bound(4, 2, 3) == 0.0
    with pytest.raises(ParameterError):
        weight_enum_log_bound(4, 2, 0)
    with pytest.raises(ParameterError):
        weight_enum_log_bound(4, 2, 4)


def test_bhattacharyya_values():
    assert bhattacharyya(0.1, 8) == pytest.approx(0.36 ** 4, rel=1e-12)
    assert bhattacharyya(0.1, 8) == pytest.approx(0.01679616, rel=1e-12)
    assert bhattacharyya(0.499, 2) == pytest.approx(4.0 * 0.499 * 0.501, rel=1e-12)
    assert bhattacharyya(0.1, 0) == 1.0
    with pytest.raises(ParameterError):
        bhattacharyya(0.5, 2)
    with pytest.raises(ParameterError):
        bhattacharyya(0.1, -1)


def test_list_error_log_bound_finite_and_monotone_in_eps():
    vals = [list_error_log_bound(4, 2, eps, 1) for eps in (0.01, 0.05, 0.1)]
    assert all(math.isfinite(v) for v in vals)
    # noisier channels should not shrink the log bound
    assert vals[0] <= vals[1] <= vals[2]
    with pytest.raises(ParameterError):
        list_error_log_bound(4, 2, 0.1, 0)
    with pytest.raises(ParameterError):
        list_error_log_bound(4, 2, 0.1, 3)


def test_rate_and_capacity_gap():
    assert rate(RmCode(2, 2)) == 1.0
    assert rate(RmCode(3, 1)) == 0.5
    # RM(5, 2) has rate 16/32; BSC(0.11) capacity is just over one half
    gap = capacity_gap(RmCode(5, 2), bsc(0.11))
    assert gap == pytest.approx(capacity(bsc(0.11)) - 0.5, abs=1e-15)
    assert 0.0 < gap < 1e-3
    assert capacity_gap(RmCode(2, 2), bsc(0.1)) < 0.0


def test_evaluate_dispatch_and_report():
    report = evaluate("bhattacharyya", eps=0.1, d=8)
    assert isinstance(report, BoundReport)
    assert report.name == "bhattacharyya"
    assert report.value == pytest.approx(0.01679616, rel=1e-12)
    assert report.inputs == {"eps": 0.1, "d": 8}
    assert not report.log2_domain
    log_report = evaluate("weight_enum_log_bound", m=6, r=3, l=3)
    assert log_report.log2_domain
    assert log_report.value == 1445.0
    with pytest.raises(ParameterError):
        evaluate("not_a_bound", x=1)
    with pytest.raises(ParameterError):
        evaluate("bhattacharyya", eps=0.1)  # missing argument
    assert set(BOUND_NAMES) >= {
        "base_case_margin",
        "conditional_tail_bound",
        "boost_step_bound",
        "weight_enum_log_bound",
        "bhattacharyya",
        "list_error_log_bound",
    }
