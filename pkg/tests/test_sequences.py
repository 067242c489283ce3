import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from norsum import (
    DeterminingSequence,
    InvalidSequence,
    Monotonicity,
    RangeExceeded,
    growth_rate,
    growth_report,
    parse_sequence_spec,
    partial_sum,
)


class TestPartialSums:
    def test_ones_matches_closed_form(self):
        seq = DeterminingSequence.ones()
        assert partial_sum(seq, 5) == 6.0

    def test_empty_sum_convention(self):
        for seq in (DeterminingSequence.ones(), DeterminingSequence.geometric(3.0)):
            assert partial_sum(seq, -1) == 0.0

    def test_linear(self):
        seq = DeterminingSequence.linear()
        assert partial_sum(seq, 3) == 10.0  # 1 + 2 + 3 + 4

    def test_below_minus_one_rejected(self):
        with pytest.raises(ValueError):
            partial_sum(DeterminingSequence.ones(), -2)

    @pytest.mark.parametrize("seq,limit", [
        (DeterminingSequence.ones(), 4096),
        (DeterminingSequence.linear(), 4096),
        (DeterminingSequence.monomial(2), 4096),
        (DeterminingSequence.monomial(4), 4096),
        (DeterminingSequence.logarithmic(), 4096),
        (DeterminingSequence.geometric(2.0), 1000),  # overflows past n ~ 1022
    ])
    def test_incremental_matches_direct_summation(self, seq, limit):
        terms = np.array([seq.term(k) for k in range(limit + 1)])
        direct = np.cumsum(terms)
        cached = seq.partial_sums(limit)
        assert np.all(np.abs(cached - direct) <= 1e-14 * direct)

    def test_cache_is_consistent_across_threads(self):
        seq = DeterminingSequence.linear()
        results = {}

        def worker(tag):
            results[tag] = [seq.partial_sum(n) for n in range(2000)]

        threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        expected = [(n + 1) * (n + 2) / 2 for n in range(2000)]
        for got in results.values():
            assert got == expected


class TestValidation:
    def test_zero_leading_term_rejected(self):
        seq = DeterminingSequence.custom([0.0, 1.0, 1.0])
        with pytest.raises(InvalidSequence):
            seq.partial_sum(2)

    def test_negative_term_rejected(self):
        with pytest.raises(InvalidSequence):
            DeterminingSequence.custom([1.0, -0.5])

    def test_custom_needs_values(self):
        with pytest.raises(InvalidSequence):
            DeterminingSequence.custom([])

    def test_geometric_overflow_raises_range_exceeded(self):
        seq = DeterminingSequence.geometric(2.0)
        with pytest.raises(RangeExceeded):
            seq.partial_sum(1100)
        # the evaluable prefix is still fine afterwards
        assert seq.partial_sum(10) == 2047.0

    def test_custom_limit(self):
        seq = DeterminingSequence.custom([1.0, 2.0])
        assert seq.evaluable_limit == 1
        with pytest.raises(RangeExceeded):
            seq.term(2)

    def test_geometric_ratio_must_exceed_one(self):
        with pytest.raises(ValueError):
            DeterminingSequence.geometric(1.0)

    def test_monomial_exponent_positive_integer(self):
        with pytest.raises(ValueError):
            DeterminingSequence.monomial(0)


class TestGrowthRate:
    def test_ones(self):
        seq = DeterminingSequence.ones()
        for n in (1, 5, 50, 999):
            assert growth_rate(seq, n) == pytest.approx(n / (n + 1), rel=1e-15)

    def test_linear_tends_to_two(self):
        seq = DeterminingSequence.linear()
        # rho_n = 2n/(n+2) for p_n = n+1
        assert growth_rate(seq, 1000) == pytest.approx(2000 / 1002, rel=1e-13)
        assert abs(growth_rate(seq, 1000) - 2.0) < 0.02 * 2.0

    def test_geometric_unbounded(self):
        seq = DeterminingSequence.geometric(2.0)
        value = growth_rate(seq, 20)
        brute = 20 * 2.0 ** 20 / (2.0 ** 21 - 1)
        assert value == pytest.approx(brute, rel=1e-14)
        assert value > 9.0

    def test_needs_positive_index(self):
        with pytest.raises(ValueError):
            growth_rate(DeterminingSequence.ones(), 0)


class TestGrowthReport:
    def test_ones_beta_near_half(self):
        rep = growth_report(DeterminingSequence.ones(), 1, 100)
        assert 0.49 < rep.beta_estimate < 0.51
        assert rep.monotonicity is Monotonicity.NON_DECREASING

    def test_geometric_fails_growth_condition(self):
        rep = growth_report(DeterminingSequence.geometric(2.0), 1, 30)
        assert rep.beta_estimate < 1e-8

    def test_rho_window_and_tail_estimates(self):
        rep = growth_report(DeterminingSequence.ones(), 1, 100)
        assert len(rep.rho_values) == 100
        assert rep.rho_values[0] == pytest.approx(0.5)
        # tail half of [1, 100] starts at n = 50
        assert rep.rho_inf_estimate == pytest.approx(50 / 51, rel=1e-14)
        assert rep.rho_sup_estimate == pytest.approx(100 / 101, rel=1e-14)
        assert rep.rho_inf_estimate <= rep.rho_sup_estimate

    def test_ones_beta_trend_toward_half(self):
        betas = [growth_report(DeterminingSequence.ones(), 1, 2 ** j).beta_estimate
                 for j in range(4, 10)]
        assert all(b2 > b1 for b1, b2 in zip(betas, betas[1:]))
        assert abs(betas[-1] - 0.5) < 0.002

    def test_non_increasing_classification_and_rho_bound(self):
        values = [2.0 - 0.001 * n for n in range(300)]
        rep = growth_report(DeterminingSequence.custom(values), 1, 100)
        assert rep.monotonicity is Monotonicity.NON_INCREASING
        for offset, rho in enumerate(rep.rho_values):
            n = 1 + offset
            assert rho <= n / (n + 1) + 1e-14

    def test_eventually_monotone(self):
        values = [1.0, 3.0, 2.0, 1.5] + [1.5 + 0.1 * k for k in range(97)]
        rep = growth_report(DeterminingSequence.custom(values), 1, 50)
        assert rep.monotonicity is Monotonicity.EVENTUALLY_MONOTONE
        assert rep.eventually_monotone_from == 3

    def test_neither(self):
        values = [1.0 + (0.5 if n % 2 else 0.0) for n in range(100)]
        rep = growth_report(DeterminingSequence.custom(values), 1, 40)
        assert rep.monotonicity is Monotonicity.NEITHER

    def test_window_validation(self):
        with pytest.raises(ValueError):
            growth_report(DeterminingSequence.ones(), 5, 5)
        with pytest.raises(ValueError):
            growth_report(DeterminingSequence.ones(), 0, 10)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.lists(st.floats(min_value=0.01, max_value=5.0), min_size=8, max_size=60))
def test_non_decreasing_sequences_have_rho_at_least_n_over_n_plus_one(values):
    values = sorted(values)
    seq = DeterminingSequence.custom(values)
    for n in range(1, len(values)):
        assert growth_rate(seq, n) >= n / (n + 1) - 1e-12


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.lists(st.floats(min_value=0.01, max_value=5.0), min_size=8, max_size=60))
def test_partial_sums_are_positive_and_non_decreasing(values):
    seq = DeterminingSequence.custom(values)
    sums = seq.partial_sums(len(values) - 1)
    assert sums[0] > 0
    assert np.all(np.diff(sums) >= 0)


class TestParse:
    def test_tokens(self):
        assert parse_sequence_spec("ones").kind == "ones"
        assert parse_sequence_spec("linear").kind == "linear"
        assert parse_sequence_spec("log").kind == "logarithmic"
        assert parse_sequence_spec("monomial:3").term(1) == 8.0
        assert parse_sequence_spec("geom:1.5").term(2) == pytest.approx(2.25)

    def test_file(self, tmp_path):
        path = tmp_path / "seq.txt"
        path.write_text("1.5\n0.25\n\n2\n")
        seq = parse_sequence_spec(f"file:{path}")
        assert seq.evaluable_limit == 2
        assert seq.partial_sum(2) == pytest.approx(3.75)

    def test_unknown_spec(self):
        with pytest.raises(ValueError):
            parse_sequence_spec("fibonacci")
        with pytest.raises(ValueError):
            parse_sequence_spec("monomial:two")

    def test_log_kind_positive_start(self):
        seq = parse_sequence_spec("log")
        assert seq.term(0) == pytest.approx(math.log(2.0))
        assert seq.partial_sum(0) > 0
