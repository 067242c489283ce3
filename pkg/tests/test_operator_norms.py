import numpy as np
import pytest

from norsum import (
    BoundInapplicable,
    DeterminingSequence,
    build_matrix,
    dirichlet_operator_matrix,
    lemma_bound_upper,
    sharpness_probe,
    spectral_norm,
    thm_lower_bound,
    thm_upper_bound,
)

ONES = DeterminingSequence.ones()
LINEAR = DeterminingSequence.linear()
SQUARES = DeterminingSequence.monomial(2)


class TestBuildMatrix:
    def test_order_one(self):
        m = build_matrix(ONES, 1, 1.0)
        assert np.allclose(m.entries, [[0.5, -0.5], [0.0, 0.0]], atol=1e-15)

    def test_order_two(self):
        m = build_matrix(ONES, 2, 1.0)
        expected = [[2 / 3, -1 / 3, -1 / 3], [0, 1 / 3, -1 / 3], [0, 0, 0]]
        assert np.allclose(m.entries, expected, atol=1e-15)

    def test_leading_diagonal_entry(self):
        for seq in (ONES, LINEAR, SQUARES):
            for n, alpha in ((3, 1.0), (9, 0.6), (17, 2.0)):
                m = build_matrix(seq, n, alpha)
                expected = (seq.partial_sum(n - 1) / seq.partial_sum(n)) ** alpha
                assert m.entries[0, 0] == pytest.approx(expected, rel=1e-13)

    def test_triangular_with_non_positive_off_diagonal(self):
        for seq in (ONES, LINEAR, SQUARES):
            m = build_matrix(seq, 12, 1.5)
            assert np.all(np.tril(m.entries, -1) == 0.0)
            off = m.entries[np.triu_indices_from(m.entries, 1)]
            assert np.all(off <= 0.0)
            diag = np.diag(m.entries)
            assert np.all(np.diff(diag) <= 1e-15)  # c_k non-increasing

    def test_entries_read_only(self):
        m = build_matrix(ONES, 3, 1.0)
        with pytest.raises(ValueError):
            m.entries[0, 0] = 9.0

    def test_validation(self):
        with pytest.raises(ValueError):
            build_matrix(ONES, 0, 1.0)
        with pytest.raises(ValueError):
            build_matrix(ONES, 3, 0.0)


class TestSpectralNorm:
    def test_two_by_two_closed_form(self):
        m = build_matrix(ONES, 1, 1.0)
        assert spectral_norm(m) == pytest.approx(np.sqrt(0.5), rel=1e-10)
        assert spectral_norm(m, method="svd") == pytest.approx(np.sqrt(0.5), rel=1e-14)

    def test_zero_matrix(self):
        assert spectral_norm(np.zeros((4, 4))) == 0.0

    def test_identity(self):
        assert spectral_norm(np.eye(3)) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("n", [2, 7, 33, 128, 512])
    @pytest.mark.parametrize("alpha", [0.6, 1.0, 2.0])
    def test_power_iteration_matches_svd(self, n, alpha):
        m = build_matrix(LINEAR, n, alpha)
        assert spectral_norm(m) == pytest.approx(spectral_norm(m, method="svd"), rel=1e-10)

    def test_structured_matvec_matches_dense(self):
        m = build_matrix(SQUARES, 19, 0.8)
        assert spectral_norm(m) == pytest.approx(spectral_norm(m.entries), rel=1e-11)

    def test_zero_padding_does_not_change_the_norm(self):
        m = build_matrix(LINEAR, 24, 1.3)
        padded = np.zeros((26, 26))
        padded[:25, :25] = m.entries
        assert abs(spectral_norm(padded, method="svd")
                   - spectral_norm(m, method="svd")) <= 1e-12

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            spectral_norm(np.eye(2), method="qr")


class TestDifferenceSumBound:
    def test_order_two_value_and_tightness(self):
        bound = lemma_bound_upper(ONES, 2, 1.0)
        assert bound == pytest.approx(2 / 3, rel=1e-14)
        # the bound is attained here
        assert spectral_norm(build_matrix(ONES, 2, 1.0), method="svd") ** 2 == \
            pytest.approx(bound, rel=1e-12)

    def test_order_one_value(self):
        # single difference term: 2 * (1/2)^2; matches the squared norm exactly
        assert lemma_bound_upper(ONES, 1, 1.0) == pytest.approx(0.5, rel=1e-15)
        assert spectral_norm(build_matrix(ONES, 1, 1.0), method="svd") ** 2 == \
            pytest.approx(0.5, rel=1e-12)

    def test_non_negative(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            seq = DeterminingSequence.custom(rng.uniform(0.05, 2.0, 64))
            assert lemma_bound_upper(seq, int(rng.integers(1, 30)),
                                     float(rng.uniform(0.2, 3.0))) >= 0.0


class TestClosedFormUpperBound:
    def test_cesaro_closed_form(self):
        for n in (1, 2, 10, 100):
            assert thm_upper_bound(ONES, n, 1.0) == pytest.approx(n / (n + 1), rel=1e-13)

    def test_coincides_with_difference_sum_at_order_two(self):
        assert thm_upper_bound(ONES, 2, 1.0) == pytest.approx(
            lemma_bound_upper(ONES, 2, 1.0), rel=1e-13)

    def test_dominates_the_norm_for_alpha_two(self):
        sigma2 = spectral_norm(build_matrix(LINEAR, 100, 2.0)) ** 2
        assert thm_upper_bound(LINEAR, 100, 2.0) >= sigma2

    def test_rejects_small_alpha(self):
        with pytest.raises(BoundInapplicable):
            thm_upper_bound(ONES, 10, 0.5)

    def test_rejects_non_monotone_sequence(self):
        seq = DeterminingSequence.custom([1.0, 2.0, 1.0, 2.0] * 10)
        with pytest.raises(BoundInapplicable):
            thm_upper_bound(seq, 10, 1.0)

    def test_alpha_below_one_is_asymptotic_only(self):
        # Pinned counterexample: for 1/2 < alpha < 1 the closed form is an
        # asymptotic envelope, and the exact norm exceeds it at small order.
        sigma2 = spectral_norm(build_matrix(ONES, 2, 0.6), method="svd") ** 2
        assert sigma2 == pytest.approx(0.9903, rel=1e-3)
        assert sigma2 > thm_upper_bound(ONES, 2, 0.6)
        # while the difference-sum bound still holds
        assert sigma2 <= lemma_bound_upper(ONES, 2, 0.6)


class TestClosedFormLowerBound:
    def test_below_the_even_order_norm(self):
        sigma2 = spectral_norm(build_matrix(ONES, 20, 1.0)) ** 2
        assert thm_lower_bound(ONES, 20, 10, 1.0) <= sigma2

    def test_non_negative(self):
        assert thm_lower_bound(LINEAR, 30, 7, 1.4) >= 0.0

    def test_fractional_alpha(self):
        sigma2 = spectral_norm(build_matrix(LINEAR, 64, 0.75)) ** 2
        assert thm_lower_bound(LINEAR, 64, 32, 0.75) <= sigma2

    def test_m_range(self):
        with pytest.raises(ValueError):
            thm_lower_bound(ONES, 10, 9, 1.0)
        with pytest.raises(ValueError):
            thm_lower_bound(ONES, 10, 0, 1.0)

    def test_hypotheses(self):
        with pytest.raises(BoundInapplicable):
            thm_lower_bound(ONES, 10, 4, 0.5)


class TestSandwich:
    """Module-sized version of the acceptance sweep, restricted to where the
    closed forms are actually valid (alpha >= 1 for the upper bound)."""

    @pytest.mark.parametrize("seq", [ONES, LINEAR, SQUARES], ids=["ones", "linear", "monomial2"])
    def test_bounds_bracket_the_norm(self, seq):
        for n in (2, 4, 8, 16, 32, 64):
            for alpha in (0.6, 0.75, 1.0, 1.5, 2.0):
                sigma2 = spectral_norm(build_matrix(seq, n, alpha)) ** 2
                assert sigma2 <= lemma_bound_upper(seq, n, alpha) * (1 + 1e-9)
                if alpha >= 1.0:
                    assert sigma2 <= thm_upper_bound(seq, n, alpha) * (1 + 1e-9)
                sigma2_even = spectral_norm(build_matrix(seq, 2 * n, alpha)) ** 2
                assert thm_lower_bound(seq, 2 * n, n, alpha) <= sigma2_even * (1 + 1e-9)


class TestSharpnessProbe:
    def test_single_point(self):
        [(n, value)] = sharpness_probe(ONES, [8])
        assert n == 8 and value > 0.0

    def test_growth(self):
        values = dict(sharpness_probe(ONES, [8, 64]))
        assert values[64] > values[8]

    def test_rejects_bad_grid(self):
        with pytest.raises(ValueError):
            sharpness_probe(ONES, [0])


class TestDirichletOperatorMatrix:
    def test_never_exceeds_the_multiplier_norm(self):
        for n, alpha, d in ((4, 1.0, 16), (8, 2.0, 32), (6, 0.75, 24)):
            b = spectral_norm(dirichlet_operator_matrix(ONES, n, alpha, d), method="svd")
            t = spectral_norm(build_matrix(ONES, n, alpha), method="svd")
            assert b <= t + 1e-9

    def test_close_at_generous_truncation(self):
        b = spectral_norm(dirichlet_operator_matrix(ONES, 8, 1.0, 64), method="svd")
        t = spectral_norm(build_matrix(ONES, 8, 1.0), method="svd")
        assert abs(b - t) <= 0.02 * t

    def test_order_one_value(self):
        value = spectral_norm(dirichlet_operator_matrix(ONES, 1, 1.0, 16), method="svd")
        assert 0.6 < value <= 0.71  # approaches sqrt(1/2) from below

    def test_monotone_in_truncation_degree(self):
        norms = [spectral_norm(dirichlet_operator_matrix(ONES, 8, 1.0, d), method="svd")
                 for d in (8, 12, 16, 32, 64)]
        assert all(b >= a - 1e-12 for a, b in zip(norms, norms[1:]))

    def test_truncation_must_cover_the_order(self):
        with pytest.raises(ValueError):
            dirichlet_operator_matrix(ONES, 8, 1.0, 7)
