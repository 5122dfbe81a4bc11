from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scrollbench.design import DISTANCES
from scrollbench.qtable import q_critical
from scrollbench.reference import (
    AGGREGATE_LINEAR_UNKNOWN,
    AGGREGATE_LOG_KNOWN,
    LINEAR_UNKNOWN,
    LOG_KNOWN,
)
from scrollbench.stats import (
    anova_oneway,
    compare_fits,
    fit_linear,
    fit_log2,
    pearson,
    tukey_hsd,
)


class TestLinearFit:
    def test_recovers_aggregate_unknown_model(self):
        a, b, _ = AGGREGATE_LINEAR_UNKNOWN
        points = [(float(d), a + b * d) for d in DISTANCES]
        fit = fit_linear(points)
        assert fit.a == pytest.approx(a, abs=1e-9)
        assert fit.b == pytest.approx(b, abs=1e-9)
        assert fit.r2 == pytest.approx(1.0, abs=1e-12)

    def test_recovers_reference_technique_coefficients(self):
        a, b, _ = LINEAR_UNKNOWN["flick-phone"]  # 1.109 + 0.035 D
        points = [(float(d), a + b * d) for d in DISTANCES]
        fit = fit_linear(points)
        assert fit.a == pytest.approx(1.109, abs=1e-9)
        assert fit.b == pytest.approx(0.035, abs=1e-9)

    def test_constant_data_convention(self):
        fit = fit_linear([(8.0, 3.0), (20.0, 3.0), (50.0, 3.0)])
        assert fit.b == 0.0
        assert fit.r2 == 1.0  # zero total and zero residual variation

    def test_degenerate_predictor_rejected(self):
        with pytest.raises(ValueError, match="no variance in predictor"):
            fit_linear([(5.0, 1.0), (5.0, 2.0), (5.0, 3.0)])

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError, match="at least 3"):
            fit_linear([(1.0, 1.0), (2.0, 2.0)])

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(5)
        x = rng.uniform(1, 100, 40)
        y = 1.7 + 0.04 * x + rng.normal(0, 0.4, 40)
        fit = fit_linear(list(zip(x, y)))
        residuals = y - (fit.a + fit.b * x)
        assert abs(residuals.sum()) < 1e-9
        assert abs((residuals * x).sum()) < 1e-9 * max(1.0, abs((y * x).sum()))

    def test_r2_equals_squared_pearson(self):
        rng = np.random.default_rng(8)
        x = rng.uniform(1, 100, 30)
        y = 2.0 + 0.05 * x + rng.normal(0, 0.5, 30)
        fit = fit_linear(list(zip(x, y)))
        assert fit.r2 == pytest.approx(pearson(x, y) ** 2, abs=1e-9)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=0.01, max_value=100.0))
    def test_scaling_equivariance(self, c):
        rng = np.random.default_rng(12)
        x = rng.uniform(1, 100, 20)
        y = 1.0 + 0.03 * x + rng.normal(0, 0.2, 20)
        base = fit_linear(list(zip(x, y)))
        scaled = fit_linear(list(zip(x, c * y)))
        assert scaled.a == pytest.approx(c * base.a, rel=1e-9)
        assert scaled.b == pytest.approx(c * base.b, rel=1e-9)
        assert scaled.r2 == pytest.approx(base.r2, abs=1e-9)


class TestLogFit:
    def test_recovers_aggregate_known_model(self):
        a, b, _ = AGGREGATE_LOG_KNOWN
        points = [(float(d), a + b * math.log2(d)) for d in DISTANCES]
        fit = fit_log2(points)
        assert fit.a == pytest.approx(a, abs=1e-9)
        assert fit.b == pytest.approx(b, abs=1e-9)
        assert fit.r2 == pytest.approx(1.0, abs=1e-12)

    def test_non_positive_distance_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            fit_log2([(0.0, 1.0), (2.0, 2.0), (4.0, 3.0)])

    def test_unit_distance_prediction_is_intercept(self):
        fit = fit_log2([(1.0, 2.0), (2.0, 3.0), (4.0, 4.0)])
        assert fit.predict(1.0) == pytest.approx(fit.a)
        assert fit.a == pytest.approx(2.0, abs=1e-12)


class TestCompareFits:
    def test_log_data_prefers_log(self):
        a, b, _ = LOG_KNOWN["flick-phone"]
        points = [(float(d), a + b * math.log2(d)) for d in DISTANCES if d >= 11]
        assert compare_fits(points).winner == "log2"

    def test_linear_data_prefers_linear(self):
        a, b, _ = LINEAR_UNKNOWN["flick-phone"]
        points = [(float(d), a + b * d) for d in DISTANCES if d >= 11]
        assert compare_fits(points).winner == "linear"

    def test_constant_data_tie_breaks_linear(self):
        points = [(float(d), 4.2) for d in DISTANCES]
        assert compare_fits(points).winner == "linear"


class TestPearson:
    def test_self_correlation(self):
        x = [1.0, 4.0, 2.0, 8.0]
        assert pearson(x, x) == pytest.approx(1.0, abs=1e-12)

    def test_anticorrelation(self):
        x = [1.0, 4.0, 2.0, 8.0]
        assert pearson(x, [-v for v in x]) == pytest.approx(-1.0, abs=1e-12)

    def test_hand_computed_four_points(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert pearson(x, [2.0, 4.0, 6.0, 8.0]) == pytest.approx(1.0, abs=1e-12)
        y = [2.0, 4.0, 6.0, 9.0]
        # direct formula evaluation as the oracle
        mx, my = sum(x) / 4, sum(y) / 4
        num = sum((a - mx) * (b - my) for a, b in zip(x, y))
        den = math.sqrt(sum((a - mx) ** 2 for a in x) * sum((b - my) ** 2 for b in y))
        assert pearson(x, y) == pytest.approx(num / den, abs=1e-12)

    def test_zero_variance_rejected(self):
        with pytest.raises(ValueError, match="zero variance"):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


class TestAnova:
    def test_identical_constant_groups_give_zero_f(self):
        res = anova_oneway([[2.0, 2.0, 2.0], [2.0, 2.0, 2.0]])
        assert res.f_stat == 0.0
        assert res.p_value == 1.0

    def test_df_arithmetic_at_study_scale(self):
        rng = np.random.default_rng(0)
        groups = [rng.normal(i, 1.0, 195) for i in range(11)]
        res = anova_oneway(groups)
        assert res.df_between == 10
        assert res.df_within == 2134

    def test_two_groups_equal_squared_t(self):
        a = [1.0, 2.0, 3.0]
        b = [4.0, 6.0, 8.0]
        # pooled two-sample t computed by hand
        na, nb = len(a), len(b)
        ma, mb = sum(a) / na, sum(b) / nb
        va = sum((v - ma) ** 2 for v in a) / (na - 1)
        vb = sum((v - mb) ** 2 for v in b) / (nb - 1)
        sp2 = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2)
        t = (ma - mb) / math.sqrt(sp2 * (1 / na + 1 / nb))
        res = anova_oneway([a, b])
        assert res.f_stat == pytest.approx(t**2, abs=1e-9)

    def test_sum_of_squares_identity(self):
        rng = np.random.default_rng(2)
        groups = [rng.normal(m, 1.5, 20) for m in (0.0, 0.5, 2.0)]
        res = anova_oneway(groups)
        flat = np.concatenate(groups)
        ss_tot = float(((flat - flat.mean()) ** 2).sum())
        assert res.ss_between + res.ss_within == pytest.approx(ss_tot, abs=1e-9)

    def test_zero_within_variance_with_distinct_means(self):
        res = anova_oneway([[1.0, 1.0], [2.0, 2.0]])
        assert math.isinf(res.f_stat)
        assert res.p_value == 0.0

    def test_preconditions(self):
        with pytest.raises(ValueError):
            anova_oneway([[1.0, 2.0]])
        with pytest.raises(ValueError):
            anova_oneway([[1.0, 2.0], [3.0]])


class TestQTable:
    def test_published_spot_values(self):
        # classic table entries, alpha 0.05 then 0.01
        assert q_critical(2, 5, 0.05) == pytest.approx(3.64, abs=0.01)
        assert q_critical(3, 5, 0.05) == pytest.approx(4.60, abs=0.01)
        assert q_critical(2, 5, 0.01) == pytest.approx(5.70, abs=0.01)
        assert q_critical(10, 120, 0.05) == pytest.approx(4.56, abs=0.015)

    def test_large_df_uses_asymptote(self):
        assert q_critical(11, 2134, 0.01) == pytest.approx(5.227, abs=0.01)

    def test_interpolation_is_monotone_between_rows(self):
        lo = q_critical(5, 24, 0.05)
        hi = q_critical(5, 30, 0.05)
        mid = q_critical(5, 27, 0.05)
        assert hi < mid < lo  # q falls as df grows

    def test_bounds_errors_name_limits(self):
        with pytest.raises(ValueError, match="2..15"):
            q_critical(16, 30, 0.05)
        with pytest.raises(ValueError, match="alpha"):
            q_critical(5, 30, 0.10)
        with pytest.raises(ValueError, match="df"):
            q_critical(5, 0.5, 0.05)


class TestTukey:
    def test_equal_means_single_subset(self):
        rng = np.random.default_rng(1)
        groups = [rng.normal(5.0, 0.5, 30) for _ in range(4)]
        result = tukey_hsd(groups, alpha=0.05)
        assert len(result.groups) == 1
        assert set(result.groups[0]) == {"group0", "group1", "group2", "group3"}

    def test_two_separated_clusters(self):
        rng = np.random.default_rng(2)
        groups = [
            rng.normal(1.0, 0.1, 25),
            rng.normal(1.02, 0.1, 25),
            rng.normal(10.0, 0.1, 25),
            rng.normal(10.05, 0.1, 25),
        ]
        result = tukey_hsd(groups, alpha=0.05, labels=["a", "b", "c", "d"])
        assert len(result.groups) == 2
        assert set(result.groups[0]) == {"a", "b"}
        assert set(result.groups[1]) == {"c", "d"}
        # verified against the q-statistic definition
        anova = anova_oneway(groups)
        q = abs(np.mean(groups[0]) - np.mean(groups[2])) / math.sqrt(anova.ms_within / 25)
        assert q > result.q_crit

    def test_relabeling_invariance(self):
        rng = np.random.default_rng(3)
        groups = [rng.normal(m, 1.0, 15) for m in (1.0, 1.2, 6.0)]
        r1 = tukey_hsd(groups, alpha=0.05, labels=["x", "y", "z"])
        r2 = tukey_hsd(groups[::-1], alpha=0.05, labels=["z", "y", "x"])
        as_sets = lambda r: {frozenset(g) for g in r.groups}
        assert as_sets(r1) == as_sets(r2)

    def test_shift_invariance(self):
        rng = np.random.default_rng(4)
        groups = [list(rng.normal(m, 1.0, 15)) for m in (1.0, 1.2, 6.0)]
        shifted = [[v + 100.0 for v in g] for g in groups]
        r1 = tukey_hsd(groups, alpha=0.05)
        r2 = tukey_hsd(shifted, alpha=0.05)
        assert [tuple(g) for g in r1.groups] == [tuple(g) for g in r2.groups]

    def test_partition_members_pairwise_non_significant(self):
        rng = np.random.default_rng(5)
        groups = [rng.normal(m, 1.0, 12) for m in (1.0, 1.5, 2.0, 8.0, 8.2)]
        result = tukey_hsd(groups, alpha=0.05)
        for subset in result.groups:
            for i, a in enumerate(subset):
                for b in subset[i + 1 :]:
                    assert not result.is_significant(a, b)

    def test_unsupported_group_count_raises(self):
        rng = np.random.default_rng(6)
        groups = [rng.normal(0, 1, 5) for _ in range(16)]
        with pytest.raises(ValueError, match="2..15"):
            tukey_hsd(groups, alpha=0.05)
