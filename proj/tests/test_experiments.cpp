/*
   Copyright 2026 The lppsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#include <cmath>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "lpp/experiments.hpp"
#include "lpp/geometry.hpp"

namespace lpp {
namespace {

TEST(FitPowerLaw, ExactPowerLaw) {
    const PowerLawFit f = fit_power_law({{1, 1}, {10, 0.21544}, {100, 0.046416}});
    EXPECT_NEAR(f.slope, -2.0 / 3.0, 1e-4);
    EXPECT_NEAR(f.intercept, 0.0, 1e-4);
    EXPECT_EQ(f.points_used, 3u);
    EXPECT_TRUE(f.warnings.empty());
}

TEST(FitPowerLaw, Constant) {
    const PowerLawFit f = fit_power_law({{1, 0.3}, {10, 0.3}, {100, 0.3}});
    EXPECT_NEAR(f.slope, 0.0, 1e-12);
    EXPECT_NEAR(f.stderr_slope, 0.0, 1e-12);
}

TEST(FitPowerLaw, InsufficientData) {
    EXPECT_THROW(fit_power_law({{1, 1}, {10, 0.2}}), InsufficientDataError);
    EXPECT_THROW(fit_power_law({{1, 1}, {10, 0.2}, {100, 0.0}}), InsufficientDataError);
}

TEST(FitPowerLaw, NonPositiveRowsExcludedWithWarning) {
    const PowerLawFit f = fit_power_law({{1, 1}, {10, 0.21544}, {100, 0.046416}, {1000, 0.0}});
    EXPECT_EQ(f.points_used, 3u);
    EXPECT_EQ(f.warnings.size(), 1u);
    EXPECT_NEAR(f.slope, -2.0 / 3.0, 1e-4);
}

TEST(FitPowerLaw, WeightedOptionAndStderr) {
    const std::vector<FitPoint> pts{{4, 0.4}, {8, 0.27}, {16, 0.15}, {32, 0.1}};
    const PowerLawFit u = fit_power_law(pts);
    const PowerLawFit w = fit_power_law(pts, std::vector<double>{1, 1, 1, 1});
    EXPECT_NEAR(u.slope, w.slope, 1e-12);
    EXPECT_GT(u.stderr_slope, 0.0);
    EXPECT_THROW(fit_power_law(pts, std::vector<double>{1, 1}), DomainError);
}

TEST(TailTable, SyntheticBernoulliRecoversExponent) {
    std::mt19937_64 rng(2024);
    const std::vector<double> R{4, 8, 16, 32, 64};
    const std::int64_t trials = 50000;
    std::vector<std::int64_t> succ;
    for (double r : R) {
        std::bernoulli_distribution b(std::pow(r, -2.0 / 3.0));
        std::int64_t s = 0;
        for (std::int64_t t = 0; t < trials; ++t) s += b(rng);
        succ.push_back(s);
    }
    const TailEstimateTable table = make_tail_table(R, trials, succ);
    ASSERT_TRUE(table.fit.has_value());
    EXPECT_LT(std::fabs(table.fit->slope + 2.0 / 3.0), 3 * table.fit->stderr_slope + 1e-3);
    for (const auto& row : table.rows) {
        EXPECT_LE(row.ci_lo, row.p_hat);
        EXPECT_LE(row.p_hat, row.ci_hi);
    }
}

TEST(TailTable, ZeroRowsLeaveFitOut) {
    const TailEstimateTable t = make_tail_table({4, 8, 16}, 100, {10, 0, 0});
    EXPECT_FALSE(t.fit.has_value());
}

TEST(TailConfig, Preconditions) {
    ExperimentConfig c;
    c.k = 8;
    c.n = 64;
    c.R_values = {16};
    try {
        validate_tail_config(c);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("requires n > Rk"), std::string::npos);
    }
    c.n = 256;
    c.R_values = {16};
    EXPECT_THROW(validate_corollary_config(c), ConfigError);
    c.k = 0;
    EXPECT_THROW(validate_tail_config(c), ConfigError);
    c.k = 8;
    c.trials = -1;
    EXPECT_THROW(validate_tail_config(c), ConfigError);
}

TEST(Tail, SmallRunIsScheduleIndependent) {
    ExperimentConfig c{2, 48, {2, 4, 8, 23.5}, 600, 11};
    ExecOptions one, many;
    many.workers = 4;
    many.batch_size = 37;
    const TailEstimateTable a = estimate_coalescence_tail(c, one);
    const TailEstimateTable b = estimate_coalescence_tail(c, many);
    ASSERT_EQ(a.rows.size(), 4u);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].successes, b.rows[i].successes);
        if (i > 0) {
            EXPECT_LE(a.rows[i].successes, a.rows[i - 1].successes);
        }
    }
    ASSERT_TRUE(a.fit.has_value());
    EXPECT_EQ(a.fit->points_used, static_cast<std::size_t>(a.rows[3].successes > 0 ? 4 : 3));
}

TEST(Tail, InterruptAndResume) {
    const auto path = std::filesystem::temp_directory_path() / "lpp_tail_resume.json";
    std::filesystem::remove(path);
    ExperimentConfig c{2, 40, {2, 4, 8}, 300, 5};
    const TailEstimateTable whole = estimate_coalescence_tail(c);
    ExecOptions e;
    e.checkpoint = path;
    e.batch_size = 50;
    e.stop_after = 150;
    EXPECT_THROW(estimate_coalescence_tail(c, e), RunInterrupted);
    e.stop_after.reset();
    const TailEstimateTable resumed = estimate_coalescence_tail(c, e);
    for (std::size_t i = 0; i < whole.rows.size(); ++i) EXPECT_EQ(whole.rows[i].successes, resumed.rows[i].successes);
    // a different configuration must not pick up this checkpoint
    c.n = 41;
    EXPECT_THROW(estimate_coalescence_tail(c, e), CheckpointError);
    std::filesystem::remove(path);
}

TEST(CorollaryTail, SmallRun) {
    ExperimentConfig c{1, 40, {2, 4, 8}, 400, 2};
    const TailEstimateTable t = estimate_corollary_tail(c);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_GE(t.rows[0].successes, t.rows[1].successes);
    EXPECT_GE(t.rows[1].successes, t.rows[2].successes);
}

TEST(Reduction, SmallRunAndPreconditions) {
    ReductionConfig c{2, 64, 12, 400, 3};
    const ReductionResult r = reduction_ratio(c);
    EXPECT_LE(r.e1.successes, r.e3.successes);
    EXPECT_EQ(r.e3.trials, 400);
    if (r.e3.successes > 0) {
        EXPECT_DOUBLE_EQ(r.ratio, r.e1.p_hat / r.e3.p_hat);
    }
    EXPECT_LE(r.ratio_ci.lo, r.ratio);
    EXPECT_GE(r.ratio_ci.hi, r.ratio);
    c.R = 10;
    EXPECT_THROW(validate_reduction_config(c), ConfigError);
    c.R = 12;
    c.k = 0;
    EXPECT_THROW(validate_reduction_config(c), ConfigError);
    c.k = 8;
    c.n = 96;
    EXPECT_THROW(validate_reduction_config(c), ConfigError);
}

TEST(Family, SingleMemberHasExactlyOneCrossing) {
    FamilyConfig c{0, 0, 1, 0, 40, 20, 200, 4};
    const MeanEstimate m = estimate_family_crossings(c);
    EXPECT_EQ(m.mean, 1.0);
    EXPECT_EQ(m.stddev, 0.0);
}

TEST(Family, MeanWithinOrderingBound) {
    FamilyConfig c{-1, 2, 3, 4, 60, 30, 200, 9};
    const MeanEstimate m = estimate_family_crossings(c);
    EXPECT_GE(m.mean, 1.0);
    EXPECT_LE(m.mean, 5.0);
    EXPECT_LE(m.ci.lo, m.mean);
    EXPECT_GE(m.ci.hi, m.mean);
    c.r = 60;
    EXPECT_THROW(validate_family_config(c), ConfigError);
    c.r = 30;
    c.a = 100;
    EXPECT_THROW(validate_family_config(c), ConfigError);
}

TEST(Fluctuation, MonotoneInX) {
    FluctuationConfig c{0, 16, 64, {0, 0.25, 0.5, 1, 2}, 500, 5};
    const auto rows = fluctuation_profile(c);
    ASSERT_EQ(rows.size(), 5u);
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_LE(rows[i].estimate.successes, rows[i - 1].estimate.successes);
    EXPECT_GT(rows[0].estimate.p_hat, 0.5);
    c.r = 64;
    EXPECT_THROW(validate_fluctuation_config(c), ConfigError);
    c.r = 16;
    c.m_offset = 70;
    EXPECT_THROW(validate_fluctuation_config(c), ConfigError);
}

TEST(OnePoint, UnitSquareMatchesEnumeration) {
    OnePointConfig c{1, 1, 200000, 6};
    const OnePointStats s = onepoint_stats(c);
    EXPECT_EQ(s.center, 4.0);
    // T = xi(0,0) + xi(1,1) + max of two Exp(1): mean 3.5
    EXPECT_NEAR(s.shift.mean, -0.5, 0.02);
    double sum = 0.0;
    for (std::int64_t t = 0; t < 2000; ++t) {
        WeightField f(trial_seed(c.seed, t));
        sum += brute_force_passage(f, {0, 0}, {1, 1}).passage - 4.0;
    }
    OnePointConfig small{1, 1, 2000, 6};
    EXPECT_NEAR(onepoint_stats(small).shift.mean, sum / 2000.0, 1e-12);
}

TEST(OnePoint, Preconditions) {
    EXPECT_THROW(validate_onepoint_config({4, 8, 10, 1}), ConfigError);
    EXPECT_THROW(validate_onepoint_config({4, 0, 10, 1}), ConfigError);
    EXPECT_NO_THROW(validate_onepoint_config({8, 4, 10, 1}));
}

TEST(SegmentSup, EndpointsAndDomination) {
    const auto [a, b] = segment_endpoints(1);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0], (LatticePoint{0, 0}));
    EXPECT_EQ(b[0], (LatticePoint{1, 1}));
    const auto [c, d] = segment_endpoints(64);  // floor(64^{2/3}) = 16
    EXPECT_EQ(c.size(), 17u);
    EXPECT_EQ(c.front(), (LatticePoint{-8, 8}));
    EXPECT_EQ(d.back(), (LatticePoint{72, 56}));

    SegmentSupConfig cfg{27, {-4, 0, 2}, 300, 7};
    const SegmentSupStats s = segment_sup_stats(cfg);
    EXPECT_GE(s.sup_shift_scaled.mean, s.point_shift_scaled.mean);
    EXPECT_EQ(s.half_width, 4);
    ASSERT_EQ(s.tail.size(), 3u);
    EXPECT_GE(s.tail[0].estimate.successes, s.tail[1].estimate.successes);
    EXPECT_THROW(validate_segment_config({2, {0}, 10, 1}), ConfigError);
}

}  // namespace
}  // namespace lpp
