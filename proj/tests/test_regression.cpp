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


// Pinned fixtures for the experiment runs not covered by lpp_acceptance.
// Values were frozen from the first verified run; a change means the
// weights, the DP or the event definitions changed.

#include <gtest/gtest.h>

#include "lpp/experiments.hpp"

namespace lpp {
namespace {

ExecOptions exec() {
    ExecOptions e;
    e.workers = 4;
    return e;
}

TEST(Regression, CoalescenceTail) {
    const TailEstimateTable t = estimate_coalescence_tail({8, 512, {8}, 20000, 1}, exec());
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0].successes, 8592);
}

TEST(Regression, CorollaryTail) {
    const TailEstimateTable t = estimate_corollary_tail({8, 1024, {4}, 20000, 2}, exec());
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0].successes, 2631);
}

TEST(Regression, SegmentSup) {
    const SegmentSupStats s = segment_sup_stats({256, {-4, -2, 0, 2}, 5000, 7}, exec());
    EXPECT_EQ(s.half_width, 20);
    EXPECT_NEAR(s.sup_shift_scaled.mean, -0.4507895868768815, 1e-12);
    EXPECT_NEAR(s.point_shift_scaled.mean, -3.7482875536359104, 1e-12);
    ASSERT_EQ(s.tail.size(), 4u);
    const std::int64_t want[] = {4854, 3911, 1963, 554};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(s.tail[i].estimate.successes, want[i]) << "x index " << i;
    EXPECT_GE(s.sup_shift_scaled.mean, s.point_shift_scaled.mean);
}

TEST(Regression, FluctuationAtZero) {
    // x = 0 counts every nonzero displacement
    const auto rows = fluctuation_profile({0, 128, 512, {0}, 2000, 5}, exec());
    EXPECT_EQ(rows[0].estimate.successes, 1965);
    EXPECT_GT(rows[0].estimate.p_hat, 0.8);
}

}  // namespace
}  // namespace lpp
