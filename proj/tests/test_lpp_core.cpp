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
#include <vector>

#include <gtest/gtest.h>

#include "lpp/lpp_core.hpp"
#include "lpp/harness.hpp"

namespace lpp {
namespace {

WeightTable fixture2() {
    WeightTable t(Region{{0, 0}, {1, 1}}, 0.0);
    t.set({0, 0}, 1.0);
    t.set({1, 0}, 2.0);
    t.set({0, 1}, 0.5);
    t.set({1, 1}, 1.5);
    return t;
}

WeightTable fixture3() {
    WeightTable t(Region{{0, 0}, {2, 2}}, 1.0);
    t.set({2, 1}, 100.0);
    t.set({1, 1}, 1.2);
    return t;
}

std::vector<LatticePoint> pts(std::initializer_list<LatticePoint> l) { return l; }

TEST(Region, Basics) {
    const Region r{{-2, 1}, {3, 4}};
    EXPECT_TRUE(r.valid());
    EXPECT_EQ(r.width(), 6);
    EXPECT_EQ(r.height(), 4);
    EXPECT_EQ(r.area(), 24);
    EXPECT_TRUE(r.contains({3, 1}));
    EXPECT_FALSE(r.contains({4, 1}));
    EXPECT_EQ(r.min_depth(), -1);
    EXPECT_EQ(r.max_depth(), 7);
    EXPECT_FALSE((Region{{1, 0}, {0, 0}}).valid());
}

TEST(PassageGrid, SingleVertex) {
    WeightField f(5);
    const LatticePoint w{3, -2};
    const PassageGrid g = passage_grid_to_sink(f, w, Region{w, w});
    EXPECT_EQ(g.value(w), f(w));
    EXPECT_EQ(geodesic(g, w).points, pts({w}));
}

TEST(PassageGrid, TwoByTwoFixture) {
    const WeightTable t = fixture2();
    const PassageGrid g = passage_grid_to_sink(t, {1, 1}, Region{{0, 0}, {1, 1}});
    EXPECT_DOUBLE_EQ(g.value({0, 0}), 4.5);
    EXPECT_EQ(geodesic(g, {0, 0}).points, pts({{0, 0}, {1, 0}, {1, 1}}));
}

TEST(PassageGrid, ThreeByThreeFixture) {
    const WeightTable t = fixture3();
    const PassageGrid g = passage_grid_to_sink(t, {2, 2}, Region{{0, 0}, {2, 2}});
    EXPECT_DOUBLE_EQ(g.value({0, 0}), 104.2);
    EXPECT_EQ(geodesic(g, {1, 0}).points, pts({{1, 0}, {1, 1}, {2, 1}, {2, 2}}));
    EXPECT_DOUBLE_EQ(g.value({1, 0}), 103.2);
    EXPECT_EQ(geodesic(g, {1, 2}).points, pts({{1, 2}, {2, 2}}));
}

TEST(PassageGrid, OutsideRegionIsMinusInfinity) {
    const WeightTable t = fixture2();
    const PassageGrid g = passage_grid_to_sink(t, {1, 1}, Region{{0, 0}, {1, 1}});
    EXPECT_EQ(g.value({2, 1}), kNegInf);
    EXPECT_EQ(g.value({-1, 0}), kNegInf);
}

TEST(PassageGrid, Errors) {
    WeightField f(1);
    EXPECT_THROW(passage_grid_to_sink(f, {0, 0}, Region{{1, 0}, {0, 0}}), InvalidRegionError);
    EXPECT_THROW(passage_grid_to_sink(f, {4, 4}, Region{{0, 0}, {5, 5}}), std::invalid_argument);
    EXPECT_THROW(passage_grid_to_sink(f, {99, 99}, Region{{0, 0}, {99, 99}}, GridLimits{1000}), CapacityError);
    const PassageGrid g = passage_grid_to_sink(f, {3, 3}, Region{{0, 0}, {3, 3}});
    EXPECT_THROW(geodesic(g, {4, 0}), OrderingError);
    EXPECT_THROW(geodesic(g, {-1, 0}), RangeError);
}

TEST(PassageGrid, ValuesPositiveAndRecurrence) {
    WeightField f(9);
    const Region r{{-3, 2}, {20, 30}};
    const PassageGrid g = passage_grid_to_sink(f, r.hi, r);
    for (std::int64_t x = r.lo.x; x <= r.hi.x; ++x)
        for (std::int64_t y = r.lo.y; y <= r.hi.y; ++y) {
            const LatticePoint p{x, y};
            const double v = g.value(p);
            ASSERT_TRUE(std::isfinite(v));
            ASSERT_GT(v, 0.0);
            if (p == r.hi) {
                EXPECT_EQ(v, f(p));
            } else {
                EXPECT_EQ(v, f(p) + std::max(g.value(p + kStepRight), g.value(p + kStepUp)));
            }
        }
}

TEST(Geodesic, StructureAndWeight) {
    WeightField f(21);
    const Region r{{0, 0}, {40, 25}};
    const PassageGrid g = passage_grid_to_sink(f, r.hi, r);
    for (LatticePoint u : {LatticePoint{0, 0}, LatticePoint{10, 3}, LatticePoint{40, 0}, LatticePoint{0, 25}}) {
        const Geodesic gd = geodesic(g, u);
        ASSERT_EQ(static_cast<std::int64_t>(gd.points.size()), r.hi.depth() - u.depth() + 1);
        EXPECT_EQ(gd.points.front(), u);
        EXPECT_EQ(gd.points.back(), r.hi);
        for (std::size_t i = 1; i < gd.points.size(); ++i) {
            const LatticePoint step = gd.points[i] - gd.points[i - 1];
            EXPECT_TRUE(step == kStepRight || step == kStepUp);
        }
        EXPECT_NEAR(path_weight(f, gd), g.value(u), 1e-9 * g.value(u));
        EXPECT_EQ(geodesic_crossing(g, u, u.depth() + 5), gd.points[5]);
    }
}

TEST(Geodesic, SubpathsAreGeodesics) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        WeightField f(trial_seed(77, static_cast<std::int64_t>(s)));
        const Region r{{0, 0}, {30, 30}};
        const PassageGrid g = passage_grid_to_sink(f, r.hi, r);
        const Geodesic full = geodesic(g, r.lo);
        const std::size_t i = 7 + s, j = 40 + s;
        const LatticePoint a = full.points[i], b = full.points[j];
        const PassageGrid sub = passage_grid_to_sink(f, b, Region{a, b});
        const Geodesic part = geodesic(sub, a);
        const std::vector<LatticePoint> expect(full.points.begin() + static_cast<std::ptrdiff_t>(i),
                                               full.points.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        EXPECT_EQ(part.points, expect) << "seed index " << s;
    }
}

TEST(BruteForce, Fixtures) {
    const BruteForceResult r = brute_force_passage(fixture2(), {0, 0}, {1, 1});
    EXPECT_DOUBLE_EQ(r.passage, 4.5);
    EXPECT_EQ(r.path.points, pts({{0, 0}, {1, 0}, {1, 1}}));
    const BruteForceResult s = brute_force_passage(fixture3(), {0, 0}, {2, 2});
    EXPECT_DOUBLE_EQ(s.passage, 104.2);
    WeightField f(2);
    const BruteForceResult single = brute_force_passage(f, {4, 4}, {4, 4});
    EXPECT_EQ(single.passage, f({4, 4}));
    EXPECT_EQ(single.path.points, pts({{4, 4}}));
}

TEST(BruteForce, MatchesDpOnSeededField) {
    WeightField f(3);
    const BruteForceResult bf = brute_force_passage(f, {0, 0}, {4, 4});
    const PassageGrid g = passage_grid_to_sink(f, {4, 4}, Region{{0, 0}, {4, 4}});
    EXPECT_EQ(bf.passage, g.value({0, 0}));
    EXPECT_EQ(bf.path, geodesic(g, {0, 0}));
    EXPECT_EQ(bf.passage, 16.382582948133752);
}

TEST(BruteForce, PathCountAndCap) {
    EXPECT_EQ(count_up_right_paths({0, 0}, {1, 1}), 2u);
    EXPECT_EQ(count_up_right_paths({0, 0}, {5, 5}), 252u);
    EXPECT_EQ(count_up_right_paths({0, 0}, {0, 9}), 1u);
    WeightField f(1);
    EXPECT_THROW(brute_force_passage(f, {0, 0}, {12, 12}), CapacityError);
    EXPECT_THROW(brute_force_passage(f, {1, 0}, {0, 3}), OrderingError);
}

TEST(BruteForce, OracleEquivalenceSmallRectangles) {
    for (std::int64_t w = 1; w <= 6; ++w)
        for (std::int64_t h = 1; h <= 6; ++h)
            for (int c = 0; c < 100; ++c) {
                WeightField f(trial_seed(1000 + static_cast<std::uint64_t>(w * 10 + h), c));
                const LatticePoint sink{w - 1, h - 1};
                const PassageGrid g = passage_grid_to_sink(f, sink, Region{{0, 0}, sink});
                const BruteForceResult bf = brute_force_passage(f, {0, 0}, sink);
                ASSERT_NEAR(bf.passage, g.value({0, 0}), 1e-12 * bf.passage);
                ASSERT_EQ(bf.path, geodesic(g, {0, 0}));
            }
}

TEST(SegmentSup, Fixture) {
    const WeightTable t = fixture3();
    const std::vector<LatticePoint> a{{0, 1}, {1, 0}};
    const std::vector<LatticePoint> b{{1, 2}, {2, 1}};
    // best pair is (1,0) -> (2,1) through (1,1): 1 + 1.2 + 100
    EXPECT_DOUBLE_EQ(segment_sup_passage(t, a, b), 102.2);
    const PassageGrid g = passage_grid_to_sink(t, {2, 2}, Region{{0, 0}, {2, 2}});
    EXPECT_DOUBLE_EQ(segment_sup_passage(t, a, b) + t({2, 2}), g.value({1, 0}));
}

TEST(SegmentSup, SinglePairAndDomination) {
    WeightField f(8);
    const std::vector<LatticePoint> a{{-2, 2}, {-1, 1}, {0, 0}, {1, -1}};
    const std::vector<LatticePoint> b{{9, 11}, {10, 10}, {11, 9}};
    const double sup = segment_sup_passage(f, a, b);
    double best = kNegInf;
    for (auto u : a)
        for (auto v : b) {
            const PassageGrid g = passage_grid_to_sink(f, v, Region{u, v});
            EXPECT_GE(sup, g.value(u) * (1 - 1e-12));
            best = std::max(best, g.value(u));
            const std::vector<LatticePoint> ua{u}, vb{v};
            EXPECT_NEAR(segment_sup_passage(f, ua, vb), g.value(u), 1e-12 * g.value(u));
        }
    EXPECT_NEAR(sup, best, 1e-12 * best);
}

TEST(SegmentSup, Errors) {
    WeightField f(8);
    const std::vector<LatticePoint> empty;
    const std::vector<LatticePoint> a{{0, 0}};
    const std::vector<LatticePoint> b{{2, 2}};
    EXPECT_THROW(segment_sup_passage(f, empty, b), DomainError);
    EXPECT_THROW(segment_sup_passage(f, a, empty), DomainError);
    EXPECT_THROW(segment_sup_passage(f, b, a), DomainError);
    const std::vector<LatticePoint> mixed{{0, 0}, {1, 0}};
    EXPECT_THROW(segment_sup_passage(f, mixed, b), DomainError);
    const std::vector<LatticePoint> unreachable{{-1, 6}};
    EXPECT_THROW(segment_sup_passage(f, std::vector<LatticePoint>{{0, 4}}, unreachable), DomainError);
}

}  // namespace
}  // namespace lpp
