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

#include "lpp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "lpp/geometry.hpp"
#include "lpp/harness.hpp"
#include "lpp/lpp_core.hpp"

namespace lpp {

OracleReport oracle_check(int max_size, std::int64_t cases, std::uint64_t seed, double tolerance) {
    if (max_size < 1 || max_size > 8) throw DomainError("oracle_check: max size must lie in [1, 8]");
    if (cases < 0) throw DomainError("oracle_check: cases must be >= 0");
    OracleReport rep;
    PassageGrid grid;
    std::int64_t shape_index = 0;
    for (std::int64_t w = 1; w <= max_size; ++w) {
        for (std::int64_t h = 1; h <= max_size; ++h, ++shape_index) {
            ++rep.shapes;
            const Region region{{0, 0}, {w - 1, h - 1}};
            for (std::int64_t c = 0; c < cases; ++c) {
                const std::uint64_t field_seed = trial_seed(seed, shape_index * cases + c);
                const WeightTable table = WeightTable::sample(WeightField(field_seed), region);
                build_passage_grid_to_sink(table, region.hi, region, grid);
                for (std::int64_t y = 0; y < h; ++y) {
                    for (std::int64_t x = 0; x < w; ++x) {
                        const LatticePoint u{x, y};
                        const BruteForceResult brute = brute_force_passage(table, u, region.hi);
                        const double dp = grid.value(u);
                        const Geodesic g = geodesic(grid, u);
                        const double rel = std::abs(dp - brute.passage) / std::max(std::abs(brute.passage), 1e-300);
                        rep.max_relative_error = std::max(rep.max_relative_error, rel);
                        ++rep.comparisons;
                        if (rel > tolerance || g != brute.path) {
                            std::ostringstream os;
                            os.precision(17);
                            os << "start " << u << ": dp " << dp << " vs brute " << brute.passage
                               << (g != brute.path ? " (geodesics differ)" : "");
                            rep.mismatches.push_back({field_seed, w, h, os.str()});
                        }
                    }
                }
            }
        }
    }
    return rep;
}

std::int64_t StructuralReport::total_violations() const {
    std::int64_t t = 0;
    for (const auto& [k, v] : violations) t += v;
    return t;
}

namespace {

class Survey {
public:
    explicit Survey(StructuralReport& rep) : rep_(rep) {}

    void expect(const char* name, bool ok, const std::function<std::string()>& what) {
        ++rep_.checks[name];
        if (ok) return;
        ++rep_.violations[name];
        if (rep_.first_failures.size() < 20) rep_.first_failures.push_back(std::string(name) + ": " + what());
    }
    void expect_empty(const char* name, const std::string& err) {
        expect(name, err.empty(), [&] { return err; });
    }

private:
    StructuralReport& rep_;
};

// Points shared by the two paths, in the order of `g`.
std::vector<LatticePoint> common_points(const Geodesic& g, const Geodesic& h) {
    std::vector<LatticePoint> sorted = h.points;
    std::sort(sorted.begin(), sorted.end());
    std::vector<LatticePoint> out;
    for (const auto& p : g.points) {
        if (std::binary_search(sorted.begin(), sorted.end(), p)) out.push_back(p);
    }
    return out;
}

bool is_suffix_from(const Geodesic& g, const std::vector<LatticePoint>& common, LatticePoint c) {
    const auto it = std::find(g.points.begin(), g.points.end(), c);
    return it != g.points.end() && std::equal(it, g.points.end(), common.begin(), common.end());
}

}  // namespace

StructuralReport structural_survey(std::int64_t n, std::int64_t environments, std::uint64_t seed) {
    if (n < 4) throw DomainError("structural_survey: n must be >= 4");
    if (environments < 0) throw DomainError("structural_survey: environments must be >= 0");
    StructuralReport rep;
    Survey s(rep);
    PassageGrid grid, scratch;
    const LatticePoint sink{n, n};
    const std::int64_t qmax = std::max<std::int64_t>(1, n / 8);

    for (std::int64_t e = 0; e < environments; ++e) {
        ++rep.environments;
        const std::uint64_t field_seed = trial_seed(seed, e);
        const WeightField field(field_seed);
        std::mt19937_64 rng(field_seed ^ 0x5bd1e995ULL);
        auto uniform = [&rng](std::int64_t lo, std::int64_t hi) {
            return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
        };
        const std::string tag = "env " + std::to_string(e) + " seed " + std::to_string(field_seed);

        // two starts on L_0, u to the upper left of v, one shared sink
        const std::int64_t q = uniform(1, qmax);
        const std::int64_t a = uniform(0, q);
        const std::int64_t b = uniform(1, q);
        const LatticePoint u0{-a, a};
        const LatticePoint v{b, -b};
        build_passage_grid_to_sink(field, sink, Region{{-q, -q}, sink}, grid);
        const Geodesic gu = geodesic(grid, u0);
        const Geodesic gv = geodesic(grid, v);
        for (const Geodesic* g : {&gu, &gv}) {
            s.expect_empty("up-right", check_up_right(*g));
            s.expect_empty("single-crossing", check_single_crossing(*g));
        }
        const CoalescenceRecord c = coalescence_point(grid, u0, v);
        const auto common = common_points(gu, gv);
        s.expect("suffix-structure",
                 !common.empty() && common.front() == c.point && common.back() == sink &&
                     is_suffix_from(gu, common, c.point) && is_suffix_from(gv, common, c.point),
                 [&] { return tag + ": intersection is not the suffix from " + to_string(c.point); });
        s.expect_empty("ordering", check_ordered(gu, gv));
        for (std::int64_t j = 0; j <= 2 * n; ++j) {
            const bool differ = line_crossing(gu, j) != line_crossing(gv, j);
            s.expect("event-equivalence", differ == (c.depth > j), [&] {
                return tag + ": line " + std::to_string(j) + " crossings differ=" + std::to_string(differ) +
                       " but d(C)=" + std::to_string(c.depth);
            });
        }

        // an arbitrary third start in the box
        const LatticePoint w{uniform(-q, n - 1), uniform(-q, n - 1)};
        const Geodesic gw = geodesic(grid, w);
        s.expect_empty("single-crossing", check_single_crossing(gw));
        const auto cw = coalescence_point(grid, w, u0);
        const auto common_w = common_points(gw, gu);
        s.expect("suffix-structure",
                 !common_w.empty() && common_w.front() == cw.point && is_suffix_from(gw, common_w, cw.point) &&
                     is_suffix_from(gu, common_w, cw.point),
                 [&] { return tag + ": third start " + to_string(w); });

        // a parallel family with distinct sinks
        const std::int64_t m = uniform(1, 4);
        const std::int64_t spacing = uniform(1, 4);
        const ParallelFamily fam = parallel_family(-uniform(0, q), uniform(-2, 2), spacing, m, 2 * n);
        const std::int64_t r = uniform(1, 2 * n - 1);
        const FamilyCrossings fc = family_crossings(field, fam, r, scratch);
        std::string err;
        try {
            check_family_crossings(fc);
        } catch (const InvariantViolation& ex) {
            err = tag + ": " + ex.what();
        }
        s.expect_empty("ordering", err);

        // max identity for the starts 0, (0,q), (q,0)
        build_passage_grid_to_sink(field, sink, Region{{0, 0}, sink}, grid);
        const LatticePoint o{0, 0}, kt{0, q}, kt2{q, 0};
        const auto d_outer = coalescence_point(grid, kt, kt2).depth;
        const auto d1 = coalescence_point(grid, o, kt).depth;
        const auto d2 = coalescence_point(grid, o, kt2).depth;
        s.expect("max-identity", d_outer == std::max(d1, d2), [&] {
            return tag + ": d(C)=" + std::to_string(d_outer) + " vs " + std::to_string(d1) + ", " +
                   std::to_string(d2);
        });
    }
    return rep;
}

}  // namespace lpp
