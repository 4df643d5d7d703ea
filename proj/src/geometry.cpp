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

#include "lpp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace lpp {

std::int64_t floor_two_thirds(std::int64_t k) {
    if (k < 0) throw DomainError("floor_two_thirds: negative argument");
    return static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(k), 2.0 / 3.0) + 1e-9));
}

LatticePoint antidiagonal_offset(std::int64_t k) {
    const std::int64_t q = floor_two_thirds(k);
    return {q, -q};
}

CoalescenceRecord make_coalescence_record(LatticePoint p) noexcept {
    return {p, p.depth(), p.x};
}

namespace {

void check_below_sink(const PassageGrid& grid, LatticePoint u) {
    if (!dominated_by(u, grid.sink()) || u == grid.sink()) {
        throw OrderingError("coalescence_point: start " + to_string(u) + " is not < sink " +
                            to_string(grid.sink()));
    }
}

}  // namespace

CoalescenceRecord coalescence_point(const PassageGrid& grid, LatticePoint u, LatticePoint v) {
    check_below_sink(grid, u);
    check_below_sink(grid, v);
    if (!grid.region().contains(u) || !grid.region().contains(v)) {
        throw RangeError("coalescence_point: start outside the grid region");
    }
    // Common points lie on lines at or above both starts: bring the lower
    // start up to the higher line, then walk in lockstep.
    while (u.depth() < v.depth()) u = next_on_geodesic(grid, u);
    while (v.depth() < u.depth()) v = next_on_geodesic(grid, v);
    while (u != v) {
        u = next_on_geodesic(grid, u);
        v = next_on_geodesic(grid, v);
    }
    return make_coalescence_record(u);
}

LatticePoint line_crossing(const Geodesic& g, std::int64_t depth) {
    if (g.points.empty()) throw RangeError("line_crossing: empty path");
    const std::int64_t d0 = g.front().depth();
    if (depth < d0 || depth > g.back().depth()) {
        throw RangeError("line_crossing: line " + std::to_string(depth) + " outside [" + std::to_string(d0) +
                         ", " + std::to_string(g.back().depth()) + "]");
    }
    return g.points[static_cast<std::size_t>(depth - d0)];
}

ParallelFamily parallel_family(std::int64_t a, std::int64_t b, std::int64_t spacing, std::int64_t m,
                               std::int64_t s) {
    if (spacing < 1) throw GeometryError("parallel_family: spacing must be >= 1");
    if (m < 0) throw GeometryError("parallel_family: m must be >= 0");
    if (s < 1) throw GeometryError("parallel_family: s must be >= 1");
    ParallelFamily fam{a, b, spacing, m, s, {}, {}};
    const std::int64_t half_lo = s / 2;
    const std::int64_t half_hi = s - half_lo;
    for (std::int64_t i = 0; i <= m; ++i) {
        const LatticePoint u{a + i * spacing, -a - i * spacing};
        const LatticePoint v{half_lo + b + i * spacing, half_hi - b - i * spacing};
        if (!dominated_by(u, v)) {
            throw GeometryError("parallel_family: u_" + std::to_string(i) + " = " + to_string(u) +
                                " is not <= v_" + std::to_string(i) + " = " + to_string(v));
        }
        fam.starts.push_back(u);
        fam.ends.push_back(v);
    }
    return fam;
}

FamilyCrossings family_crossings(const WeightField& field, const ParallelFamily& fam, std::int64_t r,
                                 PassageGrid& scratch, const GridLimits& limits) {
    if (r <= 0 || r >= fam.s) {
        throw RangeError("crossing_count: r = " + std::to_string(r) + " must satisfy 0 < r < s = " +
                         std::to_string(fam.s));
    }
    FamilyCrossings out;
    out.crossings.reserve(fam.starts.size());
    bool have_grid = false;
    for (std::size_t i = 0; i < fam.starts.size(); ++i) {
        const LatticePoint u = fam.starts[i];
        const LatticePoint v = fam.ends[i];
        // A grid over [u, v] only serves starts inside it; rebuild per member
        // unless the previous member had the same start and sink.
        if (!have_grid || scratch.sink() != v || !scratch.region().contains(u)) {
            build_passage_grid_to_sink(field, v, Region{u, v}, scratch, limits);
            have_grid = true;
        }
        out.crossings.push_back(geodesic_crossing(scratch, u, r));
    }
    std::vector<LatticePoint> sorted = out.crossings;
    std::sort(sorted.begin(), sorted.end());
    out.distinct = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
    for (std::size_t i = 0; i + 1 < out.crossings.size(); ++i) {
        if (out.crossings[i] != out.crossings[i + 1]) ++out.adjacent_changes;
    }
    return out;
}

void check_family_crossings(const FamilyCrossings& fc) {
    for (std::size_t i = 0; i + 1 < fc.crossings.size(); ++i) {
        if (transversal_offset(fc.crossings[i]) > transversal_offset(fc.crossings[i + 1])) {
            throw InvariantViolation("family crossings out of order at i = " + std::to_string(i) + ": " +
                                     to_string(fc.crossings[i]) + " then " + to_string(fc.crossings[i + 1]));
        }
    }
    if (fc.distinct != 1 + fc.adjacent_changes) {
        throw InvariantViolation("crossing count " + std::to_string(fc.distinct) + " != 1 + " +
                                 std::to_string(fc.adjacent_changes) + " adjacent changes");
    }
}

std::int64_t crossing_count(const WeightField& field, const ParallelFamily& fam, std::int64_t r) {
    PassageGrid scratch;
    const FamilyCrossings fc = family_crossings(field, fam, r, scratch);
    check_family_crossings(fc);
    return fc.distinct;
}

std::string check_up_right(const Geodesic& g) {
    for (std::size_t i = 0; i + 1 < g.points.size(); ++i) {
        const LatticePoint step = g.points[i + 1] - g.points[i];
        if (step != kStepRight && step != kStepUp) {
            return "non up-right step " + to_string(g.points[i]) + " -> " + to_string(g.points[i + 1]);
        }
    }
    return {};
}

std::string check_single_crossing(const Geodesic& g) {
    if (g.points.empty()) return "empty path";
    std::unordered_map<std::int64_t, int> hits;
    for (const auto& p : g.points) ++hits[p.depth()];
    for (std::int64_t d = g.front().depth(); d <= g.back().depth(); ++d) {
        const auto it = hits.find(d);
        const int c = it == hits.end() ? 0 : it->second;
        if (c != 1) return "line " + std::to_string(d) + " met " + std::to_string(c) + " times";
    }
    return {};
}

std::string check_intersection_is_segment(const Geodesic& g1, const Geodesic& g2) {
    // Positions (in g1) of the common points.
    std::vector<std::size_t> pos1;
    std::vector<std::size_t> pos2;
    for (std::size_t i = 0; i < g1.points.size(); ++i) {
        const auto it = std::find(g2.points.begin(), g2.points.end(), g1.points[i]);
        if (it != g2.points.end()) {
            pos1.push_back(i);
            pos2.push_back(static_cast<std::size_t>(it - g2.points.begin()));
        }
    }
    if (pos1.empty()) return {};
    for (std::size_t k = 0; k + 1 < pos1.size(); ++k) {
        if (pos1[k + 1] != pos1[k] + 1 || pos2[k + 1] != pos2[k] + 1) {
            return "intersection is not one contiguous sub-path (break after " + to_string(g1.points[pos1[k]]) + ")";
        }
    }
    return {};
}

std::string check_ordered(const Geodesic& left, const Geodesic& right) {
    if (left.points.empty() || right.points.empty()) return {};
    const std::int64_t lo = std::max(left.points.front().depth(), right.points.front().depth());
    const std::int64_t hi = std::min(left.points.back().depth(), right.points.back().depth());
    for (std::int64_t d = lo; d <= hi; ++d) {
        const LatticePoint w = line_crossing(left, d);
        const LatticePoint w2 = line_crossing(right, d);
        if (strictly_precedes(w2, w)) {
            return "on line " + std::to_string(d) + " the right geodesic's " + to_string(w2) +
                   " strictly precedes the left one's " + to_string(w);
        }
    }
    return {};
}

}  // namespace lpp
