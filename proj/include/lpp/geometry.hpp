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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lpp/lpp_core.hpp"
#include "lpp/types.hpp"
#include "lpp/weights.hpp"

namespace lpp {

/// u "precedes" v when u is weakly up-left of v: u.x <= v.x and u.y >= v.y.
constexpr bool precedes(LatticePoint u, LatticePoint v) noexcept { return u.x <= v.x && u.y >= v.y; }

/// Strict version: precedes and u != v.
constexpr bool strictly_precedes(LatticePoint u, LatticePoint v) noexcept {
    return precedes(u, v) && u != v;
}

/// floor(k^{2/3}) with a 1e-9 upward nudge before flooring, so exact cubes
/// such as 8 or 27 are not lost to rounding in pow().
std::int64_t floor_two_thirds(std::int64_t k);

/// (floor(k^{2/3}), -floor(k^{2/3})).
LatticePoint antidiagonal_offset(std::int64_t k);

/// First coalescence point of two geodesics to a common sink.
struct CoalescenceRecord {
    LatticePoint point;
    std::int64_t depth = 0;        // point.x + point.y
    std::int64_t first_coord = 0;  // point.x

    friend bool operator==(const CoalescenceRecord&, const CoalescenceRecord&) = default;
};

CoalescenceRecord make_coalescence_record(LatticePoint p) noexcept;

/// The common point of least depth of the geodesics from u and from v to
/// the grid's sink. Walks both paths on the fly instead of materializing them.
CoalescenceRecord coalescence_point(const PassageGrid& grid, LatticePoint u, LatticePoint v);

/// The unique point of g on the line of the given depth.
LatticePoint line_crossing(const Geodesic& g, std::int64_t depth);

/// p.x - p.y: twice the transversal displacement from the diagonal.
constexpr std::int64_t transversal_offset(LatticePoint p) noexcept { return p.x - p.y; }

/// Displacement f with p = (floor(d/2) + f, ceil(d/2) - f), d = depth(p).
/// Equals offset/2 on even lines and (offset + 1)/2 on odd lines.
constexpr std::int64_t half_offset(LatticePoint p) noexcept {
    const std::int64_t off = transversal_offset(p);
    // off has the parity of the depth, so the division is exact.
    return (p.depth() % 2 == 0) ? off / 2 : (off + 1) / 2;
}

/// Starts u_i = (a + i*d, -a - i*d) on L_0 and ends
/// v_i = (floor(s/2) + b + i*d, ceil(s/2) - b - i*d) on L_s, i = 0..m.
struct ParallelFamily {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t spacing = 1;
    std::int64_t m = 0;
    std::int64_t s = 1;
    std::vector<LatticePoint> starts;
    std::vector<LatticePoint> ends;
};

ParallelFamily parallel_family(std::int64_t a, std::int64_t b, std::int64_t spacing, std::int64_t m,
                               std::int64_t s);

/// Crossings of the family's geodesics with one line.
struct FamilyCrossings {
    std::vector<LatticePoint> crossings;  // w_i = Gamma_{u_i, v_i} on L_r
    std::int64_t distinct = 0;            // |L_r intersected with the union|
    std::int64_t adjacent_changes = 0;    // #{i : w_i != w_{i+1}}
};

/// Builds each member's grid (reusing `scratch`) and records where its
/// geodesic meets L_r. Members sharing a sink share one grid.
FamilyCrossings family_crossings(const WeightField& field, const ParallelFamily& fam, std::int64_t r,
                                 PassageGrid& scratch, const GridLimits& limits = {});

/// Number of distinct points of L_r hit by the family. Both the direct count
/// and 1 + (adjacent changes) are computed; a disagreement, or crossings out
/// of order, raises InvariantViolation.
std::int64_t crossing_count(const WeightField& field, const ParallelFamily& fam, std::int64_t r);

/// Throws InvariantViolation unless offsets are non-decreasing along `crossings`
/// and the two count formulas agree.
void check_family_crossings(const FamilyCrossings& fc);

// --- Structural checks used by tests and per-trial assertions. Each returns
// an empty string on success and a description of the violation otherwise.

/// Consecutive steps are +e1 or +e2.
std::string check_up_right(const Geodesic& g);

/// Each line between the endpoints is met exactly once.
std::string check_single_crossing(const Geodesic& g);

/// The intersection of two geodesics is empty or one contiguous segment that
/// is a sub-path of both.
std::string check_intersection_is_segment(const Geodesic& g1, const Geodesic& g2);

/// For geodesics u->v and u'->v' with u precedes u' and v precedes v', on no
/// common line does the second's crossing strictly precede the first's.
std::string check_ordered(const Geodesic& left, const Geodesic& right);

}  // namespace lpp
