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

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lpp/types.hpp"
#include "lpp/weights.hpp"

namespace lpp {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Anything that can serve vertex weights: a point query plus a bulk
/// anti-diagonal fill (see WeightField::fill_antidiagonal).
template <class W>
concept WeightSource = requires(const W& w, LatticePoint p, std::int64_t d, std::span<double> out) {
    { w(p) } -> std::convertible_to<double>;
    w.fill_antidiagonal(d, d, out);
};

/// Inclusive rectangle [lo, hi].
struct Region {
    LatticePoint lo;
    LatticePoint hi;

    bool valid() const noexcept { return lo.x <= hi.x && lo.y <= hi.y; }
    std::int64_t width() const noexcept { return hi.x - lo.x + 1; }
    std::int64_t height() const noexcept { return hi.y - lo.y + 1; }
    std::uint64_t area() const noexcept {
        return static_cast<std::uint64_t>(width()) * static_cast<std::uint64_t>(height());
    }
    bool contains(LatticePoint p) const noexcept {
        return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y;
    }
    std::int64_t min_depth() const noexcept { return lo.depth(); }
    std::int64_t max_depth() const noexcept { return hi.depth(); }
    /// First and last x of the region's cells on the line of the given depth.
    std::int64_t first_x(std::int64_t depth) const noexcept { return std::max(lo.x, depth - hi.y); }
    std::int64_t last_x(std::int64_t depth) const noexcept { return std::min(hi.x, depth - lo.y); }

    friend bool operator==(const Region&, const Region&) = default;
};

/// Fixed weights on a rectangle, for hand-built fixtures and oracles.
/// Points outside the rectangle read as `fill`.
class WeightTable {
public:
    WeightTable(Region region, double fill);

    const Region& region() const noexcept { return region_; }
    void set(LatticePoint p, double w);
    double operator()(LatticePoint p) const noexcept;
    void fill_antidiagonal(std::int64_t depth, std::int64_t x_first,
                           std::span<double> out) const noexcept;

    /// Samples every vertex of `region` from `field`.
    static WeightTable sample(const WeightField& field, Region region);

private:
    Region region_;
    double fill_;
    std::vector<double> values_;
};

struct GridLimits {
    /// Largest number of cells a single grid may hold (8 bytes each).
    std::uint64_t max_cells = std::uint64_t{1} << 28;
};

enum class GridDirection { ToSink, FromSources };

/// Passage times over a rectangle, stored anti-diagonal by anti-diagonal so
/// that each sweep step reads one contiguous line and writes the next.
///
/// For a ToSink grid, value(p) = T_{p,sink}. For a FromSources grid,
/// value(p) = max over sources a <= p of T_{a,p} (-inf if none).
class PassageGrid {
public:
    PassageGrid() = default;

    const Region& region() const noexcept { return region_; }
    GridDirection direction() const noexcept { return direction_; }
    /// The sink of a ToSink grid.
    LatticePoint sink() const noexcept { return region_.hi; }

    /// -inf for points outside the region.
    double value(LatticePoint p) const noexcept {
        if (!region_.contains(p)) return kNegInf;
        return values_[index(p)];
    }

    std::span<const double> antidiagonal(std::int64_t depth) const noexcept {
        const auto k = static_cast<std::size_t>(depth - region_.min_depth());
        return {values_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
    }

    std::size_t cell_count() const noexcept { return values_.size(); }

    /// Sizes storage for `region`, reusing the existing allocation.
    void reset(const Region& region, GridDirection direction, const GridLimits& limits);

    std::span<double> antidiagonal_mut(std::int64_t depth) noexcept {
        const auto k = static_cast<std::size_t>(depth - region_.min_depth());
        return {values_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
    }

private:
    std::size_t index(LatticePoint p) const noexcept {
        const auto d = p.depth();
        return offsets_[static_cast<std::size_t>(d - region_.min_depth())] +
               static_cast<std::size_t>(p.x - region_.first_x(d));
    }

    Region region_{};
    GridDirection direction_ = GridDirection::ToSink;
    std::vector<std::size_t> offsets_;
    std::vector<double> values_;
};

/// Up-right lattice path, in order of increasing depth.
struct Geodesic {
    std::vector<LatticePoint> points;

    std::size_t size() const noexcept { return points.size(); }
    LatticePoint front() const { return points.front(); }
    LatticePoint back() const { return points.back(); }
    friend bool operator==(const Geodesic&, const Geodesic&) = default;
};

namespace detail {

void validate_region(const Region& region, const GridLimits& limits);

// One anti-diagonal step of the max-plus recurrence. `cur` already holds the
// weights of line `depth`; `adj` is line depth+1 (toward sink) or depth-1
// (from sources). For the sink sweep a cell at x reads adj cells x and x+1;
// for the source sweep it reads x-1 and x.
inline void relax_line(std::span<double> cur, std::int64_t cur_first,
                       std::span<const double> adj, std::int64_t adj_first, bool toward_sink) noexcept {
    const std::int64_t len = static_cast<std::int64_t>(cur.size());
    const std::int64_t alen = static_cast<std::int64_t>(adj.size());
    // Cell x reads adj indices (x + lo_shift - adj_first) and (... + 1).
    const std::int64_t lo_shift = toward_sink ? 0 : -1;
    auto at = [&](std::int64_t j) { return (j >= 0 && j < alen) ? adj[static_cast<std::size_t>(j)] : kNegInf; };
    auto edge = [&](std::int64_t i) {
        const std::int64_t j = cur_first + i + lo_shift - adj_first;
        cur[static_cast<std::size_t>(i)] += std::max(at(j), at(j + 1));
    };
    edge(0);
    if (len == 1) return;
    const std::int64_t shift = cur_first + lo_shift - adj_first;
    double* c = cur.data();
    const double* a = adj.data();
    for (std::int64_t i = 1; i < len - 1; ++i) {
        const double l = a[i + shift];
        const double r = a[i + shift + 1];
        c[i] += (l < r) ? r : l;
    }
    edge(len - 1);
}

}  // namespace detail

/// Fills `grid` with T_{p,sink} for every p in `region` (sink = region.hi),
/// in one reverse sweep.
template <WeightSource W>
void build_passage_grid_to_sink(const W& weights, LatticePoint sink, const Region& region,
                                PassageGrid& grid, const GridLimits& limits = {}) {
    detail::validate_region(region, limits);
    if (sink != region.hi) {
        throw InvalidRegionError("passage_grid_to_sink: sink must be the region's upper corner");
    }
    grid.reset(region, GridDirection::ToSink, limits);
    const std::int64_t dmin = region.min_depth();
    const std::int64_t dmax = region.max_depth();
    for (std::int64_t d = dmax; d >= dmin; --d) {
        const std::int64_t first = region.first_x(d);
        auto cur = grid.antidiagonal_mut(d);
        weights.fill_antidiagonal(d, first, cur);
        if (d == dmax) continue;
        detail::relax_line(cur, first, grid.antidiagonal(d + 1), region.first_x(d + 1), true);
    }
}

template <WeightSource W>
PassageGrid passage_grid_to_sink(const W& weights, LatticePoint sink, const Region& region,
                                 const GridLimits& limits = {}) {
    PassageGrid grid;
    build_passage_grid_to_sink(weights, sink, region, grid, limits);
    return grid;
}

/// Fills `grid` with max_{a in sources, a <= p} T_{a,p}, sweeping forward
/// from the sources' common line up to `last_depth`. Lines outside that
/// depth range hold -inf.
template <WeightSource W>
void build_passage_grid_from_sources(const W& weights, std::span<const LatticePoint> sources,
                                     const Region& region, std::int64_t last_depth,
                                     PassageGrid& grid, const GridLimits& limits = {}) {
    detail::validate_region(region, limits);
    if (sources.empty()) throw DomainError("passage grid from sources: empty source set");
    const std::int64_t j = sources.front().depth();
    for (const auto& a : sources) {
        if (a.depth() != j) throw DomainError("passage grid from sources: sources must share one anti-diagonal");
        if (!region.contains(a)) throw RangeError("passage grid from sources: source outside region");
    }
    last_depth = std::min(last_depth, region.max_depth());
    grid.reset(region, GridDirection::FromSources, limits);
    for (std::int64_t d = region.min_depth(); d <= region.max_depth(); ++d) {
        if (d == j || (d > j && d <= last_depth)) continue;
        auto line = grid.antidiagonal_mut(d);
        std::fill(line.begin(), line.end(), kNegInf);
    }
    {
        const std::int64_t first = region.first_x(j);
        auto line = grid.antidiagonal_mut(j);
        std::fill(line.begin(), line.end(), kNegInf);
        for (const auto& a : sources) line[static_cast<std::size_t>(a.x - first)] = weights(a);
    }
    for (std::int64_t d = j + 1; d <= last_depth; ++d) {
        const std::int64_t first = region.first_x(d);
        auto cur = grid.antidiagonal_mut(d);
        weights.fill_antidiagonal(d, first, cur);
        detail::relax_line(cur, first, grid.antidiagonal(d - 1), region.first_x(d - 1), false);
    }
}

/// The next point of the geodesic from p to the grid's sink. On equal
/// neighbor values the right step wins; comparison is exact.
inline LatticePoint next_on_geodesic(const PassageGrid& grid, LatticePoint p) noexcept {
    const double right = grid.value(p + kStepRight);
    const double up = grid.value(p + kStepUp);
    return right >= up ? p + kStepRight : p + kStepUp;
}

/// Greedy backtracking on a ToSink grid: the geodesic from u to the sink.
Geodesic geodesic(const PassageGrid& grid, LatticePoint u);

/// The point where the geodesic from u to the grid's sink meets the line of
/// the given depth, without materializing the path.
LatticePoint geodesic_crossing(const PassageGrid& grid, LatticePoint u, std::int64_t depth);

/// Sum of weights along a path.
template <WeightSource W>
double path_weight(const W& weights, const Geodesic& g) {
    double s = 0.0;
    for (auto it = g.points.rbegin(); it != g.points.rend(); ++it) s = weights(*it) + s;
    return s;
}

struct BruteForceResult {
    double passage = 0.0;
    Geodesic path;
};

inline constexpr std::uint64_t kBruteForcePathCap = 1'000'000;

/// Number of up-right paths from u to w, saturating at UINT64_MAX.
std::uint64_t count_up_right_paths(LatticePoint u, LatticePoint w) noexcept;

/// Exhaustive enumeration of all up-right paths from u to w, tested against
/// the grid DP. Paths are visited in lexicographic order with the right step
/// first, and only a strictly heavier path replaces the incumbent, which
/// reproduces the right-first tie-break of `geodesic`. Path sums are folded
/// from the far end, as in the DP.
BruteForceResult brute_force_passage(const WeightTable& weights, LatticePoint u, LatticePoint w,
                                     std::uint64_t max_paths = kBruteForcePathCap);

BruteForceResult brute_force_passage(const WeightField& field, LatticePoint u, LatticePoint w,
                                     std::uint64_t max_paths = kBruteForcePathCap);

/// sup over a in A, b in B of T_{a,b}. A lies on one line, B on a later one,
/// and every b must dominate some a. Uses one forward sweep from A.
template <WeightSource W>
double segment_sup_passage(const W& weights, std::span<const LatticePoint> from,
                           std::span<const LatticePoint> to, PassageGrid& scratch,
                           const GridLimits& limits = {});

template <WeightSource W>
double segment_sup_passage(const W& weights, std::span<const LatticePoint> from,
                           std::span<const LatticePoint> to) {
    PassageGrid scratch;
    return segment_sup_passage(weights, from, to, scratch);
}

namespace detail {
Region segment_sup_region(std::span<const LatticePoint> from, std::span<const LatticePoint> to);
}

template <WeightSource W>
double segment_sup_passage(const W& weights, std::span<const LatticePoint> from,
                           std::span<const LatticePoint> to, PassageGrid& scratch,
                           const GridLimits& limits) {
    const Region region = detail::segment_sup_region(from, to);
    build_passage_grid_from_sources(weights, from, region, to.front().depth(), scratch, limits);
    double best = kNegInf;
    for (const auto& b : to) best = std::max(best, scratch.value(b));
    return best;
}

}  // namespace lpp
