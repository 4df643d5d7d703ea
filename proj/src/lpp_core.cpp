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

#include "lpp/lpp_core.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace lpp {

WeightTable::WeightTable(Region region, double fill)
    : region_(region), fill_(fill), values_() {
    if (!region.valid()) throw InvalidRegionError("WeightTable: region with lo > hi");
    values_.assign(region.area(), fill);
}

void WeightTable::set(LatticePoint p, double w) {
    if (!region_.contains(p)) throw RangeError("WeightTable::set: point " + to_string(p) + " outside table");
    values_[static_cast<std::size_t>((p.y - region_.lo.y) * region_.width() + (p.x - region_.lo.x))] = w;
}

double WeightTable::operator()(LatticePoint p) const noexcept {
    if (!region_.contains(p)) return fill_;
    return values_[static_cast<std::size_t>((p.y - region_.lo.y) * region_.width() + (p.x - region_.lo.x))];
}

void WeightTable::fill_antidiagonal(std::int64_t depth, std::int64_t x_first,
                                    std::span<double> out) const noexcept {
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::int64_t x = x_first + static_cast<std::int64_t>(i);
        out[i] = (*this)({x, depth - x});
    }
}

WeightTable WeightTable::sample(const WeightField& field, Region region) {
    WeightTable t(region, 0.0);
    for (std::int64_t y = region.lo.y; y <= region.hi.y; ++y) {
        for (std::int64_t x = region.lo.x; x <= region.hi.x; ++x) t.set({x, y}, field({x, y}));
    }
    return t;
}

namespace detail {

void validate_region(const Region& region, const GridLimits& limits) {
    if (!region.valid()) {
        throw InvalidRegionError("invalid region: lo " + to_string(region.lo) + " exceeds hi " +
                                 to_string(region.hi));
    }
    if (region.area() > limits.max_cells) {
        throw CapacityError("region of " + std::to_string(region.area()) + " cells exceeds the cap of " +
                            std::to_string(limits.max_cells));
    }
}

Region segment_sup_region(std::span<const LatticePoint> from, std::span<const LatticePoint> to) {
    if (from.empty() || to.empty()) throw DomainError("segment_sup_passage: empty point set");
    const std::int64_t j = from.front().depth();
    const std::int64_t jj = to.front().depth();
    for (const auto& a : from) {
        if (a.depth() != j) throw DomainError("segment_sup_passage: source points must share one anti-diagonal");
    }
    for (const auto& b : to) {
        if (b.depth() != jj) throw DomainError("segment_sup_passage: target points must share one anti-diagonal");
    }
    if (jj <= j) throw DomainError("segment_sup_passage: target line must lie above the source line");
    Region r{from.front(), from.front()};
    auto extend = [&r](LatticePoint p) {
        r.lo = {std::min(r.lo.x, p.x), std::min(r.lo.y, p.y)};
        r.hi = {std::max(r.hi.x, p.x), std::max(r.hi.y, p.y)};
    };
    for (const auto& a : from) extend(a);
    for (const auto& b : to) {
        const bool reachable = std::any_of(from.begin(), from.end(), [&](LatticePoint a) { return dominated_by(a, b); });
        if (!reachable) throw DomainError("segment_sup_passage: target " + to_string(b) + " dominates no source");
        extend(b);
    }
    return r;
}

}  // namespace detail

void PassageGrid::reset(const Region& region, GridDirection direction, const GridLimits& limits) {
    detail::validate_region(region, limits);
    region_ = region;
    direction_ = direction;
    const std::int64_t dmin = region.min_depth();
    const std::int64_t dmax = region.max_depth();
    offsets_.resize(static_cast<std::size_t>(dmax - dmin + 2));
    std::size_t acc = 0;
    for (std::int64_t d = dmin; d <= dmax; ++d) {
        offsets_[static_cast<std::size_t>(d - dmin)] = acc;
        acc += static_cast<std::size_t>(region.last_x(d) - region.first_x(d) + 1);
    }
    offsets_.back() = acc;
    values_.resize(acc);
}

namespace {

void check_start(const PassageGrid& grid, LatticePoint u) {
    if (grid.direction() != GridDirection::ToSink) {
        throw DomainError("geodesic extraction needs a grid anchored at a sink");
    }
    if (!dominated_by(u, grid.sink())) {
        throw OrderingError("start " + to_string(u) + " is not <= sink " + to_string(grid.sink()));
    }
    if (!grid.region().contains(u)) {
        throw RangeError("start " + to_string(u) + " lies outside the grid region");
    }
}

}  // namespace

Geodesic geodesic(const PassageGrid& grid, LatticePoint u) {
    check_start(grid, u);
    const LatticePoint sink = grid.sink();
    Geodesic g;
    g.points.reserve(static_cast<std::size_t>(sink.depth() - u.depth() + 1));
    LatticePoint p = u;
    g.points.push_back(p);
    while (p != sink) {
        p = next_on_geodesic(grid, p);
        g.points.push_back(p);
    }
    return g;
}

LatticePoint geodesic_crossing(const PassageGrid& grid, LatticePoint u, std::int64_t depth) {
    check_start(grid, u);
    if (depth < u.depth() || depth > grid.sink().depth()) {
        throw RangeError("line " + std::to_string(depth) + " outside the geodesic's depth range");
    }
    LatticePoint p = u;
    while (p.depth() < depth) p = next_on_geodesic(grid, p);
    return p;
}

std::uint64_t count_up_right_paths(LatticePoint u, LatticePoint w) noexcept {
    if (!dominated_by(u, w)) return 0;
    const auto dx = static_cast<std::uint64_t>(w.x - u.x);
    const auto dy = static_cast<std::uint64_t>(w.y - u.y);
    const std::uint64_t k = std::min(dx, dy);
    const std::uint64_t n = dx + dy;
    // C(n, k) built incrementally; every partial product is itself a binomial.
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(c);
}

BruteForceResult brute_force_passage(const WeightTable& weights, LatticePoint u, LatticePoint w,
                                     std::uint64_t max_paths) {
    if (!dominated_by(u, w)) {
        throw OrderingError("brute_force_passage: " + to_string(u) + " is not <= " + to_string(w));
    }
    const std::uint64_t paths = count_up_right_paths(u, w);
    if (paths > max_paths) {
        throw CapacityError("brute_force_passage: " + std::to_string(paths) + " paths exceed the cap of " +
                            std::to_string(max_paths));
    }
    // 0 = right, 1 = up; ascending order puts right-first paths first.
    std::vector<std::uint8_t> steps;
    steps.insert(steps.end(), static_cast<std::size_t>(w.x - u.x), 0);
    steps.insert(steps.end(), static_cast<std::size_t>(w.y - u.y), 1);

    std::vector<LatticePoint> pts(steps.size() + 1);
    BruteForceResult best{kNegInf, {}};
    do {
        pts[0] = u;
        for (std::size_t i = 0; i < steps.size(); ++i) pts[i + 1] = pts[i] + (steps[i] ? kStepUp : kStepRight);
        double s = 0.0;
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) s = weights(*it) + s;
        if (s > best.passage) {
            best.passage = s;
            best.path.points = pts;
        }
    } while (std::next_permutation(steps.begin(), steps.end()));
    return best;
}

BruteForceResult brute_force_passage(const WeightField& field, LatticePoint u, LatticePoint w,
                                     std::uint64_t max_paths) {
    if (!dominated_by(u, w)) {
        throw OrderingError("brute_force_passage: " + to_string(u) + " is not <= " + to_string(w));
    }
    if (count_up_right_paths(u, w) > max_paths) {
        throw CapacityError("brute_force_passage: path count exceeds the cap");
    }
    return brute_force_passage(WeightTable::sample(field, Region{u, w}), u, w, max_paths);
}

}  // namespace lpp
