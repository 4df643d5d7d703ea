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

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace lpp {

/// A vertex of Z^2. `depth()` is the index of the anti-diagonal line the
/// point lies on; an up-right step increases it by exactly one.
struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;

    constexpr std::int64_t depth() const noexcept { return x + y; }

    constexpr LatticePoint operator+(LatticePoint o) const noexcept { return {x + o.x, y + o.y}; }
    constexpr LatticePoint operator-(LatticePoint o) const noexcept { return {x - o.x, y - o.y}; }
    constexpr LatticePoint operator-() const noexcept { return {-x, -y}; }

    friend constexpr bool operator==(LatticePoint, LatticePoint) = default;
    friend constexpr auto operator<=>(LatticePoint, LatticePoint) = default;
};

inline constexpr LatticePoint kStepRight{1, 0};
inline constexpr LatticePoint kStepUp{0, 1};

/// Coordinatewise order: u <= v iff u.x <= v.x and u.y <= v.y.
constexpr bool dominated_by(LatticePoint u, LatticePoint v) noexcept {
    return u.x <= v.x && u.y <= v.y;
}

/// The diagonal point (n, n).
constexpr LatticePoint diagonal_point(std::int64_t n) noexcept { return {n, n}; }

inline std::ostream& operator<<(std::ostream& os, LatticePoint p) {
    return os << '(' << p.x << ',' << p.y << ')';
}

std::string to_string(LatticePoint p);

// Error taxonomy. All derive from standard exception types so callers can
// catch broadly.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};
struct OrderingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidRegionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct GeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// A structural property that must hold on every sampled environment failed.
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace lpp
