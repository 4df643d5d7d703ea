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

#include <bit>
#include <cstdint>
#include <span>

#include "lpp/types.hpp"

namespace lpp {

namespace detail {

// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t pack_coordinates(std::int64_t x, std::int64_t y) noexcept {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(y));
}

// Natural log for positive normal doubles. Branch-free so that bulk loops
// vectorize; uses only IEEE basic operations, so results do not depend on
// the platform libm. Kernel and coefficients follow fdlibm's e_log.c.
inline double log_positive(double x) noexcept {
    constexpr double ln2_hi = 6.93147180369123816490e-01;
    constexpr double ln2_lo = 1.90821492927058770002e-10;
    constexpr double Lg1 = 6.666666666666735130e-01;
    constexpr double Lg2 = 3.999999999940941908e-01;
    constexpr double Lg3 = 2.857142874366239149e-01;
    constexpr double Lg4 = 2.222219843214978396e-01;
    constexpr double Lg5 = 1.818357216161805012e-01;
    constexpr double Lg6 = 1.531383769920937332e-01;
    constexpr double Lg7 = 1.479819860511658591e-01;

    // x = 2^e * m with m in [sqrt(2)/2, sqrt(2)), selected with integer
    // arithmetic only.
    const auto bits = std::bit_cast<std::uint64_t>(x);
    const std::uint64_t mant = bits & 0x000FFFFFFFFFFFFFULL;
    const std::uint64_t high = static_cast<std::uint64_t>(mant > 0x6A09E667F3BCDULL);  // m > sqrt(2)
    const std::int64_t e = static_cast<std::int64_t>(bits >> 52) - 1023 + static_cast<std::int64_t>(high);
    const double m = std::bit_cast<double>(mant | ((1023 - high) << 52));

    const double f = m - 1.0;
    const double k = static_cast<double>(e);
    const double s = f / (2.0 + f);
    const double z = s * s;
    const double w = z * z;
    const double t1 = w * (Lg2 + w * (Lg4 + w * Lg6));
    const double t2 = z * (Lg1 + w * (Lg3 + w * (Lg5 + w * Lg7)));
    const double r = t2 + t1;
    const double hfsq = 0.5 * f * f;
    return k * ln2_hi - ((hfsq - (s * (hfsq + r) + k * ln2_lo)) - f);
}

// -ln(1 - u) for u = bits53 * 2^-53; 1 - u is formed exactly.
inline double exp_from_bits53(std::uint64_t bits53) noexcept {
    const double one_minus_u =
        static_cast<double>(static_cast<std::int64_t>((std::uint64_t{1} << 53) - bits53)) * 0x1.0p-53;
    return -log_positive(one_minus_u);
}

}  // namespace detail

/// Inverse CDF of Exp(1): -ln(1 - u). Throws DomainError unless 0 <= u < 1.
double exp_inverse_cdf(double u);

/// Deterministic, lazily evaluated field of i.i.d. Exp(1) vertex weights.
///
/// The weight at (x, y) is a pure function of (seed, x, y):
///
///     key  = (uint32(x) << 32) | uint32(y)
///     h    = mix64(mix64(key ^ k1) + k2)     k1 = mix64(seed), k2 = mix64(k1 ^ C)
///     u    = (h >> 11) * 2^-53                in [0, 1 - 2^-53]
///     xi   = -ln(1 - u)
///
/// where mix64 is the SplitMix64 finalizer and C = 0x9e3779b97f4a7c15. The
/// log is evaluated by `detail::log_positive`, which uses IEEE basic
/// operations only, so weights are bit-reproducible wherever the build
/// disables floating-point contraction. Coordinates must fit in 32 bits.
class WeightField {
public:
    explicit constexpr WeightField(std::uint64_t seed) noexcept
        : seed_(seed), k1_(detail::mix64(seed)),
          k2_(detail::mix64(detail::mix64(seed) ^ 0x9e3779b97f4a7c15ULL)) {}

    constexpr std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t hash(std::int64_t x, std::int64_t y) const noexcept {
        return detail::mix64(detail::mix64(detail::pack_coordinates(x, y) ^ k1_) + k2_);
    }

    double operator()(LatticePoint p) const noexcept {
        return detail::exp_from_bits53(hash(p.x, p.y) >> 11);
    }

    /// Writes the weights of the points (x_first + i, depth - x_first - i)
    /// into out[i]. This is the bulk path used by the grid sweeps.
    void fill_antidiagonal(std::int64_t depth, std::int64_t x_first,
                           std::span<double> out) const noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t k1_;
    std::uint64_t k2_;
};

/// weight_at(field, p): the Exp(1) weight of vertex p.
inline double weight_at(const WeightField& field, LatticePoint p) noexcept { return field(p); }

}  // namespace lpp
