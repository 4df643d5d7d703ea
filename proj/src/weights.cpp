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

#include "lpp/weights.hpp"

#include <sstream>
#include <string>

namespace lpp {

std::string to_string(LatticePoint p) {
    std::ostringstream os;
    os << p;
    return os.str();
}

double exp_inverse_cdf(double u) {
    if (!(u >= 0.0 && u < 1.0)) {
        throw DomainError("exp_inverse_cdf: argument must lie in [0, 1)");
    }
    if (u == 0.0) return 0.0;
    return -detail::log_positive(1.0 - u);
}

void WeightField::fill_antidiagonal(std::int64_t depth, std::int64_t x_first,
                                    std::span<double> out) const noexcept {
    const std::size_t n = out.size();
    double* dst = out.data();
    const std::uint64_t k1 = k1_;
    const std::uint64_t k2 = k2_;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t x = x_first + static_cast<std::int64_t>(i);
        const std::uint64_t key = detail::pack_coordinates(x, depth - x);
        const std::uint64_t h = detail::mix64(detail::mix64(key ^ k1) + k2);
        dst[i] = detail::exp_from_bits53(h >> 11);
    }
}

}  // namespace lpp
