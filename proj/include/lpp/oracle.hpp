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
#include <map>
#include <string>
#include <vector>

namespace lpp {

struct OracleMismatch {
    std::uint64_t field_seed = 0;
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::string detail;
};

struct OracleReport {
    std::int64_t shapes = 0;
    std::int64_t comparisons = 0;  // (field, start) pairs checked
    double max_relative_error = 0.0;
    std::vector<OracleMismatch> mismatches;
};

/// Grid DP versus exhaustive path enumeration on every width x height
/// rectangle with 1 <= width, height <= max_size, `cases` random fields per
/// shape, every start point against the upper corner. Passage times must
/// agree within `tolerance` relative error and geodesics point for point.
OracleReport oracle_check(int max_size, std::int64_t cases, std::uint64_t seed, double tolerance = 1e-12);

struct StructuralReport {
    std::int64_t environments = 0;
    std::map<std::string, std::int64_t> checks;      // per invariant
    std::map<std::string, std::int64_t> violations;  // per invariant
    std::vector<std::string> first_failures;         // up to 20 descriptions
    std::int64_t total_violations() const;
};

/// Samples `environments` fields on boxes of side about n and checks, with
/// randomly drawn starts, that geodesics are up-right and cross each line
/// once; two geodesics to one sink share exactly the suffix after their
/// coalescence point; ordered starts give ordered geodesics and crossings;
/// d(C) > j iff the crossings of L_j differ; and the coalescence depth of
/// (0,q), (q,0) is the larger of the depths against 0.
StructuralReport structural_survey(std::int64_t n, std::int64_t environments, std::uint64_t seed);

}  // namespace lpp
