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

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lpp/experiments.hpp"

namespace lpp {

inline constexpr std::string_view kVersion = "0.1.0";

/// One CSV line. Blank (nullopt) fields are inapplicable to the experiment.
/// For statistic rows (means, standard deviations, ratios) `p_hat` carries
/// the point estimate and `successes` is blank.
struct ResultRow {
    std::string experiment;
    std::optional<std::int64_t> k, n;
    std::optional<double> R;
    std::optional<std::int64_t> m, r, s;
    std::optional<double> x;
    std::optional<std::int64_t> trials, successes;
    std::optional<double> p_hat, ci_lo, ci_hi;
    std::optional<std::uint64_t> seed;
    std::optional<double> wall_time_s;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr std::array<std::string_view, 15> kCsvColumns = {
    "experiment", "k", "n", "R", "m", "r", "s", "x", "trials", "successes",
    "p_hat", "ci_lo", "ci_hi", "seed", "wall_time_s"};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to the same double; '.' decimal
/// point regardless of locale. NaN and infinities format as blank.
std::string format_number(double v);

std::string to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv(std::istream& in);
nlohmann::json row_to_json(const ResultRow& row);

/// Everything needed to rerun and interpret one CLI invocation.
struct RunReport {
    std::string experiment;
    nlohmann::json config;  // full effective configuration
    std::vector<ResultRow> rows;
    nlohmann::json results = nlohmann::json::object();  // fit and summary statistics
    int workers = 1;
    double z = kDefaultZ;
};

nlohmann::json to_json(const RunReport& report);

/// Writes `csv_path` and its JSON mirror (same path with a .json extension).
void write_report(const RunReport& report, const std::filesystem::path& csv_path);

std::filesystem::path json_mirror_path(const std::filesystem::path& csv_path);

nlohmann::json fit_to_json(const std::optional<PowerLawFit>& fit);

// Row builders, one per experiment. `wall` is the run's wall time, or
// nullopt to leave the column blank.
std::vector<ResultRow> tail_rows(const std::string& experiment, const ExperimentConfig& cfg,
                                 const TailEstimateTable& table, std::optional<double> wall);
std::vector<ResultRow> reduction_rows(const ReductionConfig& cfg, const ReductionResult& res,
                                      std::optional<double> wall);
std::vector<ResultRow> family_rows(const FamilyConfig& cfg, const MeanEstimate& est, std::optional<double> wall);
std::vector<ResultRow> fluctuation_rows(const FluctuationConfig& cfg, const std::vector<ExceedanceRow>& rows,
                                        std::optional<double> wall);
std::vector<ResultRow> onepoint_rows(const OnePointConfig& cfg, const OnePointStats& st, std::optional<double> wall);
std::vector<ResultRow> segment_rows(const SegmentSupConfig& cfg, const SegmentSupStats& st,
                                    std::optional<double> wall);

}  // namespace lpp
