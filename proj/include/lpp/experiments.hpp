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
#include <optional>
#include <string>
#include <vector>

#include "lpp/harness.hpp"
#include "lpp/lpp_core.hpp"

namespace lpp {

/// Configuration error found before any compute; the message names the
/// violated inequality, e.g. "requires n > Rk".
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Shared execution knobs for every experiment.
struct ExecOptions {
    int workers = 1;
    std::int64_t batch_size = 256;
    std::optional<std::filesystem::path> checkpoint;
    std::optional<std::int64_t> stop_after;
    std::function<void(std::int64_t, std::int64_t)> progress;
    GridLimits limits{};
    double z = kDefaultZ;
};

// ---------------------------------------------------------------- fitting

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::size_t points_used = 0;
    std::vector<std::string> warnings;
};

struct FitPoint {
    double R = 0.0;
    double p_hat = 0.0;
};

/// Least squares of ln p_hat on ln R. Points with p_hat <= 0 are dropped
/// with a warning; fewer than three usable points is an error. Optional
/// weights give a weighted fit; the default is unweighted.
PowerLawFit fit_power_law(const std::vector<FitPoint>& points,
                          const std::optional<std::vector<double>>& weights = std::nullopt);

// ------------------------------------------------------------ tail tables

struct TailRow {
    double R = 0.0;
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct TailEstimateTable {
    std::vector<TailRow> rows;
    std::optional<PowerLawFit> fit;  // absent with fewer than 3 positive rows
};

/// Builds rows (with Wilson intervals) and the power-law fit from raw counts.
TailEstimateTable make_tail_table(const std::vector<double>& R_values, std::int64_t trials,
                                  const std::vector<std::int64_t>& successes, double z = kDefaultZ);

struct ExperimentConfig {
    std::int64_t k = 8;
    std::int64_t n = 1024;
    std::vector<double> R_values{4, 8, 16, 32};
    std::int64_t trials = 50000;
    std::uint64_t seed = 1;
};

/// P[d(C^{kbar, -kbar; nbar}) > Rk] for each R, one environment per trial
/// serving every R.
TailEstimateTable estimate_coalescence_tail(const ExperimentConfig& cfg, const ExecOptions& exec = {});

/// P[C^{0, ktilde; nbar}_1 > Rk] with ktilde = (0, floor(k^{2/3})).
TailEstimateTable estimate_corollary_tail(const ExperimentConfig& cfg, const ExecOptions& exec = {});

void validate_tail_config(const ExperimentConfig& cfg);
void validate_corollary_config(const ExperimentConfig& cfg);
std::string canonical_config(const std::string& experiment, const ExperimentConfig& cfg);

// -------------------------------------------------------- reduction ratio

struct ReductionConfig {
    std::int64_t k = 8;
    std::int64_t n = 512;
    double R = 16;
    std::int64_t trials = 20000;
    std::uint64_t seed = 3;
};

struct ProportionEstimate {
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    double p_hat = 0.0;
    Interval ci;
};

struct ReductionResult {
    ProportionEstimate e1;  // crossings of Gamma_{kbar,nbar}, Gamma_{-kbar,nbar} differ
    ProportionEstimate e3;  // crossings of Gamma_{-kbar,nbar}, Gamma_{kbar,nbar+2kbar} differ
    std::int64_t e2_successes = 0;
    double ratio = 0.0;     // p1 / p3 (NaN when p3 = 0)
    Interval ratio_ci;      // delta method
};

void validate_reduction_config(const ReductionConfig& cfg);
std::string canonical_config(const ReductionConfig& cfg);
ReductionResult reduction_ratio(const ReductionConfig& cfg, const ExecOptions& exec = {});

// ------------------------------------------------------ family crossings

struct FamilyConfig {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t spacing = 1;
    std::int64_t m = 0;
    std::int64_t s = 2;
    std::int64_t r = 1;
    std::int64_t trials = 5000;
    std::uint64_t seed = 4;
};

struct MeanEstimate {
    std::int64_t trials = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    Interval ci;          // normal approximation
};

void validate_family_config(const FamilyConfig& cfg);
std::string canonical_config(const FamilyConfig& cfg);
MeanEstimate estimate_family_crossings(const FamilyConfig& cfg, const ExecOptions& exec = {});

// ------------------------------------------------- transversal fluctuation

struct FluctuationConfig {
    std::int64_t m_offset = 0;
    std::int64_t r = 128;
    std::int64_t n = 512;
    std::vector<double> x_values{0.5, 1, 2, 3};
    std::int64_t trials = 20000;
    std::uint64_t seed = 5;
};

struct ExceedanceRow {
    double x = 0.0;
    ProportionEstimate estimate;
};

void validate_fluctuation_config(const FluctuationConfig& cfg);
std::string canonical_config(const FluctuationConfig& cfg);
/// Rows of P[|f_0| > x r^{2/3}], f_0 the displacement of Gamma_{(m,-m), nbar}
/// where it meets L_{2r}.
std::vector<ExceedanceRow> fluctuation_profile(const FluctuationConfig& cfg, const ExecOptions& exec = {});

// --------------------------------------------------------------- one point

struct OnePointConfig {
    std::int64_t m = 512;
    std::int64_t n = 512;
    std::int64_t trials = 5000;
    std::uint64_t seed = 6;
};

struct OnePointStats {
    std::int64_t trials = 0;
    double center = 0.0;      // (sqrt m + sqrt n)^2
    MeanEstimate shift;       // T - center
    double stddev = 0.0;
    int shift_sign = 0;       // sign of the mean shift
    double shift_scaled = 0;  // mean shift / n^{1/3}
    double std_scaled = 0;    // stddev / n^{1/3}
};

void validate_onepoint_config(const OnePointConfig& cfg);
std::string canonical_config(const OnePointConfig& cfg);
OnePointStats onepoint_stats(const OnePointConfig& cfg, const ExecOptions& exec = {});

// ------------------------------------------------------- segment supremum

struct SegmentSupConfig {
    std::int64_t n = 256;
    std::vector<double> x_values{-4, -2, 0, 2};
    std::int64_t trials = 5000;
    std::uint64_t seed = 7;
};

struct SegmentSupStats {
    std::int64_t trials = 0;
    std::int64_t half_width = 0;   // segments are (i,-i), (n+i,n-i) for |i| <= half_width
    MeanEstimate sup_shift_scaled; // (sup T - 4n) / n^{1/3}
    MeanEstimate point_shift_scaled; // (T_{0,nbar} - 4n) / n^{1/3}, same environments
    std::vector<ExceedanceRow> tail; // P[(sup T - 4n)/n^{1/3} > x]
};

/// Segment points on L_0 and L_{2n} centered at 0 and nbar.
std::pair<std::vector<LatticePoint>, std::vector<LatticePoint>> segment_endpoints(std::int64_t n);

void validate_segment_config(const SegmentSupConfig& cfg);
std::string canonical_config(const SegmentSupConfig& cfg);
SegmentSupStats segment_sup_stats(const SegmentSupConfig& cfg, const ExecOptions& exec = {});

}  // namespace lpp
