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
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lpp/types.hpp"

namespace lpp {

/// Seed of trial t's weight field: a fixed mix of (base_seed, t), independent
/// of which worker runs the trial.
std::uint64_t trial_seed(std::uint64_t base_seed, std::int64_t trial) noexcept;

/// 64-bit FNV-1a, used to fingerprint configurations in checkpoints.
std::uint64_t fnv1a64(std::string_view text) noexcept;

struct TrialPlan {
    std::uint64_t base_seed = 0;
    std::int64_t total_trials = 0;
    std::int64_t batch_size = 256;
    std::int64_t completed = 0;
};

/// Per-trial output: integer tallies and real-valued terms, both summed by
/// the aggregator.
struct TrialRecord {
    std::vector<std::int64_t> counts;
    std::vector<double> values;
};

/// Commutative-monoid aggregate of TrialRecords. Integer counts commute
/// exactly; real sums are folded in trial-index order, which the runner
/// guarantees regardless of scheduling.
struct Tally {
    std::int64_t trials = 0;
    std::vector<std::int64_t> counts;
    std::vector<double> sums;

    void add(const TrialRecord& r);
    std::int64_t count(std::size_t i) const { return i < counts.size() ? counts[i] : 0; }
    double sum(std::size_t i) const { return i < sums.size() ? sums[i] : 0.0; }

    nlohmann::json to_json() const;
    static Tally from_json(const nlohmann::json& j);
    friend bool operator==(const Tally&, const Tally&) = default;
};

struct TrialFailure : std::runtime_error {
    TrialFailure(std::int64_t trial, std::uint64_t seed, const std::string& what);
    std::int64_t trial;
    std::uint64_t seed;
};

/// A run stopped early by RunOptions::stop_after; progress is in the checkpoint.
struct RunInterrupted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Checkpoint blob; see docs/checkpoint-format.md.
struct Checkpoint {
    static constexpr int kVersion = 1;
    std::uint64_t config_hash = 0;
    std::string config;
    std::int64_t completed = 0;
    std::int64_t total = 0;
    Tally tally;

    void save(const std::filesystem::path& path) const;
    static Checkpoint load(const std::filesystem::path& path);
};

struct RunOptions {
    int workers = 1;
    /// When set, progress is persisted after every batch and an existing
    /// file with a matching configuration is resumed.
    std::optional<std::filesystem::path> checkpoint;
    /// Canonical configuration text; its hash guards resumption.
    std::string config;
    /// Stop (as if interrupted) once this many trials are complete.
    std::optional<std::int64_t> stop_after;
    std::function<void(std::int64_t done, std::int64_t total)> progress;
};

namespace detail {
void load_checkpoint_into(const RunOptions& opts, TrialPlan& plan, Tally& tally);
void save_checkpoint_from(const RunOptions& opts, const TrialPlan& plan, const Tally& tally);
}  // namespace detail

/// Runs trials plan.completed .. plan.total_trials - 1 and folds their records
/// into `tally` in index order, so the result is identical for any `workers`.
///
/// `make_state` builds per-worker scratch (grids are reused across trials);
/// `trial_fn(state, t, seed)` must be a pure function of (t, seed). Returns
/// true when every trial has completed, false if stopped by `stop_after`.
template <class MakeState, class TrialFn>
bool run_trials(TrialPlan& plan, Tally& tally, MakeState&& make_state, TrialFn&& trial_fn,
                const RunOptions& opts = {}) {
    using State = std::invoke_result_t<MakeState&>;
    if (opts.workers < 1) throw std::invalid_argument("run_trials: workers must be >= 1");
    if (plan.batch_size < 1) throw std::invalid_argument("run_trials: batch_size must be >= 1");
    detail::load_checkpoint_into(opts, plan, tally);

    while (plan.completed < plan.total_trials) {
        std::int64_t end = std::min(plan.total_trials, plan.completed + plan.batch_size);
        if (opts.stop_after) end = std::min(end, std::max(*opts.stop_after, plan.completed));
        if (end == plan.completed) return false;
        const std::int64_t begin = plan.completed;
        const auto n = static_cast<std::size_t>(end - begin);

        std::vector<TrialRecord> records(n);
        std::atomic<std::size_t> next{0};
        std::mutex err_mu;
        std::optional<std::pair<std::int64_t, std::string>> failure;

        auto work = [&] {
            State state = make_state();
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                const std::int64_t t = begin + static_cast<std::int64_t>(i);
                try {
                    records[i] = trial_fn(state, t, trial_seed(plan.base_seed, t));
                } catch (const std::exception& e) {
                    std::lock_guard lock(err_mu);
                    if (!failure || failure->first > t) failure = {t, e.what()};
                }
            }
        };
        const auto nthreads = static_cast<std::size_t>(std::min<std::int64_t>(opts.workers, end - begin));
        if (nthreads <= 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(nthreads);
            for (std::size_t w = 0; w < nthreads; ++w) pool.emplace_back(work);
        }
        if (failure) throw TrialFailure(failure->first, trial_seed(plan.base_seed, failure->first), failure->second);

        for (const auto& r : records) tally.add(r);
        plan.completed = end;
        detail::save_checkpoint_from(opts, plan, tally);
        if (opts.progress) opts.progress(plan.completed, plan.total_trials);
    }
    return true;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

inline constexpr double kDefaultZ = 1.96;

/// Wilson score interval for a binomial proportion, clipped to [0, 1].
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = kDefaultZ);

}  // namespace lpp
