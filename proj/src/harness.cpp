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

#include "lpp/harness.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lpp/weights.hpp"

namespace lpp {

std::uint64_t trial_seed(std::uint64_t base_seed, std::int64_t trial) noexcept {
    const std::uint64_t t = static_cast<std::uint64_t>(trial);
    return detail::mix64(detail::mix64(base_seed ^ 0x6a09e667f3bcc909ULL) + detail::mix64(t + 0x9e3779b97f4a7c15ULL));
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void Tally::add(const TrialRecord& r) {
    if (counts.size() < r.counts.size()) counts.resize(r.counts.size(), 0);
    if (sums.size() < r.values.size()) sums.resize(r.values.size(), 0.0);
    for (std::size_t i = 0; i < r.counts.size(); ++i) counts[i] += r.counts[i];
    for (std::size_t i = 0; i < r.values.size(); ++i) sums[i] += r.values[i];
    ++trials;
}

namespace {

// Doubles travel as their IEEE bit patterns so resumption is bit-exact.
std::string encode_double(double v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
    return buf;
}

double decode_double(const std::string& s) {
    return std::bit_cast<double>(static_cast<std::uint64_t>(std::stoull(s, nullptr, 16)));
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

nlohmann::json Tally::to_json() const {
    nlohmann::json s = nlohmann::json::array();
    for (double v : sums) s.push_back(encode_double(v));
    return {{"trials", trials}, {"counts", counts}, {"sums_bits", s}};
}

Tally Tally::from_json(const nlohmann::json& j) {
    Tally t;
    t.trials = j.at("trials").get<std::int64_t>();
    t.counts = j.at("counts").get<std::vector<std::int64_t>>();
    for (const auto& s : j.at("sums_bits")) t.sums.push_back(decode_double(s.get<std::string>()));
    return t;
}

TrialFailure::TrialFailure(std::int64_t trial_, std::uint64_t seed_, const std::string& what)
    : std::runtime_error("trial " + std::to_string(trial_) + " (field seed " + std::to_string(seed_) +
                         ") failed: " + what),
      trial(trial_), seed(seed_) {}

void Checkpoint::save(const std::filesystem::path& path) const {
    const nlohmann::json j = {
        {"format", "lppsim-checkpoint"},
        {"version", kVersion},
        {"config_hash", hex64(config_hash)},
        {"config", config},
        {"completed", completed},
        {"total", total},
        {"tally", tally.to_json()},
    };
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CheckpointError("cannot write checkpoint " + tmp.string());
        out << j.dump(2) << '\n';
        if (!out) throw CheckpointError("short write to checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot read checkpoint " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        if (j.at("format") != "lppsim-checkpoint") throw CheckpointError("not a checkpoint: " + path.string());
        if (j.at("version").get<int>() != kVersion) {
            throw CheckpointError("unsupported checkpoint version in " + path.string());
        }
        Checkpoint c;
        c.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
        c.config = j.at("config").get<std::string>();
        c.completed = j.at("completed").get<std::int64_t>();
        c.total = j.at("total").get<std::int64_t>();
        c.tally = Tally::from_json(j.at("tally"));
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError("malformed checkpoint " + path.string() + ": " + e.what());
    }
}

namespace detail {

void load_checkpoint_into(const RunOptions& opts, TrialPlan& plan, Tally& tally) {
    if (!opts.checkpoint || !std::filesystem::exists(*opts.checkpoint)) return;
    const Checkpoint c = Checkpoint::load(*opts.checkpoint);
    if (c.config_hash != fnv1a64(opts.config)) {
        throw CheckpointError("checkpoint " + opts.checkpoint->string() +
                              " was written for a different configuration: [" + c.config + "]");
    }
    if (c.total != plan.total_trials || c.completed > plan.total_trials) {
        throw CheckpointError("checkpoint trial counts do not match the plan");
    }
    plan.completed = c.completed;
    tally = c.tally;
}

void save_checkpoint_from(const RunOptions& opts, const TrialPlan& plan, const Tally& tally) {
    if (!opts.checkpoint) return;
    Checkpoint c;
    c.config = opts.config;
    c.config_hash = fnv1a64(opts.config);
    c.completed = plan.completed;
    c.total = plan.total_trials;
    c.tally = tally;
    c.save(*opts.checkpoint);
}

}  // namespace detail

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials < 1) throw DomainError("wilson_interval: trials must be >= 1");
    if (successes < 0 || successes > trials) throw DomainError("wilson_interval: successes outside [0, trials]");
    if (!(z > 0.0)) throw DomainError("wilson_interval: z must be positive");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Interval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
    // Pin the degenerate ends exactly.
    if (successes == 0) iv.lo = 0.0;
    if (successes == trials) iv.hi = 1.0;
    return iv;
}

}  // namespace lpp
