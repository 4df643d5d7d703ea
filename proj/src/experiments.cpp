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

#include "lpp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lpp/geometry.hpp"
#include "lpp/weights.hpp"

namespace lpp {

// ----------------------------------------------------------------- fitting

PowerLawFit fit_power_law(const std::vector<FitPoint>& points, const std::optional<std::vector<double>>& weights) {
    if (weights && weights->size() != points.size()) {
        throw DomainError("fit_power_law: weights and points differ in length");
    }
    PowerLawFit fit;
    std::vector<double> xs, ys, ws;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(p.p_hat > 0.0) || !(p.R > 0.0)) {
            std::ostringstream os;
            os << "excluded point R=" << p.R << " p_hat=" << p.p_hat << " (non-positive)";
            fit.warnings.push_back(os.str());
            continue;
        }
        xs.push_back(std::log(p.R));
        ys.push_back(std::log(p.p_hat));
        ws.push_back(weights ? (*weights)[i] : 1.0);
    }
    const std::size_t n = xs.size();
    if (n < 3) {
        throw InsufficientDataError("fit_power_law: need at least 3 points with p_hat > 0, have " + std::to_string(n));
    }
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += ws[i];
        sx += ws[i] * xs[i];
        sy += ws[i] * ys[i];
    }
    const double mx = sx / sw;
    const double my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
        sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw InsufficientDataError("fit_power_law: all R values coincide");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double res = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ssr += ws[i] * res * res;
    }
    fit.stderr_slope = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    fit.points_used = n;
    return fit;
}

TailEstimateTable make_tail_table(const std::vector<double>& R_values, std::int64_t trials,
                                  const std::vector<std::int64_t>& successes, double z) {
    TailEstimateTable table;
    std::vector<FitPoint> pts;
    for (std::size_t i = 0; i < R_values.size(); ++i) {
        TailRow row;
        row.R = R_values[i];
        row.trials = trials;
        row.successes = i < successes.size() ? successes[i] : 0;
        if (trials > 0) {
            row.p_hat = static_cast<double>(row.successes) / static_cast<double>(trials);
            const Interval ci = wilson_interval(row.successes, trials, z);
            row.ci_lo = ci.lo;
            row.ci_hi = ci.hi;
        }
        table.rows.push_back(row);
        if (row.p_hat > 0.0) pts.push_back({row.R, row.p_hat});
    }
    if (pts.size() >= 3) table.fit = fit_power_law(pts);
    return table;
}

// ------------------------------------------------------------------ common

namespace {

struct Scratch {
    PassageGrid a;
    PassageGrid b;
};

template <class TrialFn>
Tally run_experiment(const std::string& config, std::uint64_t seed, std::int64_t trials,
                     const ExecOptions& exec, TrialFn&& fn) {
    TrialPlan plan{seed, trials, exec.batch_size, 0};
    RunOptions ro;
    ro.workers = exec.workers;
    ro.checkpoint = exec.checkpoint;
    ro.config = config;
    ro.stop_after = exec.stop_after;
    ro.progress = exec.progress;
    Tally tally;
    if (!run_trials(plan, tally, [] { return Scratch{}; }, fn, ro)) {
        throw RunInterrupted("run stopped after " + std::to_string(plan.completed) + " of " +
                             std::to_string(trials) + " trials");
    }
    return tally;
}

ProportionEstimate proportion(std::int64_t successes, std::int64_t trials, double z) {
    ProportionEstimate e;
    e.trials = trials;
    e.successes = successes;
    if (trials > 0) {
        e.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
        e.ci = wilson_interval(successes, trials, z);
    }
    return e;
}

MeanEstimate mean_from_sums(double s1, double s2, std::int64_t n, double z) {
    MeanEstimate e;
    e.trials = n;
    if (n == 0) return e;
    const double nn = static_cast<double>(n);
    e.mean = s1 / nn;
    if (n > 1) {
        const double var = std::max(0.0, (s2 - nn * e.mean * e.mean) / (nn - 1.0));
        e.stddev = std::sqrt(var);
    }
    const double half = z * e.stddev / std::sqrt(nn);
    e.ci = {e.mean - half, e.mean + half};
    return e;
}

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double two_thirds_power(double r) { return std::pow(r, 2.0 / 3.0); }

}  // namespace

// --------------------------------------------------------- coalescence tail

void validate_tail_config(const ExperimentConfig& cfg) {
    require(cfg.k >= 1, "requires k >= 1");
    require(cfg.n >= 1, "requires n >= 1");
    require(cfg.trials >= 1, "requires trials >= 1");
    require(!cfg.R_values.empty(), "requires at least one R value");
    for (double R : cfg.R_values) {
        require(R > 0.0, "requires R > 0");
        require(static_cast<double>(cfg.n) > R * static_cast<double>(cfg.k),
                "requires n > Rk (n = " + std::to_string(cfg.n) + ", Rk = " + fmt(R * static_cast<double>(cfg.k)) + ")");
    }
}

void validate_corollary_config(const ExperimentConfig& cfg) {
    require(cfg.k >= 1, "requires k >= 1");
    require(cfg.n >= 1, "requires n >= 1");
    require(cfg.trials >= 1, "requires trials >= 1");
    require(!cfg.R_values.empty(), "requires at least one R value");
    for (double R : cfg.R_values) {
        require(R > 0.0, "requires R > 0");
        require(static_cast<double>(cfg.n) > 4.0 * R * static_cast<double>(cfg.k),
                "requires n > 4Rk (n = " + std::to_string(cfg.n) + ", 4Rk = " +
                    fmt(4.0 * R * static_cast<double>(cfg.k)) + ")");
    }
}

std::string canonical_config(const std::string& experiment, const ExperimentConfig& cfg) {
    return experiment + ";k=" + std::to_string(cfg.k) + ";n=" + std::to_string(cfg.n) + ";R=" + join(cfg.R_values) +
           ";trials=" + std::to_string(cfg.trials) + ";seed=" + std::to_string(cfg.seed);
}

TailEstimateTable estimate_coalescence_tail(const ExperimentConfig& cfg, const ExecOptions& exec) {
    validate_tail_config(cfg);
    const std::int64_t q = floor_two_thirds(cfg.k);
    const LatticePoint kbar{q, -q};
    const LatticePoint sink = diagonal_point(cfg.n);
    const Region region{{-q, -q}, sink};
    const double k = static_cast<double>(cfg.k);

    auto trial = [&](Scratch& s, std::int64_t, std::uint64_t seed) {
        const WeightField field(seed);
        build_passage_grid_to_sink(field, sink, region, s.a, exec.limits);
        const CoalescenceRecord c = coalescence_point(s.a, kbar, -kbar);
        TrialRecord rec;
        rec.counts.reserve(cfg.R_values.size());
        for (double R : cfg.R_values) {
            const bool late = static_cast<double>(c.depth) > R * k;
            const auto line = static_cast<std::int64_t>(std::floor(R * k));
            const bool split = geodesic_crossing(s.a, kbar, line) != geodesic_crossing(s.a, -kbar, line);
            if (late != split) {
                throw InvariantViolation("coalescence depth " + std::to_string(c.depth) + " vs crossings of L_" +
                                         std::to_string(line) + " disagree");
            }
            rec.counts.push_back(late ? 1 : 0);
        }
        return rec;
    };
    const Tally t = run_experiment(canonical_config("tail", cfg), cfg.seed, cfg.trials, exec, trial);
    return make_tail_table(cfg.R_values, t.trials, t.counts, exec.z);
}

TailEstimateTable estimate_corollary_tail(const ExperimentConfig& cfg, const ExecOptions& exec) {
    validate_corollary_config(cfg);
    const std::int64_t q = floor_two_thirds(cfg.k);
    const LatticePoint origin{0, 0};
    const LatticePoint up{0, q};
    const LatticePoint right{q, 0};
    const LatticePoint sink = diagonal_point(cfg.n);
    const Region region{origin, sink};
    const double k = static_cast<double>(cfg.k);

    auto trial = [&](Scratch& s, std::int64_t, std::uint64_t seed) {
        const WeightField field(seed);
        build_passage_grid_to_sink(field, sink, region, s.a, exec.limits);
        const CoalescenceRecord c_up = coalescence_point(s.a, origin, up);
        const CoalescenceRecord c_right = coalescence_point(s.a, origin, right);
        const CoalescenceRecord c_outer = coalescence_point(s.a, up, right);
        if (c_outer.depth != std::max(c_up.depth, c_right.depth)) {
            throw InvariantViolation("outer coalescence depth " + std::to_string(c_outer.depth) +
                                     " is not the max of " + std::to_string(c_up.depth) + " and " +
                                     std::to_string(c_right.depth));
        }
        if (c_up.first_coord > c_up.depth) {
            throw InvariantViolation("coalescence point " + to_string(c_up.point) + " has negative second coordinate");
        }
        TrialRecord rec;
        rec.counts.reserve(cfg.R_values.size());
        for (double R : cfg.R_values) rec.counts.push_back(static_cast<double>(c_up.first_coord) > R * k ? 1 : 0);
        return rec;
    };
    const Tally t = run_experiment(canonical_config("corollary-tail", cfg), cfg.seed, cfg.trials, exec, trial);
    return make_tail_table(cfg.R_values, t.trials, t.counts, exec.z);
}

// ---------------------------------------------------------- reduction ratio

void validate_reduction_config(const ReductionConfig& cfg) {
    require(cfg.k >= 1, "requires k >= 1");
    require(cfg.n >= 1, "requires n >= 1");
    require(cfg.trials >= 1, "requires trials >= 1");
    require(cfg.R > 10.0, "requires R > 10");
    require(static_cast<double>(cfg.n) > cfg.R * static_cast<double>(cfg.k),
            "requires n > Rk (n = " + std::to_string(cfg.n) + ", Rk = " + fmt(cfg.R * static_cast<double>(cfg.k)) + ")");
}

std::string canonical_config(const ReductionConfig& cfg) {
    return "reduction-ratio;k=" + std::to_string(cfg.k) + ";n=" + std::to_string(cfg.n) + ";R=" + fmt(cfg.R) +
           ";trials=" + std::to_string(cfg.trials) + ";seed=" + std::to_string(cfg.seed);
}

ReductionResult reduction_ratio(const ReductionConfig& cfg, const ExecOptions& exec) {
    validate_reduction_config(cfg);
    const std::int64_t q = floor_two_thirds(cfg.k);
    const LatticePoint kbar{q, -q};
    const LatticePoint sink = diagonal_point(cfg.n);
    const LatticePoint shifted_sink = sink + kbar + kbar;
    const Region region{{-q, -q}, sink};
    const Region shifted_region{kbar, shifted_sink};
    const auto line = static_cast<std::int64_t>(std::floor(cfg.R * static_cast<double>(cfg.k)));

    auto trial = [&](Scratch& s, std::int64_t, std::uint64_t seed) {
        const WeightField field(seed);
        build_passage_grid_to_sink(field, sink, region, s.a, exec.limits);
        build_passage_grid_to_sink(field, shifted_sink, shifted_region, s.b, exec.limits);
        const LatticePoint w_left = geodesic_crossing(s.a, -kbar, line);
        const LatticePoint w_mid = geodesic_crossing(s.a, kbar, line);
        const LatticePoint w_right = geodesic_crossing(s.b, kbar, line);
        if (transversal_offset(w_left) > transversal_offset(w_mid) ||
            transversal_offset(w_mid) > transversal_offset(w_right)) {
            throw InvariantViolation("crossings of L_" + std::to_string(line) + " out of order: " + to_string(w_left) +
                                     ", " + to_string(w_mid) + ", " + to_string(w_right));
        }
        const bool e1 = w_left != w_mid;
        const bool e2 = w_mid != w_right;
        const bool e3 = w_left != w_right;
        if (e1 && !e3) throw InvariantViolation("E1 holds but E3 does not");
        if (e3 != (e1 || e2)) throw InvariantViolation("E3 differs from the union of E1 and E2");
        return TrialRecord{{e1 ? 1 : 0, e2 ? 1 : 0, e3 ? 1 : 0}, {}};
    };
    const Tally t = run_experiment(canonical_config(cfg), cfg.seed, cfg.trials, exec, trial);

    ReductionResult res;
    res.e1 = proportion(t.count(0), t.trials, exec.z);
    res.e2_successes = t.count(1);
    res.e3 = proportion(t.count(2), t.trials, exec.z);
    const double p1 = res.e1.p_hat;
    const double p3 = res.e3.p_hat;
    const double n = static_cast<double>(t.trials);
    if (p3 > 0.0) {
        res.ratio = p1 / p3;
        // Indicators satisfy E1 within E3, so Cov(I1, I3) = p1 (1 - p3).
        const double var1 = p1 * (1.0 - p1) / n;
        const double var3 = p3 * (1.0 - p3) / n;
        const double cov = p1 * (1.0 - p3) / n;
        const double rho = res.ratio;
        const double var = std::max(0.0, (var1 + rho * rho * var3 - 2.0 * rho * cov) / (p3 * p3));
        const double half = exec.z * std::sqrt(var);
        res.ratio_ci = {rho - half, rho + half};
    } else {
        res.ratio = std::numeric_limits<double>::quiet_NaN();
        res.ratio_ci = {res.ratio, res.ratio};
    }
    return res;
}

// ------------------------------------------------------- family crossings

void validate_family_config(const FamilyConfig& cfg) {
    require(cfg.spacing >= 1, "requires d_spacing >= 1");
    require(cfg.m >= 0, "requires m >= 0");
    require(cfg.s >= 1, "requires s >= 1");
    require(cfg.r > 0 && cfg.r < cfg.s, "requires 0 < r < s");
    require(cfg.trials >= 1, "requires trials >= 1");
    try {
        (void)parallel_family(cfg.a, cfg.b, cfg.spacing, cfg.m, cfg.s);
    } catch (const GeometryError& e) {
        throw ConfigError(std::string("requires u_i <= v_i: ") + e.what());
    }
}

std::string canonical_config(const FamilyConfig& cfg) {
    return "family;a=" + std::to_string(cfg.a) + ";b=" + std::to_string(cfg.b) + ";d=" + std::to_string(cfg.spacing) +
           ";m=" + std::to_string(cfg.m) + ";s=" + std::to_string(cfg.s) + ";r=" + std::to_string(cfg.r) +
           ";trials=" + std::to_string(cfg.trials) + ";seed=" + std::to_string(cfg.seed);
}

MeanEstimate estimate_family_crossings(const FamilyConfig& cfg, const ExecOptions& exec) {
    validate_family_config(cfg);
    const ParallelFamily fam = parallel_family(cfg.a, cfg.b, cfg.spacing, cfg.m, cfg.s);
    auto trial = [&](Scratch& s, std::int64_t, std::uint64_t seed) {
        const WeightField field(seed);
        const FamilyCrossings fc = family_crossings(field, fam, cfg.r, s.a, exec.limits);
        check_family_crossings(fc);
        return TrialRecord{{fc.distinct, fc.distinct * fc.distinct}, {}};
    };
    const Tally t = run_experiment(canonical_config(cfg), cfg.seed, cfg.trials, exec, trial);
    return mean_from_sums(static_cast<double>(t.count(0)), static_cast<double>(t.count(1)), t.trials, exec.z);
}

// -------------------------------------------------- transversal fluctuation

void validate_fluctuation_config(const FluctuationConfig& cfg) {
    require(cfg.r >= 1, "requires r >= 1");
    require(cfg.r < cfg.n, "requires r < n");
    require(static_cast<double>(std::abs(cfg.m_offset)) < 10.0 * two_thirds_power(static_cast<double>(cfg.r)),
            "requires |m| < 10 r^{2/3}");
    require(std::abs(cfg.m_offset) <= cfg.n, "requires |m| <= n so that (m,-m) <= nbar");
    require(cfg.trials >= 1, "requires trials >= 1");
    require(!cfg.x_values.empty(), "requires at least one x value");
}

std::string canonical_config(const FluctuationConfig& cfg) {
    return "fluctuation;m=" + std::to_string(cfg.m_offset) + ";r=" + std::to_string(cfg.r) + ";n=" +
           std::to_string(cfg.n) + ";x=" + join(cfg.x_values) + ";trials=" + std::to_string(cfg.trials) +
           ";seed=" + std::to_string(cfg.seed);
}

std::vector<ExceedanceRow> fluctuation_profile(const FluctuationConfig& cfg, const ExecOptions& exec) {
    validate_fluctuation_config(cfg);
    const LatticePoint start{cfg.m_offset, -cfg.m_offset};
    const LatticePoint sink = diagonal_point(cfg.n);
    const Region region{start, sink};
    const double scale = two_thirds_power(static_cast<double>(cfg.r));

    auto trial = [&](Scratch& s, std::int64_t, std::uint64_t seed) {
        const WeightField field(seed);
        build_passage_grid_to_sink(field, sink, region, s.a, exec.limits);
        const LatticePoint w = geodesic_crossing(s.a, start, 2 * cfg.r);
        const double f = static_cast<double>(std::abs(half_offset(w)));
        TrialRecord rec;
        for (double x : cfg.x_values) rec.counts.push_back(f > x * scale ? 1 : 0);
        return rec;
    };
    const Tally t = run_experiment(canonical_config(cfg), cfg.seed, cfg.trials, exec, trial);
    std::vector<ExceedanceRow> rows;
    for (std::size_t i = 0; i < cfg.x_values.size(); ++i) {
        rows.push_back({cfg.x_values[i], proportion(t.count(i), t.trials, exec.z)});
    }
    return rows;
}

// ---------------------------------------------------------------- one point

void validate_onepoint_config(const OnePointConfig& cfg) {
    require(cfg.n >= 1, "requires n >= 1");
    require(cfg.m >= cfg.n, "requires m >= n");
    require(cfg.trials >= 1, "requires trials >= 1");
}

std::string canonical_config(const OnePointConfig& cfg) {
    return "onepoint;m=" + std::to_string(cfg.m) + ";n=" + std::to_string(cfg.n) + ";trials=" +
           std::to_string(cfg.trials) + ";seed=" + std::to_string(cfg.seed);
}

OnePointStats onepoint_stats(const OnePointConfig& cfg, const ExecOptions& exec) {
    validate_onepoint_config(cfg);
    const LatticePoint sink{cfg.m, cfg.n};
    const Region region{{0, 0}, sink};
    const double mm = static_cast<double>(cfg.m);
    const double nn = static_cast<double>(cfg.n);
    const double center = mm + nn + 2.0 * std::sqrt(mm * nn);

    auto trial = [&](Scratch& s, std::int64_t, std::uint64_t seed) {
        const WeightField field(seed);
        build_passage_grid_to_sink(field, sink, region, s.a, exec.limits);
        const double shift = s.a.value({0, 0}) - center;
        return TrialRecord{{}, {shift, shift * shift}};
    };
    const Tally t = run_experiment(canonical_config(cfg), cfg.seed, cfg.trials, exec, trial);

    OnePointStats st;
    st.trials = t.trials;
    st.center = center;
    st.shift = mean_from_sums(t.sum(0), t.sum(1), t.trials, exec.z);
    st.stddev = st.shift.stddev;
    st.shift_sign = (st.shift.mean > 0) - (st.shift.mean < 0);
    const double scale = std::cbrt(static_cast<double>(cfg.n));
    st.shift_scaled = st.shift.mean / scale;
    st.std_scaled = st.stddev / scale;
    return st;
}

// -------------------------------------------------------- segment supremum

std::pair<std::vector<LatticePoint>, std::vector<LatticePoint>> segment_endpoints(std::int64_t n) {
    const std::int64_t half = floor_two_thirds(n) / 2;
    std::vector<LatticePoint> from, to;
    for (std::int64_t i = -half; i <= half; ++i) {
        from.push_back({i, -i});
        to.push_back({n + i, n - i});
    }
    return {from, to};
}

void validate_segment_config(const SegmentSupConfig& cfg) {
    require(cfg.n >= 1 && floor_two_thirds(cfg.n) >= 2, "requires floor(n^{2/3}) >= 2");
    require(cfg.trials >= 1, "requires trials >= 1");
}

std::string canonical_config(const SegmentSupConfig& cfg) {
    return "segment-sup;n=" + std::to_string(cfg.n) + ";x=" + join(cfg.x_values) + ";trials=" +
           std::to_string(cfg.trials) + ";seed=" + std::to_string(cfg.seed);
}

SegmentSupStats segment_sup_stats(const SegmentSupConfig& cfg, const ExecOptions& exec) {
    validate_segment_config(cfg);
    const auto [from, to] = segment_endpoints(cfg.n);
    const LatticePoint sink = diagonal_point(cfg.n);
    const Region point_region{{0, 0}, sink};
    const double four_n = 4.0 * static_cast<double>(cfg.n);
    const double scale = std::cbrt(static_cast<double>(cfg.n));

    auto trial = [&](Scratch& s, std::int64_t, std::uint64_t seed) {
        const WeightField field(seed);
        const double sup = segment_sup_passage(field, from, to, s.a, exec.limits);
        build_passage_grid_to_sink(field, sink, point_region, s.b, exec.limits);
        const double point = s.b.value({0, 0});
        if (sup < point) {
            throw InvariantViolation("segment supremum " + fmt(sup) + " below midpoint passage time " + fmt(point));
        }
        const double ss = (sup - four_n) / scale;
        const double ps = (point - four_n) / scale;
        TrialRecord rec{{}, {ss, ss * ss, ps, ps * ps}};
        for (double x : cfg.x_values) rec.counts.push_back(ss > x ? 1 : 0);
        return rec;
    };
    const Tally t = run_experiment(canonical_config(cfg), cfg.seed, cfg.trials, exec, trial);

    SegmentSupStats st;
    st.trials = t.trials;
    st.half_width = floor_two_thirds(cfg.n) / 2;
    st.sup_shift_scaled = mean_from_sums(t.sum(0), t.sum(1), t.trials, exec.z);
    st.point_shift_scaled = mean_from_sums(t.sum(2), t.sum(3), t.trials, exec.z);
    for (std::size_t i = 0; i < cfg.x_values.size(); ++i) {
        st.tail.push_back({cfg.x_values[i], proportion(t.count(i), t.trials, exec.z)});
    }
    return st;
}

}  // namespace lpp
