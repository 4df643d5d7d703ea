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

// lppsim: command-line front end for the last-passage percolation experiments.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lpp/experiments.hpp"
#include "lpp/geometry.hpp"
#include "lpp/oracle.hpp"
#include "lpp/report.hpp"

namespace {

using namespace lpp;
using json = nlohmann::json;

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitRuntime = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int default_workers() {
    if (const char* env = std::getenv("LPP_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid LPP_WORKERS=" << env << '\n';
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

// Fills options of `sub` that were not given on the command line from the
// config file. Flags win over the file; the file wins over defaults.
void apply_config(CLI::App* sub, const std::map<std::string, std::string>& kv) {
    std::map<std::string, bool> used;
    for (const auto& [k, v] : kv) used[k] = false;
    for (CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_single_name();
        const auto it = kv.find(name);
        if (it == kv.end()) continue;
        used[name] = true;
        if (opt->count() > 0) continue;
        if (opt->get_expected_min() == 0) {
            if (it->second == "true" || it->second == "1") opt->add_result("true");
        } else {
            opt->add_result(it->second);
        }
        opt->run_callback();
    }
    for (const auto& [k, u] : used) {
        if (!u && k != "config") std::cerr << "warning: config key '" << k << "' is not an option of " << sub->get_name() << '\n';
    }
}

struct CommonOptions {
    std::uint64_t seed = 1;
    std::int64_t trials = 0;
    int workers = 1;
    std::string out;
    std::string checkpoint;
    std::int64_t batch = 256;
    std::uint64_t max_cells = GridLimits{}.max_cells;
    bool no_timing = false;
    bool progress = false;
    double z = kDefaultZ;
};

void add_common(CLI::App* sub, CommonOptions& c, const std::string& default_out) {
    c.out = default_out;
    sub->add_option("--seed", c.seed, "Base seed");
    sub->add_option("--trials", c.trials, "Number of independent environments");
    sub->add_option("--workers", c.workers, "Worker threads (default: LPP_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "Output CSV path; a JSON mirror is written next to it");
    sub->add_option("--checkpoint", c.checkpoint, "Checkpoint file to resume from and update");
    sub->add_option("--batch", c.batch, "Trials per checkpoint batch")->check(CLI::PositiveNumber);
    sub->add_option("--max-cells", c.max_cells, "Largest grid, in cells");
    sub->add_option("--z", c.z, "Normal quantile for confidence intervals")->check(CLI::PositiveNumber);
    sub->add_flag("--no-timing", c.no_timing, "Leave wall_time_s blank so output is byte-reproducible");
    sub->add_flag("--progress", c.progress, "Print a trial counter to stderr");
}

ExecOptions exec_options(const CommonOptions& c) {
    ExecOptions e;
    e.workers = c.workers;
    e.batch_size = c.batch;
    if (!c.checkpoint.empty()) e.checkpoint = c.checkpoint;
    e.limits.max_cells = c.max_cells;
    e.z = c.z;
    if (c.progress) {
        e.progress = [](std::int64_t done, std::int64_t total) {
            std::cerr << "\r" << done << " / " << total << " trials" << (done == total ? "\n" : "") << std::flush;
        };
    }
    return e;
}

json common_json(const CommonOptions& c) {
    json j = {{"seed", c.seed}, {"trials", c.trials}, {"batch", c.batch}, {"max_cells", c.max_cells}, {"z", c.z}};
    if (!c.checkpoint.empty()) j["checkpoint"] = c.checkpoint;
    return j;
}

// Fail before computing if the output cannot be created.
void probe_writable(const std::filesystem::path& csv) {
    for (const auto& p : {csv, json_mirror_path(csv)}) {
        const bool existed = std::filesystem::exists(p);
        std::ofstream probe(p, std::ios::app);
        if (!probe) throw IoError("cannot write output " + p.string());
        probe.close();
        if (!existed) std::filesystem::remove(p);
    }
}

template <class Fn>
double timed(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void finish(RunReport& report, const CommonOptions& c) {
    report.workers = c.workers;
    report.z = c.z;
    write_report(report, c.out);
    std::cout << to_csv(report.rows);
    std::cerr << "wrote " << c.out << " and " << json_mirror_path(c.out).string() << '\n';
}

std::optional<double> wall_or_blank(const CommonOptions& c, double wall) {
    if (c.no_timing) return std::nullopt;
    return wall;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("cannot parse ") + flag + " value '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(flag) + " needs at least one value");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential last-passage percolation: geodesics, coalescence and Monte Carlo experiments"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value file; flags override it");

    // oracle-check
    int oracle_size = 6;
    std::int64_t oracle_cases = 100;
    std::uint64_t oracle_seed = 1;
    auto* oracle = app.add_subcommand("oracle-check", "Grid DP versus exhaustive path enumeration");
    oracle->add_option("--max-size", oracle_size, "Largest rectangle side (<= 8)");
    oracle->add_option("--cases", oracle_cases, "Random fields per shape");
    oracle->add_option("--seed", oracle_seed, "Base seed");

    // tail / corollary-tail
    CommonOptions tail_c, cor_c;
    ExperimentConfig tail_cfg, cor_cfg;
    cor_cfg.n = 2048;
    cor_cfg.R_values = {4, 8, 16};
    cor_cfg.trials = 30000;
    cor_cfg.seed = 2;
    std::string tail_R = "4,8,16,32", cor_R = "4,8,16";
    auto* tail = app.add_subcommand("tail", "Tail of the coalescence depth d(C^{kbar,-kbar;nbar})");
    add_common(tail, tail_c, "tail.csv");
    tail_c.trials = tail_cfg.trials;
    tail->add_option("--k", tail_cfg.k, "Start separation parameter k");
    tail->add_option("--n", tail_cfg.n, "Sink (n, n)");
    tail->add_option("--R", tail_R, "Comma-separated R values");
    auto* cor = app.add_subcommand("corollary-tail", "Tail of the first coordinate of C^{0,ktilde;nbar}");
    add_common(cor, cor_c, "corollary-tail.csv");
    cor_c.trials = cor_cfg.trials;
    cor_c.seed = cor_cfg.seed;
    cor->add_option("--k", cor_cfg.k, "Start separation parameter k");
    cor->add_option("--n", cor_cfg.n, "Sink (n, n)");
    cor->add_option("--R", cor_R, "Comma-separated R values");

    // reduction-ratio
    CommonOptions red_c;
    ReductionConfig red_cfg;
    auto* red = app.add_subcommand("reduction-ratio", "P[E1] / P[E3] for the rotated parallel pair");
    add_common(red, red_c, "reduction-ratio.csv");
    red_c.trials = red_cfg.trials;
    red_c.seed = red_cfg.seed;
    red->add_option("--k", red_cfg.k, "Start separation parameter k");
    red->add_option("--n", red_cfg.n, "Sink (n, n)");
    red->add_option("--R", red_cfg.R, "R (> 10)");

    // family
    CommonOptions fam_c;
    FamilyConfig fam_cfg{0, 0, 11, 16, 768, 256, 5000, 4};
    auto* fam = app.add_subcommand("family", "Mean number of L_r crossings of a parallel family");
    add_common(fam, fam_c, "family.csv");
    fam_c.trials = fam_cfg.trials;
    fam_c.seed = fam_cfg.seed;
    fam->add_option("--a", fam_cfg.a, "Start offset a");
    fam->add_option("--b", fam_cfg.b, "End offset b");
    fam->add_option("--d", fam_cfg.spacing, "Spacing between members");
    fam->add_option("--m", fam_cfg.m, "Members are i = 0..m");
    fam->add_option("--s", fam_cfg.s, "Ends lie on L_s");
    fam->add_option("--r", fam_cfg.r, "Crossing line L_r, 0 < r < s");

    // fluctuation
    CommonOptions fl_c;
    FluctuationConfig fl_cfg;
    std::string fl_x = "0.5,1,2,3";
    auto* fl = app.add_subcommand("fluctuation", "P[|f_0| > x r^{2/3}] for Gamma_{(m,-m),nbar} at L_{2r}");
    add_common(fl, fl_c, "fluctuation.csv");
    fl_c.trials = fl_cfg.trials;
    fl_c.seed = fl_cfg.seed;
    fl->add_option("--m", fl_cfg.m_offset, "Start (m, -m)");
    fl->add_option("--r", fl_cfg.r, "Measure at L_{2r}");
    fl->add_option("--n", fl_cfg.n, "Sink (n, n)");
    fl->add_option("--x", fl_x, "Comma-separated thresholds x");

    // onepoint
    CommonOptions op_c;
    OnePointConfig op_cfg;
    auto* op = app.add_subcommand("onepoint", "Statistics of T_{0,(m,n)} - (sqrt m + sqrt n)^2");
    add_common(op, op_c, "onepoint.csv");
    op_c.trials = op_cfg.trials;
    op_c.seed = op_cfg.seed;
    op->add_option("--m", op_cfg.m, "First coordinate of the sink (m >= n)");
    op->add_option("--n", op_cfg.n, "Second coordinate of the sink");

    // segment-sup
    CommonOptions sg_c;
    SegmentSupConfig sg_cfg;
    std::string sg_x = "-4,-2,0,2";
    auto* sg = app.add_subcommand("segment-sup", "Supremum of T over segment pairs on L_0 and L_{2n}");
    add_common(sg, sg_c, "segment-sup.csv");
    sg_c.trials = sg_cfg.trials;
    sg_c.seed = sg_cfg.seed;
    sg->add_option("--n", sg_cfg.n, "Segments centered at 0 and (n, n)");
    sg->add_option("--x", sg_x, "Comma-separated thresholds on (sup T - 4n)/n^{1/3}");

    // fit
    std::string fit_in, fit_out;
    auto* fit = app.add_subcommand("fit", "Power-law fit of p_hat against R from a result CSV");
    fit->add_option("--in", fit_in, "Input CSV")->required();
    fit->add_option("--out", fit_out, "Output JSON (default: <in>.fit.json)");

    const int workers_default = default_workers();
    for (auto* c : {&tail_c, &cor_c, &red_c, &fam_c, &fl_c, &op_c, &sg_c}) c->workers = workers_default;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) apply_config(active, read_config_file(config_path));

        if (active == oracle) {
            if (oracle_size < 1 || oracle_size > 8) throw UsageError("--max-size must lie in [1, 8]");
            if (oracle_cases < 0) throw UsageError("--cases must be >= 0");
            if (oracle_cases == 0) std::cerr << "warning: --cases 0 checks nothing\n";
            const auto t0 = std::chrono::steady_clock::now();
            const OracleReport rep = oracle_check(oracle_size, oracle_cases, oracle_seed);
            const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cout << "oracle-check: " << rep.shapes << " shapes, " << rep.comparisons
                      << " start/field comparisons, max relative error " << rep.max_relative_error << ", "
                      << rep.mismatches.size() << " mismatches, " << wall << " s\n";
            for (const auto& m : rep.mismatches) {
                std::cout << "MISMATCH seed=" << m.field_seed << " shape=" << m.width << "x" << m.height << " "
                          << m.detail << '\n';
            }
            return rep.mismatches.empty() ? 0 : kExitMismatch;
        }

        if (active == fit) {
            std::ifstream in(fit_in);
            if (!in) throw IoError("cannot read " + fit_in);
            const auto rows = parse_csv(in);
            std::vector<FitPoint> pts;
            for (const auto& r : rows) {
                if (r.R && r.p_hat) pts.push_back({*r.R, *r.p_hat});
            }
            const PowerLawFit f = fit_power_law(pts);
            for (const auto& w : f.warnings) std::cerr << "warning: " << w << '\n';
            if (fit_out.empty()) fit_out = std::filesystem::path(fit_in).replace_extension(".fit.json").string();
            const json j = {{"input", fit_in}, {"fit", fit_to_json(f)}, {"metadata", {{"version", std::string(kVersion)}}}};
            std::ofstream out(fit_out, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot write " + fit_out);
            out << j.dump(2) << '\n';
            std::cout << "fitted_slope=" << format_number(f.slope) << " slope_stderr=" << format_number(f.stderr_slope)
                      << " intercept=" << format_number(f.intercept) << " points=" << f.points_used << '\n';
            return 0;
        }

        if (active == tail || active == cor) {
            const bool is_tail = active == tail;
            CommonOptions& c = is_tail ? tail_c : cor_c;
            ExperimentConfig& cfg = is_tail ? tail_cfg : cor_cfg;
            cfg.R_values = parse_list(is_tail ? tail_R : cor_R, "--R");
            cfg.trials = c.trials;
            cfg.seed = c.seed;
            is_tail ? validate_tail_config(cfg) : validate_corollary_config(cfg);
            probe_writable(c.out);
            TailEstimateTable table;
            const double wall = timed([&] {
                table = is_tail ? estimate_coalescence_tail(cfg, exec_options(c))
                                : estimate_corollary_tail(cfg, exec_options(c));
            });
            RunReport rep;
            rep.experiment = is_tail ? "tail" : "corollary-tail";
            rep.config = common_json(c);
            rep.config["k"] = cfg.k;
            rep.config["n"] = cfg.n;
            rep.config["R"] = cfg.R_values;
            rep.rows = tail_rows(rep.experiment, cfg, table, wall_or_blank(c, wall));
            rep.results["fit"] = fit_to_json(table.fit);
            finish(rep, c);
            return 0;
        }

        if (active == red) {
            red_cfg.trials = red_c.trials;
            red_cfg.seed = red_c.seed;
            validate_reduction_config(red_cfg);
            probe_writable(red_c.out);
            ReductionResult res;
            const double wall = timed([&] { res = reduction_ratio(red_cfg, exec_options(red_c)); });
            RunReport rep;
            rep.experiment = "reduction-ratio";
            rep.config = common_json(red_c);
            rep.config.update({{"k", red_cfg.k}, {"n", red_cfg.n}, {"R", red_cfg.R}});
            rep.rows = reduction_rows(red_cfg, res, wall_or_blank(red_c, wall));
            rep.results = {{"p1", res.e1.p_hat}, {"p3", res.e3.p_hat}, {"e2_successes", res.e2_successes},
                           {"ratio", res.ratio}, {"ratio_ci", {res.ratio_ci.lo, res.ratio_ci.hi}}};
            finish(rep, red_c);
            return 0;
        }

        if (active == fam) {
            fam_cfg.trials = fam_c.trials;
            fam_cfg.seed = fam_c.seed;
            validate_family_config(fam_cfg);
            probe_writable(fam_c.out);
            MeanEstimate est;
            const double wall = timed([&] { est = estimate_family_crossings(fam_cfg, exec_options(fam_c)); });
            RunReport rep;
            rep.experiment = "family";
            rep.config = common_json(fam_c);
            rep.config.update({{"a", fam_cfg.a}, {"b", fam_cfg.b}, {"d", fam_cfg.spacing}, {"m", fam_cfg.m},
                               {"s", fam_cfg.s}, {"r", fam_cfg.r}});
            rep.rows = family_rows(fam_cfg, est, wall_or_blank(fam_c, wall));
            rep.results = {{"mean", est.mean}, {"stddev", est.stddev}, {"ci", {est.ci.lo, est.ci.hi}}};
            finish(rep, fam_c);
            return 0;
        }

        if (active == fl) {
            fl_cfg.x_values = parse_list(fl_x, "--x");
            fl_cfg.trials = fl_c.trials;
            fl_cfg.seed = fl_c.seed;
            validate_fluctuation_config(fl_cfg);
            probe_writable(fl_c.out);
            std::vector<ExceedanceRow> rows;
            const double wall = timed([&] { rows = fluctuation_profile(fl_cfg, exec_options(fl_c)); });
            RunReport rep;
            rep.experiment = "fluctuation";
            rep.config = common_json(fl_c);
            rep.config.update({{"m", fl_cfg.m_offset}, {"r", fl_cfg.r}, {"n", fl_cfg.n}, {"x", fl_cfg.x_values}});
            rep.rows = fluctuation_rows(fl_cfg, rows, wall_or_blank(fl_c, wall));
            finish(rep, fl_c);
            return 0;
        }

        if (active == op) {
            op_cfg.trials = op_c.trials;
            op_cfg.seed = op_c.seed;
            validate_onepoint_config(op_cfg);
            probe_writable(op_c.out);
            OnePointStats st;
            const double wall = timed([&] { st = onepoint_stats(op_cfg, exec_options(op_c)); });
            RunReport rep;
            rep.experiment = "onepoint";
            rep.config = common_json(op_c);
            rep.config.update({{"m", op_cfg.m}, {"n", op_cfg.n}});
            rep.rows = onepoint_rows(op_cfg, st, wall_or_blank(op_c, wall));
            rep.results = {{"center", st.center},       {"mean_shift", st.shift.mean},
                           {"std", st.stddev},          {"mean_shift_sign", st.shift_sign},
                           {"mean_shift_scaled", st.shift_scaled}, {"std_scaled", st.std_scaled}};
            finish(rep, op_c);
            return 0;
        }

        if (active == sg) {
            sg_cfg.x_values = parse_list(sg_x, "--x");
            sg_cfg.trials = sg_c.trials;
            sg_cfg.seed = sg_c.seed;
            validate_segment_config(sg_cfg);
            probe_writable(sg_c.out);
            SegmentSupStats st;
            const double wall = timed([&] { st = segment_sup_stats(sg_cfg, exec_options(sg_c)); });
            RunReport rep;
            rep.experiment = "segment-sup";
            rep.config = common_json(sg_c);
            rep.config.update({{"n", sg_cfg.n}, {"x", sg_cfg.x_values}});
            rep.rows = segment_rows(sg_cfg, st, wall_or_blank(sg_c, wall));
            rep.results = {{"half_width", st.half_width},
                           {"mean_sup_shift_scaled", st.sup_shift_scaled.mean},
                           {"mean_point_shift_scaled", st.point_shift_scaled.mean}};
            finish(rep, sg_c);
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
