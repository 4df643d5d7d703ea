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

#include "lpp/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "lpp/geometry.hpp"

namespace lpp {

std::string format_number(double v) {
    if (!std::isfinite(v)) return {};
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

template <class T>
std::string cell(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_floating_point_v<T>) {
        return format_number(*v);
    } else {
        return std::to_string(*v);
    }
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

template <class T>
std::optional<T> parse_field(const std::string& text, std::string_view column) {
    if (text.empty()) return std::nullopt;
    T v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ParseError("cannot parse '" + text + "' in column " + std::string(column));
    }
    return v;
}

template <class T>
void put(nlohmann::json& j, std::string_view key, const std::optional<T>& v) {
    if (v && (!std::is_floating_point_v<T> || std::isfinite(static_cast<double>(*v)))) {
        j[std::string(key)] = *v;
    } else {
        j[std::string(key)] = nullptr;
    }
}

}  // namespace

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string out;
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
        out += (i ? "," : "");
        out += kCsvColumns[i];
    }
    out += '\n';
    for (const auto& r : rows) {
        const std::array<std::string, 15> cells = {
            r.experiment, cell(r.k), cell(r.n), cell(r.R), cell(r.m), cell(r.r), cell(r.s), cell(r.x),
            cell(r.trials), cell(r.successes), cell(r.p_hat), cell(r.ci_lo), cell(r.ci_hi), cell(r.seed),
            cell(r.wall_time_s)};
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += (i ? "," : "");
            out += cells[i];
        }
        out += '\n';
    }
    return out;
}

std::vector<ResultRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV input");
    const auto header = split_line(line);
    std::map<std::string, std::size_t, std::less<>> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (auto name : kCsvColumns) {
        if (!col.contains(name)) throw ParseError("missing column: " + std::string(name));
    }
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = split_line(line);
        if (f.size() != header.size()) throw ParseError("row has " + std::to_string(f.size()) + " fields, expected " +
                                                        std::to_string(header.size()));
        auto get = [&](std::string_view name) -> const std::string& { return f[col.find(name)->second]; };
        ResultRow r;
        r.experiment = get("experiment");
        r.k = parse_field<std::int64_t>(get("k"), "k");
        r.n = parse_field<std::int64_t>(get("n"), "n");
        r.R = parse_field<double>(get("R"), "R");
        r.m = parse_field<std::int64_t>(get("m"), "m");
        r.r = parse_field<std::int64_t>(get("r"), "r");
        r.s = parse_field<std::int64_t>(get("s"), "s");
        r.x = parse_field<double>(get("x"), "x");
        r.trials = parse_field<std::int64_t>(get("trials"), "trials");
        r.successes = parse_field<std::int64_t>(get("successes"), "successes");
        r.p_hat = parse_field<double>(get("p_hat"), "p_hat");
        r.ci_lo = parse_field<double>(get("ci_lo"), "ci_lo");
        r.ci_hi = parse_field<double>(get("ci_hi"), "ci_hi");
        r.seed = parse_field<std::uint64_t>(get("seed"), "seed");
        r.wall_time_s = parse_field<double>(get("wall_time_s"), "wall_time_s");
        rows.push_back(std::move(r));
    }
    return rows;
}

nlohmann::json row_to_json(const ResultRow& row) {
    nlohmann::json j = nlohmann::json::object();
    j["experiment"] = row.experiment;
    put(j, "k", row.k);
    put(j, "n", row.n);
    put(j, "R", row.R);
    put(j, "m", row.m);
    put(j, "r", row.r);
    put(j, "s", row.s);
    put(j, "x", row.x);
    put(j, "trials", row.trials);
    put(j, "successes", row.successes);
    put(j, "p_hat", row.p_hat);
    put(j, "ci_lo", row.ci_lo);
    put(j, "ci_hi", row.ci_hi);
    put(j, "seed", row.seed);
    put(j, "wall_time_s", row.wall_time_s);
    return j;
}

nlohmann::json to_json(const RunReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) rows.push_back(row_to_json(r));
    return {
        {"experiment", report.experiment},
        {"config", report.config},
        {"rows", rows},
        {"results", report.results},
        {"metadata", {{"version", std::string(kVersion)}, {"z", report.z}, {"workers", report.workers}}},
    };
}

std::filesystem::path json_mirror_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".json");
    return p;
}

void write_report(const RunReport& report, const std::filesystem::path& csv_path) {
    const auto write = [](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
        out << text;
        out.flush();
        if (!out) throw std::ios_base::failure("write to " + path.string() + " failed");
    };
    write(csv_path, to_csv(report.rows));
    write(json_mirror_path(csv_path), to_json(report).dump(2) + "\n");
}

nlohmann::json fit_to_json(const std::optional<PowerLawFit>& fit) {
    if (!fit) return nullptr;
    return {{"fitted_slope", fit->slope},
            {"intercept", fit->intercept},
            {"slope_stderr", fit->stderr_slope},
            {"points_used", fit->points_used},
            {"warnings", fit->warnings}};
}

// ------------------------------------------------------------ row builders

std::vector<ResultRow> tail_rows(const std::string& experiment, const ExperimentConfig& cfg,
                                 const TailEstimateTable& table, std::optional<double> wall) {
    std::vector<ResultRow> out;
    for (const auto& row : table.rows) {
        ResultRow r;
        r.experiment = experiment;
        r.k = cfg.k;
        r.n = cfg.n;
        r.R = row.R;
        r.trials = row.trials;
        r.successes = row.successes;
        r.p_hat = row.p_hat;
        r.ci_lo = row.ci_lo;
        r.ci_hi = row.ci_hi;
        r.seed = cfg.seed;
        r.wall_time_s = wall;
        out.push_back(r);
    }
    return out;
}

std::vector<ResultRow> reduction_rows(const ReductionConfig& cfg, const ReductionResult& res,
                                      std::optional<double> wall) {
    auto base = [&](const std::string& name) {
        ResultRow r;
        r.experiment = name;
        r.k = cfg.k;
        r.n = cfg.n;
        r.R = cfg.R;
        r.r = static_cast<std::int64_t>(std::floor(cfg.R * static_cast<double>(cfg.k)));
        r.trials = res.e1.trials;
        r.seed = cfg.seed;
        r.wall_time_s = wall;
        return r;
    };
    std::vector<ResultRow> out;
    for (const auto& [name, est] : {std::pair{"reduction-ratio/E1", res.e1}, std::pair{"reduction-ratio/E3", res.e3}}) {
        ResultRow r = base(name);
        r.successes = est.successes;
        r.p_hat = est.p_hat;
        r.ci_lo = est.ci.lo;
        r.ci_hi = est.ci.hi;
        out.push_back(r);
    }
    ResultRow r = base("reduction-ratio/ratio");
    r.p_hat = res.ratio;
    r.ci_lo = res.ratio_ci.lo;
    r.ci_hi = res.ratio_ci.hi;
    out.push_back(r);
    return out;
}

std::vector<ResultRow> family_rows(const FamilyConfig& cfg, const MeanEstimate& est, std::optional<double> wall) {
    ResultRow r;
    // a, b and the spacing have no CSV column; they ride in the name.
    r.experiment = "family(a=" + std::to_string(cfg.a) + ";b=" + std::to_string(cfg.b) +
                   ";d=" + std::to_string(cfg.spacing) + ")";
    r.m = cfg.m;
    r.r = cfg.r;
    r.s = cfg.s;
    r.trials = est.trials;
    r.p_hat = est.mean;
    r.ci_lo = est.ci.lo;
    r.ci_hi = est.ci.hi;
    r.seed = cfg.seed;
    r.wall_time_s = wall;
    return {r};
}

std::vector<ResultRow> fluctuation_rows(const FluctuationConfig& cfg, const std::vector<ExceedanceRow>& rows,
                                        std::optional<double> wall) {
    std::vector<ResultRow> out;
    for (const auto& row : rows) {
        ResultRow r;
        r.experiment = "fluctuation";
        r.n = cfg.n;
        r.m = cfg.m_offset;
        r.r = cfg.r;
        r.x = row.x;
        r.trials = row.estimate.trials;
        r.successes = row.estimate.successes;
        r.p_hat = row.estimate.p_hat;
        r.ci_lo = row.estimate.ci.lo;
        r.ci_hi = row.estimate.ci.hi;
        r.seed = cfg.seed;
        r.wall_time_s = wall;
        out.push_back(r);
    }
    return out;
}

std::vector<ResultRow> onepoint_rows(const OnePointConfig& cfg, const OnePointStats& st, std::optional<double> wall) {
    const double scale = std::cbrt(static_cast<double>(cfg.n));
    auto row = [&](const std::string& name, double value, std::optional<Interval> ci) {
        ResultRow r;
        r.experiment = "onepoint/" + name;
        r.m = cfg.m;
        r.n = cfg.n;
        r.trials = st.trials;
        r.p_hat = value;
        if (ci) {
            r.ci_lo = ci->lo;
            r.ci_hi = ci->hi;
        }
        r.seed = cfg.seed;
        r.wall_time_s = wall;
        return r;
    };
    return {
        row("mean_shift", st.shift.mean, st.shift.ci),
        row("std", st.stddev, std::nullopt),
        row("mean_shift_scaled", st.shift_scaled, Interval{st.shift.ci.lo / scale, st.shift.ci.hi / scale}),
        row("std_scaled", st.std_scaled, std::nullopt),
    };
}

std::vector<ResultRow> segment_rows(const SegmentSupConfig& cfg, const SegmentSupStats& st,
                                    std::optional<double> wall) {
    auto base = [&](const std::string& name) {
        ResultRow r;
        r.experiment = "segment-sup/" + name;
        r.n = cfg.n;
        r.trials = st.trials;
        r.seed = cfg.seed;
        r.wall_time_s = wall;
        return r;
    };
    std::vector<ResultRow> out;
    for (const auto& [name, est] : {std::pair{"sup_shift_scaled", st.sup_shift_scaled},
                                    std::pair{"point_shift_scaled", st.point_shift_scaled}}) {
        ResultRow r = base(name);
        r.p_hat = est.mean;
        r.ci_lo = est.ci.lo;
        r.ci_hi = est.ci.hi;
        out.push_back(r);
    }
    for (const auto& t : st.tail) {
        ResultRow r = base("tail");
        r.x = t.x;
        r.successes = t.estimate.successes;
        r.p_hat = t.estimate.p_hat;
        r.ci_lo = t.estimate.ci.lo;
        r.ci_hi = t.estimate.ci.hi;
        out.push_back(r);
    }
    return out;
}

}  // namespace lpp
