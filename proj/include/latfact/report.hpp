#pragma once

// Serialization of experiment results: CSV benchmark tables (fixed column
// order so runs can be diffed mechanically), JSON-lines experiment logs, and
// plain two-column curve data for plotting.

#include <latfact/solver.hpp>

#include <json.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace latfact {

// One averaged benchmark table row: means over the trials of a
// (heuristic, bit length) cell.  The percentage is the mean of the per-trial
// percentages (not the ratio of the sums), so cells whose every trial lacked
// a percentage carry none.
struct BenchRow {
    HeuristicKind heuristic = HeuristicKind::babai_only;
    unsigned bits = 0;
    std::size_t dim = 0;
    double lattices = 0.0;
    double candidates = 0.0;
    double total_sr = 0.0;
    double unique_sr = 0.0;
    std::optional<double> unique_pct;
    double time_seconds = 0.0;
};

inline std::string csv_header() {
    return "Input bit length,Lattice dimension,Lattices tested,Candidates extracted,"
           "Total SR pairs,Unique SR pairs,Unique SR per lattice %,Time (s)";
}

namespace report_detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace report_detail

inline std::string csv_row(const BenchRow& r) {
    using report_detail::fmt;
    std::string out;
    out += std::to_string(r.bits);
    out += ',';
    out += std::to_string(r.dim);
    out += ',';
    out += fmt("%.1f", r.lattices);
    out += ',';
    out += fmt("%.1f", r.candidates);
    out += ',';
    out += fmt("%.2f", r.total_sr);
    out += ',';
    out += fmt("%.2f", r.unique_sr);
    out += ',';
    if (r.unique_pct) out += fmt("%.2f", *r.unique_pct);
    out += ',';
    out += fmt("%.2f", r.time_seconds);
    return out;
}

// Full benchmark table: one block per heuristic (rows must be grouped by
// heuristic), each introduced by a comment line and a fresh header.
inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out;
    std::optional<HeuristicKind> current;
    for (const auto& r : rows) {
        if (!current || *current != r.heuristic) {
            if (current) out += '\n';
            out += "# heuristic: ";
            out += to_string(r.heuristic);
            out += '\n';
            out += csv_header();
            out += '\n';
            current = r.heuristic;
        }
        out += csv_row(r);
        out += '\n';
    }
    return out;
}

inline nlohmann::json record_to_json(const ExperimentRecord& rec) {
    nlohmann::json j;
    j["n"] = rec.n.str();
    j["n_bits"] = rec.n_bits;
    j["m"] = rec.m;
    j["c"] = rec.c;
    j["M"] = rec.M;
    j["lattices_tested"] = rec.lattices_tested;
    j["candidates_extracted"] = rec.candidates_extracted;
    j["total_sr_pairs"] = rec.total_sr_pairs;
    j["unique_sr_pairs"] = rec.unique_sr_pairs;
    if (rec.unique_per_lattice_pct)
        j["unique_per_lattice_pct"] = *rec.unique_per_lattice_pct;
    else
        j["unique_per_lattice_pct"] = nullptr;
    j["wall_time_seconds"] = rec.wall_time_seconds;
    j["heuristic"] = to_string(rec.heuristic);
    j["seed"] = rec.seed;
    j["outcome"] = rec.outcome == Outcome::factored ? "factored" : "budget-exhausted";
    return j;
}

inline ExperimentRecord record_from_json(const nlohmann::json& j) {
    ExperimentRecord rec;
    rec.n = Int(j.at("n").get<std::string>());
    rec.n_bits = j.at("n_bits").get<unsigned>();
    rec.m = j.at("m").get<std::size_t>();
    rec.c = j.at("c").get<double>();
    rec.M = j.at("M").get<std::size_t>();
    rec.lattices_tested = j.at("lattices_tested").get<std::size_t>();
    rec.candidates_extracted = j.at("candidates_extracted").get<std::size_t>();
    rec.total_sr_pairs = j.at("total_sr_pairs").get<std::size_t>();
    rec.unique_sr_pairs = j.at("unique_sr_pairs").get<std::size_t>();
    if (!j.at("unique_per_lattice_pct").is_null())
        rec.unique_per_lattice_pct = j.at("unique_per_lattice_pct").get<double>();
    rec.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    rec.heuristic = heuristic_from_string(j.at("heuristic").get<std::string>());
    rec.seed = j.at("seed").get<std::uint64_t>();
    auto outcome = j.at("outcome").get<std::string>();
    if (outcome == "factored")
        rec.outcome = Outcome::factored;
    else if (outcome == "budget-exhausted")
        rec.outcome = Outcome::budget_exhausted;
    else
        throw std::invalid_argument("record_from_json: unknown outcome: " + outcome);
    return rec;
}

inline std::string record_to_jsonl(const ExperimentRecord& rec) {
    return record_to_json(rec).dump();
}

// Two-column plot data, one "x y" pair per line.
inline std::string curve_text(const std::vector<std::pair<double, double>>& pts) {
    std::string out;
    char buf[96];
    for (const auto& [x, y] : pts) {
        std::snprintf(buf, sizeof buf, "%.10g %.10g\n", x, y);
        out += buf;
    }
    return out;
}

}  // namespace latfact
