#pragma once

// Benchmark harness: factor batches of random semiprimes for each
// (heuristic, bit length) cell and average the per-trial records into table
// rows.  Every output byte except wall-time fields is a pure function of the
// configuration: trial semiprimes derive from the master seed and are shared
// across heuristics, so heuristics are compared on identical inputs.

#include <latfact/report.hpp>

#include <stdexcept>
#include <vector>

namespace latfact {

struct BenchConfig {
    std::vector<unsigned> bit_lengths{15, 20, 25, 30};
    std::size_t trials = 10;
    std::vector<HeuristicConfig> heuristics;  // empty -> babai + local-search
    std::uint64_t master_seed = 0;
    std::size_t workers = 1;
    std::size_t budget_lattices = 1'000'000;
    double delta = 0.99;
    std::optional<std::size_t> m;
    std::optional<double> c;
    std::optional<std::size_t> M;
};

struct BenchResult {
    std::vector<BenchRow> rows;             // heuristic-major, bit-length-minor
    std::vector<ExperimentRecord> records;  // every trial, in row order
};

// Seed for trial `trial` at bit length `bits`: independent of the heuristic,
// so all heuristics factor the same semiprimes.
inline std::uint64_t bench_trial_seed(std::uint64_t master_seed, unsigned bits,
                                      std::size_t trial) {
    return mix_seed(master_seed,
                    (static_cast<std::uint64_t>(bits) << 32) |
                        static_cast<std::uint64_t>(trial));
}

inline BenchResult run_bench(const BenchConfig& cfg) {
    if (cfg.bit_lengths.empty())
        throw std::invalid_argument("run_bench: no bit lengths given");
    for (unsigned bits : cfg.bit_lengths)
        if (bits < 10)
            throw std::invalid_argument("run_bench: bit lengths must be >= 10");
    if (cfg.trials == 0) throw std::invalid_argument("run_bench: trials must be >= 1");

    auto heuristics = cfg.heuristics;
    if (heuristics.empty()) {
        HeuristicConfig babai;
        babai.kind = HeuristicKind::babai_only;
        HeuristicConfig local;
        local.kind = HeuristicKind::local_search;
        heuristics = {babai, local};
    }

    BenchResult result;
    for (const auto& h : heuristics) {
        for (unsigned bits : cfg.bit_lengths) {
            BenchRow row;
            row.heuristic = h.kind;
            row.bits = bits;
            double pct_sum = 0.0;
            std::size_t pct_count = 0;
            for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
                std::uint64_t seed = bench_trial_seed(cfg.master_seed, bits, trial);
                Int n = random_semiprime(bits, seed);
                FactorConfig fc;
                fc.m = cfg.m;
                fc.c = cfg.c;
                fc.M = cfg.M;
                fc.delta = cfg.delta;
                fc.heuristic = h;
                fc.seed = seed;
                fc.workers = cfg.workers;
                fc.budget_lattices = cfg.budget_lattices;
                auto rep = factor(n, fc);  // budget exhaustion is recorded, not fatal
                const auto& rec = rep.record;
                row.dim = rec.m;
                row.lattices += static_cast<double>(rec.lattices_tested);
                row.candidates += static_cast<double>(rec.candidates_extracted);
                row.total_sr += static_cast<double>(rec.total_sr_pairs);
                row.unique_sr += static_cast<double>(rec.unique_sr_pairs);
                if (rec.unique_per_lattice_pct) {
                    pct_sum += *rec.unique_per_lattice_pct;
                    ++pct_count;
                }
                row.time_seconds += rec.wall_time_seconds;
                result.records.push_back(rec);
            }
            auto t = static_cast<double>(cfg.trials);
            row.lattices /= t;
            row.candidates /= t;
            row.total_sr /= t;
            row.unique_sr /= t;
            row.time_seconds /= t;
            if (pct_count > 0) row.unique_pct = pct_sum / static_cast<double>(pct_count);
            result.rows.push_back(row);
        }
    }
    return result;
}

}  // namespace latfact
