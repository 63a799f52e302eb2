#pragma once

#include <latfact/ising.hpp>
#include <latfact/lattice.hpp>
#include <latfact/qaoa.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace latfact {

enum class HeuristicKind {
    babai_only,
    exact_min,
    hill_climb,
    qaoa_round,
    local_search,
    random_round,
};

inline const char* to_string(HeuristicKind k) {
    switch (k) {
        case HeuristicKind::babai_only: return "babai";
        case HeuristicKind::exact_min: return "exact-min";
        case HeuristicKind::hill_climb: return "hill-climb";
        case HeuristicKind::qaoa_round: return "qaoa";
        case HeuristicKind::local_search: return "local-search";
        case HeuristicKind::random_round: return "random-round";
    }
    throw std::logic_error("unknown heuristic kind");
}

inline HeuristicKind heuristic_from_string(std::string_view s) {
    if (s == "babai") return HeuristicKind::babai_only;
    if (s == "exact-min") return HeuristicKind::exact_min;
    if (s == "hill-climb") return HeuristicKind::hill_climb;
    if (s == "qaoa") return HeuristicKind::qaoa_round;
    if (s == "local-search") return HeuristicKind::local_search;
    if (s == "random-round") return HeuristicKind::random_round;
    throw std::invalid_argument("unknown heuristic: " + std::string(s));
}

struct HeuristicConfig {
    HeuristicKind kind = HeuristicKind::babai_only;
    std::size_t k = 4;               // local_search flip width
    std::size_t candidate_cap = 16;  // random_round draws
    std::size_t shots = 1000;        // qaoa_round samples
    std::size_t layers = 1;          // qaoa ansatz depth
    bool multi_angle = true;         // per-gate angles
};

struct Candidate {
    IVec b;       // refined lattice vector
    IVec e;       // prime-lattice coordinates, B e = b
    Int dist_sq;  // ||t - b||^2
};

struct CandidateSet {
    std::size_t lattice_id = 0;
    HeuristicKind kind = HeuristicKind::babai_only;
    std::vector<Candidate> cands;

    // keeps first occurrence per coordinate vector; returns true iff e was new
    bool add(Candidate c) {
        for (const auto& prev : cands)
            if (prev.e == c.e) return false;
        cands.push_back(std::move(c));
        return true;
    }
};

namespace heur_detail {

inline void check_instance(const PrimeLattice& L, const ReducedBasis& R, const BabaiResult& bab) {
    if (R.cols.size() != L.m || bab.kappa.size() != L.m || bab.b_op.size() != L.t.size())
        throw std::invalid_argument("heuristic: mismatched lattice instance");
}

inline IVec apply_mask(const IVec& b_op, const std::vector<int>& kappa,
                       const std::vector<IVec>& cols, std::uint64_t mask) {
    IVec b = b_op;
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (mask >> j & 1)
            for (std::size_t r = 0; r < b.size(); ++r) b[r] += Int(kappa[j]) * cols[j][r];
    return b;
}

inline Candidate make_candidate(const PrimeLattice& L, IVec b) {
    Candidate c;
    c.e = lattice_coords(L, b);
    IVec d(L.t.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = L.t[i] - b[i];
    c.dist_sq = norm_sq(d);
    c.b = std::move(b);
    return c;
}

}  // namespace heur_detail

inline CandidateSet babai_only(const PrimeLattice& L, const ReducedBasis& R,
                               const BabaiResult& bab, std::size_t lattice_id = 0) {
    heur_detail::check_instance(L, R, bab);
    CandidateSet set{lattice_id, HeuristicKind::babai_only, {}};
    set.add(heur_detail::make_candidate(L, bab.b_op));
    return set;
}

// one candidate per bitstring strictly below the energy of the zero string,
// plus the zero string itself
inline CandidateSet exact_min(const PrimeLattice& L, const ReducedBasis& R,
                              const BabaiResult& bab, std::size_t lattice_id = 0) {
    heur_detail::check_instance(L, R, bab);
    auto H = build_hamiltonian(L.t, bab.b_op, bab.kappa, R.cols);
    CandidateSet set{lattice_id, HeuristicKind::exact_min, {}};
    set.add(heur_detail::make_candidate(L, bab.b_op));
    for (const auto& [bits, e] : exact_minimize(H, energy_mask(H, 0))) {
        auto mask = bits_to_mask(bits, L.m);
        set.add(heur_detail::make_candidate(
            L, heur_detail::apply_mask(bab.b_op, bab.kappa, R.cols, mask)));
    }
    return set;
}

// repeatedly move to the minimum-energy refinement and flip the moved signs;
// a stalled first step redraws the coding vector once
inline CandidateSet hill_climb(const PrimeLattice& L, const ReducedBasis& R,
                               const BabaiResult& bab, std::uint64_t rng_seed = 0,
                               std::size_t lattice_id = 0) {
    heur_detail::check_instance(L, R, bab);
    CandidateSet set{lattice_id, HeuristicKind::hill_climb, {}};
    set.add(heur_detail::make_candidate(L, bab.b_op));
    IVec b_curr = bab.b_op;
    std::vector<int> kappa = bab.kappa;
    bool retried = false;
    for (int iter = 0; iter < 32; ++iter) {
        auto H = build_hamiltonian(L.t, b_curr, kappa, R.cols);
        auto [mask, e2] = min_energy2_state(H);
        if (mask == 0) {
            if (iter == 0 && !retried) {
                retried = true;
                Rng rng(mix_seed(rng_seed, 0x636f64696e67ULL));
                for (auto& kj : kappa) kj = (rng() & 1) ? -1 : 1;
                continue;
            }
            break;
        }
        b_curr = heur_detail::apply_mask(b_curr, kappa, R.cols, mask);
        set.add(heur_detail::make_candidate(L, b_curr));
        for (std::size_t j = 0; j < L.m; ++j)
            if (mask >> j & 1) kappa[j] = -kappa[j];
    }
    return set;
}

// all 2^k roundings over the k smallest-norm reduced columns
inline CandidateSet local_search(const PrimeLattice& L, const ReducedBasis& R,
                                 const BabaiResult& bab, std::size_t k,
                                 std::size_t lattice_id = 0) {
    heur_detail::check_instance(L, R, bab);
    if (k < 1 || k > L.m) throw std::invalid_argument("local_search: k must be in [1, m]");
    std::vector<Int> norms(L.m);
    for (std::size_t j = 0; j < L.m; ++j) norms[j] = norm_sq(R.cols[j]);
    std::vector<std::size_t> order(L.m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return norms[a] < norms[b]; });
    CandidateSet set{lattice_id, HeuristicKind::local_search, {}};
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << k); ++i) {
        std::uint64_t mask = 0;
        for (std::size_t r = 0; r < k; ++r)
            if (i >> r & 1) mask |= std::uint64_t{1} << order[r];
        set.add(heur_detail::make_candidate(
            L, heur_detail::apply_mask(bab.b_op, bab.kappa, R.cols, mask)));
    }
    return set;
}

// cap flip masks drawn uniformly; duplicates collapse in the set
inline CandidateSet random_round(const PrimeLattice& L, const ReducedBasis& R,
                                 const BabaiResult& bab, std::size_t cap,
                                 std::uint64_t rng_seed, std::size_t lattice_id = 0) {
    heur_detail::check_instance(L, R, bab);
    if (cap < 1) throw std::invalid_argument("random_round: cap must be >= 1");
    if (L.m > 63) throw std::invalid_argument("random_round: m too large for mask draws");
    Rng rng(rng_seed);
    CandidateSet set{lattice_id, HeuristicKind::random_round, {}};
    const std::uint64_t mask_bits = (std::uint64_t{1} << L.m) - 1;
    for (std::size_t draw = 0; draw < cap; ++draw)
        set.add(heur_detail::make_candidate(
            L, heur_detail::apply_mask(bab.b_op, bab.kappa, R.cols, rng() & mask_bits)));
    return set;
}

// optimize the ansatz, sample the final state, refine the top-16 strings
inline CandidateSet qaoa_round(const PrimeLattice& L, const ReducedBasis& R,
                               const BabaiResult& bab, const AnsatzConfig& cfg,
                               std::size_t shots = 1000, std::size_t lattice_id = 0) {
    heur_detail::check_instance(L, R, bab);
    auto H = build_hamiltonian(L.t, bab.b_op, bab.kappa, R.cols);
    auto opt = optimize(H, cfg);
    auto state = evolve(H, cfg, opt.params);
    auto hist = sample(H, state, shots, mix_seed(cfg.rng_seed, 0x71616f61ULL));
    std::vector<std::pair<std::size_t, std::uint64_t>> ranked;
    ranked.reserve(hist.size());
    for (const auto& [bits, count] : hist)
        ranked.emplace_back(count, bits_to_mask(bits, L.m));
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (ranked.size() > 16) ranked.resize(16);
    CandidateSet set{lattice_id, HeuristicKind::qaoa_round, {}};
    for (const auto& [count, mask] : ranked)
        set.add(heur_detail::make_candidate(
            L, heur_detail::apply_mask(bab.b_op, bab.kappa, R.cols, mask)));
    return set;
}

inline CandidateSet run_heuristic(const PrimeLattice& L, const ReducedBasis& R,
                                  const BabaiResult& bab, const HeuristicConfig& cfg,
                                  std::uint64_t rng_seed, std::size_t lattice_id = 0) {
    switch (cfg.kind) {
        case HeuristicKind::babai_only:
            return babai_only(L, R, bab, lattice_id);
        case HeuristicKind::exact_min:
            return exact_min(L, R, bab, lattice_id);
        case HeuristicKind::hill_climb:
            return hill_climb(L, R, bab, rng_seed, lattice_id);
        case HeuristicKind::local_search:
            return local_search(L, R, bab, std::min(cfg.k, L.m), lattice_id);
        case HeuristicKind::random_round:
            return random_round(L, R, bab, cfg.candidate_cap, rng_seed, lattice_id);
        case HeuristicKind::qaoa_round: {
            AnsatzConfig acfg{cfg.layers, cfg.multi_angle, {}, rng_seed};
            return qaoa_round(L, R, bab, acfg, cfg.shots, lattice_id);
        }
    }
    throw std::logic_error("unknown heuristic kind");
}

}  // namespace latfact
