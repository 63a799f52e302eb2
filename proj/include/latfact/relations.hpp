#pragma once

#include <latfact/numth.hpp>

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace latfact {

// Thrown when a candidate pair directly reveals a nontrivial divisor of n
// (s = 0 or gcd(u, n) > 1); aborts collection with the factor in hand.
struct ImmediateFactor : std::runtime_error {
    Int factor;

    explicit ImmediateFactor(Int f)
        : std::runtime_error("immediate factor " + f.str()), factor(std::move(f)) {}
};

// u and |s| = |u - v*n| both factor completely over the extended base.
struct FacRelation {
    Int u;
    Int v;
    Int s;
    ExponentVector u_exps;
    ExponentVector s_exps;
};

// e_j >= 0 contributes p_j^e_j to u; e_j < 0 contributes p_j^-e_j to v.
inline std::pair<Int, Int> extract_pair(const IVec& e, const FactorBase& base) {
    if (e.size() > base.size())
        throw std::invalid_argument("extract_pair: exponent vector longer than base");
    Int u = 1, v = 1;
    for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0) continue;
        unsigned k = abs(e[j]).convert_to<unsigned>();
        (e[j] > 0 ? u : v) *= pow(base.primes[j], k);
    }
    return {u, v};
}

inline std::optional<FacRelation> test_candidate(const Int& u, const Int& v, const Int& n,
                                                 const FactorBase& base) {
    if (u < 1 || v < 1) throw std::invalid_argument("test_candidate: u, v must be positive");
    Int s = u - v * n;
    if (s == 0) {
        // u = v*n, so any base prime dividing n is a hit; otherwise unusable
        for (const auto& p : base.primes)
            if (p < n && n % p == 0) throw ImmediateFactor(p);
        return std::nullopt;
    }
    Int g = gcd(u, n);
    if (g > 1 && g < n) throw ImmediateFactor(g);
    if (g == n) return std::nullopt;
    auto uf = smooth_factor(u, base);
    if (!uf) return std::nullopt;
    auto sf = smooth_factor(s, base);
    if (!sf) return std::nullopt;
    return FacRelation{u, v, std::move(s), std::move(*uf), std::move(*sf)};
}

// Deduplicated fac-relation store keyed by (u, v); safe for concurrent inserts.
class RelationStore {
  public:
    // returns true iff the (u, v) key was new
    bool insert(const FacRelation& rel) {
        std::lock_guard<std::mutex> lock(mu_);
        ++total_found_;
        return rels_.try_emplace(std::make_pair(rel.u, rel.v), rel).second;
    }

    void count_candidates(std::size_t k) {
        std::lock_guard<std::mutex> lock(mu_);
        candidates_tested_ += k;
    }

    void count_lattice() {
        std::lock_guard<std::mutex> lock(mu_);
        ++lattices_tested_;
    }

    std::size_t unique_count() const {
        std::lock_guard<std::mutex> lock(mu_);
        return rels_.size();
    }

    std::size_t total_found() const {
        std::lock_guard<std::mutex> lock(mu_);
        return total_found_;
    }

    std::size_t candidates_tested() const {
        std::lock_guard<std::mutex> lock(mu_);
        return candidates_tested_;
    }

    std::size_t lattices_tested() const {
        std::lock_guard<std::mutex> lock(mu_);
        return lattices_tested_;
    }

    std::optional<double> unique_per_lattice_pct() const {
        std::lock_guard<std::mutex> lock(mu_);
        if (lattices_tested_ == 0) return std::nullopt;
        return 100.0 * static_cast<double>(rels_.size()) /
               static_cast<double>(lattices_tested_);
    }

    // snapshot in ascending (u, v) order
    std::vector<FacRelation> relations() const {
        std::lock_guard<std::mutex> lock(mu_);
        std::vector<FacRelation> out;
        out.reserve(rels_.size());
        for (const auto& [key, rel] : rels_) out.push_back(rel);
        return out;
    }

  private:
    mutable std::mutex mu_;
    std::map<std::pair<Int, Int>, FacRelation> rels_;
    std::size_t total_found_ = 0;
    std::size_t candidates_tested_ = 0;
    std::size_t lattices_tested_ = 0;
};

}  // namespace latfact
