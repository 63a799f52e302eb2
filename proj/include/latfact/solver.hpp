#pragma once

#include <latfact/heuristics.hpp>
#include <latfact/parallel.hpp>
#include <latfact/relations.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace latfact {

// GF(2) matrix, one packed row per extended-base coordinate (sign row first).
class BitMatrix {
  public:
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64),
          bits_(rows, std::vector<std::uint64_t>(words_, 0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return bits_.at(r).at(c / 64) >> (c % 64) & 1;
    }

    void flip(std::size_t r, std::size_t c) {
        bits_.at(r).at(c / 64) ^= std::uint64_t{1} << (c % 64);
    }

    const std::vector<std::uint64_t>& row_words(std::size_t r) const { return bits_.at(r); }

  private:
    std::size_t rows_, cols_, words_;
    std::vector<std::vector<std::uint64_t>> bits_;
};

// column j = (u_exps_j + s_exps_j) mod 2 over the extended base, sign row 0
inline BitMatrix build_exponent_matrix(const std::vector<FacRelation>& rels) {
    if (rels.empty()) throw std::invalid_argument("build_exponent_matrix: no relations");
    std::size_t nb = rels[0].u_exps.exps.size();
    BitMatrix E(nb + 1, rels.size());
    for (std::size_t j = 0; j < rels.size(); ++j) {
        const auto& r = rels[j];
        if (r.u_exps.exps.size() != nb || r.s_exps.exps.size() != nb)
            throw std::invalid_argument("build_exponent_matrix: inconsistent base sizes");
        if ((r.u_exps.sign_bit + r.s_exps.sign_bit) & 1) E.flip(0, j);
        for (std::size_t i = 0; i < nb; ++i)
            if ((r.u_exps.exps[i] + r.s_exps.exps[i]) & 1) E.flip(i + 1, j);
    }
    return E;
}

// right-nullspace basis over GF(2), one vector per free column, ascending
inline std::vector<std::vector<bool>> nullspace(const BitMatrix& E) {
    const std::size_t cols = E.cols();
    const std::size_t words = (cols + 63) / 64;
    std::vector<std::vector<std::uint64_t>> pivot_rows;
    std::vector<std::size_t> pivot_cols;

    auto lowest_bit = [&](const std::vector<std::uint64_t>& row) -> std::size_t {
        for (std::size_t w = 0; w < words; ++w)
            if (row[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(row[w]));
        return cols;
    };

    for (std::size_t r = 0; r < E.rows(); ++r) {
        std::vector<std::uint64_t> row = E.row_words(r);
        for (;;) {
            std::size_t c = lowest_bit(row);
            if (c >= cols) break;
            std::size_t k = 0;
            while (k < pivot_cols.size() && pivot_cols[k] != c) ++k;
            if (k == pivot_cols.size()) {
                pivot_rows.push_back(std::move(row));
                pivot_cols.push_back(c);
                break;
            }
            for (std::size_t w = 0; w < words; ++w) row[w] ^= pivot_rows[k][w];
        }
    }

    // back-substitute to reduced form: clear every pivot column elsewhere
    for (std::size_t a = 0; a < pivot_rows.size(); ++a)
        for (std::size_t b = 0; b < pivot_rows.size(); ++b) {
            if (a == b) continue;
            if (pivot_rows[b][pivot_cols[a] / 64] >> (pivot_cols[a] % 64) & 1)
                for (std::size_t w = 0; w < words; ++w) pivot_rows[b][w] ^= pivot_rows[a][w];
        }

    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_cols) is_pivot[c] = true;

    std::vector<std::vector<bool>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<bool> z(cols, false);
        z[f] = true;
        for (std::size_t k = 0; k < pivot_cols.size(); ++k)
            if (pivot_rows[k][f / 64] >> (f % 64) & 1) z[pivot_cols[k]] = true;
        basis.push_back(std::move(z));
    }
    return basis;
}

struct Congruence {
    Int x, y, n;
};

inline Congruence assemble_congruence(const std::vector<FacRelation>& rels,
                                      const std::vector<bool>& z, const Int& n) {
    if (z.size() != rels.size())
        throw std::invalid_argument("assemble_congruence: selector length mismatch");
    bool any = false;
    for (bool b : z) any = any || b;
    if (!any) throw std::invalid_argument("assemble_congruence: zero selector");

    std::size_t nb = rels[0].u_exps.exps.size();
    std::vector<std::uint64_t> su(nb, 0), ss(nb, 0);
    unsigned sign_sum = 0;
    Int x_prod = 1;
    for (std::size_t i = 0; i < rels.size(); ++i) {
        if (!z[i]) continue;
        const auto& r = rels[i];
        for (std::size_t j = 0; j < nb; ++j) {
            su[j] += r.u_exps.exps[j];
            ss[j] += r.s_exps.exps[j];
        }
        sign_sum += r.u_exps.sign_bit + r.s_exps.sign_bit;
        x_prod = x_prod * (r.u % n) % n;
    }

    bool u_all_even = (sign_sum & 1) == 0;
    for (std::size_t j = 0; j < nb; ++j) {
        if ((su[j] + ss[j]) & 1)
            throw std::logic_error("assemble_congruence: odd exponent sum (z not in nullspace)");
        u_all_even = u_all_even && (su[j] & 1) == 0;
    }
    if (sign_sum & 1) throw std::logic_error("assemble_congruence: odd sign sum");

    FactorBase base(nb);
    Int x, y = 1;
    if (u_all_even) {
        // all u-exponents even: take both square roots on the exponents, which
        // reproduces the hand-worked x from the square-ish u side
        x = 1;
        for (std::size_t j = 0; j < nb; ++j) {
            if (su[j]) {
                Int p = powm(base.primes[j], Int(su[j] / 2), n);
                x = x * p % n;
            }
            if (ss[j]) {
                Int p = powm(base.primes[j], Int(ss[j] / 2), n);
                y = y * p % n;
            }
        }
    } else {
        x = x_prod;
        for (std::size_t j = 0; j < nb; ++j)
            if (su[j] + ss[j]) {
                Int p = powm(base.primes[j], Int((su[j] + ss[j]) / 2), n);
                y = y * p % n;
            }
    }
    if ((x * x - y * y) % n != 0)
        throw std::logic_error("assemble_congruence: x^2 != y^2 (mod n)");
    return Congruence{x, y, n};
}

inline std::optional<std::pair<Int, Int>> extract_factor(const Congruence& c) {
    if ((c.x * c.x - c.y * c.y) % c.n != 0)
        throw std::invalid_argument("extract_factor: not a congruence of squares");
    if ((c.x - c.y) % c.n == 0 || (c.x + c.y) % c.n == 0) return std::nullopt;
    Int f1 = gcd(abs(c.x - c.y), c.n);
    Int f2 = gcd(c.x + c.y, c.n);
    return std::make_pair(f1, f2);
}

enum class Outcome { factored, budget_exhausted };

struct ExperimentRecord {
    Int n;
    unsigned n_bits = 0;
    std::size_t m = 0;
    double c = 0.0;
    std::size_t M = 0;
    std::size_t lattices_tested = 0;
    std::size_t candidates_extracted = 0;
    std::size_t total_sr_pairs = 0;
    std::size_t unique_sr_pairs = 0;
    std::optional<double> unique_per_lattice_pct;
    double wall_time_seconds = 0.0;
    HeuristicKind heuristic = HeuristicKind::babai_only;
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::budget_exhausted;
};

struct FactorConfig {
    std::optional<std::size_t> m;
    std::optional<double> c;
    std::optional<std::size_t> M;
    double delta = 0.99;
    HeuristicConfig heuristic;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::size_t budget_lattices = 1'000'000;
};

struct FactorReport {
    std::optional<std::pair<Int, Int>> factors;
    ExperimentRecord record;
};

namespace solver_detail {

struct ResolvedParams {
    std::size_t m;
    double c;
    std::size_t M;
};

// m = ceil(1.5 log(n)/log log(n)) on the bit-length floor, c = m/4, M = m^2;
// M is clamped so p_M < n and m never exceeds M
inline ResolvedParams resolve_params(const Int& n, const FactorConfig& cfg) {
    unsigned bits = bit_length(n);
    double L = (bits - 1) * std::log(2.0);
    std::size_t m;
    if (cfg.m) {
        m = *cfg.m;
    } else {
        m = static_cast<std::size_t>(std::ceil(1.5 * L / std::log(L)));
        if (m < 2) m = 2;
    }
    std::size_t M = cfg.M ? *cfg.M : m * m;
    if (!cfg.M) {
        while (M > 2 && gen_primes(M).back() >= n) --M;
        if (!cfg.m && m > M) m = M;
    }
    double c = cfg.c ? *cfg.c : static_cast<double>(m) / 4.0;

    if (m < 2) throw std::invalid_argument("factor: m must be >= 2");
    if (M < m) throw std::invalid_argument("factor: M must be >= m");
    if (!(c > 0)) throw std::invalid_argument("factor: c must be positive");
    if (gen_primes(M).back() >= n)
        throw std::invalid_argument("factor: n must exceed the largest base prime");
    return {m, c, M};
}

inline std::pair<Int, Int> ordered_pair(const Int& f, const Int& n) {
    Int q = n / f;
    Int g = std::min(f, q);
    return {g, n / g};
}

}  // namespace solver_detail

namespace solver_detail {

// Per-block precision schedule: lattice trials come in fixed-size blocks and
// each block uses its own precision c, cycling through a bounded palette —
// the base value first, then alternating steps of 0.25 above and below it,
// floored at 0.75 and capped at max(c0, 4.0).  A single c saturates on a
// finite candidate pool long before the relation target is met, so sweeping
// c is what keeps the unique-relation pool growing; the cap keeps lattice
// entries (and so per-lattice cost) bounded, and making c a pure function of
// the trial index keeps runs identical for any worker count.
inline double c_for_block(std::size_t block, double c0) {
    double c_max = std::max(c0, 4.0);
    std::vector<double> palette{c0};
    for (std::size_t j = 1;; ++j) {
        double up = c0 + 0.25 * static_cast<double>(j);
        double down = c0 - 0.25 * static_cast<double>(j);
        bool any = false;
        if (up <= c_max + 1e-9) {
            palette.push_back(up);
            any = true;
        }
        if (down >= 0.75 - 1e-9) {
            palette.push_back(down);
            any = true;
        }
        if (!any) break;
    }
    return palette[block % palette.size()];
}

}  // namespace solver_detail

inline FactorReport factor(const Int& n, const FactorConfig& cfg = {}) {
    auto t0 = std::chrono::steady_clock::now();
    if (n < 2) throw std::invalid_argument("factor: n must be >= 2");
    if ((n & 1) == 0) throw std::invalid_argument("factor: n is even");
    if (is_prime(n)) throw std::invalid_argument("factor: n is prime");
    if (is_prime_power(n)) throw std::invalid_argument("factor: n is a prime power");

    auto [m, c, M] = solver_detail::resolve_params(n, cfg);
    FactorBase base(M);
    RelationStore store;

    ExperimentRecord rec;
    rec.n = n;
    rec.n_bits = bit_length(n);
    rec.m = m;
    rec.c = c;
    rec.M = M;
    rec.heuristic = cfg.heuristic.kind;
    rec.seed = cfg.seed;

    auto finish = [&](std::optional<std::pair<Int, Int>> factors) {
        rec.lattices_tested = store.lattices_tested();
        rec.candidates_extracted = store.candidates_tested();
        rec.total_sr_pairs = store.total_found();
        rec.unique_sr_pairs = store.unique_count();
        rec.unique_per_lattice_pct = store.unique_per_lattice_pct();
        rec.outcome = factors ? Outcome::factored : Outcome::budget_exhausted;
        rec.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return FactorReport{std::move(factors), rec};
    };

    std::size_t target = M + 2;
    std::size_t next_lattice = 0;
    std::size_t last_attempt_unique = 0;
    const std::size_t block_len = 200;  // lattices per precision block
    std::optional<Int> immediate;

    auto produce = [&, m = m, c0 = c](std::size_t i) {
        std::uint64_t seed_i = mix_seed(cfg.seed, i);
        Rng rng(seed_i);
        std::vector<std::size_t> sigma(m);
        std::iota(sigma.begin(), sigma.end(), std::size_t{0});
        for (std::size_t j = m; j > 1; --j) std::swap(sigma[j - 1], sigma[rng() % j]);
        double ci = solver_detail::c_for_block(i / block_len, c0);
        auto L = build_prime_lattice(n, m, ci, sigma);
        auto R = lll_reduce(L, cfg.delta);
        auto bab = babai_nearest_plane(R, L.t);
        return run_heuristic(L, R, bab, cfg.heuristic, mix_seed(seed_i, 0x68657572ULL), i);
    };

    for (;;) {
        // collection phase: run to the target, pausing at each precision-block
        // boundary to attempt a solve whenever the pool has grown since the
        // last attempt (some (n, m) pairs factor far below the full target)
        std::size_t remaining = cfg.budget_lattices - store.lattices_tested();
        if (store.unique_count() < target && remaining > 0) {
            std::size_t start = next_lattice;
            ordered_parallel_until<CandidateSet>(
                std::max<std::size_t>(cfg.workers, 1), remaining,
                [&](std::size_t i) { return produce(start + i); },
                [&](std::size_t, CandidateSet cs) {
                    ++next_lattice;
                    store.count_lattice();
                    store.count_candidates(cs.cands.size());
                    try {
                        for (const auto& cand : cs.cands) {
                            auto [u, v] = extract_pair(cand.e, base);
                            if (auto rel = test_candidate(u, v, n, base)) store.insert(*rel);
                        }
                    } catch (const ImmediateFactor& f) {
                        immediate = f.factor;
                        return false;
                    }
                    if (store.unique_count() >= target) return false;
                    bool block_end = next_lattice % block_len == 0;
                    return !(block_end && store.unique_count() > last_attempt_unique);
                });
        }
        if (immediate) return finish(solver_detail::ordered_pair(*immediate, n));

        // solving phase
        if (store.unique_count() > 0) {
            auto rels = store.relations();
            auto E = build_exponent_matrix(rels);
            auto basis = nullspace(E);
            auto try_z = [&](const std::vector<bool>& z) -> std::optional<std::pair<Int, Int>> {
                auto cong = assemble_congruence(rels, z, n);
                if (auto f = extract_factor(cong))
                    return solver_detail::ordered_pair(f->first, n);
                return std::nullopt;
            };
            for (const auto& z : basis)
                if (auto f = try_z(z)) return finish(f);
            if (!basis.empty()) {
                Rng rng(mix_seed(cfg.seed, 0xC0DE + store.unique_count()));
                for (int draw = 0; draw < 64; ++draw) {
                    std::vector<bool> z(rels.size(), false);
                    bool any = false;
                    for (const auto& zb : basis)
                        if (rng() & 1) {
                            any = true;
                            for (std::size_t i = 0; i < z.size(); ++i) z[i] = z[i] ^ zb[i];
                        }
                    if (!any) continue;
                    if (auto f = try_z(z)) return finish(f);
                }
            }
            last_attempt_unique = store.unique_count();
            // every congruence was uninteresting: raise the bar and collect more
            if (store.unique_count() >= target) target += 5;
        }
        if (store.lattices_tested() >= cfg.budget_lattices) return finish(std::nullopt);
    }
}

}  // namespace latfact
