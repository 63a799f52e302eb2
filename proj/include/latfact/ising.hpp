#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>

#include "common.hpp"
#include "lattice.hpp"

namespace latfact {

// Diagonal rounding Hamiltonian in the +/-1 Pauli-Z convention:
//   H = sum_{j<k} couplings[j][k] Z_j Z_k + sum_j fields[j] Z_j + constant,
// built so that the energy of basis state |x> equals the exact squared
// distance from the target to the refined vector b_op + sum_j kappa_j x_j b_j.
// Coefficients are half-integers; 2*coefficient mirrors are kept as integers
// for fast exact enumeration.
struct RoundingHamiltonian {
    std::size_t m = 0;
    std::vector<RVec> couplings;    // symmetric, zero diagonal
    RVec fields;
    Rat constant;
    // doubled integer mirrors (2J, 2h, 2const)
    std::vector<IVec> couplings2;
    IVec fields2;
    Int constant2;
    // provenance
    IVec t, b_op;
    std::vector<int> kappa;
    std::vector<IVec> bstar_cols;
};

// Display convention throughout: character k of a bitstring (left to right)
// is qubit m-1-k, so the leftmost character is the highest qubit index. The
// mask form uses bit j for qubit j.
inline std::string mask_to_bits(std::uint32_t mask, std::size_t m) {
    std::string s(m, '0');
    for (std::size_t j = 0; j < m; ++j)
        if (mask >> j & 1) s[m - 1 - j] = '1';
    return s;
}

inline std::uint32_t bits_to_mask(const std::string& s, std::size_t m) {
    if (s.size() != m) throw std::invalid_argument("bitstring length != qubit count");
    std::uint32_t mask = 0;
    for (std::size_t k = 0; k < m; ++k) {
        if (s[k] == '1')
            mask |= 1u << (m - 1 - k);
        else if (s[k] != '0')
            throw std::invalid_argument("bitstring must consist of 0s and 1s");
    }
    return mask;
}

inline RoundingHamiltonian build_hamiltonian(const IVec& t, const IVec& b_op,
                                             const std::vector<int>& kappa,
                                             const std::vector<IVec>& bstar_cols) {
    std::size_t m = bstar_cols.size();
    if (kappa.size() != m) throw std::invalid_argument("build_hamiltonian: kappa size mismatch");
    std::size_t d = t.size();
    if (b_op.size() != d) throw std::invalid_argument("build_hamiltonian: b_op size mismatch");
    for (const auto& col : bstar_cols)
        if (col.size() != d) throw std::invalid_argument("build_hamiltonian: column size mismatch");

    // a_j = kappa_j * b_j, d = t - b_op; expand ||d - sum_j a_j x_j||^2 with
    // x_j = (1 - z_j)/2 into ZZ/Z/constant pieces.
    std::vector<IVec> a(m, IVec(d));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t r = 0; r < d; ++r) a[j][r] = Int(kappa[j]) * bstar_cols[j][r];
    IVec diff(d);
    for (std::size_t r = 0; r < d; ++r) diff[r] = t[r] - b_op[r];

    std::vector<IVec> G(m, IVec(m));  // Gram of the a_j
    IVec A(m);                        // <a_j,a_j> - 2<d,a_j>
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j; k < m; ++k) G[j][k] = G[k][j] = dot(a[j], a[k]);
        A[j] = G[j][j] - 2 * dot(diff, a[j]);
    }

    RoundingHamiltonian H;
    H.m = m;
    H.couplings.assign(m, RVec(m, Rat(0)));
    H.couplings2.assign(m, IVec(m, Int(0)));
    H.fields.assign(m, Rat(0));
    H.fields2.assign(m, Int(0));
    Int c2 = 2 * norm_sq(diff);
    for (std::size_t j = 0; j < m; ++j) {
        Int h2 = -A[j];
        for (std::size_t k = 0; k < m; ++k)
            if (k != j) h2 -= G[j][k];
        H.fields2[j] = h2;
        H.fields[j] = Rat(h2, 2);
        c2 += A[j];
        for (std::size_t k = j + 1; k < m; ++k) {
            H.couplings2[j][k] = H.couplings2[k][j] = G[j][k];
            H.couplings[j][k] = H.couplings[k][j] = Rat(G[j][k], 2);
            c2 += G[j][k];
        }
    }
    H.constant2 = c2;
    H.constant = Rat(c2, 2);
    H.t = t;
    H.b_op = b_op;
    H.kappa = kappa;
    H.bstar_cols = bstar_cols;
    return H;
}

// Twice the energy of the basis state given as a qubit mask; exact integers.
inline Int energy2_mask(const RoundingHamiltonian& H, std::uint32_t mask) {
    Int e2 = H.constant2;
    for (std::size_t j = 0; j < H.m; ++j) {
        int zj = (mask >> j & 1) ? -1 : 1;
        e2 += Int(zj) * H.fields2[j];
        for (std::size_t k = j + 1; k < H.m; ++k) {
            int zk = (mask >> k & 1) ? -1 : 1;
            e2 += Int(zj * zk) * H.couplings2[j][k];
        }
    }
    return e2;
}

inline Rat energy_mask(const RoundingHamiltonian& H, std::uint32_t mask) {
    return Rat(energy2_mask(H, mask), 2);
}

inline Rat energy(const RoundingHamiltonian& H, const std::string& bits) {
    return energy_mask(H, bits_to_mask(bits, H.m));
}

namespace detail {

// Gray-code sweep over all masks; calls visit(mask, 2*energy). Incremental
// updates keep the full enumeration at O(m) integer ops per state.
template <typename Visit>
void enumerate_energies2(const RoundingHamiltonian& H, Visit&& visit) {
    std::size_t m = H.m;
    if (m >= 26) throw std::invalid_argument("energy enumeration: m exceeds bound 25");
    std::vector<int> z(m, 1);
    Int cur = H.constant2;
    for (std::size_t j = 0; j < m; ++j) {
        cur += H.fields2[j];
        for (std::size_t k = j + 1; k < m; ++k) cur += H.couplings2[j][k];
    }
    std::uint32_t gray = 0;
    visit(0u, cur);
    const std::uint64_t total = 1ULL << m;
    for (std::uint64_t i = 1; i < total; ++i) {
        unsigned q = static_cast<unsigned>(std::countr_zero(i));
        // flipping qubit q changes cur by -2 z_q (2h_q + sum_k 2J_qk z_k)
        Int lin = H.fields2[q];
        for (std::size_t k = 0; k < m; ++k)
            if (k != q) lin += H.couplings2[q][k] * z[k];
        cur -= 2 * z[q] * lin;
        z[q] = -z[q];
        gray ^= 1u << q;
        visit(gray, cur);
    }
}

}  // namespace detail

// All bitstrings with energy strictly below `ceiling`, sorted by energy then
// by bitstring value. m <= 25 (exhaustive enumeration).
inline std::vector<std::pair<std::string, Rat>> exact_minimize(const RoundingHamiltonian& H,
                                                               const Rat& ceiling) {
    Rat two_ceiling = 2 * ceiling;
    std::vector<std::pair<Int, std::uint32_t>> hits;
    detail::enumerate_energies2(H, [&](std::uint32_t mask, const Int& e2) {
        if (Rat(e2) < two_ceiling) hits.emplace_back(e2, mask);
    });
    std::sort(hits.begin(), hits.end());
    std::vector<std::pair<std::string, Rat>> out;
    out.reserve(hits.size());
    for (const auto& [e2, mask] : hits)
        out.emplace_back(mask_to_bits(mask, H.m), Rat(e2, 2));
    return out;
}

// Minimum-energy basis state (ties resolved toward the smaller mask).
inline std::pair<std::uint32_t, Int> min_energy2_state(const RoundingHamiltonian& H) {
    bool first = true;
    std::uint32_t best_mask = 0;
    Int best_e2 = 0;
    detail::enumerate_energies2(H, [&](std::uint32_t mask, const Int& e2) {
        if (first || e2 < best_e2 || (e2 == best_e2 && mask < best_mask)) {
            best_mask = mask;
            best_e2 = e2;
            first = false;
        }
    });
    return {best_mask, best_e2};
}

}  // namespace latfact
