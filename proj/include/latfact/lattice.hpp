#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "common.hpp"
#include "numth.hpp"

namespace latfact {

// The prime lattice: column j has diagonal weight f(j) = max(1, round(ln p_{sigma(j)}))
// in row j and ceil(10^c ln p_j) in the bottom row; everything else is zero.
// The target is zero except for ceil(10^c ln n) in the bottom coordinate.
struct PrimeLattice {
    std::vector<IVec> cols;          // m columns, each of length m+1
    std::size_t m = 0;
    double c = 0.0;
    std::vector<std::size_t> sigma;  // permutation of {0..m-1}, applied to the diagonal
    Int n;
    IVec t;                          // length m+1
};

namespace detail {

inline Int ceil_to_int(const Real& x) {
    return boost::multiprecision::ceil(x).convert_to<Int>();
}

inline Int round_to_int(const Real& x) {
    return boost::multiprecision::round(x).convert_to<Int>();
}

}  // namespace detail

inline PrimeLattice build_prime_lattice(const Int& n, std::size_t m, double c,
                                        const std::vector<std::size_t>& sigma) {
    if (m < 2) throw std::invalid_argument("build_prime_lattice: m must be >= 2");
    if (!(c > 0)) throw std::invalid_argument("build_prime_lattice: c must be positive");
    if (sigma.size() != m) throw std::invalid_argument("build_prime_lattice: permutation size != m");
    std::vector<std::size_t> check(sigma);
    std::sort(check.begin(), check.end());
    for (std::size_t j = 0; j < m; ++j)
        if (check[j] != j) throw std::invalid_argument("build_prime_lattice: invalid permutation");

    std::vector<Int> primes = gen_primes(m);
    if (n <= primes.back())
        throw std::invalid_argument("build_prime_lattice: n <= p_m (factor base covers n trivially)");

    const Real scale = pow(Real(10), Real(c));
    PrimeLattice L;
    L.m = m;
    L.c = c;
    L.sigma = sigma;
    L.n = n;
    L.cols.assign(m, IVec(m + 1, 0));
    for (std::size_t j = 0; j < m; ++j) {
        Int f = detail::round_to_int(log(Real(primes[sigma[j]])));
        if (f < 1) f = 1;
        L.cols[j][j] = f;
        L.cols[j][m] = detail::ceil_to_int(scale * log(Real(primes[j])));
    }
    L.t.assign(m + 1, 0);
    L.t[m] = detail::ceil_to_int(scale * log(Real(n)));
    return L;
}

// LLL-reduced basis together with the integral Gram-Schmidt data that the
// reduction maintains: lambda[i][j] = mu_{i,j} * D[j+1] and D[i] = det of the
// Gram matrix of the first i columns (D[0] = 1). Squared G-S norms are
// D[i+1]/D[i]; everything downstream (Babai, the G companion) reads these
// exactly without ever re-orthogonalizing in floating point.
struct ReducedBasis {
    std::vector<IVec> cols;
    double delta = 0.99;
    std::vector<IVec> lambda;  // lambda[i] has i entries (j < i)
    IVec D;                    // length m+1, D[0] = 1, all positive

    std::size_t dim() const { return cols.empty() ? 0 : cols[0].size(); }
    std::size_t m() const { return cols.size(); }

    Rat mu(std::size_t i, std::size_t j) const { return Rat(lambda[i][j], D[j + 1]); }

    // Unnormalized Gram-Schmidt companion: column j is g_j, exact rationals.
    std::vector<RVec> gram_schmidt() const {
        std::size_t mm = m(), d = dim();
        std::vector<RVec> G(mm, RVec(d, Rat(0)));
        for (std::size_t j = 0; j < mm; ++j) {
            for (std::size_t r = 0; r < d; ++r) G[j][r] = Rat(cols[j][r]);
            for (std::size_t i = 0; i < j; ++i) {
                Rat mji = mu(j, i);
                for (std::size_t r = 0; r < d; ++r) G[j][r] -= mji * G[i][r];
            }
        }
        return G;
    }
};

namespace detail {

// Incremental integral Gram-Schmidt setup (de Weger). All divisions below are
// exact by the standard determinant identities.
inline void lll_init(const std::vector<IVec>& cols, std::vector<IVec>& lambda, IVec& D) {
    std::size_t m = cols.size();
    lambda.assign(m, IVec());
    for (std::size_t i = 0; i < m; ++i) lambda[i].assign(i, Int(0));
    D.assign(m + 1, Int(1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            Int u = dot(cols[i], cols[j]);
            for (std::size_t k = 0; k < j; ++k)
                u = (D[k + 1] * u - lambda[i][k] * lambda[j][k]) / D[k];
            if (j < i)
                lambda[i][j] = u;
            else
                D[i + 1] = u;
        }
        if (D[i + 1] <= 0)
            throw std::invalid_argument("lll_reduce: rank-deficient basis");
    }
}

inline void lll_red(std::vector<IVec>& cols, std::vector<IVec>& lambda, const IVec& D,
                    std::size_t k, std::size_t l) {
    if (2 * abs(lambda[k][l]) <= D[l + 1]) return;
    Int q = nearest_div(lambda[k][l], D[l + 1]);
    IVec& ck = cols[k];
    const IVec& cl = cols[l];
    for (std::size_t r = 0; r < ck.size(); ++r) ck[r] -= q * cl[r];
    lambda[k][l] -= q * D[l + 1];
    for (std::size_t j = 0; j < l; ++j) lambda[k][j] -= q * lambda[l][j];
}

inline void lll_swap(std::vector<IVec>& cols, std::vector<IVec>& lambda, IVec& D,
                     std::size_t k) {
    std::size_t m = cols.size();
    std::swap(cols[k - 1], cols[k]);
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lambda[k][j], lambda[k - 1][j]);
    Int lam = lambda[k][k - 1];
    Int Bnew = (D[k - 1] * D[k + 1] + lam * lam) / D[k];
    for (std::size_t i = k + 1; i < m; ++i) {
        Int t = lambda[i][k];
        lambda[i][k] = (D[k + 1] * lambda[i][k - 1] - lam * t) / D[k];
        lambda[i][k - 1] = (Bnew * t + lam * lambda[i][k]) / D[k + 1];
    }
    D[k] = Bnew;
}

}  // namespace detail

// LLL on an arbitrary full-column-rank integer basis (columns). The output
// order is the raw termination order of the reduction sweep; for the prime
// lattices used here that order already runs from short to long columns in
// the generic case.
inline ReducedBasis lll_reduce_cols(std::vector<IVec> cols, double delta) {
    if (!(delta > 0.25 && delta < 1.0))
        throw std::invalid_argument("lll_reduce: delta must lie in (1/4, 1)");
    if (cols.empty()) throw std::invalid_argument("lll_reduce: empty basis");
    ReducedBasis R;
    R.delta = delta;
    Rat dl(delta);  // exact binary value of the double
    Int dnum = Int(numerator(dl)), dden = Int(denominator(dl));

    std::vector<IVec>& b = cols;
    std::vector<IVec> lambda;
    IVec D;
    detail::lll_init(b, lambda, D);

    std::size_t m = b.size();
    std::size_t k = 1;
    while (k < m) {
        detail::lll_red(b, lambda, D, k, k - 1);
        // Lovasz: B_k >= (delta - mu^2) B_{k-1}, cleared of denominators.
        if (dden * D[k + 1] * D[k - 1] < dnum * D[k] * D[k] - dden * lambda[k][k - 1] * lambda[k][k - 1]) {
            detail::lll_swap(b, lambda, D, k);
            if (k > 1) --k;
        } else {
            for (std::size_t l = k - 1; l-- > 0;) detail::lll_red(b, lambda, D, k, l);
            ++k;
        }
    }
    R.cols = std::move(b);
    R.lambda = std::move(lambda);
    R.D = std::move(D);
    return R;
}

inline ReducedBasis lll_reduce(const PrimeLattice& L, double delta = 0.99) {
    return lll_reduce_cols(L.cols, delta);
}

struct BabaiResult {
    IVec b_op;                 // the lattice vector found, length m+1
    IVec coeffs;               // c_j, length m
    RVec mus;                  // mu_j at the moment of rounding
    std::vector<int> kappa;    // sign(mu_j - c_j), 0 mapped to +1
};

// Babai nearest plane over the reduced basis, entirely in integers: the
// target is orthogonalized against the basis with the same lambda/D
// recurrence, then mu_j = (lambda_t[j] - sum_{i>j} c_i lambda[i][j]) / D[j+1].
inline BabaiResult babai_nearest_plane(const ReducedBasis& R, const IVec& t) {
    std::size_t m = R.m();
    if (m == 0) throw std::invalid_argument("babai_nearest_plane: empty basis");
    if (t.size() != R.dim()) throw std::invalid_argument("babai_nearest_plane: dimension mismatch");
    for (std::size_t i = 0; i <= m; ++i)
        if (R.D[i] <= 0) throw std::invalid_argument("babai_nearest_plane: degenerate Gram-Schmidt data");

    IVec lt(m);  // lambda row of the target: lt[j] = <t, g_j>/<g_j, g_j> * D[j+1]
    for (std::size_t j = 0; j < m; ++j) {
        Int u = dot(t, R.cols[j]);
        for (std::size_t k = 0; k < j; ++k)
            u = (R.D[k + 1] * u - lt[k] * R.lambda[j][k]) / R.D[k];
        lt[j] = u;
    }

    BabaiResult res;
    res.coeffs.assign(m, Int(0));
    res.mus.assign(m, Rat(0));
    res.kappa.assign(m, 1);
    for (std::size_t j = m; j-- > 0;) {
        Int num = lt[j];
        for (std::size_t i = j + 1; i < m; ++i) num -= res.coeffs[i] * R.lambda[i][j];
        res.mus[j] = Rat(num, R.D[j + 1]);
        res.coeffs[j] = nearest_div(num, R.D[j + 1]);
        res.kappa[j] = sgn(num - res.coeffs[j] * R.D[j + 1]);
        if (res.kappa[j] == 0) res.kappa[j] = 1;
    }
    res.b_op.assign(R.dim(), Int(0));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t r = 0; r < res.b_op.size(); ++r)
            res.b_op[r] += res.coeffs[j] * R.cols[j][r];
    return res;
}

// Solve B e = b exactly using the diagonal rows, then verify every row.
inline IVec lattice_coords(const PrimeLattice& L, const IVec& b) {
    if (b.size() != L.m + 1) throw std::invalid_argument("lattice_coords: dimension mismatch");
    IVec e(L.m);
    for (std::size_t j = 0; j < L.m; ++j) {
        const Int& f = L.cols[j][j];
        if (b[j] % f != 0)
            throw std::invalid_argument("lattice_coords: not a lattice vector (non-integral solve)");
        e[j] = b[j] / f;
    }
    Int bottom = 0;
    for (std::size_t j = 0; j < L.m; ++j) bottom += e[j] * L.cols[j][L.m];
    if (bottom != b[L.m])
        throw std::invalid_argument("lattice_coords: not a lattice vector (bottom row mismatch)");
    return e;
}

}  // namespace latfact
