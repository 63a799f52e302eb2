#include <catch2/catch_amalgamated.hpp>

#include <latfact/lattice.hpp>

#include "oracles.hpp"
#include "testutil.hpp"

using namespace latfact;

namespace {

std::vector<std::size_t> idperm(std::size_t m) {
    std::vector<std::size_t> s(m);
    for (std::size_t i = 0; i < m; ++i) s[i] = i;
    return s;
}

IVec iv(std::initializer_list<long> xs) {
    IVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

// |mu_{i,j}| <= 1/2 and the Lovasz condition, recomputed with exact rational
// arithmetic straight from the output columns (not from the stored data).
void check_lll_conditions(const ReducedBasis& R, double delta) {
    auto G = R.gram_schmidt();
    std::size_t m = R.m();
    Rat dl(delta);
    std::vector<Rat> B(m);
    for (std::size_t i = 0; i < m; ++i) {
        B[i] = 0;
        for (const auto& x : G[i]) B[i] += x * x;
        REQUIRE(B[i] > 0);
    }
    auto mu = [&](std::size_t i, std::size_t j) {
        Rat s = 0;
        for (std::size_t r = 0; r < G[j].size(); ++r) s += Rat(R.cols[i][r]) * G[j][r];
        return s / B[j];
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            Rat mij = mu(i, j);
            CHECK(abs(numerator(mij)) * 2 <= denominator(mij) * 1);
            CHECK(mij == R.mu(i, j));  // stored integral data agrees
        }
    for (std::size_t i = 1; i < m; ++i) {
        Rat mij = mu(i, i - 1);
        CHECK(B[i] >= (dl - mij * mij) * B[i - 1]);
    }
    for (std::size_t i = 0; i < m; ++i) CHECK(B[i] == Rat(R.D[i + 1], R.D[i]));
}

}  // namespace

TEST_CASE("prime lattice of the 3-qubit walkthrough") {
    auto L = build_prime_lattice(1961, 3, 1.5, idperm(3));
    CHECK(L.cols[0] == iv({1, 0, 0, 22}));
    CHECK(L.cols[1] == iv({0, 1, 0, 35}));
    CHECK(L.cols[2] == iv({0, 0, 2, 51}));
    CHECK(L.t == iv({0, 0, 0, 240}));
}

TEST_CASE("prime lattice structure and permutation handling") {
    // sigma permutes the diagonal weights only; bottom row stays natural.
    auto L = build_prime_lattice(1961, 3, 1.5, {2, 0, 1});
    CHECK(L.cols[0][0] == 2);  // round(ln 5)
    CHECK(L.cols[1][1] == 1);  // round(ln 2)
    CHECK(L.cols[2][2] == 1);  // round(ln 3)
    CHECK(L.cols[0][3] == 22);
    CHECK(L.cols[1][3] == 35);
    CHECK(L.cols[2][3] == 51);

    auto L2 = build_prime_lattice(100003, 8, 2.0, idperm(8));
    for (std::size_t j = 1; j < 8; ++j) {
        CHECK(L2.cols[j][j] >= L2.cols[j - 1][j - 1]);  // ln p increasing
        for (std::size_t i = 0; i < 8; ++i)
            if (i != j) CHECK(L2.cols[j][i] == 0);
    }

    CHECK_THROWS_AS(build_prime_lattice(1961, 1, 1.5, idperm(1)), std::invalid_argument);
    CHECK_THROWS_AS(build_prime_lattice(1961, 3, 0.0, idperm(3)), std::invalid_argument);
    CHECK_THROWS_AS(build_prime_lattice(5, 3, 1.5, idperm(3)), std::invalid_argument);
    CHECK_THROWS_AS(build_prime_lattice(1961, 3, 1.5, {0, 0, 2}), std::invalid_argument);
}

TEST_CASE("LLL golden outputs at both deltas") {
    auto L = build_prime_lattice(1961, 3, 1.5, idperm(3));

    auto R99 = lll_reduce(L, 0.99);
    CHECK(R99.cols[0] == iv({1, -2, 2, 3}));
    CHECK(R99.cols[1] == iv({-4, 1, 2, -2}));
    CHECK(R99.cols[2] == iv({-3, 2, 0, 4}));
    check_lll_conditions(R99, 0.99);

    auto R75 = lll_reduce(L, 0.75);
    CHECK(R75.cols[0] == iv({1, -2, 2, 3}));
    CHECK(R75.cols[1] == iv({-3, 2, 0, 4}));
    CHECK(R75.cols[2] == iv({-4, 1, 2, -2}));
    check_lll_conditions(R75, 0.75);
}

TEST_CASE("LLL leaves an orthogonal diagonal basis unchanged up to order") {
    std::vector<IVec> cols = {iv({3, 0, 0}), iv({0, 4, 0}), iv({0, 0, 5})};
    auto R = lll_reduce_cols(cols, 0.99);
    std::vector<IVec> got = R.cols;
    std::sort(got.begin(), got.end());
    std::vector<IVec> want = cols;
    std::sort(want.begin(), want.end());
    CHECK(got == want);
}

TEST_CASE("LLL rejects rank-deficient and bad-delta inputs") {
    std::vector<IVec> dup = {iv({1, 2, 3}), iv({2, 4, 6})};
    CHECK_THROWS_AS(lll_reduce_cols(dup, 0.99), std::invalid_argument);
    std::vector<IVec> ok = {iv({1, 0}), iv({0, 1})};
    CHECK_THROWS_AS(lll_reduce_cols(ok, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(lll_reduce_cols(ok, 0.25), std::invalid_argument);
}

TEST_CASE("LLL preserves the lattice: equal HNF on 200 random bases") {
    Rng rng(2024);
    for (int iter = 0; iter < 200; ++iter) {
        std::size_t m = 3 + rng() % 10;  // 3..12
        auto cols = testutil::random_fullrank_cols(rng, m + 1, m, -9, 9);
        auto R = lll_reduce_cols(cols, 0.99);
        CHECK(oracle::hnf_cols(cols) == oracle::hnf_cols(R.cols));
        check_lll_conditions(R, 0.99);
    }
}

TEST_CASE("Babai golden output on the 3-qubit lattice") {
    auto L = build_prime_lattice(1961, 3, 1.5, idperm(3));
    auto R = lll_reduce(L, 0.99);
    auto bab = babai_nearest_plane(R, L.t);
    CHECK(bab.b_op == iv({0, 4, 4, 242}));
    CHECK(bab.kappa == std::vector<int>{-1, -1, -1});
    for (std::size_t j = 0; j < 3; ++j) {
        Rat diff = bab.mus[j] - Rat(bab.coeffs[j]);
        CHECK(abs(numerator(diff)) * 2 <= denominator(diff));
    }
    // b_op must lie in the lattice
    CHECK_NOTHROW(lattice_coords(L, bab.b_op));
}

TEST_CASE("Babai on a target that is already a lattice vector") {
    Rng rng(55);
    for (int iter = 0; iter < 20; ++iter) {
        auto L = testutil::random_prime_lattice(rng, 3 + rng() % 4, 1.25);
        auto R = lll_reduce(L, 0.99);
        IVec t(L.m + 1, Int(0));
        for (std::size_t j = 0; j < L.m; ++j) {
            Int cj = Int(rng() % 11) - 5;
            for (std::size_t r = 0; r <= L.m; ++r) t[r] += cj * R.cols[j][r];
        }
        auto bab = babai_nearest_plane(R, t);
        CHECK(bab.b_op == t);
        for (const auto& mu : bab.mus) CHECK(denominator(mu) == 1);
    }
}

TEST_CASE("Babai result is within the nearest-plane quality bound") {
    Rng rng(77);
    for (int iter = 0; iter < 40; ++iter) {
        std::size_t m = 2 + rng() % 3;  // 2..4
        auto cols = testutil::random_fullrank_cols(rng, m + 1, m, -7, 7);
        IVec t(m + 1);
        for (auto& x : t) x = Int(static_cast<long>(rng() % 41)) - 20;
        auto R = lll_reduce_cols(cols, 0.99);
        auto bab = babai_nearest_plane(R, t);
        IVec diff(t);
        for (std::size_t r = 0; r < diff.size(); ++r) diff[r] -= bab.b_op[r];
        Int babai_d2 = norm_sq(diff);
        Rat cvp_d2 = oracle::cvp_min_dist_sq(cols, t);
        // ||t - b_op|| <= 2 (2/sqrt(3))^m * mindist, squared and cleared:
        Int p3 = pow(Int(3), static_cast<unsigned>(m));
        Int p4 = pow(Int(4), static_cast<unsigned>(m));
        CHECK(Rat(babai_d2) * Rat(p3) <= Rat(4) * Rat(p4) * cvp_d2);
    }
}

TEST_CASE("Babai rejects mismatched targets") {
    auto L = build_prime_lattice(1961, 3, 1.5, idperm(3));
    auto R = lll_reduce(L, 0.99);
    CHECK_THROWS_AS(babai_nearest_plane(R, iv({1, 2, 3})), std::invalid_argument);
}

TEST_CASE("lattice_coords golden and round-trip") {
    auto L = build_prime_lattice(1961, 3, 1.5, idperm(3));
    CHECK(lattice_coords(L, iv({0, 4, 4, 242})) == iv({0, 4, 2}));
    CHECK(lattice_coords(L, iv({3, 2, 4, 238})) == iv({3, 2, 2}));
    for (std::size_t j = 0; j < 3; ++j) {
        IVec e = lattice_coords(L, L.cols[j]);
        for (std::size_t i = 0; i < 3; ++i) CHECK(e[i] == (i == j ? 1 : 0));
    }
    CHECK_THROWS_AS(lattice_coords(L, iv({1, 0, 0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(lattice_coords(L, iv({0, 0, 0, 1})), std::invalid_argument);

    Rng rng(31337);
    for (int iter = 0; iter < 50; ++iter) {
        auto L2 = testutil::random_prime_lattice(rng, 3 + rng() % 8, 1.0 + (rng() % 8) / 4.0);
        IVec e(L2.m), b(L2.m + 1, Int(0));
        for (std::size_t j = 0; j < L2.m; ++j) {
            e[j] = Int(rng() % 11) - 5;
            for (std::size_t r = 0; r <= L2.m; ++r) b[r] += e[j] * L2.cols[j][r];
        }
        CHECK(lattice_coords(L2, b) == e);
    }
}
