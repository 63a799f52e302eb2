#include <catch2/catch_amalgamated.hpp>

#include <latfact/qaoa.hpp>

#include "testutil.hpp"

using namespace latfact;

namespace {

RoundingHamiltonian demo_hamiltonian() {
    auto L = build_prime_lattice(1961, 3, 1.5, {0, 1, 2});
    auto R = lll_reduce(L, 0.99);
    auto bab = babai_nearest_plane(R, L.t);
    return build_hamiltonian(L.t, bab.b_op, bab.kappa, R.cols);
}

RoundingHamiltonian random_hamiltonian(Rng& rng, std::size_t m) {
    auto L = testutil::random_prime_lattice(rng, m, 0.75 + (rng() % 5) / 4.0);
    auto R = lll_reduce(L, 0.99);
    auto bab = babai_nearest_plane(R, L.t);
    return build_hamiltonian(L.t, bab.b_op, bab.kappa, R.cols);
}

std::vector<double> random_params(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = (2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0) * M_PI;
    return v;
}

std::size_t param_count(const RoundingHamiltonian& H, const AnsatzConfig& cfg) {
    return qaoa_detail::compile(H, cfg).param_count();
}

double fd_gradient(const RoundingHamiltonian& H, const AnsatzConfig& cfg,
                   std::vector<double> params, std::size_t i, double h = 1e-5) {
    params[i] += h;
    double fp = expectation(H, evolve(H, cfg, params));
    params[i] -= 2 * h;
    double fm = expectation(H, evolve(H, cfg, params));
    return (fp - fm) / (2 * h);
}

}  // namespace

TEST_CASE("zero angles leave the uniform superposition unchanged") {
    auto H = demo_hamiltonian();
    AnsatzConfig cfg{2, false, {}, 0};
    auto sv = evolve(H, cfg, std::vector<double>(4, 0.0));
    for (const auto& a : sv.amps) {
        CHECK(std::abs(a.real() - 1.0 / std::sqrt(8.0)) < 1e-14);
        CHECK(std::abs(a.imag()) < 1e-14);
    }
    CHECK(std::abs(expectation(H, sv) - 43.5) < 1e-12);
}

TEST_CASE("unitarity: norm preserved across random evolutions") {
    Rng rng(404);
    auto H = demo_hamiltonian();
    for (int iter = 0; iter < 100; ++iter) {
        AnsatzConfig cfg{1 + rng() % 3, (rng() & 1) != 0, {}, 0};
        auto params = random_params(rng, param_count(H, cfg));
        auto sv = evolve(H, cfg, params);
        CHECK(std::abs(sv.norm_sq() - 1.0) < 1e-10);
    }
}

TEST_CASE("expectation golden values and range") {
    auto H = demo_hamiltonian();
    Statevector basis;
    basis.amps.assign(8, {0.0, 0.0});
    basis.amps[bits_to_mask("100", 3)] = {1.0, 0.0};
    CHECK(std::abs(expectation(H, basis) - 33.0) < 1e-12);

    Rng rng(11);
    AnsatzConfig cfg{2, true, {}, 0};
    for (int iter = 0; iter < 20; ++iter) {
        auto sv = evolve(H, cfg, random_params(rng, param_count(H, cfg)));
        double e = expectation(H, sv);
        CHECK(e >= 33.0 - 1e-9);
        CHECK(e <= 54.0 + 1e-9);  // extremes of the walkthrough spectrum
    }
    CHECK_THROWS_AS(expectation(H, Statevector{{1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("parameter lengths are validated") {
    auto H = demo_hamiltonian();
    AnsatzConfig std1{1, false, {}, 0};
    CHECK_THROWS_AS(evolve(H, std1, {0.1}), std::invalid_argument);
    CHECK_NOTHROW(evolve(H, std1, {0.1, 0.2}));
    AnsatzConfig ma1{1, true, {}, 0};
    // 3 ZZ + 3 Z + 3 mixers = 9 gates
    CHECK(param_count(H, ma1) == 9);
    CHECK_THROWS_AS(evolve(H, ma1, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("standard ansatz equals multi-angle with replicated angles") {
    Rng rng(505);
    for (int iter = 0; iter < 10; ++iter) {
        auto H = random_hamiltonian(rng, 2 + rng() % 3);
        std::size_t p = 1 + rng() % 2;
        AnsatzConfig std_cfg{p, false, {}, 0};
        AnsatzConfig ma_cfg{p, true, {}, 0};
        auto std_params = random_params(rng, 2 * p);
        auto c = qaoa_detail::compile(H, ma_cfg);
        std::vector<double> ma_params(c.param_count());
        for (std::size_t g = 0; g < c.gates.size(); ++g) {
            const auto& gate = c.gates[g];
            ma_params[g] = std_params[2 * gate.layer +
                                      (gate.kind == qaoa_detail::GateKind::MixerX ? 1 : 0)];
        }
        double e_std = expectation(H, evolve(H, std_cfg, std_params));
        double e_ma = expectation(H, evolve(H, ma_cfg, ma_params));
        CHECK(std::abs(e_std - e_ma) < 1e-12);
    }
}

TEST_CASE("parameter-shift gradient matches central finite differences") {
    Rng rng(606);
    for (int iter = 0; iter < 12; ++iter) {
        auto H = random_hamiltonian(rng, 2 + rng() % 2);
        AnsatzConfig cfg{1 + rng() % 2, (rng() & 1) != 0, {}, 0};
        auto params = random_params(rng, param_count(H, cfg));
        auto g = gradient(H, cfg, params);
        REQUIRE(g.size() == params.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            double fd = fd_gradient(H, cfg, params, i);
            CHECK(std::abs(g[i] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("zero-layer ansatz has an empty gradient") {
    auto H = demo_hamiltonian();
    AnsatzConfig cfg{0, false, {}, 0};
    CHECK(gradient(H, cfg, {}).empty());
    auto res = optimize(H, cfg);
    CHECK(res.trace.size() == 1);
    CHECK(std::abs(res.expectation - 43.5) < 1e-12);
}

TEST_CASE("optimize descends below the uniform baseline on the walkthrough") {
    auto H = demo_hamiltonian();
    double best = 1e300;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        AnsatzConfig cfg{1, false, {}, seed};
        auto res = optimize(H, cfg);
        best = std::min(best, res.expectation);
        for (std::size_t i = 1; i < res.trace.size(); ++i)
            CHECK(res.trace[i] <= res.trace[i - 1] + 1e-12);
        // gradient near the reported optimum is small or the step stalled
        CHECK(res.trace.back() == Catch::Approx(res.expectation));
    }
    CHECK(best < 43.5);

    AnsatzConfig cfg2{2, true, {}, 3};
    auto res2 = optimize(H, cfg2);
    CHECK(res2.expectation < 43.5);

    // restarting from the optimum keeps the trace non-increasing and short
    AnsatzConfig warm{1, false, optimize(H, AnsatzConfig{1, false, {}, 1}).params, 0};
    auto res3 = optimize(H, warm);
    REQUIRE(res3.trace.size() >= 1);
    for (std::size_t i = 1; i < res3.trace.size(); ++i)
        CHECK(res3.trace[i] <= res3.trace[i - 1] + 1e-12);
}

TEST_CASE("sampling: determinism, basis states, uniform concentration") {
    auto H = demo_hamiltonian();
    Statevector basis;
    basis.amps.assign(8, {0.0, 0.0});
    basis.amps[bits_to_mask("011", 3)] = {0.0, 1.0};
    auto hist = sample(H, basis, 500, 42);
    REQUIRE(hist.size() == 1);
    CHECK(hist.at("011") == 500);

    AnsatzConfig cfg{1, false, {}, 0};
    auto uniform = evolve(H, cfg, {0.0, 0.0});
    auto h1 = sample(H, uniform, 8000, 7);
    auto h2 = sample(H, uniform, 8000, 7);
    CHECK(h1 == h2);
    std::size_t total = 0;
    for (auto& [bits, count] : h1) {
        total += count;
        // binomial: mean 1000, sigma = sqrt(8000 * (1/8)(7/8)) ~ 29.6; 5 sigma
        CHECK(count > 1000 - 148);
        CHECK(count < 1000 + 148);
    }
    CHECK(total == 8000);
    CHECK_THROWS_AS(sample(H, uniform, 0, 1), std::invalid_argument);
}

TEST_CASE("optimized distributions concentrate on the low-energy strings") {
    auto H = demo_hamiltonian();
    double best_e = 1e300;
    Statevector best_sv;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        AnsatzConfig cfg{2, false, {}, seed};
        auto res = optimize(H, cfg);
        if (res.expectation < best_e) {
            best_e = res.expectation;
            best_sv = evolve(H, cfg, res.params);
        }
    }
    auto hist = sample(H, best_sv, 1000, 99);
    std::string mode;
    std::size_t mode_count = 0;
    for (auto& [bits, count] : hist)
        if (count > mode_count) {
            mode_count = count;
            mode = bits;
        }
    // the two lowest-energy strings of the walkthrough
    bool low = (mode == "100") || (mode == "011");
    CHECK(low);
}
