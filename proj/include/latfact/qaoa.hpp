#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "common.hpp"
#include "ising.hpp"

namespace latfact {

struct AnsatzConfig {
    std::size_t p = 1;               // layer count
    bool multi_angle = false;        // independent parameter per rotation gate
    std::vector<double> init_params; // empty -> drawn uniformly from [-pi, pi]
    std::uint64_t rng_seed = 0;
};

struct Statevector {
    std::vector<std::complex<double>> amps;

    double norm_sq() const {
        double s = 0;
        for (const auto& a : amps) s += std::norm(a);
        return s;
    }
};

namespace qaoa_detail {

enum class GateKind { CostZZ, CostZ, MixerX };

struct Gate {
    GateKind kind;
    unsigned q1 = 0, q2 = 0;
    double weight = 1.0;  // Hamiltonian coefficient (1 for mixers)
    std::size_t layer = 0;
};

// The circuit as an ordered gate list: per layer, every nonzero ZZ coupling
// (j<k lexicographic), every nonzero Z field, then one X mixer per qubit.
struct Compiled {
    std::size_t m = 0, p = 0;
    bool multi_angle = false;
    std::vector<Gate> gates;
    std::vector<double> energies;          // all 2^m eigenvalues
    std::vector<std::size_t> param_of;     // gate index -> parameter index

    std::size_t param_count() const { return multi_angle ? gates.size() : 2 * p; }
};

inline Compiled compile(const RoundingHamiltonian& H, const AnsatzConfig& cfg) {
    if (H.m > 20) throw std::invalid_argument("qaoa: m exceeds statevector bound 20");
    Compiled c;
    c.m = H.m;
    c.p = cfg.p;
    c.multi_angle = cfg.multi_angle;
    for (std::size_t l = 0; l < cfg.p; ++l) {
        for (unsigned j = 0; j < H.m; ++j)
            for (unsigned k = j + 1; k < H.m; ++k)
                if (H.couplings2[j][k] != 0)
                    c.gates.push_back({GateKind::CostZZ, j, k,
                                       to_double(H.couplings[j][k]), l});
        for (unsigned j = 0; j < H.m; ++j)
            if (H.fields2[j] != 0)
                c.gates.push_back({GateKind::CostZ, j, 0, to_double(H.fields[j]), l});
        for (unsigned j = 0; j < H.m; ++j)
            c.gates.push_back({GateKind::MixerX, j, 0, 1.0, l});
    }
    c.param_of.resize(c.gates.size());
    for (std::size_t g = 0; g < c.gates.size(); ++g)
        c.param_of[g] = c.multi_angle
                            ? g
                            : 2 * c.gates[g].layer + (c.gates[g].kind == GateKind::MixerX ? 1 : 0);
    c.energies.assign(std::size_t(1) << H.m, 0.0);
    detail::enumerate_energies2(H, [&](std::uint32_t mask, const Int& e2) {
        c.energies[mask] = to_double(Rat(e2, 2));
    });
    return c;
}

// Applies the circuit with one explicit angle per gate.
inline Statevector run_gates(const Compiled& c, const std::vector<double>& gate_angles) {
    const std::size_t n = std::size_t(1) << c.m;
    Statevector sv;
    sv.amps.assign(n, std::complex<double>(1.0 / std::sqrt(double(n)), 0.0));
    std::vector<double> phase(n);
    std::size_t g = 0;
    while (g < c.gates.size()) {
        std::size_t layer = c.gates[g].layer;
        // accumulate the whole diagonal cost block of this layer in one pass
        std::fill(phase.begin(), phase.end(), 0.0);
        bool any_cost = false;
        for (; g < c.gates.size() && c.gates[g].layer == layer &&
               c.gates[g].kind != GateKind::MixerX;
             ++g) {
            const Gate& gate = c.gates[g];
            double theta_w = gate_angles[g] * gate.weight;
            any_cost = true;
            if (gate.kind == GateKind::CostZZ) {
                std::uint32_t m1 = 1u << gate.q1, m2 = 1u << gate.q2;
                for (std::size_t x = 0; x < n; ++x) {
                    int z = ((x & m1) ? -1 : 1) * ((x & m2) ? -1 : 1);
                    phase[x] -= theta_w * z;  // e^{-i theta w zz}
                }
            } else {
                std::uint32_t m1 = 1u << gate.q1;
                for (std::size_t x = 0; x < n; ++x)
                    phase[x] -= theta_w * ((x & m1) ? -1 : 1);
            }
        }
        if (any_cost)
            for (std::size_t x = 0; x < n; ++x)
                sv.amps[x] *= std::complex<double>(std::cos(phase[x]), std::sin(phase[x]));
        // mixer block: e^{-i beta X_j} per qubit
        for (; g < c.gates.size() && c.gates[g].layer == layer &&
               c.gates[g].kind == GateKind::MixerX;
             ++g) {
            double beta = gate_angles[g];
            double cb = std::cos(beta), sb = std::sin(beta);
            std::uint32_t bit = 1u << c.gates[g].q1;
            for (std::size_t x = 0; x < n; ++x) {
                if (x & bit) continue;
                auto a0 = sv.amps[x];
                auto a1 = sv.amps[x | bit];
                sv.amps[x] = cb * a0 - std::complex<double>(0, sb) * a1;
                sv.amps[x | bit] = cb * a1 - std::complex<double>(0, sb) * a0;
            }
        }
    }
    return sv;
}

inline std::vector<double> expand_params(const Compiled& c, const std::vector<double>& params) {
    if (params.size() != c.param_count())
        throw std::invalid_argument("qaoa: parameter vector length mismatch");
    std::vector<double> angles(c.gates.size());
    for (std::size_t g = 0; g < c.gates.size(); ++g) angles[g] = params[c.param_of[g]];
    return angles;
}

inline double expectation_of(const Compiled& c, const Statevector& sv) {
    double e = 0;
    for (std::size_t x = 0; x < sv.amps.size(); ++x) e += std::norm(sv.amps[x]) * c.energies[x];
    return e;
}

inline std::vector<double> gradient_impl(const Compiled& c, const std::vector<double>& params) {
    auto angles = expand_params(c, params);
    std::vector<double> grad(c.param_count(), 0.0);
    for (std::size_t g = 0; g < c.gates.size(); ++g) {
        double r = std::abs(c.gates[g].weight);
        double shift = M_PI / (4.0 * r);
        double saved = angles[g];
        angles[g] = saved + shift;
        double fplus = expectation_of(c, run_gates(c, angles));
        angles[g] = saved - shift;
        double fminus = expectation_of(c, run_gates(c, angles));
        angles[g] = saved;
        grad[c.param_of[g]] += r * (fplus - fminus);
    }
    return grad;
}

}  // namespace qaoa_detail

inline Statevector evolve(const RoundingHamiltonian& H, const AnsatzConfig& cfg,
                          const std::vector<double>& params) {
    auto c = qaoa_detail::compile(H, cfg);
    return qaoa_detail::run_gates(c, qaoa_detail::expand_params(c, params));
}

inline double expectation(const RoundingHamiltonian& H, const Statevector& state) {
    if (state.amps.size() != std::size_t(1) << H.m)
        throw std::invalid_argument("expectation: state dimension mismatch");
    double e = 0;
    detail::enumerate_energies2(H, [&](std::uint32_t mask, const Int& e2) {
        e += std::norm(state.amps[mask]) * to_double(Rat(e2, 2));
    });
    return e;
}

// Analytic gradient by the two-point parameter-shift rule, applied per
// rotation gate (a tied parameter accumulates the shifts of all its gates).
inline std::vector<double> gradient(const RoundingHamiltonian& H, const AnsatzConfig& cfg,
                                    const std::vector<double>& params) {
    auto c = qaoa_detail::compile(H, cfg);
    return qaoa_detail::gradient_impl(c, params);
}

struct OptimizeResult {
    std::vector<double> params;
    double expectation = 0.0;
    std::vector<double> trace;  // expectation per accepted iterate, including start
};

// Quasi-Newton (BFGS) descent with Armijo backtracking on the analytic
// gradient. Deterministic given cfg; stops when the gradient infinity-norm
// drops below 1e-8 or after 500 iterations.
inline OptimizeResult optimize(const RoundingHamiltonian& H, const AnsatzConfig& cfg) {
    auto c = qaoa_detail::compile(H, cfg);
    std::size_t np = c.param_count();
    std::vector<double> x = cfg.init_params;
    if (x.empty()) {
        Rng rng(cfg.rng_seed);
        x.resize(np);
        for (auto& v : x) v = (2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0) * M_PI;
    }
    if (x.size() != np) throw std::invalid_argument("optimize: init_params length mismatch");

    auto feval = [&](const std::vector<double>& pv) {
        return qaoa_detail::expectation_of(c, qaoa_detail::run_gates(c, qaoa_detail::expand_params(c, pv)));
    };

    OptimizeResult res;
    double f = feval(x);
    if (!std::isfinite(f)) throw std::runtime_error("optimize: non-finite expectation");
    res.trace.push_back(f);
    std::vector<double> g = qaoa_detail::gradient_impl(c, x);

    // inverse Hessian approximation, started at identity
    std::vector<std::vector<double>> Hinv(np, std::vector<double>(np, 0.0));
    for (std::size_t i = 0; i < np; ++i) Hinv[i][i] = 1.0;

    for (int iter = 0; iter < 500; ++iter) {
        double gmax = 0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        if (gmax < 1e-8 || np == 0) break;

        std::vector<double> dir(np, 0.0);
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = 0; j < np; ++j) dir[i] -= Hinv[i][j] * g[j];
        double slope = 0;
        for (std::size_t i = 0; i < np; ++i) slope += dir[i] * g[i];
        if (slope >= 0) {  // fall back to steepest descent
            for (std::size_t i = 0; i < np; ++i) dir[i] = -g[i];
            slope = 0;
            for (std::size_t i = 0; i < np; ++i) slope += dir[i] * g[i];
            for (std::size_t i = 0; i < np; ++i)
                for (std::size_t j = 0; j < np; ++j) Hinv[i][j] = (i == j) ? 1.0 : 0.0;
        }

        // Armijo backtracking
        double step = 1.0, fnew = 0;
        std::vector<double> xnew(np);
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            for (std::size_t i = 0; i < np; ++i) xnew[i] = x[i] + step * dir[i];
            fnew = feval(xnew);
            if (std::isfinite(fnew) && fnew <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> gnew = qaoa_detail::gradient_impl(c, xnew);
        std::vector<double> s(np), ydiff(np);
        for (std::size_t i = 0; i < np; ++i) {
            s[i] = xnew[i] - x[i];
            ydiff[i] = gnew[i] - g[i];
        }
        double sy = 0;
        for (std::size_t i = 0; i < np; ++i) sy += s[i] * ydiff[i];
        if (sy > 1e-12) {  // BFGS update of the inverse Hessian
            double rho = 1.0 / sy;
            std::vector<double> Hy(np, 0.0);
            for (std::size_t i = 0; i < np; ++i)
                for (std::size_t j = 0; j < np; ++j) Hy[i] += Hinv[i][j] * ydiff[j];
            double yHy = 0;
            for (std::size_t i = 0; i < np; ++i) yHy += ydiff[i] * Hy[i];
            for (std::size_t i = 0; i < np; ++i)
                for (std::size_t j = 0; j < np; ++j)
                    Hinv[i][j] += (1.0 + rho * yHy) * rho * s[i] * s[j] -
                                  rho * (Hy[i] * s[j] + s[i] * Hy[j]);
        }
        x = xnew;
        f = fnew;
        g = gnew;
        res.trace.push_back(f);
    }
    res.params = x;
    res.expectation = f;
    return res;
}

// Multinomial sampling from |amp|^2; the uniform draw is built from the raw
// 64-bit generator output so results do not depend on the standard library's
// distribution implementations.
inline std::map<std::string, std::size_t> sample(const RoundingHamiltonian& H,
                                                 const Statevector& state, std::size_t shots,
                                                 std::uint64_t rng_seed) {
    if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
    if (state.amps.size() != std::size_t(1) << H.m)
        throw std::invalid_argument("sample: state dimension mismatch");
    std::vector<double> cdf(state.amps.size());
    double acc = 0;
    for (std::size_t x = 0; x < state.amps.size(); ++x) {
        acc += std::norm(state.amps[x]);
        cdf[x] = acc;
    }
    Rng rng(rng_seed);
    std::map<std::string, std::size_t> hist;
    for (std::size_t s = 0; s < shots; ++s) {
        double u = ((rng() >> 11) * 0x1.0p-53) * acc;
        std::size_t x = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        if (x >= cdf.size()) x = cdf.size() - 1;
        ++hist[mask_to_bits(static_cast<std::uint32_t>(x), H.m)];
    }
    return hist;
}

}  // namespace latfact
