#pragma once

// Dickman-de Bruijn smooth-number density and the scaling model built on it:
// how many lattice trials a factoring run should need as the input grows.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <latfact/solver.hpp>

namespace latfact {

// rho tabulated on a uniform grid over [1, a_max].  The delay ODE
// x rho'(x) + rho(x - 1) = 0 is advanced in its integral form
//   rho(x + h) = rho(x) - \int_x^{x+h} rho(t - 1)/t dt
// with trapezoidal quadrature, which is stable across the kink at x = 1.
// The delayed value rho(t - 1) lags the frontier by 1/step grid points, so
// it is always available from the computed prefix (linearly interpolated).
class DickmanTable {
  public:
    explicit DickmanTable(double a_max, double step = 1e-4) : step_(step) {
        if (!(step > 0.0) || step > 1e-3)
            throw std::invalid_argument("DickmanTable: step must lie in (0, 1e-3]");
        if (!(a_max >= 0.0) || !std::isfinite(a_max))
            throw std::invalid_argument("DickmanTable: a_max must be finite and >= 0");
        std::size_t n = 0;
        if (a_max > 1.0)
            n = static_cast<std::size_t>(std::ceil((a_max - 1.0) / step_ - 1e-12));
        values_.resize(n + 1);
        values_[0] = 1.0;  // rho(1) = 1
        for (std::size_t i = 0; i < n; ++i) {
            double x0 = 1.0 + static_cast<double>(i) * step_;
            double x1 = x0 + step_;
            double f0 = prefix(x0 - 1.0) / x0;
            double f1 = prefix(x1 - 1.0) / x1;
            values_[i + 1] = values_[i] - 0.5 * step_ * (f0 + f1);
        }
    }

    double step() const { return step_; }
    double a_max() const { return 1.0 + static_cast<double>(values_.size() - 1) * step_; }

    // rho(a): exactly 1 on [0, 1], linear interpolation on the grid above it
    double rho(double a) const {
        if (std::isnan(a) || a < 0.0)
            throw std::invalid_argument("DickmanTable::rho: a must be >= 0");
        if (a <= 1.0) return 1.0;
        if (a > a_max() + 0.5 * step_)
            throw std::invalid_argument("DickmanTable::rho: a beyond table range");
        return prefix(a);
    }

  private:
    // interpolated value at x, valid once every grid point below x is filled
    double prefix(double x) const {
        if (x <= 1.0) return 1.0;
        double pos = (x - 1.0) / step_;
        auto i0 = static_cast<std::size_t>(pos);
        if (i0 + 1 >= values_.size()) return values_.back();
        double frac = pos - static_cast<double>(i0);
        return values_[i0] * (1.0 - frac) + values_[i0 + 1] * frac;
    }

    double step_;
    std::vector<double> values_;
};

inline double dickman_rho(double a, double step = 1e-4) {
    if (!(step > 0.0) || step > 1e-3)
        throw std::invalid_argument("dickman_rho: step must lie in (0, 1e-3]");
    if (std::isnan(a) || a < 0.0) throw std::invalid_argument("dickman_rho: a must be >= 0");
    if (a <= 1.0) return 1.0;
    return DickmanTable(a, step).rho(a);
}

// Psi(n, p_m)/n ~ rho(log n / (log m + log log m)): the chance that a random
// integer below an n_bits-bit modulus is p_m-smooth.
inline double smooth_density(unsigned n_bits, std::size_t m) {
    if (m < 3) throw std::invalid_argument("smooth_density: m must be >= 3");
    double lm = std::log(static_cast<double>(m));
    double a = (static_cast<double>(n_bits) * std::log(2.0)) / (lm + std::log(lm));
    if (a <= 1.0) return 1.0;
    return dickman_rho(a);
}

// Coarse count of refinement candidates one lattice trial emits under each
// rounding heuristic; used only by the scaling model below, never by the
// solver itself.
inline double model_candidates_per_lattice(const HeuristicConfig& h, std::size_t m) {
    double full = std::pow(2.0, static_cast<double>(std::min<std::size_t>(m, 20)));
    switch (h.kind) {
        case HeuristicKind::babai_only:
            return 1.0;
        case HeuristicKind::exact_min:
            return 2.0;
        case HeuristicKind::hill_climb:
            return 3.0;
        case HeuristicKind::qaoa_round:
            return std::min(16.0, full);
        case HeuristicKind::local_search:
            return std::pow(2.0, static_cast<double>(std::min(h.k, m)));
        case HeuristicKind::random_round:
            return static_cast<double>(h.candidate_cap);
    }
    return 1.0;
}

// Model estimate of lattices needed to factor an n_bits-bit semiprime under
// the given configuration: (relations needed) / (unique relations yielded per
// lattice).  When empirical records are supplied the yield is pooled from
// them; otherwise it is smooth_density times the per-lattice candidate count.
// A zero yield makes the estimate unbounded, reported as absent.
inline std::optional<double> expected_lattices(unsigned n_bits, const FactorConfig& cfg,
                                               const std::vector<ExperimentRecord>& empirical = {}) {
    if (n_bits < 4) throw std::invalid_argument("expected_lattices: n_bits must be >= 4");
    Int n_model = (Int(1) << n_bits) - 1;  // largest n_bits-bit integer
    auto [m, c, M] = solver_detail::resolve_params(n_model, cfg);
    (void)c;
    double needed = static_cast<double>(M + 2);
    double yield = 0.0;
    if (!empirical.empty()) {
        double lattices = 0.0;
        double unique = 0.0;
        for (const auto& r : empirical) {
            lattices += static_cast<double>(r.lattices_tested);
            unique += static_cast<double>(r.unique_sr_pairs);
        }
        if (lattices > 0.0) yield = unique / lattices;
    } else {
        yield = smooth_density(n_bits, M) * model_candidates_per_lattice(cfg.heuristic, m);
    }
    if (yield <= 0.0) return std::nullopt;
    return needed / yield;
}

struct LogLinearFit {
    double slope = 0.0;      // d ln(y) / dx
    double intercept = 0.0;  // ln(y) at x = 0
    double r2 = 0.0;
};

// Least-squares fit of ln(y) against x; r2 is measured in log space.
inline LogLinearFit fit_loglinear(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2) throw std::invalid_argument("fit_loglinear: need at least 2 points");
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [x, y] : pts) {
        if (!(y > 0.0)) throw std::invalid_argument("fit_loglinear: y values must be positive");
        sx += x;
        sy += std::log(y);
    }
    double count = static_cast<double>(pts.size());
    double mx = sx / count;
    double my = sy / count;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& [x, y] : pts) {
        double dx = x - mx;
        double dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_loglinear: x values are all equal");
    LogLinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = std::max(0.0, syy - f.slope * sxy);
    f.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return f;
}

}  // namespace latfact
