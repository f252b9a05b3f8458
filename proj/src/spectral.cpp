#include "diamag/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <boost/math/tools/minima.hpp>

#include "diamag/errors.hpp"

namespace diamag {

namespace {
constexpr double kDegeneracyTolerance = 1e-8;  // relative
constexpr double kDarkTolerance = 1e-10;       // relative to the largest step
}  // namespace

double CumulativeCurve::value_at(double nu) const {
    const auto it = std::upper_bound(nu_grid.begin(), nu_grid.end(), nu);
    if (it == nu_grid.begin()) return 0.0;
    return d_values[static_cast<std::size_t>(it - nu_grid.begin()) - 1];
}

std::vector<std::pair<double, double>> CumulativeCurve::fit_samples() const {
    std::vector<std::pair<double, double>> out;
    if (step_weights.empty()) {
        out.reserve(nu_grid.size());
        for (std::size_t i = 0; i < nu_grid.size(); ++i) out.emplace_back(nu_grid[i], d_values[i]);
        return out;
    }
    const double largest = *std::max_element(step_weights.begin(), step_weights.end());
    for (std::size_t i = 0; i < nu_grid.size(); ++i) {
        if (step_weights[i] <= kDarkTolerance * largest) continue;
        out.emplace_back(nu_grid[i], d_values[i] - 0.5 * step_weights[i]);
    }
    return out;
}

CumulativeCurve cumulative_coupling(const ModeSet& modes, double dipole) {
    const Eigen::Index n = modes.size();
    if (n == 0) throw FitError("cumulative coupling of an empty mode set");

    CumulativeCurve curve;
    const double weight = 2.0 * std::numbers::pi * dipole * dipole;
    double total = 0.0;
    Eigen::Index i = 0;
    while (i < n) {
        const double nu0 = modes.frequencies(i);
        double nu_sum = 0.0;
        double step = 0.0;
        Eigen::Index j = i;
        for (; j < n && modes.frequencies(j) - nu0 <= kDegeneracyTolerance * nu0; ++j) {
            nu_sum += modes.frequencies(j);
            step += weight * modes.couplings(j) * modes.couplings(j);
        }
        total += step;
        curve.nu_grid.push_back(nu_sum / static_cast<double>(j - i));
        curve.d_values.push_back(total);
        curve.step_weights.push_back(step);
        i = j;
    }
    return curve;
}

double SpectralFit::spectral_density(double nu) const { return prefactor * std::pow(nu, exponent); }

double SpectralFit::cumulative(double nu) const {
    return prefactor / (exponent + 1.0) * std::pow(nu, exponent + 1.0);
}

SpectralFit fit_power_law(const CumulativeCurve& curve, FitWindow window,
                          std::optional<double> fixed_exponent) {
    if (!(window.lo > 0.0) || !(window.hi > window.lo)) {
        throw FitError("fit window must satisfy 0 < lo < hi");
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [nu, d] : curve.fit_samples()) {
        if (nu < window.lo || nu > window.hi) continue;
        if (!(d > 0.0)) throw FitError("nonpositive cumulative weight inside the fit window");
        x.push_back(std::log(nu));
        y.push_back(std::log(d));
    }
    if (x.size() < kMinFitSamples) {
        throw FitError("fit window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                       "] holds " + std::to_string(x.size()) + " samples, need at least " +
                       std::to_string(kMinFitSamples));
    }
    const auto count = static_cast<double>(x.size());

    double power = 0.0;  // exponent of D
    double log_c = 0.0;
    if (fixed_exponent) {
        power = *fixed_exponent + 1.0;
        for (std::size_t k = 0; k < x.size(); ++k) log_c += y[k] - power * x[k];
        log_c /= count;
    } else {
        double mx = 0.0, my = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            mx += x[k];
            my += y[k];
        }
        mx /= count;
        my /= count;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            sxy += (x[k] - mx) * (y[k] - my);
            sxx += (x[k] - mx) * (x[k] - mx);
        }
        if (!(sxx > 0.0)) throw FitError("fit window samples share a single frequency");
        power = sxy / sxx;
        log_c = my - power * mx;
    }

    double sq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double rel = std::exp(log_c + power * x[k] - y[k]) - 1.0;
        sq += rel * rel;
    }

    SpectralFit fit;
    fit.exponent = power - 1.0;
    fit.prefactor = std::exp(log_c) * power;
    fit.window = window;
    fit.residual = std::sqrt(sq / count);
    fit.samples = x.size();
    if (!(fit.prefactor > 0.0) || !std::isfinite(fit.prefactor)) {
        throw FitError("power-law fit produced a nonpositive prefactor");
    }
    return fit;
}

double extrapolate_continuum(std::span<const std::pair<double, double>> series) {
    if (series.size() < 3) throw FitError("continuum extrapolation needs at least three spacings");
    std::set<double> seen;
    for (const auto& [dx, value] : series) {
        if (!std::isfinite(dx) || !std::isfinite(value)) throw FitError("non-finite extrapolation input");
        if (!seen.insert(dx).second) throw FitError("duplicate spacing in extrapolation series");
    }
    const auto n = static_cast<Eigen::Index>(series.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dx = series[static_cast<std::size_t>(i)].first;
        design(i, 0) = 1.0;
        design(i, 1) = dx;
        design(i, 2) = dx * dx;
        rhs(i) = series[static_cast<std::size_t>(i)].second;
    }
    const Eigen::VectorXd coeff = design.colPivHouseholderQr().solve(rhs);
    return coeff(0);
}

double DecouplingLaw::two_pi_alpha(double delta) const { return std::pow(1.0 + a * delta, -b); }

DecouplingLaw fit_decoupling_law(std::span<const std::pair<double, double>> points) {
    std::set<double> nonzero;
    for (const auto& [delta, value] : points) {
        if (!(delta >= 0.0)) throw FitError("decoupling law needs Delta >= 0");
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw FitError("decoupling law needs positive 2*pi*alpha, got " + std::to_string(value) +
                           " at Delta=" + std::to_string(delta));
        }
        if (delta > 0.0) nonzero.insert(delta);
    }
    if (points.size() < 3 || nonzero.size() < 2) {
        throw FitError("decoupling law needs >= 3 points with two distinct nonzero Delta");
    }

    // For fixed a the optimal b is a linear regression through the origin.
    auto solve_b = [&](double a, double& sse) {
        double sxy = 0.0, sxx = 0.0;
        for (const auto& [delta, value] : points) {
            const double x = std::log1p(a * delta);
            sxy += x * std::log(value);
            sxx += x * x;
        }
        const double b = -sxy / sxx;
        sse = 0.0;
        for (const auto& [delta, value] : points) {
            const double r = std::log(value) + b * std::log1p(a * delta);
            sse += r * r;
        }
        return b;
    };
    auto objective = [&](double log_a) {
        double sse = 0.0;
        solve_b(std::exp(log_a), sse);
        return sse;
    };

    constexpr double kLogLo = -9.2, kLogHi = 9.2;  // a in [1e-4, 1e4]
    constexpr int kGrid = 737;
    int best = 0;
    double best_val = objective(kLogLo);
    for (int k = 1; k < kGrid; ++k) {
        const double v = objective(kLogLo + (kLogHi - kLogLo) * k / (kGrid - 1));
        if (v < best_val) {
            best_val = v;
            best = k;
        }
    }
    const double step = (kLogHi - kLogLo) / (kGrid - 1);
    const double lo = std::max(kLogLo, kLogLo + (best - 1) * step);
    const double hi = std::min(kLogHi, kLogLo + (best + 1) * step);
    const auto [log_a, sse] = boost::math::tools::brent_find_minima(objective, lo, hi, 52);

    DecouplingLaw law;
    law.a = std::exp(log_a);
    double unused = 0.0;
    law.b = solve_b(law.a, unused);
    law.residual = std::sqrt(sse / static_cast<double>(points.size()));
    law.points = points.size();
    law.delta_min = points.front().first;
    law.delta_max = points.front().first;
    for (const auto& [delta, value] : points) {
        law.delta_min = std::min(law.delta_min, delta);
        law.delta_max = std::max(law.delta_max, delta);
    }
    return law;
}

}  // namespace diamag
