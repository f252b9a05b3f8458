#include "diamag/sweep.hpp"

#include <algorithm>
#include <exception>
#include <numbers>


#include "diamag/errors.hpp"

namespace diamag {

double GridResult::alpha() const {
    return ohmic.prefactor / (2.0 * std::numbers::pi * config.dipole * config.dipole);
}

GridResult evaluate_point(const LatticeConfig& config, FitWindow window) {
    const ModeSet modes = normal_modes(build_chain(config));
    const CumulativeCurve curve = cumulative_coupling(modes, config.dipole);
    return GridResult{config, fit_power_law(curve, window, 1.0), fit_power_law(curve, window)};
}

namespace {

template <typename Result, typename Fn>
std::vector<Result> map_serial(std::span<const LatticeConfig> configs, Fn&& fn) {
    std::vector<Result> out;
    out.reserve(configs.size());
    for (const auto& c : configs) out.push_back(fn(c));
    return out;
}

template <typename Result, typename Fn>
std::vector<Result> map_parallel(std::span<const LatticeConfig> configs, Fn&& fn) {
    const auto n = static_cast<std::ptrdiff_t>(configs.size());
    std::vector<std::optional<Result>> slots(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            slots[k].emplace(fn(configs[k]));
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }

    std::vector<Result> out;
    out.reserve(configs.size());
    for (std::size_t k = 0; k < slots.size(); ++k) {
        if (errors[k]) std::rethrow_exception(errors[k]);
        out.push_back(std::move(*slots[k]));
    }
    return out;
}

auto diagonalize_one = [](const LatticeConfig& c) { return normal_modes(build_chain(c)); };

}  // namespace

std::vector<ModeSet> diagonalize_serial(std::span<const LatticeConfig> configs) {
    return map_serial<ModeSet>(configs, diagonalize_one);
}

std::vector<ModeSet> diagonalize_parallel(std::span<const LatticeConfig> configs) {
    return map_parallel<ModeSet>(configs, diagonalize_one);
}

std::vector<ModeSet> diagonalize(std::span<const LatticeConfig> configs, Execution exec) {
    return exec == Execution::Serial ? diagonalize_serial(configs) : diagonalize_parallel(configs);
}

std::vector<GridResult> evaluate_grid_serial(std::span<const LatticeConfig> configs, FitWindow window) {
    return map_serial<GridResult>(configs, [&](const LatticeConfig& c) { return evaluate_point(c, window); });
}

std::vector<GridResult> evaluate_grid_parallel(std::span<const LatticeConfig> configs, FitWindow window) {
    return map_parallel<GridResult>(configs,
                                    [&](const LatticeConfig& c) { return evaluate_point(c, window); });
}

std::vector<GridResult> evaluate_grid(std::span<const LatticeConfig> configs, FitWindow window,
                                      Execution exec) {
    return exec == Execution::Serial ? evaluate_grid_serial(configs, window)
                                     : evaluate_grid_parallel(configs, window);
}

AlphaSweep sweep_delta(const SweepOptions& options) {
    std::vector<double> deltas = options.deltas;
    std::vector<std::size_t> sites = options.sites;
    std::sort(deltas.begin(), deltas.end());
    std::sort(sites.begin(), sites.end());
    if (deltas.empty()) throw ConfigError("sweep needs at least one Delta");
    if (std::adjacent_find(deltas.begin(), deltas.end()) != deltas.end()) {
        throw ConfigError("duplicate Delta in sweep");
    }
    if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
        throw ConfigError("duplicate M in sweep");
    }
    if (sites.size() < 3) throw ConfigError("continuum extrapolation needs at least three values of M");

    std::vector<LatticeConfig> configs;
    configs.reserve(deltas.size() * sites.size());
    for (double delta : deltas) {
        for (std::size_t m : sites) {
            LatticeConfig c;
            c.sites = m;
            c.length = options.length;
            c.coupling = options.coupling;
            c.delta = delta;
            c.dipole = options.dipole;
            c.validate();
            configs.push_back(c);
        }
    }

    const auto results = evaluate_grid(configs, options.window, options.execution);

    AlphaSweep sweep;
    sweep.coupling = options.coupling;
    sweep.window = options.window;
    std::vector<std::pair<double, double>> law_points;
    std::vector<std::pair<double, double>> finest_points;

    for (std::size_t d = 0; d < deltas.size(); ++d) {
        std::vector<std::pair<double, double>> alpha_series;
        std::vector<std::pair<double, double>> exponent_series;
        for (std::size_t k = 0; k < sites.size(); ++k) {
            const GridResult& r = results[d * sites.size() + k];
            const double dx = r.config.spacing();
            sweep.entries.push_back({deltas[d], sites[k], dx, r.alpha(), r.free.exponent});
            alpha_series.emplace_back(dx, r.alpha());
            exponent_series.emplace_back(dx, r.free.exponent);
        }
        const ContinuumEntry ce{deltas[d], extrapolate_continuum(alpha_series),
                                extrapolate_continuum(exponent_series)};
        sweep.extrapolated.push_back(ce);
        if (ce.alpha > 0.0) {
            law_points.emplace_back(ce.delta, 2.0 * std::numbers::pi * ce.alpha);
        } else {
            sweep.excluded_deltas.push_back(ce.delta);
        }
        finest_points.emplace_back(deltas[d], 2.0 * std::numbers::pi * alpha_series.back().second);
    }

    try {
        sweep.law = fit_decoupling_law(law_points);
    } catch (const FitError& e) {
        sweep.law_error = e.what();
    }
    try {
        sweep.finest_law = fit_decoupling_law(finest_points);
    } catch (const FitError&) {
    }
    return sweep;
}

}  // namespace diamag
