// spectral.hpp — cumulative coupling, power-law fits and continuum extrapolation

#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "diamag/normal_modes.hpp"

namespace diamag {

struct FitWindow {
    double lo{0.2};
    double hi{2.0};
};

// D(nu) = 2 pi sum_{nu_n <= nu} d^2 f_n^2 sampled at each distinct mode frequency.
//
// d_values holds the right limit of the staircase at each sample. When
// step_weights is non-empty it holds the jump at each sample; the fit then uses
// the step midpoints d - step/2 of the samples that carry weight. An empty
// step_weights marks an already-smooth curve whose d_values are fit directly.
struct CumulativeCurve {
    std::vector<double> nu_grid;
    std::vector<double> d_values;
    std::vector<double> step_weights;

    double value_at(double nu) const;

    // (nu, D) pairs used for fitting, in ascending nu.
    std::vector<std::pair<double, double>> fit_samples() const;
};

CumulativeCurve cumulative_coupling(const ModeSet& modes, double dipole);

// J(nu) = prefactor * nu^exponent, obtained by differentiating D = C nu^(s+1).
struct SpectralFit {
    double prefactor{0.0};
    double exponent{1.0};
    FitWindow window{};
    double residual{0.0};   // rms relative error of the D fit
    std::size_t samples{0};

    double spectral_density(double nu) const;
    double cumulative(double nu) const;
};

inline constexpr std::size_t kMinFitSamples = 10;

/// Log-log least squares on the window. With fixed_exponent set, only the
/// prefactor is fit (the exponent of J is pinned, e.g. to 1 for the Ohmic form).
/// Throws FitError with fewer than kMinFitSamples samples or nonpositive data.
SpectralFit fit_power_law(const CumulativeCurve& curve, FitWindow window,
                          std::optional<double> fixed_exponent = std::nullopt);

/// Least squares fit value = v0 + c1 dx + c2 dx^2, returning v0.
/// Requires at least three distinct spacings.
double extrapolate_continuum(std::span<const std::pair<double, double>> series);

// 2 pi alpha(Delta) = (1 + a Delta)^(-b)
struct DecouplingLaw {
    double a{6.77};
    double b{2.57};
    double residual{0.0};    // rms error in log(2 pi alpha)
    double delta_min{0.0};
    double delta_max{0.0};
    std::size_t points{0};

    double two_pi_alpha(double delta) const;
    bool covers(double delta) const { return delta >= delta_min && delta <= delta_max; }
};

inline constexpr DecouplingLaw kPaperLaw{6.77, 2.57, 0.0, 0.0, 2.0, 0};

/// Fit the decoupling law in log space: a by 1-D minimization over log a,
/// b by linear regression through the origin. Points with non-positive values
/// are rejected with FitError; at least three points with two distinct
/// nonzero Delta are required.
DecouplingLaw fit_decoupling_law(std::span<const std::pair<double, double>> delta_two_pi_alpha);

}  // namespace diamag
