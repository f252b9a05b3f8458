// circuit.hpp — transmon-over-line parameters and spontaneous-emission ratios
//
// SI inputs (farads, ohms, rad/s). Delta and kappa are products C * Z0 * omega0
// and are dimensionless as evaluated.

#pragma once

#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "diamag/spectral.hpp"

namespace diamag {

namespace units {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kFemto = 1e-15;
inline constexpr double kGiga = 1e9;
}  // namespace units

struct CircuitParams {
    double coupling_capacitance{25e-15};  // C_c
    double qubit_capacitance{25e-15};     // C_J
    double impedance{50.0};               // Z0
    double omega0{2.0 * std::numbers::pi * 7.5e9};
    double n_bar{0.5};

    double total_capacitance() const { return coupling_capacitance + qubit_capacitance; }
    double relative_capacitance() const { return coupling_capacitance / qubit_capacitance; }

    // Same line and qubit, coupling capacitance set to c * C_J.
    CircuitParams with_relative_capacitance(double c) const;

    void validate() const;  // ConfigError unless every field is > 0
};

// Suspended transmon over a 50 ohm line at 7.5 GHz, C_J = 25 fF, c = 1.
CircuitParams fig4_circuit();

struct CircuitMapping {
    double dipole;  // d, in units where the field weights satisfy f_k^2 = nu_k / (2 L)
    double delta;   // Delta = C_c^2 / C_Sigma * Z0 * omega0
    double kappa;   // a * C_J * Z0 * omega0
};

CircuitMapping map_circuit(const CircuitParams& params, double law_coefficient = kPaperLaw.a);

// 4 c^2/(1+c)^2 * [(1 + kappa/2) / (1 + kappa c^2/(1+c))]^b
double emission_ratio(double c, double kappa, double b);

// 4 c^2/(1+c)^2
double emission_ratio_no_a2(double c);

struct EmissionCurve {
    std::vector<double> c_grid;
    std::vector<double> ratio_with_a2;
    std::vector<double> ratio_without_a2;
    double kappa{0.0};
    double law_exponent{kPaperLaw.b};
    double law_coefficient{kPaperLaw.a};
};

EmissionCurve emission_curve(const CircuitParams& params, std::span<const double> c_grid,
                             const DecouplingLaw& law = kPaperLaw);

// Uniform grid of n points on (0, c_max]: c_max/n, 2 c_max/n, ..., c_max.
std::vector<double> relative_capacitance_grid(double c_max, std::size_t n);

/// Location of the maximum of emission_ratio(c, kappa, b) on [c_lo, c_hi]:
/// dense scan followed by golden-section refinement. Returns nullopt when the
/// maximum sits on an end of the interval (no interior maximum).
std::optional<double> emission_peak(double kappa, double b, double c_lo = 1e-3, double c_hi = 10.0);

struct EndToEndRatio {
    double ratio;
    bool extrapolated;  // Delta(c) or Delta(1) outside the law's fitted range
};

/// gamma(c)/gamma(1) from first principles: d^2 alpha(Delta) at each circuit,
/// with alpha from the decoupling law. Both circuits must share C_J, Z0, omega0, n_bar.
EndToEndRatio end_to_end_ratio(const CircuitParams& at_c, const CircuitParams& at_one,
                               const DecouplingLaw& law);

}  // namespace diamag
