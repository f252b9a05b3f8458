#include "diamag/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diamag/errors.hpp"

namespace diamag {

CircuitParams CircuitParams::with_relative_capacitance(double c) const {
    CircuitParams p = *this;
    p.coupling_capacitance = c * qubit_capacitance;
    return p;
}

void CircuitParams::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(coupling_capacitance) || !positive(qubit_capacitance) || !positive(impedance) ||
        !positive(omega0) || !positive(n_bar)) {
        throw ConfigError("circuit parameters must all be positive and finite");
    }
}

CircuitParams fig4_circuit() {
    CircuitParams p;
    p.qubit_capacitance = 25.0 * units::kFemto;
    p.coupling_capacitance = p.qubit_capacitance;
    p.impedance = 50.0;
    p.omega0 = 2.0 * std::numbers::pi * 7.5 * units::kGiga;
    p.n_bar = 0.5;
    return p;
}

CircuitMapping map_circuit(const CircuitParams& params, double law_coefficient) {
    params.validate();
    const double cc = params.coupling_capacitance;
    const double cs = params.total_capacitance();
    CircuitMapping m;
    m.delta = cc * cc / cs * params.impedance * params.omega0;
    // hbar omega0 d f_k = 2e n_bar (C_c/C_Sigma) sqrt(hbar omega_k / (2 c0 L)) with
    // f_k = sqrt(omega_k v / (2 L omega0^2)) and 1/(c0 v) = Z0.
    m.dipole = cc / cs * 2.0 * params.n_bar *
               std::sqrt(units::kElementaryCharge * units::kElementaryCharge * params.impedance /
                         units::kHbar);
    m.kappa = law_coefficient * params.qubit_capacitance * params.impedance * params.omega0;
    return m;
}

double emission_ratio_no_a2(double c) { return 4.0 * c * c / ((1.0 + c) * (1.0 + c)); }

double emission_ratio(double c, double kappa, double b) {
    const double renorm = (1.0 + 0.5 * kappa) / (1.0 + kappa * c * c / (1.0 + c));
    return emission_ratio_no_a2(c) * std::pow(renorm, b);
}

EmissionCurve emission_curve(const CircuitParams& params, std::span<const double> c_grid,
                             const DecouplingLaw& law) {
    if (c_grid.empty()) throw ConfigError("emission curve needs a nonempty capacitance grid");
    EmissionCurve curve;
    curve.kappa = map_circuit(params, law.a).kappa;
    curve.law_coefficient = law.a;
    curve.law_exponent = law.b;
    for (double c : c_grid) {
        if (!(c > 0.0)) throw ConfigError("relative capacitance must be positive");
        curve.c_grid.push_back(c);
        curve.ratio_with_a2.push_back(emission_ratio(c, curve.kappa, law.b));
        curve.ratio_without_a2.push_back(emission_ratio_no_a2(c));
    }
    return curve;
}

std::vector<double> relative_capacitance_grid(double c_max, std::size_t n) {
    if (!(c_max > 0.0) || n == 0) throw ConfigError("capacitance grid needs c_max > 0 and n > 0");
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = c_max * static_cast<double>(i + 1) / static_cast<double>(n);
    return grid;
}

std::optional<double> emission_peak(double kappa, double b, double c_lo, double c_hi) {
    auto f = [&](double c) { return emission_ratio(c, kappa, b); };
    constexpr int kScan = 2000;
    const double h = (c_hi - c_lo) / kScan;
    int best = 0;
    double best_val = f(c_lo);
    for (int i = 1; i <= kScan; ++i) {
        const double v = f(c_lo + i * h);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best == 0 || best == kScan) return std::nullopt;

    // golden section on the bracketing cells
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = c_lo + (best - 1) * h;
    double bnd = c_lo + (best + 1) * h;
    double x1 = bnd - inv_phi * (bnd - a);
    double x2 = a + inv_phi * (bnd - a);
    double f1 = f(x1), f2 = f(x2);
    while (bnd - a > 1e-12 * std::max(1.0, std::abs(a))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (bnd - a);
            f2 = f(x2);
        } else {
            bnd = x2;
            x2 = x1;
            f2 = f1;
            x1 = bnd - inv_phi * (bnd - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + bnd);
}

EndToEndRatio end_to_end_ratio(const CircuitParams& at_c, const CircuitParams& at_one,
                               const DecouplingLaw& law) {
    at_c.validate();
    at_one.validate();
    if (at_c.qubit_capacitance != at_one.qubit_capacitance || at_c.impedance != at_one.impedance ||
        at_c.omega0 != at_one.omega0 || at_c.n_bar != at_one.n_bar) {
        throw ConfigError("end-to-end ratio needs circuits sharing C_J, Z0, omega0 and n_bar");
    }
    const CircuitMapping mc = map_circuit(at_c, law.a);
    const CircuitMapping m1 = map_circuit(at_one, law.a);
    const double rate_c = mc.dipole * mc.dipole * law.two_pi_alpha(mc.delta);
    const double rate_1 = m1.dipole * m1.dipole * law.two_pi_alpha(m1.delta);
    return {rate_c / rate_1, !law.covers(mc.delta) || !law.covers(m1.delta)};
}

}  // namespace diamag
