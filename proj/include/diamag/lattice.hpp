// lattice.hpp — discretized waveguide with a point-coupled qubit field operator
//
// Dimensionless units throughout: qubit gap = 1, wave speed = 1, hbar = 1.
// The chain Hamiltonian is H = 1/2 q^T A q + 1/2 phi^T B phi on a periodic ring
// of M sites, with the qubit sitting at site 0.

#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace diamag {

enum class CouplingKind {
    Capacitive,  // F = dx^{-1/2} q_0
    Inductive,   // F = dx^{-3/2} (phi_1 - phi_0)
};

std::string_view to_string(CouplingKind kind);
CouplingKind parse_coupling(std::string_view text);  // "cq" / "fq" and long names

// Ten qubit wavelengths: L = 10 * 2*pi*v/omega0.
inline constexpr double kDefaultLength = 20.0 * std::numbers::pi;

struct LatticeConfig {
    std::size_t sites{40};
    double length{kDefaultLength};
    CouplingKind coupling{CouplingKind::Capacitive};
    double delta{0.0};   // weight of the diamagnetic F^2 term
    double dipole{1.0};

    double spacing() const { return length / static_cast<double>(sites); }
    double cutoff() const { return 1.0 / spacing(); }

    // Throws ConfigError unless sites >= 4 and even, length > 0, delta >= 0, dipole >= 0.
    void validate() const;
};

// Non-empty when the lattice cutoff is too low for continuum-like results (cutoff < 10).
std::optional<std::string> cutoff_warning(const LatticeConfig& config);

struct QuadraticModel {
    Eigen::MatrixXd charge_matrix;  // A
    Eigen::MatrixXd flux_matrix;    // B
    Eigen::VectorXd coupling;       // w, with F = w^T q (capacitive) or w^T phi (inductive)
    LatticeConfig config;
};

// Periodic chain with Delta*F^2 folded into A (capacitive) or B (inductive).
QuadraticModel build_chain(const LatticeConfig& config);

}  // namespace diamag
