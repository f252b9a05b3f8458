// normal_modes.hpp — canonical diagonalization of the chain into decoupled oscillators

#pragma once

#include <Eigen/Dense>

#include "diamag/lattice.hpp"

namespace diamag {

/// Normal-mode decomposition of a QuadraticModel.
///
/// With A = S S^T (Cholesky) and S^T B S = U diag(nu^2) U^T, the mode
/// quadratures are related to the site variables by
///   q   = charge_modes * Q,      phi = flux_modes * Phi,
///   charge_modes = S^{-T} U,     flux_modes = S U,
/// so that charge_modes^T flux_modes = 1 (the canonical condition for a
/// transformation that does not mix q and phi). The periodic chain always has
/// one zero-frequency uniform-flux mode; it is kept apart from the retained
/// modes and only used to rebuild A.
struct ModeSet {
    Eigen::VectorXd frequencies;   // ascending, strictly positive, length M-1
    Eigen::VectorXd couplings;     // f_n >= 0, with F = sum_n f_n (a_n + a_n^dag)
    Eigen::MatrixXd charge_modes;  // M x (M-1)
    Eigen::MatrixXd flux_modes;    // M x (M-1)
    Eigen::VectorXd zero_charge_mode;  // flux_modes column of the projected zero mode
    LatticeConfig config;

    Eigen::Index size() const { return frequencies.size(); }
};

/// Diagonalize the chain. Throws StabilityError if A is not positive definite,
/// if S^T B S has an eigenvalue below -1e-10 * max eigenvalue, or if the
/// number of eigenvalues within that tolerance of zero is not exactly one.
ModeSet normal_modes(const QuadraticModel& model);

/// Rebuild A and B from a ModeSet (round-trip check).
QuadraticModel reconstruct_hamiltonian(const ModeSet& modes);

/// max |charge_modes^T flux_modes - 1| over all entries.
double symplectic_residual(const ModeSet& modes);

/// trace(A B); equals the sum of squared mode frequencies.
double quadratic_trace(const QuadraticModel& model);

}  // namespace diamag
