// sweep.hpp — (Delta, M) grid kernels and the decoupling-law sweep
//
// Every grid point is an independent build + diagonalize + fit. The *_serial
// kernels are the reference path; the *_parallel kernels distribute points
// over OpenMP threads and must return identical results in identical order.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diamag/lattice.hpp"
#include "diamag/normal_modes.hpp"
#include "diamag/spectral.hpp"

namespace diamag {

enum class Execution { Serial, Parallel };

struct GridResult {
    LatticeConfig config;
    SpectralFit ohmic;     // exponent pinned to 1; defines alpha
    SpectralFit free;      // exponent fit freely; Ohmicity diagnostic

    double alpha() const;  // ohmic.prefactor / (2 pi d^2)
};

GridResult evaluate_point(const LatticeConfig& config, FitWindow window);

std::vector<ModeSet> diagonalize_serial(std::span<const LatticeConfig> configs);
std::vector<ModeSet> diagonalize_parallel(std::span<const LatticeConfig> configs);
std::vector<ModeSet> diagonalize(std::span<const LatticeConfig> configs, Execution exec);

std::vector<GridResult> evaluate_grid_serial(std::span<const LatticeConfig> configs, FitWindow window);
std::vector<GridResult> evaluate_grid_parallel(std::span<const LatticeConfig> configs, FitWindow window);
std::vector<GridResult> evaluate_grid(std::span<const LatticeConfig> configs, FitWindow window,
                                      Execution exec);

struct SweepOptions {
    std::vector<double> deltas;
    std::vector<std::size_t> sites;
    CouplingKind coupling{CouplingKind::Capacitive};
    double length{kDefaultLength};
    FitWindow window{};
    double dipole{1.0};
    Execution execution{Execution::Parallel};
};

struct AlphaEntry {
    double delta;
    std::size_t sites;
    double spacing;
    double alpha;
    double exponent;  // free-fit exponent of J
};

struct ContinuumEntry {
    double delta;
    double alpha;     // extrapolated to zero spacing
    double exponent;  // extrapolated free-fit exponent
};

struct AlphaSweep {
    CouplingKind coupling{CouplingKind::Capacitive};
    FitWindow window{};
    std::vector<AlphaEntry> entries;         // ordered by (Delta, M)
    std::vector<ContinuumEntry> extrapolated;  // ordered by Delta
    std::optional<DecouplingLaw> law;        // fit over positive extrapolated points
    std::vector<double> excluded_deltas;     // extrapolated alpha <= 0, left out of the law fit
    std::string law_error;                   // set when the law could not be fit

    // Law fit over the per-M values at the finest spacing (diagnostic only).
    std::optional<DecouplingLaw> finest_law;
};

/// Build, diagonalize and fit every (Delta, M) pair, extrapolate alpha and the
/// free exponent to zero spacing per Delta, then fit 2 pi alpha = (1 + a Delta)^-b.
/// Needs >= 3 distinct M values; deltas and sites are sorted and must be unique.
AlphaSweep sweep_delta(const SweepOptions& options);

}  // namespace diamag
