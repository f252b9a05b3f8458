#include "diamag/lattice.hpp"

#include <cmath>
#include <sstream>

#include "diamag/errors.hpp"

namespace diamag {

std::string_view to_string(CouplingKind kind) {
    return kind == CouplingKind::Capacitive ? "cq" : "fq";
}

CouplingKind parse_coupling(std::string_view text) {
    if (text == "cq" || text == "capacitive") return CouplingKind::Capacitive;
    if (text == "fq" || text == "inductive") return CouplingKind::Inductive;
    throw ConfigError("unknown coupling kind '" + std::string(text) + "' (expected cq or fq)");
}

void LatticeConfig::validate() const {
    if (sites < 4 || sites % 2 != 0) {
        throw ConfigError("number of sites must be even and >= 4, got " + std::to_string(sites));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ConfigError("waveguide length must be positive and finite");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw ConfigError("diamagnetic weight must be finite and >= 0");
    }
    if (!(dipole >= 0.0) || !std::isfinite(dipole)) {
        throw ConfigError("dipole must be finite and >= 0");
    }
}

std::optional<std::string> cutoff_warning(const LatticeConfig& config) {
    if (config.cutoff() >= 10.0) return std::nullopt;
    std::ostringstream os;
    os << "lattice cutoff " << config.cutoff() << " < 10 at M=" << config.sites
       << "; results rely on continuum extrapolation";
    return os.str();
}

QuadraticModel build_chain(const LatticeConfig& config) {
    config.validate();
    const auto m = static_cast<Eigen::Index>(config.sites);
    const double dx = config.spacing();
    const double nc2 = config.cutoff() * config.cutoff();

    QuadraticModel model;
    model.config = config;
    model.charge_matrix = Eigen::MatrixXd::Identity(m, m);
    model.flux_matrix = Eigen::MatrixXd::Zero(m, m);
    model.coupling = Eigen::VectorXd::Zero(m);

    // nc^2 (phi_i - phi_{i+1})^2 for every bond of the ring
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index j = (i + 1) % m;
        model.flux_matrix(i, i) += nc2;
        model.flux_matrix(j, j) += nc2;
        model.flux_matrix(i, j) -= nc2;
        model.flux_matrix(j, i) -= nc2;
    }

    // Delta F^2 = 1/2 * (2 Delta) F^2, hence the factor 2 in the matrix entries.
    if (config.coupling == CouplingKind::Capacitive) {
        model.coupling(0) = 1.0 / std::sqrt(dx);
        model.charge_matrix(0, 0) += 2.0 * config.delta / dx;
    } else {
        const double scale = std::pow(dx, -1.5);
        model.coupling(0) = -scale;
        model.coupling(1) = scale;
        const double extra = 2.0 * config.delta / (dx * dx * dx);
        model.flux_matrix(0, 0) += extra;
        model.flux_matrix(1, 1) += extra;
        model.flux_matrix(0, 1) -= extra;
        model.flux_matrix(1, 0) -= extra;
    }
    return model;
}

}  // namespace diamag
