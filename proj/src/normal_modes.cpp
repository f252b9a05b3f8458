#include "diamag/normal_modes.hpp"

#include <cmath>
#include <sstream>

#include "diamag/errors.hpp"

namespace diamag {

namespace {
constexpr double kZeroTolerance = 1e-10;
}

ModeSet normal_modes(const QuadraticModel& model) {
    const Eigen::Index m = model.charge_matrix.rows();
    if (m < 2 || model.charge_matrix.cols() != m || model.flux_matrix.rows() != m ||
        model.flux_matrix.cols() != m || model.coupling.size() != m) {
        throw ConfigError("quadratic model has inconsistent dimensions");
    }

    Eigen::LLT<Eigen::MatrixXd> llt(model.charge_matrix);
    if (llt.info() != Eigen::Success) {
        throw StabilityError("charge matrix is not positive definite");
    }
    const Eigen::MatrixXd s = llt.matrixL();

    const Eigen::MatrixXd k = s.transpose() * model.flux_matrix * s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (k + k.transpose()));
    if (eig.info() != Eigen::Success) {
        throw StabilityError("eigendecomposition of the flux form failed");
    }
    const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
    const double scale = std::max(std::abs(lambda(m - 1)), 1.0);

    if (lambda(0) < -kZeroTolerance * scale) {
        std::ostringstream os;
        os << "negative mode eigenvalue " << lambda(0) << ": quadratic form is unstable";
        throw StabilityError(os.str());
    }
    Eigen::Index zeros = 0;
    while (zeros < m && lambda(zeros) <= kZeroTolerance * scale) ++zeros;
    if (zeros != 1) {
        throw StabilityError("expected exactly one zero mode, found " + std::to_string(zeros));
    }

    const Eigen::Index n = m - 1;
    const Eigen::MatrixXd u = eig.eigenvectors().rightCols(n);

    ModeSet modes;
    modes.config = model.config;
    modes.frequencies = lambda.tail(n).cwiseSqrt();
    modes.flux_modes = s * u;
    modes.charge_modes = s.transpose().triangularView<Eigen::Upper>().solve(u);
    modes.zero_charge_mode = s * eig.eigenvectors().col(0);

    // Capacitive: F = w^T q = (X^T w) . Q with Q_n = -i sqrt(nu_n/2) (a_n - a_n^dag).
    // Inductive:  F = w^T phi = (Y^T w) . Phi with Phi_n = (a_n + a_n^dag) / sqrt(2 nu_n).
    // The phase of each mode operator is chosen so that f_n >= 0.
    if (model.config.coupling == CouplingKind::Capacitive) {
        const Eigen::VectorXd g = modes.charge_modes.transpose() * model.coupling;
        modes.couplings = g.cwiseAbs().cwiseProduct((0.5 * modes.frequencies).cwiseSqrt());
    } else {
        const Eigen::VectorXd h = modes.flux_modes.transpose() * model.coupling;
        modes.couplings = h.cwiseAbs().cwiseQuotient((2.0 * modes.frequencies).cwiseSqrt());
    }
    return modes;
}

QuadraticModel reconstruct_hamiltonian(const ModeSet& modes) {
    QuadraticModel model;
    model.config = modes.config;
    // q^T A q = Q^T Q with Q = flux_modes^T q (all M modes, including the zero mode)
    model.charge_matrix = modes.flux_modes * modes.flux_modes.transpose() +
                          modes.zero_charge_mode * modes.zero_charge_mode.transpose();
    // phi^T B phi = sum nu_n^2 Phi_n^2 with Phi = charge_modes^T phi
    model.flux_matrix = modes.charge_modes * modes.frequencies.cwiseAbs2().asDiagonal() *
                        modes.charge_modes.transpose();
    model.coupling = build_chain(modes.config).coupling;
    return model;
}

double symplectic_residual(const ModeSet& modes) {
    const Eigen::MatrixXd product = modes.charge_modes.transpose() * modes.flux_modes;
    return (product - Eigen::MatrixXd::Identity(product.rows(), product.cols()))
        .cwiseAbs()
        .maxCoeff();
}

double quadratic_trace(const QuadraticModel& model) {
    return (model.charge_matrix * model.flux_matrix).trace();
}

}  // namespace diamag
