#include <doctest.h>

#include "diamag/errors.hpp"
#include "diamag/lattice.hpp"

using namespace diamag;

namespace {
LatticeConfig small(double delta, CouplingKind kind) {
    LatticeConfig c;
    c.sites = 4;
    c.length = 0.4;  // dx = 0.1
    c.delta = delta;
    c.coupling = kind;
    return c;
}

Eigen::MatrixXd ring4() {
    Eigen::MatrixXd r(4, 4);
    r << 2, -1, 0, -1,
        -1, 2, -1, 0,
        0, -1, 2, -1,
        -1, 0, -1, 2;
    return r;
}
}  // namespace

TEST_CASE("bare chain is identity charge form and periodic second difference") {
    const auto model = build_chain(small(0.0, CouplingKind::Capacitive));
    const double nc2 = 100.0;
    CHECK((model.charge_matrix - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
    CHECK((model.flux_matrix - nc2 * ring4()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(model.coupling(0) == doctest::Approx(1.0 / std::sqrt(0.1)));
    CHECK(model.coupling.tail(3).norm() == 0.0);
}

TEST_CASE("capacitive diamagnetic term touches one diagonal entry of A") {
    const auto bare = build_chain(small(0.0, CouplingKind::Capacitive));
    const auto model = build_chain(small(0.5, CouplingKind::Capacitive));
    CHECK(model.charge_matrix(0, 0) == doctest::Approx(11.0));
    Eigen::MatrixXd diff = model.charge_matrix - bare.charge_matrix;
    diff(0, 0) = 0.0;
    CHECK(diff.norm() == 0.0);
    CHECK((model.flux_matrix - bare.flux_matrix).norm() == 0.0);
}

TEST_CASE("inductive diamagnetic term is a rank-one bond form on B") {
    const auto bare = build_chain(small(0.0, CouplingKind::Inductive));
    const auto model = build_chain(small(0.5, CouplingKind::Inductive));
    CHECK((model.charge_matrix - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
    const Eigen::MatrixXd diff = model.flux_matrix - bare.flux_matrix;
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
    expected.topLeftCorner(2, 2) << 1000, -1000, -1000, 1000;
    CHECK((diff - expected).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(model.coupling(0) == doctest::Approx(-std::pow(0.1, -1.5)));
    CHECK(model.coupling(1) == doctest::Approx(std::pow(0.1, -1.5)));
}

TEST_CASE("matrices are exactly symmetric and annihilate the uniform flux") {
    for (auto kind : {CouplingKind::Capacitive, CouplingKind::Inductive}) {
        for (double delta : {0.0, 0.3, 7.0}) {
            LatticeConfig c;
            c.sites = 12;
            c.coupling = kind;
            c.delta = delta;
            const auto m = build_chain(c);
            CHECK((m.charge_matrix - m.charge_matrix.transpose()).norm() == 0.0);
            CHECK((m.flux_matrix - m.flux_matrix.transpose()).norm() == 0.0);
            const Eigen::VectorXd ones = Eigen::VectorXd::Ones(12);
            CHECK((m.flux_matrix * ones).cwiseAbs().maxCoeff() < 1e-9 * m.flux_matrix.norm());
        }
    }
}

TEST_CASE("invalid configurations are rejected") {
    LatticeConfig c;
    c.sites = 5;
    CHECK_THROWS_AS(build_chain(c), ConfigError);
    c.sites = 2;
    CHECK_THROWS_AS(build_chain(c), ConfigError);
    c.sites = 8;
    c.delta = -0.1;
    CHECK_THROWS_AS(build_chain(c), ConfigError);
    c.delta = 0.0;
    c.length = 0.0;
    CHECK_THROWS_AS(build_chain(c), ConfigError);
    CHECK_THROWS_AS(parse_coupling("xq"), ConfigError);
    CHECK(parse_coupling("fq") == CouplingKind::Inductive);
}

TEST_CASE("cutoff warning below ten") {
    LatticeConfig c;
    c.sites = 40;
    CHECK(c.spacing() == doctest::Approx(kDefaultLength / 40));
    CHECK(cutoff_warning(c).has_value());
    c.sites = 1024;
    CHECK_FALSE(cutoff_warning(c).has_value());
}
