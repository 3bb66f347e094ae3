#include <doctest.h>

#include <cmath>

#include "cqed/circuit.hpp"
#include "cqed/errors.hpp"

using namespace cqed;

TEST_CASE("derive_params populates derived constants") {
    const auto p = derive_params(0.05, 0.05, 0.0, 0.0, 0.25, 1.0, 50.0);
    CHECK(p.chi_s == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(p.gamma == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.omega_j == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(p.eps == doctest::Approx(1.0 / std::sqrt(50.0)).epsilon(1e-12));
    CHECK(p.eps_d == doctest::Approx(std::sqrt(2.0) * p.eps / 6.0).epsilon(1e-12));
    CHECK(p.phi_zpf * p.phi_zpf == doctest::Approx(std::sqrt(2.0) * p.eps).epsilon(1e-12));
}

TEST_CASE("derive_params zero coupling limit") {
    const auto p = derive_params(0.05, 0.0, 0.0, 0.0, 0.0, 1.0, 50.0);
    CHECK(p.gamma == 0.0);
    CHECK(p.chi_s == 0.0);
}

TEST_CASE("derive_params validates inputs") {
    CHECK_THROWS_AS(derive_params(0.05, 0.05, 0, 0, 0.5, -1.0, 50.0), NonPositiveEnergy);
    CHECK_THROWS_AS(derive_params(0.05, 0.05, 0, 0, 0.5, 1.0, 0.0), NonPositiveEnergy);
    CHECK_THROWS_AS(derive_params(0.05, 0.05, 0, 0, 1.5, 1.0, 50.0), OutOfRangePosition);
    CHECK_THROWS_AS(derive_params(-0.05, 0.05, 0, 0, 0.5, 1.0, 50.0), InputError);
}

TEST_CASE("derive_params is idempotent over its raw fields") {
    const auto p = derive_params(0.07, 0.21, 1e-3, 2e-3, 0.1, 0.8, 42.0);
    const auto q = derive_params(p.chi_j, p.chi_g, p.chi_R, p.chi_L, p.x0, p.Ec, p.Ej);
    CHECK(q.chi_s == p.chi_s);
    CHECK(q.gamma == p.gamma);
    CHECK(q.omega_j == p.omega_j);
    CHECK(q.eps_d == p.eps_d);
}

TEST_CASE("coupling_saturation monotone and bounded by chi_j") {
    const double chi_j = 0.05;
    CHECK(coupling_saturation(chi_j, 0.0) == 0.0);
    CHECK(coupling_saturation(chi_j, chi_j) == doctest::Approx(chi_j / 4.0));
    double prev = 0.0;
    for (double chi_g = 0.01; chi_g < 100.0; chi_g *= 1.7) {
        const double v = coupling_saturation(chi_j, chi_g);
        CHECK(v > prev);
        CHECK(v < chi_j);
        prev = v;
    }
    CHECK(coupling_saturation(chi_j, 1e9) == doctest::Approx(chi_j).epsilon(1e-6));
    // gamma * chi_s always below chi_j, consistent with derive_params.
    const auto p = derive_params(chi_j, 0.3, 0, 0, 0.0, 1.0, 50.0);
    CHECK(p.gamma * p.chi_s == doctest::Approx(coupling_saturation(chi_j, 0.3)));
    CHECK(p.gamma * p.chi_s < chi_j);
}
