#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "cqed/circuit.hpp"
#include "cqed/errors.hpp"
#include "cqed/greens.hpp"
#include "cqed/linear.hpp"
#include "cqed/mspt.hpp"
#include "cqed/spectra.hpp"
#include "cqed/volterra.hpp"

using namespace cqed;

namespace {

constexpr double kPi = std::numbers::pi;

CircuitParams gp(double chi_g, double chi_R, double chi_L, double x0,
                 double chi_j = 0.05, double ej_over_ec = 50.0) {
    return derive_params(chi_j, chi_g, chi_R, chi_L, x0, 1.0, ej_over_ec);
}

std::vector<cdouble> plus_state() {
    return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
}

}  // namespace

TEST_CASE("integrate_reduced: input validation") {
    const auto p = gp(0.1, 1e-3, 1e-3, 0.0);
    const auto coeffs = KernelCoefficients::from_modes(p, quasi_modes(p, 5));
    CHECK_THROWS_AS(integrate_reduced(p, coeffs, {1e-3, 2, 1.0}), TruncationTooSmall);
    CHECK_THROWS_AS(integrate_reduced(p, coeffs, {-1e-3, 5, 1.0}), NonPositiveEntry);
    CHECK_THROWS_AS(integrate_reduced(p, coeffs, {1e-3, 5, -1.0}), NonPositiveEntry);
    // Heuristic dt < 0.1 / max frequency.
    CHECK_THROWS_AS(integrate_reduced(p, coeffs, {0.02, 5, 1.0}), StepUnstable);
}

TEST_CASE("integrate_reduced: quadrature initial conditions and harmonic limit") {
    auto p = gp(0.0, 1e-9, 1e-9, 0.0);
    p.eps_d = 0.0;
    const auto coeffs = KernelCoefficients::from_modes(p, quasi_modes(p, 3));
    const IntegratorConfig cfg{2e-4, 5, 0.6};
    const auto traj = integrate_reduced(p, coeffs, cfg);
    const int d = 5;
    Eigen::MatrixXcd x0 = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd y0 = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        x0(n - 1, n) = x0(n, n - 1) = std::sqrt(static_cast<double>(n));
        y0(n - 1, n) = cdouble(0.0, -std::sqrt(static_cast<double>(n)));
        y0(n, n - 1) = cdouble(0.0, std::sqrt(static_cast<double>(n)));
    }
    CHECK((traj.X[0] - x0).cwiseAbs().maxCoeff() == 0.0);
    CHECK((traj.Y[0] - y0).cwiseAbs().maxCoeff() == 0.0);
    // Decoupled harmonic oscillator: X(t) = X0 cos(w t) + Y0 sin(w t).
    const std::size_t k = traj.t.size() / 2;
    const double wt = p.omega_j * traj.t[k];
    // Second-order scheme at omega dt = 4e-3 over ~ 2 periods.
    CHECK((traj.X[k] - x0 * std::cos(wt) - y0 * std::sin(wt)).cwiseAbs().maxCoeff() < 5e-5);
    CHECK(traj.hermiticity_defect < 1e-9);
    // Vacuum quadrature expectation vanishes identically.
    const auto vac = expectation(traj, {1.0});
    for (double v : vac) CHECK(std::abs(v) < 1e-12);
    CHECK_THROWS_AS(expectation(traj, std::vector<cdouble>(6, 0.0)), DimensionMismatch);
}

TEST_CASE("eps_d = 0 with the full kernel reproduces the pole-residue trajectory") {
    auto p = gp(0.1, 1e-3, 1e-3, 0.0);
    p.eps_d = 0.0;
    const auto modes = quasi_modes(p, 15);
    const auto coeffs = KernelCoefficients::from_modes(p, modes);
    const auto m = CharacteristicModel::from_modes(p, modes);
    const auto poles = find_poles(m);
    const auto res = residues(m, poles);
    const double T = 10.0 * 2.0 * kPi / p.omega_j;
    double prev = 0.0;
    for (double dt : {4e-4, 2e-4, 1e-4}) {
        const auto traj = integrate_reduced(p, coeffs, {dt, 5, T});
        const auto ex = expectation(traj, plus_state());
        const auto lin = trajectory_linear(poles, res, 1.0, 0.0, traj.t);
        double md = 0.0;
        for (std::size_t i = 0; i < ex.size(); ++i)
            md = std::max(md, std::abs(ex[i] - lin[i]));
        if (prev > 0.0) CHECK(md < prev / 3.0);  // second-order halving gain
        prev = md;
        CHECK(traj.hermiticity_defect < 1e-9);
    }
    CHECK(prev < 1e-6);  // measured 6.9e-7 at dt = 1e-4
}

TEST_CASE("recursive memory accumulators equal a direct trapezoid history scan") {
    const auto p = gp(0.1, 1e-3, 1e-3, 0.0);
    const auto coeffs = KernelCoefficients::from_modes(p, quasi_modes(p, 10));
    const IntegratorConfig cfg{2e-4, 4, 1000 * 2e-4};
    const auto traj = integrate_reduced(p, coeffs, cfg);
    std::vector<Eigen::MatrixXcd> w;
    w.reserve(traj.X.size());
    for (const auto& x : traj.X) w.push_back(x - p.eps_d * x * x * x);
    const auto direct = memory_direct(coeffs, w, cfg.dt);
    CHECK((direct - traj.memory.back()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("free Duffing: <0|X|1> phase matches the multi-scale element to O(eps^2)") {
    auto p = gp(0.0, 1e-9, 1e-9, 0.0);
    const auto coeffs = KernelCoefficients::from_modes(p, quasi_modes(p, 3));
    const double T = 10.0 * 2.0 * kPi / p.omega_j;
    auto phase_err = [&](double eps) {
        p.eps_d = eps;
        const auto traj = integrate_reduced(p, coeffs, {2e-4, 5, T});
        double worst = 0.0;
        for (std::size_t k = 0; k < traj.t.size(); k += 500) {
            const cdouble elem = traj.X[k](0, 1);
            const cdouble ana =
                quantum_duffing_element(p.omega_j, 0.0, eps, 1, traj.t[k]);
            worst = std::max(worst, std::abs(std::arg(elem / ana)));
        }
        return worst;
    };
    const double eps0 = p.eps_d;  // ~ 0.0333 at Ej/Ec = 50
    const double e1 = phase_err(eps0);
    const double e2 = phase_err(0.5 * eps0);
    const double scale = eps0 * eps0 * p.omega_j * T;
    CHECK(e1 < 8.0 * scale);           // measured constant ~ 6
    CHECK(e2 > e1 / 5.5);              // quadratic, not higher-order, scaling
    CHECK(e2 < e1 / 3.0);
}

TEST_CASE("free Duffing expectation: beat-free bounded oscillation, odd parity") {
    auto p = gp(0.0, 1e-9, 1e-9, 0.0);
    const auto coeffs = KernelCoefficients::from_modes(p, quasi_modes(p, 3));
    const double T = 10.0 * 2.0 * kPi / p.omega_j;
    const auto traj = integrate_reduced(p, coeffs, {2e-4, 5, T});
    const auto ex = expectation(traj, plus_state());
    double amp = 0.0;
    for (double v : ex) amp = std::max(amp, std::abs(v));
    CHECK(amp > 0.9);
    CHECK(amp < 1.1);  // no decay channel, no runaway
    // The cubic term preserves parity: the vacuum expectation stays zero.
    const auto vac = expectation(traj, {1.0});
    for (std::size_t i = 0; i < vac.size(); i += 100) CHECK(std::abs(vac[i]) < 1e-9);
    CHECK(traj.hermiticity_defect < 1e-9);
}
