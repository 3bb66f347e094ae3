#include "cqed/mspt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

constexpr cdouble kI{0.0, 1.0};

void check_state(const std::vector<cdouble>& state) {
    if (state.empty()) throw DimensionMismatch("qubit amplitude vector is empty");
    double norm = 0.0;
    for (const cdouble& c : state) norm += std::norm(c);
    if (std::abs(norm - 1.0) > 1e-9)
        throw NonProductState("qubit amplitude vector is not normalized");
}

}  // namespace

HybridBasis hybridize(const CircuitParams& params, const QuasiModeSet& modes) {
    const std::size_t n = modes.size();
    const std::vector<double> g = couplings(params, modes);
    const KernelCoefficients coeffs = KernelCoefficients::from_modes(params, modes);
    // Transmon diagonal entry: the bare omega_j^2 renormalized by the kernel
    // background. With S_00 = omega_j^2 (1 - gamma + c_0 + sum_n M_n) the
    // kappa -> 0 secular equation of this arrow matrix,
    //   beta^2 = S_00 + sum_n M_n omega_j^2 nu_n^2 / (beta^2 - nu_n^2),
    // coincides term by term with the root condition of the characteristic
    // bracket at the same truncation (their per-mode difference is exactly
    // M_n omega_j^2), so the normal-mode frequencies track the linear poles
    // instead of drifting by the truncated tail sum_{m>N} M_m.
    double background = 1.0 - params.gamma + coeffs.zero_mode;
    for (std::size_t i = 0; i < n; ++i) background += coeffs.M[i];
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n + 1, n + 1);
    s(0, 0) = params.omega_j * params.omega_j * background;
    for (std::size_t i = 0; i < n; ++i) {
        s(i + 1, i + 1) = modes.nu(i) * modes.nu(i);
        s(0, i + 1) = s(i + 1, 0) = 2.0 * g[i] * std::sqrt(params.omega_j * modes.nu(i));
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    const Eigen::VectorXd ev = solver.eigenvalues();
    const Eigen::MatrixXd vec = solver.eigenvectors();
    if (ev(0) <= 0.0)
        throw NonPositiveEigenvalue(
            "quadratic sector has a non-positive normal frequency (overcoupled)");

    // Qubit-like column: largest transmon-row weight; the rest keep their
    // ascending-frequency order and line up with the resonator-like poles.
    std::size_t jcol = 0;
    for (std::size_t c = 1; c <= n; ++c)
        if (std::abs(vec(0, c)) > std::abs(vec(0, jcol))) jcol = c;
    std::vector<std::size_t> order{jcol};
    for (std::size_t c = 0; c <= n; ++c)
        if (c != jcol) order.push_back(c);

    HybridBasis basis;
    basis.omega_j = params.omega_j;
    basis.eps_d = params.eps_d;
    basis.beta.resize(n + 1);
    basis.u.resize(n + 1);
    basis.U.assign(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t l = 0; l <= n; ++l) {
        const std::size_t c = order[l];
        basis.beta[l] = std::sqrt(ev(c));
        // Sign convention: dominant component positive.
        Eigen::Index peak = 0;
        vec.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff(&peak);
        const double sign = vec(peak, c) >= 0.0 ? 1.0 : -1.0;
        for (std::size_t r = 0; r <= n; ++r) basis.U[r][l] = sign * vec(r, c);
        basis.u[l] = basis.U[0][l];
    }

    const auto poles = find_poles(CharacteristicModel::from_modes(params, modes));
    basis.alpha.resize(n + 1);
    basis.alpha[0] = poles.alpha_j();
    for (std::size_t i = 0; i < n; ++i) basis.alpha[i + 1] = -poles.p_n[i].real();
    return basis;
}

cdouble KerrCorrection::shift(const HybridBasis& basis, std::size_t l, double t) const {
    const double ul2 = basis.u[l] * basis.u[l];
    double bracket = ul2 * ul2 * h_bar[l] * std::exp(-2.0 * basis.alpha[l] * t);
    for (std::size_t m = 0; m < basis.size(); ++m) {
        if (m == l) continue;
        const double um2 = basis.u[m] * basis.u[m];
        bracket += 2.0 * ul2 * um2 * h_bar[m] * std::exp(-2.0 * basis.alpha[m] * t);
    }
    return kI * (1.5 * basis.eps_d) * basis.omega_j * bracket;
}

KerrCorrection corrected_poles(const HybridBasis& basis,
                               const std::vector<cdouble>& qubit_state) {
    check_state(qubit_state);
    const double hq = state_h(qubit_state);
    KerrCorrection corr;
    corr.h_bar.resize(basis.size());
    // Rows are orthonormal columns of U, so sum_r U[r][l]^2 = 1 and the bare
    // expectations <H_qubit> = hq, <H_n> = 1/2 (photon vacuum) combine to
    // 1/2 + U[0][l]^2 (hq - 1/2).
    for (std::size_t l = 0; l < basis.size(); ++l)
        corr.h_bar[l] = 0.5 + basis.U[0][l] * basis.U[0][l] * (hq - 0.5);
    return corr;
}

double classical_duffing(double omega, double kappa, double eps_d, double X0,
                         double Y0, double t) {
    if (eps_d > 0.0) {
        const double energy = 0.5 * Y0 * Y0 + 0.5 * (X0 * X0 - eps_d * X0 * X0 * X0 * X0);
        if (energy >= 5.0 / (36.0 * eps_d))
            throw UnboundedInitialCondition("initial energy exceeds the Duffing well");
    }
    const cdouble a0 = 0.5 * cdouble(X0, Y0);
    const double wbar =
        omega * (1.0 - 1.5 * eps_d * std::norm(a0) * std::exp(-kappa * t));
    return std::exp(-0.5 * kappa * t) * 2.0 * (a0 * std::exp(-kI * wbar * t)).real();
}

cdouble quantum_duffing_element(double omega, double kappa, double eps_d, int n,
                                double t) {
    if (n < 1) throw DimensionMismatch("matrix element needs n >= 1");
    const double wbar =
        omega * (1.0 - 1.5 * static_cast<double>(n) * eps_d * std::exp(-kappa * t));
    return std::sqrt(static_cast<double>(n)) * std::exp(-0.5 * kappa * t) *
           std::exp(-kI * wbar * t);
}

std::vector<double> trajectory_mspt(const HybridBasis& basis,
                                    const KerrCorrection& corr,
                                    const PoleSet& poles, const ResidueSet& res,
                                    const std::vector<cdouble>& qubit_state,
                                    const std::vector<double>& t_grid) {
    check_state(qubit_state);
    if (basis.size() != poles.p_n.size() + 1)
        throw DimensionMismatch("hybrid basis and pole set disagree in mode count");
    const double x0 = state_x(qubit_state);
    const double y0 = state_y(qubit_state);
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        cdouble acc = (res.Aj_X * x0 + res.Aj_Y * y0) *
                      std::exp((poles.p_j + corr.shift(basis, 0, t)) * t);
        for (std::size_t n = 0; n < poles.p_n.size(); ++n)
            acc += (res.An_X[n] * x0 + res.An_Y[n] * y0) *
                   std::exp((poles.p_n[n] + corr.shift(basis, n + 1, t)) * t);
        out.push_back(2.0 * acc.real());
    }
    return out;
}

double state_x(const std::vector<cdouble>& state) {
    cdouble a = 0.0;
    for (std::size_t n = 0; n + 1 < state.size(); ++n)
        a += std::conj(state[n]) * state[n + 1] * std::sqrt(static_cast<double>(n + 1));
    return 2.0 * a.real();
}

double state_y(const std::vector<cdouble>& state) {
    cdouble a = 0.0;
    for (std::size_t n = 0; n + 1 < state.size(); ++n)
        a += std::conj(state[n]) * state[n + 1] * std::sqrt(static_cast<double>(n + 1));
    return 2.0 * a.imag();
}

double state_h(const std::vector<cdouble>& state) {
    double h = 0.0;
    for (std::size_t n = 0; n < state.size(); ++n)
        h += std::norm(state[n]) * (static_cast<double>(n) + 0.5);
    return h;
}

std::vector<double> fourier_magnitude(const std::vector<double>& series, double dt,
                                      const std::vector<double>& omega_grid) {
    std::vector<double> out;
    out.reserve(omega_grid.size());
    for (double w : omega_grid) {
        cdouble acc = 0.0;
        for (std::size_t k = 0; k < series.size(); ++k)
            acc += series[k] * std::exp(-kI * w * (dt * static_cast<double>(k)));
        out.push_back(std::abs(acc) * dt);
    }
    return out;
}

}  // namespace cqed
