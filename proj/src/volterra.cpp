#include "cqed/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

constexpr cdouble kI{0.0, 1.0};

// Hermitian part extraction for sums of (complex scalar) x (Hermitian matrix):
// (M - M^dag) / 2i picks out the imaginary parts of the scalar weights.
Eigen::MatrixXcd im_part(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()) / (2.0 * kI);
}

struct MemoryBank {
    std::vector<cdouble> z;      // -kappa_n + i nu_n
    std::vector<cdouble> phase;  // -A_n e^{i (theta_n - 2 delta_n)}
    std::vector<Eigen::MatrixXcd> J;

    MemoryBank(const KernelCoefficients& c, int d) {
        z.reserve(c.size());
        phase.reserve(c.size());
        for (std::size_t n = 0; n < c.size(); ++n) {
            z.push_back(cdouble(-c.kappa[n], c.nu[n]));
            phase.push_back(-c.A[n] * std::exp(kI * (c.theta[n] - 2.0 * c.delta[n])));
        }
        J.assign(c.size(), Eigen::MatrixXcd::Zero(d, d));
    }

    Eigen::MatrixXcd eval() const {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(J.empty() ? 0 : J[0].rows(),
                                                      J.empty() ? 0 : J[0].cols());
        for (std::size_t n = 0; n < J.size(); ++n) acc += im_part(phase[n] * J[n]);
        return acc;
    }

    // Trapezoid step of J_n(t) = Int_0^t e^{z_n (t - t')} W(t') dt' by h.
    void advance(double h, const Eigen::MatrixXcd& w_old,
                 const Eigen::MatrixXcd& w_new) {
        for (std::size_t n = 0; n < J.size(); ++n) {
            const cdouble e = std::exp(z[n] * h);
            J[n] = e * J[n] + 0.5 * h * (w_new + e * w_old);
        }
    }
};

}  // namespace

OperatorTrajectory integrate_reduced(const CircuitParams& params,
                                     const KernelCoefficients& coeffs,
                                     const IntegratorConfig& cfg) {
    if (cfg.d < 3) throw TruncationTooSmall("Fock truncation d must be at least 3");
    if (cfg.dt <= 0.0 || cfg.T <= 0.0)
        throw NonPositiveEntry("step size and horizon must be positive");
    double max_freq = params.omega_j;
    for (std::size_t n = 0; n < coeffs.size(); ++n)
        max_freq = std::max(max_freq, coeffs.nu[n]);
    if (cfg.dt >= 0.1 / max_freq)
        throw StepUnstable("step size violates the dt < 0.1/max frequency heuristic");

    const int d = cfg.d;
    const double wj2 = params.omega_j * params.omega_j;
    const double eps = params.eps_d;
    const double restoring = wj2 * (1.0 - params.gamma + kernel_ik1(coeffs));
    const double fric = wj2 * coeffs.friction;

    Eigen::MatrixXcd x0 = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd y0 = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        const double r = std::sqrt(static_cast<double>(n));
        x0(n - 1, n) = r;
        x0(n, n - 1) = r;
        y0(n - 1, n) = -kI * r;
        y0(n, n - 1) = kI * r;
    }

    auto cubic_shift = [&](const Eigen::MatrixXcd& x) -> Eigen::MatrixXcd {
        if (eps == 0.0) return x;
        return x - eps * (x * x * x);
    };

    const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
    const double h = cfg.dt;
    const double norm0 = x0.norm();

    OperatorTrajectory traj;
    traj.d = d;
    traj.t.reserve(steps + 1);
    traj.X.reserve(steps + 1);
    traj.Y.reserve(steps + 1);
    traj.memory.reserve(steps + 1);

    Eigen::MatrixXcd x = x0;
    // Impulsive correction from the kernel-tail friction (see header).
    Eigen::MatrixXcd v = params.omega_j * y0 - fric * x0;
    MemoryBank bank(coeffs, d);

    auto accel = [&](const Eigen::MatrixXcd& xx, const Eigen::MatrixXcd& vv,
                     const Eigen::MatrixXcd& mem) -> Eigen::MatrixXcd {
        return -restoring * cubic_shift(xx) - fric * vv - wj2 * mem;
    };

    for (int k = 0; k <= steps; ++k) {
        const Eigen::MatrixXcd mem_k = bank.eval();
        traj.t.push_back(k * h);
        traj.X.push_back(x);
        traj.Y.push_back(v / params.omega_j);
        traj.memory.push_back(mem_k);
        traj.hermiticity_defect =
            std::max(traj.hermiticity_defect,
                     (x - x.adjoint()).cwiseAbs().maxCoeff());
        if (x.norm() > 1e3 * norm0)
            throw StepUnstable("operator norm grew beyond 1e3 of its initial value");
        if (k == steps) break;

        const Eigen::MatrixXcd w_k = cubic_shift(x);
        const Eigen::MatrixXcd f_k = accel(x, v, mem_k);

        // Midpoint prediction, with the memory accumulators advanced by a
        // trapezoid half-step on a throwaway copy.
        const Eigen::MatrixXcd x_m = x + 0.5 * h * v;
        const Eigen::MatrixXcd v_m = v + 0.5 * h * f_k;
        MemoryBank half = bank;
        half.advance(0.5 * h, w_k, cubic_shift(x_m));
        const Eigen::MatrixXcd f_m = accel(x_m, v_m, half.eval());

        const Eigen::MatrixXcd x_p = x + h * v_m;
        const Eigen::MatrixXcd v_p = v + h * f_m;

        // Trapezoid correction with the memory evaluated at the predicted
        // endpoint.
        MemoryBank pred = bank;
        pred.advance(h, w_k, cubic_shift(x_p));
        const Eigen::MatrixXcd f_p = accel(x_p, v_p, pred.eval());
        const Eigen::MatrixXcd x_new = x + 0.5 * h * (v + v_p);
        v += 0.5 * h * (f_k + f_p);
        x = x_new;

        // Finalize the accumulators with the corrected endpoint so the stored
        // history matches a plain trapezoid scan of the returned trajectory.
        bank.advance(h, w_k, cubic_shift(x));
    }
    return traj;
}

Eigen::MatrixXcd memory_direct(const KernelCoefficients& coeffs,
                               const std::vector<Eigen::MatrixXcd>& w_history,
                               double dt) {
    if (w_history.empty()) throw DimensionMismatch("empty history");
    const auto rows = w_history[0].rows();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows, rows);
    const std::size_t last = w_history.size() - 1;
    if (last == 0) return acc;
    for (std::size_t j = 0; j <= last; ++j) {
        const double tau = (last - j) * dt;
        const double weight = (j == 0 || j == last) ? 0.5 : 1.0;
        acc += weight * dt * kernel_k2(tau, coeffs) * w_history[j];
    }
    return acc;
}

std::vector<double> expectation(const OperatorTrajectory& traj,
                                const std::vector<cdouble>& qubit_state) {
    if (qubit_state.empty() ||
        qubit_state.size() > static_cast<std::size_t>(traj.d))
        throw DimensionMismatch("qubit state dimension exceeds the Fock truncation");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(traj.d);
    for (std::size_t n = 0; n < qubit_state.size(); ++n) psi(n) = qubit_state[n];
    std::vector<double> out;
    out.reserve(traj.X.size());
    for (const Eigen::MatrixXcd& x : traj.X)
        out.push_back((psi.adjoint() * x * psi).value().real());
    return out;
}

}  // namespace cqed
