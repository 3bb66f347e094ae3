// Direct numerical integration of the reduced operator-valued Duffing
// equation with memory: the "pure numerical" benchmark for the linear and
// multi-scale solutions.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cqed/circuit.hpp"
#include "cqed/greens.hpp"

namespace cqed {

struct IntegratorConfig {
    double dt = 1e-3;  // step size; stability heuristic dt < 0.1 / max(nu_n)
    int d = 5;         // Fock truncation of the transmon quadratures
    double T = 1.0;    // horizon
};

// Quadrature operators X(t), Y(t) = Xdot(t)/omega_j on a uniform grid, in a
// d-level truncated Fock space. X(0) = a + a^dag, Y(0) = -i(a - a^dag).
struct OperatorTrajectory {
    std::vector<double> t;
    std::vector<Eigen::MatrixXcd> X;
    std::vector<Eigen::MatrixXcd> Y;
    // Recursively accumulated memory convolution at each grid point (the
    // integral term of the equation of motion), kept for oracle comparison
    // against a direct history scan.
    std::vector<Eigen::MatrixXcd> memory;
    int d = 0;
    double hermiticity_defect = 0.0;  // max over steps of max|X - X^dag|
};

// Integrate the reduced equation
//   Xdd + omega_j^2 (1 - gamma + iK_1(0)) W + omega_j^2 c_1 Xd
//     = -omega_j^2 Int_0^t K_2(t - t') W(t') dt',    W = X - eps_d X^3,
// with a midpoint-predictor / trapezoid-corrector scheme on (X, Xd) and the
// memory convolution carried by per-mode exponential accumulators (the
// exponential-sine form of K_2 makes the trapezoid update O(1) per step).
// The local friction c_1 Xd stands in for the truncated tail of the exact
// kernel, whose Laplace image is c_1 s X(s) with no initial-value term; the
// replacement therefore comes with the impulsive velocity correction
// Xd(0+) = omega_j Y(0) - omega_j^2 c_1 X(0), which keeps the eps_d = 0
// solution identical to the pole-residue trajectory of the linear module.
// Throws StepUnstable if the stability heuristic is violated or the state
// norm grows by more than 1e3; TruncationTooSmall for d < 3.
OperatorTrajectory integrate_reduced(const CircuitParams& params,
                                     const KernelCoefficients& coeffs,
                                     const IntegratorConfig& cfg);

// Direct trapezoid scan of the memory convolution over a stored history of
// W values on a uniform grid (oracle for the recursive accumulators):
//   Int_0^{t_k} K_2(t_k - t') W(t') dt',  t_k = (len - 1) dt.
Eigen::MatrixXcd memory_direct(const KernelCoefficients& coeffs,
                               const std::vector<Eigen::MatrixXcd>& w_history,
                               double dt);

// <X_j(t)> = Tr[rho_j(0) X(t)] for a pure qubit state given as Fock
// amplitudes (dimension <= d).
std::vector<double> expectation(const OperatorTrajectory& traj,
                                const std::vector<cdouble>& qubit_state);

}  // namespace cqed
