// Linear spontaneous-emission theory: the characteristic function D_j(s),
// hybridized pole finding with homotopy classification, residues, the exact
// time-domain trajectory, Purcell/Lamb sweeps, and the single-mode RWA toy
// comparator.
#pragma once

#include <complex>
#include <vector>

#include "cqed/circuit.hpp"
#include "cqed/greens.hpp"
#include "cqed/spectra.hpp"

namespace cqed {

// D_j(s) = s^2 + omega_j^2 [1 - gamma + i K_1(0) + K2~(s)]. Combining the
// constant i K_1(0) with the Laplace transform of the kernel gives the exact
// rational bracket
//   i K_1(0) + K2~(s) = c_0 + c_1 s +
//     sum_n M_n s [(s + kappa_n) cos(2 delta_n) + nu_n sin(2 delta_n)]
//                 / ((s + kappa_n)^2 + nu_n^2),
// whose per-mode terms vanish at s = 0; the surviving constant c_0 (stored in
// KernelCoefficients::zero_mode) is the omega = 0 zero-mode residue of K_1,
// and c_1 (KernelCoefficients::friction) is the Ohmic background restoring
// the DC damping that the truncated pole-pair sum misrepresents. Dropping
// either pushes weakly damped roots across the imaginary axis.
struct CharacteristicModel {
    double omega_j = 0.0;
    double gamma = 0.0;
    KernelCoefficients coeffs;

    static CharacteristicModel from_modes(const CircuitParams& params,
                                          const QuasiModeSet& modes,
                                          double omega_j_override = 0.0);
    std::size_t size() const { return coeffs.size(); }
};

// Characteristic function and its analytic s-derivative. lambda in [0, 1]
// scales the light-matter terms (gamma, M_n) for the homotopy classification;
// the physical function is lambda = 1.
cdouble dj(cdouble s, const CharacteristicModel& model, double lambda = 1.0);
cdouble dj_deriv(cdouble s, const CharacteristicModel& model, double lambda = 1.0);

// Hybridized poles: one qubit-like pair representative p_j (Im <= 0) plus one
// resonator-like representative p_n per retained mode, and the bare kernel
// poles z_n = -kappa_n - i nu_n.
struct PoleSet {
    double omega_j = 0.0;
    cdouble p_j;
    std::vector<cdouble> p_n;
    std::vector<cdouble> z_n;

    double alpha_j() const { return -p_j.real(); }  // Purcell rate
    double beta_j() const { return -p_j.imag(); }   // dressed frequency
    double purcell() const { return alpha_j(); }
    double lamb() const { return beta_j() - omega_j; }
    bool all_stable() const;
};

// Newton pole solve: the qubit-like root is classified by a 10-step homotopy
// from the uncoupled limit; resonator-like roots are refined from the bare
// kernel poles. Modes whose hybridization measure is numerically zero keep
// their bare poles exactly.
PoleSet find_poles(const CharacteristicModel& model);

// Residues of s / D_j (X channel) and omega_j / D_j (Y channel) at each pole.
struct ResidueSet {
    cdouble Aj_X, Aj_Y;
    std::vector<cdouble> An_X, An_Y;

    // Sum over all poles and conjugates of A^X (must be 1).
    double sum_x() const;
};
ResidueSet residues(const CharacteristicModel& model, const PoleSet& poles);

// <X_j(t)> = sum_l 2 Re[(A_l^X x0 + A_l^Y y0) e^{p_l t}].
std::vector<double> trajectory_linear(const PoleSet& poles, const ResidueSet& res,
                                      double x0, double y0,
                                      const std::vector<double>& t_grid);

// Single-mode toy characteristic function, with and without the rotating-wave
// approximation, and its four poles (companion-matrix solve of the quartic).
cdouble toy_rwa_dj(cdouble s, double omega_j, double omega_c, double kappa_c,
                   double g, bool rwa);
std::vector<cdouble> toy_poles(double omega_j, double omega_c, double kappa_c,
                               double g, bool rwa);

// Purcell rate and Lamb shift over a qubit-frequency grid (fixed mode set).
struct SweepPoint {
    double omega_j = 0.0;
    double alpha_j = 0.0;
    double lamb = 0.0;
};
std::vector<SweepPoint> purcell_lamb_sweep(const CircuitParams& params,
                                           const QuasiModeSet& modes,
                                           const std::vector<double>& omega_j_grid);

// Convergence report: drift of the qubit-like pole when the retained mode
// count doubles.
double qubit_pole_drift(const CircuitParams& params, std::size_t n_modes,
                        double omega_j_override = 0.0);

}  // namespace cqed
