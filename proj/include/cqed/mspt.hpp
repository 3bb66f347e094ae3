// Multi-scale perturbation theory for the weakly anharmonic transmon: the
// classical and free-quantum Duffing closed forms, hybridization of the
// quadratic sector, Kerr-corrected poles, and the corrected trajectory.
#pragma once

#include <complex>
#include <vector>

#include "cqed/circuit.hpp"
#include "cqed/linear.hpp"
#include "cqed/spectra.hpp"

namespace cqed {

// Normal modes of the quadratic (eps_d = 0, kappa = 0) sector. The coupled
// quadrature equations X'' + V X = 0 with V_{0n} = 2 g_n nu_n,
// V_{n0} = 2 g_n omega_j are symmetrized by the scaling diag(1/sqrt(omega)),
// giving a real symmetric matrix S with S_{0n} = 2 g_n sqrt(omega_j nu_n) and
// the transmon diagonal renormalized by the kernel background (see the source)
// so the truncated eigenfrequencies track the linear poles at kappa -> 0;
// beta_l^2 are its eigenvalues and the orthonormal eigenvectors hold the
// hybridization coefficients (row 0 is the transmon row: u_l = U[0][l]).
// Index 0 is the qubit-like normal mode; 1..N are resonator-like, ascending.
struct HybridBasis {
    double omega_j = 0.0;
    double eps_d = 0.0;
    std::vector<double> beta;            // normal-mode frequencies
    std::vector<double> alpha;           // decay rates from the linear poles
    std::vector<double> u;               // transmon-row coefficients u_l
    std::vector<std::vector<double>> U;  // full orthogonal matrix, U[row][col]

    std::size_t size() const { return beta.size(); }
    // Per-mode effective nonlinearity eps_l = (omega_j / beta_l) u_l eps_d.
    double eps_l(std::size_t l) const { return omega_j / beta[l] * u[l] * eps_d; }
};

// Diagonalize the quadratic sector and attach the decay of the matching
// linear pole (leading order in the inverse quality factor).
HybridBasis hybridize(const CircuitParams& params, const QuasiModeSet& modes);

// Expectation-level Kerr correction data for a product initial state
// (qubit amplitude vector tensor photon vacuum): the corrected pole of mode l
//   pbar_l(t) = p_l + i (3 eps_d / 2) omega_j [u_l^4 <Hbar_l(0)> e^{-2 alpha_l t}
//               + sum_{m != l} 2 u_l^2 u_m^2 <Hbar_m(0)> e^{-2 alpha_m t}],
// with <Hbar_l(0)> = sum_rows U[row][l]^2 <H_row> and bare expectations
// <H_qubit> from the state, <H_n> = 1/2 (vacuum).
struct KerrCorrection {
    std::vector<double> h_bar;  // <Hbar_l(0)> per normal mode

    // The time-dependent pole shift pbar_l(t) - p_l.
    cdouble shift(const HybridBasis& basis, std::size_t l, double t) const;
};
KerrCorrection corrected_poles(const HybridBasis& basis,
                               const std::vector<cdouble>& qubit_state);

// Dissipative classical Duffing oscillator to lowest order:
//   X(t) = e^{-kappa t / 2} 2 Re[a0 e^{-i wbar(t) t}],
//   wbar(t) = omega (1 - (3 eps_d / 2) |a0|^2 e^{-kappa t}), a0 = (X0 + iY0)/2.
double classical_duffing(double omega, double kappa, double eps_d, double X0,
                         double Y0, double t);

// Free quantum Duffing matrix element
//   <n-1| X(t) |n> = sqrt(n) e^{-kappa t/2} e^{-i (1 - (3 n eps_d/2) e^{-kappa t}) omega t}.
cdouble quantum_duffing_element(double omega, double kappa, double eps_d, int n,
                                double t);

// Corrected trajectory <X_j(t)>: each linear pole contribution acquires the
// operator-valued frequency renormalization at the matrix-element level,
//   <X_j(t)> = sum_l 2 Re[(A_l^X x0 + A_l^Y y0) e^{p_l t + shift_l(t) t}],
// with x0 = <X_j(0)>, y0 = <Y_j(0)> taken from the qubit amplitude vector.
// The Weyl-ordered cosine denominator cancels exactly against the paired
// matrix elements of adjacent Fock states, so no truncated product basis is
// needed. eps_d = 0 reduces exactly to trajectory_linear.
std::vector<double> trajectory_mspt(const HybridBasis& basis,
                                    const KerrCorrection& corr,
                                    const PoleSet& poles, const ResidueSet& res,
                                    const std::vector<cdouble>& qubit_state,
                                    const std::vector<double>& t_grid);

// Quadrature and energy expectations of a small Fock-amplitude vector.
double state_x(const std::vector<cdouble>& qubit_state);
double state_y(const std::vector<cdouble>& qubit_state);
double state_h(const std::vector<cdouble>& qubit_state);

// Discrete-Fourier magnitude of a uniformly sampled real series on a given
// angular-frequency grid (trajectory spectra for waterfall plots).
std::vector<double> fourier_magnitude(const std::vector<double>& series, double dt,
                                      const std::vector<double>& omega_grid);

}  // namespace cqed
