// Spectral Green's function of the open resonator, its direct boundary-value
// closed form (used as an independent reference), and the memory kernels
// K_0, K_1, K_2 entering the reduced qubit dynamics.
#pragma once

#include <complex>
#include <vector>

#include "cqed/circuit.hpp"
#include "cqed/spectra.hpp"

namespace cqed {

// Per-mode coefficients of the kernel partial-fraction representation:
//   K_2(tau) = -sum_n A_n sin(nu_n tau + theta_n - 2 delta_n) e^{-kappa_n tau},
//   i K_1(0) = c_0 + sum_n M_n cos(2 delta_n),   M_n = A_n / |omega_n|,
// where c_0 = gamma chi_s / (1 + chi_s + chi_R + chi_L) is the contribution of
// the omega = 0 zero mode: the double pole of G cancels in K_2 (the omega^2
// weight) but survives as a simple pole in the omega weight of K_1, where the
// retarded prescription assigns it a full residue.
struct KernelCoefficients {
    double gamma_chi_s = 0.0;  // gamma * chi_s prefactor
    double zero_mode = 0.0;    // c_0, the omega = 0 contribution to i K_1(0)
    // Ohmic background c_1 of the kernel image: the truncated pole-pair sum
    // carries a spurious simple pole at omega = 0 with imaginary residue
    // sum_n Im(phi_n(x0)^2 / omega_n), while the exact Green's function has
    // only the tiny (chi_R^2 + chi_L^2) end-capacitor damping there. Their
    // difference multiplies s in the bracket:
    //   c_1 = -sum_n M_n (kappa_n cos 2delta_n + nu_n sin 2delta_n)
    //                    / (nu_n^2 + kappa_n^2)
    //         + gamma chi_s (chi_R^2 + chi_L^2) / (1 + chi_s + chi_R + chi_L)^2,
    // i.e. a local friction term c_1 x'(t) in the time domain. Without it the
    // DC damping of the truncated representation has the wrong sign and weakly
    // damped hybridized roots drift across the imaginary axis.
    double friction = 0.0;
    std::vector<double> A;     // gamma chi_s |omega_n| |phi_n(x0)|^2
    std::vector<double> M;     // gamma chi_s |phi_n(x0)|^2 (hybridization measure)
    std::vector<double> nu;
    std::vector<double> kappa;
    std::vector<double> theta;
    std::vector<double> delta;

    std::size_t size() const { return A.size(); }
    static KernelCoefficients from_modes(const CircuitParams& params,
                                         const QuasiModeSet& modes);
};

// Truncated quasi-bound pole sum over stored pairs (omega_n, -omega_n*):
//   G(x, xp, omega) = sum_n (1/2 omega) phi_n(x) phi_n(xp) / (omega - omega_n)
// Throws PoleProximity within 1e-9 of a stored pole.
cdouble gf_spectral(double x, double xp, cdouble omega, const QuasiModeSet& modes);

// Direct solution of the Helmholtz boundary-value problem with outgoing
// boundary conditions and the source at the qubit position x0; independent of
// the mode representation. Valid for x inside the resonator.
cdouble gf_bvp_qubit_source(double x, cdouble omega, const CircuitParams& p);

// omega^2 G(x0, x0, omega) in the compact log-derivative form (used by the
// kernel inversion quadratures).
cdouble omega2_gf_x0(cdouble omega, const CircuitParams& p);

// Kernel evaluations from the coefficient representation.
double kernel_k2(double tau, const KernelCoefficients& coeffs);
double kernel_ik1(const KernelCoefficients& coeffs);

// Independent quadrature estimate of K_0(0) = gamma chi_s Int dw/2pi G(x0,x0,w):
// integration along the horizontal contour Im(w) = h (above all poles) with the
// analytic 1/(chi_s w^2) tail appended. The exact value is 0.
double kernel_k0_estimate(const CircuitParams& p, double h = 1.0,
                          double omega_max = 2000.0, double dw = 0.02);

// Fourier-inversion reference for K_2 on a batch of tau values:
//   K_2(tau) = (gamma chi_s / 2 pi) Int dw w^2 G(x0,x0,w) e^{-i w tau}.
// The real-line inversion is windowed by deforming the |Re w| < omega_window
// part of the contour: the integral over the clockwise rectangle with corners
// (+-omega_window + i h) and (+-omega_window - i depth) picks up exactly the
// pole pairs with |nu_n| < omega_window and kappa_n < depth, i.e. the same
// truncation as the spectral sum, while every path segment stays at least
// min(h, depth - max kappa) away from the poles so plain Simpson quadrature
// applies. Window parameters are part of the oracle definition.
std::vector<double> kernel_k2_inversion(const std::vector<double>& taus,
                                        const CircuitParams& p,
                                        double omega_window, double depth,
                                        double h = 0.5, double dw = 0.005);

// System-output filtering: resonator response at x_obs given the Laplace-domain
// qubit quadrature X_j(s); the Laplace variable maps to the spectral frequency
// as omega = i s.
cdouble output_filter(double x_obs, cdouble s, const QuasiModeSet& modes,
                      cdouble xj_laplace, const CircuitParams& p);

}  // namespace cqed
