// Current-conserving eigenproblems of the resonator loaded by the qubit's series
// capacitance: closed/open Hermitian mode sets and the non-Hermitian quasi-bound
// modes of the leaky resonator, plus light-matter couplings g_n and log-log
// asymptotic exponent fits.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cqed/circuit.hpp"
#include "cqed/rootfind.hpp"

namespace cqed {

enum class Boundary { Closed, Open };

// Hermitian current-conserving modes. Eigenfunctions are piecewise combinations
//   x < x0:  C_lt * (cos(k x)     - chi_L k sin(k x))
//   x > x0:  C_gt * (cos(k (1-x)) - chi_R k sin(k (1-x)))
// normalized against the capacitance density (unit bulk plus Dirac terms
// chi_s at x0 and, for open boundaries, chi_R at 1 and chi_L at 0).
struct HermitianModeSet {
    Boundary boundary = Boundary::Closed;
    CircuitParams params;
    std::vector<double> k;        // ascending positive wavenumbers
    std::vector<double> coef_lt;  // normalized coefficient, x < x0 branch
    std::vector<double> coef_gt;  // normalized coefficient, x > x0 branch

    std::size_t size() const { return k.size(); }
    // Normalized eigenfunction value at x for mode index n (0-based).
    double amp_at(std::size_t n, double x) const;
    // Spatial derivative of the eigenfunction (one-sided at x = x0).
    double deriv_at(std::size_t n, double x, bool from_left) const;
    double amp_x0(std::size_t n) const { return amp_at(n, params.x0); }
};

// Quasi-bound (outgoing boundary condition) modes: complex frequencies
// omega_n = nu_n - i kappa_n and complex normalized amplitudes at x0.
struct QuasiModeSet {
    CircuitParams params;
    std::vector<cdouble> omega;   // Im <= 0; only the Re >= 0 representative
    std::vector<cdouble> phi_x0;  // normalized amplitude at x0, Re >= 0 convention
    std::vector<double> delta;    // arg(phi_x0)
    std::vector<double> theta;    // atan2(kappa_n, nu_n)
    std::vector<cdouble> norm_c;  // normalization constants (internal, for phi_at)

    std::size_t size() const { return omega.size(); }
    double nu(std::size_t n) const { return omega[n].real(); }
    double kappa(std::size_t n) const { return -omega[n].imag(); }
    // Normalized quasi-bound eigenfunction at x inside the resonator.
    cdouble phi_at(std::size_t n, double x) const;
};

// Characteristic functions (residuals of the transcendental eigenvalue
// equations); exposed so tests can verify stored roots directly.
double closed_char(double k, const CircuitParams& p);
double open_char(double k, const CircuitParams& p);
cdouble quasi_char(cdouble w, const CircuitParams& p);
cdouble quasi_char_deriv(cdouble w, const CircuitParams& p);

// First n_modes closed-resonator modes (chi_R = chi_L = 0 implied).
HermitianModeSet closed_cc_modes(const CircuitParams& params, std::size_t n_modes);

// First n_modes modes of the capacitively end-coupled (open, Hermitian) problem.
HermitianModeSet open_cc_modes(const CircuitParams& params, std::size_t n_modes);

// First n_modes quasi-bound modes: damped Newton on the analytic characteristic
// function seeded from the Hermitian wavenumbers.
QuasiModeSet quasi_modes(const CircuitParams& params, std::size_t n_modes);

// Light-matter coupling g_n = (gamma/2) sqrt(chi_j) sqrt(omega_j nu_n) |phi_n(x0)|.
double coupling_g(const CircuitParams& params, double nu_n, double abs_phi_x0);
std::vector<double> couplings(const CircuitParams& params, const QuasiModeSet& modes);

// Least-squares slope of log(series) vs log(n) over [first, last] (1-based mode
// indices, inclusive). Throws NonPositiveEntry when the series is not positive.
LineFit asymptotic_exponent(const std::vector<double>& series, std::size_t first,
                            std::size_t last);

}  // namespace cqed
