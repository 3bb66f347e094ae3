// Canonical unitless parameterization of the transmon-resonator-waveguide system.
// All downstream solvers consume a CircuitParams value; derived constants are
// computed once at construction so sweeps can never observe an inconsistent state.
#pragma once

#include "cqed/errors.hpp"

namespace cqed {

struct CircuitParams {
    // Raw inputs (dimensionless capacitance ratios, position, energies).
    double chi_j = 0.0;  // transmon capacitance ratio
    double chi_g = 0.0;  // coupling capacitance ratio
    double chi_R = 0.0;  // right end-coupling capacitance ratio
    double chi_L = 0.0;  // left end-coupling capacitance ratio
    double x0 = 0.0;     // qubit position in [0, 1] (units of resonator length)
    double Ec = 0.0;     // charging energy (unitless)
    double Ej = 0.0;     // Josephson energy (unitless)

    // Derived constants.
    double chi_s = 0.0;    // series capacitance ratio chi_g*chi_j/(chi_g+chi_j)
    double gamma = 0.0;    // capacitive divider chi_g/(chi_g+chi_j)
    double omega_j = 0.0;  // bare transmon frequency sqrt(8*Ec*Ej)
    double eps = 0.0;      // nonlinearity measure sqrt(Ec/Ej)
    double eps_d = 0.0;    // Duffing expansion parameter sqrt(2)*eps/6
    double phi_zpf = 0.0;  // zero-point phase (2*Ec/Ej)^(1/4)
};

// Populate a CircuitParams from raw inputs, validating ranges.
CircuitParams derive_params(double chi_j, double chi_g, double chi_R, double chi_L,
                            double x0, double Ec, double Ej);

// gamma*chi_s = (chi_g/(chi_g+chi_j))^2 * chi_j: the effective light-matter
// prefactor, monotone in chi_g and saturating at chi_j.
double coupling_saturation(double chi_j, double chi_g);

}  // namespace cqed
