#include "cqed/circuit.hpp"

#include <cmath>

namespace cqed {

CircuitParams derive_params(double chi_j, double chi_g, double chi_R, double chi_L,
                            double x0, double Ec, double Ej) {
    if (chi_j < 0.0 || chi_g < 0.0 || chi_R < 0.0 || chi_L < 0.0)
        throw InputError("capacitance ratios must be non-negative");
    if (chi_g + chi_j <= 0.0)
        throw InputError("chi_g + chi_j must be positive");
    if (Ec <= 0.0 || Ej <= 0.0)
        throw NonPositiveEnergy("Ec and Ej must be positive");
    if (x0 < 0.0 || x0 > 1.0)
        throw OutOfRangePosition("x0 must lie in [0, 1]");

    CircuitParams p;
    p.chi_j = chi_j;
    p.chi_g = chi_g;
    p.chi_R = chi_R;
    p.chi_L = chi_L;
    p.x0 = x0;
    p.Ec = Ec;
    p.Ej = Ej;
    p.chi_s = (chi_g > 0.0) ? chi_g * chi_j / (chi_g + chi_j) : 0.0;
    p.gamma = chi_g / (chi_g + chi_j);
    p.omega_j = std::sqrt(8.0 * Ec * Ej);
    p.eps = std::sqrt(Ec / Ej);
    p.eps_d = std::sqrt(2.0) * p.eps / 6.0;
    p.phi_zpf = std::pow(2.0 * Ec / Ej, 0.25);
    return p;
}

double coupling_saturation(double chi_j, double chi_g) {
    const double r = chi_g / (chi_g + chi_j);
    return r * r * chi_j;
}

}  // namespace cqed
