// Gauss-Legendre quadrature helpers. Mode-overlap integrands are piecewise
// trigonometric with a kink at the qubit position, so integration is always done
// per panel with a fixed high-order rule.
#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace cqed {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], computed by
// Newton iteration on the Legendre polynomial (cached per order).
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    explicit GaussLegendre(int n);
};

// Integrate f over [a, b] with a single n-point Gauss-Legendre panel.
double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int n = 64);
std::complex<double> gl_integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int n = 64);

}  // namespace cqed
