// Root-finding utilities: sign-change bracketing with bisection/secant polish on
// the real line, and damped Newton iteration in the complex plane.
#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace cqed {

using cdouble = std::complex<double>;

// Scan [a, b] with the given step for sign changes of f and refine each bracket by
// bisection followed by secant polish. Returns the roots in ascending order.
// Roots closer than dedup_tol are merged. Throws RootBracketFailure if fewer than
// min_roots are found.
std::vector<double> bracket_roots(const std::function<double(double)>& f, double a,
                                  double b, double step, std::size_t min_roots,
                                  double tol = 1e-13, double dedup_tol = 1e-8);

// Refine a single bracketed root to |interval| < tol by bisection + secant.
double refine_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol = 1e-13);

// Damped complex Newton iteration on f with analytic derivative df. The step is
// halved (up to 40 times) until |f| decreases. Throws NewtonDiverged after
// max_iter iterations without reaching |f| < tol.
cdouble newton_complex(const std::function<cdouble(cdouble)>& f,
                       const std::function<cdouble(cdouble)>& df, cdouble seed,
                       double tol = 1e-12, int max_iter = 200);

// Least-squares line fit of y against x. Returns (slope, intercept, r_squared).
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cqed
