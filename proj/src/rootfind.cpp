#include "cqed/rootfind.hpp"

#include <algorithm>
#include <cmath>

#include "cqed/errors.hpp"

namespace cqed {

double refine_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    // Bisect down to a narrow interval, then polish with a few secant steps.
    for (int i = 0; i < 200 && (hi - lo) > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    double x0 = lo, x1 = hi, f0 = flo, f1 = fhi;
    for (int i = 0; i < 8; ++i) {
        if (f1 == f0) break;
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 >= lo - tol && x2 <= hi + tol)) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
        if (std::abs(f1) == 0.0) break;
    }
    return x1;
}

std::vector<double> bracket_roots(const std::function<double(double)>& f, double a,
                                  double b, double step, std::size_t min_roots,
                                  double tol, double dedup_tol) {
    std::vector<double> roots;
    double x_prev = a;
    double f_prev = f(a);
    for (double x = a + step; x <= b + 0.5 * step; x += step) {
        const double xc = std::min(x, b);
        const double fc = f(xc);
        if (f_prev == 0.0) {
            roots.push_back(x_prev);
        } else if ((f_prev < 0.0) != (fc < 0.0)) {
            roots.push_back(refine_root(f, x_prev, xc, tol));
        }
        x_prev = xc;
        f_prev = fc;
    }
    // Merge near-duplicates (a refined root may coincide with a grid hit).
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique_roots;
    for (double r : roots) {
        if (unique_roots.empty() || r - unique_roots.back() > dedup_tol)
            unique_roots.push_back(r);
    }
    if (unique_roots.size() < min_roots)
        throw RootBracketFailure("bracket scan found " +
                                 std::to_string(unique_roots.size()) + " roots, need " +
                                 std::to_string(min_roots));
    return unique_roots;
}

cdouble newton_complex(const std::function<cdouble(cdouble)>& f,
                       const std::function<cdouble(cdouble)>& df, cdouble seed,
                       double tol, int max_iter) {
    cdouble z = seed;
    cdouble fz = f(z);
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fz) < tol) return z;
        const cdouble d = df(z);
        if (d == cdouble(0.0, 0.0))
            throw NewtonDiverged("vanishing derivative in complex Newton");
        cdouble dz = -fz / d;
        // Damping: halve the step until the residual decreases.
        double lambda = 1.0;
        cdouble z_next = z + dz;
        cdouble f_next = f(z_next);
        int halvings = 0;
        while (std::abs(f_next) >= std::abs(fz) && halvings < 40) {
            lambda *= 0.5;
            z_next = z + lambda * dz;
            f_next = f(z_next);
            ++halvings;
        }
        if (halvings == 40 && std::abs(f_next) >= std::abs(fz)) {
            // Residual stagnated; accept only if already essentially converged.
            if (std::abs(fz) < 10.0 * tol) return z;
            throw NewtonDiverged("complex Newton stagnated");
        }
        z = z_next;
        fz = f_next;
    }
    if (std::abs(fz) < tol) return z;
    throw NewtonDiverged("complex Newton did not converge");
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace cqed
