#include "cqed/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace cqed {

GaussLegendre::GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    // Standard Newton iteration on P_n with the three-term recurrence.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

namespace {
const GaussLegendre& cached_rule(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
    return it->second;
}
}  // namespace

double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int n) {
    if (b <= a) return 0.0;
    const GaussLegendre& rule = cached_rule(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

std::complex<double> gl_integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b, int n) {
    if (b <= a) return {0.0, 0.0};
    const GaussLegendre& rule = cached_rule(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::complex<double> sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

}  // namespace cqed
