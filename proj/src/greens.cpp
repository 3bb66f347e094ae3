#include "cqed/greens.hpp"

#include <cmath>
#include <numbers>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

constexpr cdouble kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Outgoing fundamental solutions satisfying the left/right end conditions.
cdouble u_left(double x, cdouble w, const CircuitParams& p) {
    return std::exp(kI * w * x) + (1.0 - 2.0 * kI * p.chi_L * w) * std::exp(-kI * w * x);
}
cdouble u_left_deriv(double x, cdouble w, const CircuitParams& p) {
    return kI * w *
           (std::exp(kI * w * x) - (1.0 - 2.0 * kI * p.chi_L * w) * std::exp(-kI * w * x));
}
cdouble u_right(double x, cdouble w, const CircuitParams& p) {
    return std::exp(kI * w * (1.0 - x)) +
           (1.0 - 2.0 * kI * p.chi_R * w) * std::exp(-kI * w * (1.0 - x));
}
cdouble u_right_deriv(double x, cdouble w, const CircuitParams& p) {
    return -kI * w * (std::exp(kI * w * (1.0 - x)) -
                      (1.0 - 2.0 * kI * p.chi_R * w) * std::exp(-kI * w * (1.0 - x)));
}

// Wronskian-like denominator including the series-capacitance Dirac weight:
// the jump condition at the source reads dG|+ - dG|- + chi_s w^2 G = 1.
cdouble bvp_denominator(cdouble w, const CircuitParams& p) {
    const double x0 = p.x0;
    const cdouble uL = u_left(x0, w, p);
    const cdouble uR = u_right(x0, w, p);
    return uL * u_right_deriv(x0, w, p) - u_left_deriv(x0, w, p) * uR +
           p.chi_s * w * w * uL * uR;
}

}  // namespace

KernelCoefficients KernelCoefficients::from_modes(const CircuitParams& params,
                                                  const QuasiModeSet& modes) {
    KernelCoefficients c;
    c.gamma_chi_s = params.gamma * params.chi_s;
    c.zero_mode =
        c.gamma_chi_s / (1.0 + params.chi_s + params.chi_R + params.chi_L);
    const std::size_t n = modes.size();
    c.A.reserve(n);
    c.M.reserve(n);
    c.nu.reserve(n);
    c.kappa.reserve(n);
    c.theta.reserve(n);
    c.delta.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double abs_phi_sq = std::norm(modes.phi_x0[i]);
        c.M.push_back(c.gamma_chi_s * abs_phi_sq);
        c.A.push_back(c.M.back() * std::abs(modes.omega[i]));
        c.nu.push_back(modes.nu(i));
        c.kappa.push_back(modes.kappa(i));
        c.theta.push_back(modes.theta[i]);
        c.delta.push_back(modes.delta[i]);
    }
    const double denom = 1.0 + params.chi_s + params.chi_R + params.chi_L;
    c.friction = c.gamma_chi_s *
                 (params.chi_R * params.chi_R + params.chi_L * params.chi_L) /
                 (denom * denom);
    for (std::size_t i = 0; i < n; ++i) {
        c.friction -= c.M[i] *
                      (c.kappa[i] * std::cos(2.0 * c.delta[i]) +
                       c.nu[i] * std::sin(2.0 * c.delta[i])) /
                      (c.nu[i] * c.nu[i] + c.kappa[i] * c.kappa[i]);
    }
    return c;
}

cdouble gf_spectral(double x, double xp, cdouble omega, const QuasiModeSet& modes) {
    if (std::abs(omega) < 1e-9) throw PoleProximity("frequency at the w = 0 double pole");
    cdouble sum = 0.0;
    for (std::size_t n = 0; n < modes.size(); ++n) {
        const cdouble wn = modes.omega[n];
        const cdouble d_pos = omega - wn;
        const cdouble d_neg = omega + std::conj(wn);
        if (std::abs(d_pos) < 1e-9 || std::abs(d_neg) < 1e-9)
            throw PoleProximity("frequency within 1e-9 of a quasi-bound pole");
        const cdouble prod = modes.phi_at(n, x) * modes.phi_at(n, xp);
        sum += prod / d_pos + std::conj(prod) / d_neg;
    }
    sum /= 2.0 * omega;
    // The w = 0 double pole (uniform zero mode, normalized against the total
    // capacitance including the Dirac weights) is not part of the stored pole
    // pairs and enters analytically.
    const CircuitParams& p = modes.params;
    sum += 1.0 / ((1.0 + p.chi_s + p.chi_R + p.chi_L) * omega * omega);
    return sum;
}

cdouble gf_bvp_qubit_source(double x, cdouble omega, const CircuitParams& p) {
    const cdouble den = bvp_denominator(omega, p);
    if (std::abs(den) < 1e-14) throw PoleProximity("boundary-value denominator vanished");
    if (x <= p.x0) return u_left(x, omega, p) * u_right(p.x0, omega, p) / den;
    return u_left(p.x0, omega, p) * u_right(x, omega, p) / den;
}

cdouble omega2_gf_x0(cdouble omega, const CircuitParams& p) {
    // w^2 uL uR / den = w^2 / (chi_s w^2 + uR'/uR - uL'/uL), written with the
    // log-derivatives to stay finite at large |w|.
    const double x0 = p.x0;
    const cdouble eL2 = std::exp(2.0 * kI * omega * x0);
    const cdouble eR2 = std::exp(2.0 * kI * omega * (1.0 - x0));
    const cdouble a = 1.0 - 2.0 * kI * p.chi_L * omega;
    const cdouble b = 1.0 - 2.0 * kI * p.chi_R * omega;
    const cdouble rL = kI * omega * (eL2 - a) / (eL2 + a);
    const cdouble rR = -kI * omega * (eR2 - b) / (eR2 + b);
    return omega * omega / (p.chi_s * omega * omega + rR - rL);
}

double kernel_k2(double tau, const KernelCoefficients& coeffs) {
    double sum = 0.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        sum -= coeffs.A[n] *
               std::sin(coeffs.nu[n] * tau + coeffs.theta[n] - 2.0 * coeffs.delta[n]) *
               std::exp(-coeffs.kappa[n] * tau);
    }
    return sum;
}

double kernel_ik1(const KernelCoefficients& coeffs) {
    double sum = coeffs.zero_mode;
    for (std::size_t n = 0; n < coeffs.size(); ++n)
        sum += coeffs.M[n] * std::cos(2.0 * coeffs.delta[n]);
    return sum;
}

double kernel_k0_estimate(const CircuitParams& p, double h, double omega_max, double dw) {
    if (p.chi_s <= 0.0) return 0.0;
    // G(x0, x0, w) is analytic for Im(w) > 0, so the real-axis integral equals
    // the one along Im(w) = h; the integrand there decays without the heavy
    // oscillation near the resonances.
    auto g_line = [&](double wr) {
        const cdouble w(wr, h);
        return omega2_gf_x0(w, p) / (w * w);
    };
    // Composite Simpson with an even panel count.
    std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * omega_max / dw));
    if (n % 2 == 1) ++n;
    const double step = 2.0 * omega_max / static_cast<double>(n);
    cdouble acc = g_line(-omega_max) + g_line(omega_max);
    for (std::size_t i = 1; i < n; ++i) {
        const double wr = -omega_max + step * static_cast<double>(i);
        acc += (i % 2 == 1 ? 4.0 : 2.0) * g_line(wr);
    }
    cdouble integral = acc * (step / 3.0);
    // Analytic tails of the 1/(chi_s w^2) asymptote beyond the window.
    integral += (1.0 / (cdouble(omega_max, h)) + 1.0 / (cdouble(omega_max, -h))) / p.chi_s;
    return p.gamma * p.chi_s / (2.0 * kPi) * integral.real();
}

std::vector<double> kernel_k2_inversion(const std::vector<double>& taus,
                                        const CircuitParams& p, double omega_window,
                                        double depth, double h, double dw) {
    std::vector<double> out(taus.size(), 0.0);
    if (p.chi_s <= 0.0) return out;
    // One directed segment of the clockwise rectangle; samples of F = w^2 G
    // are cached so the tau loop reuses them.
    struct Segment {
        std::vector<cdouble> w;
        std::vector<cdouble> f;
        cdouble step;  // directed Simpson step
    };
    auto make_segment = [&](cdouble a, cdouble b) {
        Segment seg;
        std::size_t n = static_cast<std::size_t>(std::ceil(std::abs(b - a) / dw));
        if (n < 2) n = 2;
        if (n % 2 == 1) ++n;
        seg.step = (b - a) / static_cast<double>(n);
        seg.w.resize(n + 1);
        seg.f.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            seg.w[i] = a + seg.step * static_cast<double>(i);
            seg.f[i] = omega2_gf_x0(seg.w[i], p);
        }
        return seg;
    };
    const cdouble tl{-omega_window, h};
    const cdouble tr{omega_window, h};
    const cdouble br{omega_window, -depth};
    const cdouble bl{-omega_window, -depth};
    const Segment segments[4] = {make_segment(tl, tr), make_segment(tr, br),
                                 make_segment(br, bl), make_segment(bl, tl)};
    const double pref = p.gamma * p.chi_s / (2.0 * kPi);
    for (std::size_t t = 0; t < taus.size(); ++t) {
        const double tau = taus[t];
        cdouble acc = 0.0;
        for (const auto& seg : segments) {
            cdouble s = seg.f.front() * std::exp(-kI * seg.w.front() * tau) +
                        seg.f.back() * std::exp(-kI * seg.w.back() * tau);
            for (std::size_t i = 1; i + 1 < seg.w.size(); ++i)
                s += (i % 2 == 1 ? 4.0 : 2.0) * seg.f[i] * std::exp(-kI * seg.w[i] * tau);
            acc += s * (seg.step / 3.0);
        }
        out[t] = pref * acc.real();
    }
    return out;
}

cdouble output_filter(double x_obs, cdouble s, const QuasiModeSet& modes,
                      cdouble xj_laplace, const CircuitParams& p) {
    const cdouble omega = kI * s;
    return p.chi_s * p.omega_j * p.omega_j *
           gf_spectral(x_obs, p.x0, omega, modes) * xj_laplace;
}

}  // namespace cqed
