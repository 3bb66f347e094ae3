#include "cqed/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

constexpr cdouble I_UNIT{0.0, 1.0};

// Integral of (cos(k x) - c k sin(k x))^2 over [0, X]; closed form used for the
// orthonormalization of Hermitian modes (piecewise trigonometric integrands).
double boundary_factor_sq_integral(double k, double c, double X) {
    const double s2 = std::sin(2.0 * k * X);
    const double s1 = std::sin(k * X);
    return 0.5 * (1.0 + c * c * k * k) * X + (1.0 - c * c * k * k) * s2 / (4.0 * k) -
           c * s1 * s1;
}

double bl_factor(double k, double chi_L, double x) {
    return std::cos(k * x) - chi_L * k * std::sin(k * x);
}
double br_factor(double k, double chi_R, double x) {
    return std::cos(k * (1.0 - x)) - chi_R * k * std::sin(k * (1.0 - x));
}

// Build normalized branch coefficients for one Hermitian mode.
void normalize_hermitian_mode(const CircuitParams& p, Boundary b, double k,
                              double& coef_lt, double& coef_gt) {
    const double chi_L = (b == Boundary::Open) ? p.chi_L : 0.0;
    const double chi_R = (b == Boundary::Open) ? p.chi_R : 0.0;
    // Unnormalized branch coefficients enforcing continuity at x0: each branch
    // carries the opposite side's boundary factor evaluated at x0.
    double c_lt = br_factor(k, chi_R, p.x0);
    double c_gt = bl_factor(k, chi_L, p.x0);
    if (std::abs(c_lt) < 1e-11 && std::abs(c_gt) < 1e-11) {
        // Node exactly at x0 (unperturbed mode with phi(x0) = 0): match the
        // derivative jump condition instead, which reduces to derivative
        // continuity here.
        const double db_r = k * std::sin(k * (1.0 - p.x0)) +
                            chi_R * k * k * std::cos(k * (1.0 - p.x0));
        const double db_l =
            -k * std::sin(k * p.x0) - chi_L * k * k * std::cos(k * p.x0);
        c_lt = db_r;
        c_gt = db_l;
    }
    double norm_sq =
        c_lt * c_lt * boundary_factor_sq_integral(k, chi_L, p.x0) +
        c_gt * c_gt * boundary_factor_sq_integral(k, chi_R, 1.0 - p.x0) +
        p.chi_s * c_lt * c_lt * bl_factor(k, chi_L, p.x0) * bl_factor(k, chi_L, p.x0);
    if (b == Boundary::Open) {
        // Endpoint Dirac terms of the open-boundary capacitance density.
        const double phi1 = c_gt * br_factor(k, chi_R, 1.0);
        const double phi0 = c_lt * bl_factor(k, chi_L, 0.0);
        norm_sq += p.chi_R * phi1 * phi1 + p.chi_L * phi0 * phi0;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    coef_lt = c_lt * inv;
    coef_gt = c_gt * inv;
    // Deterministic sign: positive value at x0 when nonzero, otherwise positive
    // in the interior of the right panel.
    double probe = coef_gt * br_factor(k, chi_R, p.x0);
    if (std::abs(probe) < 1e-12)
        probe = coef_gt * br_factor(k, chi_R, 0.5 * (p.x0 + 1.0));
    if (probe < 0.0) {
        coef_lt = -coef_lt;
        coef_gt = -coef_gt;
    }
}

HermitianModeSet build_hermitian(const CircuitParams& params, std::size_t n_modes,
                                 Boundary b) {
    if (n_modes < 1) throw InputError("n_modes must be >= 1");
    HermitianModeSet set;
    set.boundary = b;
    set.params = params;
    const auto f = [&](double k) {
        return (b == Boundary::Closed) ? closed_char(k, params) : open_char(k, params);
    };
    const double hi = (static_cast<double>(n_modes) + 2.0) * M_PI;
    auto roots = bracket_roots(f, 1e-9, hi, M_PI / 64.0, n_modes, 1e-13);
    roots.resize(n_modes);
    set.k = roots;
    set.coef_lt.resize(n_modes);
    set.coef_gt.resize(n_modes);
    for (std::size_t n = 0; n < n_modes; ++n)
        normalize_hermitian_mode(params, b, set.k[n], set.coef_lt[n], set.coef_gt[n]);
    return set;
}

// Unnormalized quasi-bound eigenfunction; branch selected by x <= x0.
cdouble quasi_raw(const CircuitParams& p, cdouble w, double x) {
    const cdouble a = 1.0 - 2.0 * I_UNIT * w * p.chi_L;
    const cdouble bb = 1.0 - 2.0 * I_UNIT * w * p.chi_R;
    if (x < 0.0) {
        // Left waveguide: outgoing continuation across the end capacitor.
        return (-2.0 * I_UNIT * p.chi_L * w) * std::exp(-I_UNIT * w * x) *
               std::exp(-I_UNIT * w * (1.0 - p.x0)) *
               (std::exp(2.0 * I_UNIT * w * (1.0 - p.x0)) + bb);
    }
    if (x > 1.0) {
        // Right waveguide: outgoing continuation across the end capacitor.
        return (-2.0 * I_UNIT * p.chi_R * w) * std::exp(I_UNIT * w * (x - 1.0)) *
               std::exp(-I_UNIT * w * p.x0) *
               (std::exp(2.0 * I_UNIT * w * p.x0) + a);
    }
    if (x <= p.x0) {
        return std::exp(-I_UNIT * w * (x - p.x0 + 1.0)) *
               (std::exp(2.0 * I_UNIT * w * x) + a) *
               (std::exp(2.0 * I_UNIT * w * (1.0 - p.x0)) + bb);
    }
    return std::exp(-I_UNIT * w * (p.x0 - x + 1.0)) *
           (std::exp(2.0 * I_UNIT * w * p.x0) + a) *
           (std::exp(2.0 * I_UNIT * w * (1.0 - x)) + bb);
}

// Exact residue normalization: the unnormalized quasi-bound function factors
// as phi(x) = uL(x) uR(x0) (x < x0) / uL(x0) uR(x) (x > x0) with
//   uL(x) = e^{iwx} + (1 - 2i chi_L w) e^{-iwx},
//   uR(x) = e^{iw(1-x)} + (1 - 2i chi_R w) e^{-iw(1-x)},
// and the Green's function reads G = uL(x<) uR(x>) / D with
//   D(w) = uL uR' - uL' uR + chi_s w^2 uL uR  (evaluated at x0).
// Requiring the residue of G at the eigenfrequency to equal phi(x0)^2 / (2 w)
// fixes the square norm to M^2 = uL(x0) uR(x0) D'(w) / (2 w); this equals the
// unconjugated-square norm with the capacitance Dirac weights (chi_s at x0,
// chi_R / chi_L at the ends) up to small leakage boundary corrections, and is
// the convention under which kernel coefficients reproduce the inversion
// integrals exactly.
cdouble quasi_res_norm_sq(const CircuitParams& p, cdouble w) {
    const double x0 = p.x0;
    const double y0 = 1.0 - p.x0;
    const cdouble a = 1.0 - 2.0 * I_UNIT * w * p.chi_L;
    const cdouble b = 1.0 - 2.0 * I_UNIT * w * p.chi_R;
    const cdouble da = -2.0 * I_UNIT * p.chi_L;
    const cdouble db = -2.0 * I_UNIT * p.chi_R;
    const cdouble eP = std::exp(I_UNIT * w * x0), eM = std::exp(-I_UNIT * w * x0);
    const cdouble fP = std::exp(I_UNIT * w * y0), fM = std::exp(-I_UNIT * w * y0);
    const cdouble uL = eP + a * eM;
    const cdouble duL = I_UNIT * x0 * eP + da * eM - I_UNIT * x0 * a * eM;
    const cdouble vL = I_UNIT * w * (eP - a * eM);  // uL'(x0)
    const cdouble dvL = I_UNIT * (eP - a * eM) +
                        I_UNIT * w * (I_UNIT * x0 * eP - da * eM + I_UNIT * x0 * a * eM);
    const cdouble uR = fP + b * fM;
    const cdouble duR = I_UNIT * y0 * fP + db * fM - I_UNIT * y0 * b * fM;
    const cdouble vR = -I_UNIT * w * (fP - b * fM);  // uR'(x0), d/dx
    const cdouble dvR = -I_UNIT * (fP - b * fM) -
                        I_UNIT * w * (I_UNIT * y0 * fP - db * fM + I_UNIT * y0 * b * fM);
    const cdouble dD = duL * vR + uL * dvR - dvL * uR - vL * duR +
                       2.0 * p.chi_s * w * uL * uR +
                       p.chi_s * w * w * (duL * uR + uL * duR);
    return uL * uR * dD / (2.0 * w);
}

}  // namespace

double HermitianModeSet::amp_at(std::size_t n, double x) const {
    const double chi_L = (boundary == Boundary::Open) ? params.chi_L : 0.0;
    const double chi_R = (boundary == Boundary::Open) ? params.chi_R : 0.0;
    if (x <= params.x0) return coef_lt[n] * bl_factor(k[n], chi_L, x);
    return coef_gt[n] * br_factor(k[n], chi_R, x);
}

double HermitianModeSet::deriv_at(std::size_t n, double x, bool from_left) const {
    const double chi_L = (boundary == Boundary::Open) ? params.chi_L : 0.0;
    const double chi_R = (boundary == Boundary::Open) ? params.chi_R : 0.0;
    const double kn = k[n];
    const bool left = (x < params.x0) || (x == params.x0 && from_left);
    if (left)
        return coef_lt[n] *
               (-kn * std::sin(kn * x) - chi_L * kn * kn * std::cos(kn * x));
    return coef_gt[n] * (kn * std::sin(kn * (1.0 - x)) +
                         chi_R * kn * kn * std::cos(kn * (1.0 - x)));
}

double closed_char(double k, const CircuitParams& p) {
    const double raw = std::sin(k) + p.chi_s * k * std::cos(k * p.x0) *
                                         std::cos(k * (1.0 - p.x0));
    return raw / (1.0 + p.chi_s * k);
}

double open_char(double k, const CircuitParams& p) {
    const double sx = std::sin(k * p.x0), cx = std::cos(k * p.x0);
    const double sy = std::sin(k * (1.0 - p.x0)), cy = std::cos(k * (1.0 - p.x0));
    const double raw =
        (1.0 - p.chi_R * p.chi_L * k * k) * std::sin(k) +
        (p.chi_R + p.chi_L) * k * std::cos(k) + p.chi_s * k * cx * cy -
        p.chi_R * p.chi_s * k * k * cx * sy - p.chi_L * p.chi_s * k * k * sx * cy +
        p.chi_R * p.chi_L * p.chi_s * k * k * k * sx * sy;
    return raw /
           ((1.0 + p.chi_s * k) * (1.0 + p.chi_R * k) * (1.0 + p.chi_L * k));
}

cdouble quasi_char(cdouble w, const CircuitParams& p) {
    const cdouble a = 1.0 - 2.0 * I_UNIT * w * p.chi_L;
    const cdouble b = 1.0 - 2.0 * I_UNIT * w * p.chi_R;
    const cdouble P = std::exp(2.0 * I_UNIT * w * p.x0) + a;
    const cdouble Q = std::exp(2.0 * I_UNIT * w * (1.0 - p.x0)) + b;
    const cdouble raw =
        std::exp(2.0 * I_UNIT * w) - a * b + 0.5 * I_UNIT * p.chi_s * w * P * Q;
    return raw / ((1.0 + p.chi_s * w) * (1.0 + p.chi_R * w) * (1.0 + p.chi_L * w));
}

cdouble quasi_char_deriv(cdouble w, const CircuitParams& p) {
    const cdouble a = 1.0 - 2.0 * I_UNIT * w * p.chi_L;
    const cdouble b = 1.0 - 2.0 * I_UNIT * w * p.chi_R;
    const cdouble ex0 = std::exp(2.0 * I_UNIT * w * p.x0);
    const cdouble ey0 = std::exp(2.0 * I_UNIT * w * (1.0 - p.x0));
    const cdouble P = ex0 + a;
    const cdouble Q = ey0 + b;
    const cdouble dP = 2.0 * I_UNIT * p.x0 * ex0 - 2.0 * I_UNIT * p.chi_L;
    const cdouble dQ = 2.0 * I_UNIT * (1.0 - p.x0) * ey0 - 2.0 * I_UNIT * p.chi_R;
    const cdouble raw =
        std::exp(2.0 * I_UNIT * w) - a * b + 0.5 * I_UNIT * p.chi_s * w * P * Q;
    const cdouble draw = 2.0 * I_UNIT * std::exp(2.0 * I_UNIT * w) +
                         2.0 * I_UNIT * p.chi_L * b + 2.0 * I_UNIT * p.chi_R * a +
                         0.5 * I_UNIT * p.chi_s * (P * Q + w * dP * Q + w * P * dQ);
    const cdouble g =
        (1.0 + p.chi_s * w) * (1.0 + p.chi_R * w) * (1.0 + p.chi_L * w);
    const cdouble dg = p.chi_s * (1.0 + p.chi_R * w) * (1.0 + p.chi_L * w) +
                       p.chi_R * (1.0 + p.chi_s * w) * (1.0 + p.chi_L * w) +
                       p.chi_L * (1.0 + p.chi_s * w) * (1.0 + p.chi_R * w);
    return (draw * g - raw * dg) / (g * g);
}

HermitianModeSet closed_cc_modes(const CircuitParams& params, std::size_t n_modes) {
    CircuitParams p = params;
    p.chi_R = 0.0;
    p.chi_L = 0.0;
    return build_hermitian(p, n_modes, Boundary::Closed);
}

HermitianModeSet open_cc_modes(const CircuitParams& params, std::size_t n_modes) {
    return build_hermitian(params, n_modes, Boundary::Open);
}

cdouble QuasiModeSet::phi_at(std::size_t n, double x) const {
    return norm_c[n] * quasi_raw(params, omega[n], x);
}

namespace {

// Winding number of quasi_char around the rectangle [re_lo, re_hi] x
// [im_lo, im_hi], i.e. the number of enclosed zeros (argument principle; the
// rescaled characteristic function is analytic and pole-free off the negative
// real axis). The boundary is sampled adaptively until the phase increment
// between neighbors is resolved.
int quasi_zero_count(const CircuitParams& p, double re_lo, double re_hi,
                     double im_lo, double im_hi) {
    // Counterclockwise boundary.
    const cdouble corners[5] = {{re_lo, im_lo}, {re_hi, im_lo}, {re_hi, im_hi},
                                {re_lo, im_hi}, {re_lo, im_lo}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        const cdouble a = corners[e], b = corners[e + 1];
        // Stack of parameter intervals with cached phases.
        struct Node {
            double t0, t1, ph0, ph1;
        };
        auto phase_at = [&](double t) {
            const cdouble v = quasi_char(a + (b - a) * t, p);
            return std::atan2(v.imag(), v.real());
        };
        std::vector<Node> stack;
        // The characteristic function winds like e^{2 i w}: phase rate <= ~2
        // per unit arc length, so sample densely enough that no step aliases.
        const int base = std::max(
            64, static_cast<int>(std::ceil(std::abs(b - a) / 0.12)));
        double prev_t = 0.0, prev_ph = phase_at(0.0);
        for (int i = 1; i <= base; ++i) {
            const double t = static_cast<double>(i) / base;
            const double ph = phase_at(t);
            stack.push_back({prev_t, t, prev_ph, ph});
            prev_t = t;
            prev_ph = ph;
        }
        while (!stack.empty()) {
            const Node nd = stack.back();
            stack.pop_back();
            double d = nd.ph1 - nd.ph0;
            while (d > M_PI) d -= 2.0 * M_PI;
            while (d < -M_PI) d += 2.0 * M_PI;
            if (std::abs(d) < 0.8 || nd.t1 - nd.t0 < 1e-12) {
                total += d;
                continue;
            }
            const double tm = 0.5 * (nd.t0 + nd.t1);
            const double pm = phase_at(tm);
            stack.push_back({nd.t0, tm, nd.ph0, pm});
            stack.push_back({tm, nd.t1, pm, nd.ph1});
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

}  // namespace

QuasiModeSet quasi_modes(const CircuitParams& params, std::size_t n_modes) {
    QuasiModeSet set;
    set.params = params;
    const auto f = [&](cdouble w) { return quasi_char(w, params); };
    const auto df = [&](cdouble w) { return quasi_char_deriv(w, params); };
    // Search band: wide enough in Re to hold n_modes roots plus edge slack and
    // deep enough in Im for the most damped cluster members; validated below
    // by the argument principle, so the margins only affect speed.
    const double re_lo = 0.05;
    const double re_hi = (static_cast<double>(n_modes) + 2.5) * M_PI;
    const double kappa_band =
        0.5 * std::log(std::abs((1.0 - 2.0 * I_UNIT * re_hi * params.chi_L) *
                                (1.0 - 2.0 * I_UNIT * re_hi * params.chi_R)));
    // Extend the depth until the count saturates: deep cluster members can sit
    // well below the round-trip-loss estimate.
    double im_lo = -(kappa_band + 4.0);
    int expected = quasi_zero_count(params, re_lo, re_hi, im_lo, 0.5);
    for (int i = 0; i < 6; ++i) {
        const int deeper = quasi_zero_count(params, re_lo, re_hi, im_lo - 4.0, 0.5);
        if (deeper == expected) break;
        im_lo -= 4.0;
        expected = deeper;
    }
    if (expected < static_cast<int>(n_modes))
        throw RootBracketFailure("band holds " + std::to_string(expected) +
                                 " quasi modes, need " + std::to_string(n_modes));

    std::vector<cdouble> found;
    auto try_seed = [&](cdouble seed) {
        cdouble root;
        try {
            root = newton_complex(f, df, seed, 1e-11, 200);
        } catch (const NewtonDiverged&) {
            return;
        }
        if (root.imag() > 1e-9) return;
        if (root.imag() > 0.0) root = cdouble(root.real(), 0.0);
        if (root.real() < re_lo || root.real() > re_hi || root.imag() < im_lo)
            return;
        for (const cdouble& r : found)
            if (std::abs(r - root) < 1e-7 * std::max(1.0, std::abs(root))) return;
        found.push_back(root);
    };
    // Round 1: Hermitian wavenumbers with the decay seed from the round-trip
    // reflection loss of the end capacitors:
    // |e^{2 i w}| = |(1 - 2 i chi_L w)(1 - 2 i chi_R w)| at the root.
    const auto seeds_base = open_cc_modes(params, n_modes + 2);
    auto kappa_guess = [&](double k) {
        return 0.5 * std::log(std::abs((1.0 - 2.0 * I_UNIT * k * params.chi_L) *
                                       (1.0 - 2.0 * I_UNIT * k * params.chi_R)));
    };
    for (double k : seeds_base.k) {
        if (k > re_hi) break;
        try_seed({k, -kappa_guess(k)});
        if (static_cast<int>(found.size()) == expected) break;
    }
    // Further rounds: widen the seed fan, then fill residual gaps with a grid.
    if (static_cast<int>(found.size()) < expected) {
        for (double k : seeds_base.k) {
            if (k > re_hi) break;
            const double ks = kappa_guess(k);
            for (double kap : {0.5 * ks, 2.0 * ks, ks + 1.0, ks + 2.0, ks + 3.0})
                for (double off : {0.0, 0.5, -0.5, 1.2, -1.2})
                    try_seed({k + off, -kap});
            if (static_cast<int>(found.size()) == expected) break;
        }
    }
    for (int round = 0;
         round < 4 && static_cast<int>(found.size()) < expected; ++round) {
        const double dre = M_PI / (3.0 + 2.0 * round);
        const int n_im = 6 + 3 * round;
        for (double re = re_lo + 0.5 * dre; re < re_hi; re += dre)
            for (int j = 0; j < n_im; ++j)
                try_seed({re, im_lo * (j + 0.5) / n_im});
    }
    if (static_cast<int>(found.size()) != expected)
        throw RootBracketFailure("found " + std::to_string(found.size()) +
                                 " of " + std::to_string(expected) +
                                 " quasi modes in the band");
    std::sort(found.begin(), found.end(),
              [](const cdouble& x, const cdouble& y) { return x.real() < y.real(); });
    found.resize(n_modes);
    set.omega = found;
    set.norm_c.resize(n_modes);
    set.phi_x0.resize(n_modes);
    set.delta.resize(n_modes);
    set.theta.resize(n_modes);
    for (std::size_t n = 0; n < n_modes; ++n) {
        const cdouble w = set.omega[n];
        cdouble norm = std::sqrt(quasi_res_norm_sq(params, w));
        cdouble phi0 = quasi_raw(params, w, params.x0) / norm;
        // Overall sign convention: Re phi(x0) >= 0 (Im >= 0 as tie-break).
        if (phi0.real() < 0.0 ||
            (phi0.real() == 0.0 && phi0.imag() < 0.0)) {
            norm = -norm;
            phi0 = -phi0;
        }
        set.norm_c[n] = 1.0 / norm;
        set.phi_x0[n] = phi0;
        set.delta[n] = std::atan2(phi0.imag(), phi0.real());
        set.theta[n] = std::atan2(-w.imag(), w.real());
    }
    return set;
}

double coupling_g(const CircuitParams& params, double nu_n, double abs_phi_x0) {
    return 0.5 * params.gamma * std::sqrt(params.chi_j) *
           std::sqrt(params.omega_j * nu_n) * abs_phi_x0;
}

std::vector<double> couplings(const CircuitParams& params, const QuasiModeSet& modes) {
    std::vector<double> g(modes.size());
    for (std::size_t n = 0; n < modes.size(); ++n)
        g[n] = coupling_g(params, modes.nu(n), std::abs(modes.phi_x0[n]));
    return g;
}

LineFit asymptotic_exponent(const std::vector<double>& series, std::size_t first,
                            std::size_t last) {
    if (first < 1 || last > series.size() || last < first + 9)
        throw InputError("fit range must cover at least 10 modes");
    std::vector<double> lx, ly;
    for (std::size_t n = first; n <= last; ++n) {
        if (series[n - 1] <= 0.0)
            throw NonPositiveEntry("series entry " + std::to_string(n) +
                                   " is not positive");
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(series[n - 1]));
    }
    return fit_line(lx, ly);
}

}  // namespace cqed
