#include "cqed/linear.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "cqed/errors.hpp"
#include "cqed/rootfind.hpp"

namespace cqed {

namespace {

constexpr cdouble kI{0.0, 1.0};

cdouble bare_pole(const KernelCoefficients& c, std::size_t n) {
    return cdouble(-c.kappa[n], -c.nu[n]);
}

void check_bare_proximity(cdouble s, const KernelCoefficients& c) {
    for (std::size_t n = 0; n < c.size(); ++n) {
        const cdouble z = bare_pole(c, n);
        if (std::abs(s - z) < 1e-12 || std::abs(s - std::conj(z)) < 1e-12)
            throw BarePoleProximity("s within 1e-12 of a bare kernel pole");
    }
}

// Per-mode rational term of the bracket (the exact Laplace image of the
// memory kernel plus its instantaneous constant): see CharacteristicModel.
cdouble bracket_term(cdouble s, const KernelCoefficients& c, std::size_t n) {
    const double co = std::cos(2.0 * c.delta[n]);
    const double si = std::sin(2.0 * c.delta[n]);
    const cdouble sk = s + c.kappa[n];
    const cdouble q = sk * sk + c.nu[n] * c.nu[n];
    return c.M[n] * s * (sk * co + c.nu[n] * si) / q;
}

cdouble bracket_term_deriv(cdouble s, const KernelCoefficients& c, std::size_t n) {
    const double co = std::cos(2.0 * c.delta[n]);
    const double si = std::sin(2.0 * c.delta[n]);
    const cdouble sk = s + c.kappa[n];
    const cdouble q = sk * sk + c.nu[n] * c.nu[n];
    const cdouble num = s * (sk * co + c.nu[n] * si);
    const cdouble dnum = (2.0 * s + c.kappa[n]) * co + c.nu[n] * si;
    return c.M[n] * (dnum * q - num * 2.0 * sk) / (q * q);
}

// The lambda-dependent part of D_j divided by lambda: omega_j^2 (-gamma + sum).
cdouble dj_dlambda(cdouble s, const CharacteristicModel& m) {
    cdouble sum = -m.gamma + m.coeffs.zero_mode + m.coeffs.friction * s;
    for (std::size_t n = 0; n < m.coeffs.size(); ++n) sum += bracket_term(s, m.coeffs, n);
    return m.omega_j * m.omega_j * sum;
}

// Local model of D around the bare pole z_n: D is regular there apart from
// the n-th term, whose denominator Q_n ~ Q_n'(z_n)(s - z_n), so with
// x = s - z_n,
//   D(s) ~ D_reg(z_n) + D_reg'(z_n) x + C / x,
// a quadratic in x. Its small root is the resonator-like root budding off z_n;
// the large root is the continuation of the regular root (the qubit-like one
// when omega_j sits near nu_n, which is exactly the avoided-crossing case
// where a linear estimate degenerates).
struct LocalBudRoots {
    cdouble small;
    cdouble large;
};
LocalBudRoots bare_bud_roots(const CharacteristicModel& m, std::size_t n, double lambda) {
    const KernelCoefficients& c = m.coeffs;
    const cdouble z = bare_pole(c, n);
    const double w2 = m.omega_j * m.omega_j;
    cdouble b = z * z + w2 * (1.0 - lambda * (m.gamma - c.zero_mode - c.friction * z));
    cdouble a = 2.0 * z + lambda * w2 * c.friction;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k == n) continue;
        b += lambda * w2 * bracket_term(z, c, k);
        a += lambda * w2 * bracket_term_deriv(z, c, k);
    }
    const double co = std::cos(2.0 * c.delta[n]);
    const double si = std::sin(2.0 * c.delta[n]);
    const cdouble sk = z + c.kappa[n];  // = -i nu_n
    const cdouble cc = lambda * w2 * c.M[n] * z * (sk * co + c.nu[n] * si) / (2.0 * sk);
    // Stable quadratic solve of a x^2 + b x + cc = 0.
    const cdouble disc = std::sqrt(b * b - 4.0 * a * cc);
    const cdouble q = std::abs(b + disc) > std::abs(b - disc) ? -0.5 * (b + disc)
                                                              : -0.5 * (b - disc);
    LocalBudRoots out;
    cdouble x1 = q / a;
    cdouble x2 = cc / q;
    if (std::abs(x1) < std::abs(x2)) std::swap(x1, x2);
    out.small = x2;
    out.large = x1;
    return out;
}

// Track one root of D(s; lambda) from lambda_0 to 1 with adaptive continuation
// steps. Each Newton result is compared against the first-order prediction
// from dD/dlambda; a jump far beyond it means the tracker hopped basins, so
// the step is halved before the classification is declared lost.
// Smallest |D| reachable in double precision near s: the evaluation noise is
// amplified by the local slope times the representable resolution of s itself.
// Weakly hybridized resonator roots sit close to a pole of D where |D'| is
// huge, so a fixed tolerance would be unattainable there.
double residual_floor(const CharacteristicModel& m, cdouble s, double lambda) {
    return 1e-16 * std::abs(dj_deriv(s, m, lambda)) * (1.0 + std::abs(s));
}

cdouble track_root(const CharacteristicModel& m, cdouble p, double lambda0,
                   const char* label) {
    const double scale = std::max(1.0, m.omega_j * m.omega_j);
    auto solve = [&](cdouble s0, double lambda) {
        auto f = [&](cdouble s) { return dj(s, m, lambda); };
        auto df = [&](cdouble s) { return dj_deriv(s, m, lambda); };
        const double tol = 1e-11 * scale + 100.0 * residual_floor(m, s0, lambda);
        return newton_complex(f, df, s0, tol);
    };
    double lambda = lambda0;
    double dl = (1.0 - lambda0) / 10.0;
    const double dl_min = (1.0 - lambda0) / 16384.0;
    while (lambda < 1.0 - 1e-15) {
        const double step = std::min(dl, 1.0 - lambda);
        const cdouble dprime = dj_deriv(p, m, lambda);
        const double predicted =
            std::abs(dprime) > 0.0 ? step * std::abs(dj_dlambda(p, m) / dprime) : 0.0;
        bool accept = false;
        cdouble next;
        try {
            next = solve(p, lambda + step);
            // A jump far beyond the tangent prediction means Newton left the
            // basin of the tracked root (the resonator-like basins are tiny).
            accept = std::abs(next - p) <= 10.0 * predicted + 1e-9 * (1.0 + m.omega_j);
        } catch (const NewtonDiverged&) {
            accept = false;
        }
        if (!accept) {
            if (step <= dl_min)
                throw MisclassifiedPole(std::string(label) +
                                        " pole tracking lost continuity during homotopy");
            dl = step / 2.0;
            continue;
        }
        const double drift = std::abs(next - p);
        p = next;
        lambda += step;
        if (drift < predicted) dl = std::min(2.0 * dl, 0.1);
    }
    return p;
}

}  // namespace

CharacteristicModel CharacteristicModel::from_modes(const CircuitParams& params,
                                                    const QuasiModeSet& modes,
                                                    double omega_j_override) {
    CharacteristicModel m;
    m.omega_j = omega_j_override > 0.0 ? omega_j_override : params.omega_j;
    m.gamma = params.gamma;
    m.coeffs = KernelCoefficients::from_modes(params, modes);
    return m;
}

cdouble dj(cdouble s, const CharacteristicModel& m, double lambda) {
    check_bare_proximity(s, m.coeffs);
    cdouble bracket = 1.0 - lambda * (m.gamma - m.coeffs.zero_mode - m.coeffs.friction * s);
    for (std::size_t n = 0; n < m.coeffs.size(); ++n)
        bracket += lambda * bracket_term(s, m.coeffs, n);
    return s * s + m.omega_j * m.omega_j * bracket;
}

cdouble dj_deriv(cdouble s, const CharacteristicModel& m, double lambda) {
    check_bare_proximity(s, m.coeffs);
    cdouble sum = m.coeffs.friction;
    for (std::size_t n = 0; n < m.coeffs.size(); ++n)
        sum += bracket_term_deriv(s, m.coeffs, n);
    return 2.0 * s + lambda * m.omega_j * m.omega_j * sum;
}

bool PoleSet::all_stable() const {
    if (p_j.real() >= 0.0) return false;
    for (const cdouble& p : p_n)
        if (p.real() >= 0.0) return false;
    return true;
}

PoleSet find_poles(const CharacteristicModel& m) {
    PoleSet out;
    out.omega_j = m.omega_j;
    const double scale = std::max(1.0, m.omega_j * m.omega_j);

    // Helper shared by both classes of tracks: start the continuation at a
    // small coupling fraction from a locally predicted root, halving the
    // starting fraction until Newton confirms the prediction.
    auto seeded_track = [&](std::size_t n, bool bud, const char* label) {
        const cdouble z = bare_pole(m.coeffs, n);
        double lambda0 = 0.1;
        while (lambda0 >= 1.0 / 16384.0) {
            const LocalBudRoots local = bare_bud_roots(m, n, lambda0);
            const cdouble guess = bud ? local.small : local.large;
            const double basin =
                std::min(0.5 * std::abs(guess), 0.45 * std::abs(local.large - local.small));
            try {
                auto f = [&](cdouble s) { return dj(s, m, lambda0); };
                auto df = [&](cdouble s) { return dj_deriv(s, m, lambda0); };
                const double tol =
                    1e-11 * scale + 100.0 * residual_floor(m, z + guess, lambda0);
                const cdouble start = newton_complex(f, df, z + guess, tol);
                if (std::abs(start - z - guess) <= basin)
                    return track_root(m, start, lambda0, label);
            } catch (const SolverError&) {
            }
            lambda0 /= 2.0;
        }
        throw MisclassifiedPole(std::string(label) +
                                " pole could not be seeded near a bare pole");
    };

    // Qubit-like pole: continuation of -i omega_j from the uncoupled limit.
    // When omega_j lies close to a bare resonance the continuation degenerates
    // (level repulsion splits like sqrt(lambda)), so seed it as the regular
    // branch of the local quadratic at that bare pole instead.
    std::size_t near = m.size();
    double near_dist = 0.0;
    for (std::size_t n = 0; n < m.size(); ++n) {
        const double d = std::abs(cdouble(0.0, -m.omega_j) - bare_pole(m.coeffs, n));
        if (near == m.size() || d < near_dist) {
            near = n;
            near_dist = d;
        }
    }
    const double spacing = m.size() >= 2 ? 0.5 * std::abs(m.coeffs.nu[1] - m.coeffs.nu[0])
                                         : m.omega_j;
    if (near != m.size() && near_dist < 0.5 * spacing &&
        std::abs(bare_bud_roots(m, near, 1.0).small) >
            1e-9 * std::max(1.0, std::abs(bare_pole(m.coeffs, near)))) {
        out.p_j = seeded_track(near, false, "qubit-like");
    } else {
        out.p_j = track_root(m, cdouble(0.0, -m.omega_j), 0.0, "qubit-like");
    }
    if (out.p_j.imag() > 1e-9)
        throw MisclassifiedPole("qubit-like tracking ended in the upper half-plane");

    // Resonator-like poles: each buds off its bare kernel pole z_n as the
    // coupling switches on. Modes with a numerically invisible displacement
    // keep z_n exactly (their residues vanish with the same measure).
    out.p_n.reserve(m.size());
    out.z_n.reserve(m.size());
    for (std::size_t n = 0; n < m.size(); ++n) {
        const cdouble z = bare_pole(m.coeffs, n);
        out.z_n.push_back(z);
        if (std::abs(bare_bud_roots(m, n, 1.0).small) < 1e-9 * std::max(1.0, std::abs(z))) {
            out.p_n.push_back(z);
            continue;
        }
        out.p_n.push_back(seeded_track(n, true, "resonator-like"));
    }

    // Validation: residual smallness and pairwise separation.
    auto check_residual = [&](cdouble p) {
        if (std::abs(dj(p, m)) > 1e-9 * scale + 1e3 * residual_floor(m, p, 1.0))
            throw NewtonDiverged("pole residual exceeds tolerance");
    };
    check_residual(out.p_j);
    std::vector<cdouble> all{out.p_j};
    for (std::size_t n = 0; n < out.p_n.size(); ++n) {
        if (out.p_n[n] != out.z_n[n]) check_residual(out.p_n[n]);
        all.push_back(out.p_n[n]);
    }
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (std::abs(all[i] - all[j]) < 1e-8 * std::max(1.0, std::abs(all[i])))
                throw RootCollision("two hybridized poles coincide within tolerance");
    return out;
}

ResidueSet residues(const CharacteristicModel& m, const PoleSet& poles) {
    ResidueSet r;
    auto at = [&](cdouble p, cdouble& ax, cdouble& ay) {
        const cdouble dprime = dj_deriv(p, m);
        if (std::abs(dprime) < 1e-10)
            throw DegeneratePole("|D'| below 1e-10 at a hybridized pole");
        ax = p / dprime;
        ay = m.omega_j / dprime;
    };
    at(poles.p_j, r.Aj_X, r.Aj_Y);
    r.An_X.resize(poles.p_n.size());
    r.An_Y.resize(poles.p_n.size());
    for (std::size_t n = 0; n < poles.p_n.size(); ++n) {
        if (poles.p_n[n] == poles.z_n[n]) {
            // Uncoupled mode: the pole of the kernel term cancels and carries
            // no residue in the qubit response.
            r.An_X[n] = r.An_Y[n] = 0.0;
            continue;
        }
        at(poles.p_n[n], r.An_X[n], r.An_Y[n]);
    }
    return r;
}

double ResidueSet::sum_x() const {
    double s = 2.0 * Aj_X.real();
    for (const cdouble& a : An_X) s += 2.0 * a.real();
    return s;
}

std::vector<double> trajectory_linear(const PoleSet& poles, const ResidueSet& res,
                                      double x0, double y0,
                                      const std::vector<double>& t_grid) {
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        cdouble acc = (res.Aj_X * x0 + res.Aj_Y * y0) * std::exp(poles.p_j * t);
        for (std::size_t n = 0; n < poles.p_n.size(); ++n)
            acc += (res.An_X[n] * x0 + res.An_Y[n] * y0) * std::exp(poles.p_n[n] * t);
        out.push_back(2.0 * acc.real());
    }
    return out;
}

cdouble toy_rwa_dj(cdouble s, double omega_j, double omega_c, double kappa_c,
                   double g, bool rwa) {
    const cdouble cav = s * s + 2.0 * kappa_c * s + omega_c * omega_c;
    if (!rwa) return s * s + omega_j * omega_j - 4.0 * g * g * omega_j * omega_c / cav;
    const double sum = omega_j + omega_c;
    return s * s + omega_j * omega_j + g * g - g * g * sum * sum / (cav + g * g);
}

std::vector<cdouble> toy_poles(double omega_j, double omega_c, double kappa_c,
                               double g, bool rwa) {
    // Clearing the cavity denominator gives a monic quartic in s.
    double a3, a2, a1, a0;
    if (!rwa) {
        a3 = 2.0 * kappa_c;
        a2 = omega_c * omega_c + omega_j * omega_j;
        a1 = 2.0 * kappa_c * omega_j * omega_j;
        a0 = omega_j * omega_j * omega_c * omega_c - 4.0 * g * g * omega_j * omega_c;
    } else {
        const double wj2 = omega_j * omega_j + g * g;
        const double wc2 = omega_c * omega_c + g * g;
        const double sum = omega_j + omega_c;
        a3 = 2.0 * kappa_c;
        a2 = wc2 + omega_j * omega_j + g * g;
        a1 = 2.0 * kappa_c * wj2;
        a0 = wj2 * wc2 - g * g * sum * sum;
    }
    Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
    comp(0, 3) = -a0;
    comp(1, 3) = -a1;
    comp(2, 3) = -a2;
    comp(3, 3) = -a3;
    comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
    const Eigen::Vector4cd ev = Eigen::EigenSolver<Eigen::Matrix4d>(comp).eigenvalues();
    std::vector<cdouble> roots{ev(0), ev(1), ev(2), ev(3)};
    std::sort(roots.begin(), roots.end(), [](cdouble a, cdouble b) {
        if (a.imag() != b.imag()) return a.imag() < b.imag();
        return a.real() < b.real();
    });
    return roots;
}

std::vector<SweepPoint> purcell_lamb_sweep(const CircuitParams& params,
                                           const QuasiModeSet& modes,
                                           const std::vector<double>& omega_j_grid) {
    CharacteristicModel m = CharacteristicModel::from_modes(params, modes);
    std::vector<SweepPoint> out;
    out.reserve(omega_j_grid.size());
    for (double wj : omega_j_grid) {
        if (wj <= 0.0) throw NonPositiveEnergy("sweep frequency must be positive");
        for (std::size_t n = 0; n < modes.size(); ++n)
            if (std::abs(wj - modes.nu(n)) < 1e-6)
                throw OnResonance("sweep grid point within 1e-6 of a bare resonance");
        m.omega_j = wj;
        const PoleSet poles = find_poles(m);
        out.push_back({wj, poles.alpha_j(), poles.lamb()});
    }
    return out;
}

double qubit_pole_drift(const CircuitParams& params, std::size_t n_modes,
                        double omega_j_override) {
    const QuasiModeSet coarse = quasi_modes(params, n_modes);
    const QuasiModeSet fine = quasi_modes(params, 2 * n_modes);
    const cdouble p1 =
        find_poles(CharacteristicModel::from_modes(params, coarse, omega_j_override)).p_j;
    const cdouble p2 =
        find_poles(CharacteristicModel::from_modes(params, fine, omega_j_override)).p_j;
    return std::abs(p2 - p1);
}

}  // namespace cqed
