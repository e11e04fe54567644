#include "qshape/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qshape/errors.hpp"

namespace qshape {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_match(const CoeffVector& c, const Hamiltonian& h) {
    if (c.basis_n_points != h.n_points ||
        c.n_coeffs() != h.n_points - 1) {
        throw DimensionMismatch("coefficients on " +
                                std::to_string(c.basis_n_points) +
                                " points do not match Hamiltonian on " +
                                std::to_string(h.n_points));
    }
}

double wrap_angle(double a) {
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    // Angles a hair below 2*pi are the same loop closure as 0.
    if (two_pi - a < 1e-9) a = 0.0;
    return a;
}

struct Rational {
    long long p = 0;
    long long q = 1;
    double err = 0.0;
};

// Best continued-fraction convergent of x with denominator <= max_den.
// Semiconvergents are not considered: exact rationals with denominator
// within the cap terminate at themselves, which is all the precision the
// misclosure test downstream needs.
Rational best_rational(double x, long long max_den) {
    long long pm2 = 0, pm1 = 1; // p_{-2}, p_{-1}
    long long qm2 = 1, qm1 = 0; // q_{-2}, q_{-1}
    Rational best{static_cast<long long>(std::llround(x)), 1, 0.0};
    double xi = x;
    for (int it = 0; it < 64; ++it) {
        const double af = std::floor(xi);
        if (std::abs(af) > 9e15) break;
        const long long a = static_cast<long long>(af);
        // Denominators grow monotonically; test the next one in floating
        // point first so the integer recurrence cannot overflow.
        if (af * static_cast<double>(qm1) + static_cast<double>(qm2) >
            static_cast<double>(max_den)) {
            break;
        }
        const long long p = a * pm1 + pm2;
        const long long q = a * qm1 + qm2;
        if (q > 0) best = {p, q, 0.0};
        pm2 = pm1; pm1 = p;
        qm2 = qm1; qm1 = q;
        const double frac = xi - af;
        if (frac < 1e-15) break;
        xi = 1.0 / frac;
    }
    best.err = std::abs(x - static_cast<double>(best.p) /
                                static_cast<double>(best.q));
    return best;
}

} // namespace

Hamiltonian make_hamiltonian(int n_points, std::vector<double> energies) {
    if (n_points < 3) {
        throw TooFewPoints("a Hamiltonian needs at least 3 points, got " +
                           std::to_string(n_points));
    }
    if (static_cast<int>(energies.size()) != n_points - 1) {
        throw DimensionMismatch("expected " + std::to_string(n_points - 1) +
                                " energies for " + std::to_string(n_points) +
                                " points, got " + std::to_string(energies.size()));
    }
    for (double e : energies) {
        if (!std::isfinite(e)) {
            throw InvalidParams("energies must be finite");
        }
    }
    return Hamiltonian{n_points, std::move(energies)};
}

CoeffVector evolve_coeffs(const CoeffVector& c, const Hamiltonian& h, double t) {
    check_match(c, h);
    CoeffVector out = c;
    for (std::size_t k = 0; k < out.coefficients.size(); ++k) {
        out.coefficients[k] *= std::polar(1.0, -h.energies[k] * t);
    }
    return out;
}

ShapeVector evolve(const ShapeVector& s, const Hamiltonian& h, double t) {
    if (s.n_points() != h.n_points) {
        throw DimensionMismatch("shape on " + std::to_string(s.n_points()) +
                                " points does not match Hamiltonian on " +
                                std::to_string(h.n_points));
    }
    const EigenBasis b = basis(h.n_points);
    return superpose(evolve_coeffs(decompose(s, b), h, t), b);
}

double energy_expectation(const CoeffVector& c, const Hamiltonian& h) {
    check_match(c, h);
    double e = 0.0;
    for (std::size_t k = 0; k < c.coefficients.size(); ++k) {
        e += std::norm(c.coefficients[k]) * h.energies[k];
    }
    return e;
}

double energy_variance(const CoeffVector& c, const Hamiltonian& h) {
    const double mean = energy_expectation(c, h);
    double v = 0.0;
    for (std::size_t k = 0; k < c.coefficients.size(); ++k) {
        const double d = h.energies[k] - mean;
        v += std::norm(c.coefficients[k]) * d * d;
    }
    return v;
}

std::vector<int> support_of(const CoeffVector& c, double tol) {
    std::vector<int> s;
    for (int k = 1; k <= c.n_coeffs(); ++k) {
        if (std::abs(c.coefficients[static_cast<std::size_t>(k - 1)]) > tol) {
            s.push_back(k);
        }
    }
    return s;
}

Periodicity period_of(const Hamiltonian& h, const std::vector<int>& support) {
    if (support.empty()) {
        throw EmptySupport("period detection needs a non-empty support");
    }
    std::vector<double> es;
    es.reserve(support.size());
    for (int k : support) {
        if (k < 1 || k > h.n_points - 1) {
            throw IndexOutOfRange("support index " + std::to_string(k) +
                                  " outside 1.." + std::to_string(h.n_points - 1));
        }
        es.push_back(h.energies[static_cast<std::size_t>(k - 1)]);
    }

    double scale = 1.0;
    for (double e : es) scale = std::max(scale, std::abs(e));
    const double zero_tol = 1e-12 * scale;

    // Only energy differences against the first support level matter: a
    // common period multiplies every coefficient by the same phase factor.
    std::vector<double> diffs;
    for (std::size_t i = 1; i < es.size(); ++i) {
        const double d = es[i] - es[0];
        if (std::abs(d) > zero_tol) diffs.push_back(d);
    }
    if (diffs.empty()) {
        Periodicity out;
        out.kind = Periodicity::Kind::stationary;
        return out;
    }

    const double base = diffs[0];
    constexpr long long max_den = 1000000;
    constexpr double rel_tol = 1e-9;

    long long lcm_den = 1;
    std::vector<Rational> ratios;
    ratios.reserve(diffs.size());
    for (double d : diffs) {
        const Rational r = best_rational(d / base, max_den);
        ratios.push_back(r);
        const long long g = std::gcd(lcm_den, r.q);
        // Overflow guard: a least common multiple this large means the
        // closure time is astronomically long; call the trajectory open.
        if (lcm_den / g > 1000000000000000LL / r.q) {
            return Periodicity{};
        }
        lcm_den = lcm_den / g * r.q;
    }

    // Phase misclosure of component i at T = 2*pi*L/|base| is
    // 2*pi*L*|r_i - p_i/q_i|; reject unless it is negligible relative to
    // the ratio's size.
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        const double ratio = diffs[i] / base;
        if (static_cast<double>(lcm_den) * ratios[i].err >
            rel_tol * std::max(1.0, std::abs(ratio))) {
            return Periodicity{};
        }
    }

    Periodicity out;
    out.kind = Periodicity::Kind::periodic;
    out.period = two_pi * static_cast<double>(lcm_den) / std::abs(base);
    return out;
}

PhaseBreakdown phase_breakdown(const ShapeVector& s, const Hamiltonian& h) {
    if (s.n_points() != h.n_points) {
        throw DimensionMismatch("shape on " + std::to_string(s.n_points()) +
                                " points does not match Hamiltonian on " +
                                std::to_string(h.n_points));
    }
    const EigenBasis b = basis(h.n_points);
    const CoeffVector c = decompose(s, b);
    const Periodicity p = period_of(h, support_of(c));

    PhaseBreakdown out;
    if (p.is_stationary()) {
        out.stationary = true;
        return out;
    }
    if (!p.is_periodic()) {
        throw NotCyclic("no common period exists within the denominator bound");
    }

    out.period = p.period;
    // <psi(0)|psi(T)> = sum_k |c_k|^2 exp(-i E_k T); populations are
    // conserved, so <H> is too and the dynamical integral is -<H>*T.
    complex_t closure{0.0, 0.0};
    for (std::size_t k = 0; k < c.coefficients.size(); ++k) {
        closure += std::norm(c.coefficients[k]) *
                   std::polar(1.0, -h.energies[k] * out.period);
    }
    out.total = std::arg(closure);
    out.dynamical = -energy_expectation(c, h) * out.period;
    out.geometric = wrap_angle(out.total - out.dynamical);
    return out;
}

double geometric_phase(const ShapeVector& s, const Hamiltonian& h) {
    return phase_breakdown(s, h).geometric;
}

double dynamical_phase_quadrature(const CoeffVector& c, const Hamiltonian& h,
                                  double t_end, int steps) {
    check_match(c, h);
    if (steps < 2) {
        throw InvalidParams("quadrature needs at least 2 steps");
    }
    int n = steps;
    if (n % 2 != 0) ++n;
    const double dt = t_end / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double hi = energy_expectation(evolve_coeffs(c, h, i * dt), h);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * hi;
    }
    return sum * dt / 3.0;
}

Trajectory sample_trajectory(const ShapeVector& s, const Hamiltonian& h,
                             double t0, double t1, int n_samples) {
    if (n_samples < 1) {
        throw InvalidParams("trajectory needs at least 1 sample");
    }
    const EigenBasis b = basis(h.n_points);
    const CoeffVector c0 = decompose(s, b);
    check_match(c0, h);

    Trajectory tr;
    tr.times.reserve(static_cast<std::size_t>(n_samples));
    tr.states.reserve(static_cast<std::size_t>(n_samples));
    tr.coefficients.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double t =
            n_samples == 1
                ? t0
                : t0 + (t1 - t0) * static_cast<double>(i) / (n_samples - 1);
        CoeffVector ct = evolve_coeffs(c0, h, t - t0);
        tr.times.push_back(t);
        tr.states.push_back(superpose(ct, b));
        tr.coefficients.push_back(std::move(ct));
    }
    return tr;
}

} // namespace qshape
