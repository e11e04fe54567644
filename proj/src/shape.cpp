#include "qshape/shape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qshape/eigenshape.hpp"
#include "qshape/errors.hpp"

namespace qshape {

namespace {

complex_t centroid_of(const cvector_t& v) {
    complex_t sum{0.0, 0.0};
    for (const auto& z : v) sum += z;
    return sum / static_cast<double>(v.size());
}

double max_abs(const cvector_t& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

} // namespace

PointConfig::PointConfig(cvector_t pts) : points(std::move(pts)) {
    if (points.size() < 3) {
        throw TooFewPoints("a configuration needs at least 3 points, got " +
                           std::to_string(points.size()));
    }
}

ShapeVector ShapeVector::canonical(cvector_t raw) {
    if (raw.size() < 3) {
        throw TooFewPoints("a shape vector needs at least 3 amplitudes, got " +
                           std::to_string(raw.size()));
    }

    const complex_t mean = centroid_of(raw);
    for (auto& z : raw) z -= mean;

    double norm2 = 0.0;
    for (const auto& z : raw) norm2 += std::norm(z);
    const double norm = std::sqrt(norm2);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ZeroVector("cannot canonicalize a zero or non-finite vector");
    }
    for (auto& z : raw) z /= norm;

    // Phase fix: rotate so the largest-magnitude amplitude is real positive.
    // Magnitudes within a relative window of the maximum count as tied and
    // the lowest index wins, so rounding noise cannot flip the anchor
    // between analytically-equal entries.
    const double peak = max_abs(raw);
    std::size_t anchor = 0;
    for (std::size_t j = 0; j < raw.size(); ++j) {
        if (std::abs(raw[j]) >= peak * (1.0 - tol::phase_tie)) {
            anchor = j;
            break;
        }
    }
    const double phase = std::arg(raw[anchor]);
    if (phase != 0.0) {
        const complex_t rot = std::polar(1.0, -phase);
        for (auto& z : raw) z *= rot;
    }
    return ShapeVector(std::move(raw));
}

Permutation Permutation::identity(int n) {
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
}

Permutation Permutation::transposition(int n, int i, int j) {
    if (i < 1 || i > n || j < 1 || j > n) {
        throw IndexOutOfRange("transposition indices must lie in 1.." +
                              std::to_string(n));
    }
    auto p = identity(n);
    std::swap(p.map_[static_cast<std::size_t>(i - 1)],
              p.map_[static_cast<std::size_t>(j - 1)]);
    return p;
}

Permutation Permutation::from_one_based(const std::vector<int>& images) {
    std::vector<int> m;
    m.reserve(images.size());
    for (int v : images) m.push_back(v - 1);
    return from_zero_based(std::move(m));
}

Permutation Permutation::from_zero_based(std::vector<int> images) {
    const int n = static_cast<int>(images.size());
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : images) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
            throw InvalidParams("permutation images must be a bijection on the labels");
        }
        seen[static_cast<std::size_t>(v)] = 1;
    }
    return Permutation(std::move(images));
}

Permutation compose(const Permutation& q, const Permutation& p) {
    if (q.size() != p.size()) {
        throw DimensionMismatch("cannot compose permutations of sizes " +
                                std::to_string(q.size()) + " and " +
                                std::to_string(p.size()));
    }
    std::vector<int> m(static_cast<std::size_t>(p.size()));
    for (int i = 0; i < p.size(); ++i) m[static_cast<std::size_t>(i)] = q(p(i));
    return Permutation::from_zero_based(std::move(m));
}

ShapeVector normalize(const PointConfig& config) {
    if (config.n_points() < 3) {
        throw TooFewPoints("a configuration needs at least 3 points, got " +
                           std::to_string(config.n_points()));
    }
    const complex_t mean = centroid_of(config.points);
    const double scale = max_abs(config.points);
    double spread = 0.0;
    for (const auto& z : config.points) {
        spread = std::max(spread, std::abs(z - mean));
    }
    if (spread <= tol::degenerate_spread * scale) {
        throw DegenerateConfig("all points coincide; the configuration has no shape");
    }
    return ShapeVector::canonical(config.points);
}

complex_t overlap(const ShapeVector& a, const ShapeVector& b) {
    if (a.n_points() != b.n_points()) {
        throw DimensionMismatch("overlap needs equal point counts, got " +
                                std::to_string(a.n_points()) + " and " +
                                std::to_string(b.n_points()));
    }
    complex_t s{0.0, 0.0};
    for (int i = 0; i < a.n_points(); ++i) {
        s += std::conj(a.amplitudes()[static_cast<std::size_t>(i)]) *
             b.amplitudes()[static_cast<std::size_t>(i)];
    }
    return s;
}

double transition_probability(const ShapeVector& a, const ShapeVector& b) {
    return std::clamp(std::norm(overlap(a, b)), 0.0, 1.0);
}

double fs_distance(const ShapeVector& a, const ShapeVector& b) {
    // Same angle as 2*acos(sqrt(p)), computed from the residual of b after
    // projecting out a. acos alone floors near-identical rays at ~1e-8;
    // atan2 of the directly-computed residual keeps them at machine scale.
    const complex_t g = overlap(a, b);
    double res2 = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
        res2 += std::norm(b.amplitudes()[i] - g * a.amplitudes()[i]);
    }
    return 2.0 * std::atan2(std::sqrt(res2), std::abs(g));
}

ShapeVector permute(const ShapeVector& s, const Permutation& p) {
    if (p.size() != s.n_points()) {
        throw DimensionMismatch("permutation size " + std::to_string(p.size()) +
                                " does not match shape on " +
                                std::to_string(s.n_points()) + " points");
    }
    cvector_t out(s.amplitudes().size());
    for (int i = 0; i < s.n_points(); ++i) {
        out[static_cast<std::size_t>(p(i))] =
            s.amplitudes()[static_cast<std::size_t>(i)];
    }
    return ShapeVector::canonical(std::move(out));
}

double unlabeled_distance(const ShapeVector& a, const ShapeVector& b) {
    if (a.n_points() != b.n_points()) {
        throw DimensionMismatch("unlabeled distance needs equal point counts");
    }
    const int n = a.n_points();
    if (n > 10) {
        throw TooManyPoints("exhaustive relabelling search is capped at 10 points, got " +
                            std::to_string(n));
    }
    // max_p |<a|P_p|b>|: with permuted[p(i)] = b[i], the overlap against a
    // is sum_i conj(a[p(i)]) * b[i]. The full group is symmetric under
    // inversion, so iterating images directly is enough.
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
        complex_t s{0.0, 0.0};
        for (int i = 0; i < n; ++i) {
            s += std::conj(a.amplitudes()[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]) *
                 b.amplitudes()[static_cast<std::size_t>(i)];
        }
        best = std::max(best, std::norm(s));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return 2.0 * std::acos(std::sqrt(std::clamp(best, 0.0, 1.0)));
}

SphereCoords sphere_coords(const ShapeVector& s) {
    if (s.n_points() != 3) {
        throw NotATriangle("sphere coordinates are defined for 3-point shapes, got " +
                           std::to_string(s.n_points()) + " points");
    }
    const CoeffVector c = decompose(s, basis(3));
    const complex_t alpha = c.coefficients[0];
    const complex_t beta = c.coefficients[1];
    SphereCoords out{};
    out.theta = 2.0 * std::atan2(std::abs(beta), std::abs(alpha));
    if (std::min(std::abs(alpha), std::abs(beta)) < tol::algebraic) {
        out.phi = 0.0; // azimuth is gauge at the poles
    } else {
        double phi = std::arg(beta * std::conj(alpha));
        if (phi < 0.0) phi += 2.0 * std::numbers::pi;
        if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
        out.phi = phi;
    }
    return out;
}

} // namespace qshape
