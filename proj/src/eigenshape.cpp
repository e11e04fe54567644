#include "qshape/eigenshape.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "qshape/errors.hpp"

namespace qshape {

namespace {

void check_basis_index(int n_points, int k) {
    if (n_points < 3) {
        throw IndexOutOfRange("eigenshapes need at least 3 points, got " +
                              std::to_string(n_points));
    }
    if (k < 1 || k > n_points - 1) {
        throw IndexOutOfRange("eigenshape index " + std::to_string(k) +
                              " outside 1.." + std::to_string(n_points - 1));
    }
}

} // namespace

std::vector<int> eigenshape_exponents(int n_points, int k) {
    check_basis_index(n_points, k);
    std::vector<int> a(static_cast<std::size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
        a[static_cast<std::size_t>(j)] =
            static_cast<int>((static_cast<long long>(k) * j) % n_points);
    }
    return a;
}

ShapeVector eigenshape(int n_points, int k) {
    const auto exps = eigenshape_exponents(n_points, k);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_points));
    cvector_t amps(static_cast<std::size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
        const double angle =
            2.0 * std::numbers::pi * exps[static_cast<std::size_t>(j)] / n_points;
        amps[static_cast<std::size_t>(j)] = std::polar(scale, angle);
    }
    // Roots of unity sum to zero and the vector has unit norm by
    // construction; canonical() fixes only the global phase. The first
    // amplitude is 1/sqrt(N), already the (tied) magnitude maximum at the
    // lowest index with argument 0, so the amplitudes pass through intact.
    return ShapeVector::canonical(std::move(amps));
}

const ShapeVector& EigenBasis::at(int k) const {
    if (k < 1 || k > static_cast<int>(vectors.size())) {
        throw IndexOutOfRange("basis index " + std::to_string(k) + " outside 1.." +
                              std::to_string(vectors.size()));
    }
    return vectors[static_cast<std::size_t>(k - 1)];
}

EigenBasis basis(int n_points) {
    check_basis_index(n_points, 1);
    EigenBasis b;
    b.n_points = n_points;
    b.vectors.reserve(static_cast<std::size_t>(n_points - 1));
    for (int k = 1; k <= n_points - 1; ++k) {
        b.vectors.push_back(eigenshape(n_points, k));
    }
    return b;
}

double CoeffVector::norm() const {
    double n2 = 0.0;
    for (const auto& c : coefficients) n2 += std::norm(c);
    return std::sqrt(n2);
}

std::vector<double> CoeffVector::populations() const {
    std::vector<double> p;
    p.reserve(coefficients.size());
    for (const auto& c : coefficients) p.push_back(std::norm(c));
    return p;
}

DegeneracyInfo degeneracy(int n_points, int k) {
    check_basis_index(n_points, k);
    DegeneracyInfo d;
    d.k = k;
    d.multiplicity = std::gcd(n_points, k);
    d.distinct_vertices = n_points / d.multiplicity;
    d.polygon_order = d.distinct_vertices;
    return d;
}

CoeffVector decompose(const ShapeVector& s, const EigenBasis& b) {
    if (s.n_points() != b.n_points) {
        throw DimensionMismatch("shape on " + std::to_string(s.n_points()) +
                                " points does not fit a basis on " +
                                std::to_string(b.n_points));
    }
    CoeffVector c;
    c.basis_n_points = b.n_points;
    c.coefficients.reserve(b.vectors.size());
    for (const auto& w : b.vectors) c.coefficients.push_back(overlap(w, s));
    return c;
}

cvector_t synthesize_raw(const CoeffVector& coeffs, const EigenBasis& b) {
    if (coeffs.basis_n_points != b.n_points ||
        coeffs.n_coeffs() != b.n_points - 1) {
        throw DimensionMismatch("coefficient vector does not match basis on " +
                                std::to_string(b.n_points) + " points");
    }
    cvector_t out(static_cast<std::size_t>(b.n_points), complex_t{0.0, 0.0});
    for (int k = 1; k <= b.n_points - 1; ++k) {
        const complex_t c = coeffs.coefficients[static_cast<std::size_t>(k - 1)];
        const auto& w = b.at(k).amplitudes();
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * w[j];
    }
    return out;
}

ShapeVector superpose(const CoeffVector& coeffs, const EigenBasis& b) {
    cvector_t raw = synthesize_raw(coeffs, b);
    double n2 = 0.0;
    for (const auto& z : raw) n2 += std::norm(z);
    if (n2 <= tol::algebraic * tol::algebraic) {
        throw ZeroVector("superposition coefficients produce a zero vector");
    }
    return ShapeVector::canonical(std::move(raw));
}

} // namespace qshape
