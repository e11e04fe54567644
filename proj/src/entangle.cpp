#include "qshape/entangle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "qshape/errors.hpp"

namespace qshape {

namespace {

// 0-based factor indices -> 0-based combined index.
std::size_t combined_index(int i, int j, int m, int n, TensorOrder order) {
    if (order == TensorOrder::row_major) {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
               static_cast<std::size_t>(j);
    }
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(m) +
           static_cast<std::size_t>(i);
}

void check_unit_norm(const CoeffVector& c, const char* what) {
    if (std::abs(c.norm() - 1.0) > 1e-9) {
        throw DimensionMismatch(std::string(what) +
                                " coefficients must be unit norm, got norm " +
                                std::to_string(c.norm()));
    }
}

} // namespace

BipartiteShape bipartite_of(CoeffVector coeffs, int m, int n, TensorOrder order) {
    if (m < 2 || n < 2) {
        throw DimensionMismatch("factor sizes must be at least 2, got " +
                                std::to_string(m) + " and " + std::to_string(n));
    }
    if (coeffs.n_coeffs() != m * n) {
        throw DimensionMismatch("expected " + std::to_string(m * n) +
                                " coefficients for factors " + std::to_string(m) +
                                "x" + std::to_string(n) + ", got " +
                                std::to_string(coeffs.n_coeffs()));
    }
    check_unit_norm(coeffs, "combined");
    coeffs.basis_n_points = m * n + 1;
    BipartiteShape s;
    s.coeffs = std::move(coeffs);
    s.m = m;
    s.n = n;
    s.order = order;
    return s;
}

BipartiteShape combine(const CoeffVector& a, const CoeffVector& b,
                       TensorOrder order) {
    const int m = a.n_coeffs();
    const int n = b.n_coeffs();
    if (m < 2 || n < 2) {
        throw DimensionMismatch("combine needs factors of size at least 2, got " +
                                std::to_string(m) + " and " + std::to_string(n));
    }
    check_unit_norm(a, "left");
    check_unit_norm(b, "right");

    CoeffVector c;
    c.basis_n_points = m * n + 1;
    c.coefficients.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(n),
                          complex_t{0.0, 0.0});
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            c.coefficients[combined_index(i, j, m, n, order)] =
                a.coefficients[static_cast<std::size_t>(i)] *
                b.coefficients[static_cast<std::size_t>(j)];
        }
    }
    return bipartite_of(std::move(c), m, n, order);
}

SchmidtData schmidt(const BipartiteShape& s) {
    Eigen::MatrixXcd mat(s.m, s.n);
    for (int i = 0; i < s.m; ++i) {
        for (int j = 0; j < s.n; ++j) {
            mat(i, j) = s.coeffs.coefficients[combined_index(i, j, s.m, s.n, s.order)];
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
    const auto& sv = svd.singularValues();

    SchmidtData out;
    out.values.reserve(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        out.values.push_back(std::max(0.0, sv(i)));
    }
    for (double v : out.values) {
        const double p = v * v;
        if (p > 0.0) out.entropy -= p * std::log(p);
    }
    if (out.entropy < 0.0) out.entropy = 0.0;
    return out;
}

bool is_product(const BipartiteShape& s, double tol) {
    if (!(tol > 0.0)) {
        throw InvalidParams("product tolerance must be positive");
    }
    const SchmidtData d = schmidt(s);
    return d.values.size() < 2 || d.values[1] < tol;
}

ShapeVector combined_shape(const BipartiteShape& s) {
    return superpose(s.coeffs, basis(s.m * s.n + 1));
}

int max_collinear(const PointConfig& config, double tol) {
    const int n = config.n_points();
    if (n < 3) {
        throw TooFewPoints("collinearity needs at least 3 points, got " +
                           std::to_string(n));
    }
    const auto& pts = config.points;

    double diameter = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            diameter = std::max(diameter, std::abs(pts[static_cast<std::size_t>(i)] -
                                                   pts[static_cast<std::size_t>(j)]));
        }
    }
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, std::abs(p));
    if (diameter <= tol::degenerate_spread * std::max(scale, 1e-300)) {
        throw DegenerateConfig("all points coincide; no line is defined");
    }

    const double dist_cap = tol * diameter;
    int best = 2; // any two distinct points are trivially collinear
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const complex_t d = pts[static_cast<std::size_t>(j)] -
                                pts[static_cast<std::size_t>(i)];
            const double len = std::abs(d);
            // Coincident anchors define no direction; some distinct pair
            // exists because the diameter is positive.
            if (len <= tol::degenerate_spread * diameter) continue;
            int count = 0;
            for (int p = 0; p < n; ++p) {
                const complex_t r = pts[static_cast<std::size_t>(p)] -
                                    pts[static_cast<std::size_t>(i)];
                const double perp =
                    std::abs(r.real() * d.imag() - r.imag() * d.real()) / len;
                if (perp <= dist_cap) ++count;
            }
            best = std::max(best, count);
        }
    }
    return best;
}

} // namespace qshape
