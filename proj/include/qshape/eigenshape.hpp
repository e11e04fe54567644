#pragma once

#include <vector>

#include "qshape/shape.hpp"
#include "qshape/types.hpp"

namespace qshape {

// Exact exponent row of the k-th cyclotomic eigenshape on N points:
// a_j = k*(j-1) mod N for j = 1..N. Integer arithmetic throughout.
std::vector<int> eigenshape_exponents(int n_points, int k);

// k-th cyclotomic eigenshape on N points, amplitudes z^{a_j}/sqrt(N) with
// z = exp(2*pi*i/N), in canonical form. k ranges over 1..N-1.
ShapeVector eigenshape(int n_points, int k);

// Complete orthonormal eigenshape basis on N points; vectors[k-1] holds
// eigenshape(N, k).
struct EigenBasis {
    int n_points = 0;
    std::vector<ShapeVector> vectors;

    const ShapeVector& at(int k) const; // 1-based, throws IndexOutOfRange
};

EigenBasis basis(int n_points);

// Coefficients of a shape in an eigenshape basis; coefficients[k-1] pairs
// with eigenshape k, so the vector has length N-1.
struct CoeffVector {
    cvector_t coefficients;
    int basis_n_points = 0;

    int n_coeffs() const { return static_cast<int>(coefficients.size()); }
    double norm() const;
    std::vector<double> populations() const; // |c_k|^2 in index order
};

// How the k-th eigenshape traces its polygon: N points land on
// distinct_vertices = N/gcd(N,k) distinct positions, each visited
// multiplicity = gcd(N,k) times. polygon_order repeats distinct_vertices
// under the name it carries geometrically: the order of the regular
// polygon traced.
struct DegeneracyInfo {
    int k = 0;
    int distinct_vertices = 0;
    int polygon_order = 0;
    int multiplicity = 0;

    bool nondegenerate() const { return multiplicity == 1; }
};

DegeneracyInfo degeneracy(int n_points, int k);

// Basis expansion of a shape; exact reconstruction up to rounding.
CoeffVector decompose(const ShapeVector& s, const EigenBasis& b);

// Shape with the given coefficients, canonicalized. Throws ZeroVector when
// the coefficients vanish.
ShapeVector superpose(const CoeffVector& coeffs, const EigenBasis& b);

// Raw amplitude sum c_1|w_1> + ... without canonicalization; keeps the
// global phase, which carries physical meaning along evolution paths.
cvector_t synthesize_raw(const CoeffVector& coeffs, const EigenBasis& b);

} // namespace qshape
