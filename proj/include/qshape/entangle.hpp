#pragma once

#include <vector>

#include "qshape/eigenshape.hpp"
#include "qshape/shape.hpp"

namespace qshape {

// How factor indices (i, j) map into the combined coefficient index:
// row_major puts kappa = (i-1)*n + j, column_major puts kappa = (j-1)*m + i
// (1-based throughout). The planar shape of a combined state depends on
// this choice, so it stays an explicit parameter.
enum class TensorOrder { row_major, column_major };

// State of an (m*n+1)-point shape viewed as a pair of factors of sizes m
// and n under a fixed index convention.
struct BipartiteShape {
    CoeffVector coeffs; // length m*n over basis(m*n+1)
    int m = 0;
    int n = 0;
    TensorOrder order = TensorOrder::row_major;
};

// Wraps unit-norm coefficients of length m*n as a bipartite state.
BipartiteShape bipartite_of(CoeffVector coeffs, int m, int n,
                            TensorOrder order = TensorOrder::row_major);

// Product state with coefficients a[i]*b[j] under the index convention.
BipartiteShape combine(const CoeffVector& a, const CoeffVector& b,
                       TensorOrder order = TensorOrder::row_major);

struct SchmidtData {
    std::vector<double> values; // non-increasing, min(m, n) entries
    double entropy = 0.0;       // -sum lambda^2 ln lambda^2, natural log
};

// Singular values of the m x n coefficient matrix plus the entanglement
// entropy of their squares.
SchmidtData schmidt(const BipartiteShape& s);

// True iff the second Schmidt value is below tol.
bool is_product(const BipartiteShape& s, double tol);

// The combined state as an (m*n+1)-point shape.
ShapeVector combined_shape(const BipartiteShape& s);

// Size of the largest subset of points on one line, where a point counts
// as on the line through an anchor pair if its perpendicular distance is
// at most tol times the configuration diameter. Exhaustive over anchor
// pairs.
int max_collinear(const PointConfig& config, double tol);

} // namespace qshape
