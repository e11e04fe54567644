#pragma once

#include <complex>
#include <vector>

namespace qshape {

using complex_t = std::complex<double>;
using cvector_t = std::vector<complex_t>;

namespace tol {

// Geometric identities: distances, probabilities, ray comparisons.
inline constexpr double geometric = 1e-10;

// Algebraic normalization: unit norm, centroid sum, orthogonality.
inline constexpr double algebraic = 1e-12;

// Relative window inside which amplitude magnitudes count as tied when
// picking the entry that anchors the phase convention. Without it, the
// argmax over analytically-equal magnitudes would be decided by rounding
// noise of order 1e-16.
inline constexpr double phase_tie = 1e-9;

// Relative spread below which a point configuration counts as "all points
// coincident".
inline constexpr double degenerate_spread = 1e-12;

} // namespace tol

} // namespace qshape
