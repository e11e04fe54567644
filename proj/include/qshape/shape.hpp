#pragma once

#include <utility>
#include <vector>

#include "qshape/types.hpp"

namespace qshape {

// Raw labelled planar configuration, one complex coordinate per point.
// May be degenerate (all points coincident); operations that need a
// genuine shape reject that case themselves.
struct PointConfig {
    cvector_t points;

    PointConfig() = default;
    explicit PointConfig(cvector_t pts); // throws TooFewPoints if size < 3

    int n_points() const { return static_cast<int>(points.size()); }
};

// Canonical ray representative of a shape: centroid-free, unit norm, and
// the largest-magnitude amplitude (lowest index among near-ties) rotated
// to be real and positive. Two configs related by translation, rotation
// and scaling map to the same ShapeVector.
class ShapeVector {
public:
    // Centers, normalizes and phase-fixes an arbitrary nonzero vector.
    static ShapeVector canonical(cvector_t raw);

    // Ref-qualified so a temporary hands out a copy, never a dangling ref.
    const cvector_t& amplitudes() const& { return amps_; }
    cvector_t amplitudes() && { return std::move(amps_); }
    int n_points() const { return static_cast<int>(amps_.size()); }

private:
    explicit ShapeVector(cvector_t amps) : amps_(std::move(amps)) {}
    cvector_t amps_;
};

// Bijection on point labels, stored 0-based.
class Permutation {
public:
    static Permutation identity(int n);
    static Permutation transposition(int n, int i, int j); // 1-based i, j
    static Permutation from_one_based(const std::vector<int>& images);
    static Permutation from_zero_based(std::vector<int> images);

    int size() const { return static_cast<int>(map_.size()); }
    int operator()(int i) const { return map_[i]; } // 0-based image
    const std::vector<int>& images() const { return map_; }

private:
    explicit Permutation(std::vector<int> m) : map_(std::move(m)) {}
    std::vector<int> map_;
};

// Composition q after p: (compose(q, p))(i) = q(p(i)).
Permutation compose(const Permutation& q, const Permutation& p);

struct SphereCoords {
    double theta; // polar angle in [0, pi]
    double phi;   // azimuth in [0, 2*pi)
};

// Canonical representative of a configuration's shape.
// Throws DegenerateConfig when all points coincide.
ShapeVector normalize(const PointConfig& config);

// Hermitian inner product <a|b> of two representatives of equal size.
complex_t overlap(const ShapeVector& a, const ShapeVector& b);

// |<a|b>|^2, clamped to [0, 1].
double transition_probability(const ShapeVector& a, const ShapeVector& b);

// Fubini-Study distance 2*acos(sqrt(p)) in [0, pi].
double fs_distance(const ShapeVector& a, const ShapeVector& b);

// Relabelled shape: point i moves to label p(i), then the result is
// re-canonicalized. Satisfies permute(permute(s, p), q) = permute(s, compose(q, p)).
ShapeVector permute(const ShapeVector& s, const Permutation& p);

// Minimum Fubini-Study distance over all relabellings of b. Exhaustive
// over N! permutations; rejects N > 10.
double unlabeled_distance(const ShapeVector& a, const ShapeVector& b);

// Bloch-sphere angles of a three-point shape in the triangle eigenbasis.
// Azimuth is defined as 0 at the poles.
SphereCoords sphere_coords(const ShapeVector& s);

} // namespace qshape
