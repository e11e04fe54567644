#pragma once

#include <vector>

#include "qshape/eigenshape.hpp"
#include "qshape/shape.hpp"

namespace qshape {

// Diagonal Hamiltonian in the eigenshape basis: energies[k-1] is the
// angular frequency attached to eigenshape k.
struct Hamiltonian {
    int n_points = 0;
    std::vector<double> energies;
};

// Validates dimensions and finiteness.
Hamiltonian make_hamiltonian(int n_points, std::vector<double> energies);

struct Trajectory {
    std::vector<double> times;
    std::vector<ShapeVector> states;
    std::vector<CoeffVector> coefficients;
};

// Classification of the projective trajectory generated by a Hamiltonian
// on a given support: closed with a smallest period, a fixed point, or
// open (incommensurable frequencies).
struct Periodicity {
    enum class Kind { periodic, stationary, aperiodic };

    Kind kind = Kind::aperiodic;
    double period = 0.0; // meaningful only when kind == periodic

    bool is_periodic() const { return kind == Kind::periodic; }
    bool is_stationary() const { return kind == Kind::stationary; }
};

// Both phases over one period, so the total/geometric identification can
// be examined rather than assumed.
struct PhaseBreakdown {
    bool stationary = false;
    double period = 0.0;
    double total = 0.0;     // arg <psi(0)|psi(T)>
    double dynamical = 0.0; // -<H>*T
    double geometric = 0.0; // (total - dynamical) mod 2*pi
};

// Coefficient rotation c_k -> c_k * exp(-i*energy[k]*t). Keeps the global
// phase; populations are exactly preserved.
CoeffVector evolve_coeffs(const CoeffVector& c, const Hamiltonian& h, double t);

// Evolved shape: decompose, rotate coefficients, re-synthesize canonically.
ShapeVector evolve(const ShapeVector& s, const Hamiltonian& h, double t);

double energy_expectation(const CoeffVector& c, const Hamiltonian& h);
double energy_variance(const CoeffVector& c, const Hamiltonian& h);

// Indices k (1-based) whose population exceeds tol^2, i.e. |c_k| > tol.
std::vector<int> support_of(const CoeffVector& c, double tol = 1e-12);

// Smallest T > 0 closing the projective trajectory on the given support
// (1-based eigenshape indices). Frequency-difference ratios are matched to
// rationals by continued-fraction convergents with denominators up to 1e6;
// candidates whose phase misclosure exceeds a 1e-9 relative bound are
// rejected as aperiodic.
Periodicity period_of(const Hamiltonian& h, const std::vector<int>& support);

// Total, dynamical and geometric phase over one period of s under h.
// Throws NotCyclic when the trajectory never closes.
PhaseBreakdown phase_breakdown(const ShapeVector& s, const Hamiltonian& h);

// Geometric phase in [0, 2*pi); 0 for stationary input.
double geometric_phase(const ShapeVector& s, const Hamiltonian& h);

// Integral of <H> over [0, t_end] by composite Simpson quadrature with at
// least `steps` intervals, evaluating the evolved state at every node.
// Cross-check path for the conserved-<H> shortcut used by phase_breakdown.
double dynamical_phase_quadrature(const CoeffVector& c, const Hamiltonian& h,
                                  double t_end, int steps = 10000);

// Trajectory sampled at n_samples equally spaced times in [t0, t1], each
// state evolved directly from t0 (no step-to-step error accumulation).
Trajectory sample_trajectory(const ShapeVector& s, const Hamiltonian& h,
                             double t0, double t1, int n_samples);

} // namespace qshape
