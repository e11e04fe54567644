#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qshape/dynamics.hpp"
#include "qshape/eigenshape.hpp"

namespace qshape {

// Parameters of the energy-based stochastic reduction process. Zero dt or
// t_max means "derive the default from sigma and the energy spread";
// validated() resolves defaults and enforces the step-size stability
// bound, and the simulation entry points call it themselves.
struct DiffusionParams {
    Hamiltonian hamiltonian;
    double sigma = 1.0;
    double dt = 0.0;
    double t_max = 0.0;
    double collapse_threshold = 0.999;
    std::uint64_t seed = 0;
};

DiffusionParams validated(DiffusionParams p);

// One Euler-Maruyama step of
//   d|psi> = [-iH - (1/8) sigma^2 (H - <H>)^2] |psi> dt
//          + (1/2) sigma (H - <H>) |psi> dW
// followed by renormalization. dW is the caller's Wiener increment.
CoeffVector diffuse_step(const CoeffVector& c, const DiffusionParams& p, double dW);

struct TrajectoryRun {
    std::optional<int> terminal; // eigenshape index, nullopt = undecided
    Trajectory trajectory;
};

// Single trajectory from the stream seeded by p.seed (substream 0, the
// same stream as trial 0 of an ensemble). The trajectory records every
// record_every-th step plus the initial and final states.
TrajectoryRun simulate_trajectory(const CoeffVector& initial,
                                  const DiffusionParams& p,
                                  int record_every = 1);

struct EnsembleReport {
    int trials = 0;
    std::map<int, long> terminal_counts; // eigenshape index -> count
    long undecided = 0;
    std::vector<double> sample_times;
    std::vector<double> mean_energy;  // ensemble mean of <H> per sample time
    std::vector<double> std_energy;   // ensemble standard deviation of <H>
};

// Independent trajectories on per-trial substreams of p.seed. The report
// is identical for any thread count: trials are partitioned into fixed
// chunks and partial sums are reduced in chunk order. A trajectory that
// collapses before t_max holds its last energy for later sample times.
EnsembleReport run_ensemble(const CoeffVector& initial, const DiffusionParams& p,
                            int trials, int threads = 1);

} // namespace qshape
