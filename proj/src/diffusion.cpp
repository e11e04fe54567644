#include "qshape/diffusion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "qshape/errors.hpp"
#include "qshape/rng.hpp"

namespace qshape {

namespace {

double energy_spread(const std::vector<double>& energies) {
    const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
    return *hi - *lo;
}

double expectation(const cvector_t& c, const std::vector<double>& energies) {
    double h = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) h += std::norm(c[k]) * energies[k];
    return h;
}

// One Euler-Maruyama step plus renormalization. The multiplier depends on
// k only through E_k, so coefficients sharing an energy level are scaled
// identically and their relative ray is preserved exactly.
void step_core(cvector_t& c, const std::vector<double>& energies, double sigma,
               double dt, double dW) {
    const double h = expectation(c, energies);
    double n2 = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double d = energies[k] - h;
        const complex_t m(1.0 - 0.125 * sigma * sigma * d * d * dt +
                              0.5 * sigma * d * dW,
                          -energies[k] * dt);
        c[k] *= m;
        n2 += std::norm(c[k]);
    }
    const double factor = std::sqrt(n2);
    if (std::abs(factor - 1.0) > 0.5) {
        throw NormLoss("renormalization factor " + std::to_string(factor) +
                       " indicates a step-size failure");
    }
    for (auto& z : c) z /= factor;
}

void check_initial(const CoeffVector& c, const Hamiltonian& h) {
    if (c.basis_n_points != h.n_points ||
        c.n_coeffs() != h.n_points - 1) {
        throw DimensionMismatch("coefficients on " +
                                std::to_string(c.basis_n_points) +
                                " points do not match Hamiltonian on " +
                                std::to_string(h.n_points));
    }
    if (std::abs(c.norm() - 1.0) > 1e-9) {
        throw InvalidParams("initial coefficients must be unit norm, got norm " +
                            std::to_string(c.norm()));
    }
}

cvector_t normalized_copy(const CoeffVector& c) {
    cvector_t v = c.coefficients;
    const double n = c.norm();
    for (auto& z : v) z /= n;
    return v;
}

struct WalkResult {
    std::optional<int> terminal; // 1-based eigenshape index
    long end_step = 0;
};

// Advances c through the process. on_state(step, c, is_last) fires exactly
// once per visited step, the final one flagged, so callers can record or
// sample without re-running the walk.
template <typename StateFn>
WalkResult walk(cvector_t& c, const DiffusionParams& p, long n_steps,
                SplitMix64& g, StateFn&& on_state) {
    const auto& energies = p.hamiltonian.energies;
    const double sqrt_dt = std::sqrt(p.dt);
    for (long step = 0;; ++step) {
        int peak = 0;
        double peak_pop = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const double pop = std::norm(c[k]);
            if (pop > peak_pop) {
                peak_pop = pop;
                peak = static_cast<int>(k);
            }
        }
        const bool collapsed = peak_pop >= p.collapse_threshold;
        const bool exhausted = !collapsed && step >= n_steps;
        on_state(step, c, collapsed || exhausted);
        if (collapsed) return {peak + 1, step};
        if (exhausted) return {std::nullopt, step};
        step_core(c, energies, p.sigma, p.dt, g.next_gaussian() * sqrt_dt);
    }
}

long step_count(const DiffusionParams& p) {
    return static_cast<long>(std::ceil(p.t_max / p.dt - 1e-9));
}

// Per-chunk partial sums; reduced in chunk order so the report is
// independent of which thread ran which chunk.
struct ChunkSums {
    std::vector<long> counts; // terminal index k at counts[k-1]
    long undecided = 0;
    std::vector<double> e_sum;
    std::vector<double> e_sum2;
};

constexpr int chunk_trials = 64;

} // namespace

DiffusionParams validated(DiffusionParams p) {
    p.hamiltonian = make_hamiltonian(p.hamiltonian.n_points,
                                     std::move(p.hamiltonian.energies));
    if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma)) {
        throw InvalidParams("sigma must be a finite non-negative number");
    }
    if (!(p.collapse_threshold > 0.0) || !(p.collapse_threshold < 1.0)) {
        throw InvalidParams("collapse threshold must lie in (0, 1)");
    }

    const double spread = energy_spread(p.hamiltonian.energies);
    const double rate = p.sigma * p.sigma * spread * spread;
    if (p.dt == 0.0) p.dt = rate > 0.0 ? 1e-3 / rate : 1e-3;
    if (p.t_max == 0.0) p.t_max = rate > 0.0 ? 50.0 / rate : 1.0;
    if (!(p.dt > 0.0) || !std::isfinite(p.dt)) {
        throw InvalidParams("dt must be positive");
    }
    if (!(p.t_max > 0.0) || !std::isfinite(p.t_max)) {
        throw InvalidParams("t_max must be positive");
    }
    // Euler-Maruyama is only faithful when a step moves populations a
    // little; dt * sigma^2 * spread^2 is the per-step collapse progress.
    if (p.dt * rate > 0.05) {
        throw InvalidParams("dt exceeds the stability bound 0.05/(sigma^2*spread^2)");
    }
    return p;
}

CoeffVector diffuse_step(const CoeffVector& c, const DiffusionParams& p, double dW) {
    const DiffusionParams q = validated(p);
    check_initial(c, q.hamiltonian);
    if (!std::isfinite(dW)) {
        throw InvalidParams("dW must be finite");
    }
    CoeffVector out = c;
    step_core(out.coefficients, q.hamiltonian.energies, q.sigma, q.dt, dW);
    return out;
}

TrajectoryRun simulate_trajectory(const CoeffVector& initial,
                                  const DiffusionParams& p, int record_every) {
    const DiffusionParams q = validated(p);
    check_initial(initial, q.hamiltonian);
    if (record_every < 1) {
        throw InvalidParams("record_every must be at least 1");
    }

    const EigenBasis b = basis(q.hamiltonian.n_points);
    const long n_steps = step_count(q);
    cvector_t c = normalized_copy(initial);
    SplitMix64 g(substream_seed(q.seed, 0));

    TrajectoryRun run;
    auto record = [&](long step, const cvector_t& v, bool last) {
        if (step % record_every != 0 && !last) return;
        CoeffVector cv;
        cv.coefficients = v;
        cv.basis_n_points = q.hamiltonian.n_points;
        run.trajectory.times.push_back(static_cast<double>(step) * q.dt);
        run.trajectory.states.push_back(superpose(cv, b));
        run.trajectory.coefficients.push_back(std::move(cv));
    };
    run.terminal = walk(c, q, n_steps, g, record).terminal;
    return run;
}

EnsembleReport run_ensemble(const CoeffVector& initial, const DiffusionParams& p,
                            int trials, int threads) {
    const DiffusionParams q = validated(p);
    check_initial(initial, q.hamiltonian);
    if (trials < 1) {
        throw InvalidParams("ensemble needs at least 1 trial");
    }

    const long n_steps = step_count(q);
    const long stride = std::max<long>(1, n_steps / 100);
    std::vector<long> sample_steps;
    for (long s = 0; s <= n_steps; s += stride) sample_steps.push_back(s);
    const std::size_t n_samples = sample_steps.size();

    const cvector_t c0 = normalized_copy(initial);
    const int n_levels = q.hamiltonian.n_points - 1;
    const int n_chunks = (trials + chunk_trials - 1) / chunk_trials;
    std::vector<ChunkSums> chunks(static_cast<std::size_t>(n_chunks));

    auto run_chunk = [&](int chunk) {
        ChunkSums& sums = chunks[static_cast<std::size_t>(chunk)];
        sums.counts.assign(static_cast<std::size_t>(n_levels), 0);
        sums.e_sum.assign(n_samples, 0.0);
        sums.e_sum2.assign(n_samples, 0.0);
        std::vector<double> e_buf(n_samples, 0.0);

        const int first = chunk * chunk_trials;
        const int last = std::min(trials, first + chunk_trials);
        for (int trial = first; trial < last; ++trial) {
            cvector_t c = c0;
            SplitMix64 g(substream_seed(q.seed, static_cast<std::uint64_t>(trial)));
            std::size_t next = 0;
            auto sample = [&](long step, const cvector_t& v, bool final_state) {
                if (next < n_samples && sample_steps[next] == step) {
                    e_buf[next++] = expectation(v, q.hamiltonian.energies);
                }
                if (final_state && next < n_samples) {
                    // Collapsed trajectories hold their terminal energy.
                    const double h = expectation(v, q.hamiltonian.energies);
                    while (next < n_samples) e_buf[next++] = h;
                }
            };
            const WalkResult r = walk(c, q, n_steps, g, sample);
            if (r.terminal) {
                ++sums.counts[static_cast<std::size_t>(*r.terminal - 1)];
            } else {
                ++sums.undecided;
            }
            for (std::size_t i = 0; i < n_samples; ++i) {
                sums.e_sum[i] += e_buf[i];
                sums.e_sum2[i] += e_buf[i] * e_buf[i];
            }
        }
    };

    const int workers = std::clamp(threads, 1, 256);
    if (workers == 1) {
        for (int chunk = 0; chunk < n_chunks; ++chunk) run_chunk(chunk);
    } else {
        std::atomic<int> next_chunk{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto body = [&] {
            for (;;) {
                const int chunk = next_chunk.fetch_add(1);
                if (chunk >= n_chunks) return;
                try {
                    run_chunk(chunk);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    EnsembleReport report;
    report.trials = trials;
    report.sample_times.reserve(n_samples);
    for (long s : sample_steps) {
        report.sample_times.push_back(static_cast<double>(s) * q.dt);
    }
    std::vector<double> e_sum(n_samples, 0.0);
    std::vector<double> e_sum2(n_samples, 0.0);
    std::vector<long> counts(static_cast<std::size_t>(n_levels), 0);
    for (const ChunkSums& sums : chunks) {
        for (int k = 0; k < n_levels; ++k) {
            counts[static_cast<std::size_t>(k)] += sums.counts[static_cast<std::size_t>(k)];
        }
        report.undecided += sums.undecided;
        for (std::size_t i = 0; i < n_samples; ++i) {
            e_sum[i] += sums.e_sum[i];
            e_sum2[i] += sums.e_sum2[i];
        }
    }
    for (int k = 0; k < n_levels; ++k) {
        if (counts[static_cast<std::size_t>(k)] > 0) {
            report.terminal_counts[k + 1] = counts[static_cast<std::size_t>(k)];
        }
    }
    report.mean_energy.resize(n_samples);
    report.std_energy.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double mean = e_sum[i] / trials;
        report.mean_energy[i] = mean;
        report.std_energy[i] =
            std::sqrt(std::max(0.0, e_sum2[i] / trials - mean * mean));
    }
    return report;
}

} // namespace qshape
