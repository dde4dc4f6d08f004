#pragma once

#include <cstdint>

#include "lznoise/model.hpp"
#include "lznoise/noise.hpp"

namespace lzn {

// window_factor sets the half-window T as a multiple of the slowest physical
// scale; step_factor is the dimensionless step h = dt * (fastest rate).
// The *_scale knobs rescale those defaults without replacing them.
// asymptotic_matching switches the boundary treatment between matched
// (initial data and final amplitudes corrected for the evolution outside the
// window, converging as 1/T^2) and raw endpoint values (converging as 1/T).
struct GridPolicy {
    double window_factor = 40.0;
    double step_factor = 0.025;
    double window_scale = 1.0;
    double step_scale = 1.0;
    bool asymptotic_matching = true;
};

TimeGrid default_grid(const SystemParams& p, const NoiseParams& np,
                      const GridPolicy& policy = {});

// One classical RK4 step of the amplitude equations with the noise value
// prescribed at the step endpoints (the midpoint stages use their average).
void rk4_step(StateVector& s, const SystemParams& p, double t, double dt,
              double f_start, double f_end);

struct RealizationResult {
    StateVector state;
    double probability = 0.0;
    double log_norm = 0.0;
};

// Integrates one realization across the grid. path == nullptr means
// noiseless; otherwise path->values must hold grid.steps + 1 node values.
RealizationResult evolve_single(const SystemParams& p, const TimeGrid& grid,
                                const NoisePath* path = nullptr,
                                bool asymptotic_matching = true);

struct EnsembleResult {
    double mean = 0.0;
    double std_error = 0.0;
    long long samples = 0;
    double half_mean[2] = {0.0, 0.0};
    double half_std_error[2] = {0.0, 0.0};
};

// Mean transition probability over `samples` independent realizations.
// Realization m uses RngStream(master_seed, stream_offset + m); the reduction
// is performed in fixed index order, so the result is bitwise independent of
// the worker count.
EnsembleResult ensemble_average(const SystemParams& p, const NoiseParams& np,
                                const TimeGrid& grid, long long samples,
                                std::uint64_t master_seed,
                                std::uint64_t stream_offset = 0, int workers = 1,
                                bool asymptotic_matching = true);

// True when the two half-ensemble means agree within three combined standard
// errors.
bool convergence_check(const EnsembleResult& r);

}
