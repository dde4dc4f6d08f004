#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lznoise/model.hpp"
#include "lznoise/rng.hpp"

namespace lzn {

// Ornstein-Uhlenbeck realization sampled on the integration nodes.
struct NoisePath {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// Draw from the stationary distribution N(0, D^2).
double sample_stationary(const NoiseParams& np, RngStream& rng);

// One Heun step of df = -gamma f dt + sqrt(2 gamma) D dW. The process is
// time homogeneous; t is accepted only so callers can keep a uniform stepper
// signature. Predictor and corrector share a single Wiener increment.
double heun_step(double f, double t, double dt, const NoiseParams& np,
                 RngStream& rng);

// Fills values[0..grid.steps] at the grid nodes. D == 0 produces an all-zero
// path without consuming any draws.
void generate_path(NoisePath& path, const NoiseParams& np, const TimeGrid& grid,
                   RngStream& rng);

NoisePath generate_path(const NoiseParams& np, const TimeGrid& grid,
                        RngStream& rng);

// Ensemble-averaged lag products <f(t0) f(t0 + lag)>, averaged over all start
// nodes and paths. lags are node offsets.
std::vector<double> autocorrelation_estimate(std::span<const NoisePath> paths,
                                             std::span<const long long> lags);

}
