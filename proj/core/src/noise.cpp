#include "lznoise/noise.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lzn {

double sample_stationary(const NoiseParams& np, RngStream& rng) {
    return np.D * rng.next_normal();
}

namespace {

std::atomic<bool> coarse_step_warned{false};

void warn_coarse_step(double gamma_dt) {
    if (!coarse_step_warned.exchange(true))
        std::fprintf(stderr,
                     "lznoise: noise step gamma*dt = %.3g exceeds 0.1; the "
                     "correlation time is marginally resolved\n",
                     gamma_dt);
}

double heun_update(double f, double gamma, double diffusion, double dt, double dW) {
    const double fp = f - gamma * f * dt + diffusion * dW;
    return f + 0.5 * dt * (-gamma * f - gamma * fp) + diffusion * dW;
}

}

double heun_step(double f, double /*t*/, double dt, const NoiseParams& np,
                 RngStream& rng) {
    if (np.gamma * dt > 0.1)
        warn_coarse_step(np.gamma * dt);
    const double diffusion = std::sqrt(2.0 * np.gamma) * np.D;
    const double dW = std::sqrt(dt) * rng.next_normal();
    return heun_update(f, np.gamma, diffusion, dt, dW);
}

void generate_path(NoisePath& path, const NoiseParams& np, const TimeGrid& grid,
                   RngStream& rng) {
    if (grid.steps < 1)
        throw std::invalid_argument("time grid must have at least one step");
    const std::size_t n = static_cast<std::size_t>(grid.steps) + 1;
    path.values.assign(n, 0.0);
    path.seed = rng.seed();
    path.stream = rng.stream();
    if (np.D == 0.0)
        return;

    const double dt = grid.dt();
    if (np.gamma * dt > 0.1)
        warn_coarse_step(np.gamma * dt);
    const double diffusion = std::sqrt(2.0 * np.gamma) * np.D;
    const double sqdt = std::sqrt(dt);
    double f = sample_stationary(np, rng);
    path.values[0] = f;
    for (std::size_t i = 1; i < n; ++i) {
        const double dW = sqdt * rng.next_normal();
        f = heun_update(f, np.gamma, diffusion, dt, dW);
        path.values[i] = f;
    }
}

NoisePath generate_path(const NoiseParams& np, const TimeGrid& grid,
                        RngStream& rng) {
    NoisePath path;
    generate_path(path, np, grid, rng);
    return path;
}

std::vector<double> autocorrelation_estimate(std::span<const NoisePath> paths,
                                             std::span<const long long> lags) {
    std::vector<double> acf(lags.size(), 0.0);
    if (paths.empty())
        return acf;
    for (std::size_t k = 0; k < lags.size(); ++k) {
        const long long lag = lags[k];
        if (lag < 0)
            throw std::invalid_argument("autocorrelation lag must be nonnegative");
        double total = 0.0;
        long long count = 0;
        for (const NoisePath& p : paths) {
            const long long n = static_cast<long long>(p.values.size());
            if (lag >= n)
                throw std::invalid_argument("autocorrelation lag exceeds path length");
            double s = 0.0;
            for (long long i = 0; i + lag < n; ++i)
                s += p.values[static_cast<std::size_t>(i)] *
                     p.values[static_cast<std::size_t>(i + lag)];
            total += s;
            count += n - lag;
        }
        acf[k] = total / static_cast<double>(count);
    }
    return acf;
}

}
