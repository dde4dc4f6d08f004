#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace lzn {

enum class SweepDirection { forward, backward };

struct SystemParams {
    double alpha = 1.0;
    double v = 1.0;
    double delta = 0.0;

    SweepDirection direction() const {
        return alpha > 0 ? SweepDirection::forward : SweepDirection::backward;
    }
};

struct NoiseParams {
    double D = 0.0;
    double gamma = 1.0;

    double correlation_strength() const { return D * D / gamma; }
};

inline void validate(const SystemParams& p) {
    if (!(p.v > 0.0) || !std::isfinite(p.v))
        throw std::invalid_argument("coupling v must be positive and finite");
    if (p.alpha == 0.0 || !std::isfinite(p.alpha))
        throw std::invalid_argument("sweep rate alpha must be nonzero and finite");
    if (!std::isfinite(p.delta))
        throw std::invalid_argument("nonreciprocity delta must be finite");
}

inline void validate(const NoiseParams& np) {
    if (np.D < 0.0 || !std::isfinite(np.D))
        throw std::invalid_argument("noise amplitude D must be nonnegative and finite");
    if (np.D > 0.0 && (!(np.gamma > 0.0) || !std::isfinite(np.gamma)))
        throw std::invalid_argument("noise rate gamma must be positive when D > 0");
}

// Two-level amplitudes with running log rescale factor. The physical
// amplitudes are (a, b) * exp(log_scale); probabilities are scale free.
struct StateVector {
    std::complex<double> a{0.0, 0.0};
    std::complex<double> b{0.0, 0.0};
    double log_scale = 0.0;
};

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    long long steps = 0;

    double dt() const { return (t_end - t_start) / static_cast<double>(steps); }
    double node(long long i) const {
        return t_start + static_cast<double>(i) * dt();
    }
};

// Row-major 2x2: [[ -w/2, -v/2 ], [ -v(1-delta)/2, +w/2 ]], w = alpha*t + f.
inline std::array<std::complex<double>, 4>
effective_hamiltonian(const SystemParams& p, double t, double f = 0.0) {
    const double w = p.alpha * t + f;
    return {std::complex<double>(-0.5 * w, 0.0), std::complex<double>(-0.5 * p.v, 0.0),
            std::complex<double>(-0.5 * p.v * (1.0 - p.delta), 0.0),
            std::complex<double>(0.5 * w, 0.0)};
}

inline double population(const StateVector& s) {
    return (std::norm(s.a) + std::norm(s.b)) * std::exp(2.0 * s.log_scale);
}

inline double tunneling_probability(const StateVector& s, SweepDirection dir) {
    const double na = std::norm(s.a);
    const double nb = std::norm(s.b);
    const double n = na + nb;
    return (dir == SweepDirection::forward ? nb : na) / n;
}

inline StateVector initial_state(SweepDirection dir) {
    StateVector s;
    if (dir == SweepDirection::forward)
        s.b = 1.0;
    else
        s.a = 1.0;
    return s;
}

struct integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}
