#include "lznoise/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lznoise/parallel.hpp"

namespace lzn {

TimeGrid default_grid(const SystemParams& p, const NoiseParams& np,
                      const GridPolicy& policy) {
    validate(p);
    validate(np);
    if (!(policy.window_factor > 0.0) || !(policy.step_factor > 0.0) ||
        !(policy.window_scale > 0.0) || !(policy.step_scale > 0.0))
        throw std::invalid_argument("grid policy factors must be positive");

    const double aabs = std::abs(p.alpha);
    double slow = std::max(1.0 / std::sqrt(aabs), p.v / aabs);
    if (np.D > 0.0)
        slow = std::max(slow, 1.0 / np.gamma);
    const double T = policy.window_factor * policy.window_scale * slow;

    double rate = std::max({p.v, aabs * T, std::sqrt(aabs)});
    if (np.D > 0.0)
        rate = std::max(rate, np.gamma);
    const double dt = policy.step_factor * policy.step_scale / rate;

    TimeGrid grid;
    grid.t_start = -T;
    grid.t_end = T;
    grid.steps = 2 * static_cast<long long>(std::ceil(T / dt));
    if (grid.steps < 2)
        grid.steps = 2;
    return grid;
}

namespace {

struct Amps {
    double ar, ai, br, bi;
};

// d/dt of the amplitudes with the half factors folded in:
// wh = w/2, vh = v/2, vmh = v(1-delta)/2.
inline Amps deriv(double wh, double vh, double vmh, const Amps& y) {
    return {-(wh * y.ai + vh * y.bi), wh * y.ar + vh * y.br,
            -(vmh * y.ai) + wh * y.bi, vmh * y.ar - wh * y.br};
}

inline void rk4_kernel(Amps& y, double dt, double wh0, double whm, double wh1,
                       double vh, double vmh) {
    const double half = 0.5 * dt;
    const Amps k1 = deriv(wh0, vh, vmh, y);
    const Amps y1{y.ar + half * k1.ar, y.ai + half * k1.ai, y.br + half * k1.br,
                  y.bi + half * k1.bi};
    const Amps k2 = deriv(whm, vh, vmh, y1);
    const Amps y2{y.ar + half * k2.ar, y.ai + half * k2.ai, y.br + half * k2.br,
                  y.bi + half * k2.bi};
    const Amps k3 = deriv(whm, vh, vmh, y2);
    const Amps y3{y.ar + dt * k3.ar, y.ai + dt * k3.ai, y.br + dt * k3.br,
                  y.bi + dt * k3.bi};
    const Amps k4 = deriv(wh1, vh, vmh, y3);
    const double sixth = dt / 6.0;
    y.ar += sixth * (k1.ar + 2.0 * (k2.ar + k3.ar) + k4.ar);
    y.ai += sixth * (k1.ai + 2.0 * (k2.ai + k3.ai) + k4.ai);
    y.br += sixth * (k1.br + 2.0 * (k2.br + k3.br) + k4.br);
    y.bi += sixth * (k1.bi + 2.0 * (k2.bi + k3.bi) + k4.bi);
}

constexpr double rescale_hi = 1e6;
constexpr double rescale_lo = 1e-6;

inline void check_and_rescale(Amps& y, double& log_scale) {
    const double n = y.ar * y.ar + y.ai * y.ai + y.br * y.br + y.bi * y.bi;
    if (!std::isfinite(n))
        throw integration_error("amplitude norm became non-finite");
    if (n > rescale_hi || n < rescale_lo) {
        const double inv = 1.0 / std::sqrt(n);
        y.ar *= inv;
        y.ai *= inv;
        y.br *= inv;
        y.bi *= inv;
        log_scale += 0.5 * std::log(n);
    }
}

template <bool HasNoise>
void integrate(Amps& y, double& log_scale, const SystemParams& p,
               const TimeGrid& grid, const double* f) {
    const double dt = grid.dt();
    const double vh = 0.5 * p.v;
    const double vmh = 0.5 * p.v * (1.0 - p.delta);
    const double ah = 0.5 * p.alpha;
    const long long n = grid.steps;
    for (long long i = 0; i < n; ++i) {
        const double t = grid.t_start + static_cast<double>(i) * dt;
        double f0 = 0.0, f1 = 0.0;
        if constexpr (HasNoise) {
            f0 = f[i];
            f1 = f[i + 1];
        }
        const double wh0 = ah * t + 0.5 * f0;
        const double wh1 = ah * (t + dt) + 0.5 * f1;
        const double whm = ah * (t + 0.5 * dt) + 0.25 * (f0 + f1);
        rk4_kernel(y, dt, wh0, whm, wh1, vh, vmh);
        if ((i & 255) == 255)
            check_and_rescale(y, log_scale);
    }
}

double clamp_probability(double prob) {
    if (prob >= 0.0 && prob <= 1.0)
        return prob;
    if (prob < 0.0 && prob >= -1e-6)
        return 0.0;
    if (prob > 1.0 && prob <= 1.0 + 1e-6)
        return 1.0;
    throw integration_error("transition probability left [0, 1] beyond tolerance");
}

}

void rk4_step(StateVector& s, const SystemParams& p, double t, double dt,
              double f_start, double f_end) {
    Amps y{s.a.real(), s.a.imag(), s.b.real(), s.b.imag()};
    const double ah = 0.5 * p.alpha;
    const double wh0 = ah * t + 0.5 * f_start;
    const double wh1 = ah * (t + dt) + 0.5 * f_end;
    const double whm = ah * (t + 0.5 * dt) + 0.25 * (f_start + f_end);
    rk4_kernel(y, dt, wh0, whm, wh1, 0.5 * p.v, 0.5 * p.v * (1.0 - p.delta));
    s.a = {y.ar, y.ai};
    s.b = {y.br, y.bi};
}

RealizationResult evolve_single(const SystemParams& p, const TimeGrid& grid,
                                const NoisePath* path, bool asymptotic_matching) {
    validate(p);
    if (grid.steps < 1)
        throw std::invalid_argument("time grid must have at least one step");
    if (path &&
        path->values.size() != static_cast<std::size_t>(grid.steps) + 1)
        throw std::invalid_argument("noise path length does not match the grid");

    const SweepDirection dir = p.direction();
    const double f_start = path ? path->values.front() : 0.0;
    const double f_end = path ? path->values.back() : 0.0;

    Amps y{0.0, 0.0, 0.0, 0.0};
    if (dir == SweepDirection::forward)
        y.br = 1.0;
    else
        y.ar = 1.0;
    if (asymptotic_matching) {
        // Matched initial data: the state that reaches the window edge from
        // the asymptotic initial condition carries a small admixture of the
        // other component (leading boundary term of the stationary-phase
        // expansion).
        const double w0 = p.alpha * grid.t_start + f_start;
        if (dir == SweepDirection::forward)
            y.ar = -p.v / (2.0 * w0) * y.br;
        else
            y.br = p.v * (1.0 - p.delta) / (2.0 * w0) * y.ar;
    }

    double log_scale = 0.0;
    if (path)
        integrate<true>(y, log_scale, p, grid, path->values.data());
    else
        integrate<false>(y, log_scale, p, grid, nullptr);

    if (asymptotic_matching) {
        // Matched exit amplitudes: removes the boundary term of the remaining
        // evolution from t_end to infinity.
        const double w1 = p.alpha * grid.t_end + f_end;
        const double ca = p.v / (2.0 * w1);
        const double cb = p.v * (1.0 - p.delta) / (2.0 * w1);
        const double ar = y.ar + ca * y.br;
        const double ai = y.ai + ca * y.bi;
        const double br = y.br - cb * y.ar;
        const double bi = y.bi - cb * y.ai;
        y = {ar, ai, br, bi};
    }

    const double na = y.ar * y.ar + y.ai * y.ai;
    const double nb = y.br * y.br + y.bi * y.bi;
    if (!std::isfinite(na + nb))
        throw integration_error("amplitude norm became non-finite");

    RealizationResult out;
    out.state.a = {y.ar, y.ai};
    out.state.b = {y.br, y.bi};
    out.state.log_scale = log_scale;
    out.probability =
        clamp_probability((dir == SweepDirection::forward ? nb : na) / (na + nb));
    out.log_norm = std::log(na + nb) + 2.0 * log_scale;
    return out;
}

namespace {

struct SpanStats {
    double mean;
    double std_error;
};

SpanStats span_stats(std::span<const double> x, std::vector<double>& scratch) {
    const double m =
        pairwise_sum(x) / static_cast<double>(x.size());
    scratch.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - m;
        scratch[i] = d * d;
    }
    double se = 0.0;
    if (x.size() > 1) {
        const double var = pairwise_sum(std::span<const double>(scratch)) /
                           static_cast<double>(x.size() - 1);
        se = std::sqrt(var / static_cast<double>(x.size()));
    }
    return {m, se};
}

}

EnsembleResult ensemble_average(const SystemParams& p, const NoiseParams& np,
                                const TimeGrid& grid, long long samples,
                                std::uint64_t master_seed,
                                std::uint64_t stream_offset, int workers,
                                bool asymptotic_matching) {
    validate(p);
    validate(np);
    if (samples < 2)
        throw std::invalid_argument("ensemble needs at least two realizations");

    const int eff_workers = static_cast<int>(
        std::min<long long>(std::max(workers, 1), samples));
    std::vector<double> probs(static_cast<std::size_t>(samples));

    if (np.D == 0.0) {
        // All realizations coincide; still evaluated per sample so the
        // estimator's code path does not depend on D.
        const double prob =
            evolve_single(p, grid, nullptr, asymptotic_matching).probability;
        std::fill(probs.begin(), probs.end(), prob);
    } else {
        std::vector<NoisePath> scratch(static_cast<std::size_t>(eff_workers));
        parallel_for(samples, eff_workers, [&](int worker, long long i) {
            RngStream rng(master_seed, stream_offset + static_cast<std::uint64_t>(i));
            NoisePath& path = scratch[static_cast<std::size_t>(worker)];
            generate_path(path, np, grid, rng);
            probs[static_cast<std::size_t>(i)] =
                evolve_single(p, grid, &path, asymptotic_matching).probability;
        });
    }

    std::vector<double> scratch;
    const std::span<const double> all(probs);
    const std::size_t h1 = probs.size() / 2;

    EnsembleResult r;
    r.samples = samples;
    const SpanStats total = span_stats(all, scratch);
    r.mean = total.mean;
    r.std_error = total.std_error;
    const SpanStats first = span_stats(all.first(h1), scratch);
    const SpanStats second = span_stats(all.subspan(h1), scratch);
    r.half_mean[0] = first.mean;
    r.half_mean[1] = second.mean;
    r.half_std_error[0] = first.std_error;
    r.half_std_error[1] = second.std_error;
    return r;
}

bool convergence_check(const EnsembleResult& r) {
    const double combined = std::sqrt(r.half_std_error[0] * r.half_std_error[0] +
                                      r.half_std_error[1] * r.half_std_error[1]);
    return std::abs(r.half_mean[0] - r.half_mean[1]) <= 3.0 * combined;
}

}
