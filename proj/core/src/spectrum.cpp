#include "lznoise/spectrum.hpp"

#include <cmath>

namespace lzn {

double discriminant(const SystemParams& p, double t, double f) {
    const double w = p.alpha * t + f;
    return w * w + p.v * p.v * (1.0 - p.delta);
}

std::pair<std::complex<double>, std::complex<double>>
instantaneous_eigenvalues(const SystemParams& p, double t, double f) {
    const double disc = discriminant(p, t, f);
    std::complex<double> root;
    if (disc >= 0.0)
        root = {0.5 * std::sqrt(disc), 0.0};
    else
        root = {0.0, 0.5 * std::sqrt(-disc)};
    return {root, -root};
}

std::vector<SpectrumSample> spectrum_scan(const SystemParams& p,
                                          const TimeGrid& grid,
                                          const NoisePath* path) {
    validate(p);
    if (path &&
        path->values.size() != static_cast<std::size_t>(grid.steps) + 1)
        throw std::invalid_argument("noise path length does not match the grid");
    std::vector<SpectrumSample> out;
    out.reserve(static_cast<std::size_t>(grid.steps) + 1);
    for (long long i = 0; i <= grid.steps; ++i) {
        const double t = grid.node(i);
        const double f = path ? path->values[static_cast<std::size_t>(i)] : 0.0;
        SpectrumSample s;
        s.t = t;
        s.discriminant = discriminant(p, t, f);
        auto [ep, em] = instantaneous_eigenvalues(p, t, f);
        s.e_plus = ep;
        s.e_minus = em;
        out.push_back(s);
    }
    return out;
}

namespace {

// Bisection on the discriminant with the noise linearly interpolated between
// the bracketing nodes.
double refine_zero(const SystemParams& p, double t_lo, double t_hi, double f_lo,
                   double f_hi, double d_lo) {
    const double span = t_hi - t_lo;
    double lo = t_lo, hi = t_hi;
    double dlo = d_lo;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double u = (mid - t_lo) / span;
        const double f = f_lo + u * (f_hi - f_lo);
        const double d = discriminant(p, mid, f);
        if (std::abs(d) < 1e-10)
            return mid;
        if ((d < 0.0) == (dlo < 0.0)) {
            lo = mid;
            dlo = d;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}

std::vector<EpRecord> find_exceptional_points(const SystemParams& p,
                                              const TimeGrid& grid,
                                              const NoisePath* path) {
    validate(p);
    if (path &&
        path->values.size() != static_cast<std::size_t>(grid.steps) + 1)
        throw std::invalid_argument("noise path length does not match the grid");

    const EpKind kind =
        path ? EpKind::NoiseInducedCrossing : EpKind::NoiselessAnalytic;
    const long long n = grid.steps;
    auto node_f = [&](long long i) {
        return path ? path->values[static_cast<std::size_t>(i)] : 0.0;
    };

    std::vector<double> disc(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i <= n; ++i)
        disc[static_cast<std::size_t>(i)] = discriminant(p, grid.node(i), node_f(i));

    std::vector<EpRecord> out;
    for (long long i = 0; i <= n; ++i) {
        const double d = disc[static_cast<std::size_t>(i)];
        if (d == 0.0) {
            if (i > 0 && i < n &&
                disc[static_cast<std::size_t>(i - 1)] *
                        disc[static_cast<std::size_t>(i + 1)] <
                    0.0)
                out.push_back({grid.node(i), kind});
            continue;
        }
        if (i == n)
            break;
        const double dn = disc[static_cast<std::size_t>(i + 1)];
        if (d * dn < 0.0) {
            const double t = refine_zero(p, grid.node(i), grid.node(i + 1),
                                         node_f(i), node_f(i + 1), d);
            out.push_back({t, kind});
        }
    }
    return out;
}

std::vector<double> noiseless_ep_times(const SystemParams& p) {
    validate(p);
    if (p.delta <= 1.0)
        return {};
    const double m = p.v * std::sqrt(p.delta - 1.0) / p.alpha;
    return {-std::abs(m), std::abs(m)};
}

std::string_view ep_kind_name(EpKind kind) {
    return kind == EpKind::NoiselessAnalytic ? "noiseless" : "noise-induced";
}

}
