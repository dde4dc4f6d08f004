#include "lznoise/hierarchy.hpp"

#include <algorithm>
#include <cmath>

namespace lzn {

namespace {

void rhs_kernel(const SystemParams& pp, const NoiseParams& np, double t,
                int n_max, const double* sq, const double* p, const double* q,
                const double* r, const double* s, double* dp, double* dq,
                double* dr, double* ds) {
    const double w = pp.alpha * t;
    const double v = pp.v;
    const double d = pp.delta;
    const double cp = 0.5 * v * (2.0 - d);
    const double cs = 0.5 * v * d;
    const double cr = 0.5 * v * (d - 2.0);
    const double D = np.D;
    const double gamma = np.gamma;
    for (int n = 0; n <= n_max; ++n) {
        const double damp = static_cast<double>(n) * gamma;
        const double q_up = n < n_max ? sq[n + 1] * q[n + 1] : 0.0;
        const double r_up = n < n_max ? sq[n + 1] * r[n + 1] : 0.0;
        const double q_dn = n > 0 ? sq[n] * q[n - 1] : 0.0;
        const double r_dn = n > 0 ? sq[n] * r[n - 1] : 0.0;
        dp[n] = -damp * p[n] + cp * r[n];
        dq[n] = -damp * q[n] - w * r[n] - D * (r_up + r_dn);
        dr[n] = -damp * r[n] + w * q[n] + cs * s[n] + cr * p[n] + D * (q_up + q_dn);
        ds[n] = -damp * s[n] + cs * r[n];
    }
}

std::vector<double> sqrt_table(int n_max) {
    std::vector<double> sq(static_cast<std::size_t>(n_max) + 2);
    for (int n = 0; n <= n_max + 1; ++n)
        sq[static_cast<std::size_t>(n)] = std::sqrt(static_cast<double>(n));
    return sq;
}

struct Work {
    std::vector<double> y, k1, k2, k3, k4, tmp;
};

// One truncation attempt; returns the exit probability.
double run_attempt(const SystemParams& pp, const NoiseParams& np, int n_max,
                   const GridPolicy& policy, Work& w) {
    const double aabs = std::abs(pp.alpha);
    double slow = std::max(1.0 / std::sqrt(aabs), pp.v / aabs);
    if (np.D > 0.0)
        slow = std::max(slow, 1.0 / np.gamma);
    const double T = policy.window_factor * policy.window_scale * slow;

    double rate = std::max({pp.v, aabs * T, std::sqrt(aabs)});
    if (np.D > 0.0)
        rate = std::max({rate, np.gamma, static_cast<double>(n_max) * np.gamma,
                         np.D * std::sqrt(static_cast<double>(n_max) + 1.0)});
    const double dt_target = policy.step_factor * policy.step_scale / rate;
    const long long steps =
        std::max<long long>(2, 2 * static_cast<long long>(std::ceil(T / dt_target)));
    const double dt = 2.0 * T / static_cast<double>(steps);

    const int m = n_max + 1;
    const std::size_t len = 4 * static_cast<std::size_t>(m);
    w.y.assign(len, 0.0);
    w.k1.assign(len, 0.0);
    w.k2.assign(len, 0.0);
    w.k3.assign(len, 0.0);
    w.k4.assign(len, 0.0);
    w.tmp.assign(len, 0.0);
    const auto sq = sqrt_table(n_max);

    const bool fwd = pp.direction() == SweepDirection::forward;
    double* y = w.y.data();
    // layout: [p | q | r | s], each m entries
    y[0] = fwd ? -1.0 : 1.0;
    y[3 * m] = 1.0;
    const double w_start = pp.alpha * (-T);
    const double w_end = pp.alpha * T;
    if (policy.asymptotic_matching)
        y[m] = fwd ? -pp.v / w_start : pp.v * (1.0 - pp.delta) / w_start;

    auto eval = [&](double t, const double* in, double* out) {
        rhs_kernel(pp, np, t, n_max, sq.data(), in, in + m, in + 2 * m, in + 3 * m,
                   out, out + m, out + 2 * m, out + 3 * m);
    };

    double* k1 = w.k1.data();
    double* k2 = w.k2.data();
    double* k3 = w.k3.data();
    double* k4 = w.k4.data();
    double* tmp = w.tmp.data();
    const double half = 0.5 * dt;
    const double sixth = dt / 6.0;
    for (long long i = 0; i < steps; ++i) {
        const double t = -T + static_cast<double>(i) * dt;
        eval(t, y, k1);
        for (std::size_t j = 0; j < len; ++j)
            tmp[j] = y[j] + half * k1[j];
        eval(t + half, tmp, k2);
        for (std::size_t j = 0; j < len; ++j)
            tmp[j] = y[j] + half * k2[j];
        eval(t + half, tmp, k3);
        for (std::size_t j = 0; j < len; ++j)
            tmp[j] = y[j] + dt * k3[j];
        eval(t + dt, tmp, k4);
        for (std::size_t j = 0; j < len; ++j)
            y[j] += sixth * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);
        if ((i & 255) == 255) {
            const double mag = std::max(std::abs(y[0]), std::abs(y[3 * m]));
            if (!std::isfinite(mag))
                throw integration_error("hierarchy state became non-finite");
            if (mag > 1e250) {
                const double inv = 1.0 / mag;
                for (std::size_t j = 0; j < len; ++j)
                    y[j] *= inv;
            }
        }
    }

    double p0 = y[0];
    double q0 = y[m];
    double s0 = y[3 * m];
    if (!std::isfinite(p0) || !std::isfinite(s0))
        throw integration_error("hierarchy state became non-finite");
    if (policy.asymptotic_matching) {
        p0 += pp.v * (2.0 - pp.delta) * q0 / (2.0 * w_end);
        s0 += pp.v * pp.delta * q0 / (2.0 * w_end);
    }
    return fwd ? (s0 - p0) / (2.0 * s0) : (s0 + p0) / (2.0 * s0);
}

}

void hierarchy_rhs(const SystemParams& p, const NoiseParams& np, double t,
                   const HierarchyState& in, HierarchyState& out) {
    validate(p);
    validate(np);
    out.resize(in.n_max);
    const auto sq = sqrt_table(in.n_max);
    rhs_kernel(p, np, t, in.n_max, sq.data(), in.p.data(), in.q.data(),
               in.r.data(), in.s.data(), out.p.data(), out.q.data(),
               out.r.data(), out.s.data());
}

HierarchyResult evolve_hierarchy(const SystemParams& p, const NoiseParams& np,
                                 const GridPolicy& policy,
                                 const HierarchyOptions& options) {
    validate(p);
    validate(np);
    if (options.n_start < 0 || options.n_cap < options.n_start)
        throw std::invalid_argument("hierarchy truncation bounds are inconsistent");

    Work work;
    HierarchyResult result;
    int n = options.n_start;
    double prev = run_attempt(p, np, n, policy, work);
    result.attempts.emplace_back(n, prev);
    result.probability = prev;
    result.n_levels = n;
    if (np.D == 0.0) {
        // Level 0 decouples; deeper truncations reproduce it exactly.
        result.converged = true;
        return result;
    }
    while (n + 2 <= options.n_cap) {
        n += 2;
        const double cur = run_attempt(p, np, n, policy, work);
        result.attempts.emplace_back(n, cur);
        result.probability = cur;
        result.n_levels = n;
        if (std::abs(cur - prev) <= options.tol) {
            result.converged = true;
            return result;
        }
        prev = cur;
    }
    result.converged = false;
    return result;
}

double evolve_subspace(const SystemParams& pp, double correlation_strength,
                       const GridPolicy& policy) {
    validate(pp);
    if (correlation_strength < 0.0 || !std::isfinite(correlation_strength))
        throw std::invalid_argument(
            "correlation strength must be nonnegative and finite");
    const double Gam = correlation_strength;
    const double v = pp.v;
    const double d = pp.delta;
    const double aabs = std::abs(pp.alpha);
    const bool fwd = pp.direction() == SweepDirection::forward;

    const double T = policy.window_factor * policy.window_scale *
                     std::max(1.0 / std::sqrt(aabs), v / aabs);
    const double rate = std::max({v, aabs * T, std::sqrt(aabs), Gam});
    const double dt_target = policy.step_factor * policy.step_scale / rate;
    const long long steps =
        std::max<long long>(2, 2 * static_cast<long long>(std::ceil(T / dt_target)));
    const double dt = 2.0 * T / static_cast<double>(steps);

    // Remaining drift of (p, s) outside the window: u' = g(t) B u with
    // g = Gam/(w^2 + Gam^2) and constant rank-1 B, so the flow from the edge
    // to infinity is exp(G B) with G the integral of g.
    const double B00 = -0.25 * v * v * (2.0 - d) * (2.0 - d);
    const double B01 = 0.25 * v * v * d * (2.0 - d);
    const double B10 = -B01;
    const double B11 = 0.25 * v * v * d * d;
    const double tau = v * v * (d - 1.0);
    const double G = (1.5707963267948966 - std::atan(aabs * T / Gam)) / aabs;
    const double x = G * tau;
    const double coef = std::abs(x) > 1e-8 ? std::expm1(x) / tau : G * (1.0 + 0.5 * x);
    auto tail_flow = [&](double& u0, double& u1) {
        const double n0 = u0 + coef * (B00 * u0 + B01 * u1);
        const double n1 = u1 + coef * (B10 * u0 + B11 * u1);
        u0 = n0;
        u1 = n1;
    };

    SubspaceState y;
    y.p = fwd ? -1.0 : 1.0;
    y.s = 1.0;
    const double w_start = pp.alpha * (-T);
    const double w_end = pp.alpha * T;
    if (policy.asymptotic_matching) {
        tail_flow(y.p, y.s);
        const double c = 0.5 * v * d * y.s + 0.5 * v * (d - 2.0) * y.p;
        const double den = w_start * w_start + Gam * Gam;
        y.q = -c * w_start / den;
        y.r = c * Gam / den;
    }

    auto deriv = [&](double t, const SubspaceState& u) {
        const double w = pp.alpha * t;
        SubspaceState dy;
        dy.p = 0.5 * v * (2.0 - d) * u.r;
        dy.q = -w * u.r - Gam * u.q;
        dy.r = w * u.q + 0.5 * v * d * u.s + 0.5 * v * (d - 2.0) * u.p - Gam * u.r;
        dy.s = 0.5 * v * d * u.r;
        return dy;
    };
    auto axpy = [](const SubspaceState& u, double c, const SubspaceState& k) {
        return SubspaceState{u.p + c * k.p, u.q + c * k.q, u.r + c * k.r,
                             u.s + c * k.s};
    };

    const double half = 0.5 * dt;
    const double sixth = dt / 6.0;
    for (long long i = 0; i < steps; ++i) {
        const double t = -T + static_cast<double>(i) * dt;
        const SubspaceState k1 = deriv(t, y);
        const SubspaceState k2 = deriv(t + half, axpy(y, half, k1));
        const SubspaceState k3 = deriv(t + half, axpy(y, half, k2));
        const SubspaceState k4 = deriv(t + dt, axpy(y, dt, k3));
        y.p += sixth * (k1.p + 2.0 * (k2.p + k3.p) + k4.p);
        y.q += sixth * (k1.q + 2.0 * (k2.q + k3.q) + k4.q);
        y.r += sixth * (k1.r + 2.0 * (k2.r + k3.r) + k4.r);
        y.s += sixth * (k1.s + 2.0 * (k2.s + k3.s) + k4.s);
    }
    if (!std::isfinite(y.p) || !std::isfinite(y.s))
        throw integration_error("subspace state became non-finite");

    double p0 = y.p;
    double s0 = y.s;
    if (policy.asymptotic_matching) {
        if (Gam == 0.0) {
            // No damping: the tail flow is empty and the exit boundary term
            // carries the correction instead.
            p0 += v * (2.0 - d) * y.q / (2.0 * w_end);
            s0 += v * d * y.q / (2.0 * w_end);
        } else {
            tail_flow(p0, s0);
        }
    }
    return fwd ? (s0 - p0) / (2.0 * s0) : (s0 + p0) / (2.0 * s0);
}

}
