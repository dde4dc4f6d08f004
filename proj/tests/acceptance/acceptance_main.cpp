// Acceptance checklist for the library. Each criterion prints exactly one
// PASS/FAIL line with the measured numbers and the pinned tolerance; the
// process exits nonzero if any criterion fails. Every random input is fully
// seeded, so reruns are bitwise reproducible.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "lznoise/analytic.hpp"
#include "lznoise/dynamics.hpp"
#include "lznoise/hierarchy.hpp"
#include "lznoise/model.hpp"
#include "lznoise/noise.hpp"
#include "lznoise/rng.hpp"
#include "lznoise/spectrum.hpp"

using namespace lzn;

namespace {

constexpr std::uint64_t kSeed = 777;

int failures = 0;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("[%2d/11] %s  %-52s %s\n", idx, ok ? "PASS" : "FAIL", name,
                detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

// 1. Noiseless sweeps across rates and nonreciprocity match the closed form.
void noiseless_grid() {
    constexpr double tol = 1e-3;
    const double alphas[] = {-5.0, -1.0, -0.2, 0.2, 1.0, 5.0};
    const double deltas[] = {0.0, 0.5, 0.9, 1.0, 1.5, 2.0};
    double worst = 0.0;
    for (double a : alphas)
        for (double d : deltas) {
            SystemParams p{a, 1.0, d};
            const double num = evolve_single(p, default_grid(p, {})).probability;
            worst = std::max(worst, std::abs(num - exact_noiseless(p)));
        }
    report(1, "noiseless sweeps track the closed form", worst < tol,
           fmt("worst |num - exact| = %.2e over 36 cells, tol %.0e", worst, tol));
}

// 2. The reciprocal point alpha = pi/2 lands on exp(-1).
void reciprocal_point() {
    constexpr double target = 0.36787944117144233;
    constexpr double tol = 1e-3;
    SystemParams p{3.141592653589793 / 2.0, 1.0, 0.0};
    const double num = evolve_single(p, default_grid(p, {})).probability;
    const double err = std::abs(num - target);
    report(2, "reciprocal sweep hits exp(-1)", err < tol,
           fmt("P = %.8f, |P - 1/e| = %.2e, tol %.0e", num, err, tol));
}

// 3. Backward survival at delta = 1 is exactly one, path by path: the decayed
//    coupling removes every route out of the occupied component.
void delta_one_lock() {
    constexpr double tol = 1e-10;
    SystemParams p{-1.0, 1.0, 1.0};
    double worst = 0.0;
    const double settings[][2] = {{0.0, 1.0}, {0.5, 1.0}, {1.0, 5.0}};
    int s = 0;
    for (const auto& dg : settings) {
        NoiseParams np{dg[0], dg[1]};
        const TimeGrid grid = default_grid(p, np);
        if (np.D == 0.0) {
            worst = std::max(worst,
                             std::abs(evolve_single(p, grid).probability - 1.0));
        } else {
            for (int m = 0; m < 50; ++m) {
                RngStream rng(kSeed, static_cast<std::uint64_t>(1000 * s + m));
                const NoisePath path = generate_path(np, grid, rng);
                worst = std::max(
                    worst, std::abs(evolve_single(p, grid, &path).probability - 1.0));
            }
        }
        ++s;
    }
    report(3, "backward survival locks at one for delta = 1", worst < tol,
           fmt("worst per-realization |P - 1| = %.1e over 101 runs, tol %.0e",
               worst, tol));
}

// 4. The delta = 2 slow-sweep plateau at 1/2 survives the noise.
void symmetric_plateau() {
    constexpr double tol = 0.02;
    const double settings[][2] = {{0.5, 1.0}, {1.0, 5.0}};
    double worst = 0.0;
    int k = 0;
    for (const auto& dg : settings)
        for (double a : {0.02, -0.02}) {
            SystemParams p{a, 1.0, 2.0};
            NoiseParams np{dg[0] * std::sqrt(std::abs(a)),
                           dg[1] * std::sqrt(std::abs(a))};
            GridPolicy pol{};
            pol.window_scale = 0.25;
            pol.step_scale = 2.0;
            const EnsembleResult r =
                ensemble_average(p, np, default_grid(p, np, pol), 2000, kSeed,
                                 static_cast<std::uint64_t>(k) * 2000);
            worst = std::max(worst, std::abs(r.mean - 0.5));
            ++k;
        }
    report(4, "delta = 2 plateau is noise-robust", worst < tol,
           fmt("worst |mean - 1/2| = %.1e over 4 cells of 2000 paths, tol %.0e",
               worst, tol));
}

// 5. Slow nonreciprocal sweeps under fast noise reach the 1/3 (forward) and
//    2/3 (backward) plateaus by hierarchy, damped subspace, and the adiabatic
//    formula; the noiseless integrator stays on the noiseless curve. The
//    plain per-realization ensemble mean is printed for comparison only: it
//    estimates a different functional of the noise (the mean of ratios, not
//    the ratio of means) and sits above the plateau by design.
void adiabatic_plateaus() {
    constexpr double tol = 0.03;
    constexpr double quiet_tol = 1e-3;
    const double gamma = 10.0 * std::sqrt(0.02);
    NoiseParams np{std::sqrt(10.0 * gamma), gamma};
    double worst = 0.0, worst_quiet = 0.0;
    bool converged = true;
    std::string offsets;
    std::uint64_t offset = 0;
    for (double a : {0.02, -0.02}) {
        SystemParams p{a, 1.0, 0.5};
        const double target = a > 0 ? 1.0 / 3.0 : 2.0 / 3.0;
        const HierarchyResult h = evolve_hierarchy(p, np);
        converged = converged && h.converged;
        worst = std::max(worst, std::abs(h.probability - target));
        worst = std::max(
            worst, std::abs(evolve_subspace(p, np.correlation_strength()) - target));
        worst = std::max(worst, std::abs(adiabatic_limit(p, true) - target));
        worst_quiet = std::max(
            worst_quiet, std::abs(evolve_single(p, default_grid(p, {})).probability -
                                  exact_noiseless(p)));
        const EnsembleResult r = ensemble_average(p, np, default_grid(p, np), 200,
                                                  kSeed, offset);
        offsets += fmt("%s%+.3f", offsets.empty() ? "" : "/", r.mean - target);
        offset += 10000;
    }
    report(5, "adiabatic plateaus 1/3 and 2/3", worst < tol && worst_quiet < quiet_tol && converged,
           fmt("worst method dev = %.1e (tol %.0e), quiet err = %.1e (tol %.0e); "
               "plain-mean offsets %s (informational)",
               worst, tol, worst_quiet, quiet_tol, offsets.c_str()));
}

// 6. Strong white-noise damping halves the coherent transition deficit.
void decoherence_plateau() {
    constexpr double target = 0.68393972058572117;
    constexpr double tol = 0.01;
    SystemParams p{3.141592653589793, 1.0, 0.0};
    const double num = evolve_subspace(p, 40.0);
    const double err = std::abs(num - target);
    report(6, "strong-damping subspace plateau", err < tol,
           fmt("P = %.6f vs (1 + 1/e)/2, err = %.1e, tol %.0e", num, err, tol));
}

// 7. The stochastic ensemble agrees with the moment hierarchy where the noise
//    is fast, collapses onto the damped subspace where it is faster still,
//    and visibly departs from the white-noise reduction where it is slow.
void noise_regimes() {
    constexpr double tol_fast = 0.045;
    constexpr double tol_mid = 0.02;
    constexpr double tol_det = 0.01;
    constexpr double min_gap = 0.05;
    const double alphas[] = {-3.0, -2.0, -1.0, 1.0, 2.0, 3.0};
    double worst_a = 0.0, worst_b = 0.0, worst_b_det = 0.0, worst_c_det = 0.0;
    double max_gap = 0.0;
    bool converged = true;
    int k = 0;
    for (int regime = 0; regime < 3; ++regime)
        for (double a : alphas) {
            SystemParams p{a, 1.0, 0.0};
            NoiseParams np;
            GridPolicy pol{};
            if (regime == 0) {
                np.gamma = 25.0 * std::sqrt(std::abs(a));
                np.D = std::sqrt(2.5 * np.gamma);
                pol.window_scale = 0.5;
            } else if (regime == 1) {
                np.gamma = 50.0 * std::sqrt(std::abs(a));
                np.D = std::sqrt(0.4 * np.gamma);
                pol.window_scale = 0.5;
            } else {
                np.gamma = 0.2;
                np.D = std::sqrt(8.0);
                pol.window_scale = 0.25;
            }
            const double sse =
                ensemble_average(p, np, default_grid(p, np, pol), 500, kSeed,
                                 static_cast<std::uint64_t>(k) * 10000)
                    .mean;
            if (regime == 0) {
                const HierarchyResult h = evolve_hierarchy(p, np, pol);
                converged = converged && h.converged;
                worst_a = std::max(worst_a, std::abs(sse - h.probability));
            } else if (regime == 1) {
                const HierarchyResult h = evolve_hierarchy(p, np, pol);
                converged = converged && h.converged;
                const double sub =
                    evolve_subspace(p, np.correlation_strength(), pol);
                worst_b = std::max(worst_b, std::abs(sse - h.probability));
                worst_b_det = std::max(worst_b_det, std::abs(h.probability - sub));
            } else {
                const double sub =
                    evolve_subspace(p, np.correlation_strength(), pol);
                worst_c_det = std::max(
                    worst_c_det,
                    std::abs(sub - white_noise_prob(p, np.correlation_strength(), 2)));
                max_gap = std::max(max_gap, std::abs(sse - sub));
            }
            ++k;
        }
    const bool ok = worst_a < tol_fast && worst_b < tol_mid &&
                    worst_b_det < tol_mid && worst_c_det < tol_det &&
                    max_gap > min_gap && converged;
    report(7, "ensemble vs hierarchy/subspace across noise regimes", ok,
           fmt("fast %.4f<%.3f, faster %.4f<%.2f (det %.4f), white det %.1e<%.2f, "
               "slow-noise gap %.4f>%.2f",
               worst_a, tol_fast, worst_b, tol_mid, worst_b_det, worst_c_det,
               tol_det, max_gap, min_gap));
}

// 8. Generated noise has the stationary variance and exponential memory.
void noise_statistics() {
    constexpr double tol = 0.05;
    NoiseParams np{1.0, 1.0};
    TimeGrid grid{-100.0, 100.0, 4000};
    std::vector<NoisePath> paths;
    paths.reserve(2000);
    for (int m = 0; m < 2000; ++m) {
        RngStream rng(kSeed, static_cast<std::uint64_t>(m));
        paths.push_back(generate_path(np, grid, rng));
    }
    const long long lags[] = {0, 5, 10, 15, 20, 25, 30, 35, 40};
    const auto acf = autocorrelation_estimate(paths, lags);
    double worst = 0.0;
    for (std::size_t i = 0; i < acf.size(); ++i) {
        const double target =
            std::exp(-np.gamma * static_cast<double>(lags[i]) * grid.dt());
        worst = std::max(worst, std::abs(acf[i] - target) / target);
    }
    report(8, "OU noise variance and exponential memory", worst < tol,
           fmt("worst relative lag-covariance dev = %.4f up to tau = 2, tol %.2f",
               worst, tol));
}

// 9. The nonreciprocal sweep inflates the final norm to the predicted value.
void final_norm() {
    constexpr double target = 1.5440618722340038;
    constexpr double tol = 1e-3;
    SystemParams p{1.0, 1.0, 0.5};
    const double num =
        std::exp(evolve_single(p, default_grid(p, {})).log_norm);
    const double err = std::abs(num - target);
    report(9, "nonreciprocal final norm", err < tol,
           fmt("N = %.7f vs 2 - exp(-pi/4), err = %.1e, tol %.0e", num, err, tol));
}

// 10. Structural properties: coupling rescaling invariance, fourth-order step
//     convergence, window insensitivity, worker-count bitwise determinism,
//     and the real/imaginary eigenvalue dichotomy with noise-induced
//     degeneracies appearing in pairs.
void property_bundle() {
    int passed = 0;

    {
        SystemParams p1{1.0, 1.0, 0.7};
        SystemParams p2{9.0, 3.0, 0.7};
        const double d =
            std::abs(evolve_single(p1, default_grid(p1, {})).probability -
                     evolve_single(p2, default_grid(p2, {})).probability);
        if (d < 1e-6)
            ++passed;
    }

    {
        SystemParams p{1.0, 1.0, 0.5};
        double probs[3];
        int k = 0;
        for (double ss : {8.0, 4.0, 2.0}) {
            GridPolicy pol{};
            pol.step_scale = ss;
            probs[k++] = evolve_single(p, default_grid(p, {}, pol)).probability;
        }
        const double ratio = (probs[0] - probs[1]) / (probs[1] - probs[2]);
        if (ratio > 13.0 && ratio < 19.0)
            ++passed;
    }

    {
        SystemParams p{1.0, 1.0, 0.5};
        GridPolicy wide{};
        wide.window_scale = 2.0;
        const double d =
            std::abs(evolve_single(p, default_grid(p, {})).probability -
                     evolve_single(p, default_grid(p, {}, wide)).probability);
        if (d < 1e-3)
            ++passed;
    }

    {
        SystemParams p{1.0, 1.0, 0.5};
        NoiseParams np{2.0, 0.5};
        GridPolicy pol{};
        pol.window_scale = 0.25;
        pol.step_scale = 2.0;
        const TimeGrid grid = default_grid(p, np, pol);
        const EnsembleResult r1 = ensemble_average(p, np, grid, 32, 123, 0, 1);
        const EnsembleResult r4 = ensemble_average(p, np, grid, 32, 123, 0, 4);
        const EnsembleResult r16 = ensemble_average(p, np, grid, 32, 123, 0, 16);
        if (r1.mean == r4.mean && r4.mean == r16.mean &&
            r1.std_error == r4.std_error && r4.std_error == r16.std_error)
            ++passed;
    }

    {
        SystemParams p{1.0, 1.0, 1.5};
        bool dichotomy = true;
        for (double t : {-2.0, -1.0, -0.5, -0.2, 0.2, 0.5, 1.0, 2.0}) {
            const auto [ep, em] = instantaneous_eigenvalues(p, t);
            const double half = std::sqrt(std::abs(discriminant(p, t))) / 2.0;
            if (discriminant(p, t) >= 0.0)
                dichotomy = dichotomy && std::abs(ep.imag()) < 1e-14 &&
                            std::abs(ep.real() - half) < 1e-14;
            else
                dichotomy = dichotomy && std::abs(ep.real()) < 1e-14 &&
                            std::abs(ep.imag() - half) < 1e-14;
        }
        TimeGrid grid{-4.0, 4.0, 4000};
        NoiseParams np{1.0, 1.0};
        RngStream rng(3, 5);
        const NoisePath path = generate_path(np, grid, rng);
        const auto eps = find_exceptional_points(p, grid, &path);
        const bool sorted = std::is_sorted(
            eps.begin(), eps.end(),
            [](const EpRecord& x, const EpRecord& y) { return x.t < y.t; });
        if (dichotomy && eps.size() >= 2 && eps.size() % 2 == 0 && sorted)
            ++passed;
    }

    report(10, "scaling, convergence, and spectrum properties", passed == 5,
           fmt("%d/5 properties hold (rescaling, step order, window, workers, "
               "spectrum)",
               passed));
}

// 11. With the nonreciprocity off, noisy sweeps forget the sweep direction.
void direction_symmetry() {
    NoiseParams np{0.5, 1.0};
    SystemParams pf{1.0, 1.0, 0.0};
    SystemParams pb{-1.0, 1.0, 0.0};
    const EnsembleResult rf =
        ensemble_average(pf, np, default_grid(pf, np), 2000, kSeed, 0);
    const EnsembleResult rb =
        ensemble_average(pb, np, default_grid(pb, np), 2000, kSeed, 2000);
    const double gap = std::abs(rf.mean - rb.mean);
    const double lim = 2.0 * std::sqrt(rf.std_error * rf.std_error +
                                       rb.std_error * rb.std_error);
    report(11, "reciprocal sweeps forget the direction under noise", gap <= lim,
           fmt("|fwd - bwd| = %.5f vs 2-sigma limit %.5f (2000 paths each)", gap,
               lim));
}

}

int main() {
    noiseless_grid();
    reciprocal_point();
    delta_one_lock();
    symmetric_plateau();
    adiabatic_plateaus();
    decoherence_plateau();
    noise_regimes();
    noise_statistics();
    final_norm();
    property_bundle();
    direction_symmetry();
    if (failures)
        std::printf("%d of 11 criteria FAILED\n", failures);
    else
        std::printf("all 11 criteria passed\n");
    return failures ? 1 : 0;
}
