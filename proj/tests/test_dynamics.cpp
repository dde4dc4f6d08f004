#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "lznoise/analytic.hpp"
#include "lznoise/dynamics.hpp"
#include "lznoise/hierarchy.hpp"
#include "lznoise/model.hpp"
#include "lznoise/noise.hpp"
#include "lznoise/rng.hpp"

using namespace lzn;

TEST_CASE("noiseless integration matches the closed form on both sweeps") {
    const double alphas[] = {1.0, -1.0};
    const double deltas[] = {0.0, 0.5, 1.0, 1.5, 2.0};
    for (double a : alphas)
        for (double d : deltas) {
            SystemParams p{a, 1.0, d};
            const TimeGrid grid = default_grid(p, {});
            const double num = evolve_single(p, grid).probability;
            CHECK(num == doctest::Approx(exact_noiseless(p)).epsilon(1e-4));
        }
}

TEST_CASE("probability is symmetric in the sweep direction at delta 2") {
    SystemParams fwd{1.0, 1.0, 2.0};
    SystemParams bwd{-1.0, 1.0, 2.0};
    CHECK(exact_noiseless(fwd) == doctest::Approx(exact_noiseless(bwd)).epsilon(1e-14));
}

TEST_CASE("step halving converges at fourth order") {
    SystemParams p{1.0, 1.0, 0.5};
    double probs[3];
    int k = 0;
    for (double ss : {8.0, 4.0, 2.0}) {
        GridPolicy pol{};
        pol.step_scale = ss;
        probs[k++] = evolve_single(p, default_grid(p, {}, pol)).probability;
    }
    const double d84 = probs[0] - probs[1];
    const double d42 = probs[1] - probs[2];
    const double ratio = d84 / d42;
    CHECK(ratio > 13.0);
    CHECK(ratio < 19.0);
    CHECK(std::abs(d42) < 1e-9);
}

TEST_CASE("doubling the window barely moves the matched answer") {
    SystemParams p{1.0, 1.0, 0.5};
    GridPolicy wide{};
    wide.window_scale = 2.0;
    const double p1 = evolve_single(p, default_grid(p, {})).probability;
    const double p2 = evolve_single(p, default_grid(p, {}, wide)).probability;
    CHECK(std::abs(p1 - p2) < 1e-4);
}

TEST_CASE("asymptotic matching beats raw endpoint values by orders") {
    SystemParams p{1.0, 1.0, 0.5};
    const double exact = exact_noiseless(p);
    const double matched = evolve_single(p, default_grid(p, {})).probability;
    GridPolicy raw{};
    raw.asymptotic_matching = false;
    const double endpoint =
        evolve_single(p, default_grid(p, {}, raw), nullptr, false).probability;
    CHECK(std::abs(matched - exact) < 1e-4);
    CHECK(std::abs(endpoint - exact) > 1e-3);
}

TEST_CASE("rescaling alpha by s^2 and v by s leaves the probability") {
    SystemParams p1{1.0, 1.0, 0.7};
    SystemParams p2{9.0, 3.0, 0.7};
    const double a = evolve_single(p1, default_grid(p1, {})).probability;
    const double b = evolve_single(p2, default_grid(p2, {})).probability;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("single rk4 step rotates a decoupled phase correctly") {
    // alpha = 0 with constant f = 2 gives w = 2; with negligible coupling the
    // upper amplitude rotates as exp(+i w t / 2).
    SystemParams p{0.0, 1e-300, 0.0};
    StateVector s;
    s.a = 1.0;
    const double dt = 0.1;
    rk4_step(s, p, 0.0, dt, 2.0, 2.0);
    CHECK(s.a.real() == doctest::Approx(std::cos(dt)).epsilon(1e-5));
    CHECK(s.a.imag() == doctest::Approx(std::sin(dt)).epsilon(1e-5));
}

TEST_CASE("single rk4 step matches the constant-coupling rotation") {
    SystemParams p{0.0, 1.0, 0.0};
    StateVector s;
    s.a = 1.0;
    const double dt = 0.1;
    rk4_step(s, p, 0.0, dt, 0.0, 0.0);
    CHECK(s.a.real() == doctest::Approx(std::cos(0.5 * dt)).epsilon(1e-6));
    CHECK(s.a.imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.b.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.b.imag() == doctest::Approx(std::sin(0.5 * dt)).epsilon(1e-6));
}

TEST_CASE("reciprocal noisy realizations conserve the norm") {
    SystemParams p{1.0, 1.0, 0.0};
    NoiseParams np{0.5, 1.0};
    const TimeGrid grid = default_grid(p, np);
    for (int m = 0; m < 5; ++m) {
        RngStream rng(7, static_cast<std::uint64_t>(m));
        const NoisePath path = generate_path(np, grid, rng);
        const RealizationResult r = evolve_single(p, grid, &path);
        CHECK(std::abs(r.log_norm) < 2e-3);
    }
}

TEST_CASE("raw reciprocal integration conserves the norm to integrator precision") {
    // Without boundary matching log_norm is the bare integration drift, so
    // this pins the conservative character of the delta = 0 equations rather
    // than the window truncation error.
    GridPolicy raw{};
    raw.asymptotic_matching = false;
    for (double a : {1.0, 0.2}) {
        SystemParams p{a, 1.0, 0.0};
        const RealizationResult r =
            evolve_single(p, default_grid(p, {}, raw), nullptr, false);
        CHECK(std::abs(r.log_norm) < 1e-8);
    }
    SystemParams p{1.0, 1.0, 0.0};
    NoiseParams np{0.5, 1.0};
    const TimeGrid grid = default_grid(p, np, raw);
    for (int m = 0; m < 5; ++m) {
        RngStream rng(7, static_cast<std::uint64_t>(m));
        const NoisePath path = generate_path(np, grid, rng);
        const RealizationResult r = evolve_single(p, grid, &path, false);
        CHECK(std::abs(r.log_norm) < 1e-7);
    }
}

TEST_CASE("a zero-amplitude path reproduces the noiseless run bitwise") {
    SystemParams p{1.0, 1.0, 0.5};
    NoiseParams quiet{0.0, 1.0};
    const TimeGrid grid = default_grid(p, quiet);
    RngStream rng(1, 0);
    const NoisePath zeros = generate_path(quiet, grid, rng);
    const RealizationResult with_path = evolve_single(p, grid, &zeros);
    const RealizationResult without = evolve_single(p, grid);
    CHECK(with_path.probability == without.probability);
    CHECK(with_path.log_norm == without.log_norm);
}

TEST_CASE("evolve_single validates its grid and path") {
    SystemParams p{1.0, 1.0, 0.5};
    TimeGrid empty{0.0, 1.0, 0};
    CHECK_THROWS_AS(evolve_single(p, empty), std::invalid_argument);

    const TimeGrid grid{-1.0, 1.0, 10};
    NoisePath bad;
    bad.values.assign(5, 0.0);
    CHECK_THROWS_AS(evolve_single(p, grid, &bad), std::invalid_argument);
}

TEST_CASE("a wildly unstable step is reported, not returned") {
    SystemParams p{1.0, 1.0, 0.5};
    const TimeGrid grid{-400.0, 400.0, 40};
    CHECK_THROWS_AS(evolve_single(p, grid), integration_error);
}

TEST_CASE("ensemble mean is bitwise independent of the worker count") {
    SystemParams p{1.0, 1.0, 0.5};
    NoiseParams np{0.5, 1.0};
    const TimeGrid grid = default_grid(p, np);
    const EnsembleResult r1 = ensemble_average(p, np, grid, 48, 123, 0, 1);
    const EnsembleResult r3 = ensemble_average(p, np, grid, 48, 123, 0, 3);
    const EnsembleResult r16 = ensemble_average(p, np, grid, 48, 123, 0, 16);
    CHECK(r1.mean == r3.mean);
    CHECK(r1.std_error == r3.std_error);
    CHECK(r1.mean == r16.mean);
    CHECK(r1.half_mean[0] == r16.half_mean[0]);
    CHECK(r1.half_mean[1] == r16.half_mean[1]);
}

TEST_CASE("ensemble statistics without noise collapse to the single run") {
    SystemParams p{1.0, 1.0, 0.5};
    NoiseParams quiet{0.0, 1.0};
    const TimeGrid grid = default_grid(p, quiet);
    const EnsembleResult r = ensemble_average(p, quiet, grid, 8, 1, 0, 2);
    CHECK(r.mean == evolve_single(p, grid).probability);
    CHECK(r.std_error == 0.0);
    CHECK(convergence_check(r));
}

TEST_CASE("ensemble rejects degenerate sample counts") {
    SystemParams p{1.0, 1.0, 0.5};
    NoiseParams np{0.5, 1.0};
    const TimeGrid grid = default_grid(p, np);
    CHECK_THROWS_AS(ensemble_average(p, np, grid, 1, 1), std::invalid_argument);
}

TEST_CASE("convergence check compares half-ensemble means") {
    EnsembleResult ok;
    ok.half_mean[0] = 0.5;
    ok.half_mean[1] = 0.5001;
    ok.half_std_error[0] = 1e-4;
    ok.half_std_error[1] = 1e-4;
    CHECK(convergence_check(ok));

    EnsembleResult bad = ok;
    bad.half_mean[1] = 0.6;
    CHECK(!convergence_check(bad));
}

TEST_CASE("seed and stream offset select distinct ensembles") {
    SystemParams p{1.0, 1.0, 0.5};
    NoiseParams np{0.5, 1.0};
    GridPolicy fast{};
    fast.window_scale = 0.5;
    fast.step_scale = 2.0;
    const TimeGrid grid = default_grid(p, np, fast);
    const EnsembleResult base = ensemble_average(p, np, grid, 16, 123, 0, 1);
    const EnsembleResult seed2 = ensemble_average(p, np, grid, 16, 124, 0, 1);
    const EnsembleResult shifted = ensemble_average(p, np, grid, 16, 123, 16, 1);
    CHECK(base.mean != seed2.mean);
    CHECK(base.mean != shifted.mean);
}

TEST_CASE("norm-weighted sample mean agrees with the moment hierarchy") {
    // The per-realization probability |b|^2/N averages differently from the
    // population-ratio <|b|^2>/<N> that the hierarchy computes; weighting
    // each realization by its final norm N = exp(log_norm) recovers it.
    SystemParams p{1.0, 1.0, 0.5};
    NoiseParams np{std::sqrt(62.5), 25.0};
    const TimeGrid grid = default_grid(p, np);
    const HierarchyResult h = evolve_hierarchy(p, np);
    REQUIRE(h.converged);

    const long long M = 1000;
    double swp = 0.0, sw = 0.0, sp = 0.0;
    for (long long m = 0; m < M; ++m) {
        RngStream rng(4242, static_cast<std::uint64_t>(m));
        const NoisePath path = generate_path(np, grid, rng);
        const RealizationResult r = evolve_single(p, grid, &path);
        const double w = std::exp(r.log_norm);
        swp += w * r.probability;
        sw += w;
        sp += r.probability;
    }
    const double weighted = swp / sw;
    const double plain = sp / static_cast<double>(M);
    CHECK(std::abs(weighted - h.probability) < 0.02);
    CHECK(plain - h.probability > 0.03);
}
