#pragma once

#include <utility>
#include <vector>

#include "lznoise/dynamics.hpp"
#include "lznoise/model.hpp"

namespace lzn {

// Noise-averaged moment hierarchy: level n couples the system operators to
// the n-th Wiener-Hermite component of the bath. Level 0 carries the
// observable populations; s(0) is the norm and p(0) the population
// imbalance.
struct HierarchyState {
    int n_max = 0;
    std::vector<double> p, q, r, s;

    void resize(int levels) {
        n_max = levels;
        p.assign(static_cast<std::size_t>(levels) + 1, 0.0);
        q.assign(static_cast<std::size_t>(levels) + 1, 0.0);
        r.assign(static_cast<std::size_t>(levels) + 1, 0.0);
        s.assign(static_cast<std::size_t>(levels) + 1, 0.0);
    }
};

void hierarchy_rhs(const SystemParams& p, const NoiseParams& np, double t,
                   const HierarchyState& in, HierarchyState& out);

struct HierarchyOptions {
    int n_start = 12;
    int n_cap = 40;
    double tol = 1e-3;
};

struct HierarchyResult {
    double probability = 0.0;
    int n_levels = 0;
    bool converged = false;
    std::vector<std::pair<int, double>> attempts;
};

// Integrates the hierarchy across the default window, escalating the
// truncation depth by two until successive probabilities agree within
// options.tol. converged == false means the cap was reached first.
HierarchyResult evolve_hierarchy(const SystemParams& p, const NoiseParams& np,
                                 const GridPolicy& policy = {},
                                 const HierarchyOptions& options = {});

struct SubspaceState {
    double p = 0.0, q = 0.0, r = 0.0, s = 0.0;
};

// White-noise reduction: the hierarchy collapsed to level 0 with damping
// rate equal to the correlation strength D^2/gamma.
double evolve_subspace(const SystemParams& p, double correlation_strength,
                       const GridPolicy& policy = {});

}
