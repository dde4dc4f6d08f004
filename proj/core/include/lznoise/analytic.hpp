#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "lznoise/model.hpp"

namespace lzn {

enum class AnalyticKind {
    NoiselessExact,
    DeltaOneExact,
    WhiteNoiseOrder2,
    WhiteNoiseLeading,
    AdiabaticNoisy,
    AdiabaticNoiseless,
    StrongDecoherenceDelta0,
};

// Noiseless transition probability for the given sweep direction. Handles
// delta == 1 internally and stays finite for arbitrarily large exponents.
double exact_noiseless(const SystemParams& p);

// delta == 1 special case: forward 2a/(2a + pi v^2), backward exactly 1.
double exact_delta_one(const SystemParams& p);

// Asymptotic norm of the noiseless forward/backward sweep started in the
// direction's initial state.
double noiseless_final_population(const SystemParams& p);

// White-noise (memoryless) limit. order = 1 keeps the leading term, order = 2
// adds the 1/Gamma^2 correction. Gamma = D^2/gamma is required positive for
// order 2.
double white_noise_prob(const SystemParams& p, double correlation_strength,
                        int order);

// alpha -> 0 plateau. noisy selects the decohered plateau; the noiseless
// delta < 1 limit is 0. Undefined at delta == 1.
double adiabatic_limit(const SystemParams& p, bool noisy);

double evaluate(AnalyticKind kind, const SystemParams& p, const NoiseParams& np);

std::string_view analytic_kind_name(AnalyticKind kind);
std::optional<AnalyticKind> parse_analytic_kind(std::string_view name);

}
