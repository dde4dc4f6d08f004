#include "lznoise/analytic.hpp"

#include <cmath>

namespace lzn {

namespace {

constexpr double pi = 3.14159265358979323846264338327950288;

bool is_delta_one(double delta) { return std::abs(delta - 1.0) < 1e-12; }

}

double exact_delta_one(const SystemParams& p) {
    validate(p);
    if (p.direction() == SweepDirection::backward)
        return 1.0;
    return 2.0 * p.alpha / (2.0 * p.alpha + pi * p.v * p.v);
}

double exact_noiseless(const SystemParams& p) {
    validate(p);
    const double d = p.delta;
    if (is_delta_one(d))
        return exact_delta_one(p);
    // X > 0 for the nonamplifying side of each sweep; the guarded branches
    // avoid overflowing exp for strongly amplifying parameters.
    const double X = pi * p.v * p.v * (1.0 - d) / (2.0 * p.alpha);
    if (p.direction() == SweepDirection::forward) {
        if (X < -500.0)
            return (1.0 - d) / (std::exp(X) - d);
        const double E = std::exp(-X);
        return (1.0 - d) * E / (1.0 - d * E);
    }
    if (X > 500.0)
        return 1.0 / ((1.0 - d) * std::exp(-X) + d);
    const double E = std::exp(X);
    return E / (1.0 - d + d * E);
}

double noiseless_final_population(const SystemParams& p) {
    validate(p);
    const double d = p.delta;
    if (p.direction() == SweepDirection::forward) {
        if (is_delta_one(d))
            return 1.0 + pi * p.v * p.v / (2.0 * p.alpha);
        const double E = std::exp(-pi * p.v * p.v * (1.0 - d) / (2.0 * p.alpha));
        return (1.0 - d * E) / (1.0 - d);
    }
    const double E = std::exp(pi * p.v * p.v * (1.0 - d) / (2.0 * p.alpha));
    return (1.0 - d) + d * E;
}

double white_noise_prob(const SystemParams& p, double correlation_strength,
                        int order) {
    validate(p);
    if (order != 1 && order != 2)
        throw std::invalid_argument("white-noise order must be 1 or 2");
    if (order == 2 && !(correlation_strength > 0.0))
        throw std::invalid_argument(
            "second-order white-noise term requires positive correlation strength");

    const double d = p.delta;
    const double v2 = p.v * p.v;
    if (is_delta_one(d) && p.direction() == SweepDirection::forward)
        return 2.0 * p.alpha / (2.0 * p.alpha + pi * v2);

    const double K = v2 * (d - 1.0) / p.alpha;
    const double K2 = K * K;
    double lead, corr;
    if (p.direction() == SweepDirection::forward) {
        if (K * pi > 500.0) {
            lead = (d - 1.0) / d;
            corr = 0.0;
        } else {
            const double E = std::exp(K * pi);
            const double den = d * E + d - 2.0;
            lead = (d - 1.0) * (E + 1.0) / den;
            corr = 2.0 * v2 * (d - 1.0) * (d - 1.0) * (E - 1.0) * (K2 - 8.0) /
                   (den * den * (K2 + 4.0) * (K2 + 16.0));
        }
    } else {
        const double X = -K * pi;
        if (X > 500.0) {
            lead = 1.0 / d;
            corr = 0.0;
        } else {
            const double E = std::exp(X);
            const double den = 2.0 - d + d * E;
            lead = (E + 1.0) / den;
            corr = 2.0 * v2 * (d - 1.0) * (d - 1.0) * (E - 1.0) * (K2 - 8.0) /
                   (den * den * (K2 + 4.0) * (K2 + 16.0));
        }
    }
    if (order == 1)
        return lead;
    return lead - corr / (correlation_strength * correlation_strength);
}

double adiabatic_limit(const SystemParams& p, bool noisy) {
    validate(p);
    const double d = p.delta;
    if (is_delta_one(d))
        throw std::invalid_argument("adiabatic limit is undefined at delta = 1");
    const bool fwd = p.direction() == SweepDirection::forward;
    if (d > 1.0)
        return fwd ? (d - 1.0) / d : 1.0 / d;
    if (!noisy)
        return 0.0;
    return fwd ? (d - 1.0) / (d - 2.0) : 1.0 / (2.0 - d);
}

double evaluate(AnalyticKind kind, const SystemParams& p, const NoiseParams& np) {
    switch (kind) {
    case AnalyticKind::NoiselessExact:
        return exact_noiseless(p);
    case AnalyticKind::DeltaOneExact:
        if (std::abs(p.delta - 1.0) > 1e-9)
            throw std::invalid_argument("delta-one evaluation requires delta = 1");
        return exact_delta_one(p);
    case AnalyticKind::WhiteNoiseOrder2:
        validate(np);
        return white_noise_prob(p, np.correlation_strength(), 2);
    case AnalyticKind::WhiteNoiseLeading:
        return white_noise_prob(p, 0.0, 1);
    case AnalyticKind::AdiabaticNoisy:
        return adiabatic_limit(p, true);
    case AnalyticKind::AdiabaticNoiseless:
        return adiabatic_limit(p, false);
    case AnalyticKind::StrongDecoherenceDelta0: {
        if (std::abs(p.delta) > 1e-9)
            throw std::invalid_argument(
                "strong-decoherence plateau requires delta = 0");
        validate(p);
        return 0.5 * (1.0 + std::exp(-pi * p.v * p.v / std::abs(p.alpha)));
    }
    }
    throw std::invalid_argument("unknown analytic kind");
}

std::string_view analytic_kind_name(AnalyticKind kind) {
    switch (kind) {
    case AnalyticKind::NoiselessExact: return "noiseless";
    case AnalyticKind::DeltaOneExact: return "delta-one";
    case AnalyticKind::WhiteNoiseOrder2: return "white-order2";
    case AnalyticKind::WhiteNoiseLeading: return "white-leading";
    case AnalyticKind::AdiabaticNoisy: return "adiabatic-noisy";
    case AnalyticKind::AdiabaticNoiseless: return "adiabatic-noiseless";
    case AnalyticKind::StrongDecoherenceDelta0: return "strong-decoherence";
    }
    return "unknown";
}

std::optional<AnalyticKind> parse_analytic_kind(std::string_view name) {
    if (name == "noiseless") return AnalyticKind::NoiselessExact;
    if (name == "delta-one") return AnalyticKind::DeltaOneExact;
    if (name == "white-order2") return AnalyticKind::WhiteNoiseOrder2;
    if (name == "white-leading") return AnalyticKind::WhiteNoiseLeading;
    if (name == "adiabatic-noisy") return AnalyticKind::AdiabaticNoisy;
    if (name == "adiabatic-noiseless") return AnalyticKind::AdiabaticNoiseless;
    if (name == "strong-decoherence") return AnalyticKind::StrongDecoherenceDelta0;
    return std::nullopt;
}

}
