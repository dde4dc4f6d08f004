#pragma once

#include <complex>
#include <string_view>
#include <utility>
#include <vector>

#include "lznoise/model.hpp"
#include "lznoise/noise.hpp"

namespace lzn {

struct SpectrumSample {
    double t = 0.0;
    std::complex<double> e_plus;
    std::complex<double> e_minus;
    double discriminant = 0.0;
};

enum class EpKind { NoiselessAnalytic, NoiseInducedCrossing };

struct EpRecord {
    double t = 0.0;
    EpKind kind = EpKind::NoiselessAnalytic;
};

// (alpha t + f)^2 + v^2 (1 - delta); the eigenvalues are +-sqrt(.)/2.
double discriminant(const SystemParams& p, double t, double f = 0.0);

std::pair<std::complex<double>, std::complex<double>>
instantaneous_eigenvalues(const SystemParams& p, double t, double f = 0.0);

std::vector<SpectrumSample> spectrum_scan(const SystemParams& p,
                                          const TimeGrid& grid,
                                          const NoisePath* path = nullptr);

// Zeros of the discriminant inside the window. Only strict sign changes are
// recorded (a node-exact zero counts when its neighbours change sign across
// it); tangential touches are not degeneracies of this scan.
std::vector<EpRecord> find_exceptional_points(const SystemParams& p,
                                              const TimeGrid& grid,
                                              const NoisePath* path = nullptr);

// Noiseless degeneracy times +-v sqrt(delta - 1)/alpha; empty for delta <= 1.
std::vector<double> noiseless_ep_times(const SystemParams& p);

std::string_view ep_kind_name(EpKind kind);

}
