#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lznoise/analytic.hpp"
#include "lznoise/dynamics.hpp"
#include "lznoise/hierarchy.hpp"
#include "lznoise/model.hpp"

namespace lzn::cli {

// Anything wrong with user input: config syntax, unknown keys, bad values,
// malformed CSVs handed to `plot`. Mapped to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Axis grammar: a bare number, linspace(lo,hi,n), logspace(lo,hi,n[,both])
// or list(v1,v2,...). logspace endpoints must be positive; `both` mirrors
// the points to negative sweep rates and orders the result ascending.
std::vector<double> parse_axis(const std::string& text, const std::string& where);

struct ConfigValue {
    std::string value;
    int line = 0;
};

struct ParsedConfig {
    std::string path;
    std::map<std::string, ConfigValue> entries;
};

// Reads the sectioned key=value format. Unknown sections or keys, duplicate
// keys, and keys outside any section are reported with file:line.
ParsedConfig load_config(const std::string& path);

// Applies a command-line `section.key=value` override on top of the file.
void apply_override(ParsedConfig& cfg, const std::string& spec);

enum class MethodKind { Sse, Hierarchy, Subspace, Analytic };

struct MethodSpec {
    std::string name;
    MethodKind kind = MethodKind::Sse;
    AnalyticKind analytic = AnalyticKind{};
};

MethodSpec parse_method(const std::string& text);

// Fully resolved run description. Noise is given either absolutely (D, gamma)
// or relative to the sweep rate (Dtilde, gammatilde); the relative family
// rescales per cell as D = Dtilde sqrt|alpha|, gamma = gammatilde sqrt|alpha|.
struct RunConfig {
    std::vector<double> alpha{1.0};
    std::vector<double> delta{0.0};
    double v = 1.0;
    bool relative_noise = false;
    double D = 0.0;
    double gamma = 1.0;
    double Dtilde = 0.0;
    double gammatilde = 1.0;
    std::vector<MethodSpec> methods;
    long long samples = 200;
    std::uint64_t seed = 12345;
    GridPolicy grid;
    HierarchyOptions hierarchy;
    std::string csv_path;
    std::string manifest_path;
    std::string svg_path;

    NoiseParams noise_for(double a) const;
    SystemParams system_for(double a, double d) const;
};

// Consumes a parsed config for one subcommand, applying defaults and the
// command's axis/method rules. `command` is one of curve, phase-diagram,
// compare, spectrum.
RunConfig resolve_config(const ParsedConfig& cfg, const std::string& command);

// Canonical flat form of a resolved config, suitable for a manifest and for
// reconstructing the identical run. Axes become explicit list(...) values.
std::map<std::string, std::string> canonical_config(const RunConfig& rc,
                                                    const std::string& command);

}
