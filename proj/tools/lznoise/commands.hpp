#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"

namespace lzn::cli {

// Shared command-line state for the numeric subcommands. Flag values win
// over the config file; `sets` are applied in order between the two.
struct CliOptions {
    std::string config_path;
    std::vector<std::string> sets;
    bool have_seed = false;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out_csv;
    std::string out_manifest;
    std::string out_svg;
};

// Flag > LZNOISE_WORKERS > hardware concurrency.
int resolve_workers(int flag_value);

int cmd_curve(const CliOptions& opt);
int cmd_phase_diagram(const CliOptions& opt);
int cmd_compare(const CliOptions& opt);
int cmd_spectrum(const CliOptions& opt);
int cmd_plot(const std::string& csv_path, std::string svg_path);
int cmd_manifest_rerun(const std::string& manifest_path, int workers);

}
