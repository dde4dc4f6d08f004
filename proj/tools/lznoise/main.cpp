#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "lznoise/model.hpp"
#include "lznoise/version.hpp"

namespace {

void add_common_options(CLI::App* cmd, lzn::cli::CliOptions& opt) {
    cmd->add_option("-c,--config", opt.config_path,
                    "Config file (sections: physics, method, grid, output)");
    cmd->add_option("--set", opt.sets,
                    "Override a config key, e.g. --set physics.delta=0.5")
        ->take_all();
    cmd->add_option("--seed", opt.seed, "Master RNG seed")
        ->each([&opt](const std::string&) { opt.have_seed = true; });
    cmd->add_option("-w,--workers", opt.workers,
                    "Worker threads (default: LZNOISE_WORKERS or all cores)");
    cmd->add_option("-o,--out", opt.out_csv, "CSV output path");
    cmd->add_option("--manifest", opt.out_manifest, "Run manifest output path");
    cmd->add_option("--svg", opt.out_svg, "SVG plot output path");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Landau-Zener sweeps with nonreciprocal coupling under "
                 "Ornstein-Uhlenbeck noise"};
    app.set_version_flag("--version", std::string(lzn::version_string));
    app.require_subcommand(1);

    lzn::cli::CliOptions curve_opt, phase_opt, compare_opt, spectrum_opt;
    auto* curve = app.add_subcommand("curve", "Tunneling probability vs sweep rate");
    add_common_options(curve, curve_opt);
    auto* phase = app.add_subcommand(
        "phase-diagram", "Probability over a (sweep rate, nonreciprocity) grid");
    add_common_options(phase, phase_opt);
    auto* compare = app.add_subcommand(
        "compare", "Run several methods on one sweep-rate axis and report deviations");
    add_common_options(compare, compare_opt);
    auto* spectrum = app.add_subcommand(
        "spectrum", "Instantaneous eigenvalues and exceptional points for one cell");
    add_common_options(spectrum, spectrum_opt);

    std::string plot_csv, plot_svg;
    auto* plot = app.add_subcommand("plot", "Render a CSV produced by this tool to SVG");
    plot->add_option("csv", plot_csv, "Input CSV")->required();
    plot->add_option("-o,--out", plot_svg, "SVG output path (default: CSV with .svg)");

    std::string rerun_manifest;
    int rerun_workers = 0;
    auto* rerun = app.add_subcommand(
        "manifest-rerun", "Re-execute a run manifest and verify byte-identical outputs");
    rerun->add_option("manifest", rerun_manifest, "Manifest JSON")->required();
    rerun->add_option("-w,--workers", rerun_workers, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (curve->parsed())
            return lzn::cli::cmd_curve(curve_opt);
        if (phase->parsed())
            return lzn::cli::cmd_phase_diagram(phase_opt);
        if (compare->parsed())
            return lzn::cli::cmd_compare(compare_opt);
        if (spectrum->parsed())
            return lzn::cli::cmd_spectrum(spectrum_opt);
        if (plot->parsed())
            return lzn::cli::cmd_plot(plot_csv, plot_svg);
        if (rerun->parsed())
            return lzn::cli::cmd_manifest_rerun(rerun_manifest, rerun_workers);
    } catch (const lzn::cli::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const lzn::integration_error& e) {
        std::fprintf(stderr, "integration error: %s\n", e.what());
        return 3;
    } catch (const lzn::convergence_error& e) {
        std::fprintf(stderr, "convergence error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
