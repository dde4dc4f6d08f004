#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <thread>

#include "json.hpp"

#include "lznoise/analytic.hpp"
#include "lznoise/dynamics.hpp"
#include "lznoise/hierarchy.hpp"
#include "lznoise/io.hpp"
#include "lznoise/noise.hpp"
#include "lznoise/parallel.hpp"
#include "lznoise/rng.hpp"
#include "lznoise/spectrum.hpp"
#include "lznoise/version.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace lzn::cli {

namespace {

constexpr long long max_plot_rows = 2000;

struct CellValue {
    double prob = 0.0;
    double err = 0.0;
    bool converged = true;
};

struct CellTask {
    double alpha = 0.0;
    double delta = 0.0;
    const MethodSpec* method = nullptr;
    long long stream_block = 0;
};

struct RunResult {
    std::vector<CsvSummary> outputs;
    std::vector<std::string> report;
    json summary = json::object();
    int exit_code = 0;
};

CellValue evaluate_cell(const RunConfig& rc, const CellTask& cell,
                        int inner_workers) {
    const SystemParams p = rc.system_for(cell.alpha, cell.delta);
    const NoiseParams np = rc.noise_for(cell.alpha);
    switch (cell.method->kind) {
    case MethodKind::Sse: {
        const TimeGrid grid = default_grid(p, np, rc.grid);
        const auto r = ensemble_average(
            p, np, grid, rc.samples, rc.seed,
            static_cast<std::uint64_t>(cell.stream_block) *
                static_cast<std::uint64_t>(rc.samples),
            inner_workers, rc.grid.asymptotic_matching);
        return {r.mean, r.std_error, convergence_check(r)};
    }
    case MethodKind::Hierarchy: {
        const auto r = evolve_hierarchy(p, np, rc.grid, rc.hierarchy);
        return {r.probability, 0.0, r.converged};
    }
    case MethodKind::Subspace:
        return {evolve_subspace(p, np.correlation_strength(), rc.grid), 0.0,
                true};
    case MethodKind::Analytic:
        return {evaluate(cell.method->analytic, p, np), 0.0, true};
    }
    return {};
}

// Cells are independent; a single cell instead hands the workers to the
// ensemble loop. Either way the result is bitwise identical for any count.
std::vector<CellValue> evaluate_all(const RunConfig& rc,
                                    const std::vector<CellTask>& cells,
                                    int workers) {
    std::vector<CellValue> out(cells.size());
    const bool single = cells.size() == 1;
    const int inner = single ? workers : 1;
    parallel_for(static_cast<long long>(cells.size()), single ? 1 : workers,
                 [&](int, long long i) {
                     out[static_cast<std::size_t>(i)] =
                         evaluate_cell(rc, cells[static_cast<std::size_t>(i)], inner);
                 });
    return out;
}

std::string data_row(const RunConfig& rc, const CellTask& cell,
                     const CellValue& v) {
    const NoiseParams np = rc.noise_for(cell.alpha);
    std::string s = format_g17(cell.alpha);
    s += ',';
    s += format_g17(cell.delta);
    s += ',';
    s += format_g17(np.D);
    s += ',';
    s += format_g17(np.gamma);
    s += ',';
    s += cell.method->name;
    s += ',';
    s += format_g17(v.prob);
    s += ',';
    s += format_g17(v.err);
    return s;
}

std::string wrote_line(const CsvSummary& s) {
    if (s.rows > 0)
        return "wrote " + s.path + " (" + std::to_string(s.rows) + " rows)";
    return "wrote " + s.path;
}

void render_svg_output(const RunConfig& rc, RunResult& out) {
    if (rc.svg_path.empty())
        return;
    const std::string bytes = render_csv_to_svg(rc.csv_path, rc.svg_path);
    CsvSummary s;
    s.path = rc.svg_path;
    s.rows = 0;
    s.file_fnv = fnv1a64(bytes);
    s.row_fnv = 0;
    out.outputs.push_back(s);
    out.report.push_back(wrote_line(s));
}

void note_convergence(const std::vector<CellTask>& cells,
                      const std::vector<CellValue>& vals, RunResult& out) {
    long long sse_flagged = 0;
    long long hier_failed = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (vals[i].converged)
            continue;
        if (cells[i].method->kind == MethodKind::Sse)
            ++sse_flagged;
        else if (cells[i].method->kind == MethodKind::Hierarchy)
            ++hier_failed;
    }
    out.summary["cells"] = cells.size();
    if (sse_flagged > 0) {
        out.summary["sse_flagged_cells"] = sse_flagged;
        out.report.push_back("note: " + std::to_string(sse_flagged) +
                             " cell(s) failed the half-ensemble agreement check; "
                             "consider more samples");
    }
    if (hier_failed > 0) {
        out.summary["hierarchy_unconverged_cells"] = hier_failed;
        out.report.push_back("error: hierarchy truncation did not converge in " +
                             std::to_string(hier_failed) + " cell(s)");
        out.exit_code = 4;
    }
}

RunResult run_curve(const RunConfig& rc, int workers) {
    std::vector<CellTask> cells;
    cells.reserve(rc.alpha.size());
    for (std::size_t i = 0; i < rc.alpha.size(); ++i)
        cells.push_back({rc.alpha[i], rc.delta.front(), &rc.methods.front(),
                         static_cast<long long>(i)});
    const auto vals = evaluate_all(rc, cells, workers);

    CsvWriter w(rc.csv_path, "lznoise.curve.v1",
                "alpha,delta,D,gamma,method,P,stderr");
    for (std::size_t i = 0; i < cells.size(); ++i)
        w.row(data_row(rc, cells[i], vals[i]));

    RunResult out;
    out.outputs.push_back(w.close());
    out.report.push_back(wrote_line(out.outputs.front()));
    note_convergence(cells, vals, out);
    render_svg_output(rc, out);
    return out;
}

// Index pairs (i, j) with delta_i + delta_j == 2, present when the axis is
// mirror symmetric about delta = 1; the center point pairs with itself and
// is skipped.
std::optional<std::vector<std::pair<std::size_t, std::size_t>>>
mirror_pairs(const std::vector<double>& delta) {
    const std::size_t n = delta.size();
    if (n < 2)
        return std::nullopt;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return delta[a] < delta[b]; });
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < n / 2; ++k) {
        if (std::fabs(delta[idx[k]] + delta[idx[n - 1 - k]] - 2.0) > 1e-9)
            return std::nullopt;
        pairs.emplace_back(idx[k], idx[n - 1 - k]);
    }
    if (n % 2 == 1 && std::fabs(delta[idx[n / 2]] - 1.0) > 1e-9)
        return std::nullopt;
    return pairs;
}

RunResult run_phase(const RunConfig& rc, int workers) {
    const std::size_t na = rc.alpha.size();
    const std::size_t nd = rc.delta.size();
    std::vector<CellTask> cells;
    cells.reserve(na * nd);
    for (std::size_t di = 0; di < nd; ++di)
        for (std::size_t ai = 0; ai < na; ++ai)
            cells.push_back({rc.alpha[ai], rc.delta[di], &rc.methods.front(),
                             static_cast<long long>(di * na + ai)});
    const auto vals = evaluate_all(rc, cells, workers);

    CsvWriter w(rc.csv_path, "lznoise.phase.v1",
                "alpha,delta,D,gamma,method,P,stderr");
    for (std::size_t i = 0; i < cells.size(); ++i)
        w.row(data_row(rc, cells[i], vals[i]));

    RunResult out;
    out.outputs.push_back(w.close());
    out.report.push_back(wrote_line(out.outputs.front()));
    note_convergence(cells, vals, out);

    if (const auto pairs = mirror_pairs(rc.delta)) {
        double max_gap = 0.0, sum_gap = 0.0;
        long long count = 0;
        for (const auto& [lo, hi] : *pairs) {
            for (std::size_t ai = 0; ai < na; ++ai) {
                const double gap = std::fabs(vals[lo * na + ai].prob -
                                             vals[hi * na + ai].prob);
                max_gap = std::max(max_gap, gap);
                sum_gap += gap;
                ++count;
            }
        }
        const double mean_gap = count ? sum_gap / static_cast<double>(count) : 0.0;
        out.summary["delta_mirror_max"] = max_gap;
        out.summary["delta_mirror_mean"] = mean_gap;
        out.report.push_back("delta-mirror asymmetry about delta=1: max " +
                             format_g17(max_gap) + ", mean " +
                             format_g17(mean_gap));
    }
    render_svg_output(rc, out);
    return out;
}

RunResult run_compare(const RunConfig& rc, int workers) {
    const std::size_t na = rc.alpha.size();
    const std::size_t nm = rc.methods.size();
    std::vector<CellTask> cells;
    cells.reserve(na * nm);
    for (std::size_t ai = 0; ai < na; ++ai)
        for (std::size_t mi = 0; mi < nm; ++mi)
            cells.push_back({rc.alpha[ai], rc.delta.front(), &rc.methods[mi],
                             static_cast<long long>(ai)});
    const auto vals = evaluate_all(rc, cells, workers);

    CsvWriter w(rc.csv_path, "lznoise.compare.v1",
                "alpha,delta,D,gamma,method,P,stderr");
    for (std::size_t i = 0; i < cells.size(); ++i)
        w.row(data_row(rc, cells[i], vals[i]));

    RunResult out;
    out.outputs.push_back(w.close());
    out.report.push_back(wrote_line(out.outputs.front()));
    note_convergence(cells, vals, out);

    const auto value_at = [&](std::size_t ai, std::size_t mi) {
        return vals[ai * nm + mi].prob;
    };
    json pair_list = json::array();
    double white_vs_subspace = -1.0;
    for (std::size_t a = 0; a < nm; ++a) {
        for (std::size_t b = a + 1; b < nm; ++b) {
            double max_dev = 0.0;
            double at_alpha = rc.alpha.front();
            for (std::size_t ai = 0; ai < na; ++ai) {
                const double dev = std::fabs(value_at(ai, a) - value_at(ai, b));
                if (dev > max_dev) {
                    max_dev = dev;
                    at_alpha = rc.alpha[ai];
                }
            }
            pair_list.push_back({{"a", rc.methods[a].name},
                                 {"b", rc.methods[b].name},
                                 {"max_dev", max_dev},
                                 {"at_alpha", at_alpha}});
            out.report.push_back("max |" + rc.methods[a].name + " - " +
                                 rc.methods[b].name + "| = " + format_g17(max_dev) +
                                 " at alpha = " + format_g17(at_alpha));
            const auto is = [&](std::size_t m, std::string_view n) {
                return rc.methods[m].name == n;
            };
            if ((is(a, "subspace") && is(b, "analytic:white-order2")) ||
                (is(b, "subspace") && is(a, "analytic:white-order2")))
                white_vs_subspace = max_dev;
        }
    }
    out.summary["pairwise"] = pair_list;

    if (white_vs_subspace >= 0.0) {
        double gamma_min = std::numeric_limits<double>::infinity();
        for (double a : rc.alpha)
            gamma_min = std::min(gamma_min, rc.noise_for(a).correlation_strength());
        out.summary["decoherence_rate_min"] = gamma_min;
        if (gamma_min >= 10.0 && white_vs_subspace > 0.02) {
            out.report.push_back(
                "error: closed form and subspace disagree by " +
                format_g17(white_vs_subspace) +
                " although the decoherence rate is >= 10 everywhere");
            out.exit_code = 4;
        }
    }
    render_svg_output(rc, out);
    return out;
}

std::string sibling_path(const std::string& base, const std::string& suffix) {
    fs::path p(base);
    std::string ext = p.extension().string();
    if (ext.empty())
        ext = ".csv";
    return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

RunResult run_spectrum(const RunConfig& rc, int workers) {
    (void)workers;
    const SystemParams p = rc.system_for(rc.alpha.front(), rc.delta.front());
    const NoiseParams np = rc.noise_for(rc.alpha.front());
    const TimeGrid grid = default_grid(p, np, rc.grid);

    NoisePath path;
    const NoisePath* path_ptr = nullptr;
    if (np.D > 0.0) {
        RngStream rng(rc.seed, 0);
        generate_path(path, np, grid, rng);
        path_ptr = &path;
    }

    const auto samples = spectrum_scan(p, grid, path_ptr);
    const auto eps = find_exceptional_points(p, grid, path_ptr);

    const long long n = static_cast<long long>(samples.size());
    const long long stride = std::max<long long>(1, (n + max_plot_rows - 1) / max_plot_rows);
    const auto emit_indices = [&](auto&& fn) {
        long long last = -1;
        for (long long i = 0; i < n; i += stride) {
            fn(i);
            last = i;
        }
        if (last != n - 1)
            fn(n - 1);
    };

    RunResult out;
    {
        CsvWriter w(rc.csv_path, "lznoise.spectrum.v1",
                    "t,re_e_plus,im_e_plus,re_e_minus,im_e_minus,discriminant");
        emit_indices([&](long long i) {
            const auto& s = samples[static_cast<std::size_t>(i)];
            std::string row = format_g17(s.t);
            row += ',';
            row += format_g17(s.e_plus.real());
            row += ',';
            row += format_g17(s.e_plus.imag());
            row += ',';
            row += format_g17(s.e_minus.real());
            row += ',';
            row += format_g17(s.e_minus.imag());
            row += ',';
            row += format_g17(s.discriminant);
            w.row(row);
        });
        out.outputs.push_back(w.close());
        out.report.push_back(wrote_line(out.outputs.back()));
    }
    {
        CsvWriter w(sibling_path(rc.csv_path, "_eps"), "lznoise.eps.v1",
                    "t_ep,kind");
        for (const auto& ep : eps) {
            std::string row = format_g17(ep.t);
            row += ',';
            row += ep_kind_name(ep.kind);
            w.row(row);
        }
        out.outputs.push_back(w.close());
        out.report.push_back(wrote_line(out.outputs.back()));
    }
    if (path_ptr) {
        CsvWriter w(sibling_path(rc.csv_path, "_path"), "lznoise.path.v1", "t,f");
        emit_indices([&](long long i) {
            std::string row = format_g17(grid.node(i));
            row += ',';
            row += format_g17(path.values[static_cast<std::size_t>(i)]);
            w.row(row);
        });
        out.outputs.push_back(w.close());
        out.report.push_back(wrote_line(out.outputs.back()));
    }

    out.summary["ep_count"] = eps.size();
    out.summary["grid_steps"] = grid.steps;
    out.report.push_back(std::to_string(eps.size()) +
                         " exceptional point(s) in the window");
    render_svg_output(rc, out);
    return out;
}

RunResult run_command(const std::string& command, const RunConfig& rc,
                      int workers) {
    if (command == "curve")
        return run_curve(rc, workers);
    if (command == "phase-diagram")
        return run_phase(rc, workers);
    if (command == "compare")
        return run_compare(rc, workers);
    if (command == "spectrum")
        return run_spectrum(rc, workers);
    throw std::logic_error("unknown command " + command);
}

std::string hex64(std::uint64_t x) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "0x%016llx",
                  static_cast<unsigned long long>(x));
    return buf;
}

void write_manifest(const std::string& path, const std::string& command,
                    const RunConfig& rc, int workers, double wall_sec,
                    const RunResult& result) {
    json m;
    m["schema"] = "lznoise.manifest.v1";
    m["tool_version"] = version_string;
    m["command"] = command;
    m["config"] = canonical_config(rc, command);
    m["master_seed"] = rc.seed;
    m["workers"] = workers;
    m["wall_clock_sec"] = wall_sec;
    json outs = json::array();
    for (const auto& o : result.outputs)
        outs.push_back({{"path", o.path},
                        {"rows", o.rows},
                        {"fnv1a64", hex64(o.file_fnv)},
                        {"row_fnv", hex64(o.row_fnv)}});
    m["outputs"] = outs;
    m["summary"] = result.summary;
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open output file: " + path);
    f << m.dump(2) << "\n";
    if (!f)
        throw std::runtime_error("short write to " + path);
}

RunConfig build_config(const std::string& command, const CliOptions& opt) {
    ParsedConfig pc;
    if (!opt.config_path.empty())
        pc = load_config(opt.config_path);
    for (const auto& s : opt.sets)
        apply_override(pc, s);
    if (opt.have_seed)
        pc.entries["method.seed"] = {std::to_string(opt.seed), 0};
    if (!opt.out_csv.empty())
        pc.entries["output.csv"] = {opt.out_csv, 0};
    if (!opt.out_manifest.empty())
        pc.entries["output.manifest"] = {opt.out_manifest, 0};
    if (!opt.out_svg.empty())
        pc.entries["output.svg"] = {opt.out_svg, 0};
    return resolve_config(pc, command);
}

int run_numeric(const std::string& command, const CliOptions& opt) {
    const RunConfig rc = build_config(command, opt);
    const int workers = resolve_workers(opt.workers);
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult result = run_command(command, rc, workers);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    for (const auto& line : result.report)
        std::printf("%s\n", line.c_str());
    if (!rc.manifest_path.empty()) {
        write_manifest(rc.manifest_path, command, rc, workers, wall, result);
        std::printf("wrote %s\n", rc.manifest_path.c_str());
    }
    return result.exit_code;
}

}  // namespace

int resolve_workers(int flag_value) {
    if (flag_value > 0)
        return flag_value;
    if (const char* env = std::getenv("LZNOISE_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1)
            throw config_error("LZNOISE_WORKERS must be a positive integer");
        return static_cast<int>(n);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

int cmd_curve(const CliOptions& opt) { return run_numeric("curve", opt); }

int cmd_phase_diagram(const CliOptions& opt) {
    return run_numeric("phase-diagram", opt);
}

int cmd_compare(const CliOptions& opt) { return run_numeric("compare", opt); }

int cmd_spectrum(const CliOptions& opt) { return run_numeric("spectrum", opt); }

int cmd_plot(const std::string& csv_path, std::string svg_path) {
    if (svg_path.empty())
        svg_path = fs::path(csv_path).replace_extension(".svg").string();
    render_csv_to_svg(csv_path, svg_path);
    std::printf("wrote %s\n", svg_path.c_str());
    return 0;
}

int cmd_manifest_rerun(const std::string& manifest_path, int workers) {
    std::ifstream f(manifest_path);
    if (!f)
        throw config_error("cannot open manifest '" + manifest_path + "'");
    json m;
    try {
        f >> m;
    } catch (const json::exception& e) {
        throw config_error("malformed manifest '" + manifest_path +
                           "': " + e.what());
    }
    if (!m.contains("schema") || m["schema"] != "lznoise.manifest.v1")
        throw config_error("'" + manifest_path + "' is not a run manifest");

    const std::string command = m.at("command").get<std::string>();
    ParsedConfig pc;
    pc.path = manifest_path;
    for (const auto& [key, value] : m.at("config").items())
        pc.entries[key] = ConfigValue{value.get<std::string>(), 0};
    RunConfig rc = resolve_config(pc, command);

    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    const fs::path dir =
        fs::temp_directory_path() /
        ("lznoise-rerun-" + std::to_string(static_cast<long long>(stamp)));
    fs::create_directories(dir);
    rc.csv_path = (dir / fs::path(rc.csv_path).filename()).string();
    if (!rc.svg_path.empty())
        rc.svg_path = (dir / fs::path(rc.svg_path).filename()).string();
    rc.manifest_path.clear();

    const RunResult fresh = run_command(command, rc, resolve_workers(workers));

    std::map<std::string, const CsvSummary*> by_name;
    for (const auto& o : fresh.outputs)
        by_name[fs::path(o.path).filename().string()] = &o;

    bool all_ok = true;
    for (const auto& rec : m.at("outputs")) {
        const std::string name =
            fs::path(rec.at("path").get<std::string>()).filename().string();
        const auto it = by_name.find(name);
        if (it == by_name.end()) {
            std::printf("%s: missing from rerun\n", name.c_str());
            all_ok = false;
            continue;
        }
        const bool ok = rec.at("rows").get<long long>() == it->second->rows &&
                        rec.at("fnv1a64").get<std::string>() ==
                            hex64(it->second->file_fnv) &&
                        rec.at("row_fnv").get<std::string>() ==
                            hex64(it->second->row_fnv);
        std::printf("%s: %s\n", name.c_str(), ok ? "ok" : "MISMATCH");
        all_ok &= ok;
    }

    if (all_ok) {
        fs::remove_all(dir);
        std::printf("rerun reproduced every output byte for byte\n");
        return 0;
    }
    std::printf("rerun outputs differ; fresh files kept in %s\n",
                dir.string().c_str());
    return 1;
}

}
