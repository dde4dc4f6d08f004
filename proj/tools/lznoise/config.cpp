#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "lznoise/io.hpp"

namespace lzn::cli {

namespace {

const std::set<std::string> known_keys = {
    "physics.alpha",     "physics.delta",      "physics.v",
    "physics.D",         "physics.gamma",      "physics.Dtilde",
    "physics.gammatilde",
    "method.method",     "method.methods",     "method.samples",
    "method.seed",       "method.hierarchy_start", "method.hierarchy_cap",
    "method.hierarchy_tol",
    "grid.window_factor", "grid.step_factor",  "grid.window_scale",
    "grid.step_scale",   "grid.matching",
    "output.csv",        "output.manifest",    "output.svg",
};

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

[[noreturn]] void fail(const std::string& msg) { throw config_error(msg); }

double parse_double(const std::string& text, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(x))
        fail(where + ": not a finite number: '" + text + "'");
    return x;
}

long long parse_int(const std::string& text, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const long long n = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE)
        fail(where + ": not an integer: '" + text + "'");
    return n;
}

std::uint64_t parse_seed(const std::string& text, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long n = std::strtoull(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE ||
        text.find('-') != std::string::npos)
        fail(where + ": not an unsigned integer: '" + text + "'");
    return n;
}

bool parse_bool(const std::string& text, const std::string& where) {
    if (text == "true" || text == "1" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "off")
        return false;
    fail(where + ": expected true/false: '" + text + "'");
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

}  // namespace

std::vector<double> parse_axis(const std::string& raw, const std::string& where) {
    const std::string text = trim(raw);
    if (text.empty())
        fail(where + ": empty axis");

    const auto paren = text.find('(');
    if (paren == std::string::npos)
        return {parse_double(text, where)};

    if (text.back() != ')')
        fail(where + ": missing ')': '" + text + "'");
    const std::string head = trim(text.substr(0, paren));
    const auto args = split_commas(text.substr(paren + 1, text.size() - paren - 2));

    if (head == "list") {
        std::vector<double> out;
        for (const auto& a : args)
            out.push_back(parse_double(a, where));
        return out;
    }

    if (head == "linspace") {
        if (args.size() != 3)
            fail(where + ": linspace takes (lo, hi, n)");
        const double lo = parse_double(args[0], where);
        const double hi = parse_double(args[1], where);
        const long long n = parse_int(args[2], where);
        if (n < 1)
            fail(where + ": linspace needs n >= 1");
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(n));
        if (n == 1) {
            out.push_back(lo);
        } else {
            for (long long i = 0; i < n; ++i)
                out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                       static_cast<double>(n - 1));
        }
        return out;
    }

    if (head == "logspace") {
        bool both = false;
        auto a = args;
        if (a.size() == 4 && a[3] == "both") {
            both = true;
            a.pop_back();
        }
        if (a.size() != 3)
            fail(where + ": logspace takes (lo, hi, n[, both])");
        const double lo = parse_double(a[0], where);
        const double hi = parse_double(a[1], where);
        const long long n = parse_int(a[2], where);
        if (lo <= 0.0 || hi <= 0.0)
            fail(where + ": logspace endpoints must be positive");
        if (n < 1)
            fail(where + ": logspace needs n >= 1");
        std::vector<double> pos;
        pos.reserve(static_cast<std::size_t>(n));
        if (n == 1) {
            pos.push_back(lo);
        } else {
            const double llo = std::log(lo), lhi = std::log(hi);
            for (long long i = 0; i < n; ++i)
                pos.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                                 static_cast<double>(n - 1)));
        }
        if (!both)
            return pos;
        std::vector<double> out;
        out.reserve(pos.size() * 2);
        for (auto it = pos.rbegin(); it != pos.rend(); ++it)
            out.push_back(-*it);
        out.insert(out.end(), pos.begin(), pos.end());
        return out;
    }

    fail(where + ": unknown axis form '" + head + "'");
}

ParsedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail("cannot open config file '" + path + "'");

    ParsedConfig cfg;
    cfg.path = path;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';')
            continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                fail(where + ": malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "physics" && section != "method" &&
                section != "grid" && section != "output")
                fail(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            fail(where + ": expected key = value");
        if (section.empty())
            fail(where + ": key before any [section]");
        const std::string key = section + "." + trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (!known_keys.count(key))
            fail(where + ": unknown key '" + key + "'");
        const auto [it, inserted] = cfg.entries.emplace(key, ConfigValue{value, lineno});
        if (!inserted)
            fail(where + ": duplicate key '" + key + "' (first at line " +
                 std::to_string(it->second.line) + ")");
    }
    return cfg;
}

void apply_override(ParsedConfig& cfg, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        fail("--set expects section.key=value, got '" + spec + "'");
    const std::string key = trim(spec.substr(0, eq));
    const std::string value = trim(spec.substr(eq + 1));
    if (!known_keys.count(key))
        fail("--set: unknown key '" + key + "'");
    cfg.entries[key] = ConfigValue{value, 0};
}

MethodSpec parse_method(const std::string& raw) {
    const std::string text = trim(raw);
    MethodSpec m;
    m.name = text;
    if (text == "sse") {
        m.kind = MethodKind::Sse;
        return m;
    }
    if (text == "hierarchy") {
        m.kind = MethodKind::Hierarchy;
        return m;
    }
    if (text == "subspace") {
        m.kind = MethodKind::Subspace;
        return m;
    }
    if (text.rfind("analytic:", 0) == 0) {
        const auto kind = parse_analytic_kind(text.substr(9));
        if (!kind)
            fail("unknown analytic kind '" + text.substr(9) + "'");
        m.kind = MethodKind::Analytic;
        m.analytic = *kind;
        return m;
    }
    fail("unknown method '" + text +
         "' (expected sse, hierarchy, subspace, or analytic:<kind>)");
}

NoiseParams RunConfig::noise_for(double a) const {
    NoiseParams np;
    if (relative_noise) {
        const double root = std::sqrt(std::fabs(a));
        np.D = Dtilde * root;
        np.gamma = gammatilde * root;
    } else {
        np.D = D;
        np.gamma = gamma;
    }
    return np;
}

SystemParams RunConfig::system_for(double a, double d) const {
    SystemParams p;
    p.alpha = a;
    p.v = v;
    p.delta = d;
    return p;
}

RunConfig resolve_config(const ParsedConfig& cfg, const std::string& command) {
    RunConfig rc;
    auto entries = cfg.entries;

    const auto take = [&](const std::string& key) -> const ConfigValue* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    const auto where = [&](const std::string& key) {
        const auto* e = take(key);
        if (e && e->line > 0)
            return cfg.path + ":" + std::to_string(e->line) + ": " + key;
        return key;
    };

    if (const auto* e = take("physics.alpha"))
        rc.alpha = parse_axis(e->value, where("physics.alpha"));
    if (const auto* e = take("physics.delta"))
        rc.delta = parse_axis(e->value, where("physics.delta"));
    if (const auto* e = take("physics.v"))
        rc.v = parse_double(e->value, where("physics.v"));

    const bool has_abs = take("physics.D") || take("physics.gamma");
    const bool has_rel = take("physics.Dtilde") || take("physics.gammatilde");
    if (has_abs && has_rel)
        fail("config mixes absolute (D, gamma) and relative (Dtilde, gammatilde) "
             "noise parameters; choose one family");
    rc.relative_noise = has_rel;
    if (const auto* e = take("physics.D"))
        rc.D = parse_double(e->value, where("physics.D"));
    if (const auto* e = take("physics.gamma"))
        rc.gamma = parse_double(e->value, where("physics.gamma"));
    if (const auto* e = take("physics.Dtilde"))
        rc.Dtilde = parse_double(e->value, where("physics.Dtilde"));
    if (const auto* e = take("physics.gammatilde"))
        rc.gammatilde = parse_double(e->value, where("physics.gammatilde"));

    const auto* single = take("method.method");
    const auto* multi = take("method.methods");
    if (command == "compare") {
        if (single)
            fail(where("method.method") + ": compare uses 'methods', not 'method'");
        if (!multi)
            fail("compare needs method.methods (a comma list of at least two)");
        for (const auto& part : split_commas(multi->value))
            rc.methods.push_back(parse_method(part));
        if (rc.methods.size() < 2)
            fail(where("method.methods") + ": compare needs at least two methods");
        std::set<std::string> seen;
        for (const auto& m : rc.methods)
            if (!seen.insert(m.name).second)
                fail(where("method.methods") + ": method '" + m.name +
                     "' listed twice");
    } else {
        if (multi)
            fail(where("method.methods") + ": 'methods' is only for compare");
        rc.methods.push_back(single ? parse_method(single->value)
                                    : parse_method("sse"));
    }

    if (const auto* e = take("method.samples")) {
        rc.samples = parse_int(e->value, where("method.samples"));
        if (rc.samples < 1)
            fail(where("method.samples") + ": needs at least one sample");
    }
    if (const auto* e = take("method.seed"))
        rc.seed = parse_seed(e->value, where("method.seed"));
    if (const auto* e = take("method.hierarchy_start"))
        rc.hierarchy.n_start = static_cast<int>(
            parse_int(e->value, where("method.hierarchy_start")));
    if (const auto* e = take("method.hierarchy_cap"))
        rc.hierarchy.n_cap = static_cast<int>(
            parse_int(e->value, where("method.hierarchy_cap")));
    if (const auto* e = take("method.hierarchy_tol"))
        rc.hierarchy.tol = parse_double(e->value, where("method.hierarchy_tol"));
    if (rc.hierarchy.n_start < 0 || rc.hierarchy.n_cap < rc.hierarchy.n_start ||
        rc.hierarchy.tol <= 0.0)
        fail("hierarchy truncation settings must satisfy 0 <= start <= cap, tol > 0");

    if (const auto* e = take("grid.window_factor"))
        rc.grid.window_factor = parse_double(e->value, where("grid.window_factor"));
    if (const auto* e = take("grid.step_factor"))
        rc.grid.step_factor = parse_double(e->value, where("grid.step_factor"));
    if (const auto* e = take("grid.window_scale"))
        rc.grid.window_scale = parse_double(e->value, where("grid.window_scale"));
    if (const auto* e = take("grid.step_scale"))
        rc.grid.step_scale = parse_double(e->value, where("grid.step_scale"));
    if (const auto* e = take("grid.matching"))
        rc.grid.asymptotic_matching = parse_bool(e->value, where("grid.matching"));
    if (rc.grid.window_factor <= 0.0 || rc.grid.step_factor <= 0.0 ||
        rc.grid.window_scale <= 0.0 || rc.grid.step_scale <= 0.0)
        fail("grid factors and scales must be positive");

    if (const auto* e = take("output.csv"))
        rc.csv_path = e->value;
    if (const auto* e = take("output.manifest"))
        rc.manifest_path = e->value;
    if (const auto* e = take("output.svg"))
        rc.svg_path = e->value;

    // Command-specific axis rules and defaults.
    if (command == "phase-diagram") {
        if (!take("physics.alpha"))
            rc.alpha = parse_axis("logspace(0.05, 5, 21, both)", "physics.alpha");
        if (!take("physics.delta"))
            rc.delta = parse_axis("linspace(0, 2, 21)", "physics.delta");
    } else if (command == "curve" || command == "compare") {
        if (!take("physics.alpha"))
            fail(command + " needs a physics.alpha axis");
        if (rc.delta.size() != 1)
            fail(command + " needs a scalar physics.delta");
    } else if (command == "spectrum") {
        if (rc.alpha.size() != 1)
            fail("spectrum needs a scalar physics.alpha");
        if (rc.delta.size() != 1)
            fail("spectrum needs a scalar physics.delta");
    }

    for (double a : rc.alpha)
        if (a == 0.0)
            fail("physics.alpha: sweep rate 0 is not a Landau-Zener sweep");
    for (double a : rc.alpha)
        validate(rc.system_for(a, rc.delta.front()));
    for (double d : rc.delta)
        validate(rc.system_for(rc.alpha.front(), d));
    for (double a : rc.alpha)
        validate(rc.noise_for(a));

    if (rc.csv_path.empty())
        fail(command + " needs output.csv (or --out)");

    return rc;
}

std::map<std::string, std::string> canonical_config(const RunConfig& rc,
                                                    const std::string& command) {
    std::map<std::string, std::string> out;
    const auto axis_text = [](const std::vector<double>& xs) {
        std::string s = "list(";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i)
                s += ",";
            s += format_g17(xs[i]);
        }
        s += ")";
        return s;
    };

    out["physics.alpha"] = axis_text(rc.alpha);
    out["physics.delta"] = axis_text(rc.delta);
    out["physics.v"] = format_g17(rc.v);
    if (rc.relative_noise) {
        out["physics.Dtilde"] = format_g17(rc.Dtilde);
        out["physics.gammatilde"] = format_g17(rc.gammatilde);
    } else {
        out["physics.D"] = format_g17(rc.D);
        out["physics.gamma"] = format_g17(rc.gamma);
    }

    if (command == "compare") {
        std::string names;
        for (std::size_t i = 0; i < rc.methods.size(); ++i) {
            if (i)
                names += ",";
            names += rc.methods[i].name;
        }
        out["method.methods"] = names;
    } else {
        out["method.method"] = rc.methods.front().name;
    }
    out["method.samples"] = std::to_string(rc.samples);
    out["method.seed"] = std::to_string(rc.seed);
    out["method.hierarchy_start"] = std::to_string(rc.hierarchy.n_start);
    out["method.hierarchy_cap"] = std::to_string(rc.hierarchy.n_cap);
    out["method.hierarchy_tol"] = format_g17(rc.hierarchy.tol);

    out["grid.window_factor"] = format_g17(rc.grid.window_factor);
    out["grid.step_factor"] = format_g17(rc.grid.step_factor);
    out["grid.window_scale"] = format_g17(rc.grid.window_scale);
    out["grid.step_scale"] = format_g17(rc.grid.step_scale);
    out["grid.matching"] = rc.grid.asymptotic_matching ? "true" : "false";

    out["output.csv"] = rc.csv_path;
    if (!rc.svg_path.empty())
        out["output.svg"] = rc.svg_path;
    return out;
}

}
