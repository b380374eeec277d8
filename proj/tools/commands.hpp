#pragma once

// Subcommand implementations for the viscowave CLI. Each command reads a
// JSON run config, applies flag overrides and writes CSV/JSON artifacts.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "viscowave/viscowave.hpp"

namespace viscowave::cli {

enum ExitCode { kOk = 0, kBoundViolated = 1, kConfigError = 2, kFitImpossible = 3 };

struct Overrides {
    std::string config;
    std::string out;
    std::optional<std::string> grid;
    std::optional<std::string> band;
    std::optional<double> tolerance;
    // Test hook: multiplies the bound constants before verification.
    std::optional<double> constant_scale;
};

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
    bool log = true;

    std::vector<double> points() const { return log ? log_grid(lo, hi, n) : linear_grid(lo, hi, n); }
};

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

inline double parse_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw SchemaError(what + ": '" + s + "' is not a number");
    }
    if (used != s.size() || !std::isfinite(v)) throw SchemaError(what + ": '" + s + "' is not a finite number");
    return v;
}

/// "lo:hi:n:log" or "lo:hi:n:lin".
inline GridSpec parse_grid(const std::string& s) {
    const auto p = split(s, ':');
    if (p.size() != 4) throw SchemaError("grid must look like lo:hi:n:log|lin, got '" + s + "'");
    GridSpec g;
    g.lo = parse_number(p[0], "grid lo");
    g.hi = parse_number(p[1], "grid hi");
    const double n = parse_number(p[2], "grid n");
    if (n < 1 || n != std::floor(n) || n > 1e7) throw SchemaError("grid n must be a positive integer");
    g.n = static_cast<std::size_t>(n);
    if (p[3] == "log")
        g.log = true;
    else if (p[3] == "lin")
        g.log = false;
    else
        throw SchemaError("grid spacing must be 'log' or 'lin', got '" + p[3] + "'");
    if (!(g.hi >= g.lo)) throw SchemaError("grid needs lo <= hi");
    if (g.log && !(g.lo > 0.0)) throw SchemaError("log grid needs lo > 0");
    return g;
}

inline std::pair<double, double> parse_band(const std::string& s) {
    const auto p = split(s, ':');
    if (p.size() != 2) throw SchemaError("band must look like lo:hi, got '" + s + "'");
    const double lo = parse_number(p[0], "band lo"), hi = parse_number(p[1], "band hi");
    if (!(lo > 0.0 && hi > lo)) throw SchemaError("band needs 0 < lo < hi");
    return {lo, hi};
}

inline Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

/// Parsed config plus the directory relative paths resolve against.
class RunConfig {
public:
    RunConfig(const Overrides& ov) : ov_(ov) {
        if (ov.config.empty()) throw SchemaError("--config is required");
        const std::filesystem::path path(ov.config);
        json_ = read_json_file(path);
        if (!json_.is_object()) throw SchemaError("config must be a JSON object");
        base_ = path.parent_path();
        if (json_.contains("schema_version")) {
            const auto& v = json_.at("schema_version");
            if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
                throw SchemaError("unsupported schema_version (this build reads " + std::to_string(kSchemaVersion) +
                                  ")");
        }
    }

    const Json& json() const { return json_; }

    std::filesystem::path resolve(const std::string& p) const {
        std::filesystem::path q(p);
        return q.is_absolute() ? q : base_ / q;
    }

    // Inline object, or a path to a JSON file holding one.
    Json section(const char* key) const {
        if (!json_.contains(key)) throw SchemaError(std::string("config needs '") + key + "'");
        const auto& v = json_.at(key);
        if (v.is_string()) return read_json_file(resolve(v.get<std::string>()));
        return v;
    }

    Material material() const { return material_from_json(section("material")); }

    std::optional<GridSpec> grid() const {
        if (ov_.grid) return parse_grid(*ov_.grid);
        if (json_.contains("grid")) {
            const auto& g = json_.at("grid");
            if (g.is_string()) return parse_grid(g.get<std::string>());
            if (g.is_object()) {
                GridSpec s;
                s.lo = detail::number(g, "lo");
                s.hi = detail::number(g, "hi");
                s.n = static_cast<std::size_t>(detail::number(g, "n"));
                s.log = !g.contains("spacing") || g.at("spacing") == "log";
                return parse_grid(format_number(s.lo) + ":" + format_number(s.hi) + ":" + std::to_string(s.n) + ":" +
                                  (s.log ? "log" : "lin"));
            }
            throw SchemaError("'grid' must be a string lo:hi:n:log|lin or an object");
        }
        return std::nullopt;
    }

    std::optional<std::pair<double, double>> band() const {
        if (ov_.band) return parse_band(*ov_.band);
        if (json_.contains("band")) {
            const auto& b = json_.at("band");
            if (b.is_string()) return parse_band(b.get<std::string>());
            if (b.is_array() && b.size() == 2 && b[0].is_number() && b[1].is_number())
                return parse_band(format_number(b[0].get<double>()) + ":" + format_number(b[1].get<double>()));
            throw SchemaError("'band' must be \"lo:hi\" or [lo, hi]");
        }
        return std::nullopt;
    }

    double tolerance(double fallback) const {
        double t = ov_.tolerance ? *ov_.tolerance : detail::number_or(json_, "tolerance", fallback);
        if (!(t > 0.0) || !std::isfinite(t)) throw SchemaError("tolerance must be positive");
        return t;
    }

    double number(const char* key, double fallback) const { return detail::number_or(json_, key, fallback); }

    const Overrides& overrides() const { return ov_; }

private:
    Overrides ov_;
    Json json_;
    std::filesystem::path base_;
};

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw SchemaError("cannot write '" + path + "'");
            stream_ = &file_;
        }
    }
    std::ostream& stream() { return *stream_; }
    void finish() {
        stream_->flush();
        if (!*stream_) throw SchemaError("write failed");
    }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

inline void write_json(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

inline constexpr const char* kDefaultCurveGrid = "1e-3:1e6:300:log";

inline int cmd_curves(const RunConfig& cfg, std::ostream& out) {
    const Material mat = cfg.material();
    const GridSpec g = cfg.grid().value_or(parse_grid(kDefaultCurveGrid));
    const auto c = curve(mat, g.points());
    Output o(cfg.overrides().out, out);
    write_curve_csv(o.stream(), c);
    o.finish();
    return kOk;
}

inline int cmd_bound(const RunConfig& cfg, std::ostream& out) {
    const Material mat = cfg.material();
    const GridSpec g = cfg.grid().value_or(parse_grid(kDefaultCurveGrid));
    BoundConstants c = bound_constants(mat);
    if (auto s = cfg.overrides().constant_scale) {
        c.K *= *s;
        c.L *= *s;
        c.sqrt_coeff *= *s;
    }
    const auto rep = verify_bound(mat, g.points(), c, cfg.tolerance(kBoundTolerance));
    Output o(cfg.overrides().out, out);
    write_json(o.stream(), to_json(rep));
    o.finish();
    return rep.holds ? kOk : kBoundViolated;
}

namespace detail {

struct ClassifyTarget {
    RealFunction f;
    std::optional<ComplexFunction> analytic;
    bool cm_only = false;
};

inline ClassifyTarget classify_target(const Json& fn) {
    const std::string kind = viscowave::detail::kind_of(fn);
    if (kind == "creep_example") return {creep_example(viscowave::detail::number(fn, "alpha")), {}, false};
    if (kind == "power") {
        using viscowave::detail::number_or;
        return {power_creep(number_or(fn, "a", 0.0), number_or(fn, "b", 0.0), number_or(fn, "c", 1.0),
                            viscowave::detail::number(fn, "alpha")),
                {}, false};
    }
    if (kind == "crf") {
        const CrfRepr j = crf_from_json(fn.contains("creep") ? fn.at("creep") : fn);
        return {[j](double t) { return eval_crf(j, t); }, {}, false};
    }
    if (kind == "bernstein") {
        const BernsteinRepr g = bernstein_from_json(fn);
        return {[g](double t) { return eval_bf(g, t); }, {}, false};
    }
    if (kind == "stieltjes") {
        const StieltjesRepr s = stieltjes_from_json(fn);
        return {[s](double t) { return t > 0.0 ? eval_cbf(s, t).real() : s.a; }, as_function(s), false};
    }
    if (kind == "cm") {
        const CMRepr m{measure_from_json(fn.contains("measure") ? fn.at("measure") : fn)};
        return {[m](double t) { return eval_cm(m, t); }, {}, true};
    }
    throw SchemaError("unknown function kind '" + kind + "'");
}

} // namespace detail

inline constexpr const char* kDefaultClassifyGrid = "0.01:2:200:lin";

inline int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    const auto target = detail::classify_target(cfg.section("function"));
    const GridSpec g = cfg.grid().value_or(parse_grid(kDefaultClassifyGrid));
    const auto grid = g.points();
    const double tol = cfg.tolerance(kVerdictTolerance);
    const Json opts = cfg.json().value("classify", Json::object());
    const int order = static_cast<int>(viscowave::detail::number_or(opts, "order", 8));
    const double h = viscowave::detail::number_or(opts, "h", grid.size() > 1 ? grid[1] - grid[0] : 0.01);

    auto differences = [&](const char* cls, auto&& check) {
        try {
            Json j = to_json(check(target.f, order, grid, h, tol), cls, tol);
            j["status"] = j["pass"].get<bool>() ? "pass" : "fail";
            return j;
        } catch (const PrecisionError& e) {
            Json j;
            j["class"] = cls;
            j["pass"] = nullptr;
            j["status"] = "precision_error";
            j["message"] = e.what();
            return j;
        }
    };

    Json report;
    report["schema_version"] = kSchemaVersion;
    if (target.cm_only) {
        report["cm"] = differences("cm", [](auto&&... a) { return check_cm_differences(a...); });
    } else {
        std::vector<double> ts = grid;
        if (ts.front() > 0.0) ts.insert(ts.begin(), 0.0);
        Json crf = to_json(classify_crf(sample(target.f, ts), tol));
        crf["status"] = crf["pass"].get<bool>() ? "pass" : "fail";
        report["crf"] = crf;
        report["bernstein"] =
            differences("bernstein", [](auto&&... a) { return check_bernstein_differences(a...); });
        if (target.analytic) {
            const auto n = static_cast<std::size_t>(viscowave::detail::number_or(opts, "samples", 200));
            Json cbf = to_json(nevanlinna_check(*target.analytic, upper_half_plane_samples(n), tol));
            cbf["status"] = cbf["pass"].get<bool>() ? "pass" : "fail";
            report["cbf"] = cbf;
        }
    }
    Output o(cfg.overrides().out, out);
    write_json(o.stream(), report);
    o.finish();
    return kOk;
}

inline int cmd_green(const RunConfig& cfg, std::ostream& out) {
    const Material mat = cfg.material();
    const double x = cfg.number("x", 1.0);
    GreenOptions opt;
    const Json g = cfg.json().value("green", Json::object());
    opt.dt = viscowave::detail::number_or(g, "dt", opt.dt);
    const double samples = viscowave::detail::number_or(g, "samples", static_cast<double>(opt.samples));
    if (!(samples >= 16) || samples != std::floor(samples)) throw SchemaError("green.samples must be an integer >= 16");
    opt.samples = static_cast<std::size_t>(samples);
    const Json w = cfg.json().value("window", Json::object());
    opt.window.sigma = viscowave::detail::number_or(w, "sigma", opt.window.sigma);
    opt.window.amplitude = viscowave::detail::number_or(w, "amplitude", opt.window.amplitude);
    const double threshold = viscowave::detail::number_or(g, "threshold", 0.5);

    const auto sig = greens_function(mat, x, opt);
    const auto front = analyze_front(mat, x, sig, opt.window, threshold);
    Json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["x"] = x;
    rep["dt"] = opt.dt;
    rep["samples"] = opt.samples;
    rep["window"] = {{"sigma", opt.window.sigma}, {"amplitude", opt.window.amplitude}};
    rep["front"] = to_json(front);

    if (!cfg.overrides().out.empty()) {
        Output signal(cfg.overrides().out, out);
        write_signal_csv(signal.stream(), sig);
        signal.finish();
    }
    write_json(out, rep);
    return kOk;
}

inline int cmd_fit(const RunConfig& cfg, std::ostream& out) {
    AttenuationCurve c;
    std::pair<double, double> band;
    if (cfg.json().contains("curve_csv")) {
        const auto path = cfg.resolve(cfg.json().at("curve_csv").get<std::string>());
        std::ifstream in(path);
        if (!in) throw SchemaError("cannot open '" + path.string() + "'");
        c = read_curve_csv(in);
        if (c.rows.empty()) throw FitError("curve file has no rows");
        band = cfg.band().value_or(std::pair{c.rows.front().omega, c.rows.back().omega});
    } else {
        const Material mat = cfg.material();
        band = cfg.band().value_or(std::pair{1.0, 100.0});
        const GridSpec g = cfg.grid().value_or(GridSpec{band.first, band.second, 200, true});
        c = curve(mat, g.points());
    }
    const auto fit = fit_powerlaw(c, band.first, band.second);
    Json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["band"] = {band.first, band.second};
    const Json fields = to_json(fit);
    for (const auto& [k, v] : fields.items()) rep[k] = v;
    Output o(cfg.overrides().out, out);
    write_json(o.stream(), rep);
    o.finish();
    return kOk;
}

inline Json error_json(const std::string& kind, const std::string& message) {
    Json j;
    j["error"] = kind;
    j["message"] = message;
    return j;
}

/// Runs one subcommand; errors are reported as a JSON object on err.
inline int run(const std::string& command, const Overrides& ov, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg(ov);
        if (command == "curves") return cmd_curves(cfg, out);
        if (command == "bound") return cmd_bound(cfg, out);
        if (command == "classify") return cmd_classify(cfg, out);
        if (command == "green") return cmd_green(cfg, out);
        if (command == "fit") return cmd_fit(cfg, out);
        err << error_json("usage", "unknown command '" + command + "'").dump() << '\n';
        return kConfigError;
    } catch (const FitError& e) {
        err << error_json(e.kind(), e.what()).dump() << '\n';
        return kFitImpossible;
    } catch (const Error& e) {
        err << error_json(e.kind(), e.what()).dump() << '\n';
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        err << error_json("schema", e.what()).dump() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << error_json("internal", e.what()).dump() << '\n';
        return kConfigError;
    }
}

} // namespace viscowave::cli
