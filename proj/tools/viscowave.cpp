#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace viscowave::cli;

    CLI::App app{"viscowave: wave propagation in viscoelastic media with creep-function compliances"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "viscowave 1.0 (schema " + std::to_string(viscowave::kSchemaVersion) + ")");

    Overrides ov;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", ov.config, "JSON run config")->required();
        sub->add_option("--out", ov.out, "output file (default: stdout)");
        return sub;
    };
    auto add_grid = [&](CLI::App* sub, const char* def) {
        sub->add_option_function<std::string>(
            "--grid", [&](const std::string& s) { ov.grid = s; },
            std::string("frequency grid lo:hi:n:log|lin (default ") + def + ")");
    };
    auto add_tolerance = [&](CLI::App* sub) {
        sub->add_option_function<double>(
            "--tolerance", [&](double t) { ov.tolerance = t; }, "relative tolerance for verdicts");
    };

    auto* curves = add_common(app.add_subcommand("curves", "wave number, attenuation and phase velocity as CSV"));
    add_grid(curves, kDefaultCurveGrid);

    auto* classify = add_common(app.add_subcommand("classify", "CrF / Bernstein / CBF verdicts for a function"));
    add_grid(classify, kDefaultClassifyGrid);
    add_tolerance(classify);

    auto* bound = add_common(app.add_subcommand("bound", "check the linear attenuation bound K + L|omega|"));
    add_grid(bound, kDefaultCurveGrid);
    add_tolerance(bound);
    bound->add_option_function<double>("--constant-scale", [&](double s) { ov.constant_scale = s; })
        ->group("");

    auto* green = add_common(app.add_subcommand("green", "band-limited Green's function and front report"));
    (void)green;

    auto* fit = add_common(app.add_subcommand("fit", "power-law fit of attenuation over a band"));
    add_grid(fit, "200 log points over the band");
    fit->add_option_function<std::string>(
        "--band", [&](const std::string& s) { ov.band = s; }, "fit band lo:hi (default 1:100)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << error_json("usage", e.what()).dump() << '\n';
        return kConfigError;
    }
    return run(app.get_subcommands().front()->get_name(), ov, std::cout, std::cerr);
}
