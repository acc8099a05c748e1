#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "sctk/direction.hpp"
#include "sctk/errors.hpp"
#include "sctk/io.hpp"

namespace {

/** Exact positive rational from a CLI argument ("20", "45/2", "0.5"). */
mpq_class rational_arg(const std::string& text, const char* flag) {
    sctk::FieldElement e = sctk::FieldElement::rational(0);
    try {
        e = sctk::parse_field_literal(text);
    } catch (const sctk::Error& err) {
        throw sctk::usage_error(std::string(flag) + ": " + err.what());
    }
    if (e.descriptor().kind != sctk::FieldKind::rational)
        throw sctk::usage_error(std::string(flag) + " must be rational");
    mpq_class v = e.rational_value();
    if (v <= 0) throw sctk::usage_error(std::string(flag) + " must be positive");
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"continued-fraction approximation against a surface's saddle-vector set"};
    app.require_subcommand(1);

    sctk::RunConfig cfg;
    std::string radius = "20";
    std::string height_cap = "1000000";
    std::string hor_cap = "1";
    std::string format = "csv";
    std::string output;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--surface", cfg.surface_path, "surface config file (JSON)")
            ->required();
        sub->add_option("--output", output, "report file (default: stdout)");
        sub->add_option("--format", format, "csv | json");
        sub->add_option("--threads", cfg.threads, "worker cap (0 = hardware concurrency)");
        sub->add_option("--bits", cfg.bits, "working precision in bits");
        return sub;
    };
    auto add_ray = [&](CLI::App* sub) {
        sub->add_option("--theta", cfg.theta,
                        "direction: pi, e, a decimal, a/b, sqrt(k), or (a+b*sqrt(d))/m");
        sub->add_option("--terms", cfg.terms, "stop after this many records");
        sub->add_option("--height-cap", height_cap, "stop the stream at this height");
        sub->add_option("--hor-cap", hor_cap, "horizontal-component cap for the stream");
        return sub;
    };

    CLI::App* expand =
        add_ray(add_common(app.add_subcommand("expand", "record expansion with the "
                                                        "two-sided approximation check")));
    (void)expand;
    CLI::App* enumerate =
        add_common(app.add_subcommand("enumerate", "saddle vectors within a norm radius"));
    enumerate->add_option("--radius", radius, "norm radius");
    CLI::App* mink =
        add_common(app.add_subcommand("mink", "lattice-constant lower/upper bounds"));
    mink->add_option("--radius", radius, "norm radius for the vector family");
    mink->add_option("--grid", cfg.grid, "coarse search grid side (odd)");
    mink->add_option("--refine-rounds", cfg.refine_rounds, "hill-climb refinement rounds");
    CLI::App* verify =
        add_common(app.add_subcommand("verify", "invariant suite for the configured surface"));
    verify->add_option("--radius", radius, "norm radius for the checks");
    CLI::App* growth =
        add_ray(add_common(app.add_subcommand("growth", "height growth-rate detector")));
    growth->add_option("--margin", cfg.margin, "detector margin over the threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(sctk::ErrorKind::usage);
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.radius = rational_arg(radius, "--radius");
        cfg.height_cap = rational_arg(height_cap, "--height-cap");
        cfg.hor_cap = rational_arg(hor_cap, "--hor-cap");
        if (format == "csv")
            cfg.format = sctk::ReportFormat::csv;
        else if (format == "json")
            cfg.format = sctk::ReportFormat::json;
        else
            throw sctk::usage_error("--format must be csv or json");

        std::ofstream file;
        std::ostream* out = &std::cout;
        if (!output.empty()) {
            file.open(output, std::ios::binary);
            if (!file) throw sctk::io_error("cannot open output file: " + output);
            out = &file;
        }
        int rc = sctk::run_command(cfg, *out);
        out->flush();
        if (!output.empty() && !file)
            throw sctk::io_error("failed writing output file: " + output);
        return rc;
    } catch (const sctk::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(sctk::ErrorKind::usage);
    }
}
