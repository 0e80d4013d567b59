#include "frontrelax/errors.hpp"
#include "frontrelax/experiment.hpp"
#include "frontrelax/report.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace frontrelax;

int main(int argc, char** argv) {
    CLI::App app{"Plane-front relaxation experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Run one experiment from a JSON config");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");
    auto* out_opt = run->add_option("--out", out_dir, "Override the output directory");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "Merge run verdicts below a directory into a summary");
    report->add_option("dir", report_dir, "Directory to scan")->required();

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        ExperimentConfig cfg;
        try {
            cfg = load_config(config_path);
        } catch (const ConfigError& e) {
            std::cerr << "config error at " << e.field_path() << ": " << e.what() << '\n';
            return 2;
        }
        if (*seed_opt) cfg.seed = seed;
        if (*out_opt) cfg.output_dir = out_dir;
        const int status = run_experiment(cfg);
        std::cout << cfg.kind << ": " << (status == 0 ? "PASS" : status == 1 ? "FAIL" : "ERROR") << " (see "
                  << cfg.output_dir << ")\n";
        return status;
    }
    try {
        const ReportSummary s = emit_report(report_dir);
        std::cout << s.text;
        return s.runs_failed == 0 ? 0 : 1;
    } catch (const ReportError& e) {
        std::cerr << "report error: " << e.what() << '\n';
        return 2;
    }
}
