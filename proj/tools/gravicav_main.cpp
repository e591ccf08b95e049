// gravicav command-line driver: scenario runs, variance sweeps, verification
// and the acceptance suite.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gravicav/scenario.hpp"

namespace {

using namespace gravicav;

int print_summaries(const std::vector<scenario::RunSummary>& summaries) {
    for (const auto& s : summaries) {
        std::printf("[%s] %s", s.status == scenario::Status::Pass ? "PASS" : "FAIL", s.name.c_str());
        bool first = true;
        for (const auto& [k, v] : s.metrics) {
            std::printf("%s%s=%.6g", first ? "  (" : ", ", k.c_str(), v);
            first = false;
        }
        if (!first) std::printf(")");
        if (!s.message.empty()) std::printf("  -- %s", s.message.c_str());
        std::printf("  [%.2f s]\n", s.runtime_s);
    }
    return scenario::exit_code(summaries);
}

scenario::RunOptions base_options(const std::string& output_dir, long budget,
                                  const std::string& frame, const std::string& convention,
                                  const std::string& variant) {
    scenario::RunOptions opt;
    opt.output_dir = output_dir;
    if (budget > 0) opt.budget = budget;
    opt.frame = frame == "lab" ? oracle::Frame::Lab : oracle::Frame::Rotating;
    if (convention == "printed") opt.convention = analytic::PhaseConvention::Printed;
    else if (convention == "corrected") opt.convention = analytic::PhaseConvention::Corrected;
    opt.printed_variant = variant == "paper";
    return opt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gravicav: quadrature statistics of a cavity field coupled to quantized "
                 "gravitational-wave modes, with brute-force verification"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string output_dir = ".";
    long budget = 0;
    std::string frame = "rotating", convention = "", variant = "";
    app.add_option("--output-dir", output_dir, "directory for CSV/JSON outputs");
    app.add_option("--budget", budget, "joint Hilbert-space dimension budget (default 4096, or GRAVICAV_BUDGET)");
    app.add_option("--frame", frame, "rotating|lab")->check(CLI::IsMember({"rotating", "lab"}));
    app.add_option("--convention", convention, "corrected|printed vacuum-variance convention")
        ->check(CLI::IsMember({"corrected", "printed"}));
    app.add_option("--variant", variant, "exact|paper analytic variant for traveling waves")
        ->check(CLI::IsMember({"exact", "paper"}));

    auto* simulate = app.add_subcommand("simulate", "run the scenarios in a JSON configuration file");
    std::string config_path;
    simulate->add_option("config", config_path, "configuration file")->required();

    auto* sweep = app.add_subcommand("sweep-variance", "vacuum variance over an F grid, CSV output");
    double sweep_alpha = 1.0, sweep_fmax = 4.0 * M_PI;
    int sweep_samples = 2001;
    std::string sweep_output;
    sweep->add_option("--alpha", sweep_alpha, "optical coherent amplitude");
    sweep->add_option("--fmax", sweep_fmax, "upper end of the F grid");
    sweep->add_option("--samples", sweep_samples, "grid samples");
    sweep->add_option("--output", sweep_output, "output CSV path (default: sweep_variance.csv)");

    auto* verify = app.add_subcommand("verify", "propagator, factorization and identity checks");
    auto* accept = app.add_subcommand("acceptance", "full acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const auto options = base_options(output_dir, budget, frame, convention, variant);

    try {
        if (simulate->parsed()) {
            std::ifstream in(config_path);
            if (!in) {
                std::fprintf(stderr, "error: cannot open %s\n", config_path.c_str());
                return 2;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            const auto scenarios = scenario::parse_config(buf.str());
            std::vector<scenario::RunSummary> summaries;
            summaries.reserve(scenarios.size());
            for (const auto& sc : scenarios) summaries.push_back(scenario::run(sc, options));
            return print_summaries(summaries);
        }
        if (sweep->parsed()) {
            scenario::Scenario sc;
            sc.name = "sweep-variance";
            sc.kind = scenario::Kind::VacuumSqueezing;
            scenario::VacuumSqueezingParams p;
            p.alpha = sweep_alpha;
            sc.params = p;
            sc.grid = {0.0, sweep_fmax, sweep_samples};
            sc.output_prefix = sweep_output.empty() ? "sweep_variance"
                                                    : sweep_output.substr(0, sweep_output.rfind(".csv"));
            return print_summaries({scenario::run(sc, options)});
        }
        if (verify->parsed()) {
            std::vector<scenario::Scenario> checks(3);
            checks[0] = {"oracle-verify", scenario::Kind::OracleVerify, {0.0, 4.0 * M_PI, 33}, "",
                         scenario::OracleVerifyParams{}};
            checks[1] = {"bch-verify", scenario::Kind::BchVerify, {0.0, 1.0, 2}, "",
                         scenario::BchVerifyParams{}};
            scenario::SqueezedGwParams sq;
            checks[2] = {"squeezed-verify", scenario::Kind::SqueezedGw, {0.0, 2.0 * M_PI, 17}, "", sq};
            std::vector<scenario::RunSummary> summaries;
            for (const auto& sc : checks) summaries.push_back(scenario::run(sc, options));
            return print_summaries(summaries);
        }
        if (accept->parsed()) {
            return print_summaries(scenario::acceptance(options));
        }
    } catch (const gravicav::ParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const gravicav::ValidationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
