// hdgoc: HDG solver for distributed optimal control of convection-diffusion.
//
//   hdgoc solve --problem example1 -k 1 -n 16
//   hdgoc study --config study.cfg --output_format markdown
//   hdgoc check --seed 7

#include "hdgoc/checks.hpp"
#include "hdgoc/error.hpp"
#include "hdgoc/kernels.hpp"
#include "hdgoc/study.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

/// Flags that map one-to-one onto StudyConfig keys.
struct ConfigFlags {
    std::string config_path;
    std::map<std::string, std::string> values;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help)
    {
        app->add_option(flag, values[key], help);
    }

    hdgoc::StudyConfig build(const CLI::App* app) const
    {
        hdgoc::StudyConfig cfg;
        if (!config_path.empty()) {
            hdgoc::apply_config_file(cfg, config_path);
        }
        for (const auto& [key, value] : values) {
            if (app->get_option("--" + key)->count() > 0) {
                hdgoc::apply_setting(cfg, key, value);
            }
        }
        return cfg;
    }
};

void add_common(CLI::App* app, ConfigFlags& flags)
{
    app->add_option("--config", flags.config_path, "flat key=value config file")->check(CLI::ExistingFile);
    flags.add(app, "--problem", "problem", "example1 | example2 | poly_debug");
    flags.add(app, "-k,--k", "k", "polynomial degree k (fluxes and traces k, states k+1)");
    flags.add(app, "--gamma", "gamma", "regularization parameter");
    flags.add(app, "--tau2", "tau2", "constant stabilization tau2 (tau1 = tau2 + beta.n)");
    flags.add(app, "--seed", "seed", "seed for randomized checks");
}

int run_solve(const hdgoc::StudyConfig& cfg, std::size_t n)
{
    hdgoc::StudyConfig single = cfg;
    single.levels = {n};
    single.validate();
    const hdgoc::LevelResult r = hdgoc::run_level(single, n);
    std::printf("problem %s, k = %d, n = %zu, h = %.6e, trace dofs = %zu\n", cfg.problem.c_str(), cfg.k, n, r.h,
                r.trace_dofs);
    for (std::size_t v = 0; v < hdgoc::kAllVariables.size(); ++v) {
        const auto name = hdgoc::variable_name(hdgoc::kAllVariables[v]);
        std::printf("  err_%.*s = %.6e\n", static_cast<int>(name.size()), name.data(), r.errors[v]);
    }
    std::printf("  cost   = %.10e\n", r.cost);
    return 0;
}

int run_study_command(const hdgoc::StudyConfig& cfg)
{
    const hdgoc::ConvergenceReport report = hdgoc::run_study(cfg, [](const hdgoc::LevelResult& r) {
        std::fprintf(stderr, "n = %zu done (trace dofs %zu)\n", r.n, r.trace_dofs);
    });
    const std::string text = cfg.output_format == hdgoc::OutputFormat::Csv ? hdgoc::format_csv(report)
                                                                            : hdgoc::format_markdown(report);
    if (cfg.output_path) {
        std::ofstream out(*cfg.output_path, std::ios::binary);
        if (!out) {
            throw hdgoc::ConfigError("cannot write '" + *cfg.output_path + "'");
        }
        out << text;
    } else {
        std::cout << text;
    }
    return 0;
}

int run_check(const hdgoc::StudyConfig& cfg, bool break_a1)
{
    hdgoc::CheckOptions opt;
    opt.seed = cfg.seed;
    opt.tau2 = cfg.tau2;
    opt.tau1_rule = break_a1 ? hdgoc::Tau1Rule::EqualTau2 : hdgoc::Tau1Rule::FromBeta;
    const hdgoc::CheckSummary summary = hdgoc::run_checks(opt);
    for (const auto& r : summary.results) {
        std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    }
    return summary.all_passed() ? 0 : kExitNumerical;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"HDG solver for distributed optimal control of convection-diffusion"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hdgoc 1.0");

    std::string kernels = "auto";
    app.add_option("--kernels", kernels, "quadrature kernels: auto | scalar | avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    ConfigFlags solve_flags;
    std::size_t n = 16;
    auto* solve = app.add_subcommand("solve", "solve at a single mesh level and print errors");
    add_common(solve, solve_flags);
    solve->add_option("-n,--n", n, "squares per side")->check(CLI::PositiveNumber);

    ConfigFlags study_flags;
    auto* study = app.add_subcommand("study", "run a refinement sequence and emit a convergence table");
    add_common(study, study_flags);
    study_flags.add(study, "--levels", "levels", "comma-separated squares per side, e.g. 8,16,32");
    study_flags.add(study, "--output_format", "output_format", "csv | markdown");
    study_flags.add(study, "--output_path", "output_path", "write the table here instead of stdout");

    ConfigFlags check_flags;
    bool break_a1 = false;
    auto* check = app.add_subcommand("check", "run the invariant check suite");
    add_common(check, check_flags);
    check->add_flag("--break-a1", break_a1, "use tau1 = tau2 to demonstrate the adjoint identity failing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (kernels == "scalar") {
            hdgoc::kernels::select(hdgoc::kernels::Isa::Scalar);
        } else if (kernels == "avx2") {
            hdgoc::kernels::select(hdgoc::kernels::Isa::Avx2);
        }
        if (solve->parsed()) {
            return run_solve(solve_flags.build(solve), n);
        }
        if (study->parsed()) {
            return run_study_command(study_flags.build(study));
        }
        return run_check(check_flags.build(check), break_a1);
    } catch (const hdgoc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const hdgoc::InvalidArgument& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return kExitConfig;
    } catch (const hdgoc::Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
}
