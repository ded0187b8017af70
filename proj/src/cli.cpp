#include "qst/cli.hpp"

#include <cstdio>
#include <optional>

#include "qst/output.hpp"
#include "qst/version.hpp"

namespace qst {

namespace {

const char* usage_text = R"(qst - two-qutrit state transfer simulator (version %s)

usage: qst <subcommand> [options]

subcommands:
  transfer        run the two-stage protocol once and print the fidelity
  sweep-detuning  fidelity versus D = delta/g for each configured kappa
  sweep-states    fidelity over the (gamma, theta) input-state grid
  sweep-coupling  fidelity over the (c, d) coupling-inhomogeneity grid
  converge        fidelity versus photon truncation and time step
  validate        run the physics invariant suite; nonzero exit on failure
  print-config    write the annotated default configuration to stdout

options:
  --config PATH   read a key=value configuration file
  --set KEY=VALUE override one configuration key (repeatable)
  --out PATH      write the result table as CSV
  --svg PATH      write a plot (line plot or heatmap, sweeps only)
  -h, --help      this text
)";

void print_usage() { std::printf(usage_text, std::string(version_string).c_str()); }

struct CliOptions {
    std::string subcommand;
    std::optional<std::string> config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::optional<std::string> out_path;
    std::optional<std::string> svg_path;
};

CliOptions parse_args(const std::vector<std::string>& args) {
    CliOptions opts;
    if (args.empty()) throw std::invalid_argument("missing subcommand");
    opts.subcommand = args[0];
    for (size_t i = 1; i < args.size(); ++i) {
        const std::string& arg = args[i];
        auto value = [&](const char* name) -> const std::string& {
            if (++i >= args.size())
                throw std::invalid_argument(std::string(name) + " requires an argument");
            return args[i];
        };
        if (arg == "--config") opts.config_path = value("--config");
        else if (arg == "--set") {
            const std::string& kv = value("--set");
            const size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set expects KEY=VALUE, got '" + kv + "'");
            opts.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        } else if (arg == "--out") opts.out_path = value("--out");
        else if (arg == "--svg") opts.svg_path = value("--svg");
        else throw std::invalid_argument("unknown option '" + arg + "'");
    }
    return opts;
}

RunConfig build_config(const CliOptions& opts) {
    RunConfig config = opts.config_path ? load_config_file(*opts.config_path) : default_config();
    for (const auto& [key, value] : opts.overrides) apply_override(config, key, value);
    if (opts.out_path) config.out_csv = *opts.out_path;
    if (opts.svg_path) config.out_svg = *opts.svg_path;
    return config;
}

int run_transfer_command(const RunConfig& config) {
    const TransferResult res =
        run_transfer(state_from(config), device_from(config), rates_from(config),
                     integrator_from(config), layout_from(config),
                     TransferOptions{config.include_crosstalk, Stage1Kind::full, false});
    std::printf("fidelity      F  = %.9f\n", res.fidelity);
    std::printf("lambda1/2pi      = %.6f MHz\n", angular_to_mhz(res.schedule.lambda1));
    std::printf("lambda2/2pi      = %.6f MHz  (lambda2/lambda1 = %.6f)\n",
                angular_to_mhz(res.schedule.lambda2), res.schedule.mismatch_ratio());
    std::printf("t1               = %.6f ns\n", res.schedule.t1);
    std::printf("t2               = %.6f ns\n", res.schedule.t2);
    std::printf("Q_a              = %.6g\n", res.q_a);
    std::printf("Q_b              = %.6g\n", res.q_b);
    std::printf("peak <n_a + n_b> = %.6g\n", res.peak_photon);
    if (!config.out_csv.empty()) emit_csv(to_table(res, config), config.out_csv);
    if (!config.out_svg.empty()) {
        std::fprintf(stderr, "error: --svg has no meaning for a single transfer\n");
        return 2;
    }
    return 0;
}

int run_sweep_command(const RunConfig& config, SweepKind kind) {
    const SweepSpec spec = SweepSpec::from_config(config, kind);
    SweepResult result;
    switch (kind) {
        case SweepKind::detuning: result = sweep_detuning(spec); break;
        case SweepKind::state_grid: result = sweep_state_grid(spec); break;
        case SweepKind::coupling: result = sweep_coupling(spec); break;
        case SweepKind::convergence: result = convergence_study(spec); break;
    }
    std::printf("%s sweep: %zu points, fidelity min/mean/max = %.6f / %.6f / %.6f\n",
                to_string(kind), result.rows.size(), result.min_fidelity, result.mean_fidelity,
                result.max_fidelity);
    for (const auto& note : result.notes) std::printf("  %s\n", note.c_str());
    if (!config.out_csv.empty()) {
        emit_csv(to_table(result), config.out_csv);
        std::printf("wrote %s\n", config.out_csv.c_str());
    }
    if (!config.out_svg.empty()) {
        emit_svg(result, config.out_svg);
        std::printf("wrote %s\n", config.out_svg.c_str());
    }
    return 0;
}

int run_validate_command(const RunConfig& config) {
    const std::vector<CheckResult> checks = validation_suite(config);
    int failures = 0;
    for (const auto& c : checks) {
        std::printf("[%s] %-24s measured %.3e  bound %.3e%s%s\n", c.passed ? "PASS" : "FAIL",
                    c.name.c_str(), c.measured, c.bound, c.detail.empty() ? "" : "  ",
                    c.detail.c_str());
        if (!c.passed) ++failures;
    }
    std::printf("%d/%zu checks passed\n", static_cast<int>(checks.size()) - failures,
                checks.size());
    return failures == 0 ? 0 : 1;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
    if (args.empty() || args[0] == "-h" || args[0] == "--help" || args[0] == "help") {
        print_usage();
        return args.empty() ? 2 : 0;
    }
    CliOptions opts;
    RunConfig config;
    try {
        opts = parse_args(args);
        if (opts.subcommand == "print-config") {
            std::fputs(default_config_text().c_str(), stdout);
            return 0;
        }
        config = build_config(opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        print_usage();
        return 2;
    }
    try {
        if (opts.subcommand == "transfer") return run_transfer_command(config);
        if (opts.subcommand == "sweep-detuning") return run_sweep_command(config, SweepKind::detuning);
        if (opts.subcommand == "sweep-states") return run_sweep_command(config, SweepKind::state_grid);
        if (opts.subcommand == "sweep-coupling") return run_sweep_command(config, SweepKind::coupling);
        if (opts.subcommand == "converge") return run_sweep_command(config, SweepKind::convergence);
        if (opts.subcommand == "validate") return run_validate_command(config);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    std::fprintf(stderr, "error: unknown subcommand '%s'\n", opts.subcommand.c_str());
    print_usage();
    return 2;
}

}  // namespace qst
