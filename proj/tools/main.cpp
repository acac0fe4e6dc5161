#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cortexc/cli.hpp"
#include "cortexc/error.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    cortexc::CliOverrides overrides;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "config file (key = value lines)");
    cmd->add_option("--backend", flags.overrides.backend, "generation backend: mock|http");
    cmd->add_option("--endpoint", flags.overrides.endpoint, "chat-completion endpoint URL");
    cmd->add_option("--model", flags.overrides.model, "model name sent to the backend");
    cmd->add_option("--seed", flags.overrides.seed, "seed for deterministic mock output");
    cmd->add_option("--concurrency", flags.overrides.concurrency, "parallel worker limit");
    cmd->add_option("--max-attempts", flags.overrides.max_attempts,
                    "attempt budget per task (retry loop bound)");
    cmd->add_option("--out", flags.overrides.out_dir, "base output directory");
    cmd->add_option("--run-id", flags.overrides.run_id, "explicit run id");
    cmd->add_option("--survey", flags.overrides.survey_path, "survey CSV to merge into reports");
    cmd->add_option("--mode", flags.overrides.mode, "pipeline mode: modular|monolithic");
}

int build_config(const CommonFlags& flags, cortexc::CliConfig& config) {
    try {
        if (!flags.config_path.empty()) {
            config = cortexc::load_config_file(flags.config_path);
        }
        cortexc::apply_overrides(config, flags.overrides);
    } catch (const cortexc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cortexc: modular multi-agent code generation pipeline"};
    app.require_subcommand(1);

    std::string spec_path;
    CommonFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "execute one task spec");
    run->add_option("spec", spec_path, "task spec JSON file")->required();
    add_common_flags(run, run_flags);

    std::string suite_path;
    CommonFlags bench_flags;
    CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite");
    bench->add_option("suite", suite_path, "suite JSON file")->required();
    add_common_flags(bench, bench_flags);

    std::vector<std::string> run_paths;
    CommonFlags report_flags;
    CLI::App* report = app.add_subcommand("report", "regenerate a report from saved runs");
    report->add_option("runs", run_paths, "run JSON files or a directory of them")->required();
    add_common_flags(report, report_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // 0 for --help, usage errors otherwise
    }

    try {
        cortexc::CliConfig config;
        if (run->parsed()) {
            if (int rc = build_config(run_flags, config)) return rc;
            return cortexc::cmd_run(spec_path, config);
        }
        if (bench->parsed()) {
            if (int rc = build_config(bench_flags, config)) return rc;
            return cortexc::cmd_bench(suite_path, config);
        }
        if (report->parsed()) {
            if (int rc = build_config(report_flags, config)) return rc;
            return cortexc::cmd_report(run_paths, config);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
