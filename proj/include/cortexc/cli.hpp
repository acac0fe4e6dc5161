#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cortexc/types.hpp"

namespace cortexc {

// Merged view of the config file and command-line flags. Flags override file
// values; the file is a flat key = value list with the same key names.
struct CliConfig {
    std::string backend = "mock"; // mock | http
    std::string endpoint;
    std::string model = "gpt-4o-mini";
    int64_t seed = 0;
    int concurrency = 4;
    int max_attempts = 3;
    std::string out_dir = ".";
    std::string run_id;      // empty -> <spec_id>-<UTC stamp>-<4 hex of seed>
    std::string survey_path;
    std::optional<PipelineMode> mode; // overrides the spec's mode when set
    int mock_latency_ms = 100;
    std::vector<std::pair<std::string, int>> failure_plan; // task or kind -> failures
    // agent pool as (agent_id, role, capacity); empty -> one agent per role
    // with capacity = concurrency
    std::vector<std::tuple<std::string, std::string, int>> agents;
};

// Overlay of explicitly set flags, applied on top of file values.
struct CliOverrides {
    std::optional<std::string> backend;
    std::optional<std::string> endpoint;
    std::optional<std::string> model;
    std::optional<int64_t> seed;
    std::optional<int> concurrency;
    std::optional<int> max_attempts;
    std::optional<std::string> out_dir;
    std::optional<std::string> run_id;
    std::optional<std::string> survey_path;
    std::optional<std::string> mode;
};

// Parses the key = value config file. Throws Error("parse-error") /
// Error("file-not-found").
CliConfig load_config_file(const std::string& path);

void apply_overrides(CliConfig& config, const CliOverrides& overrides);

// Exit statuses: 0 success, 1 run failure, 2 usage/config error.
int cmd_run(const std::string& spec_path, const CliConfig& config);
int cmd_bench(const std::string& suite_path, const CliConfig& config);
int cmd_report(const std::vector<std::string>& run_paths, const CliConfig& config);

} // namespace cortexc
