#pragma once

#include <string>

#include <json.hpp>

#include "cortexc/types.hpp"

namespace cortexc {

using json = nlohmann::json;

json to_json(const CheckSpec& c);
json to_json(const TaskSpec& s);
json to_json(const Task& t);
json to_json(const TaskGraph& g);
json to_json(const Artifact& a);
json to_json(const ValidationReport& r);
json to_json(const PipelineRun& run);

CheckSpec check_spec_from_json(const json& j);
TaskSpec task_spec_from_json(const json& j);
Task task_from_json(const json& j);
TaskGraph task_graph_from_json(const json& j);
Artifact artifact_from_json(const json& j);
ValidationReport report_from_json(const json& j);
PipelineRun run_from_json(const json& j);

// One JSON document per run at <base_dir>/runs/<run_id>.json. The run must be
// finished. Returns the file path written.
std::string save_run(const PipelineRun& run, const std::string& base_dir);
PipelineRun load_run(const std::string& path);

// Task spec files as consumed by the CLI.
TaskSpec load_task_spec(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace cortexc
