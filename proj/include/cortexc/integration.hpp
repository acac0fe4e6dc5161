#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cortexc/types.hpp"

namespace cortexc {

// Script table for checks with method=scripted: check name -> callable
// returning (passed, detail). Provided by tests or embedding code.
using ScriptFn = std::function<std::pair<bool, std::string>(const Artifact&)>;
using ScriptTable = std::map<std::string, ScriptFn>;

// Feedback for the retry loop, rendered into the {failure_summary}
// placeholder of the next prompt.
struct FailureSummary {
    std::string task_id;
    int attempt = 0;
    std::vector<std::pair<std::string, std::string>> failed_checks; // (name, detail)
};

// Runs every check applicable to the artifact's content kind.
//   contains_text     substring test against the artifact content
//   external_command  spawns the command with the artifact on stdin and the
//                     task_id as positional argument $1; passes iff exit
//                     status 0. A 30 s timeout or a spawn failure marks the
//                     check failed (with detail) without aborting the report.
//   scripted          lookup in the script table
ValidationReport validate_artifact(const Artifact& artifact,
                                   const std::vector<CheckSpec>& checks,
                                   const ScriptTable& scripts = {});

// Concatenates one artifact per done non-integrate task into a single
// integrated_code artifact. Sections follow the topological order of their
// source tasks (insertion order breaks ties); each section starts with a
// "=== <task_id> (<role>) ===" delimiter line; plan and review content is
// comment-prefixed, everything else is verbatim. The caller assigns
// artifact_id and created_at_ms. Throws Error("missing-artifact").
Artifact integrate(const std::vector<Artifact>& artifacts, const TaskGraph& graph);

// Throws Error("no-failures") when the report has no failed result.
FailureSummary build_feedback(const Task& task, const ValidationReport& report);

std::string format_failure_summary(const FailureSummary& summary);

// Writes out/<run_id>/integrated.txt plus per-section out/<run_id>/<task_id>.txt
// files for the latest artifact of each task.
void write_run_outputs(const PipelineRun& run, const std::string& base_dir);

// Runs `command` via /bin/sh with `input` on stdin and the task id bound to
// $1. Returns (exit_code, detail); exit_code < 0 means spawn failure or
// timeout.
std::pair<int, std::string> run_command_with_input(const std::string& command,
                                                   const std::string& input,
                                                   const std::string& task_id_arg,
                                                   int timeout_ms);

} // namespace cortexc
