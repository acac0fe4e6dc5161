#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cortexc/backend.hpp"
#include "cortexc/blackboard.hpp"
#include "cortexc/bus.hpp"
#include "cortexc/integration.hpp"
#include "cortexc/plan.hpp"
#include "cortexc/types.hpp"

namespace cortexc {

struct OrchestratorConfig {
    int concurrency_limit = 4;
    int max_attempts = 3;
    double ema_alpha = 0.2;
    std::vector<AgentProfile> agent_pool;
    ScriptTable scripts;    // implementations for checks with method=scripted
    std::string run_id = "run";
    int64_t seed = 0;
};

// One line of the structured run-event log.
struct RunEvent {
    int64_t ts_ms = 0;
    std::string event; // dispatched | completed | failed | retried | stalled
    std::string task_id;
    std::string agent_id;
    std::string detail;
};

using EventSink = std::function<void(const RunEvent&)>;

std::string event_to_json_line(const RunEvent& e);
EventSink stderr_event_sink();
EventSink file_event_sink(const std::string& path);
EventSink collect_events(std::vector<RunEvent>& into);

// priority(t) = node count of the longest dependency chain from t to any
// sink (unit task cost), so sources on long chains come first.
// Throws Error("cycle").
std::map<std::string, int> compute_priorities(const TaskGraph& graph);

// Ids of tasks whose status is pending or ready and whose deps are all done,
// in insertion order.
std::vector<std::string> ready_set(const TaskGraph& graph);

// Least-loaded role-matching agent: minimizes (in_flight, ema_latency_ms,
// agent_id) among matches with spare capacity. Returns nullopt when every
// matching agent is at capacity (the task waits). Throws
// Error("no-agent-for-role") when the pool has no agent of the role at all.
std::optional<std::string> assign(const Task& task, const std::vector<AgentProfile>& pool);

// EMA latency update plus success accounting; the first observation sets the
// EMA directly.
AgentProfile update_analytics(AgentProfile profile, double latency_ms, bool succeeded,
                              double alpha);

// Builds the full task graph for a spec. In modular mode this invokes the
// planner once (with one format-reminder reprompt if its output does not
// parse), expands the plan into subtasks plus one integrate task, and marks
// the plan task done. In monolithic mode it returns a single monolith task.
// Throws Error("malformed-plan"/"unknown-kind"/"duplicate-id"),
// Error("graph-invalid") or Error("backend-error").
TaskGraph decompose(const TaskSpec& spec, Backend& planner, const OrchestratorConfig& config);

// Adds the parsed subtasks (each additionally depending on the plan task)
// and one integrate task depending on every implement task and every
// subtask nothing else depends on. Validates the result.
void expand_with_plan(TaskGraph& graph, const std::string& plan_task_id,
                      const std::vector<PlanEntry>& entries, int max_attempts);

// Runs an arbitrary pre-built graph to completion: the coordinator owns the
// graph state, up to concurrency_limit workers invoke the backend, results
// come back over the bus, artifacts land on the blackboard under
// "<task_id>/<content_kind>", failed validations feed the retry loop.
// Completing a plan task expands the graph in place.
PipelineRun execute_graph(const TaskSpec& spec, TaskGraph graph,
                          const OrchestratorConfig& config, Backend& backend,
                          MessageBus& bus, Blackboard& board, EventSink sink = nullptr);

// Full pipeline for a spec: initial graph by mode, then execute_graph.
PipelineRun run_pipeline(const TaskSpec& spec, const OrchestratorConfig& config,
                         Backend& backend, MessageBus& bus, Blackboard& board,
                         EventSink sink = nullptr);

} // namespace cortexc
