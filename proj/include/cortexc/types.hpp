#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "cortexc/error.hpp"

namespace cortexc {

enum class TaskKind { plan, data_structures, logic_review, implement, integrate, monolith };
enum class TaskStatus { pending, ready, running, done, failed };
enum class AgentRole { Orchestrator, Prefrontal, Parietal, Temporal, Motor, Monolith };
enum class ContentKind { plan, schema, review, code, integrated_code };
enum class CheckMethod { contains_text, external_command, scripted };
enum class PipelineMode { modular, monolithic };
enum class RunStatus { succeeded, failed };

const char* to_string(TaskKind k);
const char* to_string(TaskStatus s);
const char* to_string(AgentRole r);
const char* to_string(ContentKind c);
const char* to_string(CheckMethod m);
const char* to_string(PipelineMode m);
const char* to_string(RunStatus s);

TaskKind task_kind_from(const std::string& s);
TaskStatus task_status_from(const std::string& s);
AgentRole agent_role_from(const std::string& s);
ContentKind content_kind_from(const std::string& s);
CheckMethod check_method_from(const std::string& s);
PipelineMode pipeline_mode_from(const std::string& s);
RunStatus run_status_from(const std::string& s);

// Fixed kind -> role assignment: plan work goes to the planning agent,
// data structures to the spatial agent, reviews to the logic agent,
// implementation to the executor, integration to the coordinator itself.
AgentRole role_for_kind(TaskKind k);

// What kind of artifact a task of the given kind produces.
ContentKind content_kind_for(TaskKind k);

// One acceptance check declared by a task spec. `applies_to` restricts the
// check to artifacts of the listed content kinds; an empty list means the
// check targets the final artifact only (integrated_code).
struct CheckSpec {
    std::string name;
    CheckMethod method = CheckMethod::contains_text;
    std::string argument;
    std::vector<ContentKind> applies_to;

    bool applies(ContentKind kind) const;

    bool operator==(const CheckSpec&) const = default;
};

// The user's programming objective plus its acceptance checks.
struct TaskSpec {
    std::string spec_id;
    std::string title;
    std::string description;
    std::string target_language_tag;
    std::vector<CheckSpec> checks;
    PipelineMode mode = PipelineMode::modular;

    bool operator==(const TaskSpec&) const = default;
};

// A schedulable unit of work. Status moves along
// pending -> ready -> running -> {done, failed}; running -> ready is the
// retry path and is only legal while attempts < max_attempts.
struct Task {
    std::string task_id;
    TaskKind kind = TaskKind::implement;
    AgentRole role = AgentRole::Motor;
    std::string description;
    std::set<std::string> deps;
    int priority = 0;
    TaskStatus status = TaskStatus::pending;
    int attempts = 0;
    int max_attempts = 3;

    bool terminal() const { return status == TaskStatus::done || status == TaskStatus::failed; }

    bool operator==(const Task&) const = default;
};

Task make_task(std::string task_id, TaskKind kind, std::string description,
               std::set<std::string> deps = {}, int max_attempts = 3);

// An agent's output for one task attempt.
struct Artifact {
    std::string artifact_id;
    std::string task_id;
    AgentRole role = AgentRole::Motor;
    std::string content;
    ContentKind content_kind = ContentKind::code;
    int64_t created_at_ms = 0;

    bool operator==(const Artifact&) const = default;
};

struct CheckResult {
    std::string check_name;
    bool passed = false;
    std::string detail;

    bool operator==(const CheckResult&) const = default;
};

// Immutable record of running every applicable check against one artifact.
struct ValidationReport {
    std::string artifact_id;
    std::vector<CheckResult> results;

    bool all_passed() const;
    int passed_count() const;

    bool operator==(const ValidationReport&) const = default;
};

// Live view of one pool agent used for assignment decisions.
struct AgentProfile {
    std::string agent_id;
    AgentRole role = AgentRole::Motor;
    int capacity = 1;
    int in_flight = 0;
    double ema_latency_ms = 0.0;
    int completed = 0;
    int successes = 0;

    double success_rate() const {
        return static_cast<double>(successes) / static_cast<double>(completed > 1 ? completed : 1);
    }

    bool operator==(const AgentProfile&) const = default;
};

// Dependency graph of tasks. Nodes keep their insertion order, which is the
// deterministic tie-break for scheduling and integration.
class TaskGraph {
public:
    void add(Task task);
    bool contains(const std::string& task_id) const;
    const Task& at(const std::string& task_id) const;
    Task& at(const std::string& task_id);
    const std::vector<std::string>& order() const { return order_; }
    std::size_t size() const { return order_.size(); }
    bool empty() const { return order_.empty(); }

    // Insertion position of a task id; used for FIFO tie-breaking.
    std::size_t index_of(const std::string& task_id) const;

    bool operator==(const TaskGraph& other) const;

private:
    std::vector<std::string> order_;
    std::unordered_map<std::string, Task> nodes_;
};

// A complete execution record for one spec.
struct PipelineRun {
    std::string run_id;
    TaskSpec spec;
    TaskGraph graph;
    std::vector<Artifact> artifacts;
    std::vector<ValidationReport> reports;
    int64_t started_at_ms = 0;
    std::optional<int64_t> finished_at_ms;
    RunStatus status = RunStatus::failed;
    int64_t seed = 0;

    bool finished() const { return finished_at_ms.has_value(); }

    bool operator==(const PipelineRun&) const = default;
};

// Inputs of the regularized cross-entropy utility: per-example predicted
// probabilities, one-hot ground truth, and the L2 term already reduced to
// lambda and the squared parameter norm.
struct LossInput {
    std::vector<std::vector<double>> probs;
    std::vector<std::vector<int>> labels;
    double lambda = 0.0;
    double theta_sq_norm = 0.0;
};

} // namespace cortexc
