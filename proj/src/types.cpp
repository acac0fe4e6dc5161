#include "cortexc/types.hpp"

#include <algorithm>

namespace cortexc {

const char* to_string(TaskKind k) {
    switch (k) {
        case TaskKind::plan: return "plan";
        case TaskKind::data_structures: return "data_structures";
        case TaskKind::logic_review: return "logic_review";
        case TaskKind::implement: return "implement";
        case TaskKind::integrate: return "integrate";
        case TaskKind::monolith: return "monolith";
    }
    return "?";
}

const char* to_string(TaskStatus s) {
    switch (s) {
        case TaskStatus::pending: return "pending";
        case TaskStatus::ready: return "ready";
        case TaskStatus::running: return "running";
        case TaskStatus::done: return "done";
        case TaskStatus::failed: return "failed";
    }
    return "?";
}

const char* to_string(AgentRole r) {
    switch (r) {
        case AgentRole::Orchestrator: return "Orchestrator";
        case AgentRole::Prefrontal: return "Prefrontal";
        case AgentRole::Parietal: return "Parietal";
        case AgentRole::Temporal: return "Temporal";
        case AgentRole::Motor: return "Motor";
        case AgentRole::Monolith: return "Monolith";
    }
    return "?";
}

const char* to_string(ContentKind c) {
    switch (c) {
        case ContentKind::plan: return "plan";
        case ContentKind::schema: return "schema";
        case ContentKind::review: return "review";
        case ContentKind::code: return "code";
        case ContentKind::integrated_code: return "integrated_code";
    }
    return "?";
}

const char* to_string(CheckMethod m) {
    switch (m) {
        case CheckMethod::contains_text: return "contains_text";
        case CheckMethod::external_command: return "external_command";
        case CheckMethod::scripted: return "scripted";
    }
    return "?";
}

const char* to_string(PipelineMode m) {
    return m == PipelineMode::modular ? "modular" : "monolithic";
}

const char* to_string(RunStatus s) {
    return s == RunStatus::succeeded ? "succeeded" : "failed";
}

namespace {

[[noreturn]] void bad_enum(const char* what, const std::string& value) {
    fail("parse-error", std::string("unknown ") + what + " \"" + value + "\"");
}

} // namespace

TaskKind task_kind_from(const std::string& s) {
    if (s == "plan") return TaskKind::plan;
    if (s == "data_structures") return TaskKind::data_structures;
    if (s == "logic_review") return TaskKind::logic_review;
    if (s == "implement") return TaskKind::implement;
    if (s == "integrate") return TaskKind::integrate;
    if (s == "monolith") return TaskKind::monolith;
    bad_enum("task kind", s);
}

TaskStatus task_status_from(const std::string& s) {
    if (s == "pending") return TaskStatus::pending;
    if (s == "ready") return TaskStatus::ready;
    if (s == "running") return TaskStatus::running;
    if (s == "done") return TaskStatus::done;
    if (s == "failed") return TaskStatus::failed;
    bad_enum("task status", s);
}

AgentRole agent_role_from(const std::string& s) {
    if (s == "Orchestrator") return AgentRole::Orchestrator;
    if (s == "Prefrontal") return AgentRole::Prefrontal;
    if (s == "Parietal") return AgentRole::Parietal;
    if (s == "Temporal") return AgentRole::Temporal;
    if (s == "Motor") return AgentRole::Motor;
    if (s == "Monolith") return AgentRole::Monolith;
    bad_enum("agent role", s);
}

ContentKind content_kind_from(const std::string& s) {
    if (s == "plan") return ContentKind::plan;
    if (s == "schema") return ContentKind::schema;
    if (s == "review") return ContentKind::review;
    if (s == "code") return ContentKind::code;
    if (s == "integrated_code") return ContentKind::integrated_code;
    bad_enum("content kind", s);
}

CheckMethod check_method_from(const std::string& s) {
    if (s == "contains_text") return CheckMethod::contains_text;
    if (s == "external_command") return CheckMethod::external_command;
    if (s == "scripted") return CheckMethod::scripted;
    bad_enum("check method", s);
}

PipelineMode pipeline_mode_from(const std::string& s) {
    if (s == "modular") return PipelineMode::modular;
    if (s == "monolithic") return PipelineMode::monolithic;
    bad_enum("pipeline mode", s);
}

RunStatus run_status_from(const std::string& s) {
    if (s == "succeeded") return RunStatus::succeeded;
    if (s == "failed") return RunStatus::failed;
    bad_enum("run status", s);
}

AgentRole role_for_kind(TaskKind k) {
    switch (k) {
        case TaskKind::plan: return AgentRole::Prefrontal;
        case TaskKind::data_structures: return AgentRole::Parietal;
        case TaskKind::logic_review: return AgentRole::Temporal;
        case TaskKind::implement: return AgentRole::Motor;
        case TaskKind::integrate: return AgentRole::Orchestrator;
        case TaskKind::monolith: return AgentRole::Monolith;
    }
    fail("parse-error", "unmapped task kind");
}

ContentKind content_kind_for(TaskKind k) {
    switch (k) {
        case TaskKind::plan: return ContentKind::plan;
        case TaskKind::data_structures: return ContentKind::schema;
        case TaskKind::logic_review: return ContentKind::review;
        case TaskKind::implement: return ContentKind::code;
        case TaskKind::integrate: return ContentKind::integrated_code;
        case TaskKind::monolith: return ContentKind::integrated_code;
    }
    fail("parse-error", "unmapped task kind");
}

bool CheckSpec::applies(ContentKind kind) const {
    if (applies_to.empty()) {
        return kind == ContentKind::integrated_code;
    }
    return std::find(applies_to.begin(), applies_to.end(), kind) != applies_to.end();
}

Task make_task(std::string task_id, TaskKind kind, std::string description,
               std::set<std::string> deps, int max_attempts) {
    if (task_id.empty()) {
        fail("invalid-task", "task_id must be non-empty");
    }
    if (deps.count(task_id) != 0) {
        fail("invalid-task", "task \"" + task_id + "\" depends on itself");
    }
    if (max_attempts < 1) {
        fail("invalid-task", "max_attempts must be positive");
    }
    Task t;
    t.task_id = std::move(task_id);
    t.kind = kind;
    t.role = role_for_kind(kind);
    t.description = std::move(description);
    t.deps = std::move(deps);
    t.max_attempts = max_attempts;
    return t;
}

bool ValidationReport::all_passed() const {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed; });
}

int ValidationReport::passed_count() const {
    return static_cast<int>(std::count_if(results.begin(), results.end(),
                                          [](const CheckResult& r) { return r.passed; }));
}

void TaskGraph::add(Task task) {
    if (task.task_id.empty()) {
        fail("invalid-task", "task_id must be non-empty");
    }
    if (contains(task.task_id)) {
        fail("duplicate-id", "task \"" + task.task_id + "\" already in graph");
    }
    order_.push_back(task.task_id);
    nodes_.emplace(task.task_id, std::move(task));
}

bool TaskGraph::contains(const std::string& task_id) const {
    return nodes_.count(task_id) != 0;
}

const Task& TaskGraph::at(const std::string& task_id) const {
    auto it = nodes_.find(task_id);
    if (it == nodes_.end()) {
        fail("dangling-dependency", "task \"" + task_id + "\" not in graph");
    }
    return it->second;
}

Task& TaskGraph::at(const std::string& task_id) {
    auto it = nodes_.find(task_id);
    if (it == nodes_.end()) {
        fail("dangling-dependency", "task \"" + task_id + "\" not in graph");
    }
    return it->second;
}

std::size_t TaskGraph::index_of(const std::string& task_id) const {
    for (std::size_t i = 0; i < order_.size(); ++i) {
        if (order_[i] == task_id) return i;
    }
    fail("dangling-dependency", "task \"" + task_id + "\" not in graph");
}

bool TaskGraph::operator==(const TaskGraph& other) const {
    if (order_ != other.order_) return false;
    for (const auto& id : order_) {
        if (!(nodes_.at(id) == other.nodes_.at(id))) return false;
    }
    return true;
}

} // namespace cortexc
