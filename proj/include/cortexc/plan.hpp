#pragma once

#include <string>
#include <vector>

#include "cortexc/types.hpp"

namespace cortexc {

// One subtask parsed from a planner response.
struct PlanEntry {
    std::string id;
    TaskKind kind = TaskKind::implement;
    std::string description;
    std::vector<std::string> depends_on;

    bool operator==(const PlanEntry&) const = default;
};

// Parses the planner's raw text. The text must contain a JSON object with key
// "subtasks": a list of {id, kind, description, depends_on}; kinds are
// restricted to data_structures / logic_review / implement and ids must be
// unique. Throws Error("malformed-plan"), Error("unknown-kind") or
// Error("duplicate-id").
std::vector<PlanEntry> parse_plan(const std::string& raw_text);

} // namespace cortexc
