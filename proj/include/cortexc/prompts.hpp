#pragma once

#include <map>
#include <string>

#include "cortexc/types.hpp"

namespace cortexc {

// Per-role prompt template. Recognized placeholders: {description}, {plan},
// {schema}, {review}, {failure_summary}. {description} comes from the task;
// {plan}/{schema}/{review} resolve against the board view by key suffix
// ("<task_id>/plan" etc.); {failure_summary} resolves from the reserved
// board-view key "failure_summary" and substitutes empty when absent.
struct PromptTemplate {
    AgentRole role = AgentRole::Motor;
    std::string text;
};

const std::map<AgentRole, PromptTemplate>& default_templates();

// Single-pass substitution: placeholders are replaced exactly once and
// substituted values are never re-scanned, so braces inside task
// descriptions or artifacts pass through verbatim.
// Throws Error("missing-context") naming the absent key.
std::string render_prompt(const PromptTemplate& tmpl, const Task& task,
                          const std::map<std::string, std::string>& board_view);

std::string render_prompt(AgentRole role, const Task& task,
                          const std::map<std::string, std::string>& board_view);

} // namespace cortexc
