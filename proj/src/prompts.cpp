#include "cortexc/prompts.hpp"

namespace cortexc {

namespace {

const char* kPlanFormatHint =
    "Respond with exactly one JSON object of the form "
    "{\"subtasks\":[{\"id\":\"...\",\"kind\":\"data_structures|logic_review|implement\","
    "\"description\":\"...\",\"depends_on\":[\"...\"]}]}.";

std::map<AgentRole, PromptTemplate> build_defaults() {
    std::map<AgentRole, PromptTemplate> t;
    t[AgentRole::Prefrontal] = {AgentRole::Prefrontal,
        "Generate a high-level design for {description}. The design should "
        "break the objective into subtasks for data structure organization, "
        "logic review, and implementation, with dependencies between them. " +
        std::string(kPlanFormatHint) + "\n{failure_summary}"};
    t[AgentRole::Parietal] = {AgentRole::Parietal,
        "Organize the data structures for {description}. Ensure the data is "
        "logically structured and efficient to access. Base the layout on this plan:\n"
        "{plan}\n{failure_summary}"};
    t[AgentRole::Temporal] = {AgentRole::Temporal,
        "Ensure logical consistency in {description}. Verify the flow of "
        "operations and list the checks that must hold, following this plan:\n"
        "{plan}\n{failure_summary}"};
    t[AgentRole::Motor] = {AgentRole::Motor,
        "Implement the {description}. Produce working code that follows the "
        "plan, the data structure layout, and the review notes below.\n"
        "Plan:\n{plan}\nData structures:\n{schema}\nReview notes:\n{review}\n"
        "{failure_summary}"};
    t[AgentRole::Monolith] = {AgentRole::Monolith,
        "Write a complete, working implementation of {description}. Include "
        "all necessary components in a single response.\n{failure_summary}"};
    t[AgentRole::Orchestrator] = {AgentRole::Orchestrator,
        "Integrate the validated components for {description}.\n{failure_summary}"};
    return t;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Resolves a context placeholder ("plan", "schema", "review") against the
// board view: an exact key match or the lexicographically smallest key with
// suffix "/<name>".
const std::string* find_context(const std::map<std::string, std::string>& board_view,
                                const std::string& name) {
    auto exact = board_view.find(name);
    if (exact != board_view.end()) return &exact->second;
    for (const auto& [key, value] : board_view) { // std::map: keys in order
        if (ends_with(key, "/" + name)) return &value;
    }
    return nullptr;
}

} // namespace

const std::map<AgentRole, PromptTemplate>& default_templates() {
    static const std::map<AgentRole, PromptTemplate> templates = build_defaults();
    return templates;
}

std::string render_prompt(const PromptTemplate& tmpl, const Task& task,
                          const std::map<std::string, std::string>& board_view) {
    const std::string& text = tmpl.text;
    std::string out;
    out.reserve(text.size() + task.description.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '{') {
            out += text[i++];
            continue;
        }
        std::size_t close = text.find('}', i + 1);
        std::string name = close == std::string::npos ? "" : text.substr(i + 1, close - i - 1);
        if (name == "description") {
            out += task.description;
        } else if (name == "failure_summary") {
            auto it = board_view.find("failure_summary");
            if (it != board_view.end()) out += it->second;
        } else if (name == "plan" || name == "schema" || name == "review") {
            const std::string* value = find_context(board_view, name);
            if (value == nullptr) {
                fail("missing-context", "task \"" + task.task_id + "\" (" +
                                            to_string(tmpl.role) + ") has no \"*/" + name +
                                            "\" entry in its context");
            }
            out += *value;
        } else {
            // not one of ours: emit verbatim and keep scanning after '{'
            out += text[i];
            ++i;
            continue;
        }
        i = close + 1;
    }
    return out;
}

std::string render_prompt(AgentRole role, const Task& task,
                          const std::map<std::string, std::string>& board_view) {
    return render_prompt(default_templates().at(role), task, board_view);
}

} // namespace cortexc
