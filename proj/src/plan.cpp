#include "cortexc/plan.hpp"

#include <set>

#include <json.hpp>

namespace cortexc {

namespace {

// Balanced {...} starting at `start`, honoring string literals and escapes
// so braces inside descriptions do not confuse the scan.
std::string balanced_object_at(const std::string& text, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            --depth;
            if (depth == 0) return text.substr(start, i - start + 1);
        }
    }
    return {};
}

// Finds the plan object: candidate braces are tried in order until one is a
// parseable object with a "subtasks" list. Stray braces in surrounding prose
// are skipped over.
nlohmann::json extract_plan_object(const std::string& text) {
    for (std::size_t pos = text.find('{'); pos != std::string::npos;
         pos = text.find('{', pos + 1)) {
        std::string candidate = balanced_object_at(text, pos);
        if (candidate.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(candidate, nullptr, false);
        if (j.is_object() && j.contains("subtasks") && j.at("subtasks").is_array()) {
            return j;
        }
    }
    return nlohmann::json();
}

} // namespace

std::vector<PlanEntry> parse_plan(const std::string& raw_text) {
    nlohmann::json j = extract_plan_object(raw_text);
    if (!j.is_object()) {
        fail("malformed-plan", "no JSON object with a \"subtasks\" list in planner output");
    }

    std::vector<PlanEntry> entries;
    std::set<std::string> seen;
    for (const auto& s : j.at("subtasks")) {
        if (!s.is_object() || !s.contains("id") || !s.contains("kind") ||
            !s.contains("description") || !s.at("id").is_string() ||
            !s.at("kind").is_string() || !s.at("description").is_string()) {
            fail("malformed-plan", "subtask must have string id, kind and description");
        }
        PlanEntry e;
        e.id = s.at("id").get<std::string>();
        if (e.id.empty()) {
            fail("malformed-plan", "subtask id must be non-empty");
        }
        std::string kind = s.at("kind").get<std::string>();
        if (kind == "data_structures") {
            e.kind = TaskKind::data_structures;
        } else if (kind == "logic_review") {
            e.kind = TaskKind::logic_review;
        } else if (kind == "implement") {
            e.kind = TaskKind::implement;
        } else {
            fail("unknown-kind", "subtask \"" + e.id + "\" has kind \"" + kind + "\"");
        }
        e.description = s.at("description").get<std::string>();
        if (s.contains("depends_on")) {
            if (!s.at("depends_on").is_array()) {
                fail("malformed-plan", "depends_on of \"" + e.id + "\" must be a list");
            }
            for (const auto& d : s.at("depends_on")) {
                if (!d.is_string()) {
                    fail("malformed-plan", "depends_on of \"" + e.id + "\" must hold strings");
                }
                e.depends_on.push_back(d.get<std::string>());
            }
        }
        if (!seen.insert(e.id).second) {
            fail("duplicate-id", "subtask id \"" + e.id + "\" appears twice");
        }
        entries.push_back(std::move(e));
    }
    if (entries.empty()) {
        fail("malformed-plan", "planner produced an empty subtask list");
    }
    return entries;
}

} // namespace cortexc
