#include "cortexc/graph.hpp"

#include <algorithm>

namespace cortexc {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// Iterative DFS cycle search over dependency edges (task -> its deps).
// Returns one cycle as a task-id path when found.
std::vector<std::string> find_cycle(const TaskGraph& graph) {
    enum class Mark { white, grey, black };
    std::unordered_map<std::string, Mark> mark;
    for (const auto& id : graph.order()) mark[id] = Mark::white;

    std::vector<std::string> path;
    for (const auto& root : graph.order()) {
        if (mark[root] != Mark::white) continue;
        // stack of (id, expanded?)
        std::vector<std::pair<std::string, bool>> stack{{root, false}};
        while (!stack.empty()) {
            auto& [id, expanded] = stack.back();
            if (!expanded) {
                expanded = true;
                mark[id] = Mark::grey;
                path.push_back(id);
                for (const auto& dep : graph.at(id).deps) {
                    if (!graph.contains(dep)) continue; // dangling handled separately
                    if (mark[dep] == Mark::grey) {
                        // close the loop: cycle runs from dep's position in path
                        auto it = std::find(path.begin(), path.end(), dep);
                        return std::vector<std::string>(it, path.end());
                    }
                    if (mark[dep] == Mark::white) {
                        stack.emplace_back(dep, false);
                    }
                }
            } else {
                mark[id] = Mark::black;
                path.pop_back();
                stack.pop_back();
            }
        }
    }
    return {};
}

} // namespace

void validate_graph(const TaskGraph& graph) {
    for (const auto& id : graph.order()) {
        const Task& t = graph.at(id);
        for (const auto& dep : t.deps) {
            if (dep == id) {
                fail("cycle", "cycle: [" + id + "]");
            }
            if (!graph.contains(dep)) {
                fail("dangling-dependency",
                     "task \"" + id + "\" depends on missing \"" + dep + "\"");
            }
        }
        if (t.role != role_for_kind(t.kind)) {
            fail("role-mismatch", "task \"" + id + "\" of kind " + to_string(t.kind) +
                                      " must have role " + to_string(role_for_kind(t.kind)) +
                                      ", has " + to_string(t.role));
        }
    }
    auto cycle = find_cycle(graph);
    if (!cycle.empty()) {
        fail("cycle", "cycle: [" + join(cycle, " -> ") + "]");
    }
}

std::vector<std::string> topo_order(const TaskGraph& graph) {
    std::unordered_map<std::string, std::size_t> indegree;
    for (const auto& id : graph.order()) {
        std::size_t n = 0;
        for (const auto& dep : graph.at(id).deps) {
            if (graph.contains(dep)) ++n;
        }
        indegree[id] = n;
    }
    std::vector<std::string> out;
    out.reserve(graph.size());
    std::vector<bool> emitted(graph.size(), false);
    while (out.size() < graph.size()) {
        bool progressed = false;
        for (std::size_t i = 0; i < graph.order().size(); ++i) {
            const auto& id = graph.order()[i];
            if (emitted[i] || indegree[id] != 0) continue;
            emitted[i] = true;
            out.push_back(id);
            progressed = true;
            for (const auto& other : graph.order()) {
                if (graph.at(other).deps.count(id)) {
                    --indegree[other];
                }
            }
        }
        if (!progressed) {
            auto cycle = find_cycle(graph);
            fail("cycle", "cycle: [" + join(cycle, " -> ") + "]");
        }
    }
    return out;
}

std::unordered_map<std::string, std::vector<std::string>> dependents_of(const TaskGraph& graph) {
    std::unordered_map<std::string, std::vector<std::string>> out;
    for (const auto& id : graph.order()) out[id] = {};
    for (const auto& id : graph.order()) {
        for (const auto& dep : graph.at(id).deps) {
            if (graph.contains(dep)) out[dep].push_back(id);
        }
    }
    return out;
}

} // namespace cortexc
