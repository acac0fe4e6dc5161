#pragma once

#include <string>
#include <vector>

#include "cortexc/types.hpp"

namespace cortexc {

// Structural validation: every dependency resolves, no self-dependency, the
// graph is acyclic, and each task's role matches its kind. Throws
// Error("dangling-dependency") naming the missing id, Error("cycle") listing
// one cycle, or Error("role-mismatch").
void validate_graph(const TaskGraph& graph);

// Topological order with insertion-order tie-breaking among ready nodes.
// Throws Error("cycle") when the graph is cyclic.
std::vector<std::string> topo_order(const TaskGraph& graph);

// Reverse adjacency: for each task, the ids of tasks that depend on it.
std::unordered_map<std::string, std::vector<std::string>> dependents_of(const TaskGraph& graph);

} // namespace cortexc
