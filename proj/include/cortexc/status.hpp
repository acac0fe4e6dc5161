#pragma once

#include "cortexc/types.hpp"

namespace cortexc {

enum class TaskEvent { deps_met, dispatched, completed, check_failed_retry, exhausted };

const char* to_string(TaskEvent e);

// Applies one status-machine event and returns the updated task.
//   pending --deps_met--> ready --dispatched--> running
//   running --completed--> done
//   running --check_failed_retry--> ready      (only while attempts < max_attempts)
//   running --exhausted--> failed
// `dispatched` is the only event that increments attempts.
// Throws Error("illegal-transition") naming the offending (status, event).
Task transition(const Task& task, TaskEvent event);

} // namespace cortexc
