#include "cortexc/status.hpp"

namespace cortexc {

const char* to_string(TaskEvent e) {
    switch (e) {
        case TaskEvent::deps_met: return "deps_met";
        case TaskEvent::dispatched: return "dispatched";
        case TaskEvent::completed: return "completed";
        case TaskEvent::check_failed_retry: return "check_failed_retry";
        case TaskEvent::exhausted: return "exhausted";
    }
    return "?";
}

namespace {

[[noreturn]] void illegal(const Task& task, TaskEvent event, const std::string& why = {}) {
    std::string msg = "task \"" + task.task_id + "\": event " + to_string(event) +
                      " not legal in status " + to_string(task.status);
    if (!why.empty()) msg += " (" + why + ")";
    fail("illegal-transition", msg);
}

} // namespace

Task transition(const Task& task, TaskEvent event) {
    Task next = task;
    switch (event) {
        case TaskEvent::deps_met:
            if (task.status != TaskStatus::pending) illegal(task, event);
            next.status = TaskStatus::ready;
            return next;
        case TaskEvent::dispatched:
            if (task.status != TaskStatus::ready) illegal(task, event);
            if (task.attempts >= task.max_attempts) {
                illegal(task, event, "attempts already at max_attempts");
            }
            next.status = TaskStatus::running;
            next.attempts = task.attempts + 1;
            return next;
        case TaskEvent::completed:
            if (task.status != TaskStatus::running) illegal(task, event);
            next.status = TaskStatus::done;
            return next;
        case TaskEvent::check_failed_retry:
            if (task.status != TaskStatus::running) illegal(task, event);
            if (task.attempts >= task.max_attempts) {
                illegal(task, event, "attempts exhausted, use exhausted");
            }
            next.status = TaskStatus::ready;
            return next;
        case TaskEvent::exhausted:
            if (task.status != TaskStatus::running) illegal(task, event);
            next.status = TaskStatus::failed;
            return next;
    }
    illegal(task, event);
}

} // namespace cortexc
