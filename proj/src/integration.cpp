#include "cortexc/integration.hpp"

#include <algorithm>
#include <csignal>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "cortexc/graph.hpp"
#include "cortexc/json_io.hpp"

namespace cortexc {

namespace fs = std::filesystem;

namespace {

constexpr int kCommandTimeoutMs = 30000;

void ignore_sigpipe_once() {
    static std::once_flag flag;
    std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

// Latest artifact per task (list order is append order, so last wins).
std::unordered_map<std::string, const Artifact*> latest_by_task(
    const std::vector<Artifact>& artifacts) {
    std::unordered_map<std::string, const Artifact*> latest;
    for (const auto& a : artifacts) {
        latest[a.task_id] = &a;
    }
    return latest;
}

std::string comment_prefixed(const std::string& text) {
    std::string out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos
                                                                    : nl - pos);
        if (nl == std::string::npos && line.empty()) break;
        out += "# " + line + "\n";
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return out;
}

} // namespace

std::pair<int, std::string> run_command_with_input(const std::string& command,
                                                   const std::string& input,
                                                   const std::string& task_id_arg,
                                                   int timeout_ms) {
    ignore_sigpipe_once();

    int in_pipe[2];
    if (::pipe(in_pipe) != 0) {
        return {-1, std::string("pipe failed: ") + std::strerror(errno)};
    }

    pid_t pid = ::fork();
    if (pid < 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        return {-1, std::string("fork failed: ") + std::strerror(errno)};
    }
    if (pid == 0) {
        // child: stdin from pipe; the command runs verbatim with the task id
        // bound to its positional parameter $1
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), "sh", task_id_arg.c_str(),
                static_cast<char*>(nullptr));
        _exit(127);
    }

    ::close(in_pipe[0]);
    // Non-blocking write so a child that never reads cannot wedge us.
    ::fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);

    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    std::size_t written = 0;
    bool write_open = true;
    int status = 0;
    bool reaped = false;

    while (true) {
        if (write_open && written < input.size()) {
            ssize_t n = ::write(in_pipe[1], input.data() + written, input.size() - written);
            if (n > 0) {
                written += static_cast<std::size_t>(n);
            } else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK) {
                write_open = false; // child closed its end; stop feeding
            }
        }
        if (write_open && written >= input.size()) {
            ::close(in_pipe[1]);
            write_open = false;
        }

        pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) {
            reaped = true;
            break;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }

    if (write_open) ::close(in_pipe[1]);
    if (!reaped) {
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        return {-1, "timeout after " + std::to_string(timeout_ms) + " ms"};
    }
    if (WIFEXITED(status)) {
        int code = WEXITSTATUS(status);
        return {code, "exit status " + std::to_string(code)};
    }
    if (WIFSIGNALED(status)) {
        return {-1, "killed by signal " + std::to_string(WTERMSIG(status))};
    }
    return {-1, "unknown wait status"};
}

ValidationReport validate_artifact(const Artifact& artifact,
                                   const std::vector<CheckSpec>& checks,
                                   const ScriptTable& scripts) {
    ValidationReport report;
    report.artifact_id = artifact.artifact_id;
    for (const auto& check : checks) {
        if (!check.applies(artifact.content_kind)) continue;
        CheckResult result;
        result.check_name = check.name;
        switch (check.method) {
            case CheckMethod::contains_text: {
                result.passed = artifact.content.find(check.argument) != std::string::npos;
                result.detail = result.passed
                                    ? "substring found"
                                    : "substring \"" + check.argument + "\" not found";
                break;
            }
            case CheckMethod::external_command: {
                auto [code, detail] =
                    run_command_with_input(check.argument, artifact.content,
                                           artifact.task_id, kCommandTimeoutMs);
                result.passed = code == 0;
                result.detail = detail;
                break;
            }
            case CheckMethod::scripted: {
                auto it = scripts.find(check.name);
                if (it == scripts.end()) {
                    result.passed = false;
                    result.detail = "no script registered for \"" + check.name + "\"";
                } else {
                    auto [passed, detail] = it->second(artifact);
                    result.passed = passed;
                    result.detail = detail;
                }
                break;
            }
        }
        report.results.push_back(std::move(result));
    }
    return report;
}

Artifact integrate(const std::vector<Artifact>& artifacts, const TaskGraph& graph) {
    auto latest = latest_by_task(artifacts);
    auto order = topo_order(graph);

    std::string integrate_task_id;
    std::string content;
    for (const auto& id : order) {
        const Task& task = graph.at(id);
        if (task.kind == TaskKind::integrate) {
            integrate_task_id = id;
            continue;
        }
        if (task.status != TaskStatus::done) continue;
        auto it = latest.find(id);
        if (it == latest.end()) {
            fail("missing-artifact", "no artifact for done task \"" + id + "\"");
        }
        const Artifact& a = *it->second;
        content += "=== " + id + " (" + to_string(task.role) + ") ===\n";
        if (a.content_kind == ContentKind::plan || a.content_kind == ContentKind::review) {
            content += comment_prefixed(a.content);
        } else {
            content += a.content;
            if (!a.content.empty() && a.content.back() != '\n') content += "\n";
        }
        content += "\n";
    }

    Artifact out;
    out.task_id = integrate_task_id;
    out.role = AgentRole::Orchestrator;
    out.content = content;
    out.content_kind = ContentKind::integrated_code;
    return out;
}

FailureSummary build_feedback(const Task& task, const ValidationReport& report) {
    FailureSummary summary;
    summary.task_id = task.task_id;
    summary.attempt = task.attempts;
    for (const auto& r : report.results) {
        if (!r.passed) summary.failed_checks.emplace_back(r.check_name, r.detail);
    }
    if (summary.failed_checks.empty()) {
        fail("no-failures", "report for artifact \"" + report.artifact_id +
                                "\" has no failed checks");
    }
    return summary;
}

std::string format_failure_summary(const FailureSummary& summary) {
    std::string out = "Previous attempt " + std::to_string(summary.attempt) +
                      " of task \"" + summary.task_id + "\" failed these checks:\n";
    for (const auto& [name, detail] : summary.failed_checks) {
        out += "- " + name + ": " + detail + "\n";
    }
    out += "Fix the listed problems and produce the output again.";
    return out;
}

void write_run_outputs(const PipelineRun& run, const std::string& base_dir) {
    fs::path dir = fs::path(base_dir) / "out" / run.run_id;
    fs::create_directories(dir);
    auto latest = latest_by_task(run.artifacts);
    for (const auto& id : run.graph.order()) {
        auto it = latest.find(id);
        if (it == latest.end()) continue;
        const Artifact& a = *it->second;
        if (a.content_kind == ContentKind::integrated_code) {
            write_file((dir / "integrated.txt").string(), a.content);
        }
        write_file((dir / (id + ".txt")).string(), a.content);
    }
}

} // namespace cortexc
