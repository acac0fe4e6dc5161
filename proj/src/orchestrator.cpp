#include "cortexc/orchestrator.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "cortexc/clock.hpp"
#include "cortexc/graph.hpp"
#include "cortexc/prompts.hpp"
#include "cortexc/status.hpp"

namespace cortexc {

namespace {

constexpr const char* kCoordinatorId = "orchestrator";
constexpr int kCoordinatorReceiveTimeoutMs = 120000;

const std::vector<ContentKind> kAllContentKinds = {
    ContentKind::plan, ContentKind::schema, ContentKind::review,
    ContentKind::code, ContentKind::integrated_code};

std::string format_reminder() {
    return "The previous response could not be parsed. Respond with exactly one "
           "JSON object of the form {\"subtasks\":[{\"id\":\"...\",\"kind\":"
           "\"data_structures|logic_review|implement\",\"description\":\"...\","
           "\"depends_on\":[\"...\"]}]} and nothing else.";
}

// ---------------------------------------------------------------------------
// worker pool: up to concurrency_limit threads invoking the backend; results
// are stashed by task id and signalled to the coordinator over the bus.

struct WorkerJob {
    Task task;
    std::string agent_id;
    std::string prompt;
};

class WorkerPool {
public:
    WorkerPool(int size, Backend& backend, MessageBus& bus)
        : backend_(backend), bus_(bus) {
        for (int i = 0; i < size; ++i) {
            threads_.emplace_back([this] { worker_loop(); });
        }
    }

    ~WorkerPool() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            stopping_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    void submit(WorkerJob job) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            jobs_.push_back(std::move(job));
        }
        cv_.notify_one();
    }

    AgentOutput take_output(const std::string& task_id) {
        std::lock_guard<std::mutex> lock(out_mu_);
        auto it = outputs_.find(task_id);
        AgentOutput out = std::move(it->second);
        outputs_.erase(it);
        return out;
    }

private:
    void worker_loop() {
        while (true) {
            WorkerJob job;
            {
                std::unique_lock<std::mutex> lock(mu_);
                cv_.wait(lock, [this] { return stopping_ || !jobs_.empty(); });
                if (stopping_ && jobs_.empty()) return;
                job = std::move(jobs_.front());
                jobs_.pop_front();
            }
            // pick up the assign notice addressed to this agent
            (void)bus_.receive(job.agent_id, 5000);

            AgentOutput out;
            try {
                out = backend_.invoke(InvokeRequest{job.prompt, job.task});
            } catch (const std::exception& e) {
                out.ok = false;
                out.error_detail = std::string("backend exception: ") + e.what();
            }
            {
                std::lock_guard<std::mutex> lock(out_mu_);
                outputs_[job.task.task_id] = out;
            }
            Message signal;
            signal.sender = job.agent_id;
            signal.recipient = kCoordinatorId;
            signal.kind = out.ok ? MessageKind::result : MessageKind::error;
            signal.task_id = job.task.task_id;
            signal.payload = nlohmann::json{{"ok", out.ok},
                                            {"latency_ms", out.latency_ms}}.dump();
            bus_.send(std::move(signal));
        }
    }

    Backend& backend_;
    MessageBus& bus_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<WorkerJob> jobs_;
    bool stopping_ = false;
    std::mutex out_mu_;
    std::unordered_map<std::string, AgentOutput> outputs_;
    std::vector<std::thread> threads_;
};

// ---------------------------------------------------------------------------

struct Engine {
    Engine(const TaskSpec& spec_in, const OrchestratorConfig& config_in, Backend& backend_in,
           MessageBus& bus_in, Blackboard& board_in, EventSink sink_in)
        : spec(spec_in), config(config_in), backend(backend_in), bus(bus_in),
          board(board_in), sink(std::move(sink_in)) {}

    const TaskSpec& spec;
    const OrchestratorConfig& config;
    Backend& backend;
    MessageBus& bus;
    Blackboard& board;
    EventSink sink;

    PipelineRun run;
    std::vector<AgentProfile> pool;
    std::unordered_map<std::string, std::string> failure_summaries;
    std::unordered_map<std::string, std::string> agent_of; // task -> dispatch agent
    std::set<std::string> format_reprompted;               // plan tasks already reminded once
    int running = 0;
    bool fail_fast = false;

    void emit(const std::string& event, const std::string& task_id,
              const std::string& agent_id, const std::string& detail) {
        if (sink) sink(RunEvent{now_ms(), event, task_id, agent_id, detail});
    }

    AgentProfile* profile_of(const std::string& agent_id) {
        for (auto& p : pool) {
            if (p.agent_id == agent_id) return &p;
        }
        return nullptr;
    }

    void refresh_priorities() {
        auto prio = compute_priorities(run.graph);
        for (const auto& id : run.graph.order()) {
            run.graph.at(id).priority = prio.at(id);
        }
    }

    std::map<std::string, std::string> board_view_for(const Task& task) {
        std::map<std::string, std::string> view;
        auto snap = board.snapshot();
        std::set<ContentKind> provided;
        for (const auto& dep : task.deps) {
            if (run.graph.contains(dep)) {
                provided.insert(content_kind_for(run.graph.at(dep).kind));
            }
            for (ContentKind kind : kAllContentKinds) {
                auto it = snap.find(dep + "/" + to_string(kind));
                if (it != snap.end()) view[it->first] = it->second.value;
            }
        }
        // context kinds no dependency produces render as empty sections; a
        // producing dependency whose artifact is absent stays a hard error
        for (ContentKind kind : {ContentKind::plan, ContentKind::schema, ContentKind::review}) {
            if (provided.count(kind) == 0) view[to_string(kind)] = "";
        }
        auto fs = failure_summaries.find(task.task_id);
        if (fs != failure_summaries.end()) view["failure_summary"] = fs->second;
        return view;
    }

    bool all_terminal() const {
        for (const auto& id : run.graph.order()) {
            if (!run.graph.at(id).terminal()) return false;
        }
        return true;
    }

    void record_fatal(const std::string& task_id, const std::string& detail) {
        emit("failed", task_id, "", detail);
        fail_fast = true;
    }

    // Retry with feedback or mark failed. A format failure (unparseable plan)
    // is retried at most once regardless of the attempt budget.
    void retry_or_exhaust(const std::string& task_id, const std::string& summary,
                          bool format_failure) {
        Task& t = run.graph.at(task_id);
        bool format_budget_left = !format_failure || format_reprompted.count(task_id) == 0;
        if (t.attempts < t.max_attempts && format_budget_left) {
            t = transition(t, TaskEvent::check_failed_retry);
            failure_summaries[task_id] = summary;
            if (format_failure) format_reprompted.insert(task_id);
            emit("retried", task_id, agent_of.count(task_id) ? agent_of[task_id] : "",
                 "attempt " + std::to_string(t.attempts) + " failed: " + summary);
        } else {
            t = transition(t, TaskEvent::exhausted);
            emit("failed", task_id, agent_of.count(task_id) ? agent_of[task_id] : "",
                 "attempts exhausted (" + std::to_string(t.attempts) + "): " + summary);
            fail_fast = true;
        }
    }

    Artifact store_artifact(const Task& task, const std::string& content,
                            const std::string& writer) {
        Artifact a;
        a.artifact_id = task.task_id + "#" + std::to_string(task.attempts);
        a.task_id = task.task_id;
        a.role = task.role;
        a.content = content;
        a.content_kind = content_kind_for(task.kind);
        a.created_at_ms = now_ms();
        board.write(task.task_id + "/" + to_string(a.content_kind), content, writer);
        run.artifacts.push_back(a);
        return a;
    }

    // Validates, records the report, and either completes the task or feeds
    // the retry loop. Returns true when the artifact was accepted.
    bool accept_or_retry(const Task& task, const Artifact& artifact) {
        ValidationReport report = validate_artifact(artifact, spec.checks, config.scripts);

        bool format_failure = false;
        std::vector<PlanEntry> entries;
        if (task.kind == TaskKind::plan && report.all_passed()) {
            try {
                entries = parse_plan(artifact.content);
            } catch (const Error& e) {
                report.results.push_back(CheckResult{"plan-format", false, e.what()});
                format_failure = true;
            }
        }
        run.reports.push_back(report);

        if (!report.all_passed()) {
            std::string summary =
                format_failure
                    ? format_reminder()
                    : format_failure_summary(build_feedback(task, report));
            retry_or_exhaust(task.task_id, summary, format_failure);
            return false;
        }

        Task& t = run.graph.at(task.task_id);
        t = transition(t, TaskEvent::completed);
        emit("completed", task.task_id, agent_of.count(task.task_id) ? agent_of[task.task_id] : "",
             "artifact " + artifact.artifact_id);

        if (task.kind == TaskKind::plan) {
            try {
                expand_with_plan(run.graph, task.task_id, entries, config.max_attempts);
                refresh_priorities();
            } catch (const Error& e) {
                record_fatal(task.task_id, std::string("graph-invalid: ") + e.what());
                return false;
            }
        }
        return true;
    }

    // The integrate task runs on the coordinator itself.
    void dispatch_integrate(const std::string& task_id) {
        Task& t = run.graph.at(task_id);
        t = transition(t, TaskEvent::dispatched);
        emit("dispatched", task_id, kCoordinatorId,
             "attempt " + std::to_string(t.attempts));
        agent_of[task_id] = kCoordinatorId;

        Message notice;
        notice.sender = kCoordinatorId;
        notice.recipient = kCoordinatorId;
        notice.kind = MessageKind::assign;
        notice.task_id = task_id;
        bus.send(std::move(notice));

        Task snapshot = run.graph.at(task_id);
        try {
            Artifact merged = integrate(run.artifacts, run.graph);
            merged.artifact_id = task_id + "#" + std::to_string(snapshot.attempts);
            merged.created_at_ms = now_ms();
            board.write(task_id + "/integrated_code", merged.content, kCoordinatorId);
            run.artifacts.push_back(merged);
            accept_or_retry(snapshot, merged);
        } catch (const Error& e) {
            retry_or_exhaust(task_id, e.what(), false);
        }
    }

    // Returns true when it made synchronous progress (an integrate dispatch),
    // so the caller re-evaluates instead of treating running==0 as a stall.
    bool dispatch_ready(WorkerPool& workers) {
        bool sync_progress = false;
        // promote pending tasks whose dependencies are all done
        for (const auto& id : ready_set(run.graph)) {
            Task& t = run.graph.at(id);
            if (t.status == TaskStatus::pending) {
                t = transition(t, TaskEvent::deps_met);
            }
        }

        std::vector<std::string> candidates;
        for (const auto& id : run.graph.order()) {
            if (run.graph.at(id).status == TaskStatus::ready) candidates.push_back(id);
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [this](const std::string& a, const std::string& b) {
                             int pa = run.graph.at(a).priority;
                             int pb = run.graph.at(b).priority;
                             if (pa != pb) return pa > pb;
                             return run.graph.index_of(a) < run.graph.index_of(b);
                         });

        for (const auto& id : candidates) {
            if (fail_fast) break;
            Task task = run.graph.at(id);
            if (task.kind == TaskKind::integrate) {
                dispatch_integrate(id);
                sync_progress = true;
                continue;
            }
            if (running >= config.concurrency_limit) break;

            std::optional<std::string> agent;
            std::string prompt;
            try {
                agent = assign(task, pool);
                if (!agent) continue; // all matching agents busy: wait
                prompt = render_prompt(task.role, task, board_view_for(task));
                Message notice;
                notice.sender = kCoordinatorId;
                notice.recipient = *agent;
                notice.kind = MessageKind::assign;
                notice.task_id = id;
                notice.payload = prompt;
                bus.send(std::move(notice));
            } catch (const Error& e) {
                record_fatal(id, e.what());
                break;
            }

            Task& t = run.graph.at(id);
            t = transition(t, TaskEvent::dispatched);
            agent_of[id] = *agent;
            profile_of(*agent)->in_flight += 1;
            running += 1;
            emit("dispatched", id, *agent, "attempt " + std::to_string(t.attempts));
            workers.submit(WorkerJob{t, *agent, prompt});
        }
        return sync_progress;
    }

    void handle_result(const Message& msg, WorkerPool& workers) {
        const std::string& id = msg.task_id;
        AgentOutput out = workers.take_output(id);
        Task snapshot = run.graph.at(id);

        running -= 1;
        AgentProfile* profile = profile_of(msg.sender);
        if (profile) profile->in_flight -= 1;

        bool accepted = false;
        if (!out.ok) {
            FailureSummary fs;
            fs.task_id = id;
            fs.attempt = snapshot.attempts;
            fs.failed_checks.emplace_back("backend", out.error_detail);
            retry_or_exhaust(id, format_failure_summary(fs), false);
        } else {
            Artifact artifact = store_artifact(snapshot, out.raw_text, msg.sender);
            accepted = accept_or_retry(snapshot, artifact);
        }
        if (profile) {
            *profile = update_analytics(*profile, out.latency_ms, accepted, config.ema_alpha);
        }
    }

    PipelineRun execute(TaskGraph graph) {
        run.run_id = config.run_id;
        run.spec = spec;
        run.graph = std::move(graph);
        run.seed = config.seed;
        run.started_at_ms = now_ms();

        pool = config.agent_pool;
        bus.register_agent(kCoordinatorId);
        for (const auto& p : pool) bus.register_agent(p.agent_id);

        try {
            validate_graph(run.graph);
            refresh_priorities();
        } catch (const Error& e) {
            record_fatal("", std::string("graph-invalid: ") + e.what());
            finalize();
            return run;
        }

        {
            WorkerPool workers(config.concurrency_limit, backend, bus);
            while (true) {
                bool sync_progress = false;
                if (!fail_fast) sync_progress = dispatch_ready(workers);
                if (all_terminal()) break;
                if (sync_progress) continue;
                if (running == 0) {
                    if (!fail_fast) {
                        std::string blocked;
                        for (const auto& id : run.graph.order()) {
                            if (!run.graph.at(id).terminal()) {
                                if (!blocked.empty()) blocked += ", ";
                                blocked += id;
                            }
                        }
                        emit("stalled", "", "", "graph-stall: no runnable task among [" +
                                                    blocked + "]");
                        fail_fast = true;
                    }
                    break;
                }
                auto msg = bus.receive(kCoordinatorId, kCoordinatorReceiveTimeoutMs);
                if (!msg) {
                    emit("stalled", "", "", "coordinator receive timed out");
                    fail_fast = true;
                    break;
                }
                if (msg->kind == MessageKind::assign) continue; // own integrate notice
                if (msg->kind != MessageKind::result && msg->kind != MessageKind::error) {
                    continue;
                }
                try {
                    handle_result(*msg, workers);
                } catch (const Error& e) {
                    record_fatal(msg->task_id, e.what());
                }
            }
        }

        finalize();
        return run;
    }

    void finalize() {
        bool has_final = false;
        bool final_done = false;
        for (const auto& id : run.graph.order()) {
            const Task& t = run.graph.at(id);
            if (t.kind == TaskKind::integrate || t.kind == TaskKind::monolith) {
                has_final = true;
                final_done = t.status == TaskStatus::done;
            }
        }
        bool ok = has_final ? final_done : all_terminal() && !fail_fast;
        if (!has_final) {
            for (const auto& id : run.graph.order()) {
                if (run.graph.at(id).status != TaskStatus::done) ok = false;
            }
        }
        run.status = ok ? RunStatus::succeeded : RunStatus::failed;
        run.finished_at_ms = now_ms();
        sort_records();
    }

    // Deterministic record order: by task insertion index, then by attempt
    // (the in-run append order, preserved by stable_sort).
    void sort_records() {
        auto task_index = [this](const std::string& artifact_id) {
            auto pos = artifact_id.rfind('#');
            std::string task_id = pos == std::string::npos ? artifact_id
                                                           : artifact_id.substr(0, pos);
            return run.graph.contains(task_id) ? run.graph.index_of(task_id)
                                               : run.graph.size();
        };
        std::stable_sort(run.artifacts.begin(), run.artifacts.end(),
                         [&](const Artifact& a, const Artifact& b) {
                             return task_index(a.artifact_id) < task_index(b.artifact_id);
                         });
        std::stable_sort(run.reports.begin(), run.reports.end(),
                         [&](const ValidationReport& a, const ValidationReport& b) {
                             return task_index(a.artifact_id) < task_index(b.artifact_id);
                         });
    }
};

} // namespace

std::string event_to_json_line(const RunEvent& e) {
    return nlohmann::json{{"ts_ms", e.ts_ms},
                          {"event", e.event},
                          {"task_id", e.task_id},
                          {"agent_id", e.agent_id},
                          {"detail", e.detail}}.dump();
}

EventSink stderr_event_sink() {
    return [](const RunEvent& e) { std::fprintf(stderr, "%s\n", event_to_json_line(e).c_str()); };
}

EventSink file_event_sink(const std::string& path) {
    auto out = std::make_shared<std::ofstream>(path, std::ios::app);
    return [out](const RunEvent& e) { (*out) << event_to_json_line(e) << "\n"; };
}

EventSink collect_events(std::vector<RunEvent>& into) {
    auto mu = std::make_shared<std::mutex>();
    auto* vec = &into;
    return [mu, vec](const RunEvent& e) {
        std::lock_guard<std::mutex> lock(*mu);
        vec->push_back(e);
    };
}

std::map<std::string, int> compute_priorities(const TaskGraph& graph) {
    auto dependents = dependents_of(graph);
    std::map<std::string, int> prio;

    // process in reverse topological order so dependents are known first
    auto order = topo_order(graph);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int best = 0;
        for (const auto& d : dependents[*it]) {
            best = std::max(best, prio.at(d));
        }
        prio[*it] = best + 1;
    }
    return prio;
}

std::vector<std::string> ready_set(const TaskGraph& graph) {
    std::vector<std::string> out;
    for (const auto& id : graph.order()) {
        const Task& t = graph.at(id);
        if (t.status != TaskStatus::pending && t.status != TaskStatus::ready) continue;
        bool deps_done = true;
        for (const auto& dep : t.deps) {
            if (!graph.contains(dep) || graph.at(dep).status != TaskStatus::done) {
                deps_done = false;
                break;
            }
        }
        if (deps_done) out.push_back(id);
    }
    return out;
}

std::optional<std::string> assign(const Task& task, const std::vector<AgentProfile>& pool) {
    const AgentProfile* best = nullptr;
    bool role_present = false;
    for (const auto& p : pool) {
        if (p.role != task.role) continue;
        role_present = true;
        if (p.in_flight >= p.capacity) continue;
        if (best == nullptr ||
            std::tie(p.in_flight, p.ema_latency_ms, p.agent_id) <
                std::tie(best->in_flight, best->ema_latency_ms, best->agent_id)) {
            best = &p;
        }
    }
    if (!role_present) {
        fail("no-agent-for-role", "no agent with role " + std::string(to_string(task.role)) +
                                      " in pool (task \"" + task.task_id + "\")");
    }
    if (best == nullptr) return std::nullopt;
    return best->agent_id;
}

AgentProfile update_analytics(AgentProfile profile, double latency_ms, bool succeeded,
                              double alpha) {
    if (latency_ms < 0) {
        fail("invalid-argument", "latency_ms must be >= 0");
    }
    if (profile.completed == 0) {
        profile.ema_latency_ms = latency_ms;
    } else {
        profile.ema_latency_ms = alpha * latency_ms + (1.0 - alpha) * profile.ema_latency_ms;
    }
    profile.completed += 1;
    if (succeeded) profile.successes += 1;
    return profile;
}

void expand_with_plan(TaskGraph& graph, const std::string& plan_task_id,
                      const std::vector<PlanEntry>& entries, int max_attempts) {
    std::set<std::string> has_dependent;
    for (const auto& e : entries) {
        for (const auto& d : e.depends_on) has_dependent.insert(d);
    }

    for (const auto& e : entries) {
        std::set<std::string> deps(e.depends_on.begin(), e.depends_on.end());
        deps.insert(plan_task_id);
        graph.add(make_task(e.id, e.kind, e.description, std::move(deps), max_attempts));
    }

    std::set<std::string> integrate_deps;
    for (const auto& e : entries) {
        if (e.kind == TaskKind::implement || has_dependent.count(e.id) == 0) {
            integrate_deps.insert(e.id);
        }
    }
    graph.add(make_task("integrate", TaskKind::integrate,
                        "Integrate validated components into the final artifact",
                        std::move(integrate_deps), max_attempts));

    try {
        validate_graph(graph);
    } catch (const Error& e) {
        fail("graph-invalid", e.what());
    }
}

TaskGraph decompose(const TaskSpec& spec, Backend& planner, const OrchestratorConfig& config) {
    TaskGraph graph;
    if (spec.mode == PipelineMode::monolithic) {
        graph.add(make_task("monolith", TaskKind::monolith, spec.description, {},
                            config.max_attempts));
        return graph;
    }

    Task plan_task = make_task("plan", TaskKind::plan, spec.description, {},
                               config.max_attempts);
    graph.add(plan_task);

    std::string prompt = render_prompt(AgentRole::Prefrontal, plan_task, {});
    AgentOutput out = planner.invoke(InvokeRequest{prompt, plan_task});
    if (!out.ok) {
        fail("backend-error", "planner invoke failed: " + out.error_detail);
    }

    std::vector<PlanEntry> entries;
    int invocations = 1;
    try {
        entries = parse_plan(out.raw_text);
    } catch (const Error&) {
        // one reprompt with an appended format reminder
        AgentOutput retry = planner.invoke(InvokeRequest{prompt + "\n" + format_reminder(),
                                                         plan_task});
        ++invocations;
        if (!retry.ok) {
            fail("backend-error", "planner invoke failed: " + retry.error_detail);
        }
        entries = parse_plan(retry.raw_text); // propagates malformed-plan etc.
        out = retry;
    }

    expand_with_plan(graph, "plan", entries, config.max_attempts);

    // the planner already ran: reflect that in the plan task's state
    Task& t = graph.at("plan");
    for (int i = 0; i < invocations && t.attempts < t.max_attempts; ++i) {
        t = transition(t, i == 0 ? TaskEvent::deps_met : TaskEvent::check_failed_retry);
        t = transition(t, TaskEvent::dispatched);
    }
    t = transition(t, TaskEvent::completed);
    return graph;
}

PipelineRun execute_graph(const TaskSpec& spec, TaskGraph graph,
                          const OrchestratorConfig& config, Backend& backend,
                          MessageBus& bus, Blackboard& board, EventSink sink) {
    Engine engine(spec, config, backend, bus, board,
                  sink ? std::move(sink) : stderr_event_sink());
    return engine.execute(std::move(graph));
}

PipelineRun run_pipeline(const TaskSpec& spec, const OrchestratorConfig& config,
                         Backend& backend, MessageBus& bus, Blackboard& board,
                         EventSink sink) {
    TaskGraph graph;
    if (spec.mode == PipelineMode::monolithic) {
        graph.add(make_task("monolith", TaskKind::monolith, spec.description, {},
                            config.max_attempts));
    } else {
        graph.add(make_task("plan", TaskKind::plan, spec.description, {},
                            config.max_attempts));
    }
    return execute_graph(spec, std::move(graph), config, backend, bus, board,
                         std::move(sink));
}

} // namespace cortexc
