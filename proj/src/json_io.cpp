#include "cortexc/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace cortexc {

namespace fs = std::filesystem;

json to_json(const CheckSpec& c) {
    json applies = json::array();
    for (auto k : c.applies_to) applies.push_back(to_string(k));
    return json{{"name", c.name},
                {"method", to_string(c.method)},
                {"argument", c.argument},
                {"applies_to", applies}};
}

json to_json(const TaskSpec& s) {
    json checks = json::array();
    for (const auto& c : s.checks) checks.push_back(to_json(c));
    return json{{"spec_id", s.spec_id},
                {"title", s.title},
                {"description", s.description},
                {"target_language_tag", s.target_language_tag},
                {"checks", checks},
                {"mode", to_string(s.mode)}};
}

json to_json(const Task& t) {
    json deps = json::array();
    for (const auto& d : t.deps) deps.push_back(d); // std::set -> sorted
    return json{{"task_id", t.task_id},
                {"kind", to_string(t.kind)},
                {"role", to_string(t.role)},
                {"description", t.description},
                {"deps", deps},
                {"priority", t.priority},
                {"status", to_string(t.status)},
                {"attempts", t.attempts},
                {"max_attempts", t.max_attempts}};
}

json to_json(const TaskGraph& g) {
    json nodes = json::array();
    for (const auto& id : g.order()) nodes.push_back(to_json(g.at(id)));
    return json{{"nodes", nodes}};
}

json to_json(const Artifact& a) {
    return json{{"artifact_id", a.artifact_id},
                {"task_id", a.task_id},
                {"role", to_string(a.role)},
                {"content", a.content},
                {"content_kind", to_string(a.content_kind)},
                {"created_at_ms", a.created_at_ms}};
}

json to_json(const ValidationReport& r) {
    json results = json::array();
    for (const auto& c : r.results) {
        results.push_back(json{{"check_name", c.check_name},
                               {"passed", c.passed},
                               {"detail", c.detail}});
    }
    return json{{"artifact_id", r.artifact_id}, {"results", results}};
}

json to_json(const PipelineRun& run) {
    json artifacts = json::array();
    for (const auto& a : run.artifacts) artifacts.push_back(to_json(a));
    json reports = json::array();
    for (const auto& r : run.reports) reports.push_back(to_json(r));
    return json{{"run_id", run.run_id},
                {"spec", to_json(run.spec)},
                {"graph", to_json(run.graph)},
                {"artifacts", artifacts},
                {"reports", reports},
                {"started_at_ms", run.started_at_ms},
                {"finished_at_ms", run.finished_at_ms.value_or(-1)},
                {"status", to_string(run.status)},
                {"seed", run.seed}};
}

namespace {

const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        fail("parse-error", std::string("missing key \"") + key + "\"");
    }
    return *it;
}

std::string need_string(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_string()) fail("parse-error", std::string("key \"") + key + "\" must be a string");
    return v.get<std::string>();
}

} // namespace

CheckSpec check_spec_from_json(const json& j) {
    CheckSpec c;
    c.name = need_string(j, "name");
    c.method = check_method_from(need_string(j, "method"));
    c.argument = j.value("argument", std::string{});
    if (j.contains("applies_to")) {
        for (const auto& k : j.at("applies_to")) {
            c.applies_to.push_back(content_kind_from(k.get<std::string>()));
        }
    }
    if (c.name.empty()) fail("parse-error", "check name must be non-empty");
    return c;
}

TaskSpec task_spec_from_json(const json& j) {
    TaskSpec s;
    s.spec_id = need_string(j, "spec_id");
    if (s.spec_id.empty()) fail("parse-error", "spec_id must be non-empty");
    s.title = j.value("title", s.spec_id);
    s.description = need_string(j, "description");
    s.target_language_tag = j.value("target_language_tag", std::string{});
    if (j.contains("checks")) {
        for (const auto& c : j.at("checks")) s.checks.push_back(check_spec_from_json(c));
    }
    s.mode = pipeline_mode_from(j.value("mode", std::string{"modular"}));
    return s;
}

Task task_from_json(const json& j) {
    Task t;
    t.task_id = need_string(j, "task_id");
    t.kind = task_kind_from(need_string(j, "kind"));
    t.role = agent_role_from(need_string(j, "role"));
    t.description = j.value("description", std::string{});
    if (j.contains("deps")) {
        for (const auto& d : j.at("deps")) t.deps.insert(d.get<std::string>());
    }
    t.priority = j.value("priority", 0);
    t.status = task_status_from(j.value("status", std::string{"pending"}));
    t.attempts = j.value("attempts", 0);
    t.max_attempts = j.value("max_attempts", 3);
    return t;
}

TaskGraph task_graph_from_json(const json& j) {
    TaskGraph g;
    for (const auto& n : need(j, "nodes")) g.add(task_from_json(n));
    return g;
}

Artifact artifact_from_json(const json& j) {
    Artifact a;
    a.artifact_id = need_string(j, "artifact_id");
    a.task_id = need_string(j, "task_id");
    a.role = agent_role_from(need_string(j, "role"));
    a.content = j.value("content", std::string{});
    a.content_kind = content_kind_from(need_string(j, "content_kind"));
    a.created_at_ms = j.value("created_at_ms", int64_t{0});
    return a;
}

ValidationReport report_from_json(const json& j) {
    ValidationReport r;
    r.artifact_id = need_string(j, "artifact_id");
    for (const auto& e : need(j, "results")) {
        CheckResult c;
        c.check_name = need_string(e, "check_name");
        c.passed = need(e, "passed").get<bool>();
        c.detail = e.value("detail", std::string{});
        r.results.push_back(std::move(c));
    }
    return r;
}

PipelineRun run_from_json(const json& j) {
    PipelineRun run;
    run.run_id = need_string(j, "run_id");
    run.spec = task_spec_from_json(need(j, "spec"));
    run.graph = task_graph_from_json(need(j, "graph"));
    for (const auto& a : need(j, "artifacts")) run.artifacts.push_back(artifact_from_json(a));
    for (const auto& r : need(j, "reports")) run.reports.push_back(report_from_json(r));
    run.started_at_ms = need(j, "started_at_ms").get<int64_t>();
    int64_t fin = need(j, "finished_at_ms").get<int64_t>();
    if (fin >= 0) run.finished_at_ms = fin;
    run.status = run_status_from(need_string(j, "status"));
    run.seed = need(j, "seed").get<int64_t>();
    return run;
}

std::string save_run(const PipelineRun& run, const std::string& base_dir) {
    if (!run.finished()) {
        fail("unfinished-run", "run \"" + run.run_id + "\" has no finish timestamp");
    }
    fs::path dir = fs::path(base_dir) / "runs";
    fs::create_directories(dir);
    fs::path path = dir / (run.run_id + ".json");
    write_file(path.string(), to_json(run).dump(2) + "\n");
    return path.string();
}

PipelineRun load_run(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        fail("parse-error", "run file \"" + path + "\": " + e.what());
    }
    try {
        return run_from_json(j);
    } catch (const Error&) {
        throw;
    } catch (const json::exception& e) {
        fail("parse-error", "run file \"" + path + "\": " + e.what());
    }
}

TaskSpec load_task_spec(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        fail("parse-error", "spec file \"" + path + "\": " + e.what());
    }
    try {
        return task_spec_from_json(j);
    } catch (const Error&) {
        throw;
    } catch (const json::exception& e) {
        fail("parse-error", "spec file \"" + path + "\": " + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail("file-not-found", "cannot open \"" + path + "\"");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail("io-error", "cannot write \"" + path + "\"");
    }
    out << content;
}

} // namespace cortexc
