#include "cortexc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "cortexc/backend.hpp"
#include "cortexc/blackboard.hpp"
#include "cortexc/bus.hpp"
#include "cortexc/clock.hpp"
#include "cortexc/evaluation.hpp"
#include "cortexc/integration.hpp"
#include "cortexc/json_io.hpp"
#include "cortexc/orchestrator.hpp"

namespace cortexc {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                          (v.front() == '\'' && v.back() == '\''))) {
        return v.substr(1, v.size() - 2);
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        int64_t v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        fail("parse-error", "config key \"" + key + "\" has non-integer value \"" + value + "\"");
    }
}

std::string utc_stamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm_utc);
    return buf;
}

std::string default_run_id(const TaskSpec& spec, int64_t seed) {
    char hex[8];
    std::snprintf(hex, sizeof(hex), "%04x", static_cast<unsigned>(seed & 0xffff));
    return spec.spec_id + "-" + utc_stamp() + "-" + hex;
}

std::vector<AgentProfile> build_pool(const CliConfig& config) {
    std::vector<AgentProfile> pool;
    if (config.agents.empty()) {
        const std::pair<const char*, AgentRole> defaults[] = {
            {"prefrontal-1", AgentRole::Prefrontal}, {"parietal-1", AgentRole::Parietal},
            {"temporal-1", AgentRole::Temporal},     {"motor-1", AgentRole::Motor},
            {"monolith-1", AgentRole::Monolith},
        };
        for (const auto& [id, role] : defaults) {
            AgentProfile p;
            p.agent_id = id;
            p.role = role;
            p.capacity = std::max(1, config.concurrency);
            pool.push_back(std::move(p));
        }
    } else {
        for (const auto& [id, role, capacity] : config.agents) {
            AgentProfile p;
            p.agent_id = id;
            p.role = agent_role_from(role);
            p.capacity = capacity;
            pool.push_back(std::move(p));
        }
    }
    return pool;
}

BackendConfig build_backend_config(const CliConfig& config) {
    BackendConfig bc;
    if (config.backend == "mock") {
        bc.kind = BackendConfig::Kind::mock;
    } else if (config.backend == "http") {
        bc.kind = BackendConfig::Kind::http;
    } else {
        fail("parse-error", "backend must be \"mock\" or \"http\", got \"" +
                                config.backend + "\"");
    }
    bc.endpoint_url = config.endpoint;
    if (!config.model.empty()) bc.model_name = config.model;
    bc.seed = config.seed;
    bc.mock_latency_ms = config.mock_latency_ms;
    for (const auto& [task, count] : config.failure_plan) {
        bc.failure_plan[task] = count;
    }
    return bc;
}

struct RunOutcome {
    PipelineRun run;
    std::string run_path;
};

RunOutcome run_spec(TaskSpec spec, const CliConfig& config) {
    if (config.mode) spec.mode = *config.mode;

    OrchestratorConfig oc;
    oc.concurrency_limit = config.concurrency;
    oc.max_attempts = config.max_attempts;
    oc.agent_pool = build_pool(config);
    oc.seed = config.seed;
    oc.run_id = config.run_id.empty() ? default_run_id(spec, config.seed) : config.run_id;

    auto backend = make_backend(build_backend_config(config));
    MessageBus bus;
    Blackboard board;

    fs::path events_dir = fs::path(config.out_dir) / "out" / oc.run_id;
    fs::create_directories(events_dir);
    EventSink sink = file_event_sink((events_dir / "events.jsonl").string());

    RunOutcome outcome;
    outcome.run = run_pipeline(spec, oc, *backend, bus, board, std::move(sink));
    outcome.run_path = save_run(outcome.run, config.out_dir);
    write_run_outputs(outcome.run, config.out_dir);
    write_file((events_dir / "blackboard.json").string(), board.dump().dump(2) + "\n");
    return outcome;
}

void print_run_summary(const PipelineRun& run, const std::string& run_path) {
    std::cout << "run " << run.run_id << ": " << to_string(run.status) << "\n";
    std::cout << "  tasks: " << run.graph.size() << ", artifacts: " << run.artifacts.size()
              << ", reports: " << run.reports.size() << "\n";
    std::cout << "  development time: " << development_time(run) << " min\n";
    auto acc = accuracy(run);
    if (acc) {
        std::cout << "  accuracy: " << *acc << "%\n";
    } else {
        std::cout << "  accuracy: undefined (no applicable checks)\n";
    }
    std::cout << "  record: " << run_path << "\n";
}

std::optional<SurveyMeans> maybe_survey(const CliConfig& config) {
    if (config.survey_path.empty()) return std::nullopt;
    return ingest_survey(load_survey_csv(config.survey_path));
}

void write_report(const std::vector<BenchRow>& rows, const std::optional<SurveyMeans>& survey,
                  const CliConfig& config, const std::string& batch_name) {
    std::string text = bench_report(rows, survey);
    fs::path dir = fs::path(config.out_dir) / "out" / batch_name;
    write_file((dir / "report.txt").string(), text);
    write_file((dir / "report.json").string(), bench_report_json(rows, survey).dump(2) + "\n");
    std::cout << text;
}

} // namespace

CliConfig load_config_file(const std::string& path) {
    CliConfig config;
    std::istringstream in(read_file(path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            fail("parse-error", "config line " + std::to_string(line_no) +
                                    " is not key = value: \"" + s + "\"");
        }
        std::string key = trim(s.substr(0, eq));
        std::string value = unquote(trim(s.substr(eq + 1)));
        if (key == "backend") {
            config.backend = value;
        } else if (key == "endpoint") {
            config.endpoint = value;
        } else if (key == "model") {
            config.model = value;
        } else if (key == "seed") {
            config.seed = parse_int(key, value);
        } else if (key == "concurrency") {
            config.concurrency = static_cast<int>(parse_int(key, value));
        } else if (key == "max_attempts") {
            config.max_attempts = static_cast<int>(parse_int(key, value));
        } else if (key == "out") {
            config.out_dir = value;
        } else if (key == "run_id") {
            config.run_id = value;
        } else if (key == "survey") {
            config.survey_path = value;
        } else if (key == "mode") {
            config.mode = pipeline_mode_from(value);
        } else if (key == "mock_latency_ms") {
            config.mock_latency_ms = static_cast<int>(parse_int(key, value));
        } else if (key == "failure_plan") {
            for (const auto& item : split(value, ',')) {
                auto parts = split(trim(item), ':');
                if (parts.size() != 2) {
                    fail("parse-error", "failure_plan item \"" + item +
                                            "\" must be task:count");
                }
                config.failure_plan.emplace_back(
                    trim(parts[0]), static_cast<int>(parse_int("failure_plan", trim(parts[1]))));
            }
        } else if (key == "agents") {
            for (const auto& item : split(value, ',')) {
                auto parts = split(trim(item), ':');
                if (parts.size() != 3) {
                    fail("parse-error", "agents item \"" + item +
                                            "\" must be id:role:capacity");
                }
                config.agents.emplace_back(
                    trim(parts[0]), trim(parts[1]),
                    static_cast<int>(parse_int("agents", trim(parts[2]))));
            }
        } else {
            fail("parse-error", "unknown config key \"" + key + "\"");
        }
    }
    return config;
}

void apply_overrides(CliConfig& config, const CliOverrides& o) {
    if (o.backend) config.backend = *o.backend;
    if (o.endpoint) config.endpoint = *o.endpoint;
    if (o.model) config.model = *o.model;
    if (o.seed) config.seed = *o.seed;
    if (o.concurrency) config.concurrency = *o.concurrency;
    if (o.max_attempts) config.max_attempts = *o.max_attempts;
    if (o.out_dir) config.out_dir = *o.out_dir;
    if (o.run_id) config.run_id = *o.run_id;
    if (o.survey_path) config.survey_path = *o.survey_path;
    if (o.mode) config.mode = pipeline_mode_from(*o.mode);
}

int cmd_run(const std::string& spec_path, const CliConfig& config) {
    TaskSpec spec;
    try {
        spec = load_task_spec(spec_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        RunOutcome outcome = run_spec(std::move(spec), config);
        print_run_summary(outcome.run, outcome.run_path);
        return outcome.run.status == RunStatus::succeeded ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_bench(const std::string& suite_path, const CliConfig& config) {
    json suite;
    try {
        suite = json::parse(read_file(suite_path));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: suite file \"" << suite_path << "\": " << e.what() << "\n";
        return 2;
    }
    if (!suite.is_array() || suite.empty()) {
        std::cerr << "error: suite file \"" << suite_path
                  << "\" must be a non-empty list of {spec_path, pipelines}\n";
        return 2;
    }

    fs::path suite_dir = fs::path(suite_path).parent_path();
    std::vector<BenchRow> rows;
    bool all_ok = true;
    int entry_no = 0;
    for (const auto& entry : suite) {
        ++entry_no;
        std::string rel;
        std::vector<std::string> pipelines;
        try {
            rel = entry.at("spec_path").get<std::string>();
            for (const auto& p : entry.at("pipelines")) {
                pipelines.push_back(p.get<std::string>());
            }
        } catch (const json::exception& e) {
            std::cerr << "error: suite entry " << entry_no << ": " << e.what() << "\n";
            return 2;
        }
        fs::path spec_path = fs::path(rel).is_absolute() ? fs::path(rel) : suite_dir / rel;
        for (const auto& pipeline : pipelines) {
            CliConfig per_run = config;
            per_run.mode = pipeline_mode_from(pipeline);
            per_run.run_id.clear(); // each bench run gets its own id
            TaskSpec spec;
            try {
                spec = load_task_spec(spec_path.string());
                per_run.run_id = spec.spec_id + "-" + pipeline + "-" + utc_stamp() + "-" +
                                 std::to_string(entry_no);
                RunOutcome outcome = run_spec(spec, per_run);
                rows.push_back(bench_row_from_run(spec.title, outcome.run));
                all_ok = all_ok && outcome.run.status == RunStatus::succeeded;
            } catch (const std::exception& e) {
                std::cerr << "bench: run for \"" << rel << "\" (" << pipeline
                          << ") failed: " << e.what() << "\n";
                BenchRow row;
                row.task_name = spec.title.empty() ? rel : spec.title;
                row.pipeline = pipeline_mode_from(pipeline);
                row.run_id = "failed";
                rows.push_back(std::move(row));
                all_ok = false;
            }
        }
    }

    try {
        write_report(rows, maybe_survey(config), config, "bench");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return all_ok ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& run_paths, const CliConfig& config) {
    std::vector<std::string> files;
    for (const auto& arg : run_paths) {
        if (fs::is_directory(arg)) {
            std::vector<std::string> found;
            for (const auto& e : fs::directory_iterator(arg)) {
                if (e.path().extension() == ".json") found.push_back(e.path().string());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(arg);
        }
    }
    if (files.empty()) {
        std::cerr << "error: no run files given\n";
        return 2;
    }

    std::vector<BenchRow> rows;
    for (const auto& file : files) {
        try {
            PipelineRun run = load_run(file);
            rows.push_back(bench_row_from_run(run.spec.title, run));
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    try {
        write_report(rows, maybe_survey(config), config, "report");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace cortexc
