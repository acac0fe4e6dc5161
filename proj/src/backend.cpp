#include "cortexc/backend.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "cortexc/clock.hpp"
#include "cortexc/error.hpp"

namespace cortexc {

namespace {

uint64_t fnv1a(const std::string& s, uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Short stable token tying output to (seed, role, task); distinct seeds or
// tasks produce distinct tokens.
std::string variant_token(AgentRole role, const Task& task, int64_t seed) {
    uint64_t h = splitmix64(static_cast<uint64_t>(seed) ^ fnv1a(to_string(role)) ^
                            fnv1a(task.task_id));
    static const char* hex = "0123456789abcdef";
    std::string out(8, '0');
    for (int i = 0; i < 8; ++i) {
        out[i] = hex[(h >> (i * 4)) & 0xf];
    }
    return out;
}

std::string identifier_from(const std::string& task_id) {
    std::string out;
    for (char c : task_id) {
        out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_';
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])) != 0) {
        out.insert(out.begin(), 't');
    }
    return out;
}

} // namespace

namespace {

std::string mock_plan_json(const std::string& desc) {
    auto subtask = [](const char* id, const char* kind, const std::string& description,
                      std::vector<std::string> depends_on) {
        return nlohmann::json{{"id", id},
                              {"kind", kind},
                              {"description", description},
                              {"depends_on", depends_on}};
    };
    nlohmann::json plan = {
        {"subtasks",
         nlohmann::json::array(
             {subtask("d1", "data_structures", "grid and entity state for " + desc, {}),
              subtask("l1", "logic_review", "movement and interaction rules of " + desc, {}),
              subtask("m1", "implement", "core gameplay loop of " + desc, {"d1", "l1"}),
              subtask("m2", "implement", "input handling and glue of " + desc,
                      {"d1", "l1"})})}};
    return plan.dump(2, ' ', false, nlohmann::json::error_handler_t::replace);
}

} // namespace

std::string mock_generate(AgentRole role, const Task& task, int64_t seed) {
    const std::string tok = variant_token(role, task, seed);
    const std::string& desc = task.description;
    switch (role) {
        case AgentRole::Prefrontal:
            return "High-level design for " + desc + " (variant " + tok + ").\n"
                   "The objective decomposes into data structure organization, a logic\n"
                   "review, and two implementation passes.\n" +
                   mock_plan_json(desc) + "\n";
        case AgentRole::Parietal:
            return "Data structure layout for " + desc + " (variant " + tok + "):\n"
                   "- grid: 2D array indexed [row][col] for the play field\n"
                   "- entities: list of records {id, position, state}\n"
                   "- events: FIFO queue of pending input events\n"
                   "Access patterns favor O(1) cell lookups and O(n) entity sweeps.\n";
        case AgentRole::Temporal:
            return "Logic review for " + desc + " (variant " + tok + "):\n"
                   "- boundary conditions are checked before every move\n"
                   "- collisions resolve before state commits\n"
                   "- update order is: input, movement, collision, scoring\n"
                   "No inconsistencies found in the proposed flow.\n";
        case AgentRole::Motor:
            return "# MOCK-IMPL " + task.task_id + " (variant " + tok + ")\n"
                   "def run_" + identifier_from(task.task_id) + "():\n"
                   "    state = init_state()\n"
                   "    while not state.done:\n"
                   "        state = step(state)\n"
                   "    return state\n";
        case AgentRole::Monolith:
            return "# MOCK-IMPL " + task.task_id + " (variant " + tok + ")\n"
                   "# Complete implementation of " + desc + "\n"
                   "def main():\n"
                   "    state = init_state()\n"
                   "    while not state.done:\n"
                   "        state = step(state)\n"
                   "    return state\n";
        case AgentRole::Orchestrator:
            return "Integrated output for " + desc + " (variant " + tok + ")\n";
    }
    return tok;
}

MockBackend::MockBackend(BackendConfig config) : config_(std::move(config)) {}

bool MockBackend::consume_failure(const Task& task) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = failures_left_.find(task.task_id);
    if (it == failures_left_.end()) {
        // budget from the failure plan: exact task id wins over kind name
        int budget = 0;
        auto by_id = config_.failure_plan.find(task.task_id);
        auto by_kind = config_.failure_plan.find(to_string(task.kind));
        if (by_id != config_.failure_plan.end()) {
            budget = by_id->second;
        } else if (by_kind != config_.failure_plan.end()) {
            budget = by_kind->second;
        }
        it = failures_left_.emplace(task.task_id, budget).first;
    }
    if (it->second > 0) {
        --it->second;
        return true;
    }
    return false;
}

AgentOutput MockBackend::invoke(const InvokeRequest& request) {
    auto start = std::chrono::steady_clock::now();
    int now = concurrent_.fetch_add(1) + 1;
    int seen = max_concurrent_.load();
    while (now > seen && !max_concurrent_.compare_exchange_weak(seen, now)) {
    }

    AgentOutput out;
    if (request.prompt.empty()) {
        out.ok = false;
        out.error_detail = "empty prompt";
    } else {
        if (config_.mock_latency_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(config_.mock_latency_ms));
        }
        if (consume_failure(request.task)) {
            out.ok = false;
            out.error_detail = "scripted mock failure for task \"" + request.task.task_id + "\"";
        } else {
            out.raw_text = mock_generate(request.task.role, request.task, config_.seed);
        }
    }
    concurrent_.fetch_sub(1);
    out.latency_ms = elapsed_ms(start);
    return out;
}

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
    const std::string& url = config_.endpoint_url;
    auto scheme_end = url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        base_url_ = url;
        path_ = "/";
    } else {
        base_url_ = url.substr(0, path_start);
        path_ = url.substr(path_start);
    }
}

AgentOutput HttpBackend::invoke(const InvokeRequest& request) {
    auto start = std::chrono::steady_clock::now();
    AgentOutput out;
    out.ok = false;

    if (request.prompt.empty()) {
        out.error_detail = "empty prompt";
        out.latency_ms = elapsed_ms(start);
        return out;
    }

    nlohmann::json body = {
        {"model", config_.model_name},
        {"messages", nlohmann::json::array({nlohmann::json{{"role", "user"},
                                                           {"content", request.prompt}}})},
        {"temperature", 0},
    };
    const std::string payload = body.dump();

    httplib::Client client(base_url_);
    client.set_connection_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
    client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
    client.set_write_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);

    httplib::Headers headers;
    if (const char* key = std::getenv("CORTEXC_API_KEY"); key != nullptr && key[0] != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    httplib::Result res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
        // one retry on transport errors only
        res = client.Post(path_, headers, payload, "application/json");
    }
    if (!res) {
        bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                         res.error() == httplib::Error::Read;
        out.error_detail = std::string(timed_out ? "timeout: " : "transport error: ") +
                           httplib::to_string(res.error());
        out.latency_ms = elapsed_ms(start);
        return out;
    }
    if (res->status < 200 || res->status >= 300) {
        out.error_detail = "http-status " + std::to_string(res->status);
        out.latency_ms = elapsed_ms(start);
        return out;
    }
    try {
        nlohmann::json reply = nlohmann::json::parse(res->body);
        out.raw_text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
        out.ok = true;
    } catch (const nlohmann::json::exception& e) {
        out.error_detail = std::string("malformed-response: ") + e.what();
    }
    out.latency_ms = elapsed_ms(start);
    return out;
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
    if (config.timeout_ms <= 0) {
        fail("invalid-config", "timeout_ms must be positive");
    }
    switch (config.kind) {
        case BackendConfig::Kind::mock:
            return std::make_unique<MockBackend>(config);
        case BackendConfig::Kind::http:
            if (config.endpoint_url.empty()) {
                fail("invalid-config", "http backend requires endpoint_url");
            }
            return std::make_unique<HttpBackend>(config);
    }
    fail("invalid-config", "unknown backend kind");
}

} // namespace cortexc
