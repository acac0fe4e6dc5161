#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "cortexc/types.hpp"

namespace cortexc {

struct BackendConfig {
    enum class Kind { mock, http };

    Kind kind = Kind::mock;
    std::string endpoint_url;            // http only
    std::string model_name = "cortexc-mock";
    int timeout_ms = 60000;
    int64_t seed = 0;                    // mock determinism
    int mock_latency_ms = 100;           // simulated per-call latency
    // task_id (or task-kind name) -> number of scripted invoke failures,
    // applied per task. Mock only.
    std::map<std::string, int> failure_plan;
};

struct AgentOutput {
    std::string raw_text;
    double latency_ms = 0.0;
    bool ok = true;
    std::string error_detail;
};

struct InvokeRequest {
    std::string prompt;
    Task task; // role/id/description drive the mock generator and failure plan
};

// Generation backend. invoke() is safe for concurrent calls up to the
// orchestrator's concurrency limit; failures are reported via ok=false
// rather than exceptions so the retry loop can act on them.
class Backend {
public:
    virtual ~Backend() = default;
    virtual AgentOutput invoke(const InvokeRequest& request) = 0;
};

// Deterministic role-shaped text for (role, task, seed): the planner emits a
// parseable JSON plan, the Parietal a schema description, the Temporal a
// review listing checks, the Motor code carrying a "MOCK-IMPL <task_id>"
// marker. Distinct seeds yield distinct outputs.
std::string mock_generate(AgentRole role, const Task& task, int64_t seed);

class MockBackend final : public Backend {
public:
    explicit MockBackend(BackendConfig config);

    AgentOutput invoke(const InvokeRequest& request) override;

    // High-water mark of concurrent invoke() calls, for concurrency tests.
    int max_concurrent() const { return max_concurrent_.load(); }

private:
    bool consume_failure(const Task& task);

    BackendConfig config_;
    std::mutex mu_;
    std::map<std::string, int> failures_left_; // per task_id
    std::atomic<int> concurrent_{0};
    std::atomic<int> max_concurrent_{0};
};

// Minimal chat-completion client:
// POST {model, messages:[{role:"user", content}], temperature:0} and read
// choices[0].message.content. Bearer token from CORTEXC_API_KEY when set.
// One retry on transport error, none on non-2xx statuses.
class HttpBackend final : public Backend {
public:
    explicit HttpBackend(BackendConfig config);

    AgentOutput invoke(const InvokeRequest& request) override;

private:
    BackendConfig config_;
    std::string base_url_;
    std::string path_;
};

// Throws Error("invalid-config") on bad settings (http without endpoint,
// non-positive timeout).
std::unique_ptr<Backend> make_backend(const BackendConfig& config);

} // namespace cortexc
