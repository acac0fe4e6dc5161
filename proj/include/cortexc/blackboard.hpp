#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "cortexc/error.hpp"

namespace cortexc {

struct BlackboardEntry {
    std::string key;
    std::string value;
    uint64_t version = 0;
    std::string writer;

    bool operator==(const BlackboardEntry&) const = default;
};

// Versioned shared workspace. Writes are last-writer-wins with a per-key
// version that increases by exactly 1 per successful write; snapshot() is a
// point-in-time consistent copy taken at a single linearization point.
// Agents namespace keys by task id ("<task_id>/<name>").
class Blackboard {
public:
    static constexpr std::size_t kDefaultValueLimit = 1u << 20; // 1 MiB

    explicit Blackboard(std::size_t max_value_bytes = kDefaultValueLimit);

    // Returns the new version (1 for a fresh key).
    // Throws Error("payload-too-large").
    uint64_t write(const std::string& key, std::string value, const std::string& writer);

    std::optional<BlackboardEntry> read(const std::string& key) const;

    std::map<std::string, BlackboardEntry> snapshot() const;

    // Debug dump of the full board.
    nlohmann::json dump() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, BlackboardEntry> entries_;
    std::size_t max_value_;
};

} // namespace cortexc
