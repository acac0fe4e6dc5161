#include "cortexc/blackboard.hpp"

namespace cortexc {

Blackboard::Blackboard(std::size_t max_value_bytes) : max_value_(max_value_bytes) {}

uint64_t Blackboard::write(const std::string& key, std::string value, const std::string& writer) {
    if (value.size() > max_value_) {
        fail("payload-too-large", "value of " + std::to_string(value.size()) +
                                      " bytes exceeds limit of " + std::to_string(max_value_));
    }
    std::lock_guard<std::mutex> lock(mu_);
    BlackboardEntry& e = entries_[key];
    e.key = key;
    e.value = std::move(value);
    e.version += 1;
    e.writer = writer;
    return e.version;
}

std::optional<BlackboardEntry> Blackboard::read(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::map<std::string, BlackboardEntry> Blackboard::snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_;
}

nlohmann::json Blackboard::dump() const {
    auto snap = snapshot();
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, e] : snap) {
        out[key] = {{"value", e.value}, {"version", e.version}, {"writer", e.writer}};
    }
    return out;
}

} // namespace cortexc
