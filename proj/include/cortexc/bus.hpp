#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "cortexc/error.hpp"

namespace cortexc {

enum class MessageKind { assign, result, error, control };

const char* to_string(MessageKind k);

// Directed point-to-point message. seq is assigned by the bus and increases
// by 1 per (sender, recipient) pair.
struct Message {
    uint64_t seq = 0;
    std::string sender;
    std::string recipient;
    MessageKind kind = MessageKind::control;
    std::string task_id;
    std::string payload;
};

// In-process FIFO message bus. send/receive are safe for any number of
// concurrent producers and consumers; delivery order per (sender, recipient)
// pair equals send order, and no message is delivered twice.
class MessageBus {
public:
    static constexpr std::size_t kDefaultPayloadLimit = 1u << 20; // 1 MiB

    explicit MessageBus(std::size_t max_payload_bytes = kDefaultPayloadLimit);

    void register_agent(const std::string& agent_id);
    bool is_registered(const std::string& agent_id) const;

    // Enqueues msg (seq is overwritten) and returns the assigned seq.
    // Throws Error("unknown-recipient") or Error("payload-too-large").
    uint64_t send(Message msg);

    // Oldest undelivered message for agent_id, or nullopt after timeout_ms.
    // Throws Error("unknown-agent").
    std::optional<Message> receive(const std::string& agent_id, int timeout_ms);

    std::size_t pending(const std::string& agent_id) const;

private:
    struct Inbox {
        std::deque<Message> queue;
        std::condition_variable cv;
    };

    mutable std::mutex mu_;
    std::unordered_map<std::string, std::unique_ptr<Inbox>> inboxes_;
    std::map<std::pair<std::string, std::string>, uint64_t> pair_seq_;
    std::size_t max_payload_;
};

} // namespace cortexc
