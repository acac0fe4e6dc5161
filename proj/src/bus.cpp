#include "cortexc/bus.hpp"

#include <chrono>

namespace cortexc {

const char* to_string(MessageKind k) {
    switch (k) {
        case MessageKind::assign: return "assign";
        case MessageKind::result: return "result";
        case MessageKind::error: return "error";
        case MessageKind::control: return "control";
    }
    return "?";
}

MessageBus::MessageBus(std::size_t max_payload_bytes) : max_payload_(max_payload_bytes) {}

void MessageBus::register_agent(const std::string& agent_id) {
    if (agent_id.empty()) fail("unknown-agent", "agent id must be non-empty");
    std::lock_guard<std::mutex> lock(mu_);
    if (inboxes_.count(agent_id) == 0) {
        inboxes_.emplace(agent_id, std::make_unique<Inbox>());
    }
}

bool MessageBus::is_registered(const std::string& agent_id) const {
    std::lock_guard<std::mutex> lock(mu_);
    return inboxes_.count(agent_id) != 0;
}

uint64_t MessageBus::send(Message msg) {
    if (msg.payload.size() > max_payload_) {
        fail("payload-too-large", "payload of " + std::to_string(msg.payload.size()) +
                                      " bytes exceeds limit of " + std::to_string(max_payload_));
    }
    std::lock_guard<std::mutex> lock(mu_);
    auto it = inboxes_.find(msg.recipient);
    if (it == inboxes_.end()) {
        fail("unknown-recipient", "recipient \"" + msg.recipient + "\" not registered");
    }
    uint64_t seq = ++pair_seq_[{msg.sender, msg.recipient}];
    msg.seq = seq;
    it->second->queue.push_back(std::move(msg));
    it->second->cv.notify_one();
    return seq;
}

std::optional<Message> MessageBus::receive(const std::string& agent_id, int timeout_ms) {
    std::unique_lock<std::mutex> lock(mu_);
    auto it = inboxes_.find(agent_id);
    if (it == inboxes_.end()) {
        fail("unknown-agent", "agent \"" + agent_id + "\" not registered");
    }
    Inbox& inbox = *it->second;
    bool got = inbox.cv.wait_for(lock, std::chrono::milliseconds(timeout_ms),
                                 [&] { return !inbox.queue.empty(); });
    if (!got) return std::nullopt;
    Message msg = std::move(inbox.queue.front());
    inbox.queue.pop_front();
    return msg;
}

std::size_t MessageBus::pending(const std::string& agent_id) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = inboxes_.find(agent_id);
    if (it == inboxes_.end()) {
        fail("unknown-agent", "agent \"" + agent_id + "\" not registered");
    }
    return it->second->queue.size();
}

} // namespace cortexc
