#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include "rcs/bridge/envelope.hpp"
#include "rcs/bridge/line_stream.hpp"

namespace rcs::bridge {

struct Ack {
    std::string topic;
    std::uint64_t seq = 0;
};

// Milliseconds for envelope timestamps.
using Clock = std::function<std::int64_t()>;
std::int64_t wall_clock_ms();

// Topic layer over a LineStream. A reader thread demultiplexes incoming
// envelopes into per-topic FIFO queues; publish may be called from any thread.
class Connection {
public:
    explicit Connection(std::unique_ptr<LineStream> stream, Clock clock = wall_clock_ms);
    ~Connection();
    Connection(const Connection&) = delete;
    Connection& operator=(const Connection&) = delete;

    // Throws ConnectionClosed, or TopicPayloadMismatch when msg does not belong on topic.
    Ack publish(std::string_view topic, const Message& msg);
    // Payload is checked against the topic's type before sending.
    Ack publish_json(std::string_view topic, const nlohmann::json& payload);
    // Sends the payload as is; for exercising the far end's validation.
    Ack publish_unchecked(std::string_view topic, const nlohmann::json& payload);

    // Oldest undelivered envelope on topic. Throws Timeout, ConnectionClosed
    // once the queue is drained and the stream has ended, or Protocol after a
    // framing or sequence error from the peer.
    Envelope next_message(std::string_view topic, std::chrono::milliseconds timeout);
    // Non-blocking variant.
    std::optional<Envelope> try_next(std::string_view topic);

    void close();
    bool closed() const;

private:
    void read_loop();

    std::unique_ptr<LineStream> stream_;
    Clock clock_;

    std::mutex write_mu_;
    std::map<std::string, std::uint64_t, std::less<>> out_seq_;
    bool write_closed_ = false;

    mutable std::mutex read_mu_;
    std::condition_variable read_cv_;
    std::map<std::string, std::deque<Envelope>, std::less<>> queues_;
    std::map<std::string, std::uint64_t, std::less<>> in_seq_;
    bool ended_ = false;
    std::optional<std::string> protocol_error_;

    std::thread reader_;
};

}  // namespace rcs::bridge
