#include "rcs/bridge/connection.hpp"

#include <fmt/format.h>

#include "rcs/error.hpp"

namespace rcs::bridge {

std::int64_t wall_clock_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

Connection::Connection(std::unique_ptr<LineStream> stream, Clock clock)
    : stream_(std::move(stream)), clock_(std::move(clock)) {
    reader_ = std::thread([this] { read_loop(); });
}

Connection::~Connection() {
    close();
    if (reader_.joinable()) reader_.join();
}

void Connection::read_loop() {
    while (true) {
        std::optional<std::string> line;
        try {
            line = stream_->read_line();
        } catch (const std::exception&) {
            line.reset();
        }
        std::lock_guard lk(read_mu_);
        if (!line) {
            ended_ = true;
            read_cv_.notify_all();
            return;
        }
        try {
            Envelope env = decode(*line);
            auto& last = in_seq_[env.topic];
            if (env.seq != last + 1)
                throw Error(ErrorCode::Protocol,
                            fmt::format("{}: expected seq {}, got {}", env.topic, last + 1, env.seq));
            last = env.seq;
            queues_[env.topic].push_back(std::move(env));
        } catch (const Error& e) {
            protocol_error_ = e.what();
            ended_ = true;
            read_cv_.notify_all();
            return;
        }
        read_cv_.notify_all();
    }
}

Ack Connection::publish(std::string_view topic, const Message& msg) {
    if (topic_for(msg) != topic)
        throw Error(ErrorCode::TopicPayloadMismatch,
                    fmt::format("{} payload on {}", topic_for(msg), topic));
    return publish_unchecked(topic, message_to_json(msg));
}

Ack Connection::publish_json(std::string_view topic, const nlohmann::json& payload) {
    check_payload(topic, payload);
    return publish_unchecked(topic, payload);
}

Ack Connection::publish_unchecked(std::string_view topic, const nlohmann::json& payload) {
    std::lock_guard lk(write_mu_);
    if (write_closed_) throw Error(ErrorCode::ConnectionClosed, "publish after close");
    if (!known_topic(topic)) throw Error(ErrorCode::TopicPayloadMismatch, fmt::format("unknown topic '{}'", topic));
    auto it = out_seq_.find(topic);
    if (it == out_seq_.end()) it = out_seq_.emplace(std::string(topic), 0).first;
    Envelope env{std::string(topic), it->second + 1, clock_(), payload};
    stream_->write_line(encode(env));
    it->second = env.seq;
    return {env.topic, env.seq};
}

std::optional<Envelope> Connection::try_next(std::string_view topic) {
    std::lock_guard lk(read_mu_);
    auto it = queues_.find(topic);
    if (it == queues_.end() || it->second.empty()) return std::nullopt;
    Envelope env = std::move(it->second.front());
    it->second.pop_front();
    return env;
}

Envelope Connection::next_message(std::string_view topic, std::chrono::milliseconds timeout) {
    std::unique_lock lk(read_mu_);
    const auto ready = [&] {
        auto it = queues_.find(topic);
        return (it != queues_.end() && !it->second.empty()) || ended_;
    };
    if (!read_cv_.wait_for(lk, timeout, ready))
        throw Error(ErrorCode::Timeout, fmt::format("no message on {} within {} ms", topic, timeout.count()));
    auto it = queues_.find(topic);
    if (it != queues_.end() && !it->second.empty()) {
        Envelope env = std::move(it->second.front());
        it->second.pop_front();
        return env;
    }
    if (protocol_error_) throw Error(ErrorCode::Protocol, *protocol_error_);
    throw Error(ErrorCode::ConnectionClosed, fmt::format("stream ended while waiting on {}", topic));
}

void Connection::close() {
    {
        std::lock_guard lk(write_mu_);
        if (write_closed_) return;
        write_closed_ = true;
    }
    stream_->close();
}

bool Connection::closed() const {
    std::lock_guard lk(read_mu_);
    return ended_;
}

}  // namespace rcs::bridge
