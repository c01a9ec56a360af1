#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace rcs::bridge {

// Reliable, ordered, newline-delimited byte stream.
class LineStream {
public:
    virtual ~LineStream() = default;
    // Throws ConnectionClosed once either side has closed.
    virtual void write_line(std::string_view line) = 0;
    // Blocks for the next line; nullopt at end of stream.
    virtual std::optional<std::string> read_line() = 0;
    // Idempotent. Unblocks a pending read_line on this end and ends the peer's stream.
    virtual void close() = 0;
};

// Two connected in-process ends.
std::pair<std::unique_ptr<LineStream>, std::unique_ptr<LineStream>> make_pipe_pair();

class TcpStream final : public LineStream {
public:
    explicit TcpStream(int fd) : fd_(fd) {}
    ~TcpStream() override;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;

    // Throws Transport when the connection cannot be made.
    static std::unique_ptr<TcpStream> connect(const std::string& host, std::uint16_t port);

    void write_line(std::string_view line) override;
    std::optional<std::string> read_line() override;
    void close() override;

private:
    int fd_;
    std::string buffer_;
    std::atomic<bool> closed_{false};
};

class TcpListener {
public:
    // Port 0 picks a free port. Throws Io when the address cannot be bound.
    TcpListener(const std::string& host, std::uint16_t port);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const { return port_; }
    // Blocks; throws Io once the listener has been shut down.
    std::unique_ptr<TcpStream> accept();
    void shutdown();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

}  // namespace rcs::bridge
