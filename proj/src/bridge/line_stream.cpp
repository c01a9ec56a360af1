#include "rcs/bridge/line_stream.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include <fmt/format.h>

#include "rcs/error.hpp"

namespace rcs::bridge {

namespace {

// One direction of a pipe.
struct Channel {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<std::string> lines;
    bool closed = false;

    void push(std::string_view line) {
        {
            std::lock_guard lk(mu);
            if (closed) throw Error(ErrorCode::ConnectionClosed, "pipe closed");
            lines.emplace_back(line);
        }
        cv.notify_one();
    }

    std::optional<std::string> pop() {
        std::unique_lock lk(mu);
        cv.wait(lk, [&] { return closed || !lines.empty(); });
        if (lines.empty()) return std::nullopt;
        std::string s = std::move(lines.front());
        lines.pop_front();
        return s;
    }

    void shut() {
        {
            std::lock_guard lk(mu);
            closed = true;
        }
        cv.notify_all();
    }
};

class PipeEnd final : public LineStream {
public:
    PipeEnd(std::shared_ptr<Channel> in, std::shared_ptr<Channel> out) : in_(std::move(in)), out_(std::move(out)) {}
    ~PipeEnd() override { close(); }

    void write_line(std::string_view line) override {
        {
            std::lock_guard lk(in_->mu);
            if (in_->closed) throw Error(ErrorCode::ConnectionClosed, "pipe closed");
        }
        out_->push(line);
    }
    std::optional<std::string> read_line() override { return in_->pop(); }
    void close() override {
        in_->shut();
        out_->shut();
    }

private:
    std::shared_ptr<Channel> in_;
    std::shared_ptr<Channel> out_;
};

std::string errno_text() { return std::strerror(errno); }

}  // namespace

std::pair<std::unique_ptr<LineStream>, std::unique_ptr<LineStream>> make_pipe_pair() {
    auto a = std::make_shared<Channel>();
    auto b = std::make_shared<Channel>();
    return {std::make_unique<PipeEnd>(a, b), std::make_unique<PipeEnd>(b, a)};
}

TcpStream::~TcpStream() {
    close();
    ::close(fd_);
}

std::unique_ptr<TcpStream> TcpStream::connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0)
        throw Error(ErrorCode::Transport, fmt::format("resolve {}: {}", host, gai_strerror(rc)));
    int fd = -1;
    for (addrinfo* p = res; p; p = p->ai_next) {
        fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw Error(ErrorCode::Transport, fmt::format("connect {}:{}: {}", host, port, errno_text()));
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return std::make_unique<TcpStream>(fd);
}

void TcpStream::write_line(std::string_view line) {
    std::string data(line);
    data += '\n';
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) throw Error(ErrorCode::ConnectionClosed, fmt::format("send: {}", errno_text()));
        off += static_cast<std::size_t>(n);
    }
}

std::optional<std::string> TcpStream::read_line() {
    while (true) {
        if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        char chunk[4096];
        const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return std::nullopt;
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

void TcpStream::close() {
    if (closed_.exchange(true)) return;
    ::shutdown(fd_, SHUT_RDWR);
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw Error(ErrorCode::Io, fmt::format("socket: {}", errno_text()));
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    const std::string h = host == "localhost" ? "127.0.0.1" : host;
    if (::inet_pton(AF_INET, h.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        throw Error(ErrorCode::Io, fmt::format("bad listen address '{}'", host));
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd_, 8) != 0) {
        const std::string why = errno_text();
        ::close(fd_);
        throw Error(ErrorCode::Io, fmt::format("bind {}:{}: {}", host, port, why));
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
    shutdown();
    ::close(fd_);
}

std::unique_ptr<TcpStream> TcpListener::accept() {
    while (true) {
        const int fd = ::accept(fd_, nullptr, nullptr);
        if (fd >= 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return std::make_unique<TcpStream>(fd);
        }
        if (errno == EINTR) continue;
        throw Error(ErrorCode::Io, fmt::format("accept: {}", errno_text()));
    }
}

void TcpListener::shutdown() { ::shutdown(fd_, SHUT_RDWR); }

}  // namespace rcs::bridge
