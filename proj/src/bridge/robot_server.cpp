#include "rcs/bridge/robot_server.hpp"

#include <thread>

#include "rcs/error.hpp"
#include "rcs/sim/robot_sim.hpp"

namespace rcs::bridge {

using namespace std::chrono_literals;

void RobotServer::publish_snapshot(Connection& conn) {
    conn.publish(topics::kSensor, sim::read_sensors(world_));
    conn.publish(topics::kVision, sim::render_camera(world_));
}

void RobotServer::serve(Connection& conn) {
    try {
        publish_snapshot(conn);
        while (true) {
            Envelope env;
            try {
                env = conn.next_message(topics::kCmd, 1s);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::Timeout) continue;
                throw;
            }
            Command cmd;
            try {
                cmd = as_command(env);
                auto [next, result] = sim::apply_command(world_, cmd);
                world_ = std::move(next);
                conn.publish(topics::kExec, result);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::ConnectionClosed) throw;
                conn.publish_json(topics::kError,
                                  {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}});
                conn.close();
                return;
            }
            publish_snapshot(conn);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Protocol) {
            try {
                conn.publish_json(topics::kError, {{"code", "Protocol"}, {"message", e.what()}});
            } catch (const Error&) {
            }
        } else if (e.code() != ErrorCode::ConnectionClosed) {
            throw;
        }
    }
    conn.close();
}

void serve_robot(const sim::WorldState& world, const std::string& host, std::uint16_t port,
                 const std::atomic<bool>& stop, std::function<void(std::uint16_t)> on_listening) {
    TcpListener listener(host, port);
    if (on_listening) on_listening(listener.port());
    std::atomic<bool> done{false};
    std::thread watcher([&] {
        while (!stop && !done) std::this_thread::sleep_for(20ms);
        listener.shutdown();
    });
    std::exception_ptr failure;
    try {
        while (!stop) {
            auto stream = listener.accept();
            Connection conn(std::move(stream));
            RobotServer server(world);
            server.serve(conn);
        }
    } catch (const Error&) {
        if (!stop) failure = std::current_exception();
    }
    done = true;
    watcher.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rcs::bridge
