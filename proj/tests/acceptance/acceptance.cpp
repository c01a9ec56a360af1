// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "rcs/agent/episode.hpp"
#include "rcs/bench/goal.hpp"
#include "rcs/bench/report.hpp"
#include "rcs/bench/scenario.hpp"
#include "rcs/bench/suite_runner.hpp"
#include "rcs/core/serialize.hpp"
#include "rcs/error.hpp"
#include "rcs/llm/decision.hpp"
#include "rcs/llm/retry.hpp"
#include "rcs/sim/robot_sim.hpp"
#include "rcs/sim/sim_link.hpp"
#include "test_support.hpp"

using namespace rcs;
using namespace rcs::bench;
using nlohmann::json;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    std::printf("criterion %d: %s - %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

const Benchmark& suite() {
    static const Benchmark b = load_benchmark(rcs::testing::data_dir() / "suite.json");
    return b;
}

const agent::Agents& agents() {
    static const agent::Agents a = agent::Agents::from_dir(rcs::testing::template_dir());
    return a;
}

// Expected verdict and steps per scenario and model; negative steps mean failure.
struct Expected {
    int turbo;
    int gpt4o;
};

const std::map<std::string, Expected>& table_rows() {
    static const std::map<std::string, Expected> rows{
        {"od_1", {6, 9}},    {"od_2", {8, 4}},    {"od_3", {-20, 11}},  {"od_4", {4, 2}},   {"od_5", {0, 0}},
        {"cmd_1", {-5, 9}},  {"cmd_2", {3, 3}},   {"cmd_3", {1, 8}},    {"cmd_4", {5, 10}}, {"cmd_5", {12, 12}},
        {"nav_1", {-16, 7}}, {"nav_2", {8, 5}},   {"nav_3", {-15, 8}},  {"nav_4", {-5, -15}},
        {"nav_5", {-3, -5}}, {"sa_1", {0, 0}},    {"sa_2", {6, 7}},     {"sa_3", {3, 7}},   {"sa_4", {-3, 10}},
        {"sa_5", {-4, 0}},
    };
    return rows;
}

SuiteRun replay_run(const std::string& model) {
    SuiteOptions opts;
    opts.label = model;
    return run_suite(suite(), replay_factory(rcs::testing::data_dir() / "replay" / model), agents(), opts);
}

void criteria_1_and_2() {
    const auto t0 = clock_type::now();
    const SuiteRun turbo = replay_run("gpt-4-turbo");
    const SuiteRun gpt4o = replay_run("gpt-4o");
    const double elapsed = seconds_since(t0) / 2;

    const auto rates = [](const Report& r) {
        std::vector<int> out;
        for (Domain d : kDomains) {
            const auto* dr = r.domain(d);
            out.push_back(dr ? static_cast<int>(dr->rate) : -1);
        }
        return out;
    };
    const auto rt = rates(turbo.report);
    const auto rg = rates(gpt4o.report);
    const bool ok1 = rt == std::vector<int>{80, 80, 20, 60} && rg == std::vector<int>{100, 100, 60, 100} &&
                     turbo.report.overall_rate == 60.0 && gpt4o.report.overall_rate == 90.0 && elapsed < 1.0;
    report(1, ok1,
           fmt::format("gpt-4-turbo {{{}}} overall {}%, gpt-4o {{{}}} overall {}%, {:.3f} s per suite",
                       fmt::join(rt, ", "), turbo.report.overall_rate, fmt::join(rg, ", "),
                       gpt4o.report.overall_rate, elapsed));

    int matched = 0, total = 0;
    std::string mismatches;
    for (const auto& [id, exp] : table_rows()) {
        for (const auto& [label, run, want] :
             {std::tuple{"gpt-4-turbo", &turbo, exp.turbo}, std::tuple{"gpt-4o", &gpt4o, exp.gpt4o}}) {
            ++total;
            const ReportRow* row = run->report.row(id);
            const bool success = want >= 0;
            const int steps = success ? want : -want;
            if (row && row->steps == steps && (row->judgement.verdict == agent::Verdict::Success) == success) {
                ++matched;
            } else {
                mismatches += fmt::format(" {}:{}", label, id);
            }
        }
    }
    report(2, matched == total && total == 40,
           fmt::format("{}/{} table rows match on verdict and steps{}", matched, total, mismatches));
}

void criterion_3() {
    const auto t0 = clock_type::now();
    SuiteOptions opts;
    opts.label = "oracle";
    const SuiteRun run = run_suite(suite(), scripted_factory("oracle"), agents(), opts);
    const double elapsed = seconds_since(t0);
    int ok = 0, max_steps = 0;
    for (const auto& row : run.report.rows) {
        if (row.judgement.verdict == agent::Verdict::Success && row.steps <= 20) ++ok;
        max_steps = std::max(max_steps, row.steps);
    }
    report(3, ok == 20 && run.report.rows.size() == 20 && elapsed < 30.0,
           fmt::format("{}/20 Success, max steps {}, {:.2f} s", ok, max_steps, elapsed));
}

agent::EpisodeResult oracle_episode(const std::string& id, sim::WorldState world, sim::WorldState* final_world) {
    const auto& spec = suite().find(id);
    sim::SimLink link(std::move(world));
    llm::ScriptedBackend b("oracle");
    auto r = agent::run_episode(spec.request(), link, b, b, spec.limits, agents());
    *final_world = link.world();
    return r;
}

void criterion_4() {
    // direct command sequence
    auto w = rcs::testing::empty_world();
    for (int i = 0; i < 4; ++i) {
        w = sim::apply_command(w, CarForward{0.6}).first;
        w = sim::apply_command(w, CarLeft{90}).first;
    }
    double pos_err = std::hypot(w.robot.x, w.robot.y);
    double head_err = std::abs(sim::normalize_bearing(w.robot.heading));

    // the same request driven by the oracle agent
    sim::WorldState fin;
    auto sq = oracle_episode("cmd_1", rcs::testing::empty_world(), &fin);
    pos_err = std::max(pos_err, std::hypot(fin.robot.x, fin.robot.y));
    head_err = std::max(head_err, std::abs(sim::normalize_bearing(fin.robot.heading)));
    double square_path = 0;
    for (const auto& r : sq.trace.rounds())
        if (r.exec_result) square_path += r.exec_result->distance_travelled;

    auto zz = oracle_episode("cmd_4", rcs::testing::empty_world(), &fin);
    double path = 0;
    for (const auto& r : zz.trace.rounds())
        if (r.exec_result) path += r.exec_result->distance_travelled;
    double direct_path = 0;
    auto z = rcs::testing::empty_world();
    z = sim::apply_command(z, CarLeft{30}).first;
    for (int i = 0; i < 4; ++i) {
        auto [next, res] = sim::apply_command(z, CarForward{0.5});
        direct_path += res.distance_travelled;
        z = sim::apply_command(next, i % 2 ? Command{CarLeft{60}} : Command{CarRight{60}}).first;
    }
    const bool ok = pos_err <= 1e-6 && head_err <= 1e-9 && std::abs(square_path - 2.4) <= 1e-6 &&
                    std::abs(path - 2.0) <= 1e-6 && std::abs(direct_path - 2.0) <= 1e-6 && sq.finished &&
                    zz.finished;
    report(4, ok,
           fmt::format("square closure {:.3g} m / {:.3g} deg, zigzag path {:.9f} m (oracle) {:.9f} m (direct)",
                       pos_err, head_err, path, direct_path));
}

json random_object(std::mt19937& rng, int k, double spread) {
    std::uniform_real_distribution<double> pos(-spread, spread), size(0.05, 0.6);
    if (rng() % 2) return rcs::testing::circle_obj("c" + std::to_string(k), pos(rng), pos(rng), size(rng));
    return rcs::testing::rect_obj("r" + std::to_string(k), pos(rng), pos(rng), size(rng) * 2, size(rng) * 2);
}

void criterion_5() {
    std::mt19937 rng(20240501);
    std::uniform_real_distribution<double> ang(0, 360), pos(-2.5, 2.5);
    int agree = 0, hits = 0;
    double worst = 0;
    const int scenes = 1000;
    for (int s = 0; s < scenes; ++s) {
        json objs = json::array();
        const int n = 1 + static_cast<int>(rng() % 5);
        for (int k = 0; k < n; ++k) objs.push_back(random_object(rng, k, 2.5));
        const auto w = sim::load_world(json{{"robot", {{"x", 50}, {"y", 50}}}, {"objects", objs}});
        const sim::Vec2 origin{pos(rng), pos(rng)};
        double heading = ang(rng);
        if (rng() % 4 != 0) {
            // aim near one of the objects
            const sim::Vec2 to = sim::centroid(w.objects[rng() % w.objects.size()].shape) - origin;
            heading = sim::rad2deg(std::atan2(to.y, to.x)) + (ang(rng) - 180) / 12;
        }
        const double fast = sim::raycast(w, origin, heading, 4.0);
        const double slow = rcs::testing::brute_force_raycast(w, origin, heading, 4.0);
        const double err = std::abs(fast - slow);
        worst = std::max(worst, err);
        if (err <= 1e-3) ++agree;
        if (slow < 4.0) ++hits;
    }

    int sequences = 0, violations = 0, commands = 0;
    std::uniform_real_distribution<double> u(0, 1);
    while (sequences < 10000) {
        json objs = json::array();
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int k = 0; k < n; ++k) objs.push_back(random_object(rng, k, 2.0));
        sim::WorldState w;
        try {
            w = sim::load_world(json{{"robot", {{"x", 0}, {"y", 0}, {"heading", ang(rng)}}}, {"objects", objs}});
        } catch (const Error&) {
            continue;
        }
        ++sequences;
        const int len = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < len; ++i) {
            Command c;
            switch (rng() % 5) {
                case 0:
                case 1: c = CarForward{0.01 + 2.0 * u(rng)}; break;
                case 2: c = CarBack{0.01 + 2.0 * u(rng)}; break;
                case 3: c = CarLeft{1 + 359 * u(rng)}; break;
                default: c = CarRight{1 + 359 * u(rng)}; break;
            }
            w = sim::apply_command(w, c).first;
            ++commands;
            if (sim::footprint_overlaps(w, w.robot.position())) ++violations;
        }
    }
    report(5, agree == scenes && violations == 0,
           fmt::format("raycast {}/{} scenes within 1e-3 m ({} with a hit, worst {:.2e} m); {} overlaps over {} "
                       "sequences / {} commands",
                       agree, scenes, hits, worst, violations, sequences, commands));
}

void criterion_6() {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> u(0, 1);
    int placements = 0, good = 0;
    while (placements < 500) {
        const double heading = 360 * u(rng);
        const sim::Vec2 robot{4 * u(rng) - 2, 4 * u(rng) - 2};
        const sim::Vec2 ahead = sim::unit(heading);
        // half start inside the threshold, half approach from further away
        const bool close = placements % 2 == 0;
        const double clearance = close ? 0.005 + 0.29 * u(rng) : 0.35 + 1.5 * u(rng);
        const double lateral = (u(rng) - 0.5) * 0.04;
        const sim::Vec2 side{-ahead.y, ahead.x};
        json obj;
        if (rng() % 2) {
            const double r = 0.05 + 0.4 * u(rng);
            const sim::Vec2 c = robot + (0.10 + clearance + r) * ahead + lateral * side;
            obj = rcs::testing::circle_obj("o", c.x, c.y, r);
        } else {
            // wall square to the heading
            const double half = 0.05 + 0.2 * u(rng);
            const sim::Vec2 c = robot + (0.10 + clearance + half) * ahead;
            const sim::Vec2 a = half * ahead, b = (0.5 + u(rng)) * side;
            json pts = json::array();
            for (const sim::Vec2 v : {c - a - b, c + a - b, c + a + b, c - a + b}) pts.push_back(json::array({v.x, v.y}));
            obj = json{{"id", "o"}, {"kind", "wall"}, {"shape", json{{"polygon", pts}}}};
        }
        sim::WorldState w;
        try {
            w = sim::load_world(
                json{{"robot", {{"x", robot.x}, {"y", robot.y}, {"heading", heading}}}, {"objects", {obj}}});
        } catch (const Error&) {
            continue;
        }
        if (close && !(sim::read_sensors(w).ultrasonic_clearance < w.params.avoid_threshold)) continue;
        ++placements;
        auto [next, res] = sim::apply_command(w, CarForward{close ? 1.0 : clearance + 1.0});
        const bool ok = res.outcome == Outcome::Avoided && res.heading_change == -90.0 &&
                        !sim::footprint_overlaps(next, next.robot.position()) &&
                        std::abs(sim::normalize_bearing(next.robot.heading - (heading - 90))) < 1e-9 &&
                        (!close || res.distance_travelled == 0.0);
        if (ok) ++good;
    }
    report(6, good == placements, fmt::format("{}/{} placements Avoided with -90 deg and no overlap", good, placements));
}

std::string random_text(std::mt19937& rng) {
    static const std::vector<std::string> words{"box", "red", "{", "}", "\"quoted\"", "남색", "ÿ", "\\", "\n",
                                                "FINISH", "a b", ",", ":", "[x]", "0.5"};
    std::string s;
    const int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) s += words[rng() % words.size()];
    return s;
}

Command random_command(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.001, 1.0);
    switch (rng() % 6) {
        case 0: return CarForward{10 * u(rng)};
        case 1: return CarBack{10 * u(rng)};
        case 2: return CarLeft{360 * u(rng)};
        case 3: return CarRight{360 * u(rng)};
        case 4: return CameraMove{-30 + 90 * u(rng)};
        default: return Buzzer{10 * u(rng)};
    }
}

void criterion_7() {
    std::mt19937 rng(7);
    int valid = 0, roundtrip = 0;
    for (int i = 0; i < 2000; ++i) {
        llm::AppDecision a;
        a.observation_desc = random_text(rng);
        a.comment = random_text(rng);
        a.status = rng() % 3 == 0 ? Status::Finish : Status::Continue;
        if (a.status == Status::Continue || rng() % 2) a.command = random_command(rng);
        ++valid;
        try {
            const std::string wrapped = "Decision:\n" + llm::app_decision_to_json(a).dump() + "\nend";
            if (llm::parse_app_decision(wrapped) == a) ++roundtrip;
        } catch (const Error&) {
        }

        llm::HostDecision h;
        h.observation_desc = random_text(rng);
        h.thoughts = random_text(rng);
        h.comment = random_text(rng);
        const int steps = 1 + static_cast<int>(rng() % 5);
        for (int k = 0; k < steps; ++k) h.global_plan.steps.push_back("step " + std::to_string(k) + random_text(rng));
        ++valid;
        try {
            const std::string wrapped = "Here is the plan:\n" + llm::host_decision_to_json(h).dump() + "\nDone.";
            if (llm::parse_host_decision(wrapped) == h) ++roundtrip;
        } catch (const Error&) {
        }
    }

    // schema-invalid completions
    const std::vector<std::string> invalid{
        "no object at all",
        R"({"observation":"o","comment":"c","status":"CONTINUE"})",
        R"({"observation":"o","comment":"c","status":"MAYBE"})",
        R"({"observation":"o","comment":"c","status":"CONTINUE","command":{"name":"fly","args":{}}})",
        R"({"observation":"o","comment":"c","status":"CONTINUE","command":{"name":"car_forward","args":{"distance":99}}})",
        R"({"observation":"o","status":"FINISH"})",
        R"({"observation":"o","comment":"c","status":"CONTINUE","command":{"name":"car_left"}})",
        "{\"observation\": \"o\", \"comment\": ",
    };
    int exact_attempts = 0, cases = 0;
    for (const auto& bad : invalid) {
        for (int max_retries : {0, 1, 2, 3, 5}) {
            ++cases;
            int attempts = 0;
            try {
                llm::with_retry(
                    [&] {
                        ++attempts;
                        return llm::parse_app_decision(bad);
                    },
                    max_retries);
            } catch (const Error&) {
                if (attempts == 1 + max_retries) ++exact_attempts;
            }
        }
    }

    int continue_cases = 0, rejected = 0;
    for (int i = 0; i < 500; ++i) {
        json j{{"observation", random_text(rng)}, {"comment", random_text(rng)}};
        j["status"] = std::vector<std::string>{"CONTINUE", "continue", " Continue "}[rng() % 3];
        if (rng() % 2) j["command"] = nullptr;
        ++continue_cases;
        try {
            llm::parse_app_decision(j.dump());
        } catch (const Error&) {
            ++rejected;
        }
    }
    report(7, roundtrip == valid && exact_attempts == cases && rejected == continue_cases,
           fmt::format("{}/{} valid round-trips, {}/{} invalid cases used exactly 1+max_retries attempts, {}/{} "
                       "CONTINUE-without-command rejected",
                       roundtrip, valid, exact_attempts, cases, rejected, continue_cases));
}

void criterion_8() {
    const auto base = std::filesystem::temp_directory_path() / "rcs_acceptance_traces";
    std::filesystem::remove_all(base);
    const auto run = [&](const std::string& endpoint, const std::string& name) {
        SuiteOptions opts;
        opts.label = name;
        opts.run.transport = bridge::Transport::parse(endpoint);
        opts.trace_dir = base / name;
        std::filesystem::create_directories(*opts.trace_dir);
        return run_suite(suite(), scripted_factory("oracle"), agents(), opts);
    };
    run("local:", "local");
    run("tcp:127.0.0.1:0", "tcp");
    int same = 0;
    std::string diff;
    for (const auto& s : suite().scenarios) {
        const auto read = [&](const std::string& name) {
            std::ifstream in(base / name / (s.id + ".trace"), std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const std::string a = read("local"), b = read("tcp");
        if (!a.empty() && a == b)
            ++same;
        else
            diff += " " + s.id;
    }
    report(8, same == 20, fmt::format("{}/20 traces byte-identical between local: and tcp:{}", same, diff));
}

void criterion_9() {
    SuiteOptions opts;
    opts.label = "finish_immediately";
    const SuiteRun run = run_suite(suite(), scripted_factory("finish_immediately"), agents(), opts);
    int needs = 0, caught = 0, successes = 0;
    for (const auto& s : suite().scenarios) {
        const ReportRow* row = run.report.row(s.id);
        if (row && row->judgement.verdict == agent::Verdict::Success) ++successes;
        if (!requires_actuation(s.goal, s.world)) continue;
        ++needs;
        if (row && row->judgement ==
                       Judgement{agent::Verdict::Failure, agent::FailureReason::FalseCompletion})
            ++caught;
    }
    report(9, needs >= 16 && caught == needs,
           fmt::format("{}/{} actuation scenarios judged FalseCompletion ({} total successes)", caught, needs,
                       successes));
}

template <class Fn>
void guarded(int n, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(n, false, fmt::format("exception: {}", e.what()));
    }
}

}  // namespace

int main() {
    guarded(1, criteria_1_and_2);
    guarded(3, criterion_3);
    guarded(4, criterion_4);
    guarded(5, criterion_5);
    guarded(6, criterion_6);
    guarded(7, criterion_7);
    guarded(8, criterion_8);
    guarded(9, criterion_9);
    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
