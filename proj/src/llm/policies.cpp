#include "rcs/llm/policies.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "rcs/error.hpp"
#include "rcs/llm/backend.hpp"
#include "rcs/llm/decision.hpp"

namespace rcs::llm {

double PromptView::travelled() const {
    double sum = 0;
    for (const auto& r : memory) sum += r.travelled;
    return sum;
}

namespace {

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool contains_ci(const std::string& hay, const std::string& needle) {
    return lower(hay).find(lower(needle)) != std::string::npos;
}

void parse_items(const std::string& text, std::vector<PromptView::Item>& out) {
    static const std::regex head(
        R"(^- (.*?) \| color=(.*?) \| shape=(.*?) \| distance=([-0-9.]+) m \| bearing=([-+0-9.]+) deg(.*)$)");
    static const std::regex text_re(R"re(\| text="(.*?)"(?: \||$))re");
    static const std::regex face_re(R"re(\| face="(.*?)"$)re");
    for (const auto& line : lines_of(text)) {
        std::smatch m;
        if (!std::regex_match(line, m, head)) continue;
        PromptView::Item item;
        item.label = m[1];
        item.color = m[2];
        item.shape = m[3];
        item.distance = std::stod(m[4]);
        item.bearing = std::stod(m[5]);
        const std::string rest = m[6];
        std::smatch t;
        if (std::regex_search(rest, t, text_re)) item.text = t[1];
        if (std::regex_search(rest, t, face_re)) item.face = t[1];
        out.push_back(std::move(item));
    }
}

void parse_sensors(const std::string& text, SensorData& s) {
    static const std::regex clear(R"(ultrasonic_clearance: ([0-9.]+))");
    std::smatch m;
    if (std::regex_search(text, m, clear)) s.ultrasonic_clearance = std::stod(m[1]);
    s.ir_left = text.find("ir_left: true") != std::string::npos;
    s.ir_right = text.find("ir_right: true") != std::string::npos;
}

void parse_memory(const std::string& text, std::vector<PromptView::PastRound>& out) {
    static const std::regex header(R"(^\[round (\d+)\] status=(\w+)$)");
    static const std::regex action(R"(^action: (\w+)\(\w+=([-0-9.e+]+)\)$)");
    static const std::regex result(
        R"(^result: (\w+) travelled=([-0-9.]+) m heading_change=([-+0-9.]+) deg clearance=[0-9.]+ m$)");
    for (const auto& line : lines_of(text)) {
        std::smatch m;
        if (std::regex_match(line, m, header)) {
            PromptView::PastRound r;
            r.index = std::stoi(m[1]);
            r.status = m[2];
            r.action = "none";
            r.outcome = "none";
            out.push_back(std::move(r));
            continue;
        }
        if (out.empty()) continue;
        auto& r = out.back();
        if (line.rfind("comment: ", 0) == 0) {
            r.comment = line.substr(9);
        } else if (std::regex_match(line, m, action)) {
            r.action = m[1];
            r.arg = std::stod(m[2]);
        } else if (std::regex_match(line, m, result)) {
            r.outcome = m[1];
            r.travelled = std::stod(m[2]);
            r.heading_change = std::stod(m[3]);
        }
    }
}

void parse_plan(const std::string& text, std::vector<std::string>& out) {
    static const std::regex step(R"(^\d+\. (.*)$)");
    for (const auto& line : lines_of(text)) {
        std::smatch m;
        if (std::regex_match(line, m, step)) out.push_back(m[1]);
    }
}

}  // namespace

PromptView parse_prompt_view(const Prompt& prompt) {
    PromptView v;
    v.host = prompt.block(BlockKind::Plan) == nullptr;
    for (const auto& b : prompt.user_blocks) {
        switch (b.kind) {
            case BlockKind::Request: v.request = b.content; break;
            case BlockKind::Plan: parse_plan(b.content, v.plan); break;
            case BlockKind::Observation: parse_items(b.content, v.items); break;
            case BlockKind::Sensors: parse_sensors(b.content, v.sensors); break;
            case BlockKind::Memory: parse_memory(b.content, v.memory); break;
        }
    }
    return v;
}

namespace {

using View = PromptView;

// One App Agent move: a command, or FINISH when absent.
struct Act {
    std::string comment;
    std::optional<Command> command;
};

Act finish(std::string comment) { return {std::move(comment), std::nullopt}; }
Act go(std::string comment, Command c) { return {std::move(comment), c}; }

double round_to(double x, double q) { return std::round(x / q) * q; }

std::string summarize(const View& v) {
    if (v.items.empty()) return "Nothing in view.";
    std::string out;
    for (const auto& it : v.items) {
        if (!out.empty()) out += "; ";
        out += fmt::format("{} {} at {:.2f} m, {:+.1f} deg", it.color, it.label, it.distance, it.bearing);
    }
    return out;
}

std::string app_output(const View& v, const Act& act) {
    AppDecision d;
    d.observation_desc = summarize(v);
    d.comment = act.comment;
    d.command = act.command;
    d.status = act.command ? Status::Continue : Status::Finish;
    return app_decision_to_json(d).dump();
}

std::string host_output(const View& v, const std::vector<std::string>& plan, const std::string& thoughts) {
    HostDecision d;
    d.observation_desc = summarize(v);
    d.thoughts = thoughts;
    d.global_plan = make_plan(plan);
    d.comment = "Plan ready.";
    return host_decision_to_json(d).dump();
}

using Pred = std::function<bool(const View::Item&)>;

const View::Item* nearest(const View& v, const Pred& pred) {
    const View::Item* best = nullptr;
    for (const auto& it : v.items)
        if (pred(it) && (!best || it.distance < best->distance)) best = &it;
    return best;
}

std::optional<Command> turn_toward(double bearing) {
    const double a = round_to(std::abs(bearing), 0.1);
    if (a < 0.1) return std::nullopt;
    return bearing > 0 ? Command{CarLeft{a}} : Command{CarRight{a}};
}

int count_actions(const View& v, const std::string& name) {
    return static_cast<int>(
        std::count_if(v.memory.begin(), v.memory.end(), [&](const auto& r) { return r.action == name; }));
}

// Scan left until a match shows up, face it, then optionally drive to
// `approach` meters from its surface. `done` writes the final comment.
struct Seek {
    Pred match;
    std::optional<double> approach;
    std::function<std::string(const View::Item&)> done;
    double scan_step = 60.0;
    int max_scans = 6;
    double face_tolerance = 5.0;

    // Empty when the target has been reached.
    std::optional<Act> step(const View& v) const {
        const auto* it = nearest(v, match);
        if (!it) {
            if (count_actions(v, "car_left") >= max_scans) return finish("I could not find the target.");
            return go("Target not in view, turning left to scan.", CarLeft{scan_step});
        }
        if (std::abs(it->bearing) > face_tolerance) {
            if (auto t = turn_toward(it->bearing))
                return go(fmt::format("Turning toward the {}.", it->label), *t);
        }
        if (approach && it->distance > *approach + 0.15) {
            const double d = round_to(it->distance - *approach, 0.01);
            return go(fmt::format("Driving toward the {}.", it->label), CarForward{std::min(d, limits::kMaxDistance)});
        }
        return std::nullopt;
    }

    Act act(const View& v) const {
        if (auto a = step(v)) return *a;
        return finish(done(*nearest(v, match)));
    }
};

// Fixed command list, then FINISH with a comment computed from the last view.
struct Script {
    std::vector<Command> commands;
    std::function<std::string(const View&)> done;

    Act act(const View& v) const {
        const auto i = static_cast<std::size_t>(v.round());
        if (i < commands.size()) return go(fmt::format("Step {} of {}.", i + 1, commands.size()), commands[i]);
        return finish(done(v));
    }
};

std::string text_comment(const View& v, const std::string& fmt_str, const std::string& fallback) {
    for (const auto& it : v.items)
        if (it.text) return fmt::format(fmt::runtime(fmt_str), it.label, *it.text);
    return fallback;
}

struct Oracle {
    std::vector<std::string> plan;
    std::function<Act(const View&)> act;
};

Pred label_is(std::string label) {
    return [label = std::move(label)](const View::Item& it) { return it.label == label; };
}

std::map<std::string, Oracle> build_oracles() {
    std::map<std::string, Oracle> m;

    m["Move around and search for the location of the refrigerator."] = {
        {"Look around for the refrigerator", "Drive up to it", "Report what was found"},
        [](const View& v) {
            Seek s{label_is("refrigerator"), 0.45,
                   [](const auto& it) { return fmt::format("Found the {} {} in front of me.", it.color, it.label); }};
            return s.act(v);
        }};

    m["Look for any people in the immediate vicinity."] = {
        {"Turn until a person is in view", "Face the person", "Describe them"},
        [](const View& v) {
            Seek s{label_is("person"), std::nullopt,
                   [](const auto& it) { return fmt::format("I am looking at the person, {:.2f} m away.", it.distance); }};
            return s.act(v);
        }};

    m["Move around and search for any people in the surrounding area."] = {
        {"Scan for a person", "Face them", "Drive within about a meter", "Report"},
        [](const View& v) {
            Seek s{label_is("person"), 1.0,
                   [](const auto& it) { return fmt::format("I reached the person, {:.2f} m away.", it.distance); }};
            return s.act(v);
        }};

    m["If a rectangular object is seen, move towards it and activate the buzzer."] = {
        {"Look for a rectangular box", "Drive up to it", "Beep once"},
        [](const View& v) {
            Seek s{[](const auto& it) { return it.shape == "rectangle"; }, 0.45,
                   [](const auto&) { return std::string("Reached the rectangular box and beeped."); }};
            if (auto a = s.step(v)) return *a;
            if (count_actions(v, "buzzer") == 0) return go("At the box, beeping.", Buzzer{1.0});
            return finish("Reached the rectangular box and beeped.");
        }};

    m["Find yellow obstacles and tell me what is written on them."] = {
        {"Read the text on the yellow object", "Report it"},
        [](const View& v) {
            for (const auto& it : v.items)
                if (it.color == "yellow" && it.text)
                    return finish(fmt::format("The yellow {} says: {}", it.label, *it.text));
            return finish("I cannot read anything on a yellow object.");
        }};

    m["Rotate in a 0.6-meter square shape."] = {
        {"Drive 0.6 m and turn left 90 degrees", "Repeat four times"},
        [](const View& v) {
            std::vector<Command> cmds;
            for (int i = 0; i < 4; ++i) {
                cmds.emplace_back(CarForward{0.6});
                cmds.emplace_back(CarLeft{90});
            }
            return Script{cmds, [](const View&) { return std::string("Finished the square."); }}.act(v);
        }};

    m["Lift your head, identify a human face, and describe it."] = {
        {"Tilt the camera up step by step", "Describe the face once visible"},
        [](const View& v) {
            for (const auto& it : v.items)
                if (it.face) return finish(fmt::format("The person's face: {}", *it.face));
            double pitch = 0;
            for (const auto& r : v.memory)
                if (r.action == "camera_move") pitch = r.arg;
            if (pitch >= limits::kMaxPitch) return finish("I could not see a face.");
            return go("No face in view yet, raising the camera.", CameraMove{std::min(limits::kMaxPitch, pitch + 15)});
        }};

    m["Rotate twice on the spot"] = {
        {"Rotate left 360 degrees in place", "Stop"},
        [](const View& v) {
            return Script{{CarLeft{360}}, [](const View&) { return std::string("Done rotating."); }}.act(v);
        }};

    m["Move in a zigzag pattern at a 30-degree angle for a distance of 2 meters."] = {
        {"Alternate left and right headings", "Drive 0.5 m per leg", "Stop after 2 m"},
        [](const View& v) {
            return Script{{CarLeft{30}, CarForward{0.5}, CarRight{60}, CarForward{0.5}, CarLeft{60}, CarForward{0.5},
                           CarRight{60}, CarForward{0.5}},
                          [](const View&) { return std::string("Zigzag complete."); }}
                .act(v);
        }};

    m["Move backwards 0.4 meters and sound the buzzer, repeat this 5 times."] = {
        {"Back up 0.4 m", "Beep", "Repeat five times"},
        [](const View& v) {
            std::vector<Command> cmds;
            for (int i = 0; i < 5; ++i) {
                cmds.emplace_back(CarBack{0.4});
                cmds.emplace_back(Buzzer{1.0});
            }
            return Script{cmds, [](const View&) { return std::string("Backed up and beeped five times."); }}.act(v);
        }};

    m["Move forward avoiding obstacles"] = {
        {"Veer left around the first box", "Continue forward", "Come back to the center line"},
        [](const View& v) {
            return Script{{CarForward{0.5}, CarLeft{45}, CarForward{0.57}, CarRight{45}, CarForward{1.2},
                           CarRight{45}, CarForward{0.57}},
                          [](const View&) { return std::string("Arrived 2.5 m ahead."); }}
                .act(v);
        }};

    m["Move forward for a total of 2 meters, turning right and activating the buzzer when obstacles appear."] = {
        {"Drive forward", "Beep if the path is blocked", "Continue on the new heading"},
        [](const View& v) {
            const double left = 2.0 - v.travelled();
            const auto* last = v.last();
            if (last && last->outcome == "Avoided") return go("Something is in the way, beeping.", Buzzer{1.0});
            if (left > 0.005) return go("Driving forward.", CarForward{round_to(left, 0.01)});
            return finish("Covered 2 meters.");
        }};

    m["Move to find a bosch box while avoiding obstacles"] = {
        {"Go around the obstacle on the left", "Line up with the labeled box", "Check the label"},
        [](const View& v) {
            return Script{{CarLeft{45}, CarForward{0.57}, CarRight{45}, CarForward{0.9}, CarRight{90},
                           CarForward{0.4}, CarLeft{90}},
                          [](const View& w) {
                              return text_comment(w, "I am at the {} labeled {}.", "I do not see the label.");
                          }}
                .act(v);
        }};

    m["Rotate once while observing the surroundings, then move 1 meter in a direction without obstacles"] = {
        {"Turn a full circle while checking for obstacles", "Face the open side", "Drive 1 meter"},
        [](const View& v) {
            return Script{{CarLeft{90}, CarLeft{90}, CarLeft{90}, CarLeft{90}, CarLeft{90}, CarForward{1.0}},
                          [](const View&) { return std::string("Moved 1 m toward the open side."); }}
                .act(v);
        }};

    m["After observing obstacles in front, move behind the observed object, stop, and activate the buzzer."] = {
        {"Step aside", "Drive past the box", "Come back behind it", "Beep"},
        [](const View& v) {
            return Script{{CarLeft{90}, CarForward{0.5}, CarRight{90}, CarForward{1.6}, CarRight{90},
                           CarForward{0.5}, Buzzer{1.0}},
                          [](const View&) { return std::string("Behind the box, beeped."); }}
                .act(v);
        }};

    m["Describe the features of the object in front"] = {
        {"Describe the nearest object ahead"},
        [](const View& v) {
            const auto* it = nearest(v, [](const auto& i) { return std::abs(i.bearing) < 15; });
            if (!it) return finish("There is nothing in front of me.");
            return finish(fmt::format("The object in front is a {} {}, {} shaped, about {:.2f} m away.", it->color,
                                      it->label, it->shape, it->distance));
        }};

    m["Detect the surroundings and describe only navy-colored objects in Korean"] = {
        {"주변을 돌며 남색 물건을 찾는다", "찾으면 보고한다"},
        [](const View& v) {
            Seek s{[](const auto& it) { return it.color == "navy"; }, std::nullopt,
                   [](const auto& it) { return fmt::format("남색 {}을(를) 찾았습니다.", it.label); }};
            s.face_tolerance = 90;
            return s.act(v);
        }};

    m["Move forward 0.5 meters, observe the surroundings, and tell me the name of the box."] = {
        {"Drive 0.5 m", "Read the label"},
        [](const View& v) {
            return Script{{CarForward{0.5}}, [](const View& w) {
                              return text_comment(w, "The label on the {} says \"{}\".", "I could not read a label.");
                          }}
                .act(v);
        }};

    m["After moving 2 meters, if there is a paper in front, print out what is written on it."] = {
        {"Drive 2 m", "Read the paper"},
        [](const View& v) {
            return Script{{CarForward{1.0}, CarForward{1.0}}, [](const View& w) {
                              return text_comment(w, "The {} says \"{}\".", "I could not read the paper.");
                          }}
                .act(v);
        }};

    m["From the paper observed in front, tell me the contact information for the Ministry of Science, ICT and Future Planning."] = {
        {"Read the paper", "Extract the phone number"},
        [](const View& v) {
            static const std::regex phone(R"([0-9][0-9-]{6,}[0-9])");
            for (const auto& it : v.items) {
                std::smatch m;
                if (it.text && std::regex_search(*it.text, m, phone))
                    return finish(fmt::format("The contact number is {}.", m.str()));
            }
            return finish("I could not find a contact number.");
        }};

    m["Find the box that says Bosch."] = {
        {"Back up if the view is blocked", "Look for a box with the Bosch label", "Approach it",
         "Raise the camera to confirm the label"},
        [](const View& v) {
            const auto* it = nearest(v, [](const auto& i) { return i.text && contains_ci(*i.text, "bosch"); });
            if (it) {
                if (std::abs(it->bearing) > 5) return go("Turning toward the Bosch box.", *turn_toward(it->bearing));
                if (it->distance > 0.65)
                    return go("Approaching the Bosch box.", CarForward{round_to(it->distance - 0.5, 0.01)});
                return finish(fmt::format("This {} {} says {}.", it->color, it->label, *it->text));
            }
            if (v.memory.empty() && v.sensors.ultrasonic_clearance < 0.3)
                return go("Too close to see anything, backing up.", CarBack{1.0});
            if (const auto* last = v.last(); last && last->action == "car_forward")
                return go("Raising the camera to read the label.", CameraMove{30});
            if (count_actions(v, "car_left") >= 12) return finish("I could not find a Bosch box.");
            return go("Scanning.", CarLeft{30});
        }};

    m["Move forward avoiding obstacles."] = {
        {"Swerve right around the first obstacle", "Swerve left around the second", "Drive to the far side"},
        [](const View& v) {
            return Script{{CarForward{0.3}, CarRight{45}, CarForward{0.57}, CarLeft{45}, CarForward{1.0},
                           CarLeft{45}, CarForward{0.57}, CarRight{45}, CarForward{1.0}},
                          [](const View&) { return std::string("Reached the far side."); }}
                .act(v);
        }};

    return m;
}

const std::map<std::string, Oracle>& oracles() {
    static const auto m = build_oracles();
    return m;
}

// Requests without a table entry: one forward move if the plan asks for it.
Oracle generic_oracle() {
    return {{"Carry out the request"}, [](const View& v) {
                if (v.round() == 0) {
                    for (const auto& s : v.plan)
                        if (contains_ci(s, "forward")) return go("Moving forward.", CarForward{0.5});
                }
                return finish("Done.");
            }};
}

std::string oracle_policy(const Prompt& prompt) {
    const View v = parse_prompt_view(prompt);
    const auto it = oracles().find(v.request);
    const Oracle o = it != oracles().end() ? it->second : generic_oracle();
    if (v.host) return host_output(v, o.plan, "Break the request into short steps.");
    return app_output(v, o.act(v));
}

std::string finish_immediately(const Prompt& prompt) {
    const View v = parse_prompt_view(prompt);
    if (v.host) return host_output(v, {"Report completion"}, "Nothing to do.");
    return app_output(v, finish("Task complete."));
}

std::string never_finish(const Prompt& prompt) {
    const View v = parse_prompt_view(prompt);
    if (v.host) return host_output(v, {"Keep turning"}, "Turn in small steps.");
    return app_output(v, go("Still turning.", CarLeft{10}));
}

}  // namespace

std::vector<std::string> scripted_policy_ids() { return {"oracle", "finish_immediately", "never_finish"}; }

Policy find_policy(const std::string& id) {
    if (id == "oracle") return oracle_policy;
    if (id == "finish_immediately") return finish_immediately;
    if (id == "never_finish") return never_finish;
    throw Error(ErrorCode::PolicyUnknown, fmt::format("'{}'", id));
}

}  // namespace rcs::llm
