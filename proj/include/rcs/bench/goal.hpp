#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcs/core/memory.hpp"
#include "rcs/sim/world.hpp"

namespace rcs::bench {

enum class CmpOp { Lt, Le, Eq, Ge, Gt };

std::string_view cmp_op_name(CmpOp op);
CmpOp parse_cmp_op(std::string_view s);

// Atoms. Lengths in meters, angles in degrees.
struct Near { std::string object_id; double d = 0; };
struct BuzzerCount { CmpOp op = CmpOp::Ge; int n = 0; };
struct PoseWithin { double x = 0, y = 0, tol = 0; };
struct HeadingWithin { double deg = 0, tol = 0; };
// Case-insensitive search in the comment of the last round.
struct CommentMatches { std::string pattern; };
// Summed distance_travelled over the trace, 1e-6 slack.
struct PathLengthAtLeast { double m = 0; };
// Summed |heading_change| over the trace, 1e-6 slack.
struct RotationAtLeast { double deg = 0; };
struct CameraPitchAtLeast { double deg = 0; };

struct Goal;
struct And { std::vector<Goal> terms; };
struct Or { std::vector<Goal> terms; };
struct Not { std::shared_ptr<const Goal> term; };

struct Goal {
    std::variant<Near, BuzzerCount, PoseWithin, HeadingWithin, CommentMatches, PathLengthAtLeast, RotationAtLeast,
                 CameraPitchAtLeast, And, Or, Not>
        node;
};

inline constexpr double kGoalSlack = 1e-6;

// Throws SchemaError on unknown keys or bad arguments.
Goal goal_from_json(const nlohmann::json& j);
nlohmann::json goal_to_json(const Goal& g);

// Throws SchemaError when a Near atom names an object missing from the world.
void check_goal(const Goal& g, const sim::WorldState& world);

struct EvalOptions {
    // Treat every CommentMatches atom as satisfied.
    bool comments_hold = false;
};

bool evaluate(const Goal& g, const sim::WorldState& world, const MemoryLog& trace, EvalOptions opts = {});

// True when the goal cannot hold in the initial world with an empty trace,
// even granting every comment: something has to move or beep.
bool requires_actuation(const Goal& g, const sim::WorldState& initial);

}  // namespace rcs::bench
