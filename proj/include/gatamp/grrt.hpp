#pragma once

#include <optional>
#include <vector>

#include "gatamp/geom.hpp"
#include "gatamp/kin.hpp"
#include "gatamp/rng.hpp"

namespace gatamp {

/// One gravity constraint per already-mated sub-part: its assembly direction
/// in the finished-part body frame plus the angle threshold.
struct StabilityConstraint {
    Vec3 direction{Vec3::UnitZ()};
    double threshold_deg = 0.0;
};

struct StabilityModel {
    std::vector<StabilityConstraint> constraints;

    bool empty() const { return constraints.empty(); }

    void add(const Vec3& direction, double threshold_deg) {
        constraints.push_back({direction.normalized(), threshold_deg});
    }
};

/// True iff EVERY assembly direction stays strictly more than its threshold
/// away from gravity. An empty model is vacuously stable (the two-object case).
inline bool gravity_stable(const Rotation& part_world_rotation, const StabilityModel& model) {
    for (const auto& c : model.constraints) {
        if (!(angle_deg(part_world_rotation * c.direction, gravity_direction()) >
              c.threshold_deg)) {
            return false;
        }
    }
    return true;
}

struct RRTParams {
    double step_size = 0.15;      // rad, per-joint cap between consecutive waypoints
    double goal_bias = 0.1;
    int max_iterations = 20000;
    double edge_resolution = 0.03;  // rad, per-joint densification step
    std::uint64_t seed = 0;
};

/// Everything a validity query needs: robot + world + payloads + the gravity
/// model of the held finished part, and which joints the planner may move.
struct PlanContext {
    const DualArmRobot* robot = nullptr;
    std::vector<PosedShape> world;
    Attachment right_attachment, left_attachment;
    StabilityModel stability;
    std::optional<Arm> holding_arm;  // arm whose payload the stability model constrains
    Pose finished_in_hand;           // finished-part body frame in the holding tool frame
    bool move_right = true, move_left = true;
};

/// Collision- and gravity-checked node validity (joint limits included).
inline bool node_valid(const DualJointConfig& q, const PlanContext& ctx) {
    const DualArmRobot& robot = *ctx.robot;
    if (!within_limits(robot.right_chain, q.right) || !within_limits(robot.left_chain, q.left)) {
        return false;
    }
    if (ctx.holding_arm && !ctx.stability.empty()) {
        const auto& chain = robot.chain(*ctx.holding_arm);
        const JointConfig& qa = *ctx.holding_arm == Arm::Right ? q.right : q.left;
        const Rotation part_rot = (fk(chain, qa) * ctx.finished_in_hand).rotation;
        if (!gravity_stable(part_rot, ctx.stability)) return false;
    }
    return !robot_collides(robot, q, ctx.world, ctx.right_attachment, ctx.left_attachment);
}

struct MotionPath {
    std::vector<DualJointConfig> waypoints;
    bool right_moves = false, left_moves = false;
    double step_size = 0.0;            // max per-joint delta between waypoints
    double checked_resolution = 0.0;   // densification step the path was validated at
};

namespace detail {

/// Flattens the moving arms' joints into one planning vector.
struct MovingSpace {
    const DualArmRobot* robot;
    bool right, left;
    DualJointConfig frozen;

    int dim() const {
        return (right ? static_cast<int>(robot->right_chain.dof()) : 0) +
               (left ? static_cast<int>(robot->left_chain.dof()) : 0);
    }

    Eigen::VectorXd to_vec(const DualJointConfig& q) const {
        Eigen::VectorXd x(dim());
        int k = 0;
        if (right) {
            for (double v : q.right) x[k++] = v;
        }
        if (left) {
            for (double v : q.left) x[k++] = v;
        }
        return x;
    }

    DualJointConfig from_vec(const Eigen::VectorXd& x) const {
        DualJointConfig q = frozen;
        int k = 0;
        if (right) {
            for (auto& v : q.right) v = x[k++];
        }
        if (left) {
            for (auto& v : q.left) v = x[k++];
        }
        return q;
    }

    void limits(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
        lo.resize(dim());
        hi.resize(dim());
        int k = 0;
        if (right) {
            for (const auto& j : robot->right_chain.joints) {
                lo[k] = j.lo;
                hi[k] = j.hi;
                ++k;
            }
        }
        if (left) {
            for (const auto& j : robot->left_chain.joints) {
                lo[k] = j.lo;
                hi[k] = j.hi;
                ++k;
            }
        }
    }
};

inline bool edge_valid(const MovingSpace& space, const Eigen::VectorXd& from,
                       const Eigen::VectorXd& to, const PlanContext& ctx, double resolution) {
    const double span = (to - from).cwiseAbs().maxCoeff();
    const int steps = std::max(1, static_cast<int>(std::ceil(span / resolution)));
    for (int s = 1; s <= steps; ++s) {
        const Eigen::VectorXd x = from + (to - from) * (static_cast<double>(s) / steps);
        if (!node_valid(space.from_vec(x), ctx)) return false;
    }
    return true;
}

}  // namespace detail

/// Single-tree RRT over the moving-arm joint space. Node and edge acceptance
/// both run the combined collision + gravity validity check. Deterministic
/// for a given params.seed.
inline std::optional<MotionPath> plan_rrt(const DualJointConfig& q_start,
                                          const DualJointConfig& q_goal, const PlanContext& ctx,
                                          const RRTParams& params) {
    detail::MovingSpace space{ctx.robot, ctx.move_right, ctx.move_left, q_start};
    if (!ctx.move_right) {
        for (std::size_t i = 0; i < q_start.right.size(); ++i) {
            if (std::abs(q_start.right[i] - q_goal.right[i]) > 1e-12) {
                throw invalid_argument_error("plan_rrt: goal moves a frozen arm");
            }
        }
    }
    if (!ctx.move_left) {
        for (std::size_t i = 0; i < q_start.left.size(); ++i) {
            if (std::abs(q_start.left[i] - q_goal.left[i]) > 1e-12) {
                throw invalid_argument_error("plan_rrt: goal moves a frozen arm");
            }
        }
    }
    if (!node_valid(q_start, ctx)) throw invalid_argument_error("plan_rrt: invalid start");
    if (!node_valid(q_goal, ctx)) throw invalid_argument_error("plan_rrt: invalid goal");

    const Eigen::VectorXd x_start = space.to_vec(q_start);
    const Eigen::VectorXd x_goal = space.to_vec(q_goal);

    MotionPath path;
    path.right_moves = ctx.move_right;
    path.left_moves = ctx.move_left;
    path.step_size = params.step_size;
    path.checked_resolution = params.edge_resolution;

    if ((x_goal - x_start).cwiseAbs().maxCoeff() < 1e-12) {
        path.waypoints = {q_start};
        return path;
    }

    Eigen::VectorXd lo, hi;
    space.limits(lo, hi);

    struct Node {
        Eigen::VectorXd x;
        int parent;
    };
    std::vector<Node> tree;
    tree.push_back({x_start, -1});

    Rng rng(derive_seed(params.seed, 0x66));
    const int dim = space.dim();

    for (int iter = 0; iter < params.max_iterations; ++iter) {
        Eigen::VectorXd sample(dim);
        if (rng.next_double() < params.goal_bias) {
            sample = x_goal;
        } else {
            for (int i = 0; i < dim; ++i) sample[i] = rng.uniform(lo[i], hi[i]);
        }

        int nearest = 0;
        double best = (tree[0].x - sample).squaredNorm();
        for (std::size_t i = 1; i < tree.size(); ++i) {
            const double d = (tree[i].x - sample).squaredNorm();
            if (d < best) {
                best = d;
                nearest = static_cast<int>(i);
            }
        }

        Eigen::VectorXd dir = sample - tree[nearest].x;
        const double span = dir.cwiseAbs().maxCoeff();
        if (span < 1e-12) continue;
        if (span > params.step_size) dir *= params.step_size / span;
        const Eigen::VectorXd x_new = tree[nearest].x + dir;

        if (!detail::edge_valid(space, tree[nearest].x, x_new, ctx, params.edge_resolution)) {
            continue;
        }
        tree.push_back({x_new, nearest});

        if ((x_goal - x_new).cwiseAbs().maxCoeff() <= params.step_size &&
            detail::edge_valid(space, x_new, x_goal, ctx, params.edge_resolution)) {
            std::vector<Eigen::VectorXd> rev{x_goal};
            for (int at = static_cast<int>(tree.size()) - 1; at >= 0; at = tree[at].parent) {
                rev.push_back(tree[at].x);
            }
            for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
                path.waypoints.push_back(space.from_vec(*it));
            }
            return path;
        }
    }
    return std::nullopt;
}

/// Re-checks node validity along every segment at the given (denser)
/// per-joint resolution. The independent certificate for planned paths.
inline bool path_validate(const MotionPath& path, const PlanContext& ctx, double resolution) {
    if (path.waypoints.empty()) return false;
    detail::MovingSpace space{ctx.robot, true, true, path.waypoints.front()};
    if (!node_valid(path.waypoints.front(), ctx)) return false;
    for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
        if (!detail::edge_valid(space, space.to_vec(path.waypoints[i]),
                                space.to_vec(path.waypoints[i + 1]), ctx, resolution)) {
            return false;
        }
    }
    return true;
}

inline double path_length(const MotionPath& path) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
        double d2 = 0.0;
        auto acc = [&d2](const JointConfig& a, const JointConfig& b) {
            for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
        };
        acc(path.waypoints[i].right, path.waypoints[i + 1].right);
        acc(path.waypoints[i].left, path.waypoints[i + 1].left);
        len += std::sqrt(d2);
    }
    return len;
}

/// Shortcut smoothing: splices strictly-shorter valid straight segments
/// between random waypoint pairs. Never lengthens the path; the result still
/// satisfies the per-joint step bound and path_validate.
inline MotionPath smooth_path(const MotionPath& path, const PlanContext& ctx, int attempts,
                              std::uint64_t seed) {
    if (attempts <= 0 || path.waypoints.size() < 3) return path;
    detail::MovingSpace space{ctx.robot, true, true, path.waypoints.front()};

    MotionPath out = path;
    Rng rng(derive_seed(seed, 0x5c));
    for (int a = 0; a < attempts; ++a) {
        const std::size_t n = out.waypoints.size();
        if (n < 3) break;
        std::size_t i = rng.next_below(n);
        std::size_t j = rng.next_below(n);
        if (i > j) std::swap(i, j);
        if (j - i < 2) continue;

        const Eigen::VectorXd xi = space.to_vec(out.waypoints[i]);
        const Eigen::VectorXd xj = space.to_vec(out.waypoints[j]);
        double old_len = 0.0;
        for (std::size_t k = i; k < j; ++k) {
            old_len += (space.to_vec(out.waypoints[k + 1]) - space.to_vec(out.waypoints[k])).norm();
        }
        if ((xj - xi).norm() >= old_len - 1e-12) continue;  // no strict improvement
        if (!detail::edge_valid(space, xi, xj, ctx, out.checked_resolution)) continue;

        // re-densify the shortcut to keep the per-joint step bound
        std::vector<DualJointConfig> spliced(out.waypoints.begin(),
                                             out.waypoints.begin() + i + 1);
        const double span = (xj - xi).cwiseAbs().maxCoeff();
        const double cap = out.step_size > 0 ? out.step_size : span;
        const int steps = std::max(1, static_cast<int>(std::ceil(span / cap)));
        for (int s = 1; s < steps; ++s) {
            spliced.push_back(space.from_vec(xi + (xj - xi) * (static_cast<double>(s) / steps)));
        }
        spliced.insert(spliced.end(), out.waypoints.begin() + j, out.waypoints.end());
        out.waypoints = std::move(spliced);
    }
    return out;
}

}  // namespace gatamp
