#pragma once

#include <optional>
#include <vector>

#include "gatamp/convex.hpp"
#include "gatamp/geom.hpp"
#include "gatamp/grasp.hpp"
#include "gatamp/rng.hpp"

namespace gatamp {

using JointConfig = std::vector<double>;

struct DualJointConfig {
    JointConfig right;
    JointConfig left;
};

enum class Arm { Right, Left };

inline const char* to_string(Arm a) { return a == Arm::Right ? "right" : "left"; }

struct Joint {
    Pose origin;              // fixed transform from the parent link frame
    Vec3 axis{Vec3::UnitZ()};  // unit rotation axis in the joint frame
    double lo = -M_PI;
    double hi = M_PI;
};

/// Serial revolute chain. `mount` is the chain root in world frame; the tool
/// frame is the gripper palm frame.
struct KinematicChain {
    Pose mount;
    std::vector<Joint> joints;
    Pose tool;

    std::size_t dof() const { return joints.size(); }
};

struct PosedShape {
    ConvexShape shape;
    Pose pose;
};

/// Rigid payload carried by a hand: convex pieces posed relative to the tool
/// frame. Multiple pieces cover both convex decompositions and the growing
/// multi-part finished assembly.
struct Attachment {
    std::vector<PosedShape> pieces;

    bool empty() const { return pieces.empty(); }
};

struct DualArmRobot {
    Pose base;
    KinematicChain right_chain, left_chain;
    Gripper right_gripper, left_gripper;
    std::vector<ConvexShape> right_link_shapes, left_link_shapes;  // one per joint; empty = none
    DualJointConfig home;

    const KinematicChain& chain(Arm a) const { return a == Arm::Right ? right_chain : left_chain; }
    const Gripper& gripper(Arm a) const { return a == Arm::Right ? right_gripper : left_gripper; }
    const std::vector<ConvexShape>& link_shapes(Arm a) const {
        return a == Arm::Right ? right_link_shapes : left_link_shapes;
    }
};

/// Per-joint frames (after each joint's rotation), world frame.
inline std::vector<Pose> fk_links(const KinematicChain& chain, const JointConfig& q) {
    if (q.size() != chain.joints.size()) {
        throw invalid_argument_error("fk: joint vector dimension mismatch");
    }
    std::vector<Pose> frames;
    frames.reserve(chain.joints.size());
    Pose t = chain.mount;
    for (std::size_t i = 0; i < chain.joints.size(); ++i) {
        t = t * chain.joints[i].origin * Pose(Vec3::Zero(), axis_angle(chain.joints[i].axis, q[i]));
        frames.push_back(t);
    }
    return frames;
}

/// Tool (gripper palm) pose, world frame.
inline Pose fk(const KinematicChain& chain, const JointConfig& q) {
    if (q.size() != chain.joints.size()) {
        throw invalid_argument_error("fk: joint vector dimension mismatch");
    }
    Pose t = chain.mount;
    for (std::size_t i = 0; i < chain.joints.size(); ++i) {
        t = t * chain.joints[i].origin * Pose(Vec3::Zero(), axis_angle(chain.joints[i].axis, q[i]));
    }
    return t * chain.tool;
}

/// Geometric Jacobian of the tool frame, rows [vx vy vz wx wy wz].
inline Eigen::MatrixXd jacobian(const KinematicChain& chain, const JointConfig& q) {
    const auto frames = fk_links(chain, q);
    const Vec3 p_tool = (frames.back() * chain.tool).position;
    Eigen::MatrixXd jac(6, static_cast<int>(chain.joints.size()));
    for (std::size_t i = 0; i < chain.joints.size(); ++i) {
        const Vec3 z = frames[i].rotation * chain.joints[i].axis;
        const Vec3 p = frames[i].position;
        jac.block<3, 1>(0, static_cast<int>(i)) = z.cross(p_tool - p);
        jac.block<3, 1>(3, static_cast<int>(i)) = z;
    }
    return jac;
}

/// Rotation error target∘current⁻¹ as a world-frame axis*angle vector.
inline Vec3 rotation_error(const Rotation& target, const Rotation& current) {
    Rotation delta = target * current.conjugate();
    delta.normalize();
    const Eigen::AngleAxisd aa(delta);
    return aa.angle() * aa.axis();
}

struct IkOptions {
    double pos_tol = 1e-4;
    double rot_tol = 1e-3;
    double damping = 0.05;
    int max_iterations = 200;
    int restarts = 10;
    double max_step = 0.5;  // per-iteration joint-delta cap, rad
    std::uint64_t seed = 0;
};

/// Damped least squares with joint-limit clamping and seeded random restarts.
/// Deterministic for given (target, seed_q, opts). Unreachable targets give
/// nullopt; a NaN target is an input error.
inline std::optional<JointConfig> ik(const KinematicChain& chain, const Pose& target,
                                     const JointConfig& seed_q, const IkOptions& opts = {}) {
    if (!target.is_finite()) throw invalid_argument_error("ik: target pose is not finite");
    if (seed_q.size() != chain.joints.size()) {
        throw invalid_argument_error("ik: seed dimension mismatch");
    }
    const int n = static_cast<int>(chain.joints.size());
    const double lambda2 = opts.damping * opts.damping;

    auto pose_error = [&](const JointConfig& q) {
        const Pose cur = fk(chain, q);
        Eigen::Matrix<double, 6, 1> e;
        e << target.position - cur.position, rotation_error(target.rotation, cur.rotation);
        return e;
    };

    auto clamp_into_limits = [&](JointConfig& q, const Eigen::VectorXd& dq) {
        bool clamped = false;
        for (int i = 0; i < n; ++i) {
            q[i] += dq[i];
            if (q[i] < chain.joints[i].lo) {
                q[i] = chain.joints[i].lo;
                clamped = true;
            } else if (q[i] > chain.joints[i].hi) {
                q[i] = chain.joints[i].hi;
                clamped = true;
            }
        }
        return clamped;
    };

    // stage 1: position only; orientation minima cannot trap a 3-row problem
    auto solve_position = [&](JointConfig q, int iters) {
        for (int iter = 0; iter < iters; ++iter) {
            const Vec3 ep = target.position - fk(chain, q).position;
            if (ep.norm() <= opts.pos_tol) break;
            const Eigen::MatrixXd jac = jacobian(chain, q).topRows<3>();
            const Eigen::Matrix3d jjt =
                jac * jac.transpose() + lambda2 * Eigen::Matrix3d::Identity();
            Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(ep);
            const double step = dq.cwiseAbs().maxCoeff();
            if (step > opts.max_step) dq *= opts.max_step / step;
            clamp_into_limits(q, dq);
        }
        return q;
    };

    // stage 2: full 6-D error with an adaptive damping factor
    auto solve_full = [&](JointConfig q, int iters) -> std::optional<JointConfig> {
        double lambda = opts.damping;
        Eigen::Matrix<double, 6, 1> e = pose_error(q);
        int stuck = 0;
        for (int iter = 0; iter < iters; ++iter) {
            if (e.head<3>().norm() <= opts.pos_tol && e.tail<3>().norm() <= opts.rot_tol) return q;

            const Eigen::MatrixXd jac = jacobian(chain, q);
            const Eigen::Matrix<double, 6, 6> jjt =
                jac * jac.transpose() + lambda * lambda * Eigen::Matrix<double, 6, 6>::Identity();
            Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(e);
            const double step = dq.cwiseAbs().maxCoeff();
            if (step > opts.max_step) dq *= opts.max_step / step;

            JointConfig trial = q;
            const bool clamped = clamp_into_limits(trial, dq);
            const Eigen::Matrix<double, 6, 1> e_trial = pose_error(trial);
            if (e_trial.norm() < e.norm()) {
                q = std::move(trial);
                e = e_trial;
                lambda = std::max(lambda * 0.5, opts.damping * 1e-2);
                stuck = clamped ? stuck : 0;
            } else {
                lambda *= 4.0;  // damp harder and retry from the same q
                if (lambda > 1e3) break;
            }
            if (clamped && ++stuck >= 10) break;  // pinned against a limit, try a restart
        }
        return std::nullopt;
    };

    auto solve_from = [&](const JointConfig& q) -> std::optional<JointConfig> {
        if (auto sol = solve_full(solve_position(q, opts.max_iterations / 4),
                                  opts.max_iterations)) {
            return sol;
        }
        return solve_full(q, opts.max_iterations);  // position-first can pick a bad posture
    };

    if (auto q = solve_from(seed_q)) return q;
    for (int attempt = 0; attempt < opts.restarts; ++attempt) {
        Rng rng(derive_seed(opts.seed, 0x1c, static_cast<std::uint64_t>(attempt)));
        JointConfig q(chain.joints.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            q[i] = rng.uniform(chain.joints[i].lo, chain.joints[i].hi);
        }
        if (auto sol = solve_from(std::move(q))) return sol;
    }
    return std::nullopt;
}

inline bool within_limits(const KinematicChain& chain, const JointConfig& q) {
    for (std::size_t i = 0; i < chain.joints.size(); ++i) {
        if (q[i] < chain.joints[i].lo || q[i] > chain.joints[i].hi) return false;
    }
    return true;
}

namespace detail {

struct ArmPieceSet {
    std::vector<PosedShape> body;        // links + hand
    std::vector<PosedShape> attachment;  // carried pieces
};

inline ArmPieceSet split_arm_pieces(const DualArmRobot& robot, Arm arm, const JointConfig& q,
                                    const Attachment& attachment) {
    ArmPieceSet set;
    const KinematicChain& chain = robot.chain(arm);
    const auto frames = fk_links(chain, q);
    const auto& link_shapes = robot.link_shapes(arm);
    for (std::size_t i = 0; i < link_shapes.size() && i < frames.size(); ++i) {
        if (!link_shapes[i].empty()) set.body.push_back({link_shapes[i], frames[i]});
    }
    const Pose tool = frames.back() * chain.tool;
    if (!robot.gripper(arm).hand_collision_shape.empty()) {
        set.body.push_back({robot.gripper(arm).hand_collision_shape, tool});
    }
    for (const auto& piece : attachment.pieces) {
        set.attachment.push_back({piece.shape, tool * piece.pose});
    }
    return set;
}

inline bool any_pair_collides(const std::vector<PosedShape>& a, const std::vector<PosedShape>& b) {
    for (const auto& pa : a) {
        for (const auto& pb : b) {
            if (collide(pa.shape, pa.pose, pb.shape, pb.pose)) return true;
        }
    }
    return false;
}

}  // namespace detail

/// One arm (links + hand + payload) against the world only. Cross-arm
/// interaction is deliberately excluded; pair-level checks handle it.
inline bool arm_collides(const DualArmRobot& robot, Arm arm, const JointConfig& q,
                         const std::vector<PosedShape>& world,
                         const Attachment& attachment = {}) {
    const auto pieces = detail::split_arm_pieces(robot, arm, q, attachment);
    return detail::any_pair_collides(pieces.body, world) ||
           detail::any_pair_collides(pieces.attachment, world);
}

/// True iff any of: link-world, cross-arm link-link, attachment-world,
/// attachment-other-arm, or attachment-attachment pairs collide.
inline bool robot_collides(const DualArmRobot& robot, const DualJointConfig& q,
                           const std::vector<PosedShape>& world,
                           const Attachment& right_attachment = {},
                           const Attachment& left_attachment = {}) {
    const auto right = detail::split_arm_pieces(robot, Arm::Right, q.right, right_attachment);
    const auto left = detail::split_arm_pieces(robot, Arm::Left, q.left, left_attachment);

    if (detail::any_pair_collides(right.body, world)) return true;
    if (detail::any_pair_collides(left.body, world)) return true;
    if (detail::any_pair_collides(right.attachment, world)) return true;
    if (detail::any_pair_collides(left.attachment, world)) return true;
    if (detail::any_pair_collides(right.body, left.body)) return true;
    if (detail::any_pair_collides(right.attachment, left.body)) return true;
    if (detail::any_pair_collides(left.attachment, right.body)) return true;
    if (detail::any_pair_collides(right.attachment, left.attachment)) return true;
    return false;
}

}  // namespace gatamp
