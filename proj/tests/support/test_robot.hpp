#pragma once

// Shared dual-arm model for tests: two mirrored 6-DOF elbow arms on a common
// torso, tool z = approach, tool y = jaw axis.

#include "gatamp/kin.hpp"

namespace gatamp::testing {

inline ConvexShape shifted_box(double sx, double sy, double sz, const Vec3& offset) {
    auto s = ConvexShape::box(sx, sy, sz);
    for (auto& v : s.vertices) v += offset;
    return ConvexShape::from_vertices(s.vertices);
}

inline Gripper test_gripper() {
    Gripper g;
    g.max_stroke = 0.08;
    g.finger_pad_width = 0.02;
    g.finger_pad_height = 0.02;
    g.palm_depth = 0.08;
    g.hand_collision_shape = shifted_box(0.06, 0.10, 0.08, Vec3(0, 0, -0.085));
    return g;
}

inline KinematicChain test_arm(double shoulder_y) {
    KinematicChain chain;
    chain.mount = Pose(Vec3(0.0, shoulder_y, 1.0), Rotation::Identity());

    auto add = [&](const Pose& origin, const Vec3& axis, double lo, double hi) {
        Joint j;
        j.origin = origin;
        j.axis = axis;
        j.lo = lo;
        j.hi = hi;
        chain.joints.push_back(j);
    };
    add(Pose(), Vec3::UnitZ(), -2.9, 2.9);                                       // shoulder pan
    add(Pose(), Vec3::UnitY(), -2.2, 2.2);                                       // shoulder pitch
    add(Pose(Vec3(0.35, 0, 0), Rotation::Identity()), Vec3::UnitY(), -2.5, 2.5);  // elbow
    add(Pose(Vec3(0.30, 0, 0), Rotation::Identity()), Vec3::UnitX(), -2.9, 2.9);  // forearm roll
    add(Pose(), Vec3::UnitY(), -2.2, 2.2);                                       // wrist pitch
    add(Pose(), Vec3::UnitX(), -2.9, 2.9);                                       // wrist roll

    // tool: approach along old +x, jaw along +y
    Mat3 m;
    m.col(0) = Vec3(0, 0, -1);
    m.col(1) = Vec3(0, 1, 0);
    m.col(2) = Vec3(1, 0, 0);
    chain.tool = Pose(Vec3(0.10, 0, 0), Rotation(m));
    return chain;
}

inline DualArmRobot test_robot() {
    DualArmRobot robot;
    robot.base = Pose();
    robot.right_chain = test_arm(-0.25);
    robot.left_chain = test_arm(0.25);
    robot.right_gripper = test_gripper();
    robot.left_gripper = test_gripper();

    std::vector<ConvexShape> links(6);
    links[1] = shifted_box(0.30, 0.07, 0.07, Vec3(0.175, 0, 0));  // upper arm
    links[2] = shifted_box(0.26, 0.06, 0.06, Vec3(0.14, 0, 0));   // forearm
    robot.right_link_shapes = links;
    robot.left_link_shapes = links;

    robot.home.right = JointConfig(6, 0.0);
    robot.home.left = JointConfig(6, 0.0);
    return robot;
}

inline JointConfig random_in_limits(const KinematicChain& chain, Rng& rng) {
    JointConfig q(chain.joints.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = rng.uniform(chain.joints[i].lo, chain.joints[i].hi);
    }
    return q;
}

}  // namespace gatamp::testing
