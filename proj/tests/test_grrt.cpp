#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gatamp/grrt.hpp"
#include "support/test_robot.hpp"

using namespace gatamp;
using gatamp::testing::test_robot;

namespace {

PlanContext free_context(const DualArmRobot& robot) {
    PlanContext ctx;
    ctx.robot = &robot;
    return ctx;
}

}  // namespace

TEST_CASE("gravity_stable") {
    StabilityModel up175;
    up175.add(Vec3(0, 0, 1), 175.0);

    SECTION("world-up direction at threshold 175 is stable (180 > 175)") {
        CHECK(gravity_stable(Rotation::Identity(), up175));
    }
    SECTION("tilting 10 degrees drops the angle to 170 and fails") {
        const Rotation tilt = axis_angle(Vec3::UnitY(), deg_to_rad(10.0));
        // rotation-then-angle oracle
        CHECK(angle_deg(tilt * Vec3(0, 0, 1), Vec3(0, 0, -1)) == Catch::Approx(170.0).margin(1e-9));
        CHECK_FALSE(gravity_stable(tilt, up175));
    }
    SECTION("conjunction over directions: one failing direction fails the model") {
        StabilityModel two;
        two.add(Vec3(0, 0, 1), 90.0);
        two.add(Vec3(1, 0, 0), 90.0);  // horizontal: angle exactly 90, not > 90
        CHECK_FALSE(gravity_stable(Rotation::Identity(), two));
        StabilityModel passing;
        passing.add(Vec3(0, 0, 1), 90.0);
        passing.add(Vec3(0.1, 0, 1).normalized(), 90.0);
        CHECK(gravity_stable(Rotation::Identity(), passing));
    }
    SECTION("empty model is identically true") {
        Rng rng(3);
        for (int i = 0; i < 50; ++i) {
            const Rotation r =
                frame_about_z(Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1))
                                  .normalized(),
                              rng.uniform(0, 2 * M_PI));
            CHECK(gravity_stable(r, StabilityModel{}));
        }
    }
}

TEST_CASE("node_valid combines collision and gravity") {
    const auto robot = test_robot();

    SECTION("home config with a stable hold in an empty world") {
        PlanContext ctx = free_context(robot);
        ctx.holding_arm = Arm::Right;
        ctx.finished_in_hand = Pose();
        // at home the tool x axis points world-down; its -x points up
        ctx.stability.add(Vec3(-1, 0, 0), 175.0);
        ctx.right_attachment.pieces.push_back(
            {ConvexShape::box(0.03, 0.03, 0.03), Pose(Vec3(0, 0, 0.02), Rotation::Identity())});
        CHECK(node_valid(robot.home, ctx));
    }
    SECTION("rotating the holding wrist to face the part down fails via gravity") {
        PlanContext ctx = free_context(robot);
        ctx.holding_arm = Arm::Right;
        ctx.stability.add(Vec3(-1, 0, 0), 175.0);
        DualJointConfig q = robot.home;
        q.right[5] = M_PI;  // wrist roll flips the part over
        // fk + gravity_stable oracle: collision-free but unstable
        const Rotation part_rot = fk(robot.right_chain, q.right).rotation;
        CHECK_FALSE(gravity_stable(part_rot, ctx.stability));
        CHECK_FALSE(robot_collides(robot, q, ctx.world));
        CHECK_FALSE(node_valid(q, ctx));
    }
    SECTION("collision fails the node even when the hold is stable") {
        PlanContext ctx = free_context(robot);
        ctx.holding_arm = Arm::Right;
        ctx.stability.add(Vec3(-1, 0, 0), 175.0);
        const Pose tool = fk(robot.right_chain, robot.home.right);
        ctx.world.push_back({ConvexShape::box(0.2, 0.2, 0.2), tool});
        CHECK_FALSE(node_valid(robot.home, ctx));
    }
}

TEST_CASE("plan_rrt basics") {
    const auto robot = test_robot();
    RRTParams params;
    params.seed = 11;

    SECTION("goal equals start") {
        const PlanContext ctx = free_context(robot);
        const auto path = plan_rrt(robot.home, robot.home, ctx, params);
        REQUIRE(path);
        CHECK(path->waypoints.size() == 1);
    }
    SECTION("free-space query connects with exact endpoints") {
        PlanContext ctx = free_context(robot);
        ctx.move_left = false;
        DualJointConfig goal = robot.home;
        goal.right = {0.4, 0.5, 0.9, -0.3, 0.5, 0.4};
        REQUIRE(node_valid(goal, ctx));
        const auto path = plan_rrt(robot.home, goal, ctx, params);
        REQUIRE(path);
        REQUIRE(path->waypoints.size() >= 2);
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(path->waypoints.front().right[i] == robot.home.right[i]);
            CHECK(path->waypoints.back().right[i] == goal.right[i]);
            CHECK(path->waypoints.front().left[i] == robot.home.left[i]);
        }
        CHECK(path_validate(*path, ctx, params.edge_resolution));
        // consecutive waypoints respect the per-joint step bound
        for (std::size_t i = 0; i + 1 < path->waypoints.size(); ++i) {
            for (std::size_t k = 0; k < 6; ++k) {
                CHECK(std::abs(path->waypoints[i + 1].right[k] - path->waypoints[i].right[k]) <=
                      params.step_size + 1e-12);
            }
        }
        // joint limits hold everywhere
        for (const auto& wp : path->waypoints) {
            CHECK(within_limits(robot.right_chain, wp.right));
        }
    }
    SECTION("same seed gives an identical path") {
        PlanContext ctx = free_context(robot);
        ctx.move_left = false;
        DualJointConfig goal = robot.home;
        goal.right = {0.4, 0.5, 0.9, -0.3, 0.5, 0.4};
        const auto a = plan_rrt(robot.home, goal, ctx, params);
        const auto b = plan_rrt(robot.home, goal, ctx, params);
        REQUIRE(a);
        REQUIRE(b);
        REQUIRE(a->waypoints.size() == b->waypoints.size());
        for (std::size_t i = 0; i < a->waypoints.size(); ++i) {
            for (int k = 0; k < 6; ++k) {
                CHECK(a->waypoints[i].right[k] == b->waypoints[i].right[k]);
            }
        }
    }
    SECTION("invalid endpoints are input errors") {
        PlanContext ctx = free_context(robot);
        const Pose tool = fk(robot.right_chain, robot.home.right);
        ctx.world.push_back({ConvexShape::box(0.3, 0.3, 0.3), tool});
        DualJointConfig goal = robot.home;
        goal.right[0] = 0.8;
        CHECK_THROWS_AS(plan_rrt(robot.home, goal, ctx, params), invalid_argument_error);
    }
}

TEST_CASE("gravity-constrained planning detours around unstable wrist routes") {
    const auto robot = test_robot();
    PlanContext ctx = free_context(robot);
    ctx.move_left = false;
    ctx.holding_arm = Arm::Right;
    ctx.finished_in_hand = Pose();
    // held-part direction = tool x; at q5=0 it points straight down (angle 0)
    ctx.stability.add(Vec3(1, 0, 0), 90.0);

    DualJointConfig start = robot.home;
    start.right[5] = -2.6;
    DualJointConfig goal = robot.home;
    goal.right[5] = 2.6;
    REQUIRE(node_valid(start, ctx));
    REQUIRE(node_valid(goal, ctx));

    // oracle: the straight joint-space interpolation passes q5 = 0 and is unstable
    bool direct_ok = true;
    for (int s = 0; s <= 200; ++s) {
        DualJointConfig q = start;
        q.right[5] = start.right[5] + (goal.right[5] - start.right[5]) * s / 200.0;
        if (!node_valid(q, ctx)) direct_ok = false;
    }
    CHECK_FALSE(direct_ok);

    RRTParams params;
    params.seed = 5;
    const auto path = plan_rrt(start, goal, ctx, params);
    REQUIRE(path);
    // every densified waypoint at 10x finer resolution keeps the hold stable
    CHECK(path_validate(*path, ctx, params.edge_resolution / 10.0));
}

TEST_CASE("path_validate") {
    const auto robot = test_robot();

    SECTION("hand-built path through an obstacle fails") {
        PlanContext ctx = free_context(robot);
        DualJointConfig mid = robot.home;
        mid.right[0] = 0.5;
        const Pose blocked_tool = fk(robot.right_chain, mid.right);
        ctx.world.push_back({ConvexShape::box(0.25, 0.25, 0.25), blocked_tool});
        DualJointConfig goal = robot.home;
        goal.right[0] = 1.0;
        MotionPath path;
        path.waypoints = {robot.home, mid, goal};
        path.step_size = 0.5;
        CHECK_FALSE(path_validate(path, ctx, 0.03));
    }
    SECTION("a thin obstacle is missed at coarse resolution and caught at fine") {
        PlanContext ctx = free_context(robot);
        // thin wall at the palm's mid-sweep position; the 0.3 rad pan sweep is
        // wider than the palm so the endpoints stay clear
        DualJointConfig mid = robot.home;
        mid.right[0] = 0.15;
        const Pose palm_center(fk(robot.right_chain, mid.right).apply(Vec3(0, 0, -0.085)),
                               Rotation::Identity());
        ctx.world.push_back({ConvexShape::box(0.06, 0.01, 0.3), palm_center});

        DualJointConfig start = robot.home, end = robot.home;
        end.right[0] = 0.3;
        MotionPath path;
        path.waypoints = {start, end};
        path.step_size = 0.3;
        REQUIRE(node_valid(start, ctx));
        REQUIRE(node_valid(end, ctx));
        REQUIRE_FALSE(node_valid(mid, ctx));
        CHECK(path_validate(path, ctx, 0.3));    // one step: only the far endpoint is checked
        CHECK_FALSE(path_validate(path, ctx, 0.01));
    }
}

TEST_CASE("smooth_path") {
    const auto robot = test_robot();
    PlanContext ctx = free_context(robot);
    ctx.move_left = false;

    MotionPath zigzag;
    zigzag.step_size = 0.6;
    zigzag.checked_resolution = 0.03;
    zigzag.right_moves = true;
    for (const double detour : {0.0, 0.5, 0.0}) {
        DualJointConfig q = robot.home;
        q.right[0] = zigzag.waypoints.empty() ? 0.0 : 0.2 * zigzag.waypoints.size();
        q.right[1] = detour;
        zigzag.waypoints.push_back(q);
    }

    SECTION("zigzag in free space gets strictly shorter") {
        REQUIRE(path_validate(zigzag, ctx, 0.03));
        const auto smoothed = smooth_path(zigzag, ctx, 50, 7);
        CHECK(path_length(smoothed) < path_length(zigzag));
        CHECK(path_validate(smoothed, ctx, 0.03));
        for (std::size_t i = 0; i + 1 < smoothed.waypoints.size(); ++i) {
            for (int k = 0; k < 6; ++k) {
                CHECK(std::abs(smoothed.waypoints[i + 1].right[k] -
                               smoothed.waypoints[i].right[k]) <= zigzag.step_size + 1e-12);
            }
        }
    }
    SECTION("already-straight path is unchanged") {
        MotionPath straight;
        straight.step_size = 0.3;
        straight.checked_resolution = 0.03;
        for (int i = 0; i <= 4; ++i) {
            DualJointConfig q = robot.home;
            q.right[0] = 0.25 * i;
            straight.waypoints.push_back(q);
        }
        const auto smoothed = smooth_path(straight, ctx, 100, 3);
        REQUIRE(smoothed.waypoints.size() == straight.waypoints.size());
        for (std::size_t i = 0; i < straight.waypoints.size(); ++i) {
            for (int k = 0; k < 6; ++k) {
                CHECK(smoothed.waypoints[i].right[k] ==
                      Catch::Approx(straight.waypoints[i].right[k]).margin(1e-12));
            }
        }
    }
    SECTION("zero attempts is the identity") {
        const auto same = smooth_path(zigzag, ctx, 0, 1);
        CHECK(same.waypoints.size() == zigzag.waypoints.size());
    }
}
