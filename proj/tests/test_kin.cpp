#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gatamp/kin.hpp"
#include "support/test_robot.hpp"

using namespace gatamp;
using gatamp::testing::test_robot;

namespace {

// independent oracle: homogeneous 4x4 matrix product
Eigen::Matrix4d fk_matrix_oracle(const KinematicChain& chain, const JointConfig& q) {
    auto to_mat = [](const Pose& p) {
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m.block<3, 3>(0, 0) = p.rotation.toRotationMatrix();
        m.block<3, 1>(0, 3) = p.position;
        return m;
    };
    Eigen::Matrix4d t = to_mat(chain.mount);
    for (std::size_t i = 0; i < chain.joints.size(); ++i) {
        Eigen::Matrix4d rot = Eigen::Matrix4d::Identity();
        rot.block<3, 3>(0, 0) =
            Eigen::AngleAxisd(q[i], chain.joints[i].axis.normalized()).toRotationMatrix();
        t = t * to_mat(chain.joints[i].origin) * rot;
    }
    return t * to_mat(chain.tool);
}

KinematicChain z_offset_chain() {
    KinematicChain chain;
    for (double off : {0.1, 0.2, 0.3}) {
        Joint j;
        j.origin = Pose(Vec3(0, 0, off), Rotation::Identity());
        j.axis = Vec3::UnitZ();
        chain.joints.push_back(j);
    }
    return chain;
}

}  // namespace

TEST_CASE("fk examples") {
    SECTION("all-zero q on pure z-offsets lands at the summed offset") {
        const auto chain = z_offset_chain();
        const Pose tool = fk(chain, {0, 0, 0});
        CHECK(tool.position.isApprox(Vec3(0, 0, 0.6), 1e-12));
        CHECK(tool.rotation.isApprox(Rotation::Identity(), 1e-12));
    }
    SECTION("single revolute joint at 90 degrees about z with unit-x tool") {
        KinematicChain chain;
        Joint j;
        j.axis = Vec3::UnitZ();
        chain.joints.push_back(j);
        chain.tool = Pose(Vec3(1, 0, 0), Rotation::Identity());
        const Pose tool = fk(chain, {M_PI / 2});
        CHECK(tool.position.isApprox(Vec3(0, 1, 0), 1e-12));
    }
    SECTION("random configs match the homogeneous-matrix oracle") {
        const auto robot = test_robot();
        Rng rng(3);
        for (int i = 0; i < 50; ++i) {
            const JointConfig q = gatamp::testing::random_in_limits(robot.right_chain, rng);
            const Pose tool = fk(robot.right_chain, q);
            const Eigen::Matrix4d oracle = fk_matrix_oracle(robot.right_chain, q);
            CHECK((tool.position - oracle.block<3, 1>(0, 3)).norm() < 1e-10);
            CHECK((tool.rotation.toRotationMatrix() - oracle.block<3, 3>(0, 0)).norm() < 1e-10);
        }
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(fk(z_offset_chain(), {0, 0}), invalid_argument_error);
    }
}

TEST_CASE("jacobian matches finite differences") {
    const auto robot = test_robot();
    Rng rng(5);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const JointConfig q = gatamp::testing::random_in_limits(robot.right_chain, rng);
        const Eigen::MatrixXd jac = jacobian(robot.right_chain, q);
        Eigen::MatrixXd fd(6, q.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            JointConfig qp = q, qm = q;
            qp[i] += h;
            qm[i] -= h;
            const Pose fp = fk(robot.right_chain, qp);
            const Pose fm = fk(robot.right_chain, qm);
            fd.block<3, 1>(0, static_cast<int>(i)) = (fp.position - fm.position) / (2 * h);
            fd.block<3, 1>(3, static_cast<int>(i)) =
                rotation_error(fp.rotation, fm.rotation) / (2 * h);
        }
        CHECK((jac - fd).norm() / jac.norm() < 1e-5);
    }
}

TEST_CASE("ik examples") {
    const auto robot = test_robot();
    const auto& chain = robot.right_chain;

    SECTION("target already reached returns the seed") {
        const JointConfig q0{0.3, 0.5, 0.8, -0.4, 0.6, 0.2};
        const auto sol = ik(chain, fk(chain, q0), q0);
        REQUIRE(sol.has_value());
        for (std::size_t i = 0; i < q0.size(); ++i) {
            CHECK((*sol)[i] == Catch::Approx(q0[i]).margin(1e-12));
        }
    }
    SECTION("fk round trip from random targets") {
        Rng rng(9);
        int ok = 0;
        const int trials = 100;
        for (int i = 0; i < trials; ++i) {
            const JointConfig q = gatamp::testing::random_in_limits(chain, rng);
            const Pose target = fk(chain, q);
            IkOptions opts;
            opts.seed = i;
            const auto sol = ik(chain, target, robot.home.right, opts);
            if (!sol) continue;
            CHECK(within_limits(chain, *sol));
            const Pose reached = fk(chain, *sol);
            CHECK((reached.position - target.position).norm() <= 1e-4);
            CHECK(rotation_error(target.rotation, reached.rotation).norm() <= 1e-3);
            ++ok;
        }
        CHECK(ok >= 99);
    }
    SECTION("unreachable target reports not-found") {
        const Pose far(Vec3(10, 0, 0), Rotation::Identity());
        CHECK_FALSE(ik(chain, far, robot.home.right).has_value());
    }
    SECTION("NaN target is an input error") {
        Pose bad;
        bad.position = Vec3(std::nan(""), 0, 0);
        CHECK_THROWS_AS(ik(chain, bad, robot.home.right), invalid_argument_error);
    }
}

TEST_CASE("robot_collides") {
    const auto robot = test_robot();

    SECTION("home config in an empty world is free") {
        CHECK_FALSE(robot_collides(robot, robot.home, {}));
    }
    SECTION("an obstacle at the home tool position collides") {
        const Pose tool = fk(robot.right_chain, robot.home.right);
        const std::vector<PosedShape> world{{ConvexShape::box(0.15, 0.15, 0.15), tool}};
        CHECK(robot_collides(robot, robot.home, world));
    }
    SECTION("both arms reaching the same point collide, matching a pairwise oracle") {
        const Pose meet(Vec3(0.5, 0.0, 1.0), Rotation(frame_about_z(Vec3(1, 0, 0), 0.0)));
        const auto qr = ik(robot.right_chain, meet, robot.home.right);
        const auto ql = ik(robot.left_chain, meet, robot.home.left);
        REQUIRE(qr);
        REQUIRE(ql);
        const DualJointConfig q{*qr, *ql};
        CHECK(robot_collides(robot, q, {}));

        // pairwise-shape oracle: cross-arm pieces tested directly
        auto pieces = [&](Arm arm, const JointConfig& qa) {
            std::vector<PosedShape> out;
            const auto frames = fk_links(robot.chain(arm), qa);
            const auto& shapes = robot.link_shapes(arm);
            for (std::size_t i = 0; i < shapes.size(); ++i) {
                if (!shapes[i].empty()) out.push_back({shapes[i], frames[i]});
            }
            out.push_back({robot.gripper(arm).hand_collision_shape,
                           frames.back() * robot.chain(arm).tool});
            return out;
        };
        bool oracle_hit = false;
        for (const auto& a : pieces(Arm::Right, q.right)) {
            for (const auto& b : pieces(Arm::Left, q.left)) {
                if (collide(a.shape, a.pose, b.shape, b.pose)) oracle_hit = true;
            }
        }
        CHECK(oracle_hit);
    }
    SECTION("adding world obstacles never un-collides (monotonicity)") {
        Rng rng(21);
        for (int trial = 0; trial < 25; ++trial) {
            DualJointConfig q{gatamp::testing::random_in_limits(robot.right_chain, rng),
                              gatamp::testing::random_in_limits(robot.left_chain, rng)};
            std::vector<PosedShape> world;
            for (int i = 0; i < 3; ++i) {
                world.push_back({ConvexShape::box(0.2, 0.2, 0.2),
                                 Pose(Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1),
                                           rng.uniform(0, 2)),
                                      Rotation::Identity())});
            }
            const bool before = robot_collides(robot, q, world);
            world.push_back({ConvexShape::box(0.3, 0.3, 0.3),
                             Pose(Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 2)),
                                  Rotation::Identity())});
            const bool after = robot_collides(robot, q, world);
            if (before) CHECK(after);
        }
    }
    SECTION("attachments are posed via fk(hand) composed with the grasp inverse") {
        // held object directly in front of the tool
        Attachment held;
        held.pieces.push_back(
            {ConvexShape::box(0.04, 0.04, 0.04), Pose(Vec3(0, 0, 0.02), Rotation::Identity())});
        const Pose tool = fk(robot.right_chain, robot.home.right);
        const Vec3 obstacle_at = tool.apply(Vec3(0, 0, 0.02));
        const std::vector<PosedShape> world{
            {ConvexShape::box(0.02, 0.02, 0.02), Pose(obstacle_at, Rotation::Identity())}};
        CHECK(robot_collides(robot, robot.home, world, held, {}));
        CHECK_FALSE(robot_collides(robot, robot.home, world, {}, {}));
    }
}
