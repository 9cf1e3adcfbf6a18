#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "gatamp/grasp.hpp"
#include "gatamp/mesh.hpp"

using namespace gatamp;

namespace {

// independent clustering oracle: group triangles by quantized (normal, plane offset)
std::map<std::array<long long, 4>, double> facet_cluster_oracle(const TriMesh& mesh) {
    std::map<std::array<long long, 4>, double> groups;
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        const Vec3 n = face_normal_unnormalized(mesh, static_cast<int>(i)).normalized();
        const double off = n.dot(mesh.vertices[mesh.faces[i][0]]);
        const std::array<long long, 4> key = {
            std::llround(n.x() * 1e6), std::llround(n.y() * 1e6), std::llround(n.z() * 1e6),
            std::llround(off * 1e6)};
        groups[key] += face_area(mesh, static_cast<int>(i));
    }
    return groups;
}

TriMesh cube_with_subdivided_top() {
    TriMesh m = make_box(1, 1, 1);
    // strip the two +z triangles and rebuild that face as a 2x2 grid
    std::vector<std::array<int, 3>> faces;
    for (const auto& f : m.faces) {
        const bool top = m.vertices[f[0]].z() > 0.49 && m.vertices[f[1]].z() > 0.49 &&
                         m.vertices[f[2]].z() > 0.49;
        if (!top) faces.push_back(f);
    }
    m.faces = faces;
    const int base = static_cast<int>(m.vertices.size());
    for (int iy = 0; iy <= 2; ++iy) {
        for (int ix = 0; ix <= 2; ++ix) {
            m.vertices.emplace_back(-0.5 + 0.5 * ix, -0.5 + 0.5 * iy, 0.5);
        }
    }
    auto at = [&](int ix, int iy) { return base + iy * 3 + ix; };
    for (int iy = 0; iy < 2; ++iy) {
        for (int ix = 0; ix < 2; ++ix) {
            m.faces.push_back({at(ix, iy), at(ix + 1, iy), at(ix + 1, iy + 1)});
            m.faces.push_back({at(ix, iy), at(ix + 1, iy + 1), at(ix, iy + 1)});
        }
    }
    return m;
}

Gripper big_test_gripper(double stroke) {
    Gripper g;
    g.max_stroke = stroke;
    g.finger_pad_width = 0.05;
    g.finger_pad_height = 0.05;
    g.palm_depth = 0.2;
    // palm body well behind the tool point: clears a unit cube grasped at depth
    auto shape = ConvexShape::box(0.2, 0.3, 0.4);
    for (auto& v : shape.vertices) v.z() -= 0.8;
    g.hand_collision_shape = ConvexShape::from_vertices(shape.vertices);
    return g;
}

}  // namespace

TEST_CASE("find_planar_facets examples") {
    SECTION("unit cube: 6 facets of area 1, matching the clustering oracle") {
        const TriMesh cube = make_box(1, 1, 1);
        const auto facets = find_planar_facets(cube, 5.0, 1e-4);
        const auto oracle = facet_cluster_oracle(cube);
        REQUIRE(facets.size() == oracle.size());
        CHECK(facets.size() == 6);
        for (const auto& f : facets) {
            CHECK(f.area == Catch::Approx(1.0).margin(1e-9));
            CHECK(f.triangles.size() == 2);
            CHECK(f.boundary.size() == 4);
        }
    }
    SECTION("icosphere at 1 degree: one facet per triangle") {
        const TriMesh ico = make_icosphere(1);
        const auto facets = find_planar_facets(ico, 1.0, 0.0);
        CHECK(facets.size() == ico.faces.size());
    }
    SECTION("cube with one subdivided face still yields 6 facets") {
        const TriMesh m = cube_with_subdivided_top();
        REQUIRE(m.faces.size() == 18);
        const auto facets = find_planar_facets(m, 5.0, 1e-4);
        const auto oracle = facet_cluster_oracle(m);
        REQUIRE(facets.size() == oracle.size());
        CHECK(facets.size() == 6);
        for (const auto& f : facets) CHECK(f.area == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("is_force_closure examples") {
    const double mu = 0.3;
    const double cone_deg = std::atan(mu) * 180.0 / M_PI;  // hand oracle: 16.699 deg
    REQUIRE(cone_deg == Catch::Approx(16.699).margin(0.001));

    SECTION("aligned centers on opposite cube faces") {
        CHECK(is_force_closure(Vec3(0, 0, -0.5), Vec3(0, 0, 1), Vec3(0, 0, 0.5), Vec3(0, 0, -1),
                               mu));
    }
    SECTION("20 degree offset exceeds the 16.7 degree cone") {
        const Vec3 p2(std::tan(20.0 * M_PI / 180.0), 0, 0.5);
        CHECK(angle_deg(p2 - Vec3(0, 0, -0.5), Vec3(0, 0, 1)) == Catch::Approx(20.0).margin(1e-9));
        CHECK_FALSE(is_force_closure(Vec3(0, 0, -0.5), Vec3(0, 0, 1), p2, Vec3(0, 0, -1), mu));
    }
    SECTION("perpendicular faces") {
        CHECK_FALSE(is_force_closure(Vec3(-0.5, 0, 0), Vec3(1, 0, 0), Vec3(0, 0, 0.5),
                                     Vec3(0, 0, -1), mu));
    }
    SECTION("coincident points") {
        CHECK_THROWS_AS(is_force_closure(Vec3(0, 0, 0), Vec3(0, 0, 1), Vec3(0, 0, 0),
                                         Vec3(0, 0, -1), mu),
                        invalid_argument_error);
    }
}

TEST_CASE("synthesize_grasps on the unit cube") {
    const TriMesh cube = make_box(1, 1, 1);
    GraspSynthesisParams params;
    params.contact_samples_per_facet = 6;
    params.roll_samples_per_contact = 4;
    params.friction_mu = 0.5;
    params.antiparallel_tol_deg = 5.0;

    SECTION("jaw axes align with face-normal axes; every grasp is sound") {
        const auto gripper = big_test_gripper(1.2);
        const auto grasps = synthesize_grasps(cube, gripper, params, 42);
        REQUIRE(!grasps.empty());
        const ConvexShape hull = convex_hull(cube);
        for (const auto& g : grasps) {
            const Vec3 jaw = g.hand_pose_in_object.rotation * Vec3::UnitY();
            const double maxc = jaw.cwiseAbs().maxCoeff();
            CHECK(maxc == Catch::Approx(1.0).margin(1e-6));  // parallel to a face normal
            CHECK(is_force_closure(g.contact_p1, g.contact_n1, g.contact_p2, g.contact_n2,
                                   params.friction_mu));
            CHECK(g.jaw_width == Catch::Approx((g.contact_p2 - g.contact_p1).norm()).margin(1e-6));
            CHECK(g.jaw_width <= gripper.max_stroke);
            CHECK_FALSE(collide(gripper.hand_collision_shape, g.hand_pose_in_object, hull, Pose()));
        }
        for (std::size_t i = 1; i < grasps.size(); ++i) {
            CHECK(grasps[i - 1].quality >= grasps[i].quality);
        }
    }
    SECTION("stroke smaller than the cube yields nothing") {
        CHECK(synthesize_grasps(cube, big_test_gripper(0.5), params, 42).empty());
    }
    SECTION("a hand shape covering the tool point drops every pose") {
        // the tool point sits between the antipodal contacts, inside the object,
        // so this shape can never be collision-free
        Gripper tight = big_test_gripper(1.2);
        tight.hand_collision_shape = ConvexShape::box(0.1, 0.1, 0.1);
        CHECK(synthesize_grasps(cube, tight, params, 42).empty());
    }
    SECTION("count is monotone in sampling parameters under a fixed seed") {
        const auto gripper = big_test_gripper(1.2);
        std::size_t prev = 0;
        for (int cs : {1, 2, 4, 8, 16}) {
            GraspSynthesisParams p = params;
            p.contact_samples_per_facet = cs;
            const auto n = synthesize_grasps(cube, gripper, p, 7).size();
            CHECK(n >= prev);
            prev = n;
        }
        prev = 0;
        for (int rolls : {1, 2, 3, 5, 8}) {
            GraspSynthesisParams p = params;
            p.roll_samples_per_contact = rolls;
            const auto n = synthesize_grasps(cube, gripper, p, 7).size();
            CHECK(n >= prev);
            prev = n;
        }
    }
    SECTION("same seed reproduces the same grasp list") {
        const auto gripper = big_test_gripper(1.2);
        const auto a = synthesize_grasps(cube, gripper, params, 99);
        const auto b = synthesize_grasps(cube, gripper, params, 99);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].hand_pose_in_object.position.isApprox(b[i].hand_pose_in_object.position, 0));
            CHECK(a[i].jaw_width == b[i].jaw_width);
        }
    }
}
