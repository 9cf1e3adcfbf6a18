#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "gatamp/convex.hpp"
#include "gatamp/geom.hpp"
#include "gatamp/mesh.hpp"
#include "gatamp/rng.hpp"

namespace gatamp {

/// Parallel-jaw gripper. Hand-frame conventions: the jaw closes along local y,
/// the approach direction is local +z (palm behind the tool point at -z).
struct Gripper {
    double max_stroke = 0.08;
    double finger_pad_width = 0.02;
    double finger_pad_height = 0.02;
    double palm_depth = 0.05;
    ConvexShape hand_collision_shape;
};

struct GraspConfig {
    Pose hand_pose_in_object;
    double jaw_width = 0.0;
    Vec3 contact_p1{Vec3::Zero()}, contact_p2{Vec3::Zero()};  // object frame
    Vec3 contact_n1{Vec3::Zero()}, contact_n2{Vec3::Zero()};  // inward, unit
    double quality = 0.0;  // min friction-cone margin, degrees
};

struct GraspSynthesisParams {
    double facet_area_min = 1e-4;
    int contact_samples_per_facet = 8;
    int roll_samples_per_contact = 4;
    double friction_mu = 0.5;
    double antiparallel_tol_deg = 10.0;
};

/// Coplanar cluster of mesh triangles.
struct PlanarFacet {
    std::vector<int> triangles;  // indices into mesh.faces
    Vec3 normal{Vec3::Zero()};   // unit outward
    double area = 0.0;
    std::vector<Vec3> boundary;  // outer boundary loop positions
};

namespace detail {

/// Welds positionally-identical vertices so adjacency survives meshes with
/// duplicated vertices (common in OBJ exports).
inline std::vector<int> weld_vertices(const TriMesh& mesh) {
    std::map<std::array<long long, 3>, int> canon;
    std::vector<int> remap(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        const std::array<long long, 3> key = {static_cast<long long>(std::llround(v.x() * 1e9)),
                                              static_cast<long long>(std::llround(v.y() * 1e9)),
                                              static_cast<long long>(std::llround(v.z() * 1e9))};
        const auto [it, inserted] = canon.try_emplace(key, static_cast<int>(i));
        remap[i] = it->second;
    }
    return remap;
}

inline bool point_in_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c,
                              double tol = 1e-9) {
    const Vec3 v0 = b - a, v1 = c - a, v2 = p - a;
    const double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
    const double d20 = v2.dot(v0), d21 = v2.dot(v1);
    const double denom = d00 * d11 - d01 * d01;
    if (std::abs(denom) < 1e-18) return false;
    const double v = (d11 * d20 - d01 * d21) / denom;
    const double w = (d00 * d21 - d01 * d20) / denom;
    return v >= -tol && w >= -tol && v + w <= 1.0 + tol;
}

}  // namespace detail

inline bool facet_contains(const TriMesh& mesh, const PlanarFacet& facet, const Vec3& p) {
    for (int t : facet.triangles) {
        const auto& f = mesh.faces[t];
        if (detail::point_in_triangle(p, mesh.vertices[f[0]], mesh.vertices[f[1]],
                                      mesh.vertices[f[2]], 1e-9)) {
            return true;
        }
    }
    return false;
}

/// Clusters edge-adjacent triangles whose normals agree with the cluster seed
/// within normal_tol_deg; drops clusters below area_min.
inline std::vector<PlanarFacet> find_planar_facets(const TriMesh& mesh, double normal_tol_deg,
                                                   double area_min) {
    const int nf = static_cast<int>(mesh.faces.size());
    std::vector<Vec3> normals(nf);
    std::vector<double> areas(nf);
    for (int i = 0; i < nf; ++i) {
        const Vec3 n = face_normal_unnormalized(mesh, i);
        areas[i] = 0.5 * n.norm();
        normals[i] = n.normalized();
    }

    const auto remap = detail::weld_vertices(mesh);
    std::map<std::pair<int, int>, std::vector<int>> edge_faces;
    for (int i = 0; i < nf; ++i) {
        const auto& f = mesh.faces[i];
        for (int k = 0; k < 3; ++k) {
            const int u = remap[f[k]], v = remap[f[(k + 1) % 3]];
            edge_faces[{std::min(u, v), std::max(u, v)}].push_back(i);
        }
    }

    const double cos_tol = std::cos(deg_to_rad(normal_tol_deg));
    std::vector<int> cluster(nf, -1);
    std::vector<PlanarFacet> facets;
    for (int seed = 0; seed < nf; ++seed) {
        if (cluster[seed] >= 0) continue;
        PlanarFacet facet;
        std::vector<int> stack{seed};
        cluster[seed] = seed;
        Vec3 nacc = Vec3::Zero();
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            facet.triangles.push_back(cur);
            facet.area += areas[cur];
            nacc += areas[cur] * normals[cur];
            const auto& f = mesh.faces[cur];
            for (int k = 0; k < 3; ++k) {
                const int u = remap[f[k]], v = remap[f[(k + 1) % 3]];
                for (int nb : edge_faces.at({std::min(u, v), std::max(u, v)})) {
                    if (cluster[nb] < 0 && normals[nb].dot(normals[seed]) >= cos_tol) {
                        cluster[nb] = seed;
                        stack.push_back(nb);
                    }
                }
            }
        }
        if (facet.area < area_min) continue;
        facet.normal = nacc.normalized();

        // outer boundary: directed edges whose partner lies outside the cluster
        std::map<int, int> next;
        for (int t : facet.triangles) {
            const auto& f = mesh.faces[t];
            for (int k = 0; k < 3; ++k) {
                const int u = remap[f[k]], v = remap[f[(k + 1) % 3]];
                bool internal = false;
                for (int nb : edge_faces.at({std::min(u, v), std::max(u, v)})) {
                    if (nb != t && cluster[nb] == seed) internal = true;
                }
                if (!internal) next[u] = v;
            }
        }
        std::vector<std::vector<int>> loops;
        std::map<int, int> remaining = next;
        while (!remaining.empty()) {
            std::vector<int> loop;
            int cur = remaining.begin()->first;
            const int start = cur;
            while (true) {
                loop.push_back(cur);
                const auto it = remaining.find(cur);
                if (it == remaining.end()) break;
                const int nxt = it->second;
                remaining.erase(it);
                cur = nxt;
                if (cur == start) break;
            }
            loops.push_back(std::move(loop));
        }
        std::size_t longest = 0;
        for (std::size_t i = 1; i < loops.size(); ++i) {
            if (loops[i].size() > loops[longest].size()) longest = i;
        }
        if (!loops.empty()) {
            for (int idx : loops[longest]) facet.boundary.push_back(mesh.vertices[idx]);
        }
        facets.push_back(std::move(facet));
    }
    return facets;
}

/// Two-contact antipodal force closure: the contact line lies inside both
/// friction cones of half-angle atan(mu).
inline bool is_force_closure(const Vec3& p1, const Vec3& n1, const Vec3& p2, const Vec3& n2,
                             double mu) {
    const Vec3 line = p2 - p1;
    if (line.norm() < kGeomEps) {
        throw invalid_argument_error("is_force_closure: coincident contact points");
    }
    const double cone_deg = rad_to_deg(std::atan(mu));
    return angle_deg(line, n1) <= cone_deg && angle_deg(-line, n2) <= cone_deg;
}

/// Samples antipodal contact pairs on near-parallel facet pairs and emits
/// collision-free hand poses rolled about the jaw axis. Deterministic for a
/// given (params, seed); growing either sampling count only appends.
inline std::vector<GraspConfig> synthesize_grasps(const TriMesh& mesh, const Gripper& gripper,
                                                  const GraspSynthesisParams& params,
                                                  std::uint64_t seed = 0) {
    const auto facets =
        find_planar_facets(mesh, params.antiparallel_tol_deg, params.facet_area_min);
    const ConvexShape hull = convex_hull(mesh);
    const double cone_deg = rad_to_deg(std::atan(params.friction_mu));

    std::vector<GraspConfig> grasps;
    int pair_index = -1;
    for (std::size_t i = 0; i < facets.size(); ++i) {
        for (std::size_t j = i + 1; j < facets.size(); ++j) {
            ++pair_index;
            const PlanarFacet& fi = facets[i];
            const PlanarFacet& fj = facets[j];
            if (angle_deg(fi.normal, -fj.normal) > params.antiparallel_tol_deg) continue;

            const Vec3 pi0 = mesh.vertices[mesh.faces[fi.triangles[0]][0]];
            const Vec3 pj0 = mesh.vertices[mesh.faces[fj.triangles[0]][0]];
            const double plane_gap = std::abs((pj0 - pi0).dot(fi.normal));
            if (plane_gap > gripper.max_stroke || plane_gap < kContactTol) continue;

            // cumulative triangle areas for uniform facet sampling
            std::vector<double> cum;
            double total = 0.0;
            for (int t : fi.triangles) {
                total += face_area(mesh, t);
                cum.push_back(total);
            }

            Rng stream(derive_seed(seed, 0x6a, static_cast<std::uint64_t>(pair_index)));
            for (int s = 0; s < params.contact_samples_per_facet; ++s) {
                const double pick = stream.next_double() * total;
                const double r1 = stream.next_double();
                const double r2 = stream.next_double();
                const int t =
                    fi.triangles[std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin()];
                const auto& f = mesh.faces[t];
                const double sq = std::sqrt(r1);
                const Vec3 p1 = (1.0 - sq) * mesh.vertices[f[0]] +
                                sq * (1.0 - r2) * mesh.vertices[f[1]] +
                                sq * r2 * mesh.vertices[f[2]];

                // close the jaw along facet i's inward normal onto facet j's plane
                const Vec3 jaw_dir = -fi.normal;
                const double denom = jaw_dir.dot(fj.normal);
                if (std::abs(denom) < 1e-9) continue;
                const double width = (pj0 - p1).dot(fj.normal) / denom;
                if (width <= kContactTol || width > gripper.max_stroke) continue;
                const Vec3 p2 = p1 + width * jaw_dir;
                if (!facet_contains(mesh, fj, p2)) continue;

                const Vec3 n1 = -fi.normal, n2 = -fj.normal;
                if (!is_force_closure(p1, n1, p2, n2, params.friction_mu)) continue;
                const double quality =
                    std::min(cone_deg - angle_deg(p2 - p1, n1), cone_deg - angle_deg(p1 - p2, n2));

                const Vec3 grasp_center = 0.5 * (p1 + p2);
                const Vec3 ref = orthogonal_reference(jaw_dir);
                for (int r = 0; r < params.roll_samples_per_contact; ++r) {
                    // nested roll angles so larger roll counts extend smaller ones
                    const double roll = 2.0 * M_PI * van_der_corput(static_cast<std::uint64_t>(r));
                    const Vec3 approach = axis_angle(jaw_dir, roll) * ref;
                    Mat3 m;
                    m.col(1) = jaw_dir;
                    m.col(2) = approach;
                    m.col(0) = jaw_dir.cross(approach);
                    const Pose hand_pose(grasp_center, Rotation(m));

                    if (collide(gripper.hand_collision_shape, hand_pose, hull, Pose())) continue;

                    GraspConfig g;
                    g.hand_pose_in_object = hand_pose;
                    g.jaw_width = width;
                    g.contact_p1 = p1;
                    g.contact_p2 = p2;
                    g.contact_n1 = n1;
                    g.contact_n2 = n2;
                    g.quality = quality;
                    grasps.push_back(std::move(g));
                }
            }
        }
    }
    std::stable_sort(grasps.begin(), grasps.end(),
                     [](const GraspConfig& a, const GraspConfig& b) { return a.quality > b.quality; });
    return grasps;
}

}  // namespace gatamp
