#pragma once

#include <string>
#include <vector>

#include "gatamp/geom.hpp"
#include "gatamp/mesh.hpp"
#include "gatamp/rng.hpp"

namespace gatamp {

enum class PolyhedronBasis { Tetrahedron, Hexahedron, Octahedron, Icosahedron, IcosphereLv1, IcosphereLv2 };

inline const char* to_string(PolyhedronBasis b) {
    switch (b) {
        case PolyhedronBasis::Tetrahedron: return "tetra";
        case PolyhedronBasis::Hexahedron: return "hexa";
        case PolyhedronBasis::Octahedron: return "octa";
        case PolyhedronBasis::Icosahedron: return "icosa";
        case PolyhedronBasis::IcosphereLv1: return "lv1";
        case PolyhedronBasis::IcosphereLv2: return "lv2";
    }
    return "?";
}

inline PolyhedronBasis basis_from_string(const std::string& s) {
    if (s == "tetra") return PolyhedronBasis::Tetrahedron;
    if (s == "hexa") return PolyhedronBasis::Hexahedron;
    if (s == "octa") return PolyhedronBasis::Octahedron;
    if (s == "icosa") return PolyhedronBasis::Icosahedron;
    if (s == "lv1") return PolyhedronBasis::IcosphereLv1;
    if (s == "lv2") return PolyhedronBasis::IcosphereLv2;
    throw invalid_argument_error("unknown orientation basis: " + s);
}

struct OrientationBasis {
    PolyhedronBasis basis = PolyhedronBasis::Octahedron;
    int rolls_per_vertex = 6;
};

struct AssemblyRegion {
    Vec3 min{Vec3::Zero()};
    Vec3 max{Vec3::Zero()};

    Vec3 center() const { return 0.5 * (min + max); }
};

struct AssemblyPose {
    Vec3 position{Vec3::Zero()};
    Rotation rotation{Rotation::Identity()};
    int position_index = 0;
    int vertex_index = 0;
    int roll_index = 0;
};

/// Unit direction set for each supported solid. Icospheres are subdivided
/// icosahedra with new vertices reprojected onto the unit sphere.
inline std::vector<Vec3> polyhedron_vertices(PolyhedronBasis basis) {
    switch (basis) {
        case PolyhedronBasis::Tetrahedron: {
            const double s = 1.0 / std::sqrt(3.0);
            return {Vec3(1, 1, 1) * s, Vec3(1, -1, -1) * s, Vec3(-1, 1, -1) * s,
                    Vec3(-1, -1, 1) * s};
        }
        case PolyhedronBasis::Hexahedron: {
            std::vector<Vec3> v;
            const double s = 1.0 / std::sqrt(3.0);
            for (int i = 0; i < 8; ++i) {
                v.emplace_back(((i & 1) ? 1 : -1) * s, ((i & 2) ? 1 : -1) * s,
                               ((i & 4) ? 1 : -1) * s);
            }
            return v;
        }
        case PolyhedronBasis::Octahedron:
            return {Vec3(1, 0, 0),  Vec3(-1, 0, 0), Vec3(0, 1, 0),
                    Vec3(0, -1, 0), Vec3(0, 0, 1),  Vec3(0, 0, -1)};
        case PolyhedronBasis::Icosahedron:
            return make_icosahedron().vertices;
        case PolyhedronBasis::IcosphereLv1:
            return make_icosphere(1).vertices;
        case PolyhedronBasis::IcosphereLv2:
            return make_icosphere(2).vertices;
    }
    return {};
}

/// One frame per (vertex, roll): z = vertex direction, x swept uniformly over
/// [0, 360) from the deterministic reference. Vertex-major, roll-minor order.
inline std::vector<Rotation> sample_orientations(const OrientationBasis& basis) {
    const auto verts = polyhedron_vertices(basis.basis);
    std::vector<Rotation> out;
    out.reserve(verts.size() * basis.rolls_per_vertex);
    for (const Vec3& v : verts) {
        for (int r = 0; r < basis.rolls_per_vertex; ++r) {
            const double roll = 2.0 * M_PI * r / basis.rolls_per_vertex;
            out.push_back(frame_about_z(v, roll));
        }
    }
    return out;
}

/// n in-region positions; the first is always the region center, the rest are
/// a seeded uniform stream (so n and n+k runs share a prefix).
inline std::vector<Vec3> sample_positions(const AssemblyRegion& region, int n, std::uint64_t seed) {
    if (n < 1) throw invalid_argument_error("sample_positions: n must be >= 1");
    std::vector<Vec3> out;
    out.reserve(n);
    out.push_back(region.center());
    Rng rng(derive_seed(seed, 0xa5));
    for (int i = 1; i < n; ++i) {
        out.emplace_back(rng.uniform(region.min.x(), region.max.x()),
                         rng.uniform(region.min.y(), region.max.y()),
                         rng.uniform(region.min.z(), region.max.z()));
    }
    return out;
}

/// Keeps poses whose rotated assembly direction stays strictly more than
/// threshold_deg away from straight-down gravity.
inline std::vector<AssemblyPose> gravity_prefilter(const std::vector<AssemblyPose>& poses,
                                                   const Vec3& assembly_dir, double threshold_deg) {
    std::vector<AssemblyPose> kept;
    for (const auto& p : poses) {
        if (angle_deg(p.rotation * assembly_dir, gravity_direction()) > threshold_deg) {
            kept.push_back(p);
        }
    }
    return kept;
}

/// Full position-major, vertex-major, roll-minor assembly pose grid.
inline std::vector<AssemblyPose> enumerate_assembly_poses(const AssemblyRegion& region,
                                                          int n_positions,
                                                          const OrientationBasis& basis,
                                                          std::uint64_t seed) {
    const auto positions = sample_positions(region, n_positions, seed);
    const auto verts = polyhedron_vertices(basis.basis);
    std::vector<AssemblyPose> out;
    out.reserve(positions.size() * verts.size() * basis.rolls_per_vertex);
    for (std::size_t pi = 0; pi < positions.size(); ++pi) {
        for (std::size_t vi = 0; vi < verts.size(); ++vi) {
            for (int ri = 0; ri < basis.rolls_per_vertex; ++ri) {
                AssemblyPose ap;
                ap.position = positions[pi];
                ap.rotation = frame_about_z(verts[vi], 2.0 * M_PI * ri / basis.rolls_per_vertex);
                ap.position_index = static_cast<int>(pi);
                ap.vertex_index = static_cast<int>(vi);
                ap.roll_index = ri;
                out.push_back(ap);
            }
        }
    }
    return out;
}

}  // namespace gatamp
