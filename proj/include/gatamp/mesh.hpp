#pragma once

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gatamp/geom.hpp"

namespace gatamp {

/// Indexed triangle mesh. Faces are triples of 0-based vertex indices.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;

    bool empty() const { return vertices.empty() || faces.empty(); }
};

inline Vec3 face_normal_unnormalized(const TriMesh& m, int f) {
    const Vec3& a = m.vertices[m.faces[f][0]];
    const Vec3& b = m.vertices[m.faces[f][1]];
    const Vec3& c = m.vertices[m.faces[f][2]];
    return (b - a).cross(c - a);
}

inline double face_area(const TriMesh& m, int f) {
    return 0.5 * face_normal_unnormalized(m, f).norm();
}

/// Validates indices and drops zero-area faces. Throws on out-of-range indices.
inline TriMesh sanitize_mesh(TriMesh mesh) {
    const int n = static_cast<int>(mesh.vertices.size());
    std::vector<std::array<int, 3>> kept;
    kept.reserve(mesh.faces.size());
    for (const auto& f : mesh.faces) {
        for (int idx : f) {
            if (idx < 0 || idx >= n) {
                throw invalid_argument_error("mesh face index out of range: " + std::to_string(idx));
            }
        }
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        if ((b - a).cross(c - a).norm() > 2.0 * 1e-12) {
            kept.push_back(f);
        }
    }
    mesh.faces = std::move(kept);
    return mesh;
}

/// Wavefront OBJ subset: only `v` and `f` records, triangular faces,
/// 1-based indices. Every other record type is ignored. Face tokens may
/// carry /vt/vn suffixes; only the vertex index is used.
inline TriMesh load_obj(std::istream& in, const std::string& name = "<stream>") {
    TriMesh mesh;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) {
                throw invalid_argument_error(name + ":" + std::to_string(lineno) + ": malformed v record");
            }
            mesh.vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) {
                const auto slash = tok.find('/');
                const std::string head = slash == std::string::npos ? tok : tok.substr(0, slash);
                int v = 0;
                try {
                    v = std::stoi(head);
                } catch (const std::exception&) {
                    throw invalid_argument_error(name + ":" + std::to_string(lineno) + ": malformed f record");
                }
                if (v <= 0) {
                    throw invalid_argument_error(name + ":" + std::to_string(lineno) +
                                                 ": only positive 1-based indices supported");
                }
                idx.push_back(v - 1);
            }
            if (idx.size() != 3) {
                throw invalid_argument_error(name + ":" + std::to_string(lineno) +
                                             ": only triangular faces supported");
            }
            mesh.faces.push_back({idx[0], idx[1], idx[2]});
        }
        // anything else in the file is ignored
    }
    return sanitize_mesh(std::move(mesh));
}

inline TriMesh load_obj_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw invalid_argument_error("cannot open mesh file: " + path);
    }
    return load_obj(in, path);
}

inline void save_obj(const TriMesh& mesh, std::ostream& out) {
    out.precision(12);
    for (const auto& v : mesh.vertices) {
        out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    }
    for (const auto& f : mesh.faces) {
        out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    }
}

inline void save_obj_file(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw invalid_argument_error("cannot write mesh file: " + path);
    }
    save_obj(mesh, out);
}

/// Signed enclosed volume (positive for outward-wound watertight meshes).
inline double mesh_volume(const TriMesh& mesh) {
    double v6 = 0.0;
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        v6 += a.dot(b.cross(c));
    }
    return v6 / 6.0;
}

/// Uniform-density volume centroid via signed tetrahedra against the origin.
inline Vec3 centroid(const TriMesh& mesh) {
    double v6 = 0.0;
    Vec3 acc = Vec3::Zero();
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        const double det = a.dot(b.cross(c));
        v6 += det;
        acc += det * (a + b + c);  // tetra centroid is (a+b+c+0)/4
    }
    const double volume = v6 / 6.0;
    if (!(volume > kGeomEps)) {
        throw degenerate_geometry_error("centroid: mesh encloses zero or negative volume");
    }
    return acc / (4.0 * v6);
}

inline TriMesh transformed(const TriMesh& mesh, const Pose& pose) {
    TriMesh out = mesh;
    for (auto& v : out.vertices) v = pose.apply(v);
    return out;
}

inline TriMesh scaled(const TriMesh& mesh, double s) {
    TriMesh out = mesh;
    for (auto& v : out.vertices) v *= s;
    return out;
}

// --- primitive builders -----------------------------------------------------

/// Axis-aligned box of the given full extents, centered at the origin.
inline TriMesh make_box(double sx, double sy, double sz) {
    TriMesh m;
    const double hx = sx / 2.0, hy = sy / 2.0, hz = sz / 2.0;
    for (int i = 0; i < 8; ++i) {
        m.vertices.emplace_back((i & 1) ? hx : -hx, (i & 2) ? hy : -hy, (i & 4) ? hz : -hz);
    }
    // outward-wound quads split into triangles
    const int quads[6][4] = {
        {0, 2, 3, 1},  // -z
        {4, 5, 7, 6},  // +z
        {0, 1, 5, 4},  // -y
        {2, 6, 7, 3},  // +y
        {0, 4, 6, 2},  // -x
        {1, 3, 7, 5},  // +x
    };
    for (const auto& q : quads) {
        m.faces.push_back({q[0], q[1], q[2]});
        m.faces.push_back({q[0], q[2], q[3]});
    }
    return m;
}

/// Regular prism along z (an n-gon cross-section cylinder approximation),
/// centered at the origin.
inline TriMesh make_prism(double radius, double height, int sides) {
    TriMesh m;
    const double hz = height / 2.0;
    for (int ring = 0; ring < 2; ++ring) {
        const double z = ring == 0 ? -hz : hz;
        for (int i = 0; i < sides; ++i) {
            const double a = 2.0 * M_PI * i / sides;
            m.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), z);
        }
    }
    const int top = sides;
    for (int i = 0; i < sides; ++i) {
        const int j = (i + 1) % sides;
        m.faces.push_back({i, j, top + j});
        m.faces.push_back({i, top + j, top + i});
    }
    const int cb = static_cast<int>(m.vertices.size());
    m.vertices.emplace_back(0, 0, -hz);
    const int ct = cb + 1;
    m.vertices.emplace_back(0, 0, hz);
    for (int i = 0; i < sides; ++i) {
        const int j = (i + 1) % sides;
        m.faces.push_back({cb, j, i});
        m.faces.push_back({ct, top + i, top + j});
    }
    return m;
}

inline TriMesh make_icosahedron() {
    TriMesh m;
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double s = 1.0 / std::sqrt(1.0 + phi * phi);
    const double a = s, b = phi * s;
    m.vertices = {
        {-a, b, 0}, {a, b, 0}, {-a, -b, 0}, {a, -b, 0}, {0, -a, b},  {0, a, b},
        {0, -a, -b}, {0, a, -b}, {b, 0, -a}, {b, 0, a}, {-b, 0, -a}, {-b, 0, a},
    };
    m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    return m;
}

/// One 4-to-1 triangle subdivision with edge-midpoint welding; new vertices
/// are re-projected onto the unit sphere.
inline TriMesh subdivide_onto_sphere(const TriMesh& mesh) {
    TriMesh out;
    out.vertices = mesh.vertices;
    for (auto& v : out.vertices) v.normalize();
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        const auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int idx = static_cast<int>(out.vertices.size());
        out.vertices.push_back((out.vertices[a] + out.vertices[b]).normalized());
        midpoint.emplace(key, idx);
        return idx;
    };
    for (const auto& f : mesh.faces) {
        const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
        out.faces.push_back({f[0], ab, ca});
        out.faces.push_back({f[1], bc, ab});
        out.faces.push_back({f[2], ca, bc});
        out.faces.push_back({ab, bc, ca});
    }
    return out;
}

inline TriMesh make_icosphere(int level) {
    TriMesh m = make_icosahedron();
    for (int i = 0; i < level; ++i) m = subdivide_onto_sphere(m);
    return m;
}

inline TriMesh make_regular_tetrahedron(double scale = 1.0) {
    TriMesh m;
    m.vertices = {
        Vec3(1, 1, 1) * scale,
        Vec3(1, -1, -1) * scale,
        Vec3(-1, 1, -1) * scale,
        Vec3(-1, -1, 1) * scale,
    };
    m.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    return m;
}

}  // namespace gatamp
