#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "gatamp/geom.hpp"
#include "gatamp/mesh.hpp"

namespace gatamp {

/// Vertex set of a convex polytope, stored with a bounding sphere for
/// cheap rejection in pairwise tests.
struct ConvexShape {
    std::vector<Vec3> vertices;
    Vec3 center{Vec3::Zero()};
    double radius = 0.0;

    static ConvexShape from_vertices(std::vector<Vec3> verts) {
        ConvexShape s;
        s.vertices = std::move(verts);
        if (!s.vertices.empty()) {
            Vec3 acc = Vec3::Zero();
            for (const auto& v : s.vertices) acc += v;
            s.center = acc / static_cast<double>(s.vertices.size());
            for (const auto& v : s.vertices) {
                s.radius = std::max(s.radius, (v - s.center).norm());
            }
        }
        return s;
    }

    static ConvexShape box(double sx, double sy, double sz) {
        std::vector<Vec3> v;
        for (int i = 0; i < 8; ++i) {
            v.emplace_back(((i & 1) ? sx : -sx) / 2.0, ((i & 2) ? sy : -sy) / 2.0,
                           ((i & 4) ? sz : -sz) / 2.0);
        }
        return from_vertices(std::move(v));
    }

    bool empty() const { return vertices.empty(); }

    /// Extreme point in the given direction, in local coordinates.
    const Vec3& support_local(const Vec3& dir) const {
        int best = 0;
        double best_dot = vertices[0].dot(dir);
        for (int i = 1; i < static_cast<int>(vertices.size()); ++i) {
            const double d = vertices[i].dot(dir);
            if (d > best_dot) {
                best_dot = d;
                best = i;
            }
        }
        return vertices[best];
    }
};

namespace detail {

struct HullFace {
    int a, b, c;
    Vec3 normal;    // unit outward
    double offset;  // normal . x = offset on the face plane
    std::vector<int> outside;
    bool alive = true;
};

inline double signed_dist(const HullFace& f, const Vec3& p) {
    return f.normal.dot(p) - f.offset;
}

struct HullData {
    std::vector<Vec3> points;               // input points
    std::vector<std::array<int, 3>> faces;  // outward-wound triangles into `points`
    std::vector<int> hull_vertices;         // unique indices used by faces
};

/// Incremental quickhull over a point cloud. Throws degenerate_geometry_error
/// when the input has fewer than four non-coplanar points.
inline HullData compute_hull(const std::vector<Vec3>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 4) {
        throw degenerate_geometry_error("convex_hull: need at least 4 points");
    }

    Vec3 lo = points[0], hi = points[0];
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double scale = std::max((hi - lo).norm(), 1e-12);
    const double eps = 1e-10 * scale;

    // initial extreme pair on the longest axis
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    int i0 = 0, i1 = 0;
    for (int i = 1; i < n; ++i) {
        if (points[i][axis] < points[i0][axis]) i0 = i;
        if (points[i][axis] > points[i1][axis]) i1 = i;
    }
    if ((points[i1] - points[i0]).norm() < eps) {
        throw degenerate_geometry_error("convex_hull: all points coincident");
    }

    // farthest from the line i0-i1
    const Vec3 dir = (points[i1] - points[i0]).normalized();
    int i2 = -1;
    double best = eps;
    for (int i = 0; i < n; ++i) {
        const Vec3 d = points[i] - points[i0];
        const double dist = (d - d.dot(dir) * dir).norm();
        if (dist > best) {
            best = dist;
            i2 = i;
        }
    }
    if (i2 < 0) throw degenerate_geometry_error("convex_hull: input is collinear");

    // farthest from the plane i0-i1-i2
    const Vec3 pn = (points[i1] - points[i0]).cross(points[i2] - points[i0]).normalized();
    int i3 = -1;
    best = eps;
    for (int i = 0; i < n; ++i) {
        const double dist = std::abs(pn.dot(points[i] - points[i0]));
        if (dist > best) {
            best = dist;
            i3 = i;
        }
    }
    if (i3 < 0) throw degenerate_geometry_error("convex_hull: input is coplanar");

    std::vector<HullFace> faces;
    auto make_face = [&](int a, int b, int c, int apex) {
        HullFace f;
        f.a = a;
        f.b = b;
        f.c = c;
        Vec3 nrm = (points[b] - points[a]).cross(points[c] - points[a]);
        if (nrm.dot(points[apex] - points[a]) > 0) {
            std::swap(f.b, f.c);
            nrm = -nrm;
        }
        f.normal = nrm.normalized();
        f.offset = f.normal.dot(points[f.a]);
        return f;
    };
    faces.push_back(make_face(i0, i1, i2, i3));
    faces.push_back(make_face(i0, i1, i3, i2));
    faces.push_back(make_face(i0, i2, i3, i1));
    faces.push_back(make_face(i1, i2, i3, i0));

    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        for (auto& f : faces) {
            if (signed_dist(f, points[i]) > eps) {
                f.outside.push_back(i);
                break;
            }
        }
    }

    // process faces with non-empty conflict lists
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t fi = 0; fi < faces.size(); ++fi) {
            if (!faces[fi].alive || faces[fi].outside.empty()) continue;
            progress = true;

            int far_idx = faces[fi].outside[0];
            double far_dist = signed_dist(faces[fi], points[far_idx]);
            for (int idx : faces[fi].outside) {
                const double d = signed_dist(faces[fi], points[idx]);
                if (d > far_dist) {
                    far_dist = d;
                    far_idx = idx;
                }
            }
            const Vec3& p = points[far_idx];

            std::vector<int> visible;
            for (std::size_t fj = 0; fj < faces.size(); ++fj) {
                if (faces[fj].alive && signed_dist(faces[fj], p) > eps) {
                    visible.push_back(static_cast<int>(fj));
                }
            }

            // horizon: directed edges of visible faces whose reverse is hidden
            std::map<std::pair<int, int>, int> edge_seen;
            for (int fj : visible) {
                const auto& f = faces[fj];
                const int vs[3][2] = {{f.a, f.b}, {f.b, f.c}, {f.c, f.a}};
                for (const auto& e : vs) edge_seen[{e[0], e[1]}] = fj;
            }
            std::vector<std::pair<int, int>> horizon;
            for (const auto& [e, fj] : edge_seen) {
                if (!edge_seen.count({e.second, e.first})) horizon.push_back(e);
            }

            std::vector<int> orphans;
            for (int fj : visible) {
                faces[fj].alive = false;
                orphans.insert(orphans.end(), faces[fj].outside.begin(), faces[fj].outside.end());
                faces[fj].outside.clear();
            }

            std::vector<std::size_t> fresh;
            for (const auto& [u, v] : horizon) {
                HullFace f;
                f.a = u;
                f.b = v;
                f.c = far_idx;
                const Vec3 nrm = (points[v] - points[u]).cross(p - points[u]);
                if (nrm.norm() < eps * eps) continue;  // sliver along the horizon
                f.normal = nrm.normalized();
                f.offset = f.normal.dot(points[u]);
                fresh.push_back(faces.size());
                faces.push_back(std::move(f));
            }

            for (int idx : orphans) {
                if (idx == far_idx) continue;
                for (std::size_t fj : fresh) {
                    if (signed_dist(faces[fj], points[idx]) > eps) {
                        faces[fj].outside.push_back(idx);
                        break;
                    }
                }
            }
        }
    }

    HullData out;
    out.points = points;
    std::vector<char> used(n, 0);
    for (const auto& f : faces) {
        if (!f.alive) continue;
        out.faces.push_back({f.a, f.b, f.c});
        used[f.a] = used[f.b] = used[f.c] = 1;
    }
    for (int i = 0; i < n; ++i) {
        if (used[i]) out.hull_vertices.push_back(i);
    }
    return out;
}

inline TriMesh hull_mesh(const HullData& hull) {
    TriMesh m;
    std::vector<int> remap(hull.points.size(), -1);
    for (int idx : hull.hull_vertices) {
        remap[idx] = static_cast<int>(m.vertices.size());
        m.vertices.push_back(hull.points[idx]);
    }
    for (const auto& f : hull.faces) {
        m.faces.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
    }
    return m;
}

}  // namespace detail

inline ConvexShape convex_hull(const TriMesh& mesh) {
    const auto hull = detail::compute_hull(mesh.vertices);
    std::vector<Vec3> verts;
    verts.reserve(hull.hull_vertices.size());
    for (int idx : hull.hull_vertices) verts.push_back(hull.points[idx]);
    return ConvexShape::from_vertices(std::move(verts));
}

inline ConvexShape convex_hull(const std::vector<Vec3>& points) {
    TriMesh m;
    m.vertices = points;
    const auto hull = detail::compute_hull(points);
    std::vector<Vec3> verts;
    verts.reserve(hull.hull_vertices.size());
    for (int idx : hull.hull_vertices) verts.push_back(hull.points[idx]);
    return ConvexShape::from_vertices(std::move(verts));
}

// --- GJK distance ------------------------------------------------------------

namespace detail {

struct GjkSimplex {
    Vec3 pts[4];
    int size = 0;
};

inline Vec3 closest_on_segment(const Vec3 a, const Vec3 b, GjkSimplex& keep) {
    const Vec3 ab = b - a;
    const double denom = ab.squaredNorm();
    double t = denom > 0 ? -a.dot(ab) / denom : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (t <= 0.0) {
        keep.pts[0] = a;
        keep.size = 1;
    } else if (t >= 1.0) {
        keep.pts[0] = b;
        keep.size = 1;
    } else {
        keep.pts[0] = a;
        keep.pts[1] = b;
        keep.size = 2;
    }
    return a + t * ab;
}

/// Closest point to the origin on triangle abc (Ericson, Real-Time
/// Collision Detection, section 5.1.5, specialized for the origin).
inline Vec3 closest_on_triangle(const Vec3 a, const Vec3 b, const Vec3 c, GjkSimplex& keep) {
    const Vec3 ab = b - a, ac = c - a;
    const Vec3 ap = -a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) {
        keep.pts[0] = a;
        keep.size = 1;
        return a;
    }
    const Vec3 bp = -b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) {
        keep.pts[0] = b;
        keep.size = 1;
        return b;
    }
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        const double v = d1 / (d1 - d3);
        keep.pts[0] = a;
        keep.pts[1] = b;
        keep.size = 2;
        return a + v * ab;
    }
    const Vec3 cp = -c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) {
        keep.pts[0] = c;
        keep.size = 1;
        return c;
    }
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        const double w = d2 / (d2 - d6);
        keep.pts[0] = a;
        keep.pts[1] = c;
        keep.size = 2;
        return a + w * ac;
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        keep.pts[0] = b;
        keep.pts[1] = c;
        keep.size = 2;
        return b + w * (c - b);
    }
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    keep.pts[0] = a;
    keep.pts[1] = b;
    keep.pts[2] = c;
    keep.size = 3;
    return a + ab * v + ac * w;
}

inline Vec3 closest_on_tetrahedron(GjkSimplex& s, bool& contains_origin) {
    const Vec3 a = s.pts[0], b = s.pts[1], c = s.pts[2], d = s.pts[3];
    auto outside = [](const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& opp) {
        const Vec3 n = (p1 - p0).cross(p2 - p0);
        const double signp = n.dot(-p0);
        const double signd = n.dot(opp - p0);
        return signp * signd < 0;
    };

    contains_origin = true;
    double best_d2 = std::numeric_limits<double>::max();
    Vec3 best = Vec3::Zero();
    GjkSimplex best_keep;

    const Vec3 tris[4][4] = {
        {a, b, c, d}, {a, b, d, c}, {a, c, d, b}, {b, c, d, a}};
    for (const auto& t : tris) {
        if (outside(t[0], t[1], t[2], t[3])) {
            contains_origin = false;
            GjkSimplex keep;
            const Vec3 p = closest_on_triangle(t[0], t[1], t[2], keep);
            const double d2 = p.squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = p;
                best_keep = keep;
            }
        }
    }
    if (!contains_origin) s = best_keep;
    return best;
}

}  // namespace detail

/// Minimum distance between two posed convex shapes (0 when intersecting).
inline double convex_distance(const ConvexShape& a, const Pose& pose_a, const ConvexShape& b,
                              const Pose& pose_b) {
    const Rotation ra_inv = pose_a.rotation.conjugate();
    const Rotation rb_inv = pose_b.rotation.conjugate();
    auto support = [&](const Vec3& dir) -> Vec3 {
        const Vec3 sa = pose_a.apply(a.support_local(ra_inv * dir));
        const Vec3 sb = pose_b.apply(b.support_local(rb_inv * -dir));
        return sa - sb;
    };

    detail::GjkSimplex simplex;
    Vec3 v = pose_a.apply(a.center) - pose_b.apply(b.center);
    if (v.squaredNorm() < 1e-24) v = Vec3::UnitX();

    const int max_iter = 128;
    for (int iter = 0; iter < max_iter; ++iter) {
        const Vec3 w = support(-v);
        const double vv = v.squaredNorm();
        if (vv - v.dot(w) <= 1e-12 * std::max(vv, 1e-12)) {
            return std::sqrt(vv);  // converged: w adds no progress toward the origin
        }
        // polytope GJK terminates exactly once a support vertex repeats
        bool repeat = false;
        for (int i = 0; i < simplex.size; ++i) {
            if ((simplex.pts[i] - w).squaredNorm() < 1e-28) {
                repeat = true;
                break;
            }
        }
        if (repeat) return std::sqrt(vv);
        simplex.pts[simplex.size++] = w;

        bool contains = false;
        switch (simplex.size) {
            case 1:
                v = simplex.pts[0];
                break;
            case 2:
                v = detail::closest_on_segment(simplex.pts[0], simplex.pts[1], simplex);
                break;
            case 3:
                v = detail::closest_on_triangle(simplex.pts[0], simplex.pts[1], simplex.pts[2],
                                                simplex);
                break;
            case 4:
                v = detail::closest_on_tetrahedron(simplex, contains);
                if (contains) return 0.0;
                break;
        }
        if (v.squaredNorm() < 1e-24) return 0.0;  // origin on the simplex boundary
    }
    return std::sqrt(v.squaredNorm());
}

/// Boolean narrow-phase: true iff the posed shapes intersect or touch
/// within the contact tolerance.
inline bool collide(const ConvexShape& a, const Pose& pose_a, const ConvexShape& b,
                    const Pose& pose_b) {
    const Vec3 ca = pose_a.apply(a.center);
    const Vec3 cb = pose_b.apply(b.center);
    const double gap = (ca - cb).norm() - a.radius - b.radius;
    if (gap > kContactTol) return false;
    return convex_distance(a, pose_a, b, pose_b) <= kContactTol;
}

// --- stable placements -------------------------------------------------------

namespace detail {

struct HullFacet {
    Vec3 normal;
    std::vector<int> boundary;  // point indices, ordered ccw seen from outside
};

/// Merge coplanar adjacent hull triangles into convex polygonal facets.
inline std::vector<HullFacet> hull_facets(const HullData& hull, double normal_tol_rad = 1e-4) {
    const int nf = static_cast<int>(hull.faces.size());
    std::vector<Vec3> normals(nf);
    for (int i = 0; i < nf; ++i) {
        const Vec3 n = (hull.points[hull.faces[i][1]] - hull.points[hull.faces[i][0]])
                           .cross(hull.points[hull.faces[i][2]] - hull.points[hull.faces[i][0]]);
        normals[i] = n.normalized();
    }

    std::map<std::pair<int, int>, int> edge_face;
    for (int i = 0; i < nf; ++i) {
        const auto& f = hull.faces[i];
        edge_face[{f[0], f[1]}] = i;
        edge_face[{f[1], f[2]}] = i;
        edge_face[{f[2], f[0]}] = i;
    }
    auto neighbor = [&](int face, int u, int v) -> int {
        const auto it = edge_face.find({v, u});
        return it == edge_face.end() ? -1 : it->second;
    };

    const double cos_tol = std::cos(normal_tol_rad);
    std::vector<int> cluster(nf, -1);
    std::vector<HullFacet> facets;
    for (int seed = 0; seed < nf; ++seed) {
        if (cluster[seed] >= 0) continue;
        const int id = static_cast<int>(facets.size());
        std::vector<int> members;
        std::vector<int> stack{seed};
        cluster[seed] = id;
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            members.push_back(cur);
            const auto& f = hull.faces[cur];
            const int edges[3][2] = {{f[0], f[1]}, {f[1], f[2]}, {f[2], f[0]}};
            for (const auto& e : edges) {
                const int nb = neighbor(cur, e[0], e[1]);
                if (nb >= 0 && cluster[nb] < 0 && normals[nb].dot(normals[seed]) >= cos_tol) {
                    cluster[nb] = id;
                    stack.push_back(nb);
                }
            }
        }

        HullFacet facet;
        facet.normal = normals[seed];
        // boundary = directed edges whose reverse lies outside the cluster
        std::map<int, int> next;
        for (int m : members) {
            const auto& f = hull.faces[m];
            const int edges[3][2] = {{f[0], f[1]}, {f[1], f[2]}, {f[2], f[0]}};
            for (const auto& e : edges) {
                const int nb = neighbor(m, e[0], e[1]);
                if (nb < 0 || cluster[nb] != id) next[e[0]] = e[1];
            }
        }
        if (!next.empty()) {
            const int start = next.begin()->first;
            int cur = start;
            do {
                facet.boundary.push_back(cur);
                cur = next.at(cur);
            } while (cur != start && facet.boundary.size() <= next.size());
        }
        facets.push_back(std::move(facet));
    }
    return facets;
}

}  // namespace detail

/// One pose per convex-hull facet whose plane receives the centroid projection
/// strictly inside the facet polygon (1e-6 m margin). Each pose puts that
/// facet flush on z=0 with the body above and the centroid on the z axis.
inline std::vector<Pose> stable_placements(const TriMesh& mesh) {
    const Vec3 c = centroid(mesh);
    const auto hull = detail::compute_hull(mesh.vertices);
    const auto facets = detail::hull_facets(hull);

    std::vector<Pose> placements;
    for (const auto& facet : facets) {
        if (facet.boundary.size() < 3) continue;
        const Vec3& n = facet.normal;
        const Vec3& p0 = hull.points[facet.boundary[0]];
        const Vec3 proj = c - (c - p0).dot(n) * n;

        bool inside = true;
        for (std::size_t i = 0; i < facet.boundary.size() && inside; ++i) {
            const Vec3& u = hull.points[facet.boundary[i]];
            const Vec3& v = hull.points[facet.boundary[(i + 1) % facet.boundary.size()]];
            const Vec3 inward = n.cross(v - u).normalized();
            if ((proj - u).dot(inward) <= 1e-6) inside = false;
        }
        if (!inside) continue;

        const Rotation rot = rotation_between(n, Vec3(0, 0, -1));
        const Vec3 rc = rot * c;
        const double table_z = (rot * p0).z();
        placements.emplace_back(Vec3(-rc.x(), -rc.y(), -table_z), rot);
    }
    return placements;
}

}  // namespace gatamp
