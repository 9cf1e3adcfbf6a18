#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>
#include <string>

namespace gatamp {

using Vec3 = Eigen::Vector3d;
using Rotation = Eigen::Quaterniond;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kContactTol = 1e-6;   // touching counts as colliding
inline constexpr double kGeomEps = 1e-9;

struct invalid_argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct degenerate_geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Vec3 gravity_direction() { return Vec3(0.0, 0.0, -1.0); }

/// Angle between two directions in degrees, in [0, 180].
inline double angle_deg(const Vec3& u, const Vec3& v) {
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu < kGeomEps || nv < kGeomEps) {
        throw invalid_argument_error("angle_deg: zero-length direction");
    }
    double c = u.dot(v) / (nu * nv);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c) * 180.0 / M_PI;
}

inline double deg_to_rad(double d) { return d * M_PI / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / M_PI; }

/// Rigid transform: world_point = rotation * local_point + position.
struct Pose {
    Vec3 position{Vec3::Zero()};
    Rotation rotation{Rotation::Identity()};

    Pose() = default;
    Pose(const Vec3& p, const Rotation& r) : position(p), rotation(r.normalized()) {}

    static Pose identity() { return Pose(); }

    Vec3 apply(const Vec3& local) const { return rotation * local + position; }
    Vec3 apply_direction(const Vec3& d) const { return rotation * d; }

    Pose operator*(const Pose& other) const {
        return Pose(rotation * other.position + position, rotation * other.rotation);
    }

    Pose inverse() const {
        Rotation rinv = rotation.conjugate();
        return Pose(rinv * (-position), rinv);
    }

    bool is_finite() const {
        return position.allFinite() && std::isfinite(rotation.w()) &&
               std::isfinite(rotation.x()) && std::isfinite(rotation.y()) &&
               std::isfinite(rotation.z());
    }
};

/// Minimal rotation taking unit vector `from` onto unit vector `to`.
inline Rotation rotation_between(const Vec3& from, const Vec3& to) {
    Rotation q = Rotation::FromTwoVectors(from, to);
    q.normalize();
    return q;
}

inline Rotation axis_angle(const Vec3& axis, double angle_rad) {
    return Rotation(Eigen::AngleAxisd(angle_rad, axis.normalized()));
}

/// Deterministic unit vector orthogonal to v: the projection of world-x onto
/// the plane normal to v, or world-y when v is (anti)parallel to world-x.
inline Vec3 orthogonal_reference(const Vec3& v) {
    const Vec3 z = v.normalized();
    Vec3 x = Vec3::UnitX() - Vec3::UnitX().dot(z) * z;
    if (x.norm() < 1e-6) {
        x = Vec3::UnitY() - Vec3::UnitY().dot(z) * z;
    }
    return x.normalized();
}

/// Orthonormal right-handed frame with the given z column and a roll angle
/// about it measured from the deterministic reference x.
inline Rotation frame_about_z(const Vec3& z_axis, double roll_rad) {
    const Vec3 z = z_axis.normalized();
    const Vec3 x0 = orthogonal_reference(z);
    const Vec3 x = axis_angle(z, roll_rad) * x0;
    const Vec3 y = z.cross(x);
    Mat3 m;
    m.col(0) = x;
    m.col(1) = y;
    m.col(2) = z;
    return Rotation(m).normalized();
}

}  // namespace gatamp
