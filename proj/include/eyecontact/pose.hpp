#pragma once

#include <cmath>

#include <Eigen/Core>

#include "eyecontact/camera.hpp"
#include "eyecontact/errors.hpp"

namespace eyecontact {

constexpr double kDegPerRad = 180.0 / M_PI;
constexpr double kRadPerDeg = M_PI / 180.0;

// Rigid transform of the face model into camera coordinates. rotation maps
// model-frame vectors to camera-frame vectors; translation is in mm.
struct HeadPose {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    double reprojection_error = 0.0;  // RMS pixels over the landmarks used
};

inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
    return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(r.determinant() - 1.0) <= tol;
}

inline void validate(const HeadPose& pose) {
    if (!pose.rotation.allFinite() || !is_rotation(pose.rotation)) {
        throw DegenerateGeometryError("head pose rotation is not orthonormal with det +1");
    }
    if (!pose.translation.allFinite() || !(pose.translation.z() > 0.0)) {
        throw DegenerateGeometryError("head pose translation must be finite with z > 0");
    }
}

// Head orientation in degrees. Pitch is positive looking up, yaw positive
// looking to the camera's left, both w.r.t. a y-down, z-into-scene camera
// frame in which the frontal face's forward axis is (0, 0, -1).
struct HeadAngles {
    double pitch = 0.0;
    double yaw = 0.0;
    double roll = 0.0;
};

namespace detail {

inline Mat3 rot_x(double rad) {
    double c = std::cos(rad), s = std::sin(rad);
    Mat3 m;
    m << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return m;
}

inline Mat3 rot_y(double rad) {
    double c = std::cos(rad), s = std::sin(rad);
    Mat3 m;
    m << c, 0, s,
         0, 1, 0,
         -s, 0, c;
    return m;
}

inline Mat3 rot_z(double rad) {
    double c = std::cos(rad), s = std::sin(rad);
    Mat3 m;
    m << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    return m;
}

}  // namespace detail

// R = Ry(yaw) * Rx(-pitch) * Rz(roll). With this composition the rotated
// forward axis -R*e_z reproduces (pitch, yaw) exactly and roll is a spin
// about the forward axis.
inline Mat3 rotation_from_angles(const HeadAngles& a) {
    return detail::rot_y(a.yaw * kRadPerDeg) *
           detail::rot_x(-a.pitch * kRadPerDeg) *
           detail::rot_z(a.roll * kRadPerDeg);
}

// Inverse of rotation_from_angles on pitch, yaw in (-90, 90). At the gimbal
// singularity |pitch| = 90 this returns yaw = 0 by convention.
inline HeadAngles rotation_to_angles(const Mat3& rotation) {
    if (!is_rotation(rotation)) {
        throw DegenerateGeometryError("rotation_to_angles: input is not orthonormal with det +1");
    }
    const Vec3 forward = -rotation.col(2);

    HeadAngles a;
    const double sy = std::clamp(-forward.y(), -1.0, 1.0);
    a.pitch = std::asin(sy) * kDegPerRad;
    if (1.0 - std::abs(sy) < 1e-15) {
        a.yaw = 0.0;  // gimbal-degenerate; yaw/roll share an axis
    } else {
        a.yaw = std::atan2(-forward.x(), -forward.z()) * kDegPerRad;
    }
    const Mat3 base = detail::rot_y(a.yaw * kRadPerDeg) * detail::rot_x(-a.pitch * kRadPerDeg);
    const Mat3 spin = base.transpose() * rotation;
    a.roll = std::atan2(spin(1, 0), spin(0, 0)) * kDegPerRad;
    return a;
}

// Relative angle between two rotations, in degrees.
inline double rotation_angle_deg(const Mat3& a, const Mat3& b) {
    double c = ((a.transpose() * b).trace() - 1.0) / 2.0;
    return std::acos(std::clamp(c, -1.0, 1.0)) * kDegPerRad;
}

}  // namespace eyecontact
