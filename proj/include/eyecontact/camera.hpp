#pragma once

#include <cmath>

#include <Eigen/Core>

#include "eyecontact/errors.hpp"

namespace eyecontact {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Ideal pinhole camera. Focal lengths and principal point in pixels; no
// distortion model.
struct CameraIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;

    bool operator==(const CameraIntrinsics&) const = default;
};

inline void validate(const CameraIntrinsics& intr) {
    if (!(intr.fx > 0.0) || !(intr.fy > 0.0) || !std::isfinite(intr.fx) ||
        !std::isfinite(intr.fy) || !std::isfinite(intr.cx) ||
        !std::isfinite(intr.cy)) {
        throw InvalidIntrinsicsError("camera intrinsics require fx, fy > 0 and finite cx, cy");
    }
}

inline Mat3 intrinsic_matrix(const CameraIntrinsics& intr) {
    Mat3 k;
    k << intr.fx, 0.0, intr.cx,
         0.0, intr.fy, intr.cy,
         0.0, 0.0, 1.0;
    return k;
}

// Projects a camera-frame point (mm) to pixels. Throws if the point lies on
// or behind the camera plane.
inline Vec2 project_point(const Vec3& camera_point, const CameraIntrinsics& intr) {
    if (!(camera_point.z() > 0.0)) {
        throw ProjectionDegenerateError("point has non-positive depth Z = " +
                                        std::to_string(camera_point.z()));
    }
    return {intr.fx * camera_point.x() / camera_point.z() + intr.cx,
            intr.fy * camera_point.y() / camera_point.z() + intr.cy};
}

}  // namespace eyecontact
