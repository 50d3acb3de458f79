#pragma once

#include <cmath>

#include <Eigen/Core>

#include "eyecontact/camera.hpp"
#include "eyecontact/errors.hpp"
#include "eyecontact/gaze.hpp"
#include "eyecontact/pose.hpp"

namespace eyecontact {

// Fixed virtual camera the data is normalized into.
struct NormParams {
    double d_n = 600.0;  // normalized face distance, mm
    double fx_n = 960.0;
    double fy_n = 960.0;
    double cx_n = 112.0;
    double cy_n = 112.0;
};

inline void validate(const NormParams& np) {
    if (!(np.d_n > 0.0) || !(np.fx_n > 0.0) || !(np.fy_n > 0.0) ||
        !std::isfinite(np.cx_n) || !std::isfinite(np.cy_n)) {
        throw InvalidConfigError("normalization parameters require d_n, fx_n, fy_n > 0");
    }
}

// Rotation + scaling into the normalized camera space. Rows of R are the
// normalized camera axes expressed in the real camera frame. Directions
// transform with R alone; positions and the pixel warp also pick up the
// scale S = diag(1, 1, s).
struct NormalizationTransform {
    Mat3 rotation = Mat3::Identity();   // camera -> normalized camera
    double scale = 1.0;                 // d_n / ||face center||
    Mat3 combined = Mat3::Identity();   // diag(1, 1, s) * R
};

// Builds the transform that looks at the face center and cancels head
// roll: the third row of R is the unit ray to the face center, the second
// row is orthogonal to the head's x-axis.
inline NormalizationTransform compute_normalization(const HeadPose& pose, const Vec3& center,
                                                    const NormParams& np = {}) {
    validate(np);
    const double dist = center.norm();
    if (!(dist > 1e-9) || !center.allFinite()) {
        throw DegenerateGeometryError("face center must be away from the camera origin");
    }

    const Vec3 forward = center / dist;
    const Vec3 head_x = pose.rotation.col(0);
    Vec3 down = forward.cross(head_x);
    const double down_norm = down.norm();
    if (down_norm < 1e-9) {
        throw RollUndefinedError("head x-axis is parallel to the view ray; roll is undefined");
    }
    down /= down_norm;
    const Vec3 right = down.cross(forward);

    NormalizationTransform t;
    t.rotation.row(0) = right.transpose();
    t.rotation.row(1) = down.transpose();
    t.rotation.row(2) = forward.transpose();
    t.scale = np.d_n / dist;
    Mat3 s = Mat3::Identity();
    s(2, 2) = t.scale;
    t.combined = s * t.rotation;
    return t;
}

// Rotation only; unit directions stay unit.
inline GazeVector normalize_gaze(const NormalizationTransform& t, const GazeVector& g) {
    return GazeVector::from(t.rotation * g.direction);
}

inline GazeVector denormalize_gaze(const NormalizationTransform& t, const GazeVector& g_n) {
    return GazeVector::from(t.rotation.transpose() * g_n.direction);
}

// Head pitch/yaw in the normalized camera space, degrees. These are the
// angles consumed by head-pose bucketing.
inline std::pair<double, double> normalize_head_pose(const NormalizationTransform& t,
                                                     const HeadPose& pose) {
    const HeadAngles a = rotation_to_angles(t.rotation * pose.rotation);
    return {a.pitch, a.yaw};
}

// Pixel warp W = C_n * M * C_r^{-1} between the real and normalized image
// planes. Computed for external consumers; this library never resamples
// pixels.
inline Mat3 warp_matrix(const NormalizationTransform& t, const CameraIntrinsics& intr,
                        const NormParams& np = {}) {
    validate(intr);
    validate(np);
    Mat3 norm_k;
    norm_k << np.fx_n, 0, np.cx_n,
              0, np.fy_n, np.cy_n,
              0, 0, 1;
    Mat3 real_k_inv;
    real_k_inv << 1.0 / intr.fx, 0, -intr.cx / intr.fx,
                  0, 1.0 / intr.fy, -intr.cy / intr.fy,
                  0, 0, 1;
    return norm_k * t.combined * real_k_inv;
}

}  // namespace eyecontact
