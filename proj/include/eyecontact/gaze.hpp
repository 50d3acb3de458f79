#pragma once

#include <cmath>

#include "eyecontact/camera.hpp"
#include "eyecontact/errors.hpp"

namespace eyecontact {

// Unit gaze direction in camera coordinates. z is negative when the gaze
// points toward the camera plane.
struct GazeVector {
    Vec3 direction = Vec3(0, 0, -1);

    static GazeVector from(const Vec3& v) {
        double n = v.norm();
        if (!(n > 0.0) || !v.allFinite()) {
            throw DegenerateGeometryError("gaze direction must be a finite non-zero vector");
        }
        return {v / n};
    }
};

inline void validate(const GazeVector& g) {
    if (!g.direction.allFinite() || std::abs(g.direction.norm() - 1.0) > 1e-9) {
        throw DegenerateGeometryError("gaze direction must be unit length");
    }
}

// Point in the camera plane (z = 0), in mm, origin at the camera.
struct GazePoint2D {
    double x = 0.0;
    double y = 0.0;
};

// Walks the ray origin + t * gaze to z = 0. Throws when the gaze does not
// point toward the plane (z component >= 0), which downstream treats as
// "looking away from the device plane".
inline GazePoint2D intersect_gaze_with_camera_plane(const Vec3& origin_mm,
                                                    const GazeVector& gaze) {
    if (!(origin_mm.z() > 0.0)) {
        throw DegenerateGeometryError("gaze ray origin must have z > 0");
    }
    if (!(gaze.direction.z() < 0.0)) {
        throw NoIntersectionError("gaze does not intersect the camera plane (z >= 0)");
    }
    const double t = origin_mm.z() / -gaze.direction.z();
    return {origin_mm.x() + t * gaze.direction.x(),
            origin_mm.y() + t * gaze.direction.y()};
}

}  // namespace eyecontact
