#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "eyecontact/camera.hpp"
#include "eyecontact/errors.hpp"

namespace eyecontact {

// Landmark order shared by FaceModel3D and Landmarks2D.
enum LandmarkIndex : int {
    kRightEyeOuter = 0,
    kRightEyeInner = 1,
    kLeftEyeInner = 2,
    kLeftEyeOuter = 3,
    kRightMouthCorner = 4,
    kLeftMouthCorner = 5,
};

constexpr int kNumLandmarks = 6;

// Six 3D landmark positions (mm) in the model frame: four eye corners and
// two mouth corners. The constructor re-centers the points on their
// centroid, so the centroid is always the origin, and rejects point sets
// that collapse to a line.
class FaceModel3D {
public:
    explicit FaceModel3D(const std::array<Vec3, kNumLandmarks>& points)
        : points_(points) {
        Vec3 centroid = Vec3::Zero();
        for (const auto& p : points_) centroid += p;
        centroid /= kNumLandmarks;
        for (auto& p : points_) p -= centroid;

        Eigen::Matrix<double, kNumLandmarks, 3> m;
        for (int i = 0; i < kNumLandmarks; ++i) m.row(i) = points_[i].transpose();
        Eigen::JacobiSVD<Eigen::Matrix<double, kNumLandmarks, 3>> svd(m);
        const auto& sv = svd.singularValues();
        if (!m.allFinite() || sv(1) <= 1e-9 * sv(0) || sv(0) <= 0.0) {
            throw DegenerateModelError("face model points are collinear or degenerate");
        }
    }

    const std::array<Vec3, kNumLandmarks>& points() const { return points_; }
    const Vec3& point(int i) const { return points_[static_cast<std::size_t>(i)]; }

private:
    std::array<Vec3, kNumLandmarks> points_;
};

// Built-in generic face model. The coordinates are nominal adult face
// dimensions in mm, chosen for this library; they are not calibrated to
// any dataset. x grows to the subject's left as seen by the camera, y is
// down, z is into the head. Centroid-centered by construction.
inline const FaceModel3D& default_face_model() {
    static const FaceModel3D model(std::array<Vec3, kNumLandmarks>{
        Vec3(-45.0, -22.0, 15.0),  // right-eye outer corner
        Vec3(-15.0, -22.0, 5.0),   // right-eye inner corner
        Vec3(15.0, -22.0, 5.0),    // left-eye inner corner
        Vec3(45.0, -22.0, 15.0),   // left-eye outer corner
        Vec3(-25.0, 44.0, -20.0),  // right mouth corner
        Vec3(25.0, 44.0, -20.0),   // left mouth corner
    });
    return model;
}

}  // namespace eyecontact
