#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "eyecontact/camera.hpp"
#include "eyecontact/errors.hpp"
#include "eyecontact/face_model.hpp"

namespace eyecontact {

// Detected 2D pixel landmarks, aligned with the FaceModel3D point order.
// An empty entry means the landmark was not visible in the frame.
struct Landmarks2D {
    std::array<std::optional<Vec2>, kNumLandmarks> points;

    int visible_count() const {
        int n = 0;
        for (const auto& p : points)
            if (p.has_value()) ++n;
        return n;
    }
};

inline void validate(const Landmarks2D& lm) {
    for (const auto& p : lm.points) {
        if (p && !p->allFinite()) {
            throw DegenerateGeometryError("landmark coordinates must be finite");
        }
    }
}

}  // namespace eyecontact
