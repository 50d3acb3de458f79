#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eyecontact/camera.hpp"
#include "eyecontact/errors.hpp"
#include "eyecontact/gaze.hpp"
#include "eyecontact/landmarks.hpp"

namespace eyecontact {

// Face/landmark visibility classes of a frame, from full visibility down
// to no face at all.
enum class VisibilityCategory : int {
    WholeFaceAllLandmarks = 0,
    WholeFaceSomeLandmarks = 1,
    PartialFace2Eyes1Mouth = 2,
    PartialFace2EyesNoMouth = 3,
    PartialFace1Eye1Mouth = 4,
    PartialFace1EyeNoMouth = 5,
    PartialFaceNoEyes1Mouth = 6,
    NoFace = 7,
};

constexpr int kNumCategories = 8;

inline const std::array<const char*, kNumCategories>& category_names() {
    static const std::array<const char*, kNumCategories> names = {
        "Whole face all landmarks",
        "Whole face some landmarks",
        "Partial face 2 eyes 1 mouth",
        "Partial face 2 eyes no mouth",
        "Partial face 1 eye 1 mouth",
        "Partial face 1 eye no mouth",
        "Partial face no eyes 1 mouth",
        "No face",
    };
    return names;
}

inline const char* to_string(VisibilityCategory c) {
    return category_names()[static_cast<std::size_t>(c)];
}

inline VisibilityCategory category_from_string(const std::string& name) {
    const auto& names = category_names();
    for (int i = 0; i < kNumCategories; ++i) {
        if (name == names[static_cast<std::size_t>(i)]) {
            return static_cast<VisibilityCategory>(i);
        }
    }
    throw DataError("unknown visibility category: \"" + name + "\"");
}

// One observed frame. Landmarks and intrinsics feed the geometric
// pipeline; feature/gaze_estimate stand in for the upstream CNN outputs
// and may be absent. true_gaze is generator-only ground truth used by
// oracle checks; the pipeline never reads it.
struct FrameRecord {
    std::string person_id;
    std::string frame_id;
    Landmarks2D landmarks;
    CameraIntrinsics intrinsics;
    VisibilityCategory visibility_category = VisibilityCategory::WholeFaceAllLandmarks;
    std::optional<std::vector<double>> feature;
    std::optional<GazeVector> gaze_estimate;
    std::optional<GazeVector> true_gaze;
    std::optional<bool> gt_eye_contact;
};

// Checks the category against the landmark presence pattern.
inline bool category_consistent(const FrameRecord& rec) {
    const auto& pts = rec.landmarks.points;
    const int eyes = (pts[kRightEyeOuter] ? 1 : 0) + (pts[kRightEyeInner] ? 1 : 0) +
                     (pts[kLeftEyeInner] ? 1 : 0) + (pts[kLeftEyeOuter] ? 1 : 0);
    const int mouth = (pts[kRightMouthCorner] ? 1 : 0) + (pts[kLeftMouthCorner] ? 1 : 0);
    const int total = eyes + mouth;
    switch (rec.visibility_category) {
        case VisibilityCategory::WholeFaceAllLandmarks:
            return total == kNumLandmarks;
        case VisibilityCategory::WholeFaceSomeLandmarks:
            return total >= 4 && total < kNumLandmarks;
        case VisibilityCategory::PartialFace2Eyes1Mouth:
            return eyes == 4 && mouth == 1;
        case VisibilityCategory::PartialFace2EyesNoMouth:
            return eyes == 4 && mouth == 0;
        case VisibilityCategory::PartialFace1Eye1Mouth:
            return eyes == 2 && mouth == 1;
        case VisibilityCategory::PartialFace1EyeNoMouth:
            return eyes == 2 && mouth == 0;
        case VisibilityCategory::PartialFaceNoEyes1Mouth:
            return eyes == 0 && mouth == 1;
        case VisibilityCategory::NoFace:
            return total == 0;
    }
    return false;
}

inline void validate(const FrameRecord& rec) {
    if (rec.person_id.empty()) throw DataError("frame record has empty person_id");
    validate(rec.landmarks);
    if (!category_consistent(rec)) {
        throw DataError("frame " + rec.frame_id + ": visibility category \"" +
                        to_string(rec.visibility_category) +
                        "\" inconsistent with landmark presence");
    }
}

}  // namespace eyecontact
