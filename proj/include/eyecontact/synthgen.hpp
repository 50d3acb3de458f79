#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eyecontact/camera.hpp"
#include "eyecontact/errors.hpp"
#include "eyecontact/face_model.hpp"
#include "eyecontact/frame.hpp"
#include "eyecontact/gaze.hpp"
#include "eyecontact/normalization.hpp"
#include "eyecontact/pipeline.hpp"
#include "eyecontact/pnp.hpp"
#include "eyecontact/pose.hpp"
#include "eyecontact/rng.hpp"

namespace eyecontact {

// Head pitch/yaw distribution in the normalized camera space: a central
// Gaussian mixed with a wide component for the heavy tails seen in mobile
// use. spin_sigma_deg controls camera-frame head roll, which normalization
// cancels.
struct HeadPoseDistribution {
    double pitch_mean = 0.0;
    double yaw_mean = 0.0;
    double sigma_central = 10.0;
    double sigma_wide = 30.0;
    double wide_weight = 0.2;
    double spin_sigma_deg = 8.0;
};

struct GeneratorConfig {
    int n_persons = 10;
    int frames_per_person = 500;
    double p_contact = 0.58;

    // Device screen rectangle in camera-plane mm; the camera sits at the
    // top edge of a phone-sized screen.
    double screen_x_min = -35.0;
    double screen_x_max = 35.0;
    double screen_y_min = 10.0;
    double screen_y_max = 150.0;

    double distance_min = 300.0;  // face distance range, mm
    double distance_max = 550.0;
    double face_offset_max_deg = 5.0;  // face-center direction cone around the optical axis

    HeadPoseDistribution head_pose;
    double person_pose_offset_sigma = 3.0;  // idiosyncratic per-person mean shift, deg

    double pixel_noise_sigma = 0.5;

    // Gaze estimate error grows with head-pose extremity, mirroring how
    // appearance-based estimators degrade off-distribution.
    double gaze_noise_sigma_deg = 2.0;
    double gaze_noise_pose_factor = 2.0;  // extra multiples of sigma per 20 deg of pose

    std::size_t feature_dim = 64;
    double feature_noise_sigma = 0.05;
    double feature_noise_pose_factor = 3.0;
    double person_bias_sigma = 0.05;
    double person_embedding_sigma = 0.1;  // per-person deviation from the shared embedding

    // Non-contact gaze targets: a few discrete environment anchors shared
    // by the dataset (each becomes a gaze cluster), jittered per person, a
    // diffuse annulus component, and a fraction of gazes directed away
    // from the device plane.
    int env_targets = 4;
    double env_radius_min = 450.0;
    double env_radius_max = 1000.0;
    double env_scatter_sigma = 35.0;
    double env_person_jitter = 15.0;  // per-person anchor displacement, mm
    double env_diffuse_fraction = 0.10;
    double env_behind_fraction = 0.05;

    std::array<double, kNumCategories> visibility_weights = {1, 0, 0, 0, 0, 0, 0, 0};

    CameraIntrinsics intrinsics{1000.0, 1000.0, 640.0, 480.0};
    std::uint64_t seed = 0;
};

inline void validate(const GeneratorConfig& cfg) {
    auto fail = [](const std::string& what) { throw InvalidConfigError("generator config: " + what); };
    if (cfg.n_persons < 1 || cfg.frames_per_person < 1) fail("need at least one person and one frame");
    if (!(cfg.p_contact > 0.0 && cfg.p_contact < 1.0)) fail("p_contact must lie in (0, 1)");
    if (!(cfg.screen_x_min < cfg.screen_x_max) || !(cfg.screen_y_min < cfg.screen_y_max)) {
        fail("screen rectangle is empty");
    }
    if (!(cfg.distance_min > 0.0) || !(cfg.distance_min <= cfg.distance_max)) {
        fail("face distance range is empty or non-positive");
    }
    if (!(cfg.head_pose.wide_weight >= 0.0 && cfg.head_pose.wide_weight <= 1.0)) {
        fail("wide_weight must lie in [0, 1]");
    }
    if (cfg.feature_dim == 0) fail("feature_dim must be positive");
    if (cfg.env_targets < 1) fail("need at least one environment target");
    if (!(cfg.env_radius_min > 0.0) || !(cfg.env_radius_min <= cfg.env_radius_max)) {
        fail("environment radius range is empty");
    }
    if (!(cfg.env_diffuse_fraction >= 0.0 && cfg.env_behind_fraction >= 0.0 &&
          cfg.env_diffuse_fraction + cfg.env_behind_fraction <= 1.0)) {
        fail("environment fractions must be non-negative and sum to <= 1");
    }
    double wsum = 0.0;
    for (double w : cfg.visibility_weights) {
        if (w < 0.0) fail("visibility weights must be non-negative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9) fail("visibility weights must sum to 1");
    validate(cfg.intrinsics);
}

// Person-specific appearance: a random linear embedding of the gaze/pose
// signal plus a bias, and an idiosyncratic head-pose offset. Deterministic
// in (seed, person index).
struct PersonProfile {
    std::string person_id;
    Eigen::MatrixXd embedding;  // feature_dim x 5
    Eigen::VectorXd bias;       // feature_dim
    double pitch_offset = 0.0;
    double yaw_offset = 0.0;
};

namespace synth_detail {

enum Stream : std::uint64_t {
    kPersonStream = 1,
    kPoseStream = 2,
    kTargetStream = 3,
    kLandmarkStream = 4,
    kCategoryStream = 5,
    kFeatureStream = 6,
    kGazeNoiseStream = 7,
    kEnvStream = 8,
};

inline std::string person_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%03d", index);
    return buf;
}

// Right-handed frame whose third row is the unit view ray; rows one and
// two are spun about the ray by spin_rad. Any such frame normalizes back
// to the exact sampled pitch/yaw.
inline Mat3 view_frame(const Vec3& forward, double spin_rad) {
    Vec3 down = forward.cross(Vec3::UnitX());
    down.normalize();
    const Vec3 right = down.cross(forward);
    Mat3 look;
    look.row(0) = right.transpose();
    look.row(1) = down.transpose();
    look.row(2) = forward.transpose();
    return detail::rot_z(spin_rad) * look;
}

inline double mixture_angle(Rng& rng, double mean, const HeadPoseDistribution& d) {
    const double sigma = rng.bernoulli(d.wide_weight) ? d.sigma_wide : d.sigma_central;
    for (int i = 0; i < 64; ++i) {
        const double a = rng.normal(mean, sigma);
        if (std::abs(a) < 85.0) return a;
    }
    return std::clamp(rng.normal(mean, sigma), -85.0, 85.0);
}

inline Vec3 perturb_direction(const Vec3& dir, double angle_rad, double azimuth_rad) {
    // Rotate dir by angle_rad about an axis perpendicular to it, the axis
    // picked by azimuth within the perpendicular plane.
    Vec3 ref = std::abs(dir.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    const Vec3 e1 = dir.cross(ref).normalized();
    const Vec3 e2 = dir.cross(e1);
    const Vec3 axis = std::cos(azimuth_rad) * e1 + std::sin(azimuth_rad) * e2;
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    return (c * dir + s * axis.cross(dir) + (1.0 - c) * axis.dot(dir) * axis).normalized();
}

}  // namespace synth_detail

// The embedding is a dataset-wide random matrix (seeded from the master
// seed alone) plus a per-person perturbation. Persons therefore share most
// of the feature structure, as the fully-connected CNN features they stand
// in for do, while leave-one-person-out still sees genuine person shift.
inline PersonProfile make_person_profile(const GeneratorConfig& cfg, int person_index) {
    PersonProfile p;
    p.person_id = synth_detail::person_name(person_index);

    Rng base_rng(derive_seed(cfg.seed, synth_detail::kPersonStream, 0xba5eULL));
    p.embedding.resize(static_cast<Eigen::Index>(cfg.feature_dim), 5);
    for (Eigen::Index r = 0; r < p.embedding.rows(); ++r) {
        for (Eigen::Index c = 0; c < 5; ++c) p.embedding(r, c) = base_rng.normal();
    }

    Rng rng(derive_seed(cfg.seed, synth_detail::kPersonStream, static_cast<std::uint64_t>(person_index) + 1));
    for (Eigen::Index r = 0; r < p.embedding.rows(); ++r) {
        for (Eigen::Index c = 0; c < 5; ++c) {
            p.embedding(r, c) += rng.normal(0.0, cfg.person_embedding_sigma);
        }
    }
    p.bias.resize(static_cast<Eigen::Index>(cfg.feature_dim));
    for (Eigen::Index r = 0; r < p.bias.size(); ++r) {
        p.bias(r) = rng.normal(0.0, cfg.person_bias_sigma);
    }
    p.pitch_offset = rng.normal(0.0, cfg.person_pose_offset_sigma);
    p.yaw_offset = rng.normal(0.0, cfg.person_pose_offset_sigma);
    return p;
}

// Affine surrogate for the CNN feature vector: the person's embedding of
// [gaze_n (3), pitch_n/90, yaw_n/90] plus bias plus isotropic Gaussian
// noise.
inline std::vector<double> synth_feature(const GazeVector& gaze_n, double pitch_n, double yaw_n,
                                         const PersonProfile& profile, double noise_sigma,
                                         Rng& rng) {
    Eigen::Matrix<double, 5, 1> v;
    v << gaze_n.direction.x(), gaze_n.direction.y(), gaze_n.direction.z(), pitch_n / 90.0,
        yaw_n / 90.0;
    Eigen::VectorXd f = profile.embedding * v + profile.bias;
    std::vector<double> out(static_cast<std::size_t>(f.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = f(static_cast<Eigen::Index>(i)) + rng.normal(0.0, noise_sigma);
    }
    return out;
}

namespace synth_detail {

inline void apply_visibility(Landmarks2D& lm, VisibilityCategory cat, Rng& rng) {
    auto drop = [&](int i) { lm.points[static_cast<std::size_t>(i)].reset(); };
    auto keep_only = [&](std::initializer_list<int> keep) {
        std::array<bool, kNumLandmarks> keep_mask{};
        for (int i : keep) keep_mask[static_cast<std::size_t>(i)] = true;
        for (int i = 0; i < kNumLandmarks; ++i) {
            if (!keep_mask[static_cast<std::size_t>(i)]) drop(i);
        }
    };
    const bool right_eye = rng.bernoulli(0.5);
    const bool right_mouth = rng.bernoulli(0.5);
    const int eye_a = right_eye ? kRightEyeOuter : kLeftEyeInner;
    const int eye_b = right_eye ? kRightEyeInner : kLeftEyeOuter;
    const int mouth = right_mouth ? kRightMouthCorner : kLeftMouthCorner;

    switch (cat) {
        case VisibilityCategory::WholeFaceAllLandmarks:
            break;
        case VisibilityCategory::WholeFaceSomeLandmarks: {
            const int n_drop = rng.bernoulli(0.5) ? 1 : 2;
            std::size_t first = rng.uniform_index(kNumLandmarks);
            drop(static_cast<int>(first));
            if (n_drop == 2) {
                std::size_t second = rng.uniform_index(kNumLandmarks - 1);
                if (second >= first) ++second;
                drop(static_cast<int>(second));
            }
            break;
        }
        case VisibilityCategory::PartialFace2Eyes1Mouth:
            drop(right_mouth ? kLeftMouthCorner : kRightMouthCorner);
            break;
        case VisibilityCategory::PartialFace2EyesNoMouth:
            drop(kRightMouthCorner);
            drop(kLeftMouthCorner);
            break;
        case VisibilityCategory::PartialFace1Eye1Mouth:
            keep_only({eye_a, eye_b, mouth});
            break;
        case VisibilityCategory::PartialFace1EyeNoMouth:
            keep_only({eye_a, eye_b});
            break;
        case VisibilityCategory::PartialFaceNoEyes1Mouth:
            keep_only({mouth});
            break;
        case VisibilityCategory::NoFace:
            keep_only({});
            break;
    }
}

}  // namespace synth_detail

// Generates one frame. Every random draw comes from substreams derived
// from (seed, stream, person, frame), so frames are independent of
// generation order and the whole dataset is byte-reproducible.
inline FrameRecord generate_frame(const GeneratorConfig& cfg, const PersonProfile& profile,
                                  const std::vector<Vec2>& env_anchors, int person_index,
                                  int frame_index) {
    using namespace synth_detail;
    const auto pi = static_cast<std::uint64_t>(person_index);
    const auto fi = static_cast<std::uint64_t>(frame_index);

    FrameRecord rec;
    rec.person_id = profile.person_id;
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s_f%05d", profile.person_id.c_str(), frame_index);
        rec.frame_id = buf;
    }
    rec.intrinsics = cfg.intrinsics;

    // Head pose and face placement.
    Rng pose_rng(derive_seed(cfg.seed, kPoseStream, pi, fi));
    const double pitch_n = mixture_angle(pose_rng, cfg.head_pose.pitch_mean + profile.pitch_offset,
                                         cfg.head_pose);
    const double yaw_n = mixture_angle(pose_rng, cfg.head_pose.yaw_mean + profile.yaw_offset,
                                       cfg.head_pose);
    const double spin = pose_rng.normal(0.0, cfg.head_pose.spin_sigma_deg) * kRadPerDeg;

    const double distance = pose_rng.uniform(cfg.distance_min, cfg.distance_max);
    const double max_tan = std::tan(cfg.face_offset_max_deg * kRadPerDeg);
    const double off_x = pose_rng.uniform(-max_tan, max_tan);
    const double off_y = pose_rng.uniform(-max_tan, max_tan);
    const Vec3 center = distance * Vec3(off_x, off_y, 1.0).normalized();

    const Mat3 frame_q = view_frame(center.normalized(), spin);
    const Mat3 target_rotation = rotation_from_angles({pitch_n, yaw_n, 0.0});

    HeadPose pose;
    pose.rotation = frame_q.transpose() * target_rotation;
    pose.translation = center;  // centroid-centered model

    // Gaze target.
    Rng target_rng(derive_seed(cfg.seed, kTargetStream, pi, fi));
    const bool contact = target_rng.bernoulli(cfg.p_contact);
    Vec3 true_gaze;
    if (contact) {
        const double tx = target_rng.uniform(cfg.screen_x_min, cfg.screen_x_max);
        const double ty = target_rng.uniform(cfg.screen_y_min, cfg.screen_y_max);
        true_gaze = (Vec3(tx, ty, 0.0) - center).normalized();
    } else {
        const double u = target_rng.uniform01();
        if (u < cfg.env_behind_fraction) {
            const double zc = target_rng.uniform(0.05, 0.6);
            const double az = target_rng.uniform(0.0, 2.0 * M_PI);
            const double h = std::sqrt(1.0 - zc * zc);
            true_gaze = Vec3(h * std::cos(az), h * std::sin(az), zc);
        } else if (u < cfg.env_behind_fraction + cfg.env_diffuse_fraction) {
            const double r = target_rng.uniform(cfg.env_radius_min, 1.5 * cfg.env_radius_max);
            const double az = target_rng.uniform(0.0, 2.0 * M_PI);
            true_gaze = (Vec3(r * std::cos(az), r * std::sin(az), 0.0) - center).normalized();
        } else {
            const std::size_t k = target_rng.uniform_index(env_anchors.size());
            const Vec2 t2 = env_anchors[k] + Vec2(target_rng.normal(0.0, cfg.env_scatter_sigma),
                                                  target_rng.normal(0.0, cfg.env_scatter_sigma));
            true_gaze = (Vec3(t2.x(), t2.y(), 0.0) - center).normalized();
        }
    }
    rec.true_gaze = GazeVector{true_gaze};
    rec.gt_eye_contact = contact;

    const double pose_mag = std::max(std::abs(pitch_n), std::abs(yaw_n));

    // Noisy gaze estimate standing in for the gaze CNN output.
    Rng gaze_rng(derive_seed(cfg.seed, kGazeNoiseStream, pi, fi));
    const double gaze_sigma =
        cfg.gaze_noise_sigma_deg * (1.0 + cfg.gaze_noise_pose_factor * pose_mag / 20.0);
    const double angle = gaze_rng.normal(0.0, gaze_sigma * kRadPerDeg);
    const double azimuth = gaze_rng.uniform(0.0, 2.0 * M_PI);
    rec.gaze_estimate = GazeVector{perturb_direction(true_gaze, angle, azimuth)};

    // Landmarks with pixel noise, then visibility dropout.
    Rng lm_rng(derive_seed(cfg.seed, kLandmarkStream, pi, fi));
    const auto projected = project_points(default_face_model(), pose, cfg.intrinsics);
    for (int i = 0; i < kNumLandmarks; ++i) {
        rec.landmarks.points[static_cast<std::size_t>(i)] =
            projected[static_cast<std::size_t>(i)] +
            Vec2(lm_rng.normal(0.0, cfg.pixel_noise_sigma),
                 lm_rng.normal(0.0, cfg.pixel_noise_sigma));
    }
    Rng cat_rng(derive_seed(cfg.seed, kCategoryStream, pi, fi));
    std::vector<double> weights(cfg.visibility_weights.begin(), cfg.visibility_weights.end());
    rec.visibility_category = static_cast<VisibilityCategory>(cat_rng.categorical(weights));
    synth_detail::apply_visibility(rec.landmarks, rec.visibility_category, cat_rng);

    // Feature vector from the normalized true gaze.
    Rng feat_rng(derive_seed(cfg.seed, kFeatureStream, pi, fi));
    const GazeVector gaze_n = GazeVector::from(frame_q * true_gaze);
    const double feat_sigma =
        cfg.feature_noise_sigma * (1.0 + cfg.feature_noise_pose_factor * pose_mag / 20.0);
    rec.feature = synth_feature(gaze_n, pitch_n, yaw_n, profile, feat_sigma, feat_rng);

    return rec;
}

inline std::vector<Vec2> make_env_anchors(const GeneratorConfig& cfg, int person_index) {
    Rng base_rng(derive_seed(cfg.seed, synth_detail::kEnvStream, 0xba5eULL));
    std::vector<Vec2> anchors;
    anchors.reserve(static_cast<std::size_t>(cfg.env_targets));
    for (int k = 0; k < cfg.env_targets; ++k) {
        const double r = base_rng.uniform(cfg.env_radius_min, cfg.env_radius_max);
        const double az = base_rng.uniform(0.0, 2.0 * M_PI);
        anchors.emplace_back(r * std::cos(az), r * std::sin(az));
    }
    Rng rng(derive_seed(cfg.seed, synth_detail::kEnvStream,
                        static_cast<std::uint64_t>(person_index) + 1));
    for (auto& a : anchors) {
        a += Vec2(rng.normal(0.0, cfg.env_person_jitter), rng.normal(0.0, cfg.env_person_jitter));
    }
    return anchors;
}

inline std::vector<FrameRecord> generate_dataset(const GeneratorConfig& cfg) {
    validate(cfg);
    std::vector<FrameRecord> records;
    records.reserve(static_cast<std::size_t>(cfg.n_persons) *
                    static_cast<std::size_t>(cfg.frames_per_person));
    for (int p = 0; p < cfg.n_persons; ++p) {
        const PersonProfile profile = make_person_profile(cfg, p);
        const std::vector<Vec2> anchors = make_env_anchors(cfg, p);
        for (int f = 0; f < cfg.frames_per_person; ++f) {
            records.push_back(generate_frame(cfg, profile, anchors, p, f));
        }
    }
    return records;
}

}  // namespace eyecontact
