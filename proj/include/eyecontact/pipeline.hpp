#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "eyecontact/dbscan.hpp"
#include "eyecontact/errors.hpp"
#include "eyecontact/face_model.hpp"
#include "eyecontact/frame.hpp"
#include "eyecontact/gaze.hpp"
#include "eyecontact/normalization.hpp"
#include "eyecontact/pnp.hpp"
#include "eyecontact/rng.hpp"

namespace eyecontact {

// Per-frame pipeline output: head pose, normalized head angles, and the
// gaze ray's camera-plane intersection when one exists.
struct GazeSample {
    std::string person_id;
    std::string frame_id;
    HeadPose head_pose;
    double pitch_n = 0.0;  // degrees, normalized camera space
    double yaw_n = 0.0;
    GazeVector gaze;  // camera frame
    std::optional<GazePoint2D> gaze_point;
};

struct PipelineConfig {
    NormParams norm;
};

// landmarks -> PnP pose -> normalization -> gaze/plane intersection.
// Throws InsufficientLandmarksError below 4 visible landmarks and
// MissingInputError when the record carries no gaze estimate.
inline GazeSample process_frame(const FrameRecord& rec, const PipelineConfig& cfg = {}) {
    if (rec.landmarks.visible_count() < 4) {
        throw InsufficientLandmarksError(
            "frame " + rec.frame_id + ": " + std::to_string(rec.landmarks.visible_count()) +
            " visible landmarks, need at least 4");
    }
    if (!rec.gaze_estimate) {
        throw MissingInputError("frame " + rec.frame_id + ": no gaze estimate");
    }

    GazeSample sample;
    sample.person_id = rec.person_id;
    sample.frame_id = rec.frame_id;
    sample.head_pose = solve_pnp(rec.landmarks, default_face_model(), rec.intrinsics);

    const Vec3 center = face_center(default_face_model(), sample.head_pose);
    const NormalizationTransform t = compute_normalization(sample.head_pose, center, cfg.norm);
    const auto [pitch_n, yaw_n] = normalize_head_pose(t, sample.head_pose);
    sample.pitch_n = pitch_n;
    sample.yaw_n = yaw_n;

    sample.gaze = *rec.gaze_estimate;
    validate(sample.gaze);
    if (sample.gaze.direction.z() < 0.0) {
        sample.gaze_point = intersect_gaze_with_camera_plane(center, sample.gaze);
    }
    return sample;
}

struct ClusterParams {
    double eps = 20.0;        // neighborhood radius, mm in the camera plane
    std::size_t min_pts = 5;  // minimum neighborhood size (self included)
    std::optional<std::size_t> subsample;  // cluster on a random subset; labels still cover all points
    std::uint64_t subsample_seed = 0;
};

// Density clustering of the 2D gaze locations. Returns a cluster id per
// point (kNoiseLabel for points in no dense region). Throws NoClusterError
// when fewer than min_pts points are given or no dense region exists.
inline std::vector<int> cluster_gaze_points(const std::vector<GazePoint2D>& points,
                                            const ClusterParams& params = {}) {
    if (points.size() < params.min_pts) {
        throw NoClusterError("clustering needs at least " + std::to_string(params.min_pts) +
                             " points, got " + std::to_string(points.size()));
    }

    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const auto& p : points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }

    std::vector<int> labels;
    if (params.subsample && *params.subsample < points.size()) {
        // Cluster a seeded random subset, then attach every remaining
        // point to the nearest cluster within eps (noise otherwise).
        std::vector<std::size_t> order(points.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        Rng rng(derive_seed(params.subsample_seed, 0x5ab5a317ULL));
        rng.shuffle(order);
        order.resize(std::max(*params.subsample, params.min_pts));
        std::sort(order.begin(), order.end());

        std::vector<double> sx, sy;
        for (std::size_t i : order) {
            sx.push_back(xs[i]);
            sy.push_back(ys[i]);
        }
        const std::vector<int> sub_labels = dbscan_2d(sx, sy, params.eps, params.min_pts);

        labels.assign(points.size(), kNoiseLabel);
        for (std::size_t k = 0; k < order.size(); ++k) labels[order[k]] = sub_labels[k];
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (labels[i] != kNoiseLabel) continue;
            double best = params.eps * params.eps;
            for (std::size_t k = 0; k < order.size(); ++k) {
                if (sub_labels[k] == kNoiseLabel) continue;
                const double dx = xs[i] - sx[k];
                const double dy = ys[i] - sy[k];
                const double d2 = dx * dx + dy * dy;
                if (d2 <= best) {
                    best = d2;
                    labels[i] = sub_labels[k];
                }
            }
        }
    } else {
        labels = dbscan_2d(xs, ys, params.eps, params.min_pts);
    }

    if (std::all_of(labels.begin(), labels.end(), [](int l) { return l == kNoiseLabel; })) {
        throw NoClusterError("no dense cluster found among " + std::to_string(points.size()) +
                             " gaze points");
    }
    return labels;
}

// The eye contact target is the cluster nearest the camera, i.e. the one
// whose centroid has minimal norm. Ties break toward the lower cluster id.
inline int select_target_cluster(const std::vector<int>& assignments,
                                 const std::vector<GazePoint2D>& points) {
    if (assignments.size() != points.size()) {
        throw DimensionMismatchError("select_target_cluster: assignments/points size mismatch");
    }
    int max_label = kNoiseLabel;
    for (int l : assignments) max_label = std::max(max_label, l);
    if (max_label < 0) throw NoClusterError("select_target_cluster: no clusters present");

    int best = -1;
    double best_norm = std::numeric_limits<double>::infinity();
    for (int c = 0; c <= max_label; ++c) {
        double sx = 0.0, sy = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (assignments[i] != c) continue;
            sx += points[i].x;
            sy += points[i].y;
            ++n;
        }
        if (n == 0) continue;
        const double norm = std::hypot(sx / n, sy / n);
        if (norm < best_norm) {  // strict: equal norms keep the lower id
            best_norm = norm;
            best = c;
        }
    }
    if (best < 0) throw NoClusterError("select_target_cluster: no clusters present");
    return best;
}

// Cluster-derived training labels: positive inside the target cluster,
// negative in every other cluster. Noise points carry no label and are
// left out of training.
struct ClusterLabeling {
    std::vector<int> assignments;
    int target_cluster = 0;
    std::vector<bool> labels;     // aligned with assignments; meaningful where !is_noise
    std::vector<bool> is_noise;
};

inline ClusterLabeling derive_labels(const std::vector<int>& assignments, int target) {
    if (std::find(assignments.begin(), assignments.end(), target) == assignments.end()) {
        throw NoClusterError("derive_labels: target cluster " + std::to_string(target) +
                             " has no members");
    }
    ClusterLabeling out;
    out.assignments = assignments;
    out.target_cluster = target;
    out.labels.resize(assignments.size(), false);
    out.is_noise.resize(assignments.size(), false);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == kNoiseLabel) {
            out.is_noise[i] = true;
        } else {
            out.labels[i] = assignments[i] == target;
        }
    }
    return out;
}

}  // namespace eyecontact
