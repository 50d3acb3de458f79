#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>
#include <Eigen/SVD>

#include "eyecontact/camera.hpp"
#include "eyecontact/errors.hpp"
#include "eyecontact/face_model.hpp"
#include "eyecontact/gaze.hpp"
#include "eyecontact/landmarks.hpp"
#include "eyecontact/pose.hpp"

namespace eyecontact {

// Forward pinhole model: model points -> camera frame -> pixels.
inline std::array<Vec2, kNumLandmarks> project_points(const FaceModel3D& model,
                                                      const HeadPose& pose,
                                                      const CameraIntrinsics& intr) {
    validate(intr);
    std::array<Vec2, kNumLandmarks> out;
    for (int i = 0; i < kNumLandmarks; ++i) {
        out[static_cast<std::size_t>(i)] =
            project_point(pose.rotation * model.point(i) + pose.translation, intr);
    }
    return out;
}

// Centroid of the model points in camera coordinates. The model is
// centroid-centered, so this equals the pose translation.
inline Vec3 face_center(const FaceModel3D& model, const HeadPose& pose) {
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : model.points()) centroid += p;
    centroid /= kNumLandmarks;
    return pose.rotation * centroid + pose.translation;
}

namespace pnp_detail {

struct Correspondence {
    Vec3 model;
    Vec2 pixel;
    Vec2 norm;  // (u - cx) / fx, (v - cy) / fy
};

inline Mat3 skew(const Vec3& v) {
    Mat3 m;
    m << 0, -v.z(), v.y(),
         v.z(), 0, -v.x(),
         -v.y(), v.x(), 0;
    return m;
}

inline Mat3 exp_so3(const Vec3& w) {
    const double th = w.norm();
    const Mat3 wx = skew(w);
    if (th < 1e-12) {
        return Mat3::Identity() + wx + 0.5 * wx * wx;
    }
    const Mat3 ax = skew(Vec3(w / th));
    return Mat3::Identity() + std::sin(th) * ax + (1.0 - std::cos(th)) * ax * ax;
}

inline Mat3 nearest_rotation(const Mat3& m) {
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0.0) {
        Mat3 d = Mat3::Identity();
        d(2, 2) = -1.0;
        r = svd.matrixU() * d * svd.matrixV().transpose();
    }
    return r;
}

// DLT homography (a, b) -> (x, y) with Hartley normalization of both sets.
inline bool homography_dlt(const std::vector<Vec2>& src, const std::vector<Vec2>& dst, Mat3& h_out) {
    const std::size_t n = src.size();

    auto conditioner = [](const std::vector<Vec2>& pts) {
        Vec2 c = Vec2::Zero();
        for (const auto& p : pts) c += p;
        c /= static_cast<double>(pts.size());
        double dist = 0.0;
        for (const auto& p : pts) dist += (p - c).norm();
        dist /= static_cast<double>(pts.size());
        const double s = dist > 1e-12 ? std::sqrt(2.0) / dist : 1.0;
        Mat3 t;
        t << s, 0, -s * c.x(),
             0, s, -s * c.y(),
             0, 0, 1;
        return t;
    };

    const Mat3 ts = conditioner(src);
    const Mat3 td = conditioner(dst);

    Eigen::MatrixXd a(2 * n, 9);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 p = ts * Vec3(src[i].x(), src[i].y(), 1.0);
        const Vec3 q = td * Vec3(dst[i].x(), dst[i].y(), 1.0);
        a.row(2 * i) << -p.x(), -p.y(), -1, 0, 0, 0, q.x() * p.x(), q.x() * p.y(), q.x();
        a.row(2 * i + 1) << 0, 0, 0, -p.x(), -p.y(), -1, q.y() * p.x(), q.y() * p.y(), q.y();
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd h = svd.matrixV().col(8);
    Mat3 hn;
    hn << h(0), h(1), h(2),
          h(3), h(4), h(5),
          h(6), h(7), h(8);
    if (!hn.allFinite()) return false;
    h_out = td.inverse() * hn * ts;
    return h_out.allFinite();
}

struct PoseGuess {
    Mat3 rotation;
    Vec3 translation;
};

// Pose candidates from a homography between the best-fit model plane and
// the normalized image. The face landmarks are close to planar, which
// makes this a reliable starting point for refinement but also means the
// decomposition has the classic two-fold ambiguity; both candidates are
// returned (the second reflects the plane normal about the view ray) and
// refinement picks the one with the lower residual.
inline std::vector<PoseGuess> planar_inits(const std::vector<Correspondence>& corr) {
    const std::size_t n = corr.size();
    Vec3 centroid = Vec3::Zero();
    for (const auto& c : corr) centroid += c.model;
    centroid /= static_cast<double>(n);

    Eigen::MatrixXd m(n, 3);
    for (std::size_t i = 0; i < n; ++i) m.row(i) = (corr[i].model - centroid).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    if (svd.singularValues()(1) <= 1e-9 * svd.singularValues()(0)) return {};

    Mat3 basis = svd.matrixV();
    if (basis.determinant() < 0.0) basis.col(2) = -basis.col(2);

    std::vector<Vec2> plane(n), image(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 d = corr[i].model - centroid;
        plane[i] = Vec2(basis.col(0).dot(d), basis.col(1).dot(d));
        image[i] = corr[i].norm;
    }

    Mat3 h;
    if (!homography_dlt(plane, image, h)) return {};

    double scale = 2.0 / (h.col(0).norm() + h.col(1).norm());
    if (h(2, 2) * scale < 0.0) scale = -scale;  // plane origin must be in front
    h *= scale;

    Mat3 frame;
    frame.col(0) = h.col(0);
    frame.col(1) = h.col(1);
    frame.col(2) = h.col(0).cross(h.col(1));
    const Mat3 plane_to_cam = nearest_rotation(frame);

    std::vector<PoseGuess> out;
    const Vec3 origin_cam = h.col(2);
    {
        PoseGuess g;
        g.rotation = plane_to_cam * basis.transpose();
        g.translation = origin_cam - g.rotation * centroid;
        if (g.rotation.allFinite() && g.translation.allFinite()) out.push_back(g);
    }
    if (origin_cam.norm() > 1e-9) {
        const Vec3 view = origin_cam.normalized();
        const Vec3 normal = plane_to_cam.col(2);
        Vec3 axis = view.cross(normal);
        const double sin_a = axis.norm();
        if (sin_a > 1e-9) {
            const double angle = std::atan2(sin_a, view.dot(normal));
            axis /= sin_a;
            const Mat3 mirrored =
                Eigen::AngleAxisd(-2.0 * angle, axis).toRotationMatrix() * plane_to_cam;
            PoseGuess g;
            g.rotation = mirrored * basis.transpose();
            g.translation = origin_cam - g.rotation * centroid;
            if (g.rotation.allFinite() && g.translation.allFinite()) out.push_back(g);
        }
    }
    return out;
}

// Scaled-orthographic guess: frontal rotation, depth from the ratio of
// model extent to image extent.
inline void orthographic_init(const std::vector<Correspondence>& corr, Mat3& r_out, Vec3& t_out) {
    const std::size_t n = corr.size();
    Vec3 mc = Vec3::Zero();
    Vec2 ic = Vec2::Zero();
    for (const auto& c : corr) {
        mc += c.model;
        ic += c.norm;
    }
    mc /= static_cast<double>(n);
    ic /= static_cast<double>(n);

    double model_spread = 0.0, image_spread = 0.0;
    for (const auto& c : corr) {
        model_spread += (c.model - mc).squaredNorm();
        image_spread += (c.norm - ic).squaredNorm();
    }
    double z = 400.0;
    if (image_spread > 1e-12) z = std::sqrt(model_spread / image_spread);
    z = std::clamp(z, 50.0, 5000.0);

    r_out = Mat3::Identity();
    t_out = Vec3(ic.x() * z, ic.y() * z, z) - r_out * mc;
}

struct Refined {
    Mat3 rotation;
    Vec3 translation;
    double rms = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool valid = false;
};

inline double residuals(const std::vector<Correspondence>& corr, const CameraIntrinsics& intr,
                        const Mat3& r, const Vec3& t, Eigen::VectorXd& out) {
    const std::size_t n = corr.size();
    out.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 p = r * corr[i].model + t;
        if (!(p.z() > 1e-6)) return std::numeric_limits<double>::infinity();
        out(2 * i) = intr.fx * p.x() / p.z() + intr.cx - corr[i].pixel.x();
        out(2 * i + 1) = intr.fy * p.y() / p.z() + intr.cy - corr[i].pixel.y();
    }
    return out.squaredNorm();
}

// Levenberg-Marquardt on the 6-DoF pose, residuals in pixels. Left
// multiplicative rotation update. Stops when the step norm drops below
// 1e-10 or after 100 iterations.
inline Refined refine(const std::vector<Correspondence>& corr, const CameraIntrinsics& intr,
                      Mat3 r, Vec3 t) {
    constexpr int kMaxIterations = 100;
    constexpr double kStepTol = 1e-10;

    Refined result;
    const std::size_t n = corr.size();

    Eigen::VectorXd res;
    double err = residuals(corr, intr, r, t, res);
    if (!std::isfinite(err)) return result;

    double mu = 1e-3;
    int iter = 0;
    for (; iter < kMaxIterations; ++iter) {
        Eigen::MatrixXd jac(2 * n, 6);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 p = r * corr[i].model + t;
            const double iz = 1.0 / p.z();
            Eigen::Matrix<double, 2, 3> dp;
            dp << intr.fx * iz, 0.0, -intr.fx * p.x() * iz * iz,
                  0.0, intr.fy * iz, -intr.fy * p.y() * iz * iz;
            const Eigen::Matrix<double, 2, 3> dw = dp * (-skew(p - t));
            jac.block<1, 3>(2 * i, 0) = dw.row(0);
            jac.block<1, 3>(2 * i, 3) = dp.row(0);
            jac.block<1, 3>(2 * i + 1, 0) = dw.row(1);
            jac.block<1, 3>(2 * i + 1, 3) = dp.row(1);
        }

        const Eigen::Matrix<double, 6, 6> jtj = jac.transpose() * jac;
        const Eigen::Matrix<double, 6, 1> g = jac.transpose() * res;

        bool stepped = false;
        for (int attempt = 0; attempt < 12 && !stepped; ++attempt) {
            Eigen::Matrix<double, 6, 6> damped = jtj;
            for (int d = 0; d < 6; ++d) {
                damped(d, d) += mu * std::max(jtj(d, d), 1e-12);
            }
            const Eigen::Matrix<double, 6, 1> delta = damped.ldlt().solve(-g);
            if (!delta.allFinite()) {
                mu *= 10.0;
                continue;
            }

            const Mat3 r_new = exp_so3(delta.head<3>()) * r;
            const Vec3 t_new = t + delta.tail<3>();
            Eigen::VectorXd res_new;
            const double err_new = residuals(corr, intr, r_new, t_new, res_new);
            if (err_new <= err) {
                r = r_new;
                t = t_new;
                res = res_new;
                err = err_new;
                mu = std::max(mu / 3.0, 1e-12);
                stepped = true;
                if (delta.norm() < kStepTol) {
                    ++iter;
                    goto done;
                }
            } else {
                mu *= 10.0;
            }
        }
        if (!stepped) break;  // damping exhausted; we are at a local minimum
    }
done:
    result.rotation = nearest_rotation(r);
    result.translation = t;
    result.rms = std::sqrt(err / static_cast<double>(n));
    result.iterations = iter;
    result.valid = result.rotation.allFinite() && t.allFinite() && t.z() > 0.0;
    return result;
}

}  // namespace pnp_detail

// Recovers the head pose from >= 4 visible 2D-3D correspondences by
// minimizing squared pixel reprojection error. Deterministic: two fixed
// initializations (planar homography and scaled orthographic), both
// refined, best residual wins.
inline HeadPose solve_pnp(const Landmarks2D& landmarks, const FaceModel3D& model,
                          const CameraIntrinsics& intr) {
    validate(intr);
    validate(landmarks);

    std::vector<pnp_detail::Correspondence> corr;
    for (int i = 0; i < kNumLandmarks; ++i) {
        const auto& p = landmarks.points[static_cast<std::size_t>(i)];
        if (!p) continue;
        corr.push_back({model.point(i), *p,
                        Vec2((p->x() - intr.cx) / intr.fx, (p->y() - intr.cy) / intr.fy)});
    }
    if (corr.size() < 4) {
        throw InsufficientCorrespondencesError(
            "solve_pnp needs at least 4 visible landmarks, got " + std::to_string(corr.size()));
    }

    pnp_detail::Refined best;
    for (const auto& guess : pnp_detail::planar_inits(corr)) {
        const pnp_detail::Refined cand =
            pnp_detail::refine(corr, intr, guess.rotation, guess.translation);
        if (!best.valid || (cand.valid && cand.rms < best.rms)) best = cand;
    }
    Mat3 r;
    Vec3 t;
    pnp_detail::orthographic_init(corr, r, t);
    const pnp_detail::Refined alt = pnp_detail::refine(corr, intr, r, t);
    if (!best.valid || (alt.valid && alt.rms < best.rms)) best = alt;

    if (!best.valid) {
        throw ConvergenceError("solve_pnp failed to converge to a pose in front of the camera",
                               best.iterations, best.rms);
    }

    HeadPose pose;
    pose.rotation = best.rotation;
    pose.translation = best.translation;
    pose.reprojection_error = best.rms;
    return pose;
}

}  // namespace eyecontact
