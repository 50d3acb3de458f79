// Acceptance suite: one criterion per function, one PASS/FAIL line per
// criterion on stdout. Run with no arguments for all criteria or pass
// criterion numbers (1-9) to run a subset. Exits non-zero if any selected
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eyecontact/cli.hpp"
#include "eyecontact/eyecontact.hpp"

using namespace eyecontact;
namespace fs = std::filesystem;

namespace {

struct CheckFailure {
    std::string message;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure{what};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- criterion 1: PnP oracle ---
// 1000 seeded random poses, noiseless recovery within 0.1 deg / 0.5 mm on
// all of them; with 1 px pixel noise, rotation within 3 deg on >= 95%.
// Total runtime under 10 s.
std::string criterion_pnp_oracle() {
    const auto start = std::chrono::steady_clock::now();
    const auto& model = default_face_model();
    const CameraIntrinsics intr{1000, 1000, 640, 480};
    const int trials = 1000;

    Rng rng(20240811);
    int noiseless_ok = 0;
    for (int i = 0; i < trials; ++i) {
        HeadPose truth;
        truth.rotation = rotation_from_angles(
            {rng.uniform(-40, 40), rng.uniform(-40, 40), rng.uniform(-40, 40)});
        truth.translation =
            Vec3(rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(200, 600));
        const auto px = project_points(model, truth, intr);
        Landmarks2D lm;
        for (int k = 0; k < kNumLandmarks; ++k) lm.points[static_cast<std::size_t>(k)] = px[static_cast<std::size_t>(k)];
        const HeadPose est = solve_pnp(lm, model, intr);
        if (rotation_angle_deg(est.rotation, truth.rotation) < 0.1 &&
            (est.translation - truth.translation).norm() < 0.5) {
            ++noiseless_ok;
        }
    }
    require(noiseless_ok == trials, "noiseless recovery failed on " +
                                        std::to_string(trials - noiseless_ok) + " of " +
                                        std::to_string(trials) + " poses");

    int noisy_ok = 0;
    for (int i = 0; i < trials; ++i) {
        HeadPose truth;
        truth.rotation = rotation_from_angles(
            {rng.uniform(-40, 40), rng.uniform(-40, 40), rng.uniform(-40, 40)});
        truth.translation =
            Vec3(rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(200, 600));
        auto px = project_points(model, truth, intr);
        for (auto& p : px) p += Vec2(rng.normal(0, 1), rng.normal(0, 1));
        Landmarks2D lm;
        for (int k = 0; k < kNumLandmarks; ++k) lm.points[static_cast<std::size_t>(k)] = px[static_cast<std::size_t>(k)];
        const HeadPose est = solve_pnp(lm, model, intr);
        if (rotation_angle_deg(est.rotation, truth.rotation) < 3.0) ++noisy_ok;
    }
    require(noisy_ok >= trials * 95 / 100,
            "only " + std::to_string(noisy_ok) + "/1000 noisy poses within 3 deg");

    const double elapsed = seconds_since(start);
    require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s exceeds 10 s");

    std::ostringstream note;
    note << "noiseless 1000/1000, noisy " << noisy_ok << "/1000, " << elapsed << " s";
    return note.str();
}

// --- criterion 2: normalization invariants on 10,000 random samples ---
std::string criterion_normalization_invariants() {
    Rng rng(77001);
    NormParams np;
    double worst_center = 0, worst_rollcomp = 0, worst_roundtrip = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec3 center =
            rng.uniform(200, 700) *
            Vec3(std::tan(rng.uniform(-0.4, 0.4)), std::tan(rng.uniform(-0.4, 0.4)), 1.0)
                .normalized();
        HeadPose pose;
        pose.rotation = rotation_from_angles(
            {rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-50, 50)});
        pose.translation = center;
        const auto t = compute_normalization(pose, center, np);

        worst_center = std::max(worst_center, (t.combined * center - Vec3(0, 0, np.d_n)).norm());
        worst_rollcomp =
            std::max(worst_rollcomp, std::abs((t.rotation * pose.rotation.col(0)).y()));
        const GazeVector g =
            GazeVector::from(Vec3(rng.normal(), rng.normal(), -std::abs(rng.normal()) - 0.1));
        const GazeVector back = denormalize_gaze(t, normalize_gaze(t, g));
        worst_roundtrip = std::max(worst_roundtrip, (back.direction - g.direction).norm());
    }
    require(worst_center < 1e-6, "normalized face center off by " + std::to_string(worst_center));
    require(worst_rollcomp < 1e-9, "head x-axis y-component " + std::to_string(worst_rollcomp));
    require(worst_roundtrip < 1e-12, "gaze round trip error " + std::to_string(worst_roundtrip));

    std::ostringstream note;
    note << "center " << worst_center << " mm, roll comp " << worst_rollcomp << ", round trip "
         << worst_roundtrip;
    return note.str();
}

// --- criterion 3: MCC against direct formula on the full small grid ---
std::string criterion_mcc_oracle() {
    int cases = 0;
    for (std::int64_t tp = 0; tp <= 6; ++tp) {
        for (std::int64_t fp = 0; fp <= 6; ++fp) {
            for (std::int64_t tn = 0; tn <= 6; ++tn) {
                for (std::int64_t fn = 0; fn <= 6; ++fn) {
                    if (tp + fp + tn + fn == 0) continue;
                    const long double n1 = static_cast<long double>(tp + fp);
                    const long double n2 = static_cast<long double>(tp + fn);
                    const long double n3 = static_cast<long double>(tn + fp);
                    const long double n4 = static_cast<long double>(tn + fn);
                    long double want = 0.0L;
                    if (n1 != 0 && n2 != 0 && n3 != 0 && n4 != 0) {
                        want = (static_cast<long double>(tp) * tn -
                                static_cast<long double>(fp) * fn) /
                               sqrtl(n1 * n2 * n3 * n4);
                    }
                    const double got = mcc({tp, fp, tn, fn});
                    require(std::abs(got - static_cast<double>(want)) < 1e-12,
                            "mismatch at tp=" + std::to_string(tp) + " fp=" + std::to_string(fp) +
                                " tn=" + std::to_string(tn) + " fn=" + std::to_string(fn));
                    ++cases;
                }
            }
        }
    }
    require(mcc({5, 0, 5, 0}) == 1.0, "perfect classifier must score 1");
    require(mcc({0, 5, 0, 5}) == -1.0, "total contradiction must score -1");
    require(mcc({4, 0, 0, 3}) == 0.0, "zero denominator must score 0");
    return std::to_string(cases) + " confusion matrices, exact within 1e-12";
}

// --- criterion 4: LOPO laws over random datasets ---
std::string criterion_lopo_laws() {
    Rng rng(4004);
    for (int trial = 0; trial < 50; ++trial) {
        const int n_persons = 2 + static_cast<int>(rng.uniform_index(10));
        std::vector<FrameRecord> records;
        for (int p = 0; p < n_persons; ++p) {
            const int frames = 1 + static_cast<int>(rng.uniform_index(8));
            for (int f = 0; f < frames; ++f) {
                FrameRecord rec;
                rec.person_id = "p" + std::to_string(p);
                rec.frame_id = rec.person_id + "_" + std::to_string(f);
                records.push_back(rec);
            }
        }
        const auto folds = lopo_folds(records);
        require(folds.size() == static_cast<std::size_t>(n_persons), "one fold per person");
        std::set<std::string> test_persons;
        for (const auto& fold : folds) {
            require(test_persons.insert(fold.test_person).second, "disjoint test persons");
            for (const auto& p : fold.train_persons) {
                require(p != fold.test_person, "test person leaked into training");
            }
            require(fold.train_persons.size() + 1 == static_cast<std::size_t>(n_persons),
                    "train persons must cover the rest");
        }
        for (const auto& rec : records) {
            require(test_persons.count(rec.person_id) == 1, "frame not covered by any test set");
        }
    }
    return "50 random datasets: disjoint, exhaustive, person-respecting";
}

// --- criterion 5: end-to-end within-dataset MCC ---
std::string criterion_within_dataset() {
    const auto start = std::chrono::steady_clock::now();
    GeneratorConfig gcfg;
    gcfg.n_persons = 10;
    gcfg.frames_per_person = 500;
    gcfg.gaze_noise_sigma_deg = 2.0;
    gcfg.feature_noise_sigma = 0.05;
    gcfg.seed = 50;
    const auto records = generate_dataset(gcfg);

    ExperimentConfig cfg;
    cfg.label_source = LabelSource::Clustered;
    const auto clustered = run_within_experiment(records, cfg);
    cfg.label_source = LabelSource::GroundTruth;
    const auto human = run_within_experiment(records, cfg);

    require(clustered.mean_mcc >= 0.85, "clustered-label mean MCC " +
                                            std::to_string(clustered.mean_mcc) + " below 0.85");
    require(human.mean_mcc >= clustered.mean_mcc - 0.05,
            "ground-truth baseline " + std::to_string(human.mean_mcc) +
                " trails clustered labels " + std::to_string(clustered.mean_mcc) +
                " by more than 0.05");
    const double elapsed = seconds_since(start);
    require(elapsed < 120.0, "runtime " + std::to_string(elapsed) + " s exceeds 2 min");

    std::ostringstream note;
    note << "clustered " << clustered.mean_mcc << " (SD " << clustered.sd_mcc << "), ground-truth "
         << human.mean_mcc << ", " << elapsed << " s";
    return note.str();
}

// --- criterion 6: visibility-category trend ---
std::string criterion_visibility_trend() {
    GeneratorConfig gcfg;
    gcfg.n_persons = 10;
    gcfg.frames_per_person = 600;
    gcfg.visibility_weights = {0.30, 0.14, 0.12, 0.10, 0.12, 0.08, 0.07, 0.07};
    gcfg.seed = 60;
    const auto records = generate_dataset(gcfg);

    ExperimentConfig cfg;
    cfg.breakdown = Breakdown::Category;
    const auto report = run_within_experiment(records, cfg);
    require(report.cells.size() == kNumCategories, "expected 8 category cells");

    auto cell = [&](VisibilityCategory c) -> const CellReport& {
        return report.cells[static_cast<std::size_t>(c)];
    };
    const double whole = cell(VisibilityCategory::WholeFaceAllLandmarks).mean_mcc;
    const double one_eye_a = cell(VisibilityCategory::PartialFace1Eye1Mouth).mean_mcc;
    const double one_eye_b = cell(VisibilityCategory::PartialFace1EyeNoMouth).mean_mcc;
    require(whole >= one_eye_a + 0.1,
            "whole-face MCC " + std::to_string(whole) + " does not exceed 1-eye-1-mouth " +
                std::to_string(one_eye_a) + " by 0.1");
    require(whole >= one_eye_b + 0.1,
            "whole-face MCC " + std::to_string(whole) + " does not exceed 1-eye-no-mouth " +
                std::to_string(one_eye_b) + " by 0.1");
    const auto& no_face = cell(VisibilityCategory::NoFace);
    require(no_face.mcc == 0.0 && no_face.mean_mcc == 0.0, "No face cell must report MCC 0");
    require(no_face.status == "untrainable" && !no_face.reason.empty(),
            "No face cell must carry a reason");

    std::ostringstream note;
    note << "whole-face " << whole << ", 1-eye cells " << one_eye_a << "/" << one_eye_b
         << ", No face: MCC 0 (" << no_face.reason << ")";
    return note.str();
}

// --- criterion 7: head-pose bucket trend ---
std::string criterion_headpose_trend() {
    GeneratorConfig gcfg;
    gcfg.n_persons = 10;
    gcfg.frames_per_person = 500;
    gcfg.head_pose.sigma_central = 8.0;
    gcfg.head_pose.wide_weight = 0.2;
    gcfg.seed = 70;
    const auto records = generate_dataset(gcfg);

    ExperimentConfig cfg;
    cfg.breakdown = Breakdown::HeadPose;
    const auto report = run_within_experiment(records, cfg);
    require(report.cells.size() == 25, "expected 25 head-pose cells");

    auto cell_mcc = [&](int row, int col) {
        const auto id = bucket_cell_id(row, col);
        for (const auto& c : report.cells) {
            if (c.id == id) return c.mean_mcc;
        }
        throw CheckFailure{"missing cell " + id};
    };
    const double central = cell_mcc(2, 2);
    const double corners =
        (cell_mcc(0, 0) + cell_mcc(0, 4) + cell_mcc(4, 0) + cell_mcc(4, 4)) / 4.0;
    require(central >= corners + 0.15, "central bucket " + std::to_string(central) +
                                           " does not exceed corner mean " +
                                           std::to_string(corners) + " by 0.15");
    std::ostringstream note;
    note << "central " << central << ", corner mean " << corners;
    return note.str();
}

// --- criterion 8: cross-dataset degradation under head-pose shift ---
std::string criterion_cross_dataset_shift() {
    int degraded = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GeneratorConfig a;
        a.n_persons = 6;
        a.frames_per_person = 400;
        a.seed = seed;
        GeneratorConfig b = a;
        b.head_pose.pitch_mean = 20.0;  // distribution shift
        b.seed = seed + 1000;           // different population
        const auto data_a = generate_dataset(a);
        const auto data_b = generate_dataset(b);

        ExperimentConfig cfg;
        const auto same = run_cross_experiment(data_a, data_a, cfg);
        const auto shifted = run_cross_experiment(data_a, data_b, cfg);
        if (shifted.overall_mcc < same.overall_mcc) ++degraded;
    }
    require(degraded >= 9, "degradation on only " + std::to_string(degraded) + "/10 seeds");
    return "MCC(A->B) < MCC(A->A) on " + std::to_string(degraded) + "/10 seeds";
}

// --- criterion 9: byte-identical CLI runs ---
std::string criterion_cli_determinism() {
    const fs::path dir = fs::temp_directory_path() / "eyecontact_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const std::string config_path = (dir / "config.json").string();
    {
        std::ofstream out(config_path);
        out << R"({"n_persons": 4, "frames_per_person": 120, "seed": 9,
                   "visibility_weights": [0.6, 0.2, 0.1, 0.1, 0, 0, 0, 0]})";
    }
    auto run = [&](const std::vector<std::string>& args) {
        std::vector<const char*> argv;
        argv.push_back("eyecontact");
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream captured;
        auto* old = std::cout.rdbuf(captured.rdbuf());
        const int rc = cli_main(static_cast<int>(argv.size()), argv.data());
        std::cout.rdbuf(old);
        require(rc == 0, "cli exited with " + std::to_string(rc));
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    run({"generate", "--config", config_path, "--out", (dir / "d1.jsonl").string()});
    run({"generate", "--config", config_path, "--out", (dir / "d2.jsonl").string()});
    require(slurp(dir / "d1.jsonl") == slurp(dir / "d2.jsonl"), "dataset bytes differ");

    run({"run-within", "--dataset", (dir / "d1.jsonl").string(), "--labels", "cluster", "--by",
         "category", "--seed", "5", "--out", (dir / "r1").string()});
    run({"run-within", "--dataset", (dir / "d2.jsonl").string(), "--labels", "cluster", "--by",
         "category", "--seed", "5", "--out", (dir / "r2").string()});
    require(slurp(dir / "r1/report.json") == slurp(dir / "r2/report.json"),
            "report.json bytes differ");
    require(slurp(dir / "r1/report.csv") == slurp(dir / "r2/report.csv"),
            "report.csv bytes differ");
    fs::remove_all(dir);
    return "dataset and report files byte-identical across runs";
}

struct Criterion {
    int number;
    const char* name;
    std::function<std::string()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "pnp-oracle", criterion_pnp_oracle},
        {2, "normalization-invariants", criterion_normalization_invariants},
        {3, "mcc-oracle", criterion_mcc_oracle},
        {4, "lopo-laws", criterion_lopo_laws},
        {5, "within-dataset-mcc", criterion_within_dataset},
        {6, "visibility-trend", criterion_visibility_trend},
        {7, "headpose-trend", criterion_headpose_trend},
        {8, "cross-dataset-shift", criterion_cross_dataset_shift},
        {9, "cli-determinism", criterion_cli_determinism},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria()) {
        if (!selected.empty() && selected.count(c.number) == 0) continue;
        try {
            const std::string note = c.run();
            std::cout << "PASS  criterion " << c.number << "  " << c.name << ": " << note << "\n";
        } catch (const CheckFailure& f) {
            std::cout << "FAIL  criterion " << c.number << "  " << c.name << ": " << f.message
                      << "\n";
            ++failures;
        } catch (const std::exception& e) {
            std::cout << "FAIL  criterion " << c.number << "  " << c.name
                      << ": unexpected error: " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
