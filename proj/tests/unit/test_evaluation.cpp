#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "eyecontact/evaluation.hpp"
#include "eyecontact/io.hpp"
#include "eyecontact/synthgen.hpp"

using namespace eyecontact;

namespace {

std::vector<FrameRecord> small_dataset(int persons, int frames, std::uint64_t seed,
                                       double gaze_noise = 2.0, double feat_noise = 0.05) {
    GeneratorConfig cfg;
    cfg.n_persons = persons;
    cfg.frames_per_person = frames;
    cfg.gaze_noise_sigma_deg = gaze_noise;
    cfg.feature_noise_sigma = feat_noise;
    cfg.seed = seed;
    return generate_dataset(cfg);
}

}  // namespace

TEST_CASE("leave-one-person-out folds") {
    SECTION("three persons, three folds") {
        std::vector<FrameRecord> records(6);
        records[0].person_id = "A";
        records[1].person_id = "B";
        records[2].person_id = "C";
        records[3].person_id = "A";
        records[4].person_id = "C";
        records[5].person_id = "B";
        const auto folds = lopo_folds(records);
        REQUIRE(folds.size() == 3);
        std::set<std::string> tests;
        for (const auto& f : folds) {
            tests.insert(f.test_person);
            CHECK(f.train_persons.size() == 2);
            for (const auto& p : f.train_persons) CHECK(p != f.test_person);
        }
        CHECK(tests == std::set<std::string>{"A", "B", "C"});
    }
    SECTION("one person is an error") {
        std::vector<FrameRecord> records(3);
        for (auto& r : records) r.person_id = "solo";
        CHECK_THROWS_AS(lopo_folds(records), InvalidConfigError);
    }
    SECTION("folds partition any dataset") {
        Rng rng(61);
        for (int trial = 0; trial < 50; ++trial) {
            const int n_persons = 2 + static_cast<int>(rng.uniform_index(9));
            std::vector<FrameRecord> records;
            for (int p = 0; p < n_persons; ++p) {
                const int frames = 1 + static_cast<int>(rng.uniform_index(6));
                for (int f = 0; f < frames; ++f) {
                    FrameRecord rec;
                    rec.person_id = "p" + std::to_string(p);
                    records.push_back(rec);
                }
            }
            const auto folds = lopo_folds(records);
            CHECK(folds.size() == static_cast<std::size_t>(n_persons));
            std::set<std::string> test_persons;
            for (const auto& fold : folds) {
                CHECK(test_persons.insert(fold.test_person).second);  // disjoint test sets
                std::set<std::string> train(fold.train_persons.begin(), fold.train_persons.end());
                CHECK(train.count(fold.test_person) == 0);
                CHECK(train.size() + 1 == static_cast<std::size_t>(n_persons));
            }
            for (const auto& rec : records) CHECK(test_persons.count(rec.person_id) == 1);
        }
    }
}

TEST_CASE("head pose bucketing") {
    SECTION("named boundaries") {
        CHECK(bucket_head_pose(0, 0) == std::pair<int, int>{2, 2});
        CHECK(bucket_head_pose(15, 0).first == 3);   // mild turn
        CHECK(bucket_head_pose(0, 25).second == 4);  // significant rotation
        CHECK(bucket_index(-25) == 0);
        CHECK(bucket_index(-20) == 1);  // half-open: [-20, -10)
        CHECK(bucket_index(-10) == 2);
        CHECK(bucket_index(9.999) == 2);
        CHECK(bucket_index(10) == 3);
        CHECK(bucket_index(20) == 4);
    }
    SECTION("total over finite angles") {
        Rng rng(71);
        for (int i = 0; i < 500; ++i) {
            const double pitch = rng.uniform(-1e12, 1e12);
            const double yaw = rng.uniform(-360, 360);
            const auto [r, c] = bucket_head_pose(pitch, yaw);
            CHECK(r >= 0);
            CHECK(r < kBucketsPerAxis);
            CHECK(c >= 0);
            CHECK(c < kBucketsPerAxis);
        }
        CHECK_THROWS_AS(bucket_index(std::nan("")), InvalidConfigError);
    }
}

TEST_CASE("within-dataset evaluation on synthetic data") {
    const auto records = small_dataset(10, 120, 3);

    ExperimentConfig gt_cfg;
    gt_cfg.label_source = LabelSource::GroundTruth;
    const auto gt_report = run_within_experiment(records, gt_cfg);
    REQUIRE(gt_report.cells.size() == 1);
    CHECK(gt_report.cells[0].folds.size() == 10);
    CHECK(gt_report.mean_mcc >= 0.9);

    ExperimentConfig cl_cfg;
    cl_cfg.label_source = LabelSource::Clustered;
    const auto cl_report = run_within_experiment(records, cl_cfg);
    CHECK(std::abs(cl_report.mean_mcc - gt_report.mean_mcc) < 0.1);

    SECTION("reports are deterministic") {
        const auto again = run_within_experiment(records, gt_cfg);
        CHECK(report_to_json(again) == report_to_json(gt_report));
    }
}

TEST_CASE("per-person clustering scope also trains") {
    const auto records = small_dataset(4, 250, 11);
    ExperimentConfig cfg;
    cfg.cluster_scope = ClusterScope::PerPerson;
    const auto report = run_within_experiment(records, cfg);
    CHECK(report.mean_mcc > 0.8);
}

TEST_CASE("single-class cells are reported, not computed") {
    auto records = small_dataset(3, 120, 7);
    // force one category's frames to a single class
    for (auto& rec : records) {
        if (rec.frame_id.back() == '1') {
            rec.visibility_category = VisibilityCategory::PartialFace2EyesNoMouth;
            rec.landmarks.points[kRightMouthCorner].reset();
            rec.landmarks.points[kLeftMouthCorner].reset();
            rec.gt_eye_contact = true;
        } else {
            rec.visibility_category = VisibilityCategory::WholeFaceAllLandmarks;
        }
    }
    ExperimentConfig ecfg;
    ecfg.breakdown = Breakdown::Category;
    const auto report = run_within_experiment(records, ecfg);
    REQUIRE(report.cells.size() == kNumCategories);
    const auto& cell = report.cells[static_cast<std::size_t>(
        VisibilityCategory::PartialFace2EyesNoMouth)];
    CHECK(cell.status == "untrainable");
    CHECK(cell.reason == "single-class");
    CHECK(cell.mcc == 0.0);
}

TEST_CASE("cross-dataset evaluation") {
    const auto train = small_dataset(5, 200, 21);

    SECTION("train == test is at least as good as the within mean") {
        ExperimentConfig cfg;
        cfg.label_source = LabelSource::GroundTruth;
        const auto within = run_within_experiment(train, cfg);
        const auto cross = run_cross_experiment(train, train, cfg);
        CHECK(cross.overall_mcc >= within.mean_mcc - 1e-9);
    }

    SECTION("a shifted test distribution scores lower than train == test") {
        GeneratorConfig shifted_cfg;
        shifted_cfg.n_persons = 5;
        shifted_cfg.frames_per_person = 200;
        shifted_cfg.seed = 1021;
        shifted_cfg.head_pose.pitch_mean = 20.0;
        const auto shifted = generate_dataset(shifted_cfg);

        ExperimentConfig cfg;
        const auto same = run_cross_experiment(train, train, cfg);
        const auto moved = run_cross_experiment(train, shifted, cfg);
        CHECK(moved.overall_mcc < same.overall_mcc);
    }

    SECTION("feature dimension mismatch is rejected") {
        GeneratorConfig other_cfg;
        other_cfg.n_persons = 2;
        other_cfg.frames_per_person = 30;
        other_cfg.feature_dim = 16;
        const auto other = generate_dataset(other_cfg);
        ExperimentConfig cfg;
        CHECK_THROWS_AS(run_cross_experiment(train, other, cfg), DimensionMismatchError);
    }
}

TEST_CASE("failure accounting by category") {
    SECTION("no-face frames are always excluded") {
        GeneratorConfig cfg;
        cfg.n_persons = 2;
        cfg.frames_per_person = 50;
        cfg.visibility_weights = {0, 0, 0, 0, 0, 0, 0, 1.0};
        const auto acc = failure_accounting(generate_dataset(cfg));
        CHECK(acc[static_cast<std::size_t>(VisibilityCategory::NoFace)].rate == 1.0);
    }
    SECTION("whole-face frames are never excluded") {
        GeneratorConfig cfg;
        cfg.n_persons = 2;
        cfg.frames_per_person = 50;
        const auto acc = failure_accounting(generate_dataset(cfg));
        CHECK(acc[static_cast<std::size_t>(VisibilityCategory::WholeFaceAllLandmarks)].rate == 0.0);
        CHECK(acc[static_cast<std::size_t>(VisibilityCategory::WholeFaceAllLandmarks)].total == 100);
    }
    SECTION("mixture with 30% unusable frames") {
        GeneratorConfig cfg;
        cfg.n_persons = 6;
        cfg.frames_per_person = 400;
        cfg.visibility_weights = {0.50, 0.10, 0.10, 0, 0.12, 0.08, 0.05, 0.05};
        const auto records = generate_dataset(cfg);
        const auto acc = failure_accounting(records);
        std::int64_t total = 0, excluded = 0;
        for (const auto& a : acc) {
            total += a.total;
            excluded += a.excluded;
        }
        CHECK(total == static_cast<std::int64_t>(records.size()));
        CHECK(std::abs(static_cast<double>(excluded) / static_cast<double>(total) - 0.30) < 0.03);
    }
}

TEST_CASE("ground-truth labels do not trail clustered labels") {
    // Human-baseline analogue: across seeds, the ground-truth-label runs
    // average at least the clustered-label runs minus a small slack.
    double sum_gt = 0, sum_cl = 0;
    const int runs = 20;
    for (int i = 0; i < runs; ++i) {
        const auto records = small_dataset(5, 80, 100 + static_cast<std::uint64_t>(i));
        ExperimentConfig cfg;
        cfg.label_source = LabelSource::GroundTruth;
        sum_gt += run_within_experiment(records, cfg).mean_mcc;
        cfg.label_source = LabelSource::Clustered;
        sum_cl += run_within_experiment(records, cfg).mean_mcc;
    }
    CHECK(sum_gt / runs >= sum_cl / runs - 0.02);
}

TEST_CASE("every frame is accounted for") {
    GeneratorConfig cfg;
    cfg.n_persons = 4;
    cfg.frames_per_person = 100;
    cfg.visibility_weights = {0.4, 0.2, 0.1, 0.1, 0.1, 0.1, 0, 0};
    const auto records = generate_dataset(cfg);
    ExperimentConfig ecfg;
    const auto report = run_within_experiment(records, ecfg);
    REQUIRE(report.cells.size() == 1);
    // evaluated frames plus excluded-with-reason frames cover the dataset
    const auto& cell = report.cells[0];
    CHECK(cell.n_test + cell.n_excluded == static_cast<std::int64_t>(records.size()));
}
