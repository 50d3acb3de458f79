#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eyecontact/errors.hpp"
#include "eyecontact/frame.hpp"
#include "eyecontact/metrics.hpp"
#include "eyecontact/pipeline.hpp"
#include "eyecontact/svm.hpp"

namespace eyecontact {

enum class Breakdown { None, Category, HeadPose };

inline const char* to_string(Breakdown b) {
    switch (b) {
        case Breakdown::None: return "none";
        case Breakdown::Category: return "category";
        case Breakdown::HeadPose: return "headpose";
    }
    return "none";
}

inline Breakdown breakdown_from_string(const std::string& s) {
    if (s == "none") return Breakdown::None;
    if (s == "category") return Breakdown::Category;
    if (s == "headpose") return Breakdown::HeadPose;
    throw DataError("unknown breakdown: \"" + s + "\"");
}

// Whether clustering pools the training split or runs per person.
enum class ClusterScope { Pooled, PerPerson };

struct ExperimentConfig {
    LabelSource label_source = LabelSource::Clustered;
    Breakdown breakdown = Breakdown::None;
    ClusterParams cluster;
    ClusterScope cluster_scope = ClusterScope::Pooled;
    SvmHyperParams svm;
    std::uint64_t seed = 0;
    PipelineConfig pipeline;
};

// --- LOPO folds ---

struct LopoFold {
    std::vector<std::string> train_persons;
    std::string test_person;
};

// One fold per distinct person, in sorted person order.
inline std::vector<LopoFold> lopo_folds(const std::vector<FrameRecord>& records) {
    std::set<std::string> persons;
    for (const auto& r : records) persons.insert(r.person_id);
    if (persons.size() < 2) {
        throw InvalidConfigError("leave-one-person-out needs at least 2 persons, got " +
                                 std::to_string(persons.size()));
    }
    std::vector<LopoFold> folds;
    for (const auto& test : persons) {
        LopoFold fold;
        fold.test_person = test;
        for (const auto& p : persons) {
            if (p != test) fold.train_persons.push_back(p);
        }
        folds.push_back(std::move(fold));
    }
    return folds;
}

// --- head-pose buckets ---

constexpr int kBucketsPerAxis = 5;

// Buckets (-inf,-20), [-20,-10), [-10,10), [10,20), [20,inf), half-open.
inline int bucket_index(double angle_deg) {
    if (!std::isfinite(angle_deg)) throw InvalidConfigError("bucket_index: non-finite angle");
    if (angle_deg < -20.0) return 0;
    if (angle_deg < -10.0) return 1;
    if (angle_deg < 10.0) return 2;
    if (angle_deg < 20.0) return 3;
    return 4;
}

// (row, col) = (pitch bucket, yaw bucket) in the 5x5 grid.
inline std::pair<int, int> bucket_head_pose(double pitch_n, double yaw_n) {
    return {bucket_index(pitch_n), bucket_index(yaw_n)};
}

inline const char* bucket_label(int index) {
    static const char* labels[kBucketsPerAxis] = {"(-inf..-20)", "[-20..-10)", "[-10..10)",
                                                  "[10..20)", "[20..inf)"};
    return labels[index];
}

inline std::string bucket_cell_id(int row, int col) {
    return std::string("pitch") + bucket_label(row) + "_yaw" + bucket_label(col);
}

// --- frame preprocessing ---

// Exclusion reasons. Processing failures also count toward the
// failure-rate accounting; the others only affect evaluation usability.
inline const char* kReasonInsufficientLandmarks = "insufficient-landmarks";
inline const char* kReasonMissingGaze = "missing-gaze-estimate";
inline const char* kReasonPoseFailure = "pose-failure";
inline const char* kReasonMissingFeature = "missing-feature";
inline const char* kReasonMissingGroundTruth = "missing-ground-truth";

struct ProcessedFrame {
    const FrameRecord* record = nullptr;
    std::optional<GazeSample> sample;
    std::string exclusion;  // empty when usable for evaluation

    bool processed() const { return sample.has_value(); }
    bool usable_for_eval() const { return exclusion.empty(); }
    // Clustering needs a camera-plane gaze point; ground-truth training
    // needs a label.
    bool usable_for_cluster_training() const {
        return processed() && sample->gaze_point.has_value() && record->feature.has_value();
    }
    bool usable_for_gt_training() const {
        return processed() && record->feature.has_value() && record->gt_eye_contact.has_value();
    }
};

inline std::vector<ProcessedFrame> preprocess_frames(const std::vector<FrameRecord>& records,
                                                     const PipelineConfig& cfg) {
    std::vector<ProcessedFrame> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        ProcessedFrame pf;
        pf.record = &rec;
        try {
            pf.sample = process_frame(rec, cfg);
        } catch (const InsufficientLandmarksError&) {
            pf.exclusion = kReasonInsufficientLandmarks;
        } catch (const MissingInputError&) {
            pf.exclusion = kReasonMissingGaze;
        } catch (const Error&) {
            pf.exclusion = kReasonPoseFailure;
        }
        if (pf.exclusion.empty()) {
            if (!rec.feature) {
                pf.exclusion = kReasonMissingFeature;
            } else if (!rec.gt_eye_contact) {
                pf.exclusion = kReasonMissingGroundTruth;
            }
        }
        out.push_back(std::move(pf));
    }
    return out;
}

// --- failure accounting ---

struct CategoryAccounting {
    std::string category;
    std::int64_t total = 0;
    std::int64_t excluded = 0;  // frames failing the processing preconditions
    double rate = 0.0;
};

// Per visibility category: how many frames the geometric pipeline had to
// drop (too few landmarks, no gaze estimate, or a failed pose solve).
inline std::vector<CategoryAccounting> failure_accounting(const std::vector<FrameRecord>& records,
                                                          const PipelineConfig& cfg = {}) {
    std::vector<CategoryAccounting> acc(kNumCategories);
    for (int c = 0; c < kNumCategories; ++c) {
        acc[static_cast<std::size_t>(c)].category = to_string(static_cast<VisibilityCategory>(c));
    }
    for (const auto& rec : records) {
        auto& a = acc[static_cast<std::size_t>(rec.visibility_category)];
        a.total += 1;
        if (rec.landmarks.visible_count() < 4 || !rec.gaze_estimate) {
            a.excluded += 1;
            continue;
        }
        try {
            process_frame(rec, cfg);
        } catch (const Error&) {
            a.excluded += 1;
        }
    }
    for (auto& a : acc) {
        a.rate = a.total > 0 ? static_cast<double>(a.excluded) / static_cast<double>(a.total) : 0.0;
    }
    return acc;
}

// --- reports ---

struct FoldReport {
    std::string test_person;
    std::string status = "ok";  // "ok" or a failure reason
    double mcc = 0.0;
    ConfusionCounts counts;
    std::int64_t n_train = 0;
    std::int64_t n_test = 0;
};

struct CellReport {
    std::string id;
    std::string status = "ok";  // "ok" | "untrainable"
    std::string reason;         // set when untrainable
    std::vector<FoldReport> folds;
    double mcc = 0.0;       // pooled over all evaluated predictions in the cell
    double mean_mcc = 0.0;  // across ok folds; equals mcc for cross runs
    double sd_mcc = 0.0;    // sample SD (n-1) across ok folds
    std::int64_t n_train = 0;
    std::int64_t n_test = 0;
    std::int64_t n_excluded = 0;
    std::map<std::string, std::int64_t> exclusions;
};

struct ExperimentReport {
    int version = 1;
    std::string protocol;  // "within" | "cross"
    LabelSource label_source = LabelSource::Clustered;
    Breakdown breakdown = Breakdown::None;
    std::uint64_t seed = 0;
    std::string sd_definition = "sample (n-1)";
    double overall_mcc = 0.0;  // pooled over every evaluated prediction
    double mean_mcc = 0.0;     // mean over fold MCCs (within) or cell MCCs (cross)
    double sd_mcc = 0.0;
    std::vector<CellReport> cells;
    std::map<std::string, std::int64_t> exclusion_counts;
    std::vector<CategoryAccounting> accounting;
};

namespace eval_detail {

struct TrainingSet {
    std::vector<std::vector<double>> features;
    std::vector<bool> labels;
};

// Builds the training set for one split. Cluster-derived labels follow
// the target-cluster rule; noise points are dropped. Throws NoClusterError
// or DegenerateTrainingError upward for the caller to record.
inline TrainingSet build_training_set(const std::vector<const ProcessedFrame*>& train_frames,
                                      const ExperimentConfig& cfg) {
    TrainingSet ts;
    if (cfg.label_source == LabelSource::GroundTruth) {
        for (const auto* pf : train_frames) {
            if (!pf->usable_for_gt_training()) continue;
            ts.features.push_back(*pf->record->feature);
            ts.labels.push_back(*pf->record->gt_eye_contact);
        }
        return ts;
    }

    std::vector<const ProcessedFrame*> usable;
    for (const auto* pf : train_frames) {
        if (pf->usable_for_cluster_training()) usable.push_back(pf);
    }

    auto label_group = [&](const std::vector<const ProcessedFrame*>& group) {
        std::vector<GazePoint2D> points;
        points.reserve(group.size());
        for (const auto* pf : group) points.push_back(*pf->sample->gaze_point);
        const std::vector<int> assignments = cluster_gaze_points(points, cfg.cluster);
        const int target = select_target_cluster(assignments, points);
        const ClusterLabeling labeling = derive_labels(assignments, target);
        for (std::size_t i = 0; i < group.size(); ++i) {
            if (labeling.is_noise[i]) continue;
            ts.features.push_back(*group[i]->record->feature);
            ts.labels.push_back(labeling.labels[i]);
        }
    };

    if (cfg.cluster_scope == ClusterScope::Pooled) {
        label_group(usable);
    } else {
        std::map<std::string, std::vector<const ProcessedFrame*>> by_person;
        for (const auto* pf : usable) by_person[pf->record->person_id].push_back(pf);
        for (const auto& [person, group] : by_person) {
            try {
                label_group(group);
            } catch (const NoClusterError&) {
                // this person's frames contribute no training labels
            }
        }
        if (ts.features.empty()) {
            throw NoClusterError("per-person clustering produced no labeled samples");
        }
    }
    return ts;
}

inline double sample_sd(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

inline void finalize_cell(CellReport& cell) {
    std::vector<double> fold_mccs;
    ConfusionCounts pooled;
    std::map<std::string, std::int64_t> fold_failures;
    for (const auto& fr : cell.folds) {
        if (fr.status == "ok") {
            fold_mccs.push_back(fr.mcc);
            pooled += fr.counts;
            cell.n_test += fr.n_test;
        } else {
            fold_failures["fold-" + fr.status] += fr.n_test;
        }
    }
    for (const auto& [reason, count] : fold_failures) {
        cell.exclusions[reason] += count;
        cell.n_excluded += count;
    }
    if (fold_mccs.empty()) {
        cell.status = "untrainable";
        if (cell.reason.empty()) {
            cell.reason = cell.folds.empty() ? "no-usable-frames" : cell.folds.front().status;
        }
        cell.mcc = 0.0;
        cell.mean_mcc = 0.0;
        cell.sd_mcc = 0.0;
        return;
    }
    cell.mcc = pooled.total() > 0 ? mcc(pooled) : 0.0;
    double mean = 0.0;
    for (double v : fold_mccs) mean += v;
    mean /= static_cast<double>(fold_mccs.size());
    cell.mean_mcc = mean;
    cell.sd_mcc = sample_sd(fold_mccs, mean);
}

// Partition of frame indices into report cells, in fixed cell order.
inline std::vector<std::pair<std::string, std::vector<std::size_t>>> partition_cells(
    const std::vector<ProcessedFrame>& frames, Breakdown breakdown,
    std::map<std::string, std::int64_t>& unassignable) {
    std::vector<std::pair<std::string, std::vector<std::size_t>>> cells;
    switch (breakdown) {
        case Breakdown::None: {
            cells.emplace_back("all", std::vector<std::size_t>{});
            for (std::size_t i = 0; i < frames.size(); ++i) cells[0].second.push_back(i);
            break;
        }
        case Breakdown::Category: {
            for (int c = 0; c < kNumCategories; ++c) {
                cells.emplace_back(to_string(static_cast<VisibilityCategory>(c)),
                                   std::vector<std::size_t>{});
            }
            for (std::size_t i = 0; i < frames.size(); ++i) {
                const auto c = static_cast<std::size_t>(frames[i].record->visibility_category);
                cells[c].second.push_back(i);
            }
            break;
        }
        case Breakdown::HeadPose: {
            for (int r = 0; r < kBucketsPerAxis; ++r) {
                for (int c = 0; c < kBucketsPerAxis; ++c) {
                    cells.emplace_back(bucket_cell_id(r, c), std::vector<std::size_t>{});
                }
            }
            // Bucketing needs a normalized head pose; frames that failed
            // processing cannot be assigned to any bucket.
            for (std::size_t i = 0; i < frames.size(); ++i) {
                if (!frames[i].processed()) {
                    unassignable[frames[i].exclusion] += 1;
                    continue;
                }
                const auto [r, c] = bucket_head_pose(frames[i].sample->pitch_n,
                                                     frames[i].sample->yaw_n);
                cells[static_cast<std::size_t>(r * kBucketsPerAxis + c)].second.push_back(i);
            }
            break;
        }
    }
    return cells;
}

inline bool single_class(const std::vector<const ProcessedFrame*>& eval_frames) {
    bool seen_pos = false, seen_neg = false;
    for (const auto* pf : eval_frames) {
        (*pf->record->gt_eye_contact ? seen_pos : seen_neg) = true;
    }
    return !(seen_pos && seen_neg);
}

}  // namespace eval_detail

// Leave-one-person-out evaluation, optionally per visibility category or
// per head-pose bucket. With a breakdown, clustering and training happen
// within each cell's training split. Cells that cannot be trained or
// evaluated are reported with MCC 0 and a reason, never silently dropped.
inline ExperimentReport run_within_experiment(const std::vector<FrameRecord>& records,
                                              const ExperimentConfig& cfg) {
    if (records.empty()) throw EmptyDatasetError("run_within_experiment: empty dataset");
    {
        std::set<std::string> persons;
        for (const auto& r : records) persons.insert(r.person_id);
        if (persons.size() < 2) {
            throw InvalidConfigError("leave-one-person-out needs at least 2 persons");
        }
    }

    const std::vector<ProcessedFrame> frames = preprocess_frames(records, cfg.pipeline);

    ExperimentReport report;
    report.protocol = "within";
    report.label_source = cfg.label_source;
    report.breakdown = cfg.breakdown;
    report.seed = cfg.seed;
    for (const auto& pf : frames) {
        if (!pf.usable_for_eval()) report.exclusion_counts[pf.exclusion] += 1;
    }
    report.accounting = failure_accounting(records, cfg.pipeline);

    std::map<std::string, std::int64_t> unassignable;
    const auto cells = eval_detail::partition_cells(frames, cfg.breakdown, unassignable);

    ConfusionCounts overall_counts;
    std::vector<double> all_fold_mccs;
    std::size_t cell_index = 0;
    for (const auto& [cell_id, indices] : cells) {
        CellReport cell;
        cell.id = cell_id;

        std::vector<const ProcessedFrame*> eval_frames;
        for (std::size_t i : indices) {
            const auto& pf = frames[i];
            if (pf.usable_for_eval()) {
                eval_frames.push_back(&pf);
            } else {
                cell.exclusions[pf.exclusion] += 1;
                cell.n_excluded += 1;
            }
        }
        const bool for_clustering = cfg.label_source == LabelSource::Clustered;
        for (std::size_t i : indices) {
            const auto& pf = frames[i];
            if (for_clustering ? pf.usable_for_cluster_training() : pf.usable_for_gt_training()) {
                cell.n_train += 1;
            }
        }

        if (eval_frames.empty()) {
            cell.status = "untrainable";
            cell.reason = "no-usable-frames";
            report.cells.push_back(std::move(cell));
            ++cell_index;
            continue;
        }
        if (eval_detail::single_class(eval_frames)) {
            cell.status = "untrainable";
            cell.reason = "single-class";
            cell.n_excluded += static_cast<std::int64_t>(eval_frames.size());
            cell.exclusions["single-class"] += static_cast<std::int64_t>(eval_frames.size());
            report.cells.push_back(std::move(cell));
            ++cell_index;
            continue;
        }

        std::set<std::string> persons;
        for (const auto* pf : eval_frames) persons.insert(pf->record->person_id);
        if (persons.size() < 2) {
            cell.status = "untrainable";
            cell.reason = "single-person";
            cell.n_excluded += static_cast<std::int64_t>(eval_frames.size());
            cell.exclusions["single-person"] += static_cast<std::int64_t>(eval_frames.size());
            report.cells.push_back(std::move(cell));
            ++cell_index;
            continue;
        }

        std::size_t fold_index = 0;
        for (const auto& test_person : persons) {
            FoldReport fold;
            fold.test_person = test_person;

            std::vector<const ProcessedFrame*> train_frames;
            for (std::size_t i : indices) {
                if (frames[i].record->person_id != test_person) train_frames.push_back(&frames[i]);
            }
            std::vector<const ProcessedFrame*> test_frames;
            for (const auto* pf : eval_frames) {
                if (pf->record->person_id == test_person) test_frames.push_back(pf);
            }
            fold.n_test = static_cast<std::int64_t>(test_frames.size());

            try {
                ExperimentConfig fold_cfg = cfg;
                fold_cfg.svm.seed = derive_seed(cfg.seed, cell_index, fold_index);
                fold_cfg.cluster.subsample_seed = fold_cfg.svm.seed;
                const auto ts = eval_detail::build_training_set(train_frames, fold_cfg);
                if (ts.features.empty()) throw DegenerateTrainingError("no usable training samples");
                const EyeContactModel model = train_svm(ts.features, ts.labels, fold_cfg.svm);
                fold.n_train = static_cast<std::int64_t>(ts.features.size());

                std::vector<bool> pred, gt;
                pred.reserve(test_frames.size());
                gt.reserve(test_frames.size());
                for (const auto* pf : test_frames) {
                    pred.push_back(predict(model, *pf->record->feature));
                    gt.push_back(*pf->record->gt_eye_contact);
                }
                fold.counts = confusion_matrix(pred, gt);
                fold.mcc = mcc(fold.counts);
                overall_counts += fold.counts;
                all_fold_mccs.push_back(fold.mcc);
            } catch (const NoClusterError&) {
                fold.status = "clustering-failed";
            } catch (const DegenerateTrainingError&) {
                fold.status = "degenerate-training";
            }
            cell.folds.push_back(std::move(fold));
            ++fold_index;
        }
        eval_detail::finalize_cell(cell);
        report.cells.push_back(std::move(cell));
        ++cell_index;
    }

    report.overall_mcc = overall_counts.total() > 0 ? mcc(overall_counts) : 0.0;
    if (!all_fold_mccs.empty()) {
        double mean = 0.0;
        for (double v : all_fold_mccs) mean += v;
        mean /= static_cast<double>(all_fold_mccs.size());
        report.mean_mcc = mean;
        report.sd_mcc = eval_detail::sample_sd(all_fold_mccs, mean);
    }
    return report;
}

// Trains one model on the full training dataset and evaluates it on the
// test dataset, overall and per breakdown cell.
inline ExperimentReport run_cross_experiment(const std::vector<FrameRecord>& train_records,
                                             const std::vector<FrameRecord>& test_records,
                                             const ExperimentConfig& cfg) {
    if (train_records.empty() || test_records.empty()) {
        throw EmptyDatasetError("run_cross_experiment: empty dataset");
    }
    std::optional<std::size_t> dim;
    for (const auto* recs : {&train_records, &test_records}) {
        for (const auto& r : *recs) {
            if (!r.feature) continue;
            if (!dim) dim = r.feature->size();
            if (r.feature->size() != *dim) {
                throw DimensionMismatchError("cross-dataset feature dimensions differ: " +
                                             std::to_string(*dim) + " vs " +
                                             std::to_string(r.feature->size()));
            }
        }
    }

    const std::vector<ProcessedFrame> train_frames = preprocess_frames(train_records, cfg.pipeline);
    const std::vector<ProcessedFrame> test_frames = preprocess_frames(test_records, cfg.pipeline);

    ExperimentReport report;
    report.protocol = "cross";
    report.label_source = cfg.label_source;
    report.breakdown = cfg.breakdown;
    report.seed = cfg.seed;
    for (const auto& pf : test_frames) {
        if (!pf.usable_for_eval()) report.exclusion_counts[pf.exclusion] += 1;
    }
    report.accounting = failure_accounting(test_records, cfg.pipeline);

    std::vector<const ProcessedFrame*> train_ptrs;
    for (const auto& pf : train_frames) train_ptrs.push_back(&pf);

    std::optional<EyeContactModel> model;
    std::string train_failure;
    std::int64_t n_train = 0;
    try {
        ExperimentConfig train_cfg = cfg;
        train_cfg.svm.seed = derive_seed(cfg.seed, 0xc2055ULL);
        train_cfg.cluster.subsample_seed = train_cfg.svm.seed;
        const auto ts = eval_detail::build_training_set(train_ptrs, train_cfg);
        if (ts.features.empty()) throw DegenerateTrainingError("no usable training samples");
        model = train_svm(ts.features, ts.labels, train_cfg.svm);
        n_train = static_cast<std::int64_t>(ts.features.size());
    } catch (const NoClusterError&) {
        train_failure = "clustering-failed";
    } catch (const DegenerateTrainingError&) {
        train_failure = "degenerate-training";
    }

    std::map<std::string, std::int64_t> unassignable;
    const auto cells = eval_detail::partition_cells(test_frames, cfg.breakdown, unassignable);

    ConfusionCounts overall_counts;
    std::vector<double> cell_mccs;
    for (const auto& [cell_id, indices] : cells) {
        CellReport cell;
        cell.id = cell_id;
        cell.n_train = n_train;

        std::vector<const ProcessedFrame*> eval_frames;
        for (std::size_t i : indices) {
            const auto& pf = test_frames[i];
            if (pf.usable_for_eval()) {
                eval_frames.push_back(&pf);
            } else {
                cell.exclusions[pf.exclusion] += 1;
                cell.n_excluded += 1;
            }
        }

        if (!train_failure.empty()) {
            cell.status = "untrainable";
            cell.reason = train_failure;
        } else if (eval_frames.empty()) {
            cell.status = "untrainable";
            cell.reason = "no-usable-frames";
        } else if (eval_detail::single_class(eval_frames)) {
            cell.status = "untrainable";
            cell.reason = "single-class";
        } else {
            std::vector<bool> pred, gt;
            for (const auto* pf : eval_frames) {
                pred.push_back(predict(*model, *pf->record->feature));
                gt.push_back(*pf->record->gt_eye_contact);
            }
            const ConfusionCounts counts = confusion_matrix(pred, gt);
            cell.mcc = mcc(counts);
            cell.mean_mcc = cell.mcc;
            cell.sd_mcc = 0.0;
            cell.n_test = static_cast<std::int64_t>(eval_frames.size());
            overall_counts += counts;
            cell_mccs.push_back(cell.mcc);
        }
        report.cells.push_back(std::move(cell));
    }

    report.overall_mcc = overall_counts.total() > 0 ? mcc(overall_counts) : 0.0;
    if (!cell_mccs.empty()) {
        double mean = 0.0;
        for (double v : cell_mccs) mean += v;
        mean /= static_cast<double>(cell_mccs.size());
        report.mean_mcc = mean;
        report.sd_mcc = eval_detail::sample_sd(cell_mccs, mean);
    }
    return report;
}

}  // namespace eyecontact
