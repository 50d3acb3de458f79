#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "eyecontact/errors.hpp"
#include "eyecontact/rng.hpp"

namespace eyecontact {

enum class LabelSource { Clustered, GroundTruth };

inline const char* to_string(LabelSource s) {
    return s == LabelSource::Clustered ? "clustered" : "ground-truth";
}

inline LabelSource label_source_from_string(const std::string& s) {
    if (s == "clustered") return LabelSource::Clustered;
    if (s == "ground-truth") return LabelSource::GroundTruth;
    throw DataError("unknown label source: \"" + s + "\"");
}

struct SvmHyperParams {
    double lambda = 1e-4;  // L2 regularization strength
    int epochs = 20;
    std::uint64_t seed = 0;
    bool balance_classes = false;  // weight each class's loss by n/(2*n_class)
    bool project = true;           // project w onto the ball of radius 1/sqrt(lambda)
};

inline void validate(const SvmHyperParams& hp) {
    if (!(hp.lambda > 0.0) || hp.epochs < 1) {
        throw InvalidConfigError("SVM hyperparameters require lambda > 0 and epochs >= 1");
    }
}

// Trained linear eye contact classifier.
struct EyeContactModel {
    std::vector<double> weights;
    double bias = 0.0;
    std::size_t feature_dim = 0;
    LabelSource label_source = LabelSource::Clustered;
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
    SvmHyperParams hyperparams;
};

inline double decision_value(const EyeContactModel& model, const std::vector<double>& feature) {
    if (feature.size() != model.feature_dim) {
        throw DimensionMismatchError("feature dimension " + std::to_string(feature.size()) +
                                     " does not match model dimension " +
                                     std::to_string(model.feature_dim));
    }
    double v = model.bias;
    for (std::size_t i = 0; i < feature.size(); ++i) v += model.weights[i] * feature[i];
    return v;
}

// decision_value >= 0 predicts eye contact; an exact 0 counts as positive.
inline bool predict(const EyeContactModel& model, const std::vector<double>& feature) {
    return decision_value(model, feature) >= 0.0;
}

// Mean hinge loss plus L2 penalty; the quantity the optimizer descends.
inline double svm_objective(const EyeContactModel& model,
                            const std::vector<std::vector<double>>& features,
                            const std::vector<bool>& labels) {
    double hinge = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const double y = labels[i] ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y * decision_value(model, features[i]));
    }
    hinge /= static_cast<double>(features.size());
    double w2 = 0.0;
    for (double w : model.weights) w2 += w * w;
    return hinge + 0.5 * model.hyperparams.lambda * w2;
}

// Pegasos-style stochastic subgradient descent on the L2-regularized hinge
// loss, learning rate 1/(lambda*t). Features are centered on their training
// mean internally and the offset is folded back into the stored bias, so
// the decision function refers to raw features. The bias itself is
// unregularized and moves at rate 1/t, which only reaches O(1) offsets --
// hence the centering. Seeded shuffling makes training a pure function of
// (features, labels, hyperparams).
inline EyeContactModel train_svm(const std::vector<std::vector<double>>& features,
                                 const std::vector<bool>& labels, const SvmHyperParams& hp = {}) {
    validate(hp);
    if (features.size() != labels.size()) {
        throw DimensionMismatchError("train_svm: feature/label count mismatch");
    }
    if (features.empty()) throw DegenerateTrainingError("train_svm: empty training set");

    const std::size_t dim = features.front().size();
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].size() != dim) {
            throw DimensionMismatchError("train_svm: inconsistent feature dimensions");
        }
        (labels[i] ? n_pos : n_neg)++;
    }
    if (n_pos == 0 || n_neg == 0) {
        throw DegenerateTrainingError("train_svm: all " + std::to_string(features.size()) +
                                      " samples belong to a single class");
    }

    const double n = static_cast<double>(features.size());
    const double w_pos = hp.balance_classes ? n / (2.0 * static_cast<double>(n_pos)) : 1.0;
    const double w_neg = hp.balance_classes ? n / (2.0 * static_cast<double>(n_neg)) : 1.0;

    EyeContactModel model;
    model.weights.assign(dim, 0.0);
    model.feature_dim = dim;
    model.n_positive = n_pos;
    model.n_negative = n_neg;
    model.hyperparams = hp;

    std::vector<double> mean(dim, 0.0);
    for (const auto& x : features) {
        for (std::size_t d = 0; d < dim; ++d) mean[d] += x[d];
    }
    for (double& m : mean) m /= n;

    std::vector<std::size_t> order(features.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    Rng rng(derive_seed(hp.seed, 0x57a7e55eULL));
    const double radius = 1.0 / std::sqrt(hp.lambda);

    std::size_t t = 0;
    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t idx : order) {
            ++t;
            const double eta = 1.0 / (hp.lambda * static_cast<double>(t));
            const auto& x = features[idx];
            const double y = labels[idx] ? 1.0 : -1.0;
            const double cls_w = labels[idx] ? w_pos : w_neg;

            double margin = model.bias;
            for (std::size_t d = 0; d < dim; ++d) margin += model.weights[d] * (x[d] - mean[d]);
            margin *= y;

            const double decay = 1.0 - eta * hp.lambda;
            if (margin < 1.0) {
                const double step = eta * cls_w * y;
                for (std::size_t d = 0; d < dim; ++d) {
                    model.weights[d] = decay * model.weights[d] + step * (x[d] - mean[d]);
                }
                model.bias += cls_w * y / static_cast<double>(t);
            } else {
                for (std::size_t d = 0; d < dim; ++d) model.weights[d] *= decay;
            }

            if (hp.project) {
                double w2 = 0.0;
                for (double w : model.weights) w2 += w * w;
                if (w2 > radius * radius) {
                    const double shrink = radius / std::sqrt(w2);
                    for (double& w : model.weights) w *= shrink;
                }
            }
        }
    }

    double offset = 0.0;
    for (std::size_t d = 0; d < dim; ++d) offset += model.weights[d] * mean[d];
    model.bias -= offset;
    return model;
}

}  // namespace eyecontact
