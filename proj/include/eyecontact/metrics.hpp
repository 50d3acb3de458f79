#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "eyecontact/errors.hpp"

namespace eyecontact {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
};

inline ConfusionCounts confusion_matrix(const std::vector<bool>& predictions,
                                        const std::vector<bool>& ground_truth) {
    if (predictions.size() != ground_truth.size() || predictions.empty()) {
        throw DimensionMismatchError("confusion_matrix: need equal non-zero lengths");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i]) {
            (ground_truth[i] ? c.tp : c.fp)++;
        } else {
            (ground_truth[i] ? c.fn : c.tn)++;
        }
    }
    return c;
}

// Matthews correlation coefficient in [-1, 1]. When any denominator factor
// is zero (a degenerate prediction or label split) this returns 0, the
// random-guessing value.
inline double mcc(const ConfusionCounts& c) {
    if (c.tp < 0 || c.fp < 0 || c.tn < 0 || c.fn < 0) {
        throw InvalidConfigError("mcc: negative counts");
    }
    if (c.total() == 0) throw InvalidConfigError("mcc: empty confusion matrix");

    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn);
    const double fn = static_cast<double>(c.fn);

    const double pred_pos = tp + fp;
    const double pred_neg = tn + fn;
    const double actual_pos = tp + fn;
    const double actual_neg = tn + fp;
    if (pred_pos == 0.0 || pred_neg == 0.0 || actual_pos == 0.0 || actual_neg == 0.0) {
        return 0.0;
    }
    return (tp * tn - fp * fn) / std::sqrt(pred_pos * actual_pos * pred_neg * actual_neg);
}

}  // namespace eyecontact
