#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eyecontact/metrics.hpp"
#include "eyecontact/rng.hpp"

using namespace eyecontact;

namespace {

// Independent of the implementation: long-double evaluation of the MCC
// definition with the explicit zero-denominator convention.
long double mcc_oracle(long long tp, long long fp, long long tn, long long fn) {
    const long double n1 = static_cast<long double>(tp + fp);
    const long double n2 = static_cast<long double>(tp + fn);
    const long double n3 = static_cast<long double>(tn + fp);
    const long double n4 = static_cast<long double>(tn + fn);
    if (n1 == 0 || n2 == 0 || n3 == 0 || n4 == 0) return 0.0L;
    const long double num = static_cast<long double>(tp) * tn - static_cast<long double>(fp) * fn;
    return num / sqrtl(n1 * n2 * n3 * n4);
}

}  // namespace

TEST_CASE("confusion matrix counting") {
    SECTION("all correct") {
        const auto c = confusion_matrix({true, true, false}, {true, true, false});
        CHECK(c.tp == 2);
        CHECK(c.tn == 1);
        CHECK(c.fp == 0);
        CHECK(c.fn == 0);
    }
    SECTION("all wrong") {
        const auto c = confusion_matrix({true, false}, {false, true});
        CHECK(c.tp == 0);
        CHECK(c.tn == 0);
        CHECK(c.fp == 1);
        CHECK(c.fn == 1);
    }
    SECTION("hand-counted mixture") {
        const std::vector<bool> pred{true, false, true, false, true, true, false, true, false, true};
        const std::vector<bool> gt{true, false, false, true, true, true, false, false, false, true};
        const auto c = confusion_matrix(pred, gt);
        CHECK(c.tp == 4);
        CHECK(c.tn == 3);
        CHECK(c.fp == 2);
        CHECK(c.fn == 1);
    }
    SECTION("length mismatch and empty input") {
        CHECK_THROWS_AS(confusion_matrix({true}, {true, false}), DimensionMismatchError);
        CHECK_THROWS_AS(confusion_matrix({}, {}), DimensionMismatchError);
    }
}

TEST_CASE("mcc values") {
    SECTION("perfect classifier") { CHECK(mcc({5, 0, 5, 0}) == 1.0); }
    SECTION("total contradiction") { CHECK(mcc({0, 5, 0, 5}) == -1.0); }
    SECTION("direct formula evaluation") {
        CHECK(std::abs(mcc({4, 1, 3, 2}) - 0.40825) < 1e-5);
    }
    SECTION("zero denominator convention") {
        CHECK(mcc({5, 0, 0, 0}) == 0.0);   // no negatives anywhere
        CHECK(mcc({0, 0, 7, 0}) == 0.0);   // no positives anywhere
        CHECK(mcc({3, 0, 0, 2}) == 0.0);   // predictions single-class
    }
    SECTION("empty counts rejected") {
        CHECK_THROWS_AS(mcc({0, 0, 0, 0}), InvalidConfigError);
        CHECK_THROWS_AS(mcc({-1, 1, 1, 1}), InvalidConfigError);
    }
}

TEST_CASE("mcc agrees with the oracle on a small exhaustive grid") {
    for (long long tp = 0; tp <= 4; ++tp)
        for (long long fp = 0; fp <= 4; ++fp)
            for (long long tn = 0; tn <= 4; ++tn)
                for (long long fn = 0; fn <= 4; ++fn) {
                    if (tp + fp + tn + fn == 0) continue;
                    const double got = mcc({tp, fp, tn, fn});
                    const double want = static_cast<double>(mcc_oracle(tp, fp, tn, fn));
                    CHECK(std::abs(got - want) < 1e-12);
                }
}

TEST_CASE("mcc symmetry under flipping both label sets") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        const ConfusionCounts c{static_cast<std::int64_t>(rng.uniform_index(20)),
                                static_cast<std::int64_t>(rng.uniform_index(20)),
                                static_cast<std::int64_t>(rng.uniform_index(20)),
                                static_cast<std::int64_t>(rng.uniform_index(20))};
        if (c.total() == 0) continue;
        // flipping predictions and ground truth swaps tp<->tn and fp<->fn
        const ConfusionCounts flipped{c.tn, c.fn, c.tp, c.fp};
        CHECK(std::abs(mcc(c) - mcc(flipped)) < 1e-15);
    }
}

TEST_CASE("mcc extremes from predictions") {
    Rng rng(123);
    for (int i = 0; i < 50; ++i) {
        std::vector<bool> gt;
        bool seen_pos = false, seen_neg = false;
        for (int k = 0; k < 30; ++k) {
            const bool v = rng.bernoulli(0.5);
            gt.push_back(v);
            (v ? seen_pos : seen_neg) = true;
        }
        if (!seen_pos || !seen_neg) continue;
        std::vector<bool> inverted;
        for (bool v : gt) inverted.push_back(!v);
        CHECK(mcc(confusion_matrix(gt, gt)) == 1.0);
        CHECK(mcc(confusion_matrix(inverted, gt)) == -1.0);
    }
}
