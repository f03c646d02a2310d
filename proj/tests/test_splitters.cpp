#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rxval/fold_plan.hpp"
#include "rxval/rng.hpp"
#include "rxval/splitters.hpp"

using namespace rxval;

namespace {

std::vector<int> make_labels(std::size_t positives, std::size_t negatives,
                             std::uint64_t seed) {
    std::vector<int> labels(positives + negatives, 0);
    for (std::size_t i = 0; i < positives; ++i) {
        labels[i] = 1;
    }
    RngStream rng = RngStream::from_seed(seed);
    rng.shuffle(labels);
    return labels;
}

struct TrainCounts {
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

TrainCounts train_counts(const Fold& fold, std::size_t n, const std::vector<int>& labels) {
    TrainCounts counts;
    for (std::size_t i : fold.train_indices(n)) {
        if (labels[i] == 1) {
            ++counts.positives;
        } else {
            ++counts.negatives;
        }
    }
    return counts;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    throw std::logic_error("expected an rxval::Error");
}

}  // namespace

TEST_CASE("loocv_plan") {
    const auto plan = loocv_plan(3);
    REQUIRE(plan.folds.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(plan.folds[i].test_indices == std::vector<std::size_t>{i});
        CHECK(plan.folds[i].excluded_indices.empty());
    }
    CHECK(loocv_plan(2).folds.size() == 2);
    CHECK(kind_of([] { loocv_plan(1); }) == ErrorKind::TooFewSamples);
}

TEST_CASE("lpocv_plan partitions into equal blocks") {
    const auto labels = make_labels(3, 3, 1);
    RngStream rng = RngStream::from_seed(5);
    const auto plan = lpocv_plan(labels, 3, rng);
    REQUIRE(plan.folds.size() == 2);
    std::vector<std::size_t> seen;
    for (const auto& fold : plan.folds) {
        CHECK(fold.test_indices.size() == 3);
        seen.insert(seen.end(), fold.test_indices.begin(), fold.test_indices.end());
    }
    std::sort(seen.begin(), seen.end());
    CHECK(seen == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});

    // p = 1 reduces to singleton folds like LOOCV, order aside.
    RngStream rng1 = RngStream::from_seed(5);
    const auto singles = lpocv_plan(labels, 1, rng1);
    REQUIRE(singles.folds.size() == 6);
    for (const auto& fold : singles.folds) {
        CHECK(fold.test_indices.size() == 1);
    }
    CHECK_NOTHROW(validate_plan(singles));

    const auto five = make_labels(2, 3, 2);
    CHECK(kind_of([&] {
              RngStream r = RngStream::from_seed(5);
              lpocv_plan(five, 2, r);
          }) == ErrorKind::IndivisibleFold);
}

TEST_CASE("stratification_counts floor arithmetic") {
    const auto c = stratification_counts(25, 225, 2);
    CHECK(c.group_count == 125);
    CHECK(c.t_c == 0);
    CHECK(c.f_c == 1);
    CHECK(c.variable_per_group == 1);

    const auto exact = stratification_counts(50, 200, 5);
    CHECK(exact.group_count == 50);
    CHECK(exact.t_c == 1);
    CHECK(exact.f_c == 4);
    CHECK(exact.variable_per_group == 0);
}

TEST_CASE("stratified_lpocv_plan with exact stratification") {
    const auto labels = make_labels(50, 50, 7);
    RngStream rng = RngStream::from_seed(9);
    const auto plan = stratified_lpocv_plan(labels, 2, rng);
    REQUIRE(plan.folds.size() == 50);
    CHECK_NOTHROW(validate_plan(plan));
    for (const auto& fold : plan.folds) {
        std::size_t pos = 0;
        for (std::size_t i : fold.test_indices) {
            pos += static_cast<std::size_t>(labels[i]);
        }
        CHECK(pos == 1);  // exactly 1 positive + 1 negative per fold
    }
    const auto means = training_label_means(plan, labels);
    for (double m : means) {
        CHECK(m == means.front());
    }
}

TEST_CASE("stratified_lpocv_plan with inexact stratification") {
    const auto labels = make_labels(25, 225, 13);
    RngStream rng = RngStream::from_seed(17);
    const auto plan = stratified_lpocv_plan(labels, 2, rng);
    REQUIRE(plan.folds.size() == 125);
    CHECK_NOTHROW(validate_plan(plan));
    std::size_t with_positive = 0;
    for (const auto& fold : plan.folds) {
        std::size_t pos = 0;
        std::size_t neg = 0;
        for (std::size_t i : fold.test_indices) {
            (labels[i] == 1 ? pos : neg) += 1;
        }
        CHECK(neg >= 1);  // the guaranteed f_c negative
        if (pos > 0) {
            CHECK(pos == 1);
            ++with_positive;
        }
    }
    CHECK(with_positive == 25);

    const auto means = training_label_means(plan, labels);
    const double lo = *std::min_element(means.begin(), means.end());
    const double hi = *std::max_element(means.begin(), means.end());
    CHECK(hi > lo);  // training means are NOT constant
}

TEST_CASE("stratified leave-5-out at balance 0.2 is exact") {
    const auto labels = make_labels(50, 200, 19);
    RngStream rng = RngStream::from_seed(23);
    const auto plan = stratified_lpocv_plan(labels, 5, rng);
    for (const auto& fold : plan.folds) {
        std::size_t pos = 0;
        for (std::size_t i : fold.test_indices) {
            pos += static_cast<std::size_t>(labels[i]);
        }
        CHECK(pos == 1);
        CHECK(fold.test_indices.size() == 5);
    }
}

TEST_CASE("rloocv_plan rebalances every training fold") {
    CHECK(kind_of([] {
              std::vector<int> two = {1, 0};
              RngStream r = RngStream::from_seed(0);
              rloocv_plan(two, r);
          }) == ErrorKind::TooFewSamples);
    CHECK(kind_of([] {
              std::vector<int> ones = {1, 1, 1};
              RngStream r = RngStream::from_seed(0);
              rloocv_plan(ones, r);
          }) == ErrorKind::SingleClass);

    const std::vector<int> labels = {1, 1, 0, 0};
    RngStream rng = RngStream::from_seed(2);
    const auto plan = rloocv_plan(labels, rng);
    REQUIRE(plan.folds.size() == 4);
    for (const auto& fold : plan.folds) {
        REQUIRE(fold.excluded_indices.size() == 1);
        CHECK(labels[fold.excluded_indices[0]] != labels[fold.test_indices[0]]);
        const auto counts = train_counts(fold, 4, labels);
        CHECK(counts.positives == 1);
        CHECK(counts.negatives == 1);
    }

    const auto imbalanced = make_labels(10, 90, 29);
    RngStream rng2 = RngStream::from_seed(31);
    const auto plan2 = rloocv_plan(imbalanced, rng2);
    const auto means = training_label_means(plan2, imbalanced);
    for (double m : means) {
        CHECK(m == doctest::Approx(9.0 / 98.0).epsilon(1e-15));
    }
}

TEST_CASE("rlpocv_plan holds training composition exactly") {
    {
        const auto labels = make_labels(50, 50, 37);
        RngStream rng = RngStream::from_seed(41);
        const auto plan = rlpocv_plan(labels, 5, rng);
        CHECK_NOTHROW(validate_plan(plan));
        for (const auto& fold : plan.folds) {
            const auto counts = train_counts(fold, labels.size(), labels);
            CHECK(counts.positives == 47);
            CHECK(counts.negatives == 47);
        }
    }
    {
        const auto labels = make_labels(10, 1000, 43);
        RngStream rng = RngStream::from_seed(47);
        const auto plan = rlpocv_plan(labels, 2, rng);
        CHECK_NOTHROW(validate_plan(plan));
        for (const auto& fold : plan.folds) {
            const auto counts = train_counts(fold, labels.size(), labels);
            CHECK(counts.positives == 9);
            CHECK(counts.negatives == 998);
        }
    }
    {
        // p = 1 gives the RLOOCV composition T-1 / F-1.
        const auto labels = make_labels(4, 8, 53);
        RngStream rng = RngStream::from_seed(59);
        const auto plan = rlpocv_plan(labels, 1, rng);
        for (const auto& fold : plan.folds) {
            const auto counts = train_counts(fold, labels.size(), labels);
            CHECK(counts.positives == 3);
            CHECK(counts.negatives == 7);
        }
    }
}

TEST_CASE("every scheme partitions the sample range") {
    RngStream gen = RngStream::from_seed(61);
    const std::vector<SchemeKind> kinds = {SchemeKind::Loocv, SchemeKind::Lpocv,
                                           SchemeKind::StratifiedLpocv, SchemeKind::Rloocv,
                                           SchemeKind::Rlpocv};
    for (int round = 0; round < 40; ++round) {
        const std::size_t p = 1 + gen.next_below(5);
        const std::size_t groups = 2 + gen.next_below(10);
        const std::size_t n = p * groups;
        std::size_t positives = 1 + gen.next_below(n - 1);
        const auto labels = make_labels(positives, n - positives, gen.next_u64());
        for (SchemeKind kind : kinds) {
            SchemeSpec scheme{kind, p};
            RngStream rng = RngStream::from_seed(gen.next_u64());
            FoldPlan plan;
            try {
                plan = build_plan(scheme, labels, rng);
            } catch (const Error&) {
                continue;  // legitimately impossible combination
            }
            CHECK_NOTHROW(validate_plan(plan));
            CHECK(plan.n == n);
        }
    }
}

TEST_CASE("plans are deterministic given (labels, p, seed)") {
    const auto labels = make_labels(20, 30, 67);
    for (SchemeKind kind : {SchemeKind::Lpocv, SchemeKind::StratifiedLpocv,
                            SchemeKind::Rloocv, SchemeKind::Rlpocv}) {
        SchemeSpec scheme{kind, 5};
        RngStream rng_a = derive_stream(99, 0, kTagPlan);
        RngStream rng_b = derive_stream(99, 0, kTagPlan);
        const auto plan_a = build_plan(scheme, labels, rng_a);
        const auto plan_b = build_plan(scheme, labels, rng_b);
        CHECK(plan_to_json(plan_a) == plan_to_json(plan_b));
    }
}

TEST_CASE("scheme name parsing") {
    CHECK(parse_scheme("loocv") == SchemeKind::Loocv);
    CHECK(parse_scheme("stratified") == SchemeKind::StratifiedLpocv);
    CHECK(parse_scheme("stratified-lpocv") == SchemeKind::StratifiedLpocv);
    CHECK(parse_scheme("rlpocv") == SchemeKind::Rlpocv);
    CHECK_THROWS_AS(parse_scheme("kfold"), Error);
    CHECK(scheme_name(SchemeKind::Rloocv) == std::string("rloocv"));
}
