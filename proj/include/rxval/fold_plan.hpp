#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rxval/errors.hpp"

namespace rxval {

// One held-out test group. Excluded indices are removed from training for
// rebalancing but are never tested in this fold; the training set is what
// remains of [0, n).
struct Fold {
    std::vector<std::size_t> test_indices;
    std::vector<std::size_t> excluded_indices;

    // [0, n) minus test minus excluded, ascending.
    std::vector<std::size_t> train_indices(std::size_t n) const;
};

// Ordered folds whose test sets partition [0, n): every sample is tested
// exactly once.
struct FoldPlan {
    std::size_t n = 0;
    std::vector<Fold> folds;
};

// Checks the partition property, index ranges, and per-fold disjointness.
void validate_plan(const FoldPlan& plan);

// Mean training label per fold, in fold order. Throws EmptyTrainingSet if
// a fold trains on nothing.
std::vector<double> training_label_means(const FoldPlan& plan,
                                         std::span<const int> labels);

// JSON layout: {"n": int, "folds": [{"test": [int], "excluded": [int]}]}
std::string plan_to_json(const FoldPlan& plan);
FoldPlan plan_from_json(const std::string& text);

}  // namespace rxval
