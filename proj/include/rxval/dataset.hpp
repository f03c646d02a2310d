#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rxval/errors.hpp"

namespace rxval {

// Dense row-major matrix of doubles; rows are samples, columns features.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    static Matrix zeros(std::size_t r, std::size_t c) {
        return Matrix{r, c, std::vector<double>(r * c, 0.0)};
    }

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols, cols};
    }
};

// Feature matrix plus binary labels; the unit every splitting scheme
// partitions. Labels are {0,1} ints because label means are first-class
// quantities throughout.
struct LabeledDataset {
    Matrix features;                      // n x d
    std::vector<int> labels;              // n values in {0, 1}
    std::vector<std::string> sample_ids;  // optional: empty, or n entries

    std::size_t size() const { return labels.size(); }
};

struct ValidationReport {
    std::size_t positives = 0;
    std::size_t negatives = 0;
    // Rank metrics are undefined downstream; a warning, not an error.
    bool single_class = false;
};

// Checks the dataset invariants; throws ShapeMismatch or NonBinaryLabel.
ValidationReport validate_dataset(const LabeledDataset& dataset);

// New dataset holding the given rows, in the given order.
LabeledDataset subset_rows(const LabeledDataset& dataset,
                           std::span<const std::size_t> rows);

struct PredictionEntry {
    std::size_t sample_index = 0;
    double score = 0.0;
    int label = 0;
};

// (score, true label) pairs pooled across all folds of a plan; the input
// to every rank metric.
struct PredictionSet {
    std::vector<PredictionEntry> entries;

    std::size_t size() const { return entries.size(); }
    std::vector<double> scores() const;
    std::vector<int> labels() const;
};

}  // namespace rxval
