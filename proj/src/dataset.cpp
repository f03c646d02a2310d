#include "rxval/dataset.hpp"

#include <string>

namespace rxval {

ValidationReport validate_dataset(const LabeledDataset& dataset) {
    const std::size_t n = dataset.labels.size();
    if (dataset.features.rows != n) {
        throw Error(ErrorKind::ShapeMismatch,
                    "feature rows (" + std::to_string(dataset.features.rows) +
                        ") != label count (" + std::to_string(n) + ")");
    }
    if (dataset.features.values.size() != dataset.features.rows * dataset.features.cols) {
        throw Error(ErrorKind::ShapeMismatch, "feature storage does not match rows*cols");
    }
    if (!dataset.sample_ids.empty() && dataset.sample_ids.size() != n) {
        throw Error(ErrorKind::ShapeMismatch,
                    "sample_id count (" + std::to_string(dataset.sample_ids.size()) +
                        ") != label count (" + std::to_string(n) + ")");
    }

    ValidationReport report;
    for (std::size_t i = 0; i < n; ++i) {
        const int label = dataset.labels[i];
        if (label == 1) {
            ++report.positives;
        } else if (label == 0) {
            ++report.negatives;
        } else {
            throw Error(ErrorKind::NonBinaryLabel,
                        "label " + std::to_string(label) + " at sample " +
                            std::to_string(i) + " is not 0 or 1");
        }
    }
    report.single_class = (report.positives == 0 || report.negatives == 0);
    return report;
}

LabeledDataset subset_rows(const LabeledDataset& dataset,
                           std::span<const std::size_t> rows) {
    LabeledDataset out;
    const std::size_t d = dataset.features.cols;
    out.features = Matrix::zeros(rows.size(), d);
    out.labels.reserve(rows.size());
    if (!dataset.sample_ids.empty()) {
        out.sample_ids.reserve(rows.size());
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        for (std::size_t c = 0; c < d; ++c) {
            out.features.at(i, c) = dataset.features.at(r, c);
        }
        out.labels.push_back(dataset.labels[r]);
        if (!dataset.sample_ids.empty()) {
            out.sample_ids.push_back(dataset.sample_ids[r]);
        }
    }
    return out;
}

std::vector<double> PredictionSet::scores() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& entry : entries) {
        out.push_back(entry.score);
    }
    return out;
}

std::vector<int> PredictionSet::labels() const {
    std::vector<int> out;
    out.reserve(entries.size());
    for (const auto& entry : entries) {
        out.push_back(entry.label);
    }
    return out;
}

}  // namespace rxval
