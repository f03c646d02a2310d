#include "rxval/fold_plan.hpp"

#include <string>
#include <vector>

#include "json.hpp"

namespace rxval {

std::vector<std::size_t> Fold::train_indices(std::size_t n) const {
    std::vector<char> removed(n, 0);
    for (std::size_t i : test_indices) {
        removed[i] = 1;
    }
    for (std::size_t i : excluded_indices) {
        removed[i] = 1;
    }
    std::vector<std::size_t> out;
    out.reserve(n - test_indices.size() - excluded_indices.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!removed[i]) {
            out.push_back(i);
        }
    }
    return out;
}

void validate_plan(const FoldPlan& plan) {
    const std::size_t n = plan.n;
    std::vector<char> tested(n, 0);
    std::size_t tested_total = 0;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const Fold& fold = plan.folds[f];
        if (fold.test_indices.empty()) {
            throw Error(ErrorKind::Config, "fold " + std::to_string(f) + " has an empty test set");
        }
        std::vector<char> in_fold(n, 0);
        for (std::size_t i : fold.test_indices) {
            if (i >= n) {
                throw Error(ErrorKind::Config, "fold " + std::to_string(f) + ": test index out of range");
            }
            if (tested[i]) {
                throw Error(ErrorKind::Config, "sample " + std::to_string(i) + " tested more than once");
            }
            tested[i] = 1;
            in_fold[i] = 1;
            ++tested_total;
        }
        for (std::size_t i : fold.excluded_indices) {
            if (i >= n) {
                throw Error(ErrorKind::Config, "fold " + std::to_string(f) + ": excluded index out of range");
            }
            if (in_fold[i]) {
                throw Error(ErrorKind::Config,
                            "fold " + std::to_string(f) + ": index " + std::to_string(i) +
                                " is both tested and excluded");
            }
            in_fold[i] = 1;
        }
    }
    if (tested_total != n) {
        throw Error(ErrorKind::Config,
                    "test sets cover " + std::to_string(tested_total) + " of " +
                        std::to_string(n) + " samples");
    }
}

std::vector<double> training_label_means(const FoldPlan& plan,
                                         std::span<const int> labels) {
    if (labels.size() != plan.n) {
        throw Error(ErrorKind::ShapeMismatch,
                    "plan is for n=" + std::to_string(plan.n) + " but got " +
                        std::to_string(labels.size()) + " labels");
    }
    long long total = 0;
    for (int y : labels) {
        total += y;
    }
    std::vector<double> means;
    means.reserve(plan.folds.size());
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const Fold& fold = plan.folds[f];
        long long sum = total;
        std::size_t count = plan.n;
        for (std::size_t i : fold.test_indices) {
            sum -= labels[i];
            --count;
        }
        for (std::size_t i : fold.excluded_indices) {
            sum -= labels[i];
            --count;
        }
        if (count == 0) {
            throw Error(ErrorKind::EmptyTrainingSet,
                        "fold " + std::to_string(f) + " has no training samples");
        }
        means.push_back(static_cast<double>(sum) / static_cast<double>(count));
    }
    return means;
}

std::string plan_to_json(const FoldPlan& plan) {
    nlohmann::ordered_json root;
    root["n"] = plan.n;
    nlohmann::ordered_json folds = nlohmann::ordered_json::array();
    for (const Fold& fold : plan.folds) {
        nlohmann::ordered_json f;
        f["test"] = fold.test_indices;
        f["excluded"] = fold.excluded_indices;
        folds.push_back(std::move(f));
    }
    root["folds"] = std::move(folds);
    return root.dump();
}

FoldPlan plan_from_json(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, std::string("fold plan JSON: ") + e.what());
    }
    FoldPlan plan;
    try {
        plan.n = root.at("n").get<std::size_t>();
        for (const auto& f : root.at("folds")) {
            Fold fold;
            fold.test_indices = f.at("test").get<std::vector<std::size_t>>();
            if (f.contains("excluded")) {
                fold.excluded_indices = f.at("excluded").get<std::vector<std::size_t>>();
            }
            plan.folds.push_back(std::move(fold));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, std::string("fold plan JSON: ") + e.what());
    }
    validate_plan(plan);
    return plan;
}

}  // namespace rxval
