#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rxval/dataset.hpp"

namespace rxval {

enum class ModelKind { NegativeMean, Mean, Logistic, Knn };

// Declarative model description. String form (CLI/config):
//   negmean | mean | logistic:lambda=1.0 | knn:k=5, suffix +zscore for the
//   post-hoc standardization wrapper.
struct PredictorSpec {
    ModelKind kind = ModelKind::NegativeMean;
    double lambda = 1.0;  // L2 strength, Logistic only; larger = stronger
    std::size_t k = 5;    // KNN only
    bool posthoc_zscore = false;

    static PredictorSpec parse(const std::string& text);
    std::string to_string() const;
    // Name without the lambda parameter; lambda travels in its own column.
    std::string family() const;
};

struct FittedModel {
    PredictorSpec spec;
    double train_mean = 0.0;       // dummies
    std::vector<double> weights;   // logistic
    double intercept = 0.0;        // logistic
    Matrix train_features;         // knn
    std::vector<int> train_labels; // knn
};

// NegativeMean/Mean store the training label mean. Logistic minimizes
//   (1/m) sum_i log(1 + exp(-z_i))-style log-loss + (lambda/2) ||w||^2
// with the intercept unpenalized; larger lambda means stronger
// regularization (inverse-parameter conventions map as lambda = 1/(C*m)).
// Solved by damped Newton iteration to gradient norm 1e-8 (cap 10000
// iterations). A single-class training fold clamps the intercept to +-15
// instead of erroring. KNN retains the training set.
FittedModel fit(const PredictorSpec& spec, const LabeledDataset& train);

// NegativeMean -> constant -mean; Mean -> constant +mean; Logistic ->
// sigmoid(w.x + b) per row; KNN -> positive fraction among the k nearest
// rows by Euclidean distance, distance ties broken by smaller training
// index, k capped at the training size.
std::vector<double> predict(const FittedModel& model, const Matrix& test_features);

// (s - mu) / sigma where mu, sigma are the mean and population standard
// deviation of the model's scores on its own training rows; all zeros when
// sigma < 1e-12.
std::vector<double> posthoc_standardize(const FittedModel& model,
                                        const LabeledDataset& train,
                                        const Matrix& test_features);

}  // namespace rxval
