#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rxval/dataset.hpp"
#include "rxval/stats.hpp"

namespace rxval {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

// Descending-threshold sweep. points.front() is (0,0) and points.back() is
// (1,1); thresholds[i] produced points[i + 1].
struct RocCurve {
    std::vector<RocPoint> points;
    std::vector<double> thresholds;
};

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
};

// One point per distinct threshold in descending score order; the final
// point always has recall 1.
struct PrCurve {
    std::vector<PrPoint> points;
    std::vector<double> thresholds;
};

// Mann-Whitney auROC with the 0.5-credit tie convention:
//   (#{pos > neg} + 0.5 * #{pos = neg}) / (T * F)
// computed exactly through integer midrank sums.
double auroc(std::span<const double> scores, std::span<const int> labels);
double auroc(const PredictionSet& predictions);

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);
RocCurve roc_curve(const PredictionSet& predictions);

PrCurve pr_curve(std::span<const double> scores, std::span<const int> labels);
PrCurve pr_curve(const PredictionSet& predictions);

// Trapezoidal area under the PR curve. The first swept point is the left
// edge: if its recall is positive, the curve extends at constant precision
// back to recall 0. No (0,1) anchor is ever added. This convention is
// normative; step-wise average precision gives different values.
double aupr(std::span<const double> scores, std::span<const int> labels);
double aupr(const PredictionSet& predictions);

struct DeLongResult {
    double auroc_a = 0.0;
    double auroc_b = 0.0;
    double variance = 0.0;  // Var(auroc_a - auroc_b)
    TestResult test;        // z statistic, two-sided normal p
};

// DeLong's test for two correlated auROCs over the same labels, in the
// mid-rank structural-components formulation. Identical rankings have zero
// variance and report z = 0, p = 1.
DeLongResult delong_compare(std::span<const double> scores_a,
                            std::span<const double> scores_b,
                            std::span<const int> labels);

TestResult t_test_one_sample(std::span<const double> values, double mu0,
                             Alternative alternative);

// Fisher's method: X = -2 sum(ln p_i) ~ chi-squared with 2k df.
TestResult fisher_combine(std::span<const double> p_values);

// CSV columns: threshold,fpr,tpr (the (0,0) anchor gets threshold inf).
void write_roc_csv(std::ostream& out, const RocCurve& curve);
// CSV columns: threshold,recall,precision.
void write_pr_csv(std::ostream& out, const PrCurve& curve);

std::string test_result_to_json(const TestResult& result);

}  // namespace rxval
