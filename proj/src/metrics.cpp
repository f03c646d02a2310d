#include "rxval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "json.hpp"
#include "rxval/csv.hpp"

namespace rxval {

namespace {

struct ClassCounts {
    std::int64_t positives = 0;
    std::int64_t negatives = 0;
};

ClassCounts count_classes(std::span<const int> labels) {
    ClassCounts counts;
    for (int y : labels) {
        if (y == 1) {
            ++counts.positives;
        } else if (y == 0) {
            ++counts.negatives;
        } else {
            throw Error(ErrorKind::NonBinaryLabel, "label " + std::to_string(y));
        }
    }
    if (counts.positives == 0 || counts.negatives == 0) {
        throw Error(ErrorKind::SingleClass, "rank metrics need both classes present");
    }
    return counts;
}

void require_aligned(std::size_t scores, std::size_t labels) {
    if (scores != labels) {
        throw Error(ErrorKind::ShapeMismatch,
                    std::to_string(scores) + " scores vs " + std::to_string(labels) + " labels");
    }
}

std::vector<std::size_t> order_descending(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return order;
}

// 1-based midranks (average rank within tie groups), ascending order.
std::vector<double> midranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    std::vector<double> ranks(values.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double mid = 0.5 * static_cast<double>(i + j + 2);  // ranks i+1 .. j+1
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = mid;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double auroc(std::span<const double> scores, std::span<const int> labels) {
    require_aligned(scores.size(), labels.size());
    const ClassCounts counts = count_classes(labels);

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b];
    });

    // Twice the positive midrank sum stays integral: within a tie group
    // occupying 1-based ranks [lo, hi], twice the midrank is lo + hi.
    std::int64_t rank2_sum_pos = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        const std::int64_t twice_mid = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == 1) {
                rank2_sum_pos += twice_mid;
            }
        }
        i = j + 1;
    }
    const std::int64_t numerator =
        rank2_sum_pos - counts.positives * (counts.positives + 1);
    return static_cast<double>(numerator) /
           (2.0 * static_cast<double>(counts.positives) * static_cast<double>(counts.negatives));
}

double auroc(const PredictionSet& predictions) {
    return auroc(predictions.scores(), predictions.labels());
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
    require_aligned(scores.size(), labels.size());
    const ClassCounts counts = count_classes(labels);
    const auto order = order_descending(scores);

    RocCurve curve;
    curve.points.push_back(RocPoint{0.0, 0.0});
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == 1) {
                ++tp;
            } else {
                ++fp;
            }
        }
        curve.thresholds.push_back(scores[order[i]]);
        curve.points.push_back(RocPoint{
            static_cast<double>(fp) / static_cast<double>(counts.negatives),
            static_cast<double>(tp) / static_cast<double>(counts.positives)});
        i = j + 1;
    }
    return curve;
}

RocCurve roc_curve(const PredictionSet& predictions) {
    return roc_curve(predictions.scores(), predictions.labels());
}

PrCurve pr_curve(std::span<const double> scores, std::span<const int> labels) {
    require_aligned(scores.size(), labels.size());
    const ClassCounts counts = count_classes(labels);
    const auto order = order_descending(scores);

    PrCurve curve;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == 1) {
                ++tp;
            } else {
                ++fp;
            }
        }
        curve.thresholds.push_back(scores[order[i]]);
        curve.points.push_back(PrPoint{
            static_cast<double>(tp) / static_cast<double>(counts.positives),
            static_cast<double>(tp) / static_cast<double>(tp + fp)});
        i = j + 1;
    }
    return curve;
}

PrCurve pr_curve(const PredictionSet& predictions) {
    return pr_curve(predictions.scores(), predictions.labels());
}

double aupr(std::span<const double> scores, std::span<const int> labels) {
    const PrCurve curve = pr_curve(scores, labels);
    double area = 0.0;
    double prev_recall = 0.0;
    double prev_precision = curve.points.front().precision;  // constant left extension
    for (const PrPoint& point : curve.points) {
        area += (point.recall - prev_recall) * 0.5 * (point.precision + prev_precision);
        prev_recall = point.recall;
        prev_precision = point.precision;
    }
    return area;
}

double aupr(const PredictionSet& predictions) {
    return aupr(predictions.scores(), predictions.labels());
}

DeLongResult delong_compare(std::span<const double> scores_a,
                            std::span<const double> scores_b,
                            std::span<const int> labels) {
    require_aligned(scores_a.size(), labels.size());
    require_aligned(scores_b.size(), labels.size());
    const ClassCounts counts = count_classes(labels);
    const double m = static_cast<double>(counts.positives);
    const double f = static_cast<double>(counts.negatives);

    // Mid-rank structural components per score vector: V10 over positives,
    // V01 over negatives.
    struct Components {
        double auc = 0.0;
        std::vector<double> v10;
        std::vector<double> v01;
    };
    auto components = [&](std::span<const double> scores) {
        std::vector<double> pos_scores;
        std::vector<double> neg_scores;
        pos_scores.reserve(static_cast<std::size_t>(m));
        neg_scores.reserve(static_cast<std::size_t>(f));
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (labels[i] == 1) {
                pos_scores.push_back(scores[i]);
            } else {
                neg_scores.push_back(scores[i]);
            }
        }
        const auto all_ranks = midranks(scores);
        const auto pos_ranks = midranks(pos_scores);
        const auto neg_ranks = midranks(neg_scores);

        Components out;
        out.v10.reserve(pos_scores.size());
        out.v01.reserve(neg_scores.size());
        std::size_t pi = 0;
        std::size_t ni = 0;
        double pos_rank_sum = 0.0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (labels[i] == 1) {
                out.v10.push_back((all_ranks[i] - pos_ranks[pi]) / f);
                pos_rank_sum += all_ranks[i];
                ++pi;
            } else {
                out.v01.push_back(1.0 - (all_ranks[i] - neg_ranks[ni]) / m);
                ++ni;
            }
        }
        out.auc = (pos_rank_sum - m * (m + 1.0) / 2.0) / (m * f);
        return out;
    };

    const Components a = components(scores_a);
    const Components b = components(scores_b);

    auto covariance = [](const std::vector<double>& x, const std::vector<double>& y) {
        const std::size_t n = x.size();
        if (n < 2) return 0.0;
        double mx = 0.0;
        double my = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            c += (x[i] - mx) * (y[i] - my);
        }
        return c / static_cast<double>(n - 1);
    };

    const double s10_aa = covariance(a.v10, a.v10);
    const double s10_bb = covariance(b.v10, b.v10);
    const double s10_ab = covariance(a.v10, b.v10);
    const double s01_aa = covariance(a.v01, a.v01);
    const double s01_bb = covariance(b.v01, b.v01);
    const double s01_ab = covariance(a.v01, b.v01);

    DeLongResult result;
    result.auroc_a = a.auc;
    result.auroc_b = b.auc;
    result.variance = (s10_aa + s10_bb - 2.0 * s10_ab) / m +
                      (s01_aa + s01_bb - 2.0 * s01_ab) / f;
    result.test.alternative = Alternative::TwoSided;
    result.test.n = labels.size();
    result.test.df = 0.0;
    if (!(result.variance > 0.0)) {
        // Identical rankings: no evidence either way.
        result.variance = std::max(result.variance, 0.0);
        result.test.statistic = 0.0;
        result.test.p_value = 1.0;
        return result;
    }
    const double z = (a.auc - b.auc) / std::sqrt(result.variance);
    result.test.statistic = z;
    result.test.p_value = std::min(1.0, 2.0 * special::normal_sf(std::fabs(z)));
    if (result.test.p_value < kMinPValue) result.test.p_value = kMinPValue;
    return result;
}

TestResult t_test_one_sample(std::span<const double> values, double mu0,
                             Alternative alternative) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw Error(ErrorKind::TooFewValues, "one-sample t-test needs >= 2 values");
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double variance = ss / static_cast<double>(n - 1);
    if (variance <= 0.0) {
        throw Error(ErrorKind::ZeroVariance, "sample variance is zero");
    }
    const double se = std::sqrt(variance / static_cast<double>(n));
    const double t = (mean - mu0) / se;
    const double df = static_cast<double>(n - 1);

    TestResult result;
    result.statistic = t;
    result.alternative = alternative;
    result.df = df;
    result.n = n;
    switch (alternative) {
        case Alternative::TwoSided:
            result.p_value = special::incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
            break;
        case Alternative::Greater:
            result.p_value = special::student_t_sf(t, df);
            break;
        case Alternative::Less:
            result.p_value = 1.0 - special::student_t_sf(t, df);
            break;
    }
    if (result.p_value < kMinPValue) result.p_value = kMinPValue;
    if (result.p_value > 1.0) result.p_value = 1.0;
    return result;
}

TestResult fisher_combine(std::span<const double> p_values) {
    if (p_values.empty()) {
        throw Error(ErrorKind::TooFewValues, "no p-values to combine");
    }
    double statistic = 0.0;
    for (double p : p_values) {
        if (!(p > 0.0) || p > 1.0) {
            throw Error(ErrorKind::InvalidP, "p-values must lie in (0, 1]");
        }
        statistic += -2.0 * std::log(p);
    }
    TestResult result;
    result.statistic = statistic;
    result.alternative = Alternative::Greater;
    result.df = 2.0 * static_cast<double>(p_values.size());
    result.n = p_values.size();
    result.p_value = special::chi_squared_survival_even(p_values.size(), statistic);
    return result;
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
    out << "threshold,fpr,tpr\n";
    out << "inf," << format_double(curve.points[0].fpr) << ','
        << format_double(curve.points[0].tpr) << '\n';
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        out << format_double(curve.thresholds[i]) << ','
            << format_double(curve.points[i + 1].fpr) << ','
            << format_double(curve.points[i + 1].tpr) << '\n';
    }
}

void write_pr_csv(std::ostream& out, const PrCurve& curve) {
    out << "threshold,recall,precision\n";
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        out << format_double(curve.thresholds[i]) << ','
            << format_double(curve.points[i].recall) << ','
            << format_double(curve.points[i].precision) << '\n';
    }
}

std::string test_result_to_json(const TestResult& result) {
    nlohmann::ordered_json root;
    root["statistic"] = result.statistic;
    root["p_value"] = result.p_value;
    root["alternative"] = to_string(result.alternative);
    if (result.df > 0.0) {
        root["df"] = result.df;
    }
    root["n"] = result.n;
    return root.dump();
}

}  // namespace rxval
