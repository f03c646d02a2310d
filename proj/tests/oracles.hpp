// Test-only reference implementations, deliberately written along different
// algorithmic routes than the library code they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "rxval/dataset.hpp"

namespace oracle {

// auROC by direct pair counting: (#{pos>neg} + 0.5 #{pos=neg}) / (T*F).
inline double auroc_pairwise(std::span<const double> scores, std::span<const int> labels) {
    double wins = 0.0;
    std::size_t t = 0;
    std::size_t f = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        ++t;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] != 0) continue;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    for (int y : labels) {
        f += static_cast<std::size_t>(y == 0);
    }
    return wins / (static_cast<double>(t) * static_cast<double>(f));
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double eps, double whole, int depth) {
    const double c = 0.5 * (a + b);
    const double left = simpson(f, a, c);
    const double right = simpson(f, c, b);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * eps) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, c, 0.5 * eps, left, depth - 1) +
           adaptive_simpson(f, c, b, 0.5 * eps, right, depth - 1);
}

}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-12) {
    return detail::adaptive_simpson(f, a, b, eps, detail::simpson(f, a, b), 60);
}

// Two-sided Student-t p-value by numerical integration of the density over
// the finite interval [0, |t|]: p = 1 - 2 * integral.
inline double t_two_sided_p_quadrature(double t, double df) {
    const double log_c = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                         0.5 * std::log(df * M_PI);
    auto pdf = [&](double x) {
        return std::exp(log_c - 0.5 * (df + 1.0) * std::log1p(x * x / df));
    };
    const double body = integrate(pdf, 0.0, std::fabs(t));
    double p = 1.0 - 2.0 * body;
    return p < 0.0 ? 0.0 : p;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Kolmogorov-Smirnov distance to Uniform[0,1].
inline double ks_uniform_distance(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(values[i] - lo, hi - values[i]));
    }
    return d;
}

// Generic convex-optimizer oracle for L2 logistic regression: plain
// gradient descent on central finite differences of the loss
//   (1/m) sum_i [log(1 + e^z_i) - y_i z_i]  +  (lambda/2) ||w||^2.
// Slow but independent of the analytic gradient/Hessian path. Returns d
// weights followed by the intercept.
inline std::vector<double> logistic_fd_descent(const rxval::Matrix& x,
                                               const std::vector<int>& y, double lambda,
                                               int max_iters = 200000) {
    const std::size_t d = x.cols;
    std::vector<double> theta(d + 1, 0.0);
    auto loss = [&](const std::vector<double>& params) {
        double total = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) {
            double z = params[d];
            for (std::size_t c = 0; c < d; ++c) {
                z += params[c] * x.at(i, c);
            }
            // log(1 + e^z) - y z, naive form is fine at toy scale
            const double softplus = (z > 30.0) ? z : std::log1p(std::exp(z));
            total += softplus - y[i] * z;
        }
        total /= static_cast<double>(x.rows);
        double reg = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            reg += params[c] * params[c];
        }
        return total + 0.5 * lambda * reg;
    };

    const double h = 1e-6;
    double step = 1.0;
    double current = loss(theta);
    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<double> grad(d + 1, 0.0);
        double norm = 0.0;
        for (std::size_t c = 0; c <= d; ++c) {
            std::vector<double> plus = theta;
            std::vector<double> minus = theta;
            plus[c] += h;
            minus[c] -= h;
            grad[c] = (loss(plus) - loss(minus)) / (2.0 * h);
            norm += grad[c] * grad[c];
        }
        norm = std::sqrt(norm);
        if (norm < 1e-9) {
            break;
        }
        bool moved = false;
        for (int back = 0; back < 50; ++back) {
            std::vector<double> trial = theta;
            for (std::size_t c = 0; c <= d; ++c) {
                trial[c] -= step * grad[c];
            }
            const double trial_loss = loss(trial);
            if (trial_loss < current) {
                theta = std::move(trial);
                current = trial_loss;
                moved = true;
                step *= 1.3;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            break;
        }
    }
    return theta;
}

// Exhaustive KNN: full sort of true (not squared) distances, index tiebreak.
inline double knn_fraction_full_sort(const rxval::Matrix& train,
                                     const std::vector<int>& labels,
                                     std::span<const double> query, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> all;
    all.reserve(train.rows);
    for (std::size_t i = 0; i < train.rows; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < train.cols; ++c) {
            const double diff = query[c] - train.at(i, c);
            s += diff * diff;
        }
        all.emplace_back(std::sqrt(s), i);
    }
    std::sort(all.begin(), all.end());
    const std::size_t kk = std::min(k, train.rows);
    double hits = 0.0;
    for (std::size_t i = 0; i < kk; ++i) {
        hits += labels[all[i].second];
    }
    return hits / static_cast<double>(kk);
}

}  // namespace oracle
