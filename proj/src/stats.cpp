#include "rxval/stats.hpp"

#include <cmath>

namespace rxval {

const char* to_string(Alternative alternative) {
    switch (alternative) {
        case Alternative::TwoSided: return "two-sided";
        case Alternative::Less: return "less";
        case Alternative::Greater: return "greater";
    }
    return "?";
}

namespace special {

namespace {

// Continued fraction for the incomplete beta, modified Lentz.
double beta_cf(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-15;
    constexpr int kMaxIter = 400;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;

    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double chi_squared_survival_even(std::size_t half_df, double x) {
    if (half_df == 0) return 1.0;
    if (x <= 0.0) return 1.0;
    const double y = 0.5 * x;
    // Q(k, y) = exp(-y) * sum_{j<k} y^j / j!, summed in log space.
    const double log_y = std::log(y);
    auto log_term = [&](std::size_t j) {
        return (j == 0) ? -y
                        : -y + static_cast<double>(j) * log_y -
                              std::lgamma(static_cast<double>(j) + 1.0);
    };
    double max_log = log_term(0);
    for (std::size_t j = 1; j < half_df; ++j) {
        max_log = std::max(max_log, log_term(j));
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < half_df; ++j) {
        sum += std::exp(log_term(j) - max_log);
    }
    const double log_p = max_log + std::log(sum);
    double p = std::exp(log_p);
    if (p > 1.0) p = 1.0;
    if (p < kMinPValue) p = kMinPValue;
    return p;
}

double normal_sf(double z) {
    double p = 0.5 * std::erfc(z / std::sqrt(2.0));
    if (p < kMinPValue) p = kMinPValue;
    if (p > 1.0) p = 1.0;
    return p;
}

double student_t_sf(double t, double df) {
    const double x = df / (df + t * t);
    const double two_sided = incomplete_beta(0.5 * df, 0.5, x);
    const double half = 0.5 * two_sided;
    return (t >= 0.0) ? half : 1.0 - half;
}

}  // namespace special

}  // namespace rxval
