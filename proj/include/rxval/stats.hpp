#pragma once

#include <cstddef>

namespace rxval {

enum class Alternative { TwoSided, Less, Greater };

const char* to_string(Alternative alternative);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    Alternative alternative = Alternative::TwoSided;
    double df = 0.0;    // degrees of freedom, when applicable
    std::size_t n = 0;  // sample count, when applicable
};

// Reported p-values are floored here, never 0.
inline constexpr double kMinPValue = 1e-300;

namespace special {

// Regularized incomplete beta I_x(a, b), continued fraction (Lentz).
double incomplete_beta(double a, double b, double x);

// Survival of a chi-squared with 2k degrees of freedom at x; the
// regularized upper incomplete gamma Q(k, x/2), exact finite sum for
// integer k, evaluated in log space.
double chi_squared_survival_even(std::size_t half_df, double x);

// Upper tail of the standard normal.
double normal_sf(double z);

// P(T > t) for Student's t with df degrees of freedom, via the
// regularized incomplete beta function.
double student_t_sf(double t, double df);

}  // namespace special

}  // namespace rxval
