#pragma once

#include <span>
#include <vector>

namespace tangle {

struct SampleSummary {
  double mean = 0;
  double sd = 0;  // sample standard deviation (n-1); zero for a single value
};

SampleSummary mean_sd(std::span<const double> values);

struct TTestResult {
  double t = 0;
  double df = 0;
  double p = 1;  // two-sided
};

// Welch's two-sample t-test (unequal variances, Welch-Satterthwaite degrees
// of freedom). Degenerate zero-variance inputs: equal means give t=0, p=1;
// unequal means give an infinite statistic and p=0. Requires two values per
// side.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

// Pooled-variance Student's t-test, same conventions.
TTestResult pooled_t_test(std::span<const double> a, std::span<const double> b);

// P(T <= x) for Student's t distribution with df degrees of freedom.
double student_t_cdf(double x, double df);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

}  // namespace tangle
