#include "tangle/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tangle {

SampleSummary mean_sd(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_sd on an empty sample");
  SampleSummary s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

namespace {

// Continued-fraction evaluation of the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-15;
  constexpr double kTiny = 1e-300;

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

TTestResult finish_test(double mean_diff, double se2, double df) {
  TTestResult r;
  r.df = df;
  if (se2 <= 0) {
    // Both samples constant: identical means are a perfect tie, different
    // means separate with certainty.
    if (mean_diff == 0) {
      r.t = 0;
      r.p = 1;
    } else {
      r.t = mean_diff > 0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
      r.p = 0;
    }
    return r;
  }
  r.t = mean_diff / std::sqrt(se2);
  const double lower = student_t_cdf(-std::fabs(r.t), df);
  r.p = std::min(1.0, 2.0 * lower);
  return r;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double x, double df) {
  if (df <= 0) throw std::invalid_argument("degrees of freedom must be positive");
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double ib = incomplete_beta(df / 2.0, 0.5, df / (df + x * x));
  return x >= 0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("t-test needs at least two values per sample");
  }
  const SampleSummary sa = mean_sd(a);
  const SampleSummary sb = mean_sd(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sa.sd * sa.sd / na;
  const double vb = sb.sd * sb.sd / nb;
  const double se2 = va + vb;
  double df = na + nb - 2;  // convention for the degenerate zero-variance case
  if (se2 > 0) {
    df = se2 * se2 / (va * va / (na - 1) + vb * vb / (nb - 1));
  }
  return finish_test(sa.mean - sb.mean, se2, df);
}

TTestResult pooled_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("t-test needs at least two values per sample");
  }
  const SampleSummary sa = mean_sd(a);
  const SampleSummary sb = mean_sd(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double df = na + nb - 2;
  const double pooled =
      ((na - 1) * sa.sd * sa.sd + (nb - 1) * sb.sd * sb.sd) / df;
  const double se2 = pooled * (1.0 / na + 1.0 / nb);
  return finish_test(sa.mean - sb.mean, se2, df);
}

}  // namespace tangle
