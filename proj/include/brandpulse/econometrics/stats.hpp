#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "brandpulse/econometrics/series.hpp"

namespace brandpulse::econ {

inline double student_t_two_sided_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))), 0.0, 1.0);
}

inline double chi_squared_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const boost::math::chi_squared dist(df);
  return std::clamp(boost::math::cdf(boost::math::complement(dist, x)), 0.0, 1.0);
}

/// "*" for p < .05, "**" for p < .01.
inline const char* significance_stars(double p) {
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  double p = 1.0;
};

/// Pearson product-moment correlation over the weeks where both series are
/// present. The p-value is two-sided, from t = r sqrt((n-2)/(1-r^2)).
inline CorrelationResult pearson(const Series& x, const Series& y) {
  const auto rows = complete_rows({&x, &y}).rows;
  const std::size_t n = rows.size();
  if (n < 3) throw AnalysisError("correlation needs at least 3 paired observations, got " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (auto t : rows) {
    mx += *x[t];
    my += *y[t];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (auto t : rows) {
    const double dx = *x[t] - mx;
    const double dy = *y[t] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw AnalysisError("correlation undefined: zero variance in '" + (sxx == 0.0 ? x.name : y.name) + "'");
  }
  CorrelationResult out;
  out.n = n;
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::fabs(out.r) >= 1.0) {
    out.p = 0.0;
  } else {
    const double df = static_cast<double>(n - 2);
    out.p = student_t_two_sided_p(out.r * std::sqrt(df / (1.0 - out.r * out.r)), df);
  }
  return out;
}

/// Sum of squared successive differences over the residual sum of squares.
inline double durbin_watson(std::span<const double> residuals) {
  if (residuals.size() < 2) throw AnalysisError("Durbin-Watson needs at least 2 residuals");
  double num = 0.0, den = residuals[0] * residuals[0];
  for (std::size_t t = 1; t < residuals.size(); ++t) {
    const double d = residuals[t] - residuals[t - 1];
    num += d * d;
    den += residuals[t] * residuals[t];
  }
  if (den == 0.0) throw AnalysisError("Durbin-Watson undefined for all-zero residuals");
  return num / den;
}

}  // namespace brandpulse::econ
