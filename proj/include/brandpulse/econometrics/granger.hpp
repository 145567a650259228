#pragma once

// Bivariate (optionally conditioned) Granger causality, Wald chi-squared form:
//
//   restricted:   d_t = a + sum_i b_i d_{t-i}                   (+ conditioning lags)
//   unrestricted: d_t = a + sum_i b_i d_{t-i} + sum_i c_i x_{t-i} (+ conditioning lags)
//   chi2 = n_eff (RSS_r - RSS_u) / RSS_u,  df = max_lag
//
// where d is y or its first difference.

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "brandpulse/econometrics/ols.hpp"
#include "brandpulse/econometrics/series.hpp"
#include "brandpulse/econometrics/stats.hpp"

namespace brandpulse::econ {

struct GrangerOptions {
  bool difference_dependent = false;
  std::vector<Series> conditioning;  // extra series whose lags enter both models
};

struct GrangerResult {
  double chi2 = 0.0;
  std::size_t df = 0;
  double p = 1.0;
  std::size_t lag_order = 0;
  std::size_t n_eff = 0;
  double rss_restricted = 0.0;
  double rss_unrestricted = 0.0;
};

inline GrangerResult granger_test(const Series& y, const Series& x, std::size_t max_lag,
                                  const GrangerOptions& opts = {}) {
  if (max_lag < 1) throw AnalysisError("Granger max_lag must be >= 1");
  if (x.size() != y.size()) throw AnalysisError("Granger series are not on the same week grid");
  const Series dep = opts.difference_dependent ? first_difference(y) : y;

  std::vector<const Series*> own{&dep};
  std::vector<const Series*> cond;
  for (const auto& c : opts.conditioning) {
    if (c.size() != y.size()) throw AnalysisError("conditioning series '" + c.name + "' is off-grid");
    cond.push_back(&c);
  }

  auto usable = [&](std::size_t t) {
    if (t < max_lag || !dep[t]) return false;
    for (std::size_t i = 1; i <= max_lag; ++i) {
      if (!dep[t - i] || !x[t - i]) return false;
      for (const auto* c : cond) {
        if (!(*c)[t - i]) return false;
      }
    }
    return true;
  };
  std::vector<std::size_t> rows;
  for (std::size_t t = 0; t < dep.size(); ++t) {
    if (usable(t)) rows.push_back(t);
  }
  const std::size_t n_eff = rows.size();
  const std::size_t p_r = 1 + max_lag * (1 + cond.size());
  const std::size_t p_u = p_r + max_lag;
  if (n_eff <= p_u) {
    throw AnalysisError("Granger test needs more than " + std::to_string(p_u) + " usable observations, got " +
                        std::to_string(n_eff));
  }

  const auto n = static_cast<Eigen::Index>(n_eff);
  Eigen::MatrixXd Xr(n, static_cast<Eigen::Index>(p_r));
  Eigen::MatrixXd Xu(n, static_cast<Eigen::Index>(p_u));
  Eigen::VectorXd v(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t t = rows[static_cast<std::size_t>(r)];
    v(r) = *dep[t];
    Eigen::Index c = 0;
    Xr(r, c) = 1.0;
    Xu(r, c) = 1.0;
    ++c;
    for (std::size_t i = 1; i <= max_lag; ++i, ++c) Xr(r, c) = Xu(r, c) = *dep[t - i];
    for (const auto* s : cond) {
      for (std::size_t i = 1; i <= max_lag; ++i, ++c) Xr(r, c) = Xu(r, c) = *(*s)[t - i];
    }
    for (std::size_t i = 1; i <= max_lag; ++i, ++c) Xu(r, c) = *x[t - i];
  }

  const OlsResult restricted = ols_fit(Xr, v, true);
  const OlsResult unrestricted = ols_fit(Xu, v, true);
  if (unrestricted.rss <= 0.0) throw AnalysisError("Granger unrestricted model fits exactly; statistic undefined");

  GrangerResult out;
  out.df = max_lag;
  out.lag_order = max_lag;
  out.n_eff = n_eff;
  out.rss_restricted = restricted.rss;
  out.rss_unrestricted = unrestricted.rss;
  out.chi2 = std::max(0.0, static_cast<double>(n_eff) * (restricted.rss - unrestricted.rss) / unrestricted.rss);
  out.p = chi_squared_sf(out.chi2, static_cast<double>(max_lag));
  return out;
}

}  // namespace brandpulse::econ
