#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "brandpulse/econometrics/series.hpp"
#include "brandpulse/econometrics/stats.hpp"

namespace brandpulse::econ {

struct OlsResult {
  std::vector<std::string> names;  // "(intercept)" first when fitted with one
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<double> t_stats;
  std::vector<double> p_values;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double rss = 0.0;
  double tss = 0.0;
  std::vector<double> residuals;
  std::vector<double> fitted;
  std::optional<double> durbin_watson;  // missing for an exact fit
  double condition_number = 0.0;
  std::size_t n = 0;  // observations used
  std::size_t k = 0;  // regressors, intercept excluded
  bool intercept = true;
  std::vector<std::size_t> rows;  // week indices used
  std::size_t excluded = 0;       // weeks dropped by listwise deletion
};

/// Least squares on an explicit design matrix. When `intercept` is set the
/// first column of `X` must be the constant column; R^2 is then centered,
/// otherwise uncentered.
inline OlsResult ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool intercept,
                         std::vector<std::string> names = {}) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto p = static_cast<std::size_t>(X.cols());
  if (n <= p) {
    throw AnalysisError("insufficient observations: n=" + std::to_string(n) + " for " + std::to_string(p) +
                        " parameters");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (static_cast<std::size_t>(qr.rank()) < p) {
    throw AnalysisError("design matrix is rank-deficient (rank " + std::to_string(qr.rank()) + " < " +
                        std::to_string(p) + "); regressors are collinear");
  }
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd fitted = X * beta;
  const Eigen::VectorXd resid = y - fitted;

  OlsResult out;
  out.n = n;
  out.intercept = intercept;
  out.k = intercept ? p - 1 : p;
  out.rss = resid.squaredNorm();
  if (intercept) {
    out.tss = (y.array() - y.mean()).square().sum();
  } else {
    out.tss = y.squaredNorm();
  }
  if (out.k == 0 && intercept) {
    out.r2 = 0.0;
    out.adj_r2 = 0.0;
  } else {
    out.r2 = out.tss > 0.0 ? 1.0 - out.rss / out.tss : 1.0;
    const double dof_total = intercept ? static_cast<double>(n - 1) : static_cast<double>(n);
    out.adj_r2 = 1.0 - (1.0 - out.r2) * dof_total / static_cast<double>(n - p);
  }

  // (X'X)^{-1} = P R^{-1} R^{-T} P^T
  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                                                        static_cast<Eigen::Index>(p)));
  const Eigen::MatrixXd perm = qr.colsPermutation();
  const Eigen::MatrixXd xtx_inv = perm * (Rinv * Rinv.transpose()) * perm.transpose();
  const double df = static_cast<double>(n - p);
  const double sigma2 = out.rss / df;

  out.names = std::move(names);
  out.names.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double b = beta(jj);
    const double se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(jj, jj)));
    double t = 0.0;
    if (se > 0.0) {
      t = b / se;
    } else if (b != 0.0) {
      t = std::copysign(INFINITY, b);
    }
    out.coefficients.push_back(b);
    out.std_errors.push_back(se);
    out.t_stats.push_back(t);
    out.p_values.push_back(student_t_two_sided_p(t, df));
  }

  out.residuals.assign(resid.data(), resid.data() + resid.size());
  out.fitted.assign(fitted.data(), fitted.data() + fitted.size());
  // Residuals at rounding level carry no autocorrelation information.
  if (out.rss > 1e-24 * std::max(out.tss, y.squaredNorm())) out.durbin_watson = econ::durbin_watson(out.residuals);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
  const auto& sv = svd.singularValues();
  out.condition_number = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  return out;
}

/// Regresses y on the given series (plus an intercept) over the weeks where
/// all of them are present.
inline OlsResult ols(const Series& y, const std::vector<Series>& X, bool intercept = true) {
  std::vector<const Series*> cols{&y};
  for (const auto& x : X) cols.push_back(&x);
  const Listwise lw = complete_rows(cols);
  const std::size_t n = lw.rows.size();
  const std::size_t p = X.size() + (intercept ? 1 : 0);
  if (p == 0) throw AnalysisError("regression has no terms");
  if (n <= p) {
    throw AnalysisError("insufficient observations after listwise deletion: n=" + std::to_string(n) + " for " +
                        std::to_string(p) + " parameters");
  }
  Eigen::MatrixXd D(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  std::vector<std::string> names;
  if (intercept) names.emplace_back("(intercept)");
  for (const auto& x : X) names.push_back(x.name);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const std::size_t t = lw.rows[i];
    v(r) = *y[t];
    Eigen::Index c = 0;
    if (intercept) D(r, c++) = 1.0;
    for (const auto& x : X) D(r, c++) = *x[t];
  }
  OlsResult out = ols_fit(D, v, intercept, std::move(names));
  out.rows = lw.rows;
  out.excluded = lw.excluded;
  return out;
}

}  // namespace brandpulse::econ
