#pragma once

// The full analysis battery over a feature panel: lagged correlations with
// price, Granger tests against the (differenced) price, and a declarative
// set of regression models compared on adjusted R^2.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "brandpulse/csv.hpp"
#include "brandpulse/econometrics/granger.hpp"
#include "brandpulse/econometrics/ols.hpp"
#include "brandpulse/econometrics/panel.hpp"
#include "brandpulse/econometrics/stats.hpp"

namespace brandpulse::econ {

struct ModelTerm {
  std::string column;
  std::size_t lag = 0;

  bool operator==(const ModelTerm&) const = default;
};

struct ModelSpec {
  std::string name;
  std::vector<ModelTerm> terms;

  bool operator==(const ModelSpec&) const = default;
};

/// Block models 1-7 and the combined model 8 with their default lags.
inline std::vector<ModelSpec> default_models() {
  return {
      {"model_1", {{"control_index", 0}}},
      {"model_2", {{"complexity", 0}, {"emotionality", 1}, {"sentiment", 2}}},
      {"model_3", {{"activity_words", 1}}},
      {"model_4", {{"activity", 0}, {"group_betweenness", 2}}},
      {"model_5", {{"group_degree", 0}}},
      {"model_6", {{"focal_betweenness", 0}}},
      {"model_7", {{"focal_degree", 0}}},
      {"model_8",
       {{"control_index", 0}, {"sentiment", 2}, {"activity_words", 1}, {"group_betweenness", 2},
        {"focal_betweenness", 0}}},
  };
}

struct BatteryConfig {
  std::vector<std::size_t> correlation_lags{0, 1, 2};
  std::size_t granger_max_lag = 3;
  bool difference_price = true;
  std::vector<std::string> granger_conditioning;
  std::vector<ModelSpec> models = default_models();
  std::string baseline_model = "model_1";
  std::string combined_model = "model_8";

  bool operator==(const BatteryConfig&) const = default;
};

struct CorrelationCell {
  std::string predictor;
  std::size_t lag = 0;
  std::optional<CorrelationResult> result;
  std::string error;
};

struct GrangerCell {
  std::string predictor;
  std::optional<GrangerResult> result;
  std::string error;
};

struct ModelReport {
  ModelSpec spec;
  std::optional<OlsResult> result;
  std::string error;
};

struct AnalysisReport {
  std::vector<CorrelationCell> correlations;
  std::vector<GrangerCell> granger;
  std::vector<ModelReport> models;
  std::optional<double> incremental_adj_r2;  // combined minus baseline

  const ModelReport* model(std::string_view name) const {
    for (const auto& m : models) {
      if (m.spec.name == name) return &m;
    }
    return nullptr;
  }

  const CorrelationCell* correlation(std::string_view predictor, std::size_t lag) const {
    for (const auto& c : correlations) {
      if (c.predictor == predictor && c.lag == lag) return &c;
    }
    return nullptr;
  }

  const GrangerCell* granger_for(std::string_view predictor) const {
    for (const auto& g : granger) {
      if (g.predictor == predictor) return &g;
    }
    return nullptr;
  }
};

inline OlsResult fit_model(const FeaturePanel& panel, const ModelSpec& spec) {
  std::vector<Series> X;
  for (const auto& t : spec.terms) X.push_back(lag(panel.column(t.column), t.lag));
  return ols(panel.price, X, true);
}

/// Cells that fail carry their error message; the battery itself never throws
/// on a single bad cell.
inline AnalysisReport run_battery(const FeaturePanel& panel, const BatteryConfig& cfg) {
  AnalysisReport report;
  for (const auto& pred : panel.predictors) {
    for (std::size_t k : cfg.correlation_lags) {
      CorrelationCell cell{pred.name, k, std::nullopt, {}};
      try {
        cell.result = pearson(lag(pred, k), panel.price);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      report.correlations.push_back(std::move(cell));
    }
  }

  for (const auto& pred : panel.predictors) {
    GrangerCell cell{pred.name, std::nullopt, {}};
    try {
      GrangerOptions opts;
      opts.difference_dependent = cfg.difference_price;
      for (const auto& c : cfg.granger_conditioning) {
        if (c != pred.name) opts.conditioning.push_back(panel.column(c));
      }
      cell.result = granger_test(panel.price, pred, cfg.granger_max_lag, opts);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    report.granger.push_back(std::move(cell));
  }

  for (const auto& spec : cfg.models) {
    ModelReport m{spec, std::nullopt, {}};
    try {
      m.result = fit_model(panel, spec);
    } catch (const std::exception& e) {
      m.error = e.what();
    }
    report.models.push_back(std::move(m));
  }

  const auto* base = report.model(cfg.baseline_model);
  const auto* comb = report.model(cfg.combined_model);
  if (base && comb && base->result && comb->result) {
    report.incremental_adj_r2 = comb->result->adj_r2 - base->result->adj_r2;
  }
  return report;
}

namespace detail {

inline std::string fmt(double v) { return csv::format_double(v); }

inline std::string fmt_sig(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

inline std::string fmt_fixed(double v, int digits = 3) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

inline std::string term_label(const ModelTerm& t) {
  return std::string(predictor_label(t.column)) + " Lag " + std::to_string(t.lag);
}

}  // namespace detail

inline std::string correlations_csv(const AnalysisReport& r) {
  std::string out = "predictor,lag,r,n,p,stars,error\n";
  for (const auto& c : r.correlations) {
    if (c.result) {
      out += csv::join({c.predictor, std::to_string(c.lag), detail::fmt(c.result->r), std::to_string(c.result->n),
                        detail::fmt(c.result->p), significance_stars(c.result->p), ""});
    } else {
      out += csv::join({c.predictor, std::to_string(c.lag), "", "", "", "", c.error});
    }
  }
  return out;
}

inline std::string granger_csv(const AnalysisReport& r) {
  std::string out = "predictor,chi2,df,p,n_eff,stars,error\n";
  for (const auto& g : r.granger) {
    if (g.result) {
      out += csv::join({g.predictor, detail::fmt(g.result->chi2), std::to_string(g.result->df),
                        detail::fmt(g.result->p), std::to_string(g.result->n_eff), significance_stars(g.result->p),
                        ""});
    } else {
      out += csv::join({g.predictor, "", "", "", "", "", g.error});
    }
  }
  return out;
}

inline std::string regressions_csv(const AnalysisReport& r) {
  std::string out = "model,term,lag,coefficient,std_error,t,p,stars\n";
  for (const auto& m : r.models) {
    if (!m.result) continue;
    const auto& res = *m.result;
    for (std::size_t j = 0; j < res.coefficients.size(); ++j) {
      const bool is_intercept = res.intercept && j == 0;
      const std::size_t term_idx = res.intercept ? j - 1 : j;
      const std::string term = is_intercept ? "(intercept)" : m.spec.terms[term_idx].column;
      const std::string lag = is_intercept ? "" : std::to_string(m.spec.terms[term_idx].lag);
      out += csv::join({m.spec.name, term, lag, detail::fmt(res.coefficients[j]), detail::fmt(res.std_errors[j]),
                        detail::fmt(res.t_stats[j]), detail::fmt(res.p_values[j]),
                        significance_stars(res.p_values[j])});
    }
  }
  return out;
}

inline std::string models_csv(const AnalysisReport& r) {
  std::string out = "model,n,k,r2,adj_r2,durbin_watson,condition_number,excluded,error\n";
  for (const auto& m : r.models) {
    if (m.result) {
      const auto& res = *m.result;
      out += csv::join({m.spec.name, std::to_string(res.n), std::to_string(res.k), detail::fmt(res.r2),
                        detail::fmt(res.adj_r2), csv::format_optional(res.durbin_watson),
                        detail::fmt(res.condition_number), std::to_string(res.excluded), ""});
    } else {
      out += csv::join({m.spec.name, "", "", "", "", "", "", "", m.error});
    }
  }
  return out;
}

inline std::string summary_markdown(const AnalysisReport& r, const BatteryConfig& cfg) {
  std::ostringstream md;
  md << "# Analysis summary\n\n";

  md << "## Correlations with price\n\n| Predictor |";
  for (auto k : cfg.correlation_lags) md << " Lag " << k << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < cfg.correlation_lags.size(); ++i) md << "---:|";
  md << "\n";
  std::vector<std::string> seen;
  for (const auto& c : r.correlations) {
    if (std::find(seen.begin(), seen.end(), c.predictor) != seen.end()) continue;
    seen.push_back(c.predictor);
    md << "| " << predictor_label(c.predictor) << " |";
    for (auto k : cfg.correlation_lags) {
      const auto* cell = r.correlation(c.predictor, k);
      if (cell && cell->result) {
        md << " " << detail::fmt_fixed(cell->result->r) << significance_stars(cell->result->p) << " |";
      } else {
        md << " n/a |";
      }
    }
    md << "\n";
  }
  md << "\n\\*p<.05; \\*\\*p<.01\n\n";

  md << "## Granger causality (dependent: " << (cfg.difference_price ? "differenced price" : "price")
     << ", lags 1.." << cfg.granger_max_lag << ")\n\n| Predictor | chi2 | p |\n|---|---:|---:|\n";
  for (const auto& g : r.granger) {
    md << "| " << predictor_label(g.predictor) << " | ";
    if (g.result) {
      md << detail::fmt_fixed(g.result->chi2) << significance_stars(g.result->p) << " | "
         << detail::fmt_fixed(g.result->p, 4) << " |\n";
    } else {
      md << "error | " << g.error << " |\n";
    }
  }

  md << "\n## Regression models (dependent: price)\n\n";
  for (const auto& m : r.models) {
    md << "### " << m.spec.name << "\n\n";
    if (!m.result) {
      md << "Failed: " << m.error << "\n\n";
      continue;
    }
    const auto& res = *m.result;
    md << "| Term | Coefficient | p |\n|---|---:|---:|\n";
    for (std::size_t j = 0; j < res.coefficients.size(); ++j) {
      const bool is_intercept = res.intercept && j == 0;
      const std::string name = is_intercept ? "Constant" : detail::term_label(m.spec.terms[res.intercept ? j - 1 : j]);
      md << "| " << name << " | " << detail::fmt_sig(res.coefficients[j]) << significance_stars(res.p_values[j]) << " | "
         << detail::fmt_fixed(res.p_values[j], 4) << " |\n";
    }
    md << "\nAdjusted R squared: " << detail::fmt_fixed(res.adj_r2) << " (n = " << res.n << ")";
    if (res.durbin_watson) md << ", Durbin-Watson: " << detail::fmt_fixed(*res.durbin_watson);
    md << "\n\n";
  }
  if (r.incremental_adj_r2) {
    md << "Incremental adjusted R squared of " << cfg.combined_model << " over " << cfg.baseline_model << ": "
       << detail::fmt_fixed(*r.incremental_adj_r2) << "\n";
  }
  return md.str();
}

}  // namespace brandpulse::econ
