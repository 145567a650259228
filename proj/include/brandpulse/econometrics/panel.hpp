#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "brandpulse/corpus.hpp"
#include "brandpulse/econometrics/series.hpp"
#include "brandpulse/error.hpp"

namespace brandpulse::econ {

/// One week of extracted measures. Missing values stay missing.
struct WeekFeatures {
  int week = 0;
  std::optional<double> activity;
  std::optional<double> activity_words;
  std::optional<double> group_degree;       // interaction network centralization
  std::optional<double> group_betweenness;  // interaction network centralization
  std::optional<double> focal_degree;       // focal word, word network
  std::optional<double> focal_betweenness;  // focal word, word network
  std::optional<double> sentiment;
  std::optional<double> emotionality;
  std::optional<double> complexity;
  bool focal_absent = false;

  bool operator==(const WeekFeatures&) const = default;
};

struct PredictorInfo {
  std::string_view column;
  std::string_view label;
};

/// Predictor columns in panel order.
inline constexpr std::array<PredictorInfo, 10> kPredictors = {{
    {"activity_words", "Activity Words"},
    {"activity", "Activity (Interaction Network)"},
    {"group_betweenness", "Group Betweenness Centrality (Interaction Network)"},
    {"focal_betweenness", "Betweenness Centrality (Word Network)"},
    {"complexity", "Complexity"},
    {"focal_degree", "Degree Centrality (Word Network)"},
    {"emotionality", "Emotionality"},
    {"sentiment", "Sentiment"},
    {"control_index", "Control Index"},
    {"group_degree", "Group Degree Centrality (Interaction Network)"},
}};

inline constexpr std::string_view kPriceColumn = "price";

inline std::string_view predictor_label(std::string_view column) {
  for (const auto& p : kPredictors) {
    if (p.column == column) return p.label;
  }
  return column;
}

struct FeaturePanel {
  std::size_t weeks = 0;
  std::vector<Series> predictors;  // kPredictors order
  Series price;

  const Series& column(std::string_view name) const {
    if (name == kPriceColumn) return price;
    for (const auto& s : predictors) {
      if (s.name == name) return s;
    }
    throw AnalysisError("panel has no column '" + std::string(name) + "'");
  }

  std::size_t column_count() const { return predictors.size() + 1; }
};

inline FeaturePanel build_panel(const std::vector<WeekFeatures>& features, const MarketSeries& price,
                                const MarketSeries& control) {
  const std::size_t weeks = features.size();
  for (std::size_t t = 0; t < weeks; ++t) {
    if (features[t].week != static_cast<int>(t)) {
      throw DataError("feature table is not on the week grid: row " + std::to_string(t) + " has week " +
                      std::to_string(features[t].week));
    }
  }
  for (const auto* m : {&price, &control}) {
    if (!m->values.empty() && (m->values.begin()->first < 0 || m->values.rbegin()->first >= static_cast<int>(weeks))) {
      throw DataError("market series '" + m->name + "' extends beyond the " + std::to_string(weeks) + "-week grid");
    }
  }

  auto market = [&](const MarketSeries& m, std::string name) {
    std::vector<std::optional<double>> v(weeks);
    for (const auto& [w, x] : m.values) v[static_cast<std::size_t>(w)] = x;
    return Series(std::move(name), std::move(v));
  };
  auto feature = [&](std::string_view name, std::optional<double> WeekFeatures::*field) {
    std::vector<std::optional<double>> v(weeks);
    for (std::size_t t = 0; t < weeks; ++t) v[t] = features[t].*field;
    return Series(std::string(name), std::move(v));
  };

  FeaturePanel panel;
  panel.weeks = weeks;
  for (const auto& p : kPredictors) {
    if (p.column == "activity_words") panel.predictors.push_back(feature(p.column, &WeekFeatures::activity_words));
    else if (p.column == "activity") panel.predictors.push_back(feature(p.column, &WeekFeatures::activity));
    else if (p.column == "group_betweenness") panel.predictors.push_back(feature(p.column, &WeekFeatures::group_betweenness));
    else if (p.column == "focal_betweenness") panel.predictors.push_back(feature(p.column, &WeekFeatures::focal_betweenness));
    else if (p.column == "complexity") panel.predictors.push_back(feature(p.column, &WeekFeatures::complexity));
    else if (p.column == "focal_degree") panel.predictors.push_back(feature(p.column, &WeekFeatures::focal_degree));
    else if (p.column == "emotionality") panel.predictors.push_back(feature(p.column, &WeekFeatures::emotionality));
    else if (p.column == "sentiment") panel.predictors.push_back(feature(p.column, &WeekFeatures::sentiment));
    else if (p.column == "control_index") panel.predictors.push_back(market(control, std::string(p.column)));
    else if (p.column == "group_degree") panel.predictors.push_back(feature(p.column, &WeekFeatures::group_degree));
  }
  panel.price = market(price, std::string(kPriceColumn));
  return panel;
}

}  // namespace brandpulse::econ
