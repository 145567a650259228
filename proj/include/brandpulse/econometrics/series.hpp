#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "brandpulse/error.hpp"

namespace brandpulse::econ {

/// A weekly series on a 0-based week grid; absent values are missing.
struct Series {
  std::string name;
  std::vector<std::optional<double>> values;

  Series() = default;
  Series(std::string n, std::vector<std::optional<double>> v) : name(std::move(n)), values(std::move(v)) {
    for (const auto& x : values) {
      if (x && !std::isfinite(*x)) throw DataError("series '" + name + "' has a non-finite value");
    }
  }

  static Series dense(std::string n, const std::vector<double>& v) {
    return Series(std::move(n), std::vector<std::optional<double>>(v.begin(), v.end()));
  }

  std::size_t size() const { return values.size(); }
  const std::optional<double>& operator[](std::size_t t) const { return values[t]; }

  std::size_t present() const {
    std::size_t n = 0;
    for (const auto& v : values) n += v.has_value();
    return n;
  }

  bool operator==(const Series&) const = default;
};

/// Value at week t becomes the value from week t - k; the first k weeks are missing.
inline Series lag(const Series& s, std::size_t k) {
  if (k > 0 && k >= s.size()) throw AnalysisError("lag " + std::to_string(k) + " exceeds length of '" + s.name + "'");
  Series out;
  out.name = k == 0 ? s.name : s.name + "_lag" + std::to_string(k);
  out.values.assign(s.size(), std::nullopt);
  for (std::size_t t = k; t < s.size(); ++t) out.values[t] = s.values[t - k];
  return out;
}

/// Week-over-week change; the first week is missing.
inline Series first_difference(const Series& s) {
  if (s.size() < 2) throw AnalysisError("first difference of '" + s.name + "' needs at least 2 observations");
  Series out;
  out.name = "d_" + s.name;
  out.values.assign(s.size(), std::nullopt);
  for (std::size_t t = 1; t < s.size(); ++t) {
    if (s.values[t] && s.values[t - 1]) out.values[t] = *s.values[t] - *s.values[t - 1];
  }
  return out;
}

/// Rows (week indices) at which every series has a value.
struct Listwise {
  std::vector<std::size_t> rows;
  std::size_t excluded = 0;
};

inline Listwise complete_rows(const std::vector<const Series*>& columns) {
  Listwise out;
  if (columns.empty()) return out;
  const std::size_t n = columns.front()->size();
  for (const auto* c : columns) {
    if (c->size() != n) throw AnalysisError("series '" + c->name + "' is not on the shared week grid");
  }
  for (std::size_t t = 0; t < n; ++t) {
    bool ok = true;
    for (const auto* c : columns) ok = ok && (*c)[t].has_value();
    if (ok) {
      out.rows.push_back(t);
    } else {
      ++out.excluded;
    }
  }
  return out;
}

}  // namespace brandpulse::econ
