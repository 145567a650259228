#pragma once

// Message and market-series ingestion, and partitioning of messages into
// fixed seven-day windows anchored at a configured start instant.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "brandpulse/csv.hpp"
#include "brandpulse/error.hpp"

namespace brandpulse {

using Timestamp = std::chrono::sys_seconds;

inline constexpr std::chrono::seconds kWeek{7 * 24 * 3600};

namespace detail {

inline bool parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

inline std::optional<std::chrono::sys_days> parse_ymd(std::string_view s) {
  int y = 0, mo = 0, d = 0;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!parse_fixed_int(s, 0, 4, y) || !parse_fixed_int(s, 5, 2, mo) || !parse_fixed_int(s, 8, 2, d)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd};
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Parses an RFC 3339 instant (`2015-03-02T10:00:00Z`, `...+01:00`, optional
/// fractional seconds which are truncated). A space is accepted in place of `T`.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  s = detail::trim(s);
  auto day = detail::parse_ymd(s);
  if (!day || s.size() < 20) return std::nullopt;
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (s[13] != ':' || s[16] != ':' || !detail::parse_fixed_int(s, 11, 2, hh) ||
      !detail::parse_fixed_int(s, 14, 2, mm) || !detail::parse_fixed_int(s, 17, 2, ss)) {
    return std::nullopt;
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t digits = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == digits) return std::nullopt;
  }
  if (pos >= s.size()) return std::nullopt;
  std::chrono::seconds offset{0};
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    int oh = 0, om = 0;
    if (pos + 6 > s.size() || s[pos + 3] != ':' || !detail::parse_fixed_int(s, pos + 1, 2, oh) ||
        !detail::parse_fixed_int(s, pos + 4, 2, om) || oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset = std::chrono::hours{oh} + std::chrono::minutes{om};
    if (s[pos] == '-') offset = -offset;
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;
  return Timestamp{*day} + std::chrono::hours{hh} + std::chrono::minutes{mm} + std::chrono::seconds{ss} - offset;
}

/// Accepts either a full RFC 3339 instant or a bare `YYYY-MM-DD` (midnight UTC).
inline std::optional<Timestamp> parse_date_or_timestamp(std::string_view s) {
  s = detail::trim(s);
  if (s.size() == 10) {
    if (auto d = detail::parse_ymd(s)) return Timestamp{*d};
    return std::nullopt;
  }
  return parse_timestamp(s);
}

inline std::string format_timestamp(Timestamp t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{day};
  const std::chrono::hh_mm_ss hms{t - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(hms.hours().count()), static_cast<long long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

struct Message {
  std::string id;
  std::string author_id;
  std::optional<std::string> parent_id;  // absent for root posts
  Timestamp timestamp{};
  std::string body;

  bool operator==(const Message&) const = default;
};

struct Rejection {
  std::size_t line = 0;
  std::string reason;
};

struct LoadedMessages {
  std::vector<Message> messages;
  std::vector<Rejection> rejections;
};

enum class MessageFormat { jsonl, csv };

inline MessageFormat message_format_from_path(std::string_view path) {
  if (path.ends_with(".csv")) return MessageFormat::csv;
  return MessageFormat::jsonl;
}

namespace detail {

// Applies the shared row checks; returns a rejection reason on failure.
inline std::optional<std::string> finish_message(Message& m, const std::optional<std::string>& ts_text,
                                                 std::unordered_set<std::string>& seen_ids) {
  if (m.id.empty()) return "missing required field: id";
  if (m.author_id.empty()) return "missing required field: author_id";
  if (!ts_text || detail::trim(*ts_text).empty()) return "missing required field: timestamp";
  auto ts = parse_timestamp(*ts_text);
  if (!ts) return "unparseable timestamp: " + *ts_text;
  m.timestamp = *ts;
  if (m.parent_id && m.parent_id->empty()) m.parent_id.reset();
  if (!seen_ids.insert(m.id).second) return "duplicate message id: " + m.id;
  return std::nullopt;
}

inline std::optional<std::string> json_string(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  return it->dump();
}

}  // namespace detail

inline LoadedMessages parse_messages_jsonl(std::string_view text) {
  LoadedMessages out;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      out.rejections.push_back({line_no, std::string("invalid JSON: ") + e.what()});
      continue;
    }
    if (!obj.is_object()) {
      out.rejections.push_back({line_no, "row is not a JSON object"});
      continue;
    }
    Message m;
    m.id = detail::json_string(obj, "id").value_or("");
    m.author_id = detail::json_string(obj, "author_id").value_or("");
    m.parent_id = detail::json_string(obj, "parent_id");
    m.body = detail::json_string(obj, "body").value_or("");
    if (auto reason = detail::finish_message(m, detail::json_string(obj, "timestamp"), seen)) {
      out.rejections.push_back({line_no, *reason});
      continue;
    }
    out.messages.push_back(std::move(m));
    if (end == text.size()) break;
  }
  return out;
}

inline LoadedMessages parse_messages_csv(std::string_view text) {
  LoadedMessages out;
  auto records = csv::parse(text);
  if (records.empty()) return out;
  const csv::Header header(records.front());
  const auto c_id = header.find("id");
  const auto c_author = header.find("author_id");
  const auto c_parent = header.find("parent_id");
  const auto c_ts = header.find("timestamp");
  const auto c_body = header.find("body");
  for (const char* required : {"id", "author_id", "timestamp"}) {
    if (!header.find(required)) throw DataError(std::string("CSV header lacks required column: ") + required);
  }
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    auto field = [&](const std::optional<std::size_t>& c) -> std::optional<std::string> {
      if (!c || *c >= rec.fields.size()) return std::nullopt;
      return rec.fields[*c];
    };
    Message m;
    m.id = field(c_id).value_or("");
    m.author_id = field(c_author).value_or("");
    m.parent_id = field(c_parent);
    m.body = field(c_body).value_or("");
    if (auto reason = detail::finish_message(m, field(c_ts), seen)) {
      out.rejections.push_back({rec.line, *reason});
      continue;
    }
    out.messages.push_back(std::move(m));
  }
  return out;
}

/// Loads messages in file order. Malformed rows go to the rejection report.
inline LoadedMessages load_messages(const std::string& path, MessageFormat format) {
  const std::string text = csv::read_file(path);
  return format == MessageFormat::csv ? parse_messages_csv(text) : parse_messages_jsonl(text);
}

inline std::string rejections_to_csv(const std::vector<Rejection>& rejections) {
  std::string out = "line,reason\n";
  for (const auto& r : rejections) out += csv::join({std::to_string(r.line), r.reason});
  return out;
}

struct TimeWindow {
  int index = 0;
  Timestamp start{};  // inclusive
  Timestamp end{};    // exclusive

  bool contains(Timestamp t) const { return start <= t && t < end; }
  bool operator==(const TimeWindow&) const = default;
};

/// The horizon: `weeks` contiguous seven-day windows starting at `start`.
struct WeekGrid {
  Timestamp start{};
  int weeks = 0;

  std::optional<int> index_of(Timestamp t) const {
    if (t < start) return std::nullopt;
    const auto idx = (t - start) / kWeek;
    if (idx >= weeks) return std::nullopt;
    return static_cast<int>(idx);
  }

  TimeWindow window(int i) const { return {i, start + i * kWeek, start + (i + 1) * kWeek}; }
  bool operator==(const WeekGrid&) const = default;
};

struct WindowedCorpus {
  std::vector<TimeWindow> windows;
  std::vector<std::vector<Message>> messages_by_window;  // ordered by (timestamp, id)
  std::size_t dropped = 0;                               // outside the horizon

  std::size_t assigned() const {
    std::size_t n = 0;
    for (const auto& w : messages_by_window) n += w.size();
    return n;
  }
};

inline WindowedCorpus partition_weeks(const std::vector<Message>& messages, Timestamp horizon_start,
                                      int horizon_weeks) {
  if (horizon_weeks < 1) throw ConfigError("horizon_weeks must be >= 1");
  const WeekGrid grid{horizon_start, horizon_weeks};
  WindowedCorpus out;
  out.windows.reserve(static_cast<std::size_t>(horizon_weeks));
  for (int i = 0; i < horizon_weeks; ++i) out.windows.push_back(grid.window(i));
  out.messages_by_window.resize(static_cast<std::size_t>(horizon_weeks));
  for (const auto& m : messages) {
    if (auto idx = grid.index_of(m.timestamp)) {
      out.messages_by_window[static_cast<std::size_t>(*idx)].push_back(m);
    } else {
      ++out.dropped;
    }
  }
  for (auto& w : out.messages_by_window) {
    std::sort(w.begin(), w.end(), [](const Message& a, const Message& b) {
      return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.id < b.id;
    });
  }
  return out;
}

struct MarketSeries {
  std::string name;
  std::map<int, double> values;  // week index -> end-of-week value; gaps allowed

  std::optional<double> at(int week) const {
    auto it = values.find(week);
    if (it == values.end()) return std::nullopt;
    return it->second;
  }
};

/// Parses a two-column market table with header `week,value` or `date,value`.
/// Dates are resolved onto `grid`, which is then required.
inline MarketSeries parse_market_series(std::string_view text, std::string name,
                                        const std::optional<WeekGrid>& grid = std::nullopt) {
  MarketSeries out;
  out.name = std::move(name);
  auto records = csv::parse(text);
  if (records.empty()) return out;
  const csv::Header header(records.front());
  const auto c_week = header.find("week");
  const auto c_date = header.find("date");
  const auto c_value = header.find("value");
  if (!c_value || (!c_week && !c_date)) {
    throw DataError("market series header must be (week,value) or (date,value)");
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "line " + std::to_string(rec.line) + ": ";
    if (*c_value >= rec.fields.size()) throw DataError(where + "missing value");
    const auto value = csv::parse_double(rec.fields[*c_value]);
    if (!value || !std::isfinite(*value)) throw DataError(where + "non-finite value '" + rec.fields[*c_value] + "'");
    int week = 0;
    if (c_week) {
      const auto w = csv::parse_double(rec.fields.at(*c_week));
      if (!w || *w != std::floor(*w)) throw DataError(where + "bad week index '" + rec.fields[*c_week] + "'");
      week = static_cast<int>(*w);
    } else {
      if (!grid) throw ConfigError("date-keyed market series needs a horizon start");
      const auto t = parse_date_or_timestamp(rec.fields.at(*c_date));
      if (!t) throw DataError(where + "unparseable date '" + rec.fields[*c_date] + "'");
      const auto idx = grid->index_of(*t);
      if (!idx) throw DataError(where + "date " + rec.fields[*c_date] + " outside the horizon");
      week = *idx;
    }
    if (week < 0) throw DataError(where + "negative week index");
    if (grid && week >= grid->weeks) throw DataError(where + "week " + std::to_string(week) + " outside the horizon");
    if (!out.values.emplace(week, *value).second) {
      throw DataError(where + "duplicate week " + std::to_string(week));
    }
  }
  return out;
}

inline MarketSeries load_market_series(const std::string& path, std::string name,
                                       const std::optional<WeekGrid>& grid = std::nullopt) {
  return parse_market_series(csv::read_file(path), std::move(name), grid);
}

/// id -> (author, timestamp) over the whole corpus, for reply resolution.
struct ParentIndex {
  struct Entry {
    std::string author_id;
    Timestamp timestamp;
  };
  std::unordered_map<std::string, Entry> by_id;

  explicit ParentIndex(const std::vector<Message>& messages) {
    by_id.reserve(messages.size());
    for (const auto& m : messages) by_id.emplace(m.id, Entry{m.author_id, m.timestamp});
  }

  // Parent author if the parent exists and is not later than the reply.
  std::optional<std::string> resolve(const Message& reply) const {
    if (!reply.parent_id) return std::nullopt;
    auto it = by_id.find(*reply.parent_id);
    if (it == by_id.end() || it->second.timestamp > reply.timestamp) return std::nullopt;
    return it->second.author_id;
  }
};

}  // namespace brandpulse
