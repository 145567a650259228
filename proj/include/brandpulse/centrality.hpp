#pragma once

// Degree and betweenness centrality on directed graphs, plus Freeman-style
// group centralization. All shortest paths are unweighted (hop count).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "brandpulse/error.hpp"
#include "brandpulse/graph.hpp"

namespace brandpulse {

enum class CentralityMetric { degree, betweenness };

struct CentralityVector {
  CentralityMetric metric = CentralityMetric::degree;
  std::vector<double> raw;         // indexed by NodeId
  std::vector<double> normalized;  // raw / max_possible, in [0, 1]
  std::size_t graph_n = 0;
};

struct CentralizationScore {
  CentralityMetric metric = CentralityMetric::degree;
  double value = 0.0;
};

/// Distinct in-arcs plus distinct out-arcs; weights are ignored.
inline CentralityVector degree_centrality(const DirectedWeightedGraph& g) {
  const std::size_t n = g.node_count();
  CentralityVector cv{CentralityMetric::degree, std::vector<double>(n), std::vector<double>(n), n};
  const double max_possible = n >= 2 ? 2.0 * static_cast<double>(n - 1) : 0.0;
  for (NodeId v = 0; v < n; ++v) {
    cv.raw[v] = static_cast<double>(g.in_degree(v) + g.out_degree(v));
    cv.normalized[v] = n >= 2 ? cv.raw[v] / max_possible : 0.0;
  }
  return cv;
}

namespace detail {

// Per-thread scratch space for one single-source pass.
struct BrandesWorkspace {
  std::vector<std::int64_t> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<NodeId> order;

  explicit BrandesWorkspace(std::size_t n) : dist(n, -1), sigma(n, 0.0), delta(n, 0.0) { order.reserve(n); }

  // Adds the dependencies of `source` on every other vertex into `acc`.
  void accumulate(const DirectedWeightedGraph& g, NodeId source, std::vector<double>& acc) {
    order.clear();
    dist[source] = 0;
    sigma[source] = 1.0;
    order.push_back(source);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId v = order[head];
      for (NodeId w : g.successors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (std::size_t i = order.size(); i-- > 0;) {
      const NodeId v = order[i];
      for (NodeId w : g.successors(v)) {
        if (dist[w] == dist[v] + 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (v != source) acc[v] += delta[v];
    }
    for (NodeId v : order) {
      dist[v] = -1;
      sigma[v] = 0.0;
      delta[v] = 0.0;
    }
  }
};

inline constexpr std::size_t kSourceBlock = 64;

/// Sums single-source dependencies over `sources`. Sources are split into
/// fixed blocks of kSourceBlock; each block is summed in source order and
/// blocks are merged in block order, so the floating-point result does not
/// depend on the thread count or on scheduling.
inline std::vector<double> brandes_sum(const DirectedWeightedGraph& g, const std::vector<NodeId>& sources,
                                       unsigned threads) {
  const std::size_t n = g.node_count();
  std::vector<double> total(n, 0.0);
  const std::size_t blocks = (sources.size() + kSourceBlock - 1) / kSourceBlock;
  if (blocks == 0) return total;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));

  std::atomic<std::size_t> next_block{0};
  std::mutex merge_mutex;
  std::size_t next_to_merge = 0;
  std::map<std::size_t, std::vector<double>> finished;

  auto worker = [&] {
    BrandesWorkspace ws(n);
    for (;;) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= blocks) return;
      std::vector<double> partial(n, 0.0);
      const std::size_t end = std::min(sources.size(), (b + 1) * kSourceBlock);
      for (std::size_t i = b * kSourceBlock; i < end; ++i) ws.accumulate(g, sources[i], partial);
      std::lock_guard lock(merge_mutex);
      finished.emplace(b, std::move(partial));
      for (auto it = finished.find(next_to_merge); it != finished.end(); it = finished.find(next_to_merge)) {
        for (std::size_t v = 0; v < n; ++v) total[v] += it->second[v];
        finished.erase(it);
        ++next_to_merge;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return total;
}

inline CentralityVector finish_betweenness(std::vector<double> raw) {
  const std::size_t n = raw.size();
  CentralityVector cv{CentralityMetric::betweenness, std::move(raw), std::vector<double>(n, 0.0), n};
  if (n >= 3) {
    const double max_possible = static_cast<double>(n - 1) * static_cast<double>(n - 2);
    for (std::size_t v = 0; v < n; ++v) cv.normalized[v] = cv.raw[v] / max_possible;
  }
  return cv;
}

}  // namespace detail

/// Exact betweenness over ordered (s, t) pairs (Brandes' algorithm).
/// `threads == 0` uses the hardware concurrency; results are bit-identical
/// for any thread count.
inline CentralityVector betweenness_centrality(const DirectedWeightedGraph& g, unsigned threads = 1) {
  std::vector<NodeId> sources(g.node_count());
  std::iota(sources.begin(), sources.end(), NodeId{0});
  return detail::finish_betweenness(detail::brandes_sum(g, sources, threads));
}

/// Source-sampled estimate: `sample_count` distinct sources drawn with
/// `seed`, dependencies scaled by n / sample_count. With sample_count == n
/// this is exactly `betweenness_centrality`.
inline CentralityVector approx_betweenness(const DirectedWeightedGraph& g, std::size_t sample_count,
                                           std::uint64_t seed, unsigned threads = 1) {
  const std::size_t n = g.node_count();
  if (sample_count < 1 || sample_count > n) {
    throw ConfigError("betweenness sample count must be in [1, " + std::to_string(n) + "]");
  }
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), NodeId{0});
  std::vector<NodeId> sources;
  sources.reserve(sample_count);
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(sources), sample_count, rng);
  std::vector<double> raw = detail::brandes_sum(g, sources, threads);
  if (sample_count < n) {
    const double scale = static_cast<double>(n) / static_cast<double>(sample_count);
    for (auto& r : raw) r *= scale;
  }
  return detail::finish_betweenness(std::move(raw));
}

/// Freeman centralization of normalized scores: sum(c* - c_i) divided by
/// (n - 1) for betweenness and (n - 2) for degree. Both are 1 on a
/// bidirectional star and 0 when all scores are equal.
inline CentralizationScore centralization(const CentralityVector& cv) {
  const std::size_t n = cv.normalized.size();
  if (n < 3) throw AnalysisError("centralization needs at least 3 nodes, got " + std::to_string(n));
  const double c_max = *std::max_element(cv.normalized.begin(), cv.normalized.end());
  double spread = 0.0;
  for (double c : cv.normalized) spread += c_max - c;
  const double denom = cv.metric == CentralityMetric::betweenness ? static_cast<double>(n - 1)
                                                                   : static_cast<double>(n - 2);
  return {cv.metric, std::clamp(spread / denom, 0.0, 1.0)};
}

}  // namespace brandpulse
