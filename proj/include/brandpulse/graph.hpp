#pragma once

// Directed weighted graphs for the interaction network (actors, reply arcs)
// and the word co-occurrence network (words, ordered co-occurrence arcs).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "brandpulse/corpus.hpp"
#include "brandpulse/csv.hpp"
#include "brandpulse/textproc.hpp"

namespace brandpulse {

using NodeId = std::uint32_t;

struct Arc {
  NodeId source = 0;
  NodeId target = 0;
  std::uint64_t weight = 0;

  bool operator==(const Arc&) const = default;
};

/// Immutable node/arc store. Nodes are indexed in lexicographic label order
/// and arcs are sorted by (source, target), so two graphs with the same
/// content compare equal regardless of insertion order. Self-loops are never
/// stored; attempts to add one are tallied in `self_loops()`.
class DirectedWeightedGraph {
 public:
  DirectedWeightedGraph() { out_offsets_.push_back(0); }

  std::size_t node_count() const { return labels_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  std::uint64_t total_weight() const { return total_weight_; }
  std::uint64_t self_loops() const { return self_loops_; }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(NodeId v) const { return labels_[v]; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  std::optional<NodeId> find(std::string_view label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label,
                               [](const std::string& a, std::string_view b) { return a < b; });
    if (it == labels_.end() || *it != label) return std::nullopt;
    return static_cast<NodeId>(it - labels_.begin());
  }

  /// Distinct successors of v in increasing id order.
  std::span<const NodeId> successors(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }

  std::size_t out_degree(NodeId v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
  std::size_t in_degree(NodeId v) const { return in_degree_[v]; }

  std::uint64_t weight(std::string_view from, std::string_view to) const {
    auto s = find(from);
    auto t = find(to);
    if (!s || !t) return 0;
    const auto begin = arcs_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[*s]);
    const auto end = arcs_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[*s + 1]);
    auto it = std::lower_bound(begin, end, *t, [](const Arc& a, NodeId v) { return a.target < v; });
    return (it != end && it->target == *t) ? it->weight : 0;
  }

  bool operator==(const DirectedWeightedGraph& o) const {
    return labels_ == o.labels_ && arcs_ == o.arcs_ && self_loops_ == o.self_loops_;
  }

  /// Builds directly from labels and arcs given over those labels. Labels
  /// need not be sorted; duplicate arcs are merged, self-loops tallied.
  static DirectedWeightedGraph from_parts(std::vector<std::string> labels, std::vector<Arc> arcs,
                                          std::uint64_t extra_self_loops = 0) {
    DirectedWeightedGraph g;
    std::vector<NodeId> order(labels.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return labels[a] < labels[b]; });
    std::vector<NodeId> remap(labels.size());
    g.labels_.reserve(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (!g.labels_.empty() && g.labels_.back() == labels[order[i]]) {
        throw std::invalid_argument("duplicate node label: " + labels[order[i]]);
      }
      remap[order[i]] = static_cast<NodeId>(i);
      g.labels_.push_back(std::move(labels[order[i]]));
    }
    g.self_loops_ = extra_self_loops;
    std::vector<Arc> kept;
    kept.reserve(arcs.size());
    for (auto a : arcs) {
      if (a.weight == 0) continue;
      if (a.source == a.target) {
        g.self_loops_ += a.weight;
        continue;
      }
      kept.push_back({remap.at(a.source), remap.at(a.target), a.weight});
    }
    std::sort(kept.begin(), kept.end(),
              [](const Arc& a, const Arc& b) { return a.source != b.source ? a.source < b.source : a.target < b.target; });
    for (const auto& a : kept) {
      if (!g.arcs_.empty() && g.arcs_.back().source == a.source && g.arcs_.back().target == a.target) {
        g.arcs_.back().weight += a.weight;
      } else {
        g.arcs_.push_back(a);
      }
    }
    g.finalize();
    return g;
  }

 private:
  friend class GraphBuilder;

  std::vector<std::string> labels_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_degree_;
  std::uint64_t total_weight_ = 0;
  std::uint64_t self_loops_ = 0;

  void finalize() {
    const std::size_t n = labels_.size();
    out_offsets_.assign(n + 1, 0);
    in_degree_.assign(n, 0);
    out_targets_.clear();
    out_targets_.reserve(arcs_.size());
    total_weight_ = 0;
    for (const auto& a : arcs_) {
      ++out_offsets_[a.source + 1];
      ++in_degree_[a.target];
      out_targets_.push_back(a.target);
      total_weight_ += a.weight;
    }
    for (std::size_t i = 0; i < n; ++i) out_offsets_[i + 1] += out_offsets_[i];
  }
};

/// Accumulates labelled nodes and weighted arcs. Arc events are buffered as
/// packed keys and periodically sorted and merged, which keeps memory at
/// O(distinct arcs) and makes the result independent of insertion order.
class GraphBuilder {
 public:
  NodeId add_node(std::string_view label) {
    auto it = ids_.find(label);
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<NodeId>(labels_.size());
    labels_.emplace_back(label);
    ids_.emplace(labels_.back(), id);
    return id;
  }

  void add_arc(NodeId source, NodeId target, std::uint64_t weight = 1) {
    if (weight == 0) return;
    if (source == target) {
      self_loops_ += weight;
      return;
    }
    if (weight == 1) {
      pending_.push_back(key(source, target));
    } else {
      weighted_.push_back({key(source, target), weight});
    }
    if (pending_.size() >= kCompactThreshold) compact();
  }

  void add_arc(std::string_view source, std::string_view target, std::uint64_t weight = 1) {
    const NodeId s = add_node(source);
    const NodeId t = add_node(target);
    add_arc(s, t, weight);
  }

  void add_self_loop_tally(std::uint64_t n) { self_loops_ += n; }

  DirectedWeightedGraph build() {
    compact();
    std::vector<Arc> arcs;
    arcs.reserve(merged_.size());
    for (const auto& [k, w] : merged_) {
      arcs.push_back({static_cast<NodeId>(k >> 32), static_cast<NodeId>(k & 0xFFFFFFFFu), w});
    }
    auto g = DirectedWeightedGraph::from_parts(std::move(labels_), std::move(arcs), self_loops_);
    *this = GraphBuilder{};
    return g;
  }

 private:
  static constexpr std::size_t kCompactThreshold = std::size_t{1} << 22;

  std::vector<std::string> labels_;
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, NodeId, StringHash, std::equal_to<>> ids_;
  std::vector<std::uint64_t> pending_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> weighted_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> merged_;  // sorted by key
  std::uint64_t self_loops_ = 0;

  static std::uint64_t key(NodeId s, NodeId t) { return (std::uint64_t{s} << 32) | t; }

  void compact() {
    if (pending_.empty() && weighted_.empty()) return;
    std::sort(pending_.begin(), pending_.end());
    std::vector<std::pair<std::uint64_t, std::uint64_t>> batch;
    for (std::size_t i = 0; i < pending_.size();) {
      std::size_t j = i;
      while (j < pending_.size() && pending_[j] == pending_[i]) ++j;
      batch.emplace_back(pending_[i], j - i);
      i = j;
    }
    pending_.clear();
    batch.insert(batch.end(), weighted_.begin(), weighted_.end());
    weighted_.clear();
    std::sort(batch.begin(), batch.end());

    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    out.reserve(merged_.size() + batch.size());
    std::size_t a = 0, b = 0;
    while (a < merged_.size() || b < batch.size()) {
      std::pair<std::uint64_t, std::uint64_t> next;
      if (b == batch.size() || (a < merged_.size() && merged_[a].first <= batch[b].first)) {
        next = merged_[a++];
      } else {
        next = batch[b++];
      }
      if (!out.empty() && out.back().first == next.first) {
        out.back().second += next.second;
      } else {
        out.push_back(next);
      }
    }
    merged_ = std::move(out);
  }
};

struct InteractionNetwork {
  DirectedWeightedGraph graph;
  std::uint64_t self_replies = 0;      // replies to one's own message
  std::uint64_t dangling_parents = 0;  // parent unknown or later than the reply
  std::uint64_t comments = 0;          // messages carrying a parent id
};

/// Arc replier -> parent author for every reply whose parent resolves to a
/// different actor. Every author in `messages` is a node.
inline InteractionNetwork build_interaction_network(const std::vector<Message>& messages, const ParentIndex& parents) {
  InteractionNetwork out;
  GraphBuilder b;
  for (const auto& m : messages) {
    const NodeId self = b.add_node(m.author_id);
    if (!m.parent_id) continue;
    ++out.comments;
    auto parent_author = parents.resolve(m);
    if (!parent_author) {
      ++out.dangling_parents;
      continue;
    }
    if (*parent_author == m.author_id) {
      ++out.self_replies;
      continue;
    }
    b.add_arc(self, b.add_node(*parent_author));
  }
  out.graph = b.build();
  return out;
}

/// Ordered co-occurrence network: for each stream, every pair (t_i, t_j)
/// with i < j <= i + window_size adds one unit of weight to t_i -> t_j.
/// Pairs never cross stream boundaries; identical-word pairs are only
/// tallied.
inline DirectedWeightedGraph build_word_network(std::span<const TokenList> streams, std::size_t window_size = 7) {
  if (window_size < 1) throw ConfigError("co-occurrence window must be >= 1");
  GraphBuilder b;
  std::vector<NodeId> ids;
  for (const auto& stream : streams) {
    ids.clear();
    ids.reserve(stream.size());
    for (const auto& tok : stream) ids.push_back(b.add_node(tok));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::size_t last = std::min(ids.size() - 1, i + window_size);
      for (std::size_t j = i + 1; j <= last; ++j) b.add_arc(ids[i], ids[j]);
    }
  }
  return b.build();
}

inline DirectedWeightedGraph build_word_network(const std::vector<TokenList>& streams, std::size_t window_size = 7) {
  return build_word_network(std::span<const TokenList>(streams), window_size);
}

inline std::size_t activity(const std::vector<Message>& window_messages) { return window_messages.size(); }

/// Every co-occurrence event counts, including repeats of the same pair.
inline std::uint64_t activity_words(const DirectedWeightedGraph& word_graph) { return word_graph.total_weight(); }

inline std::string edge_list_csv(const DirectedWeightedGraph& g) {
  std::string out = "source,target,weight\n";
  for (const auto& a : g.arcs()) out += csv::join({g.label(a.source), g.label(a.target), std::to_string(a.weight)});
  return out;
}

inline nlohmann::ordered_json graph_summary(const DirectedWeightedGraph& g) {
  nlohmann::ordered_json j;
  j["n"] = g.node_count();
  j["m"] = g.arc_count();
  j["total_weight"] = g.total_weight();
  j["self_loops"] = g.self_loops();
  return j;
}

}  // namespace brandpulse
