// Copyright 2026 The mqo-anneal Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mqo/error.hpp"
#include "mqo/qubo.hpp"

namespace mqo {

using QubitId = std::uint32_t;

struct CellCoord {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const CellCoord&, const CellCoord&) = default;
};

struct QubitCoord {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t side = 0;  // 0: left shore (vertical couplers), 1: right shore (horizontal)
  std::size_t index = 0;
};

/// Grid of 4+4 bipartite unit cells. Qubit ids are
///   ((row * cols + col) * 2 + side) * 4 + index
/// Left-shore qubits couple to the same index in the cells above and below,
/// right-shore qubits to the same index in the cells left and right.
class ChimeraGraph {
 public:
  static constexpr std::size_t kShore = 4;
  static constexpr std::size_t kCellQubits = 2 * kShore;

  explicit ChimeraGraph(std::size_t rows = 12, std::size_t cols = 12,
                        std::span<const QubitId> broken = {})
      : rows_(rows), cols_(cols), broken_(rows * cols * kCellQubits, 0) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("grid must have at least one cell");
    for (auto q : broken) {
      check(q);
      broken_[q] = 1;
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t num_qubits() const noexcept { return broken_.size(); }

  bool contains(QubitId q) const noexcept { return q < broken_.size(); }
  bool is_broken(QubitId q) const {
    check(q);
    return broken_[q] != 0;
  }

  std::vector<QubitId> broken() const {
    std::vector<QubitId> out;
    for (QubitId q = 0; q < broken_.size(); ++q)
      if (broken_[q]) out.push_back(q);
    return out;
  }

  QubitId qubit(std::size_t row, std::size_t col, std::size_t side, std::size_t index) const {
    if (row >= rows_ || col >= cols_ || side > 1 || index >= kShore)
      throw std::out_of_range("qubit coordinate outside the grid");
    return static_cast<QubitId>(((row * cols_ + col) * 2 + side) * kShore + index);
  }

  QubitCoord coord(QubitId q) const {
    check(q);
    const std::size_t index = q % kShore;
    const std::size_t side = (q / kShore) % 2;
    const std::size_t cell = q / kCellQubits;
    return QubitCoord{cell / cols_, cell % cols_, side, index};
  }

  /// Neighbors in the full topology, ignoring the broken mask.
  std::vector<QubitId> topology_neighbors(QubitId q) const {
    const auto c = coord(q);
    std::vector<QubitId> out;
    for (std::size_t k = 0; k < kShore; ++k) out.push_back(qubit(c.row, c.col, 1 - c.side, k));
    if (c.side == 0) {
      if (c.row > 0) out.push_back(qubit(c.row - 1, c.col, 0, c.index));
      if (c.row + 1 < rows_) out.push_back(qubit(c.row + 1, c.col, 0, c.index));
    } else {
      if (c.col > 0) out.push_back(qubit(c.row, c.col - 1, 1, c.index));
      if (c.col + 1 < cols_) out.push_back(qubit(c.row, c.col + 1, 1, c.index));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Working neighbors of a working qubit; a broken qubit has none.
  std::vector<QubitId> adjacency(QubitId q) const {
    if (is_broken(q)) return {};
    auto out = topology_neighbors(q);
    std::erase_if(out, [this](QubitId n) { return broken_[n] != 0; });
    return out;
  }

  bool coupled(QubitId a, QubitId b) const {
    const auto n = topology_neighbors(a);
    return std::binary_search(n.begin(), n.end(), b);
  }

  /// Coupler exists and both ends work.
  bool usable(QubitId a, QubitId b) const {
    return coupled(a, b) && !broken_[a] && !broken_[b];
  }

 private:
  void check(QubitId q) const {
    if (!contains(q))
      throw std::out_of_range("qubit " + std::to_string(q) + " outside a " +
                              std::to_string(rows_) + "x" + std::to_string(cols_) + " grid");
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> broken_;
};

using Chain = std::vector<QubitId>;

/// Logical variable -> ordered chain of physical qubits.
struct Embedding {
  std::map<VarId, Chain> chains;

  std::size_t size() const noexcept { return chains.size(); }

  std::size_t num_qubits() const {
    std::size_t n = 0;
    for (const auto& [var, chain] : chains) n += chain.size();
    return n;
  }

  std::size_t max_chain_length() const {
    std::size_t n = 0;
    for (const auto& [var, chain] : chains) n = std::max(n, chain.size());
    return n;
  }

  /// Same chains, keys renumbered 0..size-1 in key order.
  Embedding compacted() const {
    Embedding out;
    VarId next = 0;
    for (const auto& [var, chain] : chains) out.chains.emplace(next++, chain);
    return out;
  }

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

// ---------------------------------------------------------------------------
// TRIAD patterns
//
// Up to five chains fit one cell: two single qubits (left 0, right 0) and
// three left/right pairs. Larger sets use k = ceil(c / 4) groups of four
// chains laid out on a triangle of k(k+1)/2 cells. In the cell at relative
// (row r, column j) the left shore carries group j and the right shore group
// r, so group g runs horizontally along row g on the right shore, turns
// through the diagonal cell (g, g), and runs vertically along column g on the
// left shore. Every chain has length k + 1. The "lower" triangle uses cells
// with j <= r; the "upper" one uses j >= r and interlocks with a lower
// triangle of the same size shifted one column left.
// ---------------------------------------------------------------------------

enum class TriadOrientation { lower, upper };

inline constexpr std::size_t kDenseCellChains = 5;

/// Number of four-chain groups used for `num_chains`; 0 means the dense cell.
inline std::size_t triad_groups(std::size_t num_chains) {
  if (num_chains <= kDenseCellChains) return 0;
  return (num_chains + ChimeraGraph::kShore - 1) / ChimeraGraph::kShore;
}

/// Qubits covered by the TRIAD footprint (whole unit cells).
inline std::size_t triad_footprint_qubits(std::size_t num_chains) {
  const std::size_t k = triad_groups(num_chains);
  if (k == 0) return ChimeraGraph::kCellQubits;
  return ChimeraGraph::kCellQubits * k * (k + 1) / 2;
}

namespace detail {

inline std::vector<Chain> dense_cell_chains(const ChimeraGraph& graph, CellCoord cell,
                                            std::size_t num_chains) {
  std::vector<Chain> chains;
  chains.push_back({graph.qubit(cell.row, cell.col, 0, 0)});
  chains.push_back({graph.qubit(cell.row, cell.col, 1, 0)});
  for (std::size_t i = 1; i < ChimeraGraph::kShore; ++i)
    chains.push_back(
        {graph.qubit(cell.row, cell.col, 0, i), graph.qubit(cell.row, cell.col, 1, i)});
  chains.resize(num_chains);
  return chains;
}

inline std::vector<Chain> block_triad_chains(const ChimeraGraph& graph, CellCoord anchor,
                                             std::size_t num_chains, TriadOrientation orientation) {
  const std::size_t k = (num_chains + ChimeraGraph::kShore - 1) / ChimeraGraph::kShore;
  std::vector<Chain> chains;
  for (std::size_t c = 0; c < num_chains; ++c) {
    const std::size_t g = c / ChimeraGraph::kShore;
    const std::size_t i = c % ChimeraGraph::kShore;
    const std::size_t row = anchor.row + g;
    const std::size_t col = anchor.col + g;
    Chain chain;
    if (orientation == TriadOrientation::lower) {
      for (std::size_t j = 0; j <= g; ++j) chain.push_back(graph.qubit(row, anchor.col + j, 1, i));
      for (std::size_t r = g; r < k; ++r) chain.push_back(graph.qubit(anchor.row + r, col, 0, i));
    } else {
      for (std::size_t j = k; j-- > g;) chain.push_back(graph.qubit(row, anchor.col + j, 1, i));
      for (std::size_t r = g + 1; r-- > 0;) chain.push_back(graph.qubit(anchor.row + r, col, 0, i));
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

inline Embedding to_embedding(std::vector<Chain> chains, VarId first = 0) {
  Embedding e;
  for (auto& chain : chains) e.chains.emplace(first++, std::move(chain));
  return e;
}

}  // namespace detail

/// TRIAD with its first cell at `anchor`; every pair of chains shares a coupler.
/// Broken qubits are not avoided here; see drop_broken_chains.
inline Embedding triad_embedding(std::size_t num_chains, const ChimeraGraph& graph,
                                 CellCoord anchor = {}) {
  if (num_chains == 0) throw std::invalid_argument("TRIAD needs at least one chain");
  const std::size_t k = std::max<std::size_t>(triad_groups(num_chains), 1);
  if (anchor.row + k > graph.rows() || anchor.col + k > graph.cols())
    throw EmbeddingInfeasible("TRIAD with " + std::to_string(num_chains) + " chains needs " +
                              std::to_string(k) + "x" + std::to_string(k) +
                              " cells from (" + std::to_string(anchor.row) + "," +
                              std::to_string(anchor.col) + "), grid is " +
                              std::to_string(graph.rows()) + "x" + std::to_string(graph.cols()));
  if (triad_groups(num_chains) == 0)
    return detail::to_embedding(detail::dense_cell_chains(graph, anchor, num_chains));
  return detail::to_embedding(
      detail::block_triad_chains(graph, anchor, num_chains, TriadOrientation::lower));
}

/// Removes every chain that contains a broken qubit; the rest keep their ids.
inline Embedding drop_broken_chains(const Embedding& embedding, const ChimeraGraph& graph) {
  Embedding kept;
  for (const auto& [var, chain] : embedding.chains) {
    const bool broken = std::any_of(chain.begin(), chain.end(), [&](QubitId q) {
      return !graph.contains(q) || graph.is_broken(q);
    });
    if (!broken) kept.chains.emplace(var, chain);
  }
  return kept;
}

struct ClusterPlacement {
  std::size_t cluster = 0;
  std::size_t num_chains = 0;
  CellCoord anchor;
  TriadOrientation orientation = TriadOrientation::lower;
};

/// Places one TRIAD per cluster left to right in horizontal bands. Two
/// consecutive clusters with the same group count interlock (lower + upper
/// triangle) in a k x (k+1) block of cells.
inline std::vector<ClusterPlacement> layout_clusters(std::span<const std::size_t> chains_per_cluster,
                                                     const ChimeraGraph& graph) {
  std::vector<ClusterPlacement> placements;
  std::size_t band_top = 0;
  std::size_t band_height = 0;
  std::size_t cursor = 0;
  // Lower triangle still waiting for an upper partner: its column and group count.
  bool open = false;
  std::size_t open_col = 0;
  std::size_t open_groups = 0;

  for (std::size_t c = 0; c < chains_per_cluster.size(); ++c) {
    const std::size_t n = chains_per_cluster[c];
    if (n == 0) throw std::invalid_argument("cluster " + std::to_string(c) + " has no chains");
    const std::size_t k = triad_groups(n);
    if (k > 0 && open && open_groups == k && open_col + k < graph.cols()) {
      placements.push_back({c, n, CellCoord{band_top, open_col + 1}, TriadOrientation::upper});
      cursor = open_col + k + 1;
      open = false;
      continue;
    }
    const std::size_t size = std::max<std::size_t>(k, 1);
    if (cursor + size > graph.cols()) {
      band_top += band_height;
      band_height = 0;
      cursor = 0;
    }
    if (band_top + size > graph.rows() || size > graph.cols())
      throw EmbeddingInfeasible("cluster " + std::to_string(c) + " (" + std::to_string(n) +
                                    " chains) does not fit the " + std::to_string(graph.rows()) +
                                    "x" + std::to_string(graph.cols()) + " grid",
                                c);
    placements.push_back({c, n, CellCoord{band_top, cursor}, TriadOrientation::lower});
    band_height = std::max(band_height, size);
    open = k > 0;
    open_col = cursor;
    open_groups = k;
    cursor += size;
  }
  return placements;
}

/// One TRIAD per cluster; variables are numbered cluster by cluster.
inline Embedding clustered_embedding(std::span<const std::size_t> chains_per_cluster,
                                     const ChimeraGraph& graph) {
  Embedding out;
  VarId next = 0;
  for (const auto& p : layout_clusters(chains_per_cluster, graph)) {
    auto chains = triad_groups(p.num_chains) == 0
                      ? detail::dense_cell_chains(graph, p.anchor, p.num_chains)
                      : detail::block_triad_chains(graph, p.anchor, p.num_chains, p.orientation);
    for (auto& chain : chains) out.chains.emplace(next++, std::move(chain));
  }
  return out;
}

enum class ViolationKind {
  missing_chain,
  empty_chain,
  out_of_range,
  broken_qubit,
  overlap,
  disconnected_chain,
  missing_coupler,
};

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::missing_chain: return "missing_chain";
    case ViolationKind::empty_chain: return "empty_chain";
    case ViolationKind::out_of_range: return "out_of_range";
    case ViolationKind::broken_qubit: return "broken_qubit";
    case ViolationKind::overlap: return "overlap";
    case ViolationKind::disconnected_chain: return "disconnected_chain";
    case ViolationKind::missing_coupler: return "missing_coupler";
  }
  return "unknown";
}

struct EmbeddingViolation {
  ViolationKind kind;
  VarId var = 0;
  std::optional<VarId> other;
  std::optional<QubitId> qubit;
  std::string message;
};

struct EmbeddingReport {
  std::vector<EmbeddingViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::size_t count(ViolationKind kind) const {
    return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                  [kind](const auto& v) { return v.kind == kind; }));
  }
};

/// Structural checks on the chains plus, for every quadratic term of `qubo`, a
/// working coupler between the two chains.
inline EmbeddingReport verify_embedding(const Embedding& embedding, const Qubo& qubo,
                                        const ChimeraGraph& graph) {
  EmbeddingReport report;
  auto add = [&](ViolationKind kind, VarId var, std::optional<VarId> other,
                 std::optional<QubitId> qubit, std::string message) {
    report.violations.push_back({kind, var, other, qubit, std::move(message)});
  };

  constexpr std::int64_t kFree = -1;
  std::vector<std::int64_t> owner(graph.num_qubits(), kFree);
  for (const auto& [var, chain] : embedding.chains) {
    const std::string name = "chain " + std::to_string(var);
    if (chain.empty()) add(ViolationKind::empty_chain, var, {}, {}, name + " is empty");
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const QubitId q = chain[i];
      if (!graph.contains(q)) {
        add(ViolationKind::out_of_range, var, {}, q,
            name + " uses qubit " + std::to_string(q) + " outside the grid");
        continue;
      }
      if (graph.is_broken(q))
        add(ViolationKind::broken_qubit, var, {}, q,
            name + " uses broken qubit " + std::to_string(q));
      if (owner[q] != kFree) {
        add(ViolationKind::overlap, var, static_cast<VarId>(owner[q]), q,
            name + " shares qubit " + std::to_string(q) + " with chain " + std::to_string(owner[q]));
      } else {
        owner[q] = var;
      }
      if (i > 0 && graph.contains(chain[i - 1]) && !graph.coupled(chain[i - 1], q))
        add(ViolationKind::disconnected_chain, var, {}, q,
            name + " has no coupler between qubits " + std::to_string(chain[i - 1]) + " and " +
                std::to_string(q));
    }
  }

  for (VarId v = 0; v < qubo.num_vars(); ++v)
    if (!embedding.chains.contains(v))
      add(ViolationKind::missing_chain, v, {}, {}, "variable " + std::to_string(v) + " has no chain");

  for (const auto& [key, weight] : qubo.quadratic()) {
    const auto u = embedding.chains.find(key.first);
    const auto v = embedding.chains.find(key.second);
    if (u == embedding.chains.end() || v == embedding.chains.end()) continue;
    bool found = false;
    for (QubitId a : u->second) {
      if (!graph.contains(a)) continue;
      for (QubitId b : graph.adjacency(a)) {
        if (owner[b] == static_cast<std::int64_t>(key.second)) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found)
      add(ViolationKind::missing_coupler, key.first, key.second, {},
          "no working coupler between chains " + std::to_string(key.first) + " and " +
              std::to_string(key.second));
  }
  return report;
}

/// Clustered placement that tolerates broken qubits: clusters that lose chains
/// to broken qubits get extra capacity until enough intact chains remain.
struct FittedEmbedding {
  Embedding embedding;
  std::vector<std::size_t> capacity;
  std::vector<std::size_t> cluster_of_var;
  std::size_t dropped_chains = 0;
};

inline FittedEmbedding fit_clustered(std::span<const std::size_t> needed, const ChimeraGraph& graph) {
  std::vector<std::size_t> capacity(needed.begin(), needed.end());
  while (true) {
    const auto layout = layout_clusters(capacity, graph);
    FittedEmbedding fit;
    fit.capacity = capacity;
    bool short_of_chains = false;
    VarId next = 0;
    for (const auto& p : layout) {
      auto chains = triad_groups(p.num_chains) == 0
                        ? detail::dense_cell_chains(graph, p.anchor, p.num_chains)
                        : detail::block_triad_chains(graph, p.anchor, p.num_chains, p.orientation);
      std::size_t usable = 0;
      for (auto& chain : chains) {
        const bool broken =
            std::any_of(chain.begin(), chain.end(), [&](QubitId q) { return graph.is_broken(q); });
        if (broken) {
          ++fit.dropped_chains;
          continue;
        }
        if (usable < needed[p.cluster]) {
          fit.embedding.chains.emplace(next++, std::move(chain));
          fit.cluster_of_var.push_back(p.cluster);
        }
        ++usable;
      }
      if (usable < needed[p.cluster]) {
        if (p.num_chains >= ChimeraGraph::kShore * std::max(graph.rows(), graph.cols()))
          throw EmbeddingInfeasible(
              "cluster " + std::to_string(p.cluster) + " cannot find enough intact chains",
              p.cluster);
        capacity[p.cluster] += needed[p.cluster] - usable;
        short_of_chains = true;
      }
    }
    if (!short_of_chains) return fit;
  }
}

/// Clustered embedding for variables 0..n-1 labelled with clusters
/// 0..c-1 in any order; chains are keyed by the variables themselves.
inline FittedEmbedding fit_variables(std::span<const std::size_t> cluster_of_var, const ChimeraGraph& graph) {
  std::size_t clusters = 0;
  for (auto c : cluster_of_var) clusters = std::max(clusters, c + 1);
  std::vector<std::vector<VarId>> members(clusters);
  for (std::size_t v = 0; v < cluster_of_var.size(); ++v)
    members[cluster_of_var[v]].push_back(static_cast<VarId>(v));
  std::vector<std::size_t> needed;
  for (const auto& m : members) {
    if (m.empty()) throw std::invalid_argument("cluster labels must be contiguous");
    needed.push_back(m.size());
  }
  auto fit = fit_clustered(needed, graph);
  Embedding keyed;
  std::vector<std::size_t> used(clusters, 0);
  for (auto& [slot, chain] : fit.embedding.chains) {
    const auto c = fit.cluster_of_var[slot];
    keyed.chains.emplace(members[c][used[c]++], std::move(chain));
  }
  fit.embedding = std::move(keyed);
  fit.cluster_of_var.assign(cluster_of_var.begin(), cluster_of_var.end());
  return fit;
}

}  // namespace mqo
