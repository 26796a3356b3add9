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

#include <gtest/gtest.h>

#include <set>

#include "mqo/chimera.hpp"
#include "mqo/io.hpp"
#include "mqo/rng.hpp"

namespace mqo {
namespace {

Qubo complete_qubo(std::size_t n) {
  Qubo q(n);
  for (VarId i = 0; i < n; ++i)
    for (VarId j = i + 1; j < n; ++j) q.add_quadratic(i, j, 1.0);
  return q;
}

std::vector<std::size_t> chain_lengths(const Embedding& e) {
  std::vector<std::size_t> out;
  for (const auto& [v, c] : e.chains) out.push_back(c.size());
  return out;
}

TEST(Graph, Indexing) {
  const ChimeraGraph g(3, 4);
  EXPECT_EQ(g.num_qubits(), 96u);
  EXPECT_EQ(g.qubit(1, 2, 1, 3), ((1u * 4 + 2) * 2 + 1) * 4 + 3);
  const auto c = g.coord(g.qubit(2, 3, 0, 1));
  EXPECT_EQ(c.row, 2u);
  EXPECT_EQ(c.col, 3u);
  EXPECT_EQ(c.side, 0u);
  EXPECT_EQ(c.index, 1u);
  EXPECT_THROW(g.qubit(3, 0, 0, 0), std::out_of_range);
  EXPECT_THROW(g.adjacency(96), std::out_of_range);
}

TEST(Graph, DegreesAndNeighbors) {
  const ChimeraGraph g(12, 12);
  EXPECT_EQ(g.adjacency(g.qubit(5, 5, 0, 1)).size(), 6u);
  EXPECT_EQ(g.adjacency(g.qubit(0, 0, 0, 1)).size(), 5u);
  EXPECT_EQ(g.adjacency(g.qubit(0, 0, 1, 1)).size(), 5u);
  const auto n = g.adjacency(g.qubit(5, 5, 0, 1));
  EXPECT_TRUE(std::count(n.begin(), n.end(), g.qubit(4, 5, 0, 1)));
  EXPECT_TRUE(std::count(n.begin(), n.end(), g.qubit(6, 5, 0, 1)));
  const auto h = g.adjacency(g.qubit(5, 5, 1, 2));
  EXPECT_TRUE(std::count(h.begin(), h.end(), g.qubit(5, 4, 1, 2)));
  EXPECT_TRUE(std::count(h.begin(), h.end(), g.qubit(5, 6, 1, 2)));
}

TEST(Graph, DegreeBoundUnderRandomMasks) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const std::size_t rows = 1 + rng.below(5);
    const std::size_t cols = 1 + rng.below(5);
    std::vector<QubitId> broken;
    for (QubitId q = 0; q < rows * cols * 8; ++q)
      if (rng.bernoulli(0.1)) broken.push_back(q);
    const ChimeraGraph g(rows, cols, broken);
    for (QubitId q = 0; q < g.num_qubits(); ++q) {
      const auto adj = g.adjacency(q);
      EXPECT_LE(adj.size(), 6u);
      for (auto n : adj) {
        EXPECT_FALSE(g.is_broken(n));
        EXPECT_TRUE(g.coupled(n, q));
      }
    }
  }
}

TEST(Graph, BrokenQubitHasNoNeighbors) {
  const ChimeraGraph plain(2, 2);
  const QubitId q = plain.qubit(1, 1, 0, 0);
  const std::vector<QubitId> mask{q};
  const ChimeraGraph g(2, 2, mask);
  EXPECT_TRUE(g.adjacency(q).empty());
  for (auto n : plain.adjacency(q)) {
    const auto adj = g.adjacency(n);
    EXPECT_EQ(std::count(adj.begin(), adj.end(), q), 0);
  }
}

TEST(Triad, FiveChainsInOneCell) {
  const ChimeraGraph g(1, 1);
  const auto e = triad_embedding(5, g);
  EXPECT_EQ(e.num_qubits(), 8u);
  EXPECT_EQ(chain_lengths(e), (std::vector<std::size_t>{1, 1, 2, 2, 2}));
  EXPECT_TRUE(verify_embedding(e, complete_qubo(5), g).ok());
}

TEST(Triad, EightAndTwelveChains) {
  const ChimeraGraph g(12, 12);
  const auto e8 = triad_embedding(8, g);
  EXPECT_EQ(e8.num_qubits(), 24u);
  EXPECT_EQ(chain_lengths(e8), std::vector<std::size_t>(8, 3));
  const auto e12 = triad_embedding(12, g);
  EXPECT_EQ(e12.num_qubits(), 48u);
  EXPECT_EQ(chain_lengths(e12), std::vector<std::size_t>(12, 4));
  std::set<std::size_t> cells;
  for (const auto& [v, c] : e12.chains)
    for (auto q : c) cells.insert(q / 8);
  EXPECT_EQ(cells.size(), 6u);
}

TEST(Triad, CompleteForAllSizes) {
  const ChimeraGraph g(12, 12);
  for (std::size_t c = 1; c <= 48; ++c) {
    const auto e = triad_embedding(c, g);
    EXPECT_EQ(e.size(), c);
    const auto report = verify_embedding(e, complete_qubo(c), g);
    EXPECT_TRUE(report.ok()) << c << " chains: " << report.violations.front().message;
    if (c >= 6) {
      const std::size_t k = (c + 3) / 4;
      EXPECT_EQ(triad_footprint_qubits(c), 4 * k * (k + 1));
      if (c % 4 == 0) {
        EXPECT_EQ(e.num_qubits(), 4 * k * (k + 1));
      }
    }
  }
}

TEST(Triad, AnchorAndFit) {
  const ChimeraGraph g(4, 4);
  const auto e = triad_embedding(8, g, {2, 2});
  EXPECT_TRUE(verify_embedding(e, complete_qubo(8), g).ok());
  EXPECT_THROW(triad_embedding(8, g, {3, 3}), EmbeddingInfeasible);
  EXPECT_THROW(triad_embedding(9, ChimeraGraph(1, 1)), EmbeddingInfeasible);
}

TEST(DropBroken, TwoBrokenQubits) {
  const ChimeraGraph plain(3, 3);
  const std::vector<QubitId> mask{plain.qubit(1, 0, 0, 2), plain.qubit(2, 0, 1, 0)};
  const ChimeraGraph g(3, 3, mask);
  const auto e = triad_embedding(12, g);
  const auto kept = drop_broken_chains(e, g);
  EXPECT_EQ(kept.size(), 10u);
  EXPECT_FALSE(kept.chains.contains(2));
  EXPECT_FALSE(kept.chains.contains(8));
  EXPECT_EQ(drop_broken_chains(e, plain), e);
}

TEST(DropBroken, WholeCellBroken) {
  const ChimeraGraph plain(3, 3);
  std::vector<QubitId> mask;
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t i = 0; i < 4; ++i) mask.push_back(plain.qubit(1, 1, s, i));
  const ChimeraGraph g(3, 3, mask);
  const auto e = triad_embedding(12, g);
  const auto kept = drop_broken_chains(e, g);
  for (const auto& [v, chain] : e.chains) {
    const bool crosses = std::any_of(chain.begin(), chain.end(), [](QubitId q) { return q / 8 == 4; });
    EXPECT_EQ(kept.chains.contains(v), !crosses);
  }
  EXPECT_EQ(kept.size(), 8u);  // groups 1 on both shores cross cell (1,1)
}

TEST(Clustered, FourClustersOfEight) {
  const ChimeraGraph g(2, 6);
  const std::vector<std::size_t> counts(4, 8);
  const auto e = clustered_embedding(counts, g);
  EXPECT_EQ(e.num_qubits(), 96u);
  EXPECT_EQ(e.size(), 32u);
  // Dense inside every cluster.
  for (std::size_t c = 0; c < 4; ++c) {
    Qubo q(32);
    for (VarId i = 8 * c; i < 8 * c + 8; ++i)
      for (VarId j = i + 1; j < 8 * c + 8; ++j) q.add_quadratic(i, j, 1);
    EXPECT_TRUE(verify_embedding(e, q, g).ok()) << "cluster " << c;
  }
}

TEST(Clustered, SingleClusterEqualsTriad) {
  const ChimeraGraph g(12, 12);
  for (std::size_t c : {3, 8, 13, 40}) {
    const std::vector<std::size_t> counts{c};
    EXPECT_EQ(clustered_embedding(counts, g), triad_embedding(c, g));
  }
}

TEST(Clustered, DoublingChainsGrowsRoughlyFourfold) {
  const ChimeraGraph g(40, 40);
  const std::vector<std::size_t> small(2, 16);
  const std::vector<std::size_t> big(2, 32);
  const double ratio = static_cast<double>(clustered_embedding(big, g).num_qubits()) /
                       static_cast<double>(clustered_embedding(small, g).num_qubits());
  EXPECT_NEAR(ratio, 4.0 * 72.0 / 80.0, 1e-9);  // 4k(k+1): k = 4 -> 8
  EXPECT_GT(ratio, 3.0);
}

TEST(Clustered, FailureNamesCluster) {
  const ChimeraGraph g(2, 2);
  const std::vector<std::size_t> counts{4, 4, 4, 4, 8};
  try {
    clustered_embedding(counts, g);
    FAIL() << "expected EmbeddingInfeasible";
  } catch (const EmbeddingInfeasible& e) {
    ASSERT_TRUE(e.cluster().has_value());
    EXPECT_EQ(*e.cluster(), 4u);
  }
}

TEST(Clustered, CrossClusterTermWithoutCoupler) {
  const ChimeraGraph g(2, 6);
  const std::vector<std::size_t> counts(4, 8);
  const auto e = clustered_embedding(counts, g);
  // Cluster 0 lives in the left block, cluster 3 in the right one.
  Qubo q(32);
  q.add_quadratic(0, 31, -1);
  const auto report = verify_embedding(e, q, g);
  EXPECT_EQ(report.count(ViolationKind::missing_coupler), 1u);
}

TEST(Verify, StructuralViolations) {
  const ChimeraGraph g(2, 2);
  Embedding gap;
  gap.chains[0] = {g.qubit(0, 0, 0, 0), g.qubit(1, 1, 0, 0)};
  EXPECT_EQ(verify_embedding(gap, Qubo(1), g).count(ViolationKind::disconnected_chain), 1u);

  Embedding overlap;
  overlap.chains[0] = {0};
  overlap.chains[1] = {0};
  EXPECT_EQ(verify_embedding(overlap, Qubo(2), g).count(ViolationKind::overlap), 1u);

  Embedding missing;
  missing.chains[0] = {0};
  EXPECT_EQ(verify_embedding(missing, Qubo(2), g).count(ViolationKind::missing_chain), 1u);

  Embedding outside;
  outside.chains[0] = {1000};
  EXPECT_EQ(verify_embedding(outside, Qubo(1), g).count(ViolationKind::out_of_range), 1u);

  const std::vector<QubitId> mask{0};
  EXPECT_EQ(verify_embedding(missing, Qubo(1), ChimeraGraph(2, 2, mask)).count(ViolationKind::broken_qubit), 1u);
}

TEST(Fit, BrokenQubitsCostExtraChains) {
  const ChimeraGraph plain(6, 6);
  const std::vector<QubitId> mask{plain.qubit(1, 0, 0, 2)};
  const ChimeraGraph g(6, 6, mask);
  const std::vector<std::size_t> need{12};
  const auto fit = fit_clustered(need, g);
  EXPECT_EQ(fit.embedding.size(), 12u);
  EXPECT_EQ(fit.dropped_chains, 1u);
  EXPECT_EQ(fit.capacity[0], 13u);
  EXPECT_TRUE(verify_embedding(fit.embedding, complete_qubo(12), g).ok());
}

TEST(EmbeddingFile, RoundTrip) {
  const ChimeraGraph g(3, 5);
  const auto e = triad_embedding(10, g);
  const auto j = io::to_json(e, g);
  EXPECT_EQ(io::embedding_from_json(j), e);
  EXPECT_EQ(io::grid_from_json(j), std::make_pair(std::size_t{3}, std::size_t{5}));
  const std::vector<QubitId> mask{3, 9};
  EXPECT_EQ(io::broken_from_json(io::broken_to_json(ChimeraGraph(3, 5, mask))), mask);
}

}  // namespace
}  // namespace mqo
