#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "fourvertex/circuits.hpp"
#include "fourvertex/parity.hpp"
#include "fourvertex/random.hpp"
#include "fourvertex/rational.hpp"

namespace fourvertex {

/// Ferromagnetic interaction beta_e = beta^exponent >= 1 and its
/// high-temperature weight x_e = (beta_e - 1) / (beta_e + 1).
struct FerroEdge {
  int u = 0;
  int v = 0;
  long exponent = 0;
  Rational beta_e{1};
  Rational x_exact{0};
  double x = 0.0;
  double log_beta_e = 0.0;
};

/// Ising model on the circuit graph after the parity fix.
///
///   Z = prefactor * sum_spins prod_e beta_e^[s_u = s_v]
///     = prefactor * 2^m prod_e (beta_e + 1)/2 * Z_0,   Z_0 = sum_{S even} prod_{e in S} x_e
struct FerroIsingInstance {
  int m = 0;
  std::vector<FerroEdge> edges;  // only beta_e > 1; at most one per pair, no loops

  // prefactor = c^n * beta^{sum D'} * beta^{const_beta_exponent}
  Rational prefactor{1};
  double log_prefactor = 0.0;
  long sum_disagree = 0;
  long const_beta_exponent = 0;
  std::size_t dropped_edges = 0;

  /// 2^m prod (beta_e + 1)/2, exact and in log space.
  Rational normalizer() const;
  double log_normalizer() const;

  std::vector<int> degrees() const;
};

/// Everything the pipeline computes before sampling.
struct Reduction {
  CircuitDecomposition decomposition;
  CircuitGraph graph;
  ParitySystem system;
  ParitySolution solution;
  CircuitGraph fixed;
  std::optional<FerroIsingInstance> ferro;  // empty when the system is infeasible
};

/// Builds the ferromagnetic instance; the graph must already satisfy
/// A >= D (beta > 1) or A <= D (beta < 1) on every pair.
FerroIsingInstance reduce(const FourVertexInstance& instance, const CircuitDecomposition& decomposition,
                          const CircuitGraph& fixed_graph);

/// decompose -> classify -> parity system -> flips -> reduce. Never throws on
/// infeasibility; inspect `ferro`.
Reduction reduce_pipeline(const FourVertexInstance& instance);

/// Like reduce_pipeline but throws NoFerroReduction when infeasible.
Reduction require_ferro(const FourVertexInstance& instance);

inline constexpr int kDefaultEdgeCap = 24;

/// Exact Z_0 by walking the cycle space.
Rational exact_even_sum(const FerroIsingInstance& ferro, int edge_cap = kDefaultEdgeCap);

Rational exact_partition_from_even(const FerroIsingInstance& ferro, int edge_cap = kDefaultEdgeCap);

/// prod_e beta_e^[s_u = s_v]
Rational ising_weight(const FerroIsingInstance& ferro, const std::vector<std::uint8_t>& spins);

/// Direct spin sum (without prefactor).
Rational exact_ising_sum(const FerroIsingInstance& ferro, int vertex_cap = kDefaultEdgeCap);

struct EvenSubgraph {
  std::vector<std::uint8_t> edges;  // membership per ferro edge
};

bool is_even(const FerroIsingInstance& ferro, const EvenSubgraph& s);

/// Connected components that carry at least one edge, and isolated vertices.
struct ComponentSplit {
  std::vector<std::vector<int>> vertices;  // ascending ids per component
  std::vector<std::vector<int>> edges;     // ferro edge ids per component
  std::vector<int> isolated;
};

ComponentSplit split_components(const FerroIsingInstance& ferro);

/// Even subgraph -> random-cluster -> spins. Each absent edge joins with
/// probability x_e; each resulting cluster takes one fair spin. `Source`
/// supplies `bool include_edge(const FerroEdge&)` and `std::uint8_t spin()`,
/// which lets tests drive it through every branch with exact probabilities.
template <class Source>
std::vector<std::uint8_t> spins_from_even(const FerroIsingInstance& ferro, const EvenSubgraph& sample, Source& source) {
  std::vector<int> parent(ferro.m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < ferro.edges.size(); ++e) {
    const auto& edge = ferro.edges[e];
    if (!sample.edges[e] && !source.include_edge(edge)) continue;
    const int a = find(edge.u), b = find(edge.v);
    if (a != b) parent[a] = b;
  }
  std::vector<std::uint8_t> root_spin(ferro.m, 2);
  std::vector<std::uint8_t> spins(ferro.m);
  for (int v = 0; v < ferro.m; ++v) {
    const int r = find(v);
    if (root_spin[r] == 2) root_spin[r] = source.spin();
    spins[v] = root_spin[r];
  }
  return spins;
}

struct RngCouplingSource {
  Rng& rng;
  bool include_edge(const FerroEdge& e) { return rng.uniform() < e.x; }
  std::uint8_t spin() { return rng.coin() ? 1 : 0; }
};

inline std::vector<std::uint8_t> spins_from_even(const FerroIsingInstance& ferro, const EvenSubgraph& sample,
                                                 Rng& rng) {
  RngCouplingSource source{rng};
  return spins_from_even(ferro, sample, source);
}

}  // namespace fourvertex
