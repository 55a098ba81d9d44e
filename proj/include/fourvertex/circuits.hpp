#pragma once

#include <cstdint>
#include <vector>

#include "fourvertex/instance.hpp"

namespace fourvertex {

/// Closed trail alternating in-vertex hops (slots 1<->4, 2<->3) and edge hops.
/// decompose() starts every trail with an in-vertex hop; a re-rooted one may not. The parity of a dart is
/// its position mod 2, so a circuit assignment s gives dart d the value s ^ parity(d).
struct Circuit {
  int id = 0;
  std::vector<Dart> darts;

  const Dart& initial_dart() const { return darts.front(); }

  /// Same trail re-rooted `offset` positions later. An odd offset flips every parity.
  Circuit rotated(std::size_t offset) const;
};

struct CircuitDecomposition {
  std::vector<Circuit> circuits;
  std::vector<int> owner;             // dart index -> circuit id
  std::vector<std::uint8_t> parity;   // dart index -> position mod 2

  int circuit_count() const { return static_cast<int>(circuits.size()); }

  /// Replaces circuit `id` by its re-rooting (parities updated).
  CircuitDecomposition rerooted(int id, std::size_t offset) const;
};

/// One interacting pair i < j with its agree/disagree counts.
struct CircuitEdge {
  int i = 0;
  int j = 0;
  long agree = 0;
  long disagree = 0;

  friend bool operator==(const CircuitEdge&, const CircuitEdge&) = default;
};

struct CircuitGraph {
  int m = 0;
  std::vector<CircuitEdge> edges;   // sorted by (i, j)
  long const_beta_exponent = 0;     // single-circuit vertices fixed at beta
  long const_one_count = 0;         // single-circuit vertices fixed at 1

  long vertex_total() const;

  friend bool operator==(const CircuitGraph&, const CircuitGraph&) = default;
};

/// Deterministic decomposition: each trail starts at the smallest unused dart.
CircuitDecomposition decompose(const FourVertexInstance& instance);

CircuitGraph classify(const FourVertexInstance& instance, const CircuitDecomposition& decomposition);

/// flips[i] = 1 moves circuit i's initial edge by one position; pairs with
/// flips_i ^ flips_j = 1 exchange their A and D counts.
CircuitGraph apply_flips(const CircuitGraph& graph, const std::vector<std::uint8_t>& flips);

/// Dart values induced by one bit per circuit.
DartConfig expand_assignment(const CircuitDecomposition& decomposition, const std::vector<std::uint8_t>& assignment);

/// Circuit value of a valid configuration (its value at each initial dart).
std::vector<std::uint8_t> circuit_assignment(const CircuitDecomposition& decomposition, const DartConfig& config);

/// Sum of config_weight over all 2^m circuit assignments.
Rational circuit_assignment_sum(const FourVertexInstance& instance, const CircuitDecomposition& decomposition,
                                int max_circuits = 24);

/// Partition function from the A/D table: sum over spins of
/// prod beta^{A or D} times the constant-vertex factor and c^n.
Rational circuit_graph_partition(const FourVertexInstance& instance, const CircuitGraph& graph,
                                 int max_circuits = 24);

}  // namespace fourvertex
