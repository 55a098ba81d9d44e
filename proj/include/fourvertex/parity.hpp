#pragma once

#include <cstdint>
#include <vector>

#include "fourvertex/circuits.hpp"
#include "fourvertex/rational.hpp"

namespace fourvertex {

/// x_i ^ x_j = rhs
struct ParityConstraint {
  int i = 0;
  int j = 0;
  std::uint8_t rhs = 0;
};

struct ParitySystem {
  int num_vars = 0;
  std::vector<ParityConstraint> constraints;
};

struct ParitySolution {
  bool feasible = false;
  std::vector<std::uint8_t> values;  // empty when infeasible
  /// Indices into the system's constraints forming a cycle with odd rhs sum.
  std::vector<int> odd_cycle;
};

/// One constraint per circuit-graph edge, in edge order: rhs = [A < D] when
/// beta > 1, [A > D] when beta < 1, and no constraints when beta = 1.
ParitySystem build_system(const CircuitGraph& graph, const Rational& beta);

/// Union-find with parity. The returned assignment gives 0 to the smallest
/// variable of every connected component.
ParitySolution solve(const ParitySystem& system);

bool satisfies(const ParitySystem& system, const std::vector<std::uint8_t>& values);

}  // namespace fourvertex
