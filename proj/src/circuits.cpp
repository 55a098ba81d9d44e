#include "fourvertex/circuits.hpp"

#include <algorithm>
#include <map>

#include "fourvertex/error.hpp"

namespace fourvertex {

Circuit Circuit::rotated(std::size_t offset) const {
  Circuit out{id, {}};
  out.darts.reserve(darts.size());
  for (std::size_t k = 0; k < darts.size(); ++k) out.darts.push_back(darts[(k + offset) % darts.size()]);
  return out;
}

CircuitDecomposition CircuitDecomposition::rerooted(int id, std::size_t offset) const {
  CircuitDecomposition out = *this;
  out.circuits[id] = circuits[id].rotated(offset);
  const auto& darts = out.circuits[id].darts;
  for (std::size_t k = 0; k < darts.size(); ++k) out.parity[darts[k].index()] = static_cast<std::uint8_t>(k % 2);
  return out;
}

long CircuitGraph::vertex_total() const {
  long total = const_beta_exponent + const_one_count;
  for (const auto& e : edges) total += e.agree + e.disagree;
  return total;
}

CircuitDecomposition decompose(const FourVertexInstance& instance) {
  const int darts = instance.dart_count();
  CircuitDecomposition out;
  out.owner.assign(darts, -1);
  out.parity.assign(darts, 0);
  for (int start = 0; start < darts; ++start) {
    if (out.owner[start] != -1) continue;
    Circuit c{out.circuit_count(), {}};
    int d = start;
    do {
      // in-vertex hop, then edge hop
      const Dart here = Dart::from_index(d);
      const int across = paired(here).index();
      for (int x : {d, across}) {
        out.owner[x] = c.id;
        out.parity[x] = static_cast<std::uint8_t>(c.darts.size() % 2);
        c.darts.push_back(Dart::from_index(x));
      }
      d = instance.partner_index(across);
    } while (d != start);
    out.circuits.push_back(std::move(c));
  }
  return out;
}

CircuitGraph classify(const FourVertexInstance& instance, const CircuitDecomposition& decomposition) {
  const int darts = instance.dart_count();
  if (static_cast<int>(decomposition.owner.size()) != darts || static_cast<int>(decomposition.parity.size()) != darts) {
    throw Error(ErrorCode::MismatchedDecomposition, "decomposition covers a different number of darts");
  }
  std::size_t covered = 0;
  for (const auto& c : decomposition.circuits) {
    // a re-rooted trail may open with an edge hop
    const std::size_t phase = c.darts.size() > 1 && c.darts[1] == paired(c.darts[0]) ? 0 : 1;
    for (std::size_t k = 0; k < c.darts.size(); ++k) {
      const int d = c.darts[k].index();
      if (d >= darts || decomposition.owner[d] != c.id || decomposition.parity[d] != k % 2) {
        throw Error(ErrorCode::MismatchedDecomposition, "circuit " + std::to_string(c.id) + " is inconsistent");
      }
      // consecutive darts alternate in-vertex and edge hops
      const int next = c.darts[(k + 1) % c.darts.size()].index();
      const int expect = (k + phase) % 2 == 0 ? paired(c.darts[k]).index() : instance.partner_index(d);
      if (next != expect) {
        throw Error(ErrorCode::MismatchedDecomposition, "circuit " + std::to_string(c.id) + " is not a trail of this instance");
      }
    }
    covered += c.darts.size();
  }
  if (covered != static_cast<std::size_t>(darts)) {
    throw Error(ErrorCode::MismatchedDecomposition, "circuits do not partition the darts");
  }

  CircuitGraph g;
  g.m = decomposition.circuit_count();
  std::map<std::pair<int, int>, CircuitEdge> pairs;
  for (int v = 0; v < instance.vertex_count(); ++v) {
    const int x1 = Dart{v, 1}.index();
    const int x2 = Dart{v, 2}.index();
    const int ci = decomposition.owner[x1];
    const int cj = decomposition.owner[x2];
    const bool same_parity = decomposition.parity[x1] == decomposition.parity[x2];
    if (ci == cj) {
      (same_parity ? g.const_beta_exponent : g.const_one_count) += 1;
      continue;
    }
    auto key = std::minmax(ci, cj);
    auto& e = pairs.try_emplace(key, CircuitEdge{key.first, key.second, 0, 0}).first->second;
    (same_parity ? e.agree : e.disagree) += 1;
  }
  for (auto& [key, e] : pairs) g.edges.push_back(e);
  return g;
}

CircuitGraph apply_flips(const CircuitGraph& graph, const std::vector<std::uint8_t>& flips) {
  if (static_cast<int>(flips.size()) != graph.m) {
    throw Error(ErrorCode::MismatchedDecomposition, "flip vector length differs from circuit count");
  }
  CircuitGraph out = graph;
  for (auto& e : out.edges) {
    if ((flips[e.i] ^ flips[e.j]) & 1) std::swap(e.agree, e.disagree);
  }
  return out;
}

DartConfig expand_assignment(const CircuitDecomposition& decomposition, const std::vector<std::uint8_t>& assignment) {
  DartConfig config(decomposition.owner.size());
  for (std::size_t d = 0; d < config.size(); ++d) {
    config[d] = static_cast<std::uint8_t>((assignment[decomposition.owner[d]] ^ decomposition.parity[d]) & 1);
  }
  return config;
}

std::vector<std::uint8_t> circuit_assignment(const CircuitDecomposition& decomposition, const DartConfig& config) {
  std::vector<std::uint8_t> out;
  out.reserve(decomposition.circuits.size());
  for (const auto& c : decomposition.circuits) out.push_back(config[c.initial_dart().index()]);
  return out;
}

namespace {

void check_enumerable(int m, int max_circuits) {
  if (m > max_circuits) {
    throw Error(ErrorCode::TooLarge, std::to_string(m) + " circuits exceed the enumeration cap of " +
                                         std::to_string(max_circuits));
  }
}

}  // namespace

Rational circuit_assignment_sum(const FourVertexInstance& instance, const CircuitDecomposition& decomposition,
                                int max_circuits) {
  const int m = decomposition.circuit_count();
  check_enumerable(m, max_circuits);
  Rational z = 0;
  std::vector<std::uint8_t> assignment(m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    for (int i = 0; i < m; ++i) assignment[i] = static_cast<std::uint8_t>((mask >> i) & 1);
    z += config_weight(instance, expand_assignment(decomposition, assignment));
  }
  return z;
}

Rational circuit_graph_partition(const FourVertexInstance& instance, const CircuitGraph& graph, int max_circuits) {
  check_enumerable(graph.m, max_circuits);
  const Rational& beta = instance.beta();
  Rational z = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << graph.m); ++mask) {
    long exponent = 0;
    for (const auto& e : graph.edges) {
      const bool same = ((mask >> e.i) & 1) == ((mask >> e.j) & 1);
      exponent += same ? e.agree : e.disagree;
    }
    z += pow(beta, exponent);
  }
  return z * pow(beta, graph.const_beta_exponent) * weight_scale(instance);
}

}  // namespace fourvertex
