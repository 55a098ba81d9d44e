#include "fourvertex/even_subgraph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

#include "fourvertex/error.hpp"

namespace fourvertex {

Rational FerroIsingInstance::normalizer() const {
  Rational r = pow(Rational(2), m);
  for (const auto& e : edges) r *= (e.beta_e + 1) / 2;
  return r;
}

double FerroIsingInstance::log_normalizer() const {
  double r = m * std::log(2.0);
  for (const auto& e : edges) {
    // ln((b+1)/2) with b = e^L, stable for large L
    const double l = e.log_beta_e;
    r += l + std::log1p(std::exp(-l)) - std::log(2.0);
  }
  return r;
}

std::vector<int> FerroIsingInstance::degrees() const {
  std::vector<int> d(m, 0);
  for (const auto& e : edges) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

FerroIsingInstance reduce(const FourVertexInstance& instance, const CircuitDecomposition& decomposition,
                          const CircuitGraph& fixed_graph) {
  const Rational& beta = instance.beta();
  if (beta <= 0) throw Error(ErrorCode::BadParams, "the Ising reduction needs beta > 0");
  if (decomposition.circuit_count() != fixed_graph.m) {
    throw Error(ErrorCode::MismatchedDecomposition, "circuit graph and decomposition disagree on m");
  }
  const double log_beta = log(beta);

  FerroIsingInstance ferro;
  ferro.m = fixed_graph.m;
  ferro.const_beta_exponent = fixed_graph.const_beta_exponent;
  for (const auto& pair : fixed_graph.edges) {
    ferro.sum_disagree += pair.disagree;
    const long k = pair.agree - pair.disagree;
    if (beta == 1 || k == 0) {
      ++ferro.dropped_edges;
      continue;
    }
    if ((beta > 1 && k < 0) || (beta < 1 && k > 0)) {
      throw Error(ErrorCode::NotFerromagnetic, "pair (" + std::to_string(pair.i) + "," + std::to_string(pair.j) +
                                                   ") has A=" + std::to_string(pair.agree) +
                                                   ", D=" + std::to_string(pair.disagree));
    }
    FerroEdge e;
    e.u = pair.i;
    e.v = pair.j;
    e.exponent = k;
    e.beta_e = pow(beta, k);
    e.x_exact = (e.beta_e - 1) / (e.beta_e + 1);
    e.log_beta_e = static_cast<double>(k) * log_beta;
    e.x = std::tanh(0.5 * e.log_beta_e);
    ferro.edges.push_back(std::move(e));
  }

  const long beta_power = ferro.sum_disagree + ferro.const_beta_exponent;
  ferro.prefactor = weight_scale(instance) * pow(beta, beta_power);
  ferro.log_prefactor = static_cast<double>(beta_power) * log_beta;
  if (const auto& c = instance.params().c) ferro.log_prefactor += instance.vertex_count() * log(*c);
  return ferro;
}

Reduction reduce_pipeline(const FourVertexInstance& instance) {
  Reduction r;
  r.decomposition = decompose(instance);
  r.graph = classify(instance, r.decomposition);
  r.system = build_system(r.graph, instance.beta());
  r.solution = solve(r.system);
  if (r.solution.feasible) {
    r.fixed = apply_flips(r.graph, r.solution.values);
    r.ferro = reduce(instance, r.decomposition, r.fixed);
  }
  return r;
}

Reduction require_ferro(const FourVertexInstance& instance) {
  Reduction r = reduce_pipeline(instance);
  if (!r.ferro) {
    throw Error(ErrorCode::NoFerroReduction, "the parity system has no solution (odd cycle through " +
                                                 std::to_string(r.solution.odd_cycle.size()) + " circuit pairs)");
  }
  return r;
}

ComponentSplit split_components(const FerroIsingInstance& ferro) {
  std::vector<std::vector<std::pair<int, int>>> adj(ferro.m);
  for (std::size_t e = 0; e < ferro.edges.size(); ++e) {
    adj[ferro.edges[e].u].push_back({ferro.edges[e].v, static_cast<int>(e)});
    adj[ferro.edges[e].v].push_back({ferro.edges[e].u, static_cast<int>(e)});
  }
  ComponentSplit out;
  std::vector<bool> seen(ferro.m, false);
  for (int s = 0; s < ferro.m; ++s) {
    if (seen[s]) continue;
    if (adj[s].empty()) {
      seen[s] = true;
      out.isolated.push_back(s);
      continue;
    }
    std::vector<int> verts, edges;
    std::queue<int> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      verts.push_back(u);
      for (auto [w, e] : adj[u]) {
        if (u < w) edges.push_back(e);
        if (!seen[w]) {
          seen[w] = true;
          q.push(w);
        }
      }
    }
    std::sort(verts.begin(), verts.end());
    std::sort(edges.begin(), edges.end());
    out.vertices.push_back(std::move(verts));
    out.edges.push_back(std::move(edges));
  }
  return out;
}

namespace {

/// Fundamental cycles of a spanning forest as edge bitmasks.
std::vector<std::uint64_t> cycle_basis(const FerroIsingInstance& ferro) {
  const int m = ferro.m;
  std::vector<std::vector<std::pair<int, int>>> adj(m);
  for (std::size_t e = 0; e < ferro.edges.size(); ++e) {
    adj[ferro.edges[e].u].push_back({ferro.edges[e].v, static_cast<int>(e)});
    adj[ferro.edges[e].v].push_back({ferro.edges[e].u, static_cast<int>(e)});
  }
  std::vector<int> parent(m, -1), parent_edge(m, -1), depth(m, 0);
  std::vector<bool> seen(m, false), tree(ferro.edges.size(), false);
  for (int s = 0; s < m; ++s) {
    if (seen[s]) continue;
    seen[s] = true;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [w, e] : adj[u]) {
        if (seen[w]) continue;
        seen[w] = true;
        parent[w] = u;
        parent_edge[w] = e;
        depth[w] = depth[u] + 1;
        tree[e] = true;
        q.push(w);
      }
    }
  }
  std::vector<std::uint64_t> basis;
  for (std::size_t e = 0; e < ferro.edges.size(); ++e) {
    if (tree[e]) continue;
    std::uint64_t mask = std::uint64_t{1} << e;
    int a = ferro.edges[e].u, b = ferro.edges[e].v;
    while (a != b) {
      if (depth[a] < depth[b]) std::swap(a, b);
      mask ^= std::uint64_t{1} << parent_edge[a];
      a = parent[a];
    }
    basis.push_back(mask);
  }
  return basis;
}

}  // namespace

Rational exact_even_sum(const FerroIsingInstance& ferro, int edge_cap) {
  if (static_cast<int>(ferro.edges.size()) > edge_cap || ferro.edges.size() > 63) {
    throw Error(ErrorCode::TooLarge, std::to_string(ferro.edges.size()) + " edges exceed the enumeration cap of " +
                                         std::to_string(edge_cap));
  }
  const auto basis = cycle_basis(ferro);
  Rational z = 1;  // empty subgraph
  std::uint64_t current = 0;
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << basis.size()); ++i) {
    current ^= basis[std::countr_zero(i)];  // Gray code walk
    Rational w = 1;
    for (std::uint64_t bits = current; bits; bits &= bits - 1) w *= ferro.edges[std::countr_zero(bits)].x_exact;
    z += w;
  }
  return z;
}

Rational exact_partition_from_even(const FerroIsingInstance& ferro, int edge_cap) {
  return ferro.prefactor * ferro.normalizer() * exact_even_sum(ferro, edge_cap);
}

Rational ising_weight(const FerroIsingInstance& ferro, const std::vector<std::uint8_t>& spins) {
  Rational w = 1;
  for (const auto& e : ferro.edges) {
    if (spins[e.u] == spins[e.v]) w *= e.beta_e;
  }
  return w;
}

Rational exact_ising_sum(const FerroIsingInstance& ferro, int vertex_cap) {
  if (ferro.m > vertex_cap) {
    throw Error(ErrorCode::TooLarge, std::to_string(ferro.m) + " spins exceed the enumeration cap of " +
                                         std::to_string(vertex_cap));
  }
  Rational z = 0;
  std::vector<std::uint8_t> spins(ferro.m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ferro.m); ++mask) {
    for (int v = 0; v < ferro.m; ++v) spins[v] = static_cast<std::uint8_t>((mask >> v) & 1);
    z += ising_weight(ferro, spins);
  }
  return z;
}

bool is_even(const FerroIsingInstance& ferro, const EvenSubgraph& s) {
  if (s.edges.size() != ferro.edges.size()) return false;
  std::vector<std::uint8_t> parity(ferro.m, 0);
  for (std::size_t e = 0; e < ferro.edges.size(); ++e) {
    if (!s.edges[e]) continue;
    parity[ferro.edges[e].u] ^= 1;
    parity[ferro.edges[e].v] ^= 1;
  }
  for (auto p : parity) {
    if (p) return false;
  }
  return true;
}

}  // namespace fourvertex
