#include "fourvertex/parity.hpp"

#include <numeric>
#include <queue>

namespace fourvertex {

ParitySystem build_system(const CircuitGraph& graph, const Rational& beta) {
  ParitySystem system{graph.m, {}};
  if (beta == 1) return system;
  const bool ferro_above_one = beta > 1;
  for (const auto& e : graph.edges) {
    const bool rhs = ferro_above_one ? e.agree < e.disagree : e.agree > e.disagree;
    system.constraints.push_back({e.i, e.j, static_cast<std::uint8_t>(rhs)});
  }
  return system;
}

namespace {

class ParityUnionFind {
 public:
  explicit ParityUnionFind(int n) : parent_(n), rank_(n, 0), offset_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  /// Root of x and the parity of x relative to it.
  std::pair<int, std::uint8_t> find(int x) {
    std::uint8_t acc = 0;
    int r = x;
    while (parent_[r] != r) {
      acc ^= offset_[r];
      r = parent_[r];
    }
    // path compression, rewriting offsets relative to the root
    std::uint8_t rest = acc;
    while (parent_[x] != x) {
      int next = parent_[x];
      std::uint8_t step = offset_[x];
      parent_[x] = r;
      offset_[x] = rest;
      rest ^= step;
      x = next;
    }
    return {r, acc};
  }

  void unite(int ra, int rb, std::uint8_t parity) {
    if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    offset_[rb] = parity;
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  std::vector<std::uint8_t> offset_;
};

/// Constraint indices along the unique forest path between a and b.
std::vector<int> forest_path(int n, const std::vector<std::vector<std::pair<int, int>>>& adj, int a, int b) {
  std::vector<int> via(n, -1), prev(n, -1);
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  q.push(a);
  seen[a] = true;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    if (u == b) break;
    for (auto [w, c] : adj[u]) {
      if (seen[w]) continue;
      seen[w] = true;
      prev[w] = u;
      via[w] = c;
      q.push(w);
    }
  }
  std::vector<int> path;
  for (int v = b; v != a; v = prev[v]) path.push_back(via[v]);
  return path;
}

}  // namespace

ParitySolution solve(const ParitySystem& system) {
  const int n = system.num_vars;
  ParityUnionFind uf(n);
  std::vector<std::vector<std::pair<int, int>>> forest(n);
  ParitySolution out;

  for (std::size_t k = 0; k < system.constraints.size(); ++k) {
    const auto& c = system.constraints[k];
    auto [ri, pi] = uf.find(c.i);
    auto [rj, pj] = uf.find(c.j);
    const std::uint8_t need = c.rhs & 1;
    if (ri == rj) {
      if ((pi ^ pj) != need) {
        out.odd_cycle = forest_path(n, forest, c.i, c.j);
        out.odd_cycle.push_back(static_cast<int>(k));
        return out;
      }
      continue;
    }
    uf.unite(ri, rj, static_cast<std::uint8_t>(pi ^ pj ^ need));
    forest[c.i].push_back({c.j, static_cast<int>(k)});
    forest[c.j].push_back({c.i, static_cast<int>(k)});
  }

  out.feasible = true;
  out.values.assign(n, 0);
  std::vector<std::uint8_t> root_value(n, 2);
  for (int v = 0; v < n; ++v) {
    auto [r, p] = uf.find(v);
    // v ascends, so the first member seen is the component's smallest variable
    if (root_value[r] == 2) root_value[r] = p;
    out.values[v] = static_cast<std::uint8_t>(p ^ root_value[r]);
  }
  return out;
}

bool satisfies(const ParitySystem& system, const std::vector<std::uint8_t>& values) {
  if (static_cast<int>(values.size()) != system.num_vars) return false;
  for (const auto& c : system.constraints) {
    if (((values[c.i] ^ values[c.j]) & 1) != (c.rhs & 1)) return false;
  }
  return true;
}

}  // namespace fourvertex
