#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fourvertex/error.hpp"
#include "fourvertex/even_subgraph.hpp"
#include "fourvertex/random.hpp"
#include "fourvertex/rational.hpp"

namespace fourvertex {

/// Edge subset with its odd-degree vertices (0 or 2 of them inside the worm space).
struct WormState {
  std::vector<std::uint8_t> edges;
  std::array<int, 2> odd{-1, -1};
  int odd_count = 0;

  bool even() const { return odd_count == 0; }
  std::uint64_t mask() const;
};

/// Worm process on one connected graph with every degree >= 1. Stationary
/// weight xi(S) prod_{e in S} x_e with xi = m on even subgraphs and 2 on
/// subgraphs with two odd vertices; lazy Metropolis moves.
class WormKernel {
 public:
  struct Edge {
    int u = 0;
    int v = 0;
    Rational x_exact;
    double x = 0.0;
  };

  WormKernel(int m, std::vector<Edge> edges);

  /// Component `c` of a ferro instance with every x_e multiplied by `scale`.
  static WormKernel component(const FerroIsingInstance& ferro, const ComponentSplit& split, std::size_t c,
                              const Rational& scale = Rational(1));

  int vertex_count() const { return m_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  int degree(int u) const { return degree_[u]; }
  double x_min() const;
  const Rational& x_min_exact() const;

  WormState empty_state() const;
  WormState state_from_mask(std::uint64_t mask) const;

  // Exact queries over bitmask states (edge_count() <= 63).
  int odd_count(std::uint64_t mask) const;
  bool in_worm_space(std::uint64_t mask) const;
  Rational stationary_weight(std::uint64_t mask) const;
  Rational stationary_weight(const WormState& s) const { return stationary_weight(s.mask()); }
  /// Kernel entry; 0 for pairs that differ in more than one edge. Throws
  /// InvalidState when either state is outside the worm space.
  Rational transition_probability(std::uint64_t from, std::uint64_t to) const;
  Rational transition_probability(const WormState& from, const WormState& to) const {
    return transition_probability(from.mask(), to.mask());
  }
  std::vector<std::uint64_t> worm_states(std::size_t max_states = std::size_t{1} << 20) const;

  /// One lazy step. Draw order: lazy coin, vertex, neighbor, acceptance. The
  /// acceptance draw is skipped when the move is accepted with certainty.
  template <class Source>
  void step(WormState& s, Source& src) const;

  void run(WormState& s, std::uint64_t steps, Rng& rng) const;

  /// Chain of `steps` moves from the empty state, rerun until it ends even.
  WormState sample_even(std::uint64_t steps, Rng& rng) const;

 private:
  void toggle(WormState& s, int edge, int a, int b) const;

  int m_;
  std::vector<Edge> edges_;
  std::vector<int> degree_;
  std::vector<int> adj_start_;  // CSR over directed half-edges
  std::vector<int> adj_to_;
  std::vector<int> adj_edge_;
  std::vector<double> accept_add_;     // min(1, d(u)/d(v) x) for half-edge u->v
  std::vector<double> accept_remove_;  // min(1, d(u)/d(v) / x)
  std::size_t x_min_index_ = 0;
};

template <class Source>
void WormKernel::step(WormState& s, Source& src) const {
  if (!src.coin()) return;
  int u;
  if (s.odd_count == 0) {
    u = static_cast<int>(src.index(static_cast<std::uint64_t>(m_)));
  } else {
    u = s.odd[src.index(2)];
  }
  const int k = adj_start_[u] + static_cast<int>(src.index(static_cast<std::uint64_t>(degree_[u])));
  const int v = adj_to_[k];
  const int e = adj_edge_[k];
  const bool present = s.edges[e] != 0;

  double accept;
  if (s.odd_count == 0 || (v == s.odd[0] || v == s.odd[1])) {
    // to or from an even state
    accept = present ? 1.0 : edges_[e].x;
  } else {
    accept = present ? accept_remove_[k] : accept_add_[k];
  }
  if (accept < 1.0 && !(src.uniform() < accept)) return;
  toggle(s, e, u, v);
}

/// Exact reversibility and row-stochasticity of any kernel-like object with
/// the WormKernel query interface.
struct ReversibilityReport {
  bool rows_stochastic = true;
  bool reversible = true;
  bool lazy = true;  // P(A, A) >= 1/2
  std::size_t states = 0;

  bool ok() const { return rows_stochastic && reversible; }
};

template <class Kernel>
ReversibilityReport reversibility_report(const Kernel& kernel) {
  ReversibilityReport r;
  const auto states = kernel.worm_states();
  r.states = states.size();
  const Rational half(1, 2);
  for (auto a : states) {
    const Rational pi_a = kernel.stationary_weight(a);
    Rational off = 0;
    for (int e = 0; e < kernel.edge_count(); ++e) {
      const std::uint64_t b = a ^ (std::uint64_t{1} << e);
      if (!kernel.in_worm_space(b)) continue;
      const Rational p_ab = kernel.transition_probability(a, b);
      if (p_ab < 0) r.rows_stochastic = false;
      off += p_ab;
      if (pi_a * p_ab != kernel.stationary_weight(b) * kernel.transition_probability(b, a)) r.reversible = false;
    }
    const Rational diag = kernel.transition_probability(a, a);
    if (diag < 0 || off + diag != 1) r.rows_stochastic = false;
    if (diag < half) r.lazy = false;
  }
  return r;
}

template <class Kernel>
bool check_reversibility(const Kernel& kernel) {
  return reversibility_report(kernel).ok();
}

struct MeasureBoundReport {
  Rational bound;      // (1/2) (x_min / 2)^{|E|}
  Rational min_pi;     // min over the worm space of pi_worm
  Rational min_w;      // min of w_worm
  bool pi_form = false;
  bool w_form = false;
};

MeasureBoundReport measure_lower_bound_report(const WormKernel& kernel);
bool check_measure_lower_bound(const WormKernel& kernel);

/// 4 m^5 |E|^2 (ln(2/eps)/|E| + ln(2/x_min)).
double mixing_bound(const WormKernel& kernel, double epsilon);
double mixing_bound(int m, int edges, double x_min, double epsilon);

/// Worm samplers for every component of a ferro instance.
class FerroWormSampler {
 public:
  explicit FerroWormSampler(const FerroIsingInstance& ferro, const Rational& scale = Rational(1));

  const ComponentSplit& split() const { return split_; }
  const std::vector<WormKernel>& kernels() const { return kernels_; }

  EvenSubgraph sample_even(std::uint64_t steps, Rng& rng) const;

 private:
  std::size_t edge_total_;
  ComponentSplit split_;
  std::vector<WormKernel> kernels_;
};

}  // namespace fourvertex
