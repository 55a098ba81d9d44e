#include "fourvertex/worm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace fourvertex {

std::uint64_t WormState::mask() const {
  std::uint64_t m = 0;
  for (std::size_t e = 0; e < edges.size() && e < 64; ++e) {
    if (edges[e]) m |= std::uint64_t{1} << e;
  }
  return m;
}

WormKernel::WormKernel(int m, std::vector<Edge> edges) : m_(m), edges_(std::move(edges)), degree_(m, 0) {
  if (edges_.empty()) throw Error(ErrorCode::NoEdges, "the worm process needs at least one edge");
  for (const auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= m_ || e.v >= m_ || e.u == e.v) {
      throw Error(ErrorCode::InvalidState, "worm kernel edges must join two distinct vertices");
    }
    if (e.x_exact < 0 || e.x_exact >= 1) throw Error(ErrorCode::NotFerromagnetic, "edge weight outside [0, 1)");
    ++degree_[e.u];
    ++degree_[e.v];
  }
  for (int u = 0; u < m_; ++u) {
    if (degree_[u] == 0) throw Error(ErrorCode::InvalidState, "isolated vertex " + std::to_string(u) + " in worm kernel");
  }

  adj_start_.assign(m_ + 1, 0);
  for (int u = 0; u < m_; ++u) adj_start_[u + 1] = adj_start_[u] + degree_[u];
  adj_to_.assign(adj_start_[m_], 0);
  adj_edge_.assign(adj_start_[m_], 0);
  accept_add_.assign(adj_start_[m_], 0.0);
  accept_remove_.assign(adj_start_[m_], 1.0);
  std::vector<int> fill(adj_start_.begin(), adj_start_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    for (auto [a, b] : {std::pair{edge.u, edge.v}, std::pair{edge.v, edge.u}}) {
      const int k = fill[a]++;
      adj_to_[k] = b;
      adj_edge_[k] = static_cast<int>(e);
      const double ratio = static_cast<double>(degree_[a]) / degree_[b];
      accept_add_[k] = std::min(1.0, ratio * edge.x);
      accept_remove_[k] = edge.x > 0 ? std::min(1.0, ratio / edge.x) : 1.0;
    }
    if (edge.x_exact < edges_[x_min_index_].x_exact) x_min_index_ = e;
  }
}

WormKernel WormKernel::component(const FerroIsingInstance& ferro, const ComponentSplit& split, std::size_t c,
                                 const Rational& scale) {
  const auto& verts = split.vertices.at(c);
  std::vector<Edge> edges;
  auto local = [&](int v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  const double scale_d = scale.get_d();
  for (int id : split.edges.at(c)) {
    const auto& fe = ferro.edges[id];
    Rational x = fe.x_exact * scale;
    edges.push_back({local(fe.u), local(fe.v), x, scale == 1 ? fe.x : fe.x * scale_d});
  }
  return WormKernel(static_cast<int>(verts.size()), std::move(edges));
}

double WormKernel::x_min() const { return edges_[x_min_index_].x; }
const Rational& WormKernel::x_min_exact() const { return edges_[x_min_index_].x_exact; }

WormState WormKernel::empty_state() const {
  WormState s;
  s.edges.assign(edges_.size(), 0);
  return s;
}

WormState WormKernel::state_from_mask(std::uint64_t mask) const {
  WormState s = empty_state();
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if ((mask >> e) & 1) toggle(s, static_cast<int>(e), edges_[e].u, edges_[e].v);
  }
  if (s.odd_count > 2) throw Error(ErrorCode::InvalidState, "state has more than two odd vertices");
  return s;
}

void WormKernel::toggle(WormState& s, int edge, int a, int b) const {
  s.edges[edge] ^= 1;
  for (int w : {a, b}) {
    if (s.odd_count > 0 && s.odd[0] == w) {
      s.odd[0] = s.odd[1];
      s.odd[1] = -1;
      --s.odd_count;
    } else if (s.odd_count > 1 && s.odd[1] == w) {
      s.odd[1] = -1;
      --s.odd_count;
    } else {
      // only reachable from state_from_mask with > 2 odd vertices; cap the bookkeeping
      if (s.odd_count < 2) s.odd[s.odd_count] = w;
      ++s.odd_count;
    }
  }
}

int WormKernel::odd_count(std::uint64_t mask) const {
  std::vector<std::uint8_t> parity(m_, 0);
  for (std::uint64_t bits = mask; bits; bits &= bits - 1) {
    const auto& e = edges_[std::countr_zero(bits)];
    parity[e.u] ^= 1;
    parity[e.v] ^= 1;
  }
  return static_cast<int>(std::count(parity.begin(), parity.end(), 1));
}

bool WormKernel::in_worm_space(std::uint64_t mask) const {
  if (edges_.size() < 64 && (mask >> edges_.size()) != 0) return false;
  const int k = odd_count(mask);
  return k == 0 || k == 2;
}

Rational WormKernel::stationary_weight(std::uint64_t mask) const {
  const int k = odd_count(mask);
  if (k != 0 && k != 2) return Rational(0);
  Rational w = k == 0 ? Rational(m_) : Rational(2);
  for (std::uint64_t bits = mask; bits; bits &= bits - 1) w *= edges_[std::countr_zero(bits)].x_exact;
  return w;
}

Rational WormKernel::transition_probability(std::uint64_t from, std::uint64_t to) const {
  if (!in_worm_space(from) || !in_worm_space(to)) {
    throw Error(ErrorCode::InvalidState, "transition queried outside the worm space");
  }
  if (from == to) {
    Rational off = 0;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const std::uint64_t b = from ^ (std::uint64_t{1} << e);
      if (in_worm_space(b)) off += transition_probability(from, b);
    }
    return 1 - off;
  }
  const std::uint64_t diff = from ^ to;
  if (std::popcount(diff) != 1) return Rational(0);
  const int e = std::countr_zero(diff);
  const auto& edge = edges_[e];
  const bool absent = ((from >> e) & 1) == 0;
  const Rational du(degree_[edge.u]), dv(degree_[edge.v]);
  const Rational x_factor = absent ? edge.x_exact : Rational(1);

  const int k_from = odd_count(from);
  const int k_to = odd_count(to);
  if (k_from == 0) return x_factor * Rational(1, 2 * m_) * (1 / du + 1 / dv);
  if (k_to == 0) return x_factor * Rational(1, 4) * (1 / du + 1 / dv);

  // both near-even: exactly one endpoint is currently odd
  std::vector<std::uint8_t> parity(m_, 0);
  for (std::uint64_t bits = from; bits; bits &= bits - 1) {
    const auto& f = edges_[std::countr_zero(bits)];
    parity[f.u] ^= 1;
    parity[f.v] ^= 1;
  }
  const int a = parity[edge.u] ? edge.u : edge.v;
  const int b = a == edge.u ? edge.v : edge.u;
  const Rational da(degree_[a]), db(degree_[b]);
  Rational ratio = da / db;
  if (absent) {
    ratio *= edge.x_exact;
  } else {
    if (edge.x_exact == 0) return Rational(1) / (4 * da);
    ratio /= edge.x_exact;
  }
  return std::min(Rational(1), ratio) / (4 * da);
}

std::vector<std::uint64_t> WormKernel::worm_states(std::size_t max_states) const {
  if (edges_.size() > 40 || (std::uint64_t{1} << edges_.size()) > max_states) {
    throw Error(ErrorCode::TooLarge, "worm space over " + std::to_string(edges_.size()) + " edges is not enumerable");
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges_.size()); ++mask) {
    if (in_worm_space(mask)) out.push_back(mask);
  }
  return out;
}

void WormKernel::run(WormState& s, std::uint64_t steps, Rng& rng) const {
  for (std::uint64_t t = 0; t < steps; ++t) step(s, rng);
}

WormState WormKernel::sample_even(std::uint64_t steps, Rng& rng) const {
  if (steps == 0) throw Error(ErrorCode::InvalidState, "sample_even needs at least one step");
  for (;;) {
    WormState s = empty_state();
    run(s, steps, rng);
    if (s.even()) return s;
  }
}

MeasureBoundReport measure_lower_bound_report(const WormKernel& kernel) {
  MeasureBoundReport r;
  r.bound = Rational(1, 2) * pow(kernel.x_min_exact() / 2, kernel.edge_count());
  const auto states = kernel.worm_states();
  Rational total = 0;
  bool first = true;
  for (auto s : states) {
    Rational w = kernel.stationary_weight(s);
    total += w;
    if (first || w < r.min_w) r.min_w = w;
    first = false;
  }
  r.min_pi = r.min_w / total;
  r.pi_form = r.min_pi >= r.bound;
  r.w_form = r.min_w >= r.bound;
  return r;
}

bool check_measure_lower_bound(const WormKernel& kernel) { return measure_lower_bound_report(kernel).pi_form; }

double mixing_bound(int m, int edges, double x_min, double epsilon) {
  if (edges < 1) throw Error(ErrorCode::NoEdges, "mixing bound needs at least one edge");
  if (!(epsilon > 0 && epsilon < 1)) throw Error(ErrorCode::BadParams, "epsilon must lie in (0, 1)");
  if (!(x_min > 0)) throw Error(ErrorCode::BadParams, "x_min must be positive");
  const double e = edges;
  return 4.0 * std::pow(static_cast<double>(m), 5) * e * e * (std::log(2.0 / epsilon) / e + std::log(2.0 / x_min));
}

double mixing_bound(const WormKernel& kernel, double epsilon) {
  return mixing_bound(kernel.vertex_count(), kernel.edge_count(), kernel.x_min(), epsilon);
}

FerroWormSampler::FerroWormSampler(const FerroIsingInstance& ferro, const Rational& scale)
    : edge_total_(ferro.edges.size()), split_(split_components(ferro)) {
  for (std::size_t c = 0; c < split_.vertices.size(); ++c) kernels_.push_back(WormKernel::component(ferro, split_, c, scale));
}

EvenSubgraph FerroWormSampler::sample_even(std::uint64_t steps, Rng& rng) const {
  EvenSubgraph out{std::vector<std::uint8_t>(edge_total_, 0)};
  for (std::size_t c = 0; c < kernels_.size(); ++c) {
    const WormState s = kernels_[c].sample_even(steps, rng);
    const auto& ids = split_.edges[c];
    for (std::size_t k = 0; k < ids.size(); ++k) out.edges[ids[k]] = s.edges[k];
  }
  return out;
}

}  // namespace fourvertex
