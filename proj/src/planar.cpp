#include "fourvertex/planar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "fourvertex/error.hpp"

namespace fourvertex {

RotationSystem::RotationSystem(const FourVertexInstance& instance)
    : succ_(instance.dart_count()), pred_(instance.dart_count()) {
  const auto& rot = instance.rotation();
  if (!rot) throw Error(ErrorCode::RotationIncomplete, "the planar path needs a rotation system");
  for (int v = 0; v < instance.vertex_count(); ++v) {
    const auto& r = (*rot)[v];
    for (int k = 0; k < 4; ++k) {
      const int d = Dart{v, r[k]}.index();
      const int next = Dart{v, r[(k + 1) % 4]}.index();
      succ_[d] = next;
      pred_[next] = d;
    }
  }
}

FaceSet trace_faces(const FourVertexInstance& instance) {
  const RotationSystem rot(instance);
  const auto& outer = instance.outer_face_hint();
  if (!outer) throw Error(ErrorCode::MissingOuterFace, "no 'outer' dart given");
  if (instance.component_count() != 1) {
    throw Error(ErrorCode::NotPlanarEmbedding, "face tracing needs a connected graph");
  }
  FaceSet fs;
  fs.face_of.assign(instance.dart_count(), -1);
  for (int start = 0; start < instance.dart_count(); ++start) {
    if (fs.face_of[start] >= 0) continue;
    const int id = fs.face_count();
    std::vector<int> cycle;
    int d = start;
    do {
      fs.face_of[d] = id;
      cycle.push_back(d);
      d = rot.succ(instance.partner_index(d));
    } while (d != start);
    fs.faces.push_back(std::move(cycle));
  }
  const int n = instance.vertex_count();
  const int euler = n - 2 * n + fs.face_count();
  if (euler != 2) {
    throw Error(ErrorCode::NotPlanarEmbedding,
                "V - E + F = " + std::to_string(euler) + " (" + std::to_string(fs.face_count()) + " faces)");
  }
  fs.outer = fs.face_of[outer->index()];
  return fs;
}

int FaceColoring::black_count() const { return static_cast<int>(std::count(black.begin(), black.end(), 1)); }

FaceColoring FaceColoring::swapped() const {
  FaceColoring out = *this;
  for (auto& b : out.black) b ^= 1;
  return out;
}

FaceColoring two_color_faces(const FourVertexInstance& instance, const FaceSet& faces) {
  // faces on the two sides of the edge through d are face(d) and face(partner(d))
  std::vector<std::vector<int>> adj(faces.face_count());
  for (int d = 0; d < instance.dart_count(); ++d) {
    const int f = faces.face_of[d];
    const int g = faces.face_of[instance.partner_index(d)];
    if (f == g) throw Error(ErrorCode::InternalError, "face " + std::to_string(f) + " borders itself");
    adj[f].push_back(g);
  }
  FaceColoring out;
  out.black.assign(faces.face_count(), 2);
  std::queue<int> q;
  out.black[faces.outer] = 0;
  q.push(faces.outer);
  while (!q.empty()) {
    const int f = q.front();
    q.pop();
    for (int g : adj[f]) {
      if (out.black[g] == 2) {
        out.black[g] = out.black[f] ^ 1;
        q.push(g);
      } else if (out.black[g] == out.black[f]) {
        throw Error(ErrorCode::InternalError, "the face adjacency graph is not bipartite");
      }
    }
  }
  if (std::count(out.black.begin(), out.black.end(), 2) != 0) {
    throw Error(ErrorCode::InternalError, "dual graph is disconnected");
  }
  return out;
}

namespace {

bool corner_black(const RotationSystem& rot, const FaceSet& faces, const FaceColoring& coloring, int d) {
  // the corner (d, succ(d)) belongs to the face of succ(d)
  return coloring.black[faces.face_of[rot.succ(d)]] != 0;
}

/// new_slot[4v + old_slot - 1]
std::vector<int> canonical_slots(const FourVertexInstance& instance, const FaceSet& faces,
                                 const FaceColoring& coloring) {
  const RotationSystem rot(instance);
  std::vector<int> slot(instance.dart_count());
  for (int v = 0; v < instance.vertex_count(); ++v) {
    int d1 = -1;
    for (int s = 1; s <= 4 && d1 < 0; ++s) {
      const int d = Dart{v, s}.index();
      if (corner_black(rot, faces, coloring, d)) d1 = d;
    }
    if (d1 < 0) throw Error(ErrorCode::InternalError, "vertex " + std::to_string(v) + " touches no black face");
    const int d2 = rot.succ(d1), d3 = rot.succ(d2), d4 = rot.succ(d3);
    slot[d1] = 1;
    slot[d2] = 4;
    slot[d3] = 2;
    slot[d4] = 3;
  }
  return slot;
}

}  // namespace

FourVertexInstance canonical_label(const FourVertexInstance& instance, const FaceSet& faces,
                                   const FaceColoring& coloring) {
  const auto slot = canonical_slots(instance, faces, coloring);
  auto remap = [&](Dart d) { return Dart{d.vertex, slot[d.index()]}; };
  std::vector<EdgeSpec> edges;
  for (const auto& e : instance.edges()) edges.push_back({remap(e.first), remap(e.second)});
  std::vector<VertexRotation> rotation(instance.vertex_count(), VertexRotation{1, 4, 2, 3});
  return FourVertexInstance(instance.vertex_count(), std::move(edges), instance.params(), std::move(rotation),
                            remap(*instance.outer_face_hint()));
}

FourVertexInstance canonical_label(const FourVertexInstance& instance) {
  const FaceSet faces = trace_faces(instance);
  return canonical_label(instance, faces, two_color_faces(instance, faces));
}

bool is_canonical(const FourVertexInstance& instance, const FaceSet& faces, const FaceColoring& coloring) {
  const auto slot = canonical_slots(instance, faces, coloring);
  for (int d = 0; d < instance.dart_count(); ++d) {
    if (slot[d] != Dart::from_index(d).slot) return false;
  }
  return true;
}

BlackFaceGraph build_black_face_graph(const FourVertexInstance& instance, const FaceSet& faces,
                                      const FaceColoring& coloring) {
  const RotationSystem rot(instance);
  BlackFaceGraph h;
  std::vector<int> node(faces.face_count(), -1);
  for (int f = 0; f < faces.face_count(); ++f) {
    if (coloring.black[f]) {
      node[f] = h.k++;
      h.face.push_back(f);
    }
  }
  std::map<std::pair<int, int>, int> multiplicity;
  for (int v = 0; v < instance.vertex_count(); ++v) {
    std::vector<int> touching;
    for (int s = 1; s <= 4; ++s) {
      const int d = Dart{v, s}.index();
      if (corner_black(rot, faces, coloring, d)) touching.push_back(node[faces.face_of[rot.succ(d)]]);
    }
    if (touching.size() != 2) throw Error(ErrorCode::InternalError, "vertex without two black corners");
    const int u = std::min(touching[0], touching[1]), w = std::max(touching[0], touching[1]);
    if (u == w) {
      ++h.self_loops;
      continue;
    }
    h.edges.push_back({u, w, v});
    ++multiplicity[{u, w}];
  }
  for (const auto& [pair, count] : multiplicity) {
    h.collapsed.push_back({pair.first, pair.second, count, pow(instance.beta(), count)});
  }
  return h;
}

std::vector<std::uint8_t> black_face_spins(const FourVertexInstance& instance, const FaceSet& faces,
                                           const FaceColoring& coloring, const BlackFaceGraph& graph,
                                           const DartConfig& config) {
  const RotationSystem rot(instance);
  std::vector<int> node(faces.face_count(), -1);
  for (int i = 0; i < graph.k; ++i) node[graph.face[i]] = i;
  std::vector<std::uint8_t> spin(graph.k, 2);
  for (int d = 0; d < instance.dart_count(); ++d) {
    if (!corner_black(rot, faces, coloring, d)) continue;
    // with the face on the left the boundary enters through succ(d) and leaves through d
    const int h = node[faces.face_of[rot.succ(d)]];
    const std::uint8_t s = config[d] ? 0 : 1;
    if (spin[h] == 2) {
      spin[h] = s;
    } else if (spin[h] != s) {
      throw Error(ErrorCode::InvalidState, "black face " + std::to_string(h) + " is not consistently oriented");
    }
  }
  return spin;
}

FerroIsingInstance black_face_ising(const FourVertexInstance& instance, const BlackFaceGraph& graph) {
  const Rational& beta = instance.beta();
  if (beta < 1) throw Error(ErrorCode::NotFerromagnetic, "the black-face Ising model is ferromagnetic only for beta >= 1");
  FerroIsingInstance f;
  f.m = graph.k;
  f.const_beta_exponent = graph.self_loops;
  const double log_beta = log(beta);
  for (const auto& c : graph.collapsed) {
    if (beta == 1) {
      ++f.dropped_edges;
      continue;
    }
    FerroEdge e;
    e.u = c.u;
    e.v = c.v;
    e.exponent = c.multiplicity;
    e.beta_e = c.beta_e;
    e.x_exact = (e.beta_e - 1) / (e.beta_e + 1);
    e.log_beta_e = c.multiplicity * log_beta;
    e.x = std::tanh(0.5 * e.log_beta_e);
    f.edges.push_back(std::move(e));
  }
  f.prefactor = weight_scale(instance) * pow(beta, graph.self_loops);
  f.log_prefactor = graph.self_loops * log_beta;
  if (const auto& c = instance.params().c) f.log_prefactor += instance.vertex_count() * log(*c);
  return f;
}

PlanarResult planar_partition(const FourVertexInstance& instance, const EstimatorOptions& options, int spin_cap) {
  const FaceSet faces = trace_faces(instance);
  const FaceColoring coloring = two_color_faces(instance, faces);
  if (!is_canonical(instance, faces, coloring)) {
    throw Error(ErrorCode::NotCanonicalLabeling, "run 'planar canonical-label' first");
  }
  PlanarResult out;
  out.graph = build_black_face_graph(instance, faces, coloring);
  const BlackFaceGraph& h = out.graph;
  const Rational scale = weight_scale(instance) * pow(instance.beta(), h.self_loops);

  if (h.k <= spin_cap && h.k < 63) {
    // histogram of the agreeing multiplicity, then one power of beta per bucket
    std::vector<Integer> count(instance.vertex_count() + 1, 0);
    for (std::uint64_t sigma = 0; sigma < (std::uint64_t{1} << h.k); ++sigma) {
      int agree = 0;
      for (const auto& e : h.collapsed) {
        if (((sigma >> e.u) & 1) == ((sigma >> e.v) & 1)) agree += e.multiplicity;
      }
      ++count[agree];
    }
    Rational z = 0;
    for (std::size_t e = 0; e < count.size(); ++e) {
      if (count[e] != 0) z += Rational(count[e]) * pow(instance.beta(), static_cast<long>(e));
    }
    out.exact = scale * z;
    return out;
  }
  if (instance.beta() == 1) {
    out.exact = scale * pow(Rational(2), h.k);
    return out;
  }
  if (instance.beta() < 1) {
    out.estimate = estimate_partition(instance, options);
    return out;
  }
  const FerroIsingInstance f = black_face_ising(instance, h);
  out.estimate = estimate_Z0(f, options);
  out.estimate->log_value += f.log_prefactor + f.log_normalizer();
  return out;
}

double planar_mixing_bound(int n, double beta_min, double epsilon) {
  if (!(beta_min > 1)) throw Error(ErrorCode::BetaAtMostOne, "the planar bound needs beta_min > 1");
  if (!(epsilon > 0 && epsilon < 1)) throw Error(ErrorCode::BadParams, "epsilon must lie in (0, 1)");
  if (n < 1) throw Error(ErrorCode::BadParams, "n must be positive");
  const double nd = n;
  return 4.0 * std::pow(nd, 7) *
         (std::log(2.0 / epsilon) / nd + std::log((beta_min + 1) / (2 * (beta_min - 1))));
}

double planar_mixing_bound(const FourVertexInstance& instance, double epsilon) {
  const FaceSet faces = trace_faces(instance);
  const BlackFaceGraph h = build_black_face_graph(instance, faces, two_color_faces(instance, faces));
  if (h.collapsed.empty()) throw Error(ErrorCode::BetaAtMostOne, "H has no edges");
  Rational beta_min = h.collapsed.front().beta_e;
  for (const auto& e : h.collapsed) beta_min = std::min(beta_min, e.beta_e);
  if (beta_min <= 1) throw Error(ErrorCode::BetaAtMostOne, "beta_min = " + to_string(beta_min));
  return planar_mixing_bound(instance.vertex_count(), to_double(beta_min), epsilon);
}

}  // namespace fourvertex
