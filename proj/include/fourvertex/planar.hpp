#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fourvertex/estimator.hpp"
#include "fourvertex/instance.hpp"

namespace fourvertex {

/// Counterclockwise dart order around every vertex, with O(1) successor lookup.
class RotationSystem {
 public:
  explicit RotationSystem(const FourVertexInstance& instance);

  int succ(int dart) const { return succ_[dart]; }
  int pred(int dart) const { return pred_[dart]; }

 private:
  std::vector<int> succ_;
  std::vector<int> pred_;
};

/// Faces as orbits of d -> succ(partner(d)). Dart d lies on the face filling
/// the corner (pred(d), d) at its vertex.
struct FaceSet {
  std::vector<std::vector<int>> faces;
  std::vector<int> face_of;  // per dart index
  int outer = 0;

  int face_count() const { return static_cast<int>(faces.size()); }
};

/// Throws RotationIncomplete without a rotation, MissingOuterFace without an
/// outer dart, NotPlanarEmbedding when the graph is disconnected or
/// V - E + F != 2.
FaceSet trace_faces(const FourVertexInstance& instance);

struct FaceColoring {
  std::vector<std::uint8_t> black;  // per face

  int black_count() const;
  /// Colors exchanged; the outer face becomes black.
  FaceColoring swapped() const;
};

/// Proper 2-coloring of the dual, outer face white, by BFS from the outer face.
FaceColoring two_color_faces(const FourVertexInstance& instance, const FaceSet& faces);

/// Relabels every vertex so that the black corners are (x1, x4) and (x2, x3)
/// in counterclockwise order x1, x4, x2, x3, the first black corner chosen to
/// start at the smaller old slot. Rotation and outer dart are rewritten too.
FourVertexInstance canonical_label(const FourVertexInstance& instance, const FaceSet& faces,
                                   const FaceColoring& coloring);
FourVertexInstance canonical_label(const FourVertexInstance& instance);

/// True when canonical_label would leave every slot in place.
bool is_canonical(const FourVertexInstance& instance, const FaceSet& faces, const FaceColoring& coloring);

struct BlackFaceEdge {
  int u = 0;  // black-face index, u < v
  int v = 0;
  int vertex = 0;  // vertex of G
};

struct CollapsedEdge {
  int u = 0;
  int v = 0;
  int multiplicity = 0;
  Rational beta_e;
};

/// H: one vertex per black face, one edge per vertex of G joining its two black faces.
struct BlackFaceGraph {
  int k = 0;
  std::vector<int> face;  // H vertex -> face index
  std::vector<BlackFaceEdge> edges;
  int self_loops = 0;
  std::vector<CollapsedEdge> collapsed;  // sorted by (u, v)
};

BlackFaceGraph build_black_face_graph(const FourVertexInstance& instance, const FaceSet& faces,
                                      const FaceColoring& coloring);

/// Spin of each black face under a configuration: 0 when its boundary circuit
/// runs with the face on its left. Throws InvalidState if the boundary is not
/// consistently oriented.
std::vector<std::uint8_t> black_face_spins(const FourVertexInstance& instance, const FaceSet& faces,
                                           const FaceColoring& coloring, const BlackFaceGraph& graph,
                                           const DartConfig& config);

/// beta^{self loops} (times c^n) and the Ising instance on H, for beta > 1.
FerroIsingInstance black_face_ising(const FourVertexInstance& instance, const BlackFaceGraph& graph);

struct PlanarResult {
  std::optional<Rational> exact;
  std::optional<Estimate> estimate;
  BlackFaceGraph graph;
};

inline constexpr int kDefaultSpinCap = 24;

/// Z as beta^{self loops} times the Ising sum over black-face spins. Exact
/// when k <= spin_cap, otherwise the telescoping estimator on H (beta > 1).
/// Requires a canonically labeled instance (NotCanonicalLabeling otherwise).
PlanarResult planar_partition(const FourVertexInstance& instance, const EstimatorOptions& options = {},
                              int spin_cap = kDefaultSpinCap);

/// 4 n^7 (ln(2/eps)/n + ln((b+1)/(2(b-1)))) with b the smallest collapsed beta_e.
double planar_mixing_bound(const FourVertexInstance& instance, double epsilon);
double planar_mixing_bound(int n, double beta_min, double epsilon);

}  // namespace fourvertex
