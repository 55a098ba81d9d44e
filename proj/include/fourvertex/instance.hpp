#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fourvertex/rational.hpp"

namespace fourvertex {

/// Half-edge: the incidence of an edge at `vertex` through `slot` (1..4).
struct Dart {
  int vertex = 0;
  int slot = 1;

  /// Dense index 4*vertex + slot - 1; also the total order used for tie-breaking.
  int index() const { return 4 * vertex + slot - 1; }
  static Dart from_index(int i) { return {i / 4, i % 4 + 1}; }

  friend bool operator==(const Dart&, const Dart&) = default;
  friend auto operator<=>(const Dart& a, const Dart& b) { return a.index() <=> b.index(); }
};

struct EdgeSpec {
  Dart first;
  Dart second;
};

/// Weight parameters. `beta` is always populated; `c` is present only when the
/// file gave the un-normalized pair (a, c), in which case every weight carries c^n.
struct Params {
  Rational beta{1};
  std::optional<Rational> c;
  std::optional<Rational> a;
};

/// Counterclockwise slot order at one vertex.
using VertexRotation = std::array<int, 4>;

/// Labeled 4-regular multigraph with four-vertex weights. Immutable once built.
class FourVertexInstance {
 public:
  FourVertexInstance(int n, std::vector<EdgeSpec> edges, Params params,
                     std::optional<std::vector<VertexRotation>> rotation = std::nullopt,
                     std::optional<Dart> outer = std::nullopt);

  int vertex_count() const { return n_; }
  int dart_count() const { return 4 * n_; }
  const std::vector<EdgeSpec>& edges() const { return edges_; }
  const Params& params() const { return params_; }
  const Rational& beta() const { return params_.beta; }

  const std::optional<std::vector<VertexRotation>>& rotation() const { return rotation_; }
  const std::optional<Dart>& outer_face_hint() const { return outer_; }

  /// The other end of the edge through `d`.
  Dart partner(Dart d) const { return Dart::from_index(partner_[d.index()]); }
  int partner_index(int dart) const { return partner_[dart]; }
  /// Edge id (position in the file) owning dart `d`.
  int edge_of(Dart d) const { return edge_of_[d.index()]; }

  /// Copy with replaced parameters.
  FourVertexInstance with_params(Params params) const;
  FourVertexInstance with_rotation(std::vector<VertexRotation> rotation,
                                   std::optional<Dart> outer) const;

  /// Number of connected components of the underlying multigraph.
  int component_count() const;

 private:
  int n_;
  std::vector<EdgeSpec> edges_;
  Params params_;
  std::optional<std::vector<VertexRotation>> rotation_;
  std::optional<Dart> outer_;
  std::vector<int> partner_;
  std::vector<int> edge_of_;
};

/// Slot 1 (x1) flips to slot 4 (x4) and 2 to 3 inside a vertex.
constexpr int paired_slot(int slot) { return 5 - slot; }
inline Dart paired(Dart d) { return {d.vertex, paired_slot(d.slot)}; }

FourVertexInstance parse_instance(std::string_view text);
FourVertexInstance load_instance(const std::string& path);
std::string write_instance(const FourVertexInstance& instance);

/// Dart values; entry i is the value of Dart::from_index(i). Value 1 means the
/// arrow on that edge points away from the dart's vertex.
using DartConfig = std::vector<std::uint8_t>;

/// Local weight of f* for the pattern x1x2x3x4 packed MSB-first (x1 = bit 3):
/// beta for 0011/1100, 1 for 0101/1010, 0 otherwise.
Rational vertex_weight(const FourVertexInstance& instance, unsigned local);

/// Local pattern of vertex v under a configuration, packed as in vertex_weight.
unsigned local_pattern(const DartConfig& config, int vertex);

/// Product of vertex weights (times c^n for un-normalized params); zero when
/// some edge carries equal dart values.
Rational config_weight(const FourVertexInstance& instance, const DartConfig& config);

bool is_valid_configuration(const FourVertexInstance& instance, const DartConfig& config);

/// Default enumeration cap, in darts.
inline constexpr int kDefaultDartCap = 32;

/// Exact partition function by enumerating edge orientations. This is the
/// independent oracle for every other route.
Rational brute_force_partition(const FourVertexInstance& instance, int dart_cap = kDefaultDartCap);

struct WeightedConfig {
  DartConfig config;
  Rational weight;
};

/// Support of the Gibbs distribution, in lexicographic order of edge orientation.
std::vector<WeightedConfig> enumerate_configurations(const FourVertexInstance& instance,
                                                     int dart_cap = kDefaultDartCap);

/// c^n for un-normalized parameters, 1 otherwise.
Rational weight_scale(const FourVertexInstance& instance);

}  // namespace fourvertex
