#include "fourvertex/instance.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "fourvertex/error.hpp"

namespace fourvertex {

namespace {

bool valid_dart(const Dart& d, int n) {
  return d.vertex >= 0 && d.vertex < n && d.slot >= 1 && d.slot <= 4;
}

std::string dart_str(const Dart& d) {
  return "(" + std::to_string(d.vertex) + "," + std::to_string(d.slot) + ")";
}

}  // namespace

FourVertexInstance::FourVertexInstance(int n, std::vector<EdgeSpec> edges, Params params,
                                       std::optional<std::vector<VertexRotation>> rotation,
                                       std::optional<Dart> outer)
    : n_(n),
      edges_(std::move(edges)),
      params_(std::move(params)),
      rotation_(std::move(rotation)),
      outer_(outer) {
  if (n_ < 1) throw Error(ErrorCode::MalformedLine, "vertex count must be positive");
  partner_.assign(4 * n_, -1);
  edge_of_.assign(4 * n_, -1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& [a, b] = edges_[e];
    if (!valid_dart(a, n_) || !valid_dart(b, n_)) {
      throw Error(ErrorCode::MalformedLine, "edge " + std::to_string(e) + " names a dart outside the graph");
    }
    if (a == b) throw Error(ErrorCode::SlotReused, "edge " + std::to_string(e) + " joins " + dart_str(a) + " to itself");
    for (const Dart& d : {a, b}) {
      if (partner_[d.index()] != -1) throw Error(ErrorCode::SlotReused, "dart " + dart_str(d) + " used twice");
    }
    partner_[a.index()] = b.index();
    partner_[b.index()] = a.index();
    edge_of_[a.index()] = edge_of_[b.index()] = static_cast<int>(e);
  }
  for (int i = 0; i < 4 * n_; ++i) {
    if (partner_[i] == -1) throw Error(ErrorCode::NotFourRegular, "dart " + dart_str(Dart::from_index(i)) + " is unused");
  }

  if (params_.c || params_.a) {
    if (!params_.c || !params_.a) throw Error(ErrorCode::BadParams, "a and c must be given together");
    if (*params_.c <= 0) throw Error(ErrorCode::BadParams, "c must be positive");
    if (*params_.a < 0) throw Error(ErrorCode::BadParams, "a must be nonnegative");
    params_.beta = *params_.a / *params_.c;
  } else if (params_.beta <= 0) {
    throw Error(ErrorCode::BadParams, "beta must be positive");
  }

  if (rotation_) {
    if (static_cast<int>(rotation_->size()) != n_) {
      throw Error(ErrorCode::RotationIncomplete, "rotation must list every vertex");
    }
    for (int v = 0; v < n_; ++v) {
      auto order = (*rotation_)[v];
      std::sort(order.begin(), order.end());
      if (order != VertexRotation{1, 2, 3, 4}) {
        throw Error(ErrorCode::RotationIncomplete, "rotation at vertex " + std::to_string(v) + " is not a permutation of 1..4");
      }
    }
  }
  if (outer_ && !valid_dart(*outer_, n_)) throw Error(ErrorCode::MalformedLine, "outer dart outside the graph");
}

FourVertexInstance FourVertexInstance::with_params(Params params) const {
  return FourVertexInstance(n_, edges_, std::move(params), rotation_, outer_);
}

FourVertexInstance FourVertexInstance::with_rotation(std::vector<VertexRotation> rotation,
                                                     std::optional<Dart> outer) const {
  return FourVertexInstance(n_, edges_, params_, std::move(rotation), outer);
}

int FourVertexInstance::component_count() const {
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  int components = n_;
  for (const auto& e : edges_) {
    int a = find(e.first.vertex), b = find(e.second.vertex);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

FourVertexInstance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::optional<int> n;
  std::optional<Rational> beta, a, c;
  std::vector<EdgeSpec> edges;
  std::vector<std::optional<VertexRotation>> rot;
  bool any_rot = false;
  std::optional<Dart> outer;

  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": " + why);
  };
  auto number = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw fail("expected an integer, got '" + tok + "'");
    }
  };
  auto rational = [&](const std::string& tok) {
    try {
      return parse_rational(tok);
    } catch (const std::exception&) {
      throw fail("expected a number, got '" + tok + "'");
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    const std::string& key = tok[0];
    auto expect = [&](std::size_t count) {
      if (tok.size() != count) throw fail("'" + key + "' expects " + std::to_string(count - 1) + " fields");
    };
    if (key == "n") {
      expect(2);
      if (n) throw fail("duplicate 'n'");
      n = number(tok[1]);
      if (*n < 1) throw fail("n must be positive");
      rot.assign(*n, std::nullopt);
    } else if (key == "beta") {
      expect(2);
      beta = rational(tok[1]);
    } else if (key == "a") {
      expect(2);
      a = rational(tok[1]);
    } else if (key == "c") {
      expect(2);
      c = rational(tok[1]);
    } else if (key == "e") {
      expect(5);
      edges.push_back({{number(tok[1]), number(tok[2])}, {number(tok[3]), number(tok[4])}});
    } else if (key == "rot") {
      expect(6);
      if (!n) throw fail("'rot' before 'n'");
      int v = number(tok[1]);
      if (v < 0 || v >= *n) throw fail("vertex out of range");
      if (rot[v]) throw fail("duplicate rotation for vertex " + std::to_string(v));
      rot[v] = VertexRotation{number(tok[2]), number(tok[3]), number(tok[4]), number(tok[5])};
      any_rot = true;
    } else if (key == "outer") {
      expect(3);
      outer = Dart{number(tok[1]), number(tok[2])};
    } else {
      throw fail("unknown keyword '" + key + "'");
    }
  }
  if (!n) throw Error(ErrorCode::MalformedLine, "missing 'n' line");

  Params params;
  if (a || c) {
    params.a = a;
    params.c = c;
    if (beta && a && c && *c != 0 && *beta != *a / *c) {
      throw Error(ErrorCode::BadParams, "beta disagrees with a/c");
    }
  } else if (beta) {
    params.beta = *beta;
  } else {
    throw Error(ErrorCode::BadParams, "no weight parameters (beta, or a and c)");
  }

  std::optional<std::vector<VertexRotation>> rotation;
  if (any_rot) {
    std::vector<VertexRotation> r;
    for (int v = 0; v < *n; ++v) {
      if (!rot[v]) throw Error(ErrorCode::RotationIncomplete, "no rotation for vertex " + std::to_string(v));
      r.push_back(*rot[v]);
    }
    rotation = std::move(r);
  }
  return FourVertexInstance(*n, std::move(edges), std::move(params), std::move(rotation), outer);
}

FourVertexInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedLine, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string write_instance(const FourVertexInstance& instance) {
  std::ostringstream out;
  out << "n " << instance.vertex_count() << "\n";
  const auto& p = instance.params();
  if (p.a && p.c) {
    out << "a " << to_string(*p.a) << "\n" << "c " << to_string(*p.c) << "\n";
  } else {
    out << "beta " << to_string(p.beta) << "\n";
  }
  for (const auto& e : instance.edges()) {
    out << "e " << e.first.vertex << " " << e.first.slot << " " << e.second.vertex << " " << e.second.slot << "\n";
  }
  if (const auto& rot = instance.rotation()) {
    for (int v = 0; v < instance.vertex_count(); ++v) {
      const auto& r = (*rot)[v];
      out << "rot " << v << " " << r[0] << " " << r[1] << " " << r[2] << " " << r[3] << "\n";
    }
  }
  if (const auto& o = instance.outer_face_hint()) out << "outer " << o->vertex << " " << o->slot << "\n";
  return out.str();
}

Rational vertex_weight(const FourVertexInstance& instance, unsigned local) {
  switch (local & 0xFu) {
    case 0b0011:
    case 0b1100:
      return instance.beta();
    case 0b0101:
    case 0b1010:
      return Rational(1);
    default:
      return Rational(0);
  }
}

unsigned local_pattern(const DartConfig& config, int vertex) {
  const int base = 4 * vertex;
  return (unsigned(config[base]) << 3) | (unsigned(config[base + 1]) << 2) | (unsigned(config[base + 2]) << 1) |
         unsigned(config[base + 3]);
}

Rational weight_scale(const FourVertexInstance& instance) {
  const auto& c = instance.params().c;
  return c ? pow(*c, instance.vertex_count()) : Rational(1);
}

bool is_valid_configuration(const FourVertexInstance& instance, const DartConfig& config) {
  if (static_cast<int>(config.size()) != instance.dart_count()) return false;
  for (int d = 0; d < instance.dart_count(); ++d) {
    if (config[d] == config[instance.partner_index(d)]) return false;
  }
  for (int v = 0; v < instance.vertex_count(); ++v) {
    unsigned p = local_pattern(config, v);
    if (p != 0b0011 && p != 0b1100 && p != 0b0101 && p != 0b1010) return false;
  }
  return true;
}

Rational config_weight(const FourVertexInstance& instance, const DartConfig& config) {
  if (static_cast<int>(config.size()) != instance.dart_count()) return Rational(0);
  for (int d = 0; d < instance.dart_count(); ++d) {
    if (config[d] == config[instance.partner_index(d)]) return Rational(0);
  }
  Rational w = weight_scale(instance);
  for (int v = 0; v < instance.vertex_count() && w != 0; ++v) w *= vertex_weight(instance, local_pattern(config, v));
  return w;
}

namespace {

/// Depth-first enumeration of edge orientations. A vertex's pattern is checked
/// as soon as its last incident edge is oriented. `visit` receives the
/// configuration and the number of beta-weighted vertices.
void for_each_orientation(const FourVertexInstance& instance, int dart_cap,
                          const std::function<void(const DartConfig&, int)>& visit) {
  if (instance.dart_count() > dart_cap) {
    throw Error(ErrorCode::TooLarge, std::to_string(instance.dart_count()) + " darts exceed the enumeration cap of " +
                                         std::to_string(dart_cap));
  }
  const auto& edges = instance.edges();
  const int n = instance.vertex_count();
  std::vector<std::vector<int>> completes(edges.size());
  std::vector<int> last(n, -1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    last[edges[e].first.vertex] = static_cast<int>(e);
    last[edges[e].second.vertex] = static_cast<int>(e);
  }
  for (int v = 0; v < n; ++v) completes[last[v]].push_back(v);

  DartConfig config(instance.dart_count(), 0);
  std::function<void(std::size_t, int)> go = [&](std::size_t e, int beta_count) {
    if (e == edges.size()) {
      visit(config, beta_count);
      return;
    }
    const int a = edges[e].first.index();
    const int b = edges[e].second.index();
    for (int orient = 0; orient < 2; ++orient) {
      config[a] = static_cast<std::uint8_t>(1 - orient);
      config[b] = static_cast<std::uint8_t>(orient);
      int count = beta_count;
      bool ok = true;
      for (int v : completes[e]) {
        unsigned p = local_pattern(config, v);
        if (p == 0b0011 || p == 0b1100) {
          ++count;
        } else if (p != 0b0101 && p != 0b1010) {
          ok = false;
          break;
        }
      }
      if (ok) go(e + 1, count);
    }
  };
  go(0, 0);
}

}  // namespace

Rational brute_force_partition(const FourVertexInstance& instance, int dart_cap) {
  std::vector<Integer> by_beta(instance.vertex_count() + 1, 0);
  for_each_orientation(instance, dart_cap, [&](const DartConfig&, int k) { by_beta[k] += 1; });
  Rational z = 0;
  Rational power = 1;
  for (const auto& count : by_beta) {
    z += Rational(count) * power;
    power *= instance.beta();
  }
  return z * weight_scale(instance);
}

std::vector<WeightedConfig> enumerate_configurations(const FourVertexInstance& instance, int dart_cap) {
  std::vector<WeightedConfig> out;
  const Rational scale = weight_scale(instance);
  for_each_orientation(instance, dart_cap, [&](const DartConfig& config, int k) {
    Rational w = scale * pow(instance.beta(), k);
    if (w > 0) out.push_back({config, w});
  });
  return out;
}

}  // namespace fourvertex
