#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "fourvertex/planar.hpp"
#include "test_support.hpp"

using namespace fvtest;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalError;
}

FourVertexInstance figure_eight(const Rational& beta, Dart outer) {
  Params p;
  p.beta = beta;
  return FourVertexInstance(1, {{{0, 1}, {0, 2}}, {{0, 3}, {0, 4}}}, p, std::vector<VertexRotation>{{1, 2, 3, 4}},
                            outer);
}

// Triangle with every edge doubled; slots 1, 2 go to the next vertex, 3, 4 to the previous.
FourVertexInstance doubled_triangle(const Rational& beta) {
  std::vector<EdgeSpec> edges;
  for (int v = 0; v < 3; ++v) {
    const int w = (v + 1) % 3;
    edges.push_back({{v, 1}, {w, 4}});
    edges.push_back({{v, 2}, {w, 3}});
  }
  Params p;
  p.beta = beta;
  const FourVertexInstance probe(3, edges, p, std::vector<VertexRotation>(3, {1, 2, 3, 4}), Dart{0, 1});
  const auto faces = trace_faces(probe);
  for (const auto& f : faces.faces) {
    if (f.size() == 3) return probe.with_rotation(*probe.rotation(), Dart::from_index(f.front()));
  }
  throw std::logic_error("no triangular face");
}

}  // namespace

TEST(Planar, ThetaFaces) {
  const auto inst = theta4(Rational(2));
  const auto faces = trace_faces(inst);
  ASSERT_EQ(faces.face_count(), 4);
  for (const auto& f : faces.faces) EXPECT_EQ(f.size(), 2u);
  const auto col = two_color_faces(inst, faces);
  EXPECT_EQ(col.black_count(), 2);
  EXPECT_EQ(col.black[faces.outer], 0);
}

TEST(Planar, OctahedronFaces) {
  const auto inst = octahedron(Rational(2));
  const auto faces = trace_faces(inst);
  ASSERT_EQ(faces.face_count(), 8);
  for (const auto& f : faces.faces) EXPECT_EQ(f.size(), 3u);
  EXPECT_EQ(two_color_faces(inst, faces).black_count(), 4);
}

TEST(Planar, Errors) {
  const auto inst = theta4(Rational(2));
  const auto torus = inst.with_rotation({{1, 2, 3, 4}, {1, 2, 3, 4}}, Dart{0, 1});
  EXPECT_EQ(code_of([&] { trace_faces(torus); }), ErrorCode::NotPlanarEmbedding);
  EXPECT_EQ(code_of([&] { trace_faces(inst.with_rotation(*inst.rotation(), std::nullopt)); }),
            ErrorCode::MissingOuterFace);
  const FourVertexInstance bare(2, inst.edges(), inst.params());
  EXPECT_EQ(code_of([&] { trace_faces(bare); }), ErrorCode::RotationIncomplete);
  EXPECT_EQ(code_of([&] { planar_partition(inst); }), ErrorCode::NotCanonicalLabeling);
}

TEST(Planar, ThetaPipeline) {
  const auto inst = canonical_label(theta4(Rational(2)));
  const auto d = decompose(inst);
  ASSERT_EQ(d.circuit_count(), 2);
  const auto faces = trace_faces(inst);
  const auto col = two_color_faces(inst, faces);
  // each circuit runs around one black bigon
  for (const auto& c : d.circuits) {
    std::set<int> black_faces;
    for (const auto& dart : c.darts) {
      const int f = faces.face_of[dart.index()];
      if (col.black[f]) black_faces.insert(f);
    }
    EXPECT_EQ(black_faces.size(), 1u);
  }
  const auto h = build_black_face_graph(inst, faces, col);
  EXPECT_EQ(h.k, 2);
  EXPECT_EQ(h.self_loops, 0);
  ASSERT_EQ(h.collapsed.size(), 1u);
  EXPECT_EQ(h.collapsed[0].multiplicity, 2);
  EXPECT_EQ(h.collapsed[0].beta_e, 4);
  EXPECT_EQ(*planar_partition(inst).exact, 10);
  EXPECT_EQ(brute_force_partition(inst), 10);
}

TEST(Planar, OctahedronPipeline) {
  const auto inst = octahedron(Rational(2));
  const auto faces = trace_faces(inst);
  const auto col = two_color_faces(inst, faces);
  EXPECT_TRUE(is_canonical(inst, faces, col));
  EXPECT_EQ(decompose(inst).circuit_count(), 4);
  const auto g = classify(inst, decompose(inst));
  EXPECT_EQ(g.edges.size(), 6u);  // K4
  const auto h = build_black_face_graph(inst, faces, col);
  EXPECT_EQ(h.k, 4);
  EXPECT_EQ(h.collapsed.size(), 6u);
  for (const auto& e : h.collapsed) EXPECT_EQ(e.beta_e, 2);
  EXPECT_EQ(*planar_partition(inst).exact, 216);
  EXPECT_EQ(2 * 64 + 8 * 8 + 6 * 4, 216);
  EXPECT_EQ(*planar_partition(octahedron(Rational(1))).exact, 16);
}

TEST(Planar, RawOctahedronRelabels) {
  const auto raw = load_instance(data_path("octahedron_raw.fv")).with_params(Params{Rational(2)});
  const auto canon = canonical_label(raw);
  EXPECT_EQ(write_instance(canon), write_instance(octahedron(Rational(2))));
  EXPECT_EQ(write_instance(canonical_label(canon)), write_instance(canon));
}

TEST(Planar, FigureEight) {
  // outer face is the big one: both loop interiors are black
  const auto big = canonical_label(figure_eight(Rational(2), Dart{0, 1}));
  auto faces = trace_faces(big);
  ASSERT_EQ(faces.face_count(), 3);
  auto h = build_black_face_graph(big, faces, two_color_faces(big, faces));
  // the outer face is whichever face the hint dart sits on
  if (h.k == 2) {
    EXPECT_EQ(h.self_loops, 0);
    EXPECT_EQ(*planar_partition(big).exact, 6);  // 2 beta + 2
  } else {
    EXPECT_EQ(h.self_loops, 1);
    EXPECT_EQ(*planar_partition(big).exact, 4);  // 2 beta
  }
  EXPECT_EQ(*planar_partition(big).exact, brute_force_partition(big));

  std::set<int> seen_k;
  for (int d = 0; d < 4; ++d) {
    const auto inst = canonical_label(figure_eight(Rational(3), Dart::from_index(d)));
    const auto f = trace_faces(inst);
    const auto hh = build_black_face_graph(inst, f, two_color_faces(inst, f));
    seen_k.insert(hh.k);
    EXPECT_EQ(hh.edges.size() + hh.self_loops, 1u);
    EXPECT_EQ(*planar_partition(inst).exact, brute_force_partition(inst));
    EXPECT_EQ(*planar_partition(inst).exact, hh.k == 1 ? 6 : 8);
  }
  EXPECT_EQ(seen_k, (std::set<int>{1, 2}));
}

TEST(Planar, SwappedColoringChangesLabelingAndZ) {
  const auto inst = doubled_triangle(Rational(2));
  const auto faces = trace_faces(inst);
  const auto col = two_color_faces(inst, faces);
  EXPECT_EQ(col.black_count(), 3);
  const auto white_outer = canonical_label(inst, faces, col);
  const auto black_outer = canonical_label(inst, faces, col.swapped());
  // H is a triangle with beta_e = beta, or a triple edge collapsed to beta^3
  EXPECT_EQ(brute_force_partition(white_outer), 2 * 8 + 6 * 2);
  EXPECT_EQ(brute_force_partition(black_outer), 2 * 8 + 2);
  const auto hs = build_black_face_graph(inst, faces, col.swapped());
  EXPECT_EQ(hs.k, 2);
  ASSERT_EQ(hs.collapsed.size(), 1u);
  EXPECT_EQ(hs.collapsed[0].beta_e, 8);
}

TEST(Planar, SpinConvention) {
  const auto inst = octahedron(Rational(2));
  const auto faces = trace_faces(inst);
  const auto col = two_color_faces(inst, faces);
  const auto h = build_black_face_graph(inst, faces, col);
  std::set<std::vector<std::uint8_t>> seen;
  for (const auto& wc : enumerate_configurations(inst)) {
    const auto spins = black_face_spins(inst, faces, col, h, wc.config);
    seen.insert(spins);
    Rational w = pow(inst.beta(), h.self_loops);
    for (const auto& e : h.edges) {
      if (spins[e.u] == spins[e.v]) w *= inst.beta();
    }
    EXPECT_EQ(w, wc.weight);
  }
  EXPECT_EQ(seen.size(), 16u);
  // spin 0 means every boundary dart of the face has its black corner (d, succ d) and value 1
  const auto zero = std::vector<std::uint8_t>(h.k, 0);
  EXPECT_TRUE(seen.count(zero));
}

TEST(Planar, MixingBound) {
  const double expected = 512 * (std::log(20.0) / 2 + std::log(5.0 / 6));
  EXPECT_NEAR(planar_mixing_bound(canonical_label(theta4(Rational(2))), 0.1), expected, 1e-9);
  EXPECT_NEAR(planar_mixing_bound(2, 4.0, 0.1), expected, 1e-9);
  EXPECT_LT(planar_mixing_bound(2, 4.0, 0.2), expected);
  EXPECT_LT(planar_mixing_bound(2, 5.0, 0.1), expected);
  EXPECT_EQ(code_of([] { planar_mixing_bound(2, 1.0, 0.1); }), ErrorCode::BetaAtMostOne);
  EXPECT_EQ(code_of([] { planar_mixing_bound(canonical_label(theta4(Rational(1))), 0.1); }),
            ErrorCode::BetaAtMostOne);
}

TEST(Planar, RandomPlanarInstances) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 7);
    const auto raw = random_planar(n, Rational(trial % 3 + 1), gen);
    const auto inst = canonical_label(raw);
    const auto faces = trace_faces(inst);
    EXPECT_EQ(n - 2 * n + faces.face_count(), 2);
    const auto col = two_color_faces(inst, faces);
    EXPECT_EQ(col.black[faces.outer], 0);
    for (int d = 0; d < inst.dart_count(); ++d) {
      EXPECT_NE(col.black[faces.face_of[d]], col.black[faces.face_of[inst.partner_index(d)]]);
    }
    EXPECT_EQ(write_instance(canonical_label(inst)), write_instance(inst));
    EXPECT_TRUE(reduce_pipeline(inst.with_params(Params{Rational(2)})).solution.feasible);
    EXPECT_EQ(*planar_partition(inst).exact, brute_force_partition(inst));
  }
}
