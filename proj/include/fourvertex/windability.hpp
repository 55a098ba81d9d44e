#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fourvertex/rational.hpp"

namespace fourvertex {

/// f: {0,1}^J -> Q+, J <= 4. Entry x of the table is the input x_1..x_J
/// packed MSB-first (x_1 is the highest bit), as for vertex patterns.
struct ConstraintFunction {
  int arity = 0;
  std::vector<Rational> table;

  static ConstraintFunction from_table(int arity, std::vector<Rational> table);
};

/// f* with weight a on 0011/1100, c on 0101/1010, 0 elsewhere.
ConstraintFunction fstar(const Rational& a, const Rational& c);

/// Partition of the set bits of z into pairs and at most one singleton.
/// Indices are 1-based positions (1 = x_1).
struct MatchingPartition {
  std::vector<std::pair<int, int>> pairs;
  std::optional<int> singleton;

  /// Bitmasks of each part, MSB-first over `arity` positions.
  std::vector<unsigned> part_masks(int arity) const;
  friend bool operator==(const MatchingPartition&, const MatchingPartition&) = default;
};

std::vector<MatchingPartition> matchings(unsigned z, int arity);

struct WindingValue {
  unsigned x = 0;
  unsigned y = 0;
  std::size_t matching = 0;  // index into matchings(x ^ y, arity)
  Rational value;
};

struct WindabilityResult {
  bool windable = false;
  std::vector<WindingValue> certificate;  // every B(x, y, M), windable only
  std::size_t variables = 0;              // before symmetry merging
  std::size_t orbits = 0;
};

/// Exact feasibility of winding values B(x, y, M) >= 0. Throws ArityTooLarge
/// for J > 4 and BadParams for negative entries.
WindabilityResult check_windable(const ConstraintFunction& f);

/// Independent check that a certificate satisfies both conditions exactly.
bool verify_certificate(const ConstraintFunction& f, const std::vector<WindingValue>& certificate);

}  // namespace fourvertex
