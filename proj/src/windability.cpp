#include "fourvertex/windability.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "fourvertex/error.hpp"

namespace fourvertex {

ConstraintFunction ConstraintFunction::from_table(int arity, std::vector<Rational> table) {
  if (arity < 0 || arity > 4) throw Error(ErrorCode::ArityTooLarge, "arity " + std::to_string(arity) + " exceeds 4");
  if (table.size() != (std::size_t{1} << arity)) {
    throw Error(ErrorCode::BadParams, "a table of arity " + std::to_string(arity) + " needs " +
                                          std::to_string(1 << arity) + " entries");
  }
  for (const auto& v : table) {
    if (v < 0) throw Error(ErrorCode::BadParams, "constraint values must be nonnegative");
  }
  return {arity, std::move(table)};
}

ConstraintFunction fstar(const Rational& a, const Rational& c) {
  std::vector<Rational> t(16, Rational(0));
  t[0b0011] = t[0b1100] = a;
  t[0b0101] = t[0b1010] = c;
  return ConstraintFunction::from_table(4, std::move(t));
}

std::vector<unsigned> MatchingPartition::part_masks(int arity) const {
  auto bit = [arity](int i) { return 1u << (arity - i); };
  std::vector<unsigned> out;
  for (auto [i, j] : pairs) out.push_back(bit(i) | bit(j));
  if (singleton) out.push_back(bit(*singleton));
  return out;
}

namespace {

void extend(std::vector<int> rest, MatchingPartition current, std::vector<MatchingPartition>& out) {
  if (rest.empty()) {
    out.push_back(std::move(current));
    return;
  }
  const int i = rest.front();
  rest.erase(rest.begin());
  if (rest.size() % 2 == 0 && !current.singleton) {
    MatchingPartition next = current;
    next.singleton = i;
    extend(rest, std::move(next), out);
  }
  for (std::size_t k = 0; k < rest.size(); ++k) {
    MatchingPartition next = current;
    next.pairs.push_back({i, rest[k]});
    std::vector<int> left = rest;
    left.erase(left.begin() + static_cast<long>(k));
    extend(std::move(left), std::move(next), out);
  }
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

/// Phase I of the simplex method with Bland's rule on {A z = b, z >= 0}, b > 0,
/// A a 0/1 matrix given by its row supports. Returns z when feasible.
std::optional<std::vector<Rational>> phase_one(std::size_t columns, const std::vector<std::vector<std::size_t>>& rows,
                                               const std::vector<Rational>& rhs) {
  const std::size_t r = rows.size();
  const std::size_t width = columns + r;  // originals, then artificials
  std::vector<std::vector<Rational>> t(r, std::vector<Rational>(width + 1, Rational(0)));
  std::vector<Rational> obj(width + 1, Rational(0));
  std::vector<std::size_t> basis(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j : rows[i]) t[i][j] = 1;
    t[i][columns + i] = 1;
    t[i][width] = rhs[i];
    basis[i] = columns + i;
    for (std::size_t j : rows[i]) obj[j] -= 1;
    obj[width] -= rhs[i];
  }
  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < width; ++j) {
      if (obj[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = r;
    Rational best;
    for (std::size_t i = 0; i < r; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][width] / t[i][enter];
      if (leave == r || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == r) throw Error(ErrorCode::InternalError, "phase one is unbounded");
    const Rational pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    auto eliminate = [&](std::vector<Rational>& row) {
      const Rational factor = row[enter];
      if (factor == 0) return;
      for (std::size_t j = 0; j <= width; ++j) {
        if (t[leave][j] != 0) row[j] -= factor * t[leave][j];
      }
    };
    for (std::size_t i = 0; i < r; ++i) {
      if (i != leave) eliminate(t[i]);
    }
    eliminate(obj);
    basis[leave] = enter;
  }
  if (obj[width] != 0) return std::nullopt;
  std::vector<Rational> z(columns, Rational(0));
  for (std::size_t i = 0; i < r; ++i) {
    if (basis[i] < columns) z[basis[i]] = t[i][width];
  }
  return z;
}

struct VariableIndex {
  int arity;
  std::vector<std::vector<MatchingPartition>> by_diff;  // matchings(d) for every d
  std::vector<std::size_t> offset;                      // per (x, y)
  std::size_t total = 0;

  explicit VariableIndex(int j) : arity(j) {
    const unsigned size = 1u << j;
    for (unsigned d = 0; d < size; ++d) by_diff.push_back(matchings(d, j));
    for (unsigned x = 0; x < size; ++x) {
      for (unsigned y = 0; y < size; ++y) {
        offset.push_back(total);
        total += by_diff[x ^ y].size();
      }
    }
  }
  unsigned size() const { return 1u << arity; }
  std::size_t id(unsigned x, unsigned y, std::size_t m) const { return offset[x * size() + y] + m; }
};

}  // namespace

std::vector<MatchingPartition> matchings(unsigned z, int arity) {
  std::vector<int> ones;
  for (int i = 1; i <= arity; ++i) {
    if ((z >> (arity - i)) & 1) ones.push_back(i);
  }
  std::vector<MatchingPartition> out;
  extend(ones, {}, out);
  return out;
}

WindabilityResult check_windable(const ConstraintFunction& f) {
  const ConstraintFunction g = ConstraintFunction::from_table(f.arity, f.table);
  const VariableIndex idx(g.arity);
  const unsigned size = idx.size();

  UnionFind uf(idx.total);
  for (unsigned x = 0; x < size; ++x) {
    for (unsigned y = 0; y < size; ++y) {
      const auto& ms = idx.by_diff[x ^ y];
      for (std::size_t m = 0; m < ms.size(); ++m) {
        for (unsigned s : ms[m].part_masks(g.arity)) uf.unite(idx.id(x, y, m), idx.id(x ^ s, y ^ s, m));
      }
    }
  }
  std::vector<std::size_t> orbit_of(idx.total);
  std::map<std::size_t, std::size_t> orbit_id;
  for (std::size_t v = 0; v < idx.total; ++v) {
    orbit_of[v] = orbit_id.try_emplace(uf.find(v), orbit_id.size()).first->second;
  }
  const std::size_t orbits = orbit_id.size();

  // one equation per (x, y); a zero right-hand side forces its orbits to 0
  std::vector<std::vector<std::size_t>> support;
  std::vector<Rational> rhs;
  std::vector<bool> forced_zero(orbits, false);
  for (unsigned x = 0; x < size; ++x) {
    for (unsigned y = 0; y < size; ++y) {
      std::vector<std::size_t> row;
      for (std::size_t m = 0; m < idx.by_diff[x ^ y].size(); ++m) row.push_back(orbit_of[idx.id(x, y, m)]);
      std::sort(row.begin(), row.end());
      const Rational b = g.table[x] * g.table[y];
      if (b == 0) {
        for (auto o : row) forced_zero[o] = true;
      } else {
        support.push_back(std::move(row));
        rhs.push_back(b);
      }
    }
  }

  WindabilityResult out;
  out.variables = idx.total;
  out.orbits = orbits;

  std::vector<std::size_t> column(orbits, orbits);
  std::size_t free_count = 0;
  for (std::size_t o = 0; o < orbits; ++o) {
    if (!forced_zero[o]) column[o] = free_count++;
  }
  std::map<std::vector<std::size_t>, Rational> unique_rows;
  for (std::size_t i = 0; i < support.size(); ++i) {
    std::vector<std::size_t> cols;
    for (auto o : support[i]) {
      if (!forced_zero[o]) cols.push_back(column[o]);
    }
    if (cols.empty()) return out;
    auto [it, inserted] = unique_rows.try_emplace(cols, rhs[i]);
    if (!inserted && it->second != rhs[i]) return out;
  }
  std::vector<std::vector<std::size_t>> rows;
  std::vector<Rational> b;
  for (auto& [cols, value] : unique_rows) {
    rows.push_back(cols);
    b.push_back(value);
  }
  const auto z = phase_one(free_count, rows, b);
  if (!z) return out;

  out.windable = true;
  for (unsigned x = 0; x < size; ++x) {
    for (unsigned y = 0; y < size; ++y) {
      for (std::size_t m = 0; m < idx.by_diff[x ^ y].size(); ++m) {
        const std::size_t o = orbit_of[idx.id(x, y, m)];
        out.certificate.push_back({x, y, m, forced_zero[o] ? Rational(0) : (*z)[column[o]]});
      }
    }
  }
  return out;
}

bool verify_certificate(const ConstraintFunction& f, const std::vector<WindingValue>& certificate) {
  if (f.arity < 0 || f.arity > 4 || f.table.size() != (std::size_t{1} << f.arity)) return false;
  const unsigned size = 1u << f.arity;
  std::map<std::tuple<unsigned, unsigned, std::size_t>, Rational> value;
  for (const auto& w : certificate) {
    if (w.x >= size || w.y >= size || w.value < 0) return false;
    if (w.matching >= matchings(w.x ^ w.y, f.arity).size()) return false;
    if (!value.try_emplace({w.x, w.y, w.matching}, w.value).second) return false;
  }
  for (unsigned x = 0; x < size; ++x) {
    for (unsigned y = 0; y < size; ++y) {
      const auto ms = matchings(x ^ y, f.arity);
      Rational sum = 0;
      for (std::size_t m = 0; m < ms.size(); ++m) {
        const auto it = value.find({x, y, m});
        if (it == value.end()) return false;
        sum += it->second;
        for (unsigned s : ms[m].part_masks(f.arity)) {
          const auto other = value.find({x ^ s, y ^ s, m});
          if (other == value.end() || other->second != it->second) return false;
        }
      }
      if (sum != f.table[x] * f.table[y]) return false;
    }
  }
  return true;
}

}  // namespace fourvertex
