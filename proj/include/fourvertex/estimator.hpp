#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fourvertex/even_subgraph.hpp"
#include "fourvertex/instance.hpp"
#include "fourvertex/worm.hpp"

namespace fourvertex {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'4f56'2024ULL;

/// Temperatures t_0 = 0 < t_1 = 2^-|E| < ... < t_L = 1 with
/// t_{i+1} <= t_i (1 + 1/|E|); every x_e is scaled by t.
struct Schedule {
  std::vector<Rational> levels;
};

Schedule make_schedule(int edge_count);

struct EstimatorOptions {
  double epsilon = 0.1;
  double delta = 0.25;
  std::uint64_t seed = kDefaultSeed;
  /// Cap on the chain length used for each sample.
  std::uint64_t max_steps_per_level = 10000;
  /// Fixed chain length per sample, bypassing the mixing-time default.
  std::optional<std::uint64_t> steps_per_sample;
  /// Worker threads; 0 picks the hardware count. Results do not depend on it.
  unsigned threads = 0;
};

struct Estimate {
  double log_value = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t samples_used = 0;
  std::uint64_t seed = 0;
  bool exact = false;  // closed form, no sampling
  std::size_t levels = 0;
  std::size_t copies = 0;
  std::uint64_t steps_per_sample = 0;  // longest chain used
};

/// Telescoping-product estimate of ln Z_0. Components of the ferro graph are
/// estimated separately and their logs added.
Estimate estimate_Z0(const FerroIsingInstance& ferro, const EstimatorOptions& options);

/// Full pipeline estimate of ln Z. Throws NoFerroReduction when the parity
/// system is infeasible; beta = 1 is answered in closed form.
Estimate estimate_partition(const FourVertexInstance& instance, const EstimatorOptions& options);

/// Approximate Gibbs sampler over four-vertex configurations.
class ConfigurationSampler {
 public:
  explicit ConfigurationSampler(const FourVertexInstance& instance);

  const Reduction& reduction() const { return reduction_; }
  const FerroIsingInstance& ferro() const { return *reduction_.ferro; }

  DartConfig draw(std::uint64_t steps, Rng& rng) const;
  /// Sample k of a run uses a stream derived from (seed, k).
  std::vector<DartConfig> draw_many(std::uint64_t steps, std::size_t count, std::uint64_t seed,
                                    unsigned threads = 0) const;

 private:
  FourVertexInstance instance_;
  Reduction reduction_;
  std::optional<FerroWormSampler> worm_;
};

DartConfig sample_configuration(const FourVertexInstance& instance, std::uint64_t steps, std::uint64_t seed);

}  // namespace fourvertex
