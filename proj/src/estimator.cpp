#include "fourvertex/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "fourvertex/error.hpp"
#include "parallel.hpp"

namespace fourvertex {

namespace {

constexpr std::size_t kBatches = 8;

/// Odd number of independent copies whose median fails with probability <= delta
/// when each copy succeeds with probability >= 3/4.
std::size_t median_copies(double delta) {
  if (delta >= 0.25) return 1;
  auto k = static_cast<std::size_t>(std::ceil(8.0 * std::log(1.0 / delta)));
  return k % 2 == 0 ? k + 1 : k;
}

void validate(const EstimatorOptions& options) {
  if (!(options.epsilon > 0 && options.epsilon < 1)) throw Error(ErrorCode::BadParams, "epsilon must lie in (0, 1)");
  if (!(options.delta > 0 && options.delta < 1)) throw Error(ErrorCode::BadParams, "delta must lie in (0, 1)");
}

struct ComponentResult {
  double log_z0 = 0.0;
  std::uint64_t samples = 0;
  std::size_t levels = 0;
  std::size_t copies = 0;
  std::uint64_t steps = 0;
};

/// ln Z_0 of one connected component.
///
/// With factors f_0 = P_{t_1}(S = 0) = 1/Z_0(t_1) and
/// f_i = E_{t_{i+1}}[(t_i/t_{i+1})^{|S|}] = Z_0(t_i)/Z_0(t_{i+1}),
/// Z_0(1) = 1 / prod f_i. Z lands within 1 +- eps once the product of the
/// sample means lands within 1 +- eps' with eps' = eps/(1+eps). That budget is
/// split as (1 + s)^2 = 1 + eps' between sampling noise and mixing bias.
///
/// Noise: sample values lie in [rho_i, 1], rho_i = (t_i/t_{i+1})^{|E|} >= 1/e,
/// so each factor's relative variance is at most (1 - rho_i)^2 / (4 rho_i)
/// (1 for f_0). With V their sum and n samples per factor the product's
/// relative variance is at most exp(V/n) - 1 <= s^2/4, and Chebyshev puts it
/// within 1 +- s with probability >= 3/4.
///
/// Bias: a sample within total variation eta of the target moves a factor by
/// at most eta / f_i <= e * eta relatively, so eta = ln(1 + s) / (e L) keeps
/// the product's bias below s over L factors.
ComponentResult estimate_component(const FerroIsingInstance& ferro, const ComponentSplit& split, std::size_t c,
                                   double epsilon, double delta, const EstimatorOptions& options) {
  const int edge_count = static_cast<int>(split.edges[c].size());
  const Schedule schedule = make_schedule(edge_count);
  const std::size_t factors = schedule.levels.size() - 1;

  std::vector<double> base(factors, 0.0);  // t_i / t_{i+1}
  double variance_budget = 1.0;
  for (std::size_t f = 1; f < factors; ++f) {
    base[f] = Rational(schedule.levels[f] / schedule.levels[f + 1]).get_d();
    const double rho = std::pow(base[f], edge_count);
    if (rho < std::exp(-1.0) - 1e-12) throw Error(ErrorCode::InternalError, "schedule step too large");
    variance_budget += (1 - rho) * (1 - rho) / (4 * rho);
  }
  const double eps_product = epsilon / (1 + epsilon);
  const double share = std::sqrt(1 + eps_product) - 1;
  const auto samples = static_cast<std::uint64_t>(std::ceil(variance_budget / std::log1p(share * share / 4)));
  const std::size_t copies = median_copies(delta);

  std::vector<WormKernel> kernels;
  std::vector<std::uint64_t> steps;
  const double sample_tv = std::log1p(share) / (std::exp(1.0) * static_cast<double>(factors));
  for (std::size_t level = 1; level <= factors; ++level) {
    kernels.push_back(WormKernel::component(ferro, split, c, schedule.levels[level]));
    if (options.steps_per_sample) {
      steps.push_back(std::max<std::uint64_t>(1, *options.steps_per_sample));
    } else {
      const double bound = std::ceil(mixing_bound(kernels.back(), sample_tv));
      steps.push_back(static_cast<std::uint64_t>(
          std::clamp(bound, 1.0, static_cast<double>(std::max<std::uint64_t>(1, options.max_steps_per_level)))));
    }
  }

  std::vector<double> copy_estimates(copies);
  for (std::size_t copy = 0; copy < copies; ++copy) {
    double log_product = 0.0;
    for (std::size_t f = 0; f < factors; ++f) {
      const WormKernel& kernel = kernels[f];
      std::vector<double> batch_sum(kBatches, 0.0);
      detail::parallel_for(kBatches, options.threads, [&](std::size_t b) {
        Rng rng = Rng::derived(options.seed, {c, copy, f, b});
        const std::uint64_t count = samples / kBatches + (b < samples % kBatches ? 1 : 0);
        double sum = 0.0;
        for (std::uint64_t k = 0; k < count; ++k) {
          const WormState s = kernel.sample_even(steps[f], rng);
          const auto size = std::count(s.edges.begin(), s.edges.end(), std::uint8_t{1});
          sum += f == 0 ? (size == 0 ? 1.0 : 0.0) : std::pow(base[f], static_cast<double>(size));
        }
        batch_sum[b] = sum;
      });
      double total = 0.0;
      for (double s : batch_sum) total += s;
      if (f == 0) total = std::max(total, 1.0);
      const double mean = total / static_cast<double>(samples);
      if (f > 0 && (mean > 1.0 + 1e-12 || mean < std::pow(base[f], edge_count) - 1e-12)) {
        throw Error(ErrorCode::InternalError, "telescoping ratio outside its admissible range");
      }
      log_product += std::log(mean);
    }
    copy_estimates[copy] = -log_product;
  }
  std::nth_element(copy_estimates.begin(), copy_estimates.begin() + copies / 2, copy_estimates.end());
  return {copy_estimates[copies / 2], samples * factors * copies, factors, copies,
          *std::max_element(steps.begin(), steps.end())};
}

}  // namespace

Schedule make_schedule(int edge_count) {
  Schedule s;
  s.levels.push_back(Rational(0));
  if (edge_count <= 0) {
    s.levels.push_back(Rational(1));
    return s;
  }
  const Rational growth = 1 + Rational(1, edge_count);
  for (Rational t = pow(Rational(1, 2), edge_count); t < 1; t *= growth) s.levels.push_back(t);
  s.levels.push_back(Rational(1));
  return s;
}

Estimate estimate_Z0(const FerroIsingInstance& ferro, const EstimatorOptions& options) {
  validate(options);
  Estimate out;
  out.epsilon = options.epsilon;
  out.delta = options.delta;
  out.seed = options.seed;
  const ComponentSplit split = split_components(ferro);
  const std::size_t components = split.vertices.size();
  if (components == 0) {
    out.exact = true;
    return out;
  }
  // (1 + eps_c)^C = 1 + eps keeps the product inside [1 - eps, 1 + eps]
  const double eps_c = std::pow(1.0 + options.epsilon, 1.0 / static_cast<double>(components)) - 1.0;
  const double delta_c = options.delta / static_cast<double>(components);
  for (std::size_t c = 0; c < components; ++c) {
    const ComponentResult r = estimate_component(ferro, split, c, eps_c, delta_c, options);
    out.log_value += r.log_z0;
    out.samples_used += r.samples;
    out.levels += r.levels;
    out.copies = std::max(out.copies, r.copies);
    out.steps_per_sample = std::max(out.steps_per_sample, r.steps);
  }
  return out;
}

Estimate estimate_partition(const FourVertexInstance& instance, const EstimatorOptions& options) {
  validate(options);
  if (instance.beta() == 1) {
    Estimate out;
    out.epsilon = options.epsilon;
    out.delta = options.delta;
    out.seed = options.seed;
    out.exact = true;
    out.log_value = decompose(instance).circuit_count() * std::log(2.0);
    if (const auto& c = instance.params().c) out.log_value += instance.vertex_count() * log(*c);
    return out;
  }
  const Reduction r = require_ferro(instance);
  Estimate out = estimate_Z0(*r.ferro, options);
  out.log_value += r.ferro->log_prefactor + r.ferro->log_normalizer();
  return out;
}

ConfigurationSampler::ConfigurationSampler(const FourVertexInstance& instance)
    : instance_(instance), reduction_(require_ferro(instance)) {
  if (!reduction_.ferro->edges.empty()) worm_.emplace(*reduction_.ferro);
}

DartConfig ConfigurationSampler::draw(std::uint64_t steps, Rng& rng) const {
  const FerroIsingInstance& f = *reduction_.ferro;
  EvenSubgraph s{std::vector<std::uint8_t>(f.edges.size(), 0)};
  if (worm_) s = worm_->sample_even(steps, rng);
  auto spins = spins_from_even(f, s, rng);
  for (std::size_t i = 0; i < spins.size(); ++i) spins[i] ^= reduction_.solution.values[i];
  DartConfig config = expand_assignment(reduction_.decomposition, spins);
  if (!is_valid_configuration(instance_, config)) {
    throw Error(ErrorCode::InternalError, "sampler produced an invalid configuration");
  }
  return config;
}

std::vector<DartConfig> ConfigurationSampler::draw_many(std::uint64_t steps, std::size_t count, std::uint64_t seed,
                                                        unsigned threads) const {
  std::vector<DartConfig> out(count);
  detail::parallel_for(count, threads, [&](std::size_t k) {
    Rng rng = Rng::derived(seed, {k});
    out[k] = draw(steps, rng);
  });
  return out;
}

DartConfig sample_configuration(const FourVertexInstance& instance, std::uint64_t steps, std::uint64_t seed) {
  Rng rng(seed);
  return ConfigurationSampler(instance).draw(steps, rng);
}

}  // namespace fourvertex
