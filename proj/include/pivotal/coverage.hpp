#ifndef PIVOTAL_COVERAGE_HPP
#define PIVOTAL_COVERAGE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "pivotal/errors.hpp"
#include "pivotal/inference.hpp"
#include "pivotal/rng.hpp"
#include "pivotal/sampling.hpp"

namespace pivotal {

/// Smallest replicate count accepted by coverage_experiment.
inline constexpr std::size_t kMinReplicates = 100;

struct CoverageReport {
  double gamma = 0.0;
  std::size_t n_replicates = 0;
  double theta_used = 0.0;
  std::uint64_t seed = 0;
  std::size_t hits = 0;
  double empirical_coverage = 0.0;
  double binomial_sd = 0.0;  ///< sqrt(gamma (1 - gamma) / n)
  bool pass = false;         ///< |empirical - gamma| <= 3 binomial_sd
};

struct CoverageRun {
  CoverageReport report;
  std::vector<std::uint8_t> hit_sequence;  ///< one 0/1 entry per replicate, in replicate order
};

/// Draws (x1, x2) = (theta + e1, theta + e2) with e1 ~ f1, e2 ~ f2 independent.
/// Noise densities are realized once; each pair consumes two rng outputs (e1 first).
class PairSimulator {
 public:
  explicit PairSimulator(const MeasurementModel& model)
      : noise1_((model.validate(), model.realize_noise1())), noise2_(model.realize_noise2()) {}

  std::pair<double, double> operator()(double theta, SplitMix64& rng) const noexcept {
    const double e1 = noise1_(rng);
    const double e2 = noise2_(rng);
    return {theta + e1, theta + e2};
  }

 private:
  InverseCdfSampler noise1_;
  InverseCdfSampler noise2_;
};

inline std::pair<double, double> simulate_pair(const MeasurementModel& model, double theta, SplitMix64& rng) {
  return PairSimulator(model)(theta, rng);
}

/// Anything mapping (x1, gamma) to a predictive interval for x2.
template <typename R>
concept IntervalRule = requires(const R& rule, double x1, double gamma) {
  { rule(x1, gamma) } -> std::convertible_to<Interval>;
};

struct CoverageOptions {
  unsigned threads = 1;  ///< replicate-level parallelism; does not affect results
};

/// Replicate k draws its pair from substream(seed, k), forms rule(x1, gamma) and records a hit
/// when x2 lies in the closed interval. Identical for any thread count.
template <IntervalRule Rule>
CoverageRun coverage_experiment(const MeasurementModel& model, const Rule& rule, double theta, double gamma,
                                std::size_t n, std::uint64_t seed, CoverageOptions options = {}) {
  check_gamma(gamma);
  if (!std::isfinite(theta)) throw ValidationError("theta", "must be finite");
  if (n < kMinReplicates) throw ValidationError("n", "must be at least 100");
  const PairSimulator simulate(model);

  CoverageRun run;
  run.hit_sequence.assign(n, 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      SplitMix64 rng = substream(seed, k);
      const auto [x1, x2] = simulate(theta, rng);
      run.hit_sequence[k] = rule(x1, gamma).contains(x2) ? 1 : 0;
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, n);
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  CoverageReport& r = run.report;
  r.gamma = gamma;
  r.n_replicates = n;
  r.theta_used = theta;
  r.seed = seed;
  r.hits = static_cast<std::size_t>(std::count(run.hit_sequence.begin(), run.hit_sequence.end(), std::uint8_t{1}));
  r.empirical_coverage = static_cast<double>(r.hits) / static_cast<double>(n);
  r.binomial_sd = std::sqrt(gamma * (1.0 - gamma) / static_cast<double>(n));
  r.pass = std::abs(r.empirical_coverage - gamma) <= 3.0 * r.binomial_sd;
  return run;
}

/// Coverage of the direct pivotal predictive interval.
inline CoverageRun coverage_experiment(const MeasurementModel& model, double theta, double gamma, std::size_t n,
                                       std::uint64_t seed, CoverageOptions options = {}) {
  return coverage_experiment(model, PivotalPredictor(model), theta, gamma, n, seed, options);
}

/// True iff every theta yields the same hit sequence under the shared seed.
template <IntervalRule Rule>
bool theta_invariance_check(const MeasurementModel& model, const Rule& rule, std::span<const double> thetas,
                            double gamma, std::size_t n, std::uint64_t seed, CoverageOptions options = {}) {
  if (thetas.empty()) throw ValidationError("thetas", "must not be empty");
  const auto reference = coverage_experiment(model, rule, thetas.front(), gamma, n, seed, options).hit_sequence;
  for (std::size_t i = 1; i < thetas.size(); ++i) {
    if (coverage_experiment(model, rule, thetas[i], gamma, n, seed, options).hit_sequence != reference) return false;
  }
  return true;
}

inline bool theta_invariance_check(const MeasurementModel& model, std::span<const double> thetas, double gamma,
                                   std::size_t n, std::uint64_t seed, CoverageOptions options = {}) {
  return theta_invariance_check(model, PivotalPredictor(model), thetas, gamma, n, seed, options);
}

}  // namespace pivotal

#endif  // PIVOTAL_COVERAGE_HPP
