#ifndef PIVOTAL_INFERENCE_HPP
#define PIVOTAL_INFERENCE_HPP

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "pivotal/convolution.hpp"
#include "pivotal/density.hpp"
#include "pivotal/errors.hpp"
#include "pivotal/noise.hpp"

namespace pivotal {

/// Location-measurement model x_i = theta + e_i with known noise densities f1, f2.
/// There is deliberately no theta member: nothing computed from a model may depend on it.
struct MeasurementModel {
  NoiseSpec noise1;
  NoiseSpec noise2;
  std::optional<GridSpec> grid;  ///< explicit grid for analytic families; automatic if empty

  void validate() const {
    try {
      pivotal::validate(noise1);
    } catch (const ValidationError& e) {
      throw ValidationError("noise1." + e.field(), e.message());
    }
    try {
      pivotal::validate(noise2);
    } catch (const ValidationError& e) {
      throw ValidationError("noise2." + e.field(), e.message());
    }
    if (grid) grid->validate();
  }

  GridDensity realize_noise1() const { return realize(noise1, grid); }
  GridDensity realize_noise2() const { return realize(noise2, grid); }

  /// Both noises with a common step where that is cheap. A normal, Laplace or mixture noise
  /// whose automatic grid is coarser is tabulated again at the finer step, on the lattice the
  /// convolution would otherwise interpolate onto. Uniform and tabulated noises are left alone.
  std::pair<GridDensity, GridDensity> realize_pair() const {
    GridDensity f1 = realize_noise1(), f2 = realize_noise2();
    if (grid) return {std::move(f1), std::move(f2)};
    const double h1 = f1.grid().step(), h2 = f2.grid().step();
    if (std::abs(h1 - h2) <= 1e-9 * std::min(h1, h2)) return {std::move(f1), std::move(f2)};
    const auto refine = [](const NoiseSpec& spec, GridDensity& f, double step) {
      if (std::holds_alternative<UniformNoise>(spec.family) || std::holds_alternative<TabulatedNoise>(spec.family)) return;
      try {
        f = realize(spec, detail::lattice_for_step(f.grid(), step));
      } catch (const GridMismatchError&) {
        // too many nodes: the convolution falls back to interpolation
      }
    };
    if (h1 > h2) refine(noise1, f1, h2);
    else refine(noise2, f2, h1);
    return {std::move(f1), std::move(f2)};
  }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  /// Closed interval: endpoints count as inside.
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  double width() const noexcept { return hi - lo; }
};

struct PredictiveInterval {
  double gamma = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct PredictiveResult {
  double observed_x1 = 0.0;
  GridDensity predictive;  ///< density of x2 given x1 = observed_x1
  GridDensity pivot;       ///< density of d = x2 - x1
  std::vector<PredictiveInterval> intervals;
};

inline void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma", "must lie strictly between 0 and 1");
}

/// Equal-tailed interval [q((1-gamma)/2), q((1+gamma)/2)] from a precomputed cdf.
inline Interval central_interval(const CdfTable& table, double gamma) {
  check_gamma(gamma);
  return {table.quantile(0.5 * (1.0 - gamma)), table.quantile(0.5 * (1.0 + gamma))};
}

inline Interval central_interval(const GridDensity& d, double gamma) {
  check_gamma(gamma);
  return central_interval(CdfTable(d), gamma);
}

/// Density of D = X2 - X1 = E2 - E1: Pr(d) = integral f1(xi) f2(d + xi) dxi.
inline GridDensity pivot_density(const MeasurementModel& model) {
  model.validate();
  const auto [f1, f2] = model.realize_pair();
  return cross_correlate(f1, f2);
}

/// Predictive density for x2 given x1 = s from an already computed pivot density.
inline PredictiveResult predictive_from_pivot(const GridDensity& pivot, double s, std::span<const double> gammas = {}) {
  if (!std::isfinite(s)) throw ValidationError("x1", "must be finite");
  for (double g : gammas) check_gamma(g);
  PredictiveResult r{s, shift(pivot, s), pivot, {}};
  const CdfTable table(r.predictive);
  for (double g : gammas) {
    const Interval iv = central_interval(table, g);
    r.intervals.push_back({g, iv.lo, iv.hi});
  }
  return r;
}

/// Pr(x2 | x1 = s) = integral f1(xi) f2(x2 - s + xi) dxi, plus one central interval per gamma.
inline PredictiveResult predictive_density(const MeasurementModel& model, double s, std::span<const double> gammas = {}) {
  if (!std::isfinite(s)) throw ValidationError("x1", "must be finite");
  return predictive_from_pivot(pivot_density(model), s, gammas);
}

/// Computes the pivot once and answers interval queries for any observed x1.
/// The interval for x1 is x1 plus the pivot's central interval, which is what
/// central_interval(shift(pivot, x1)) evaluates to.
class PivotalPredictor {
 public:
  explicit PivotalPredictor(const MeasurementModel& model) : PivotalPredictor(pivot_density(model)) {}
  explicit PivotalPredictor(GridDensity pivot) : pivot_(std::move(pivot)), table_(pivot_) {}

  Interval operator()(double x1, double gamma) const {
    const Interval d = central_interval(table_, gamma);
    return {x1 + d.lo, x1 + d.hi};
  }

  const GridDensity& pivot() const noexcept { return pivot_; }

 private:
  GridDensity pivot_;
  CdfTable table_;
};

}  // namespace pivotal

#endif  // PIVOTAL_INFERENCE_HPP
