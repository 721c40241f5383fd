#ifndef PIVOTAL_BAYES_HPP
#define PIVOTAL_BAYES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <variant>
#include <vector>

#include "pivotal/convolution.hpp"
#include "pivotal/density.hpp"
#include "pivotal/errors.hpp"
#include "pivotal/inference.hpp"
#include "pivotal/noise.hpp"

// Two Bayesian routes to the post-data density of the measurement error E1 = s - Theta.
//
//   A: update Theta with the likelihood L(t) ~ f1(s - t), then change variables e = s - t.
//   B: treat f1 as the prior of E1 and pi(s - e) as its likelihood.
//
// Both give Pr(e) ~ f1(e) pi(s - e). The routes build their products on mirrored grids, so a
// correct implementation agrees to rounding error; check_consistency measures the gap.

namespace pivotal {

namespace detail {

inline void check_observation(double s) {
  if (!std::isfinite(s)) throw ValidationError("x1", "must be finite");
}

/// Grid of s - x for x on g, i.e. [s - hi, s - lo].
inline GridSpec mirrored(const GridSpec& g, double s) { return {s - g.hi, s - g.lo, g.n_points}; }

}  // namespace detail

/// Likelihood L(t) = f1(s - t) on the t-grid {s - e : e on f1's grid}. Not normalized and has no
/// prior argument: it depends on (f1, s) only.
inline GridFunction likelihood_theta(const GridDensity& f1, double s) {
  detail::check_observation(s);
  const auto v = f1.values();
  return GridFunction(detail::mirrored(f1.grid(), s), std::vector<double>(v.rbegin(), v.rend()));
}

/// Spec of s - T when T has density `spec`.
inline NoiseSpec reflect_shift(const NoiseSpec& spec, double s) {
  validate(spec);
  return std::visit(
      [s](const auto& f) -> NoiseSpec {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, NormalNoise>) {
          return NormalNoise{s - f.mean, f.sd};
        } else if constexpr (std::is_same_v<T, LaplaceNoise>) {
          return LaplaceNoise{s - f.loc, f.scale};
        } else if constexpr (std::is_same_v<T, UniformNoise>) {
          return UniformNoise{s - f.b, s - f.a};
        } else if constexpr (std::is_same_v<T, NormalMixtureNoise>) {
          NormalMixtureNoise m = f;
          for (auto& c : m.components) c.mean = s - c.mean;
          return m;
        } else {
          TabulatedNoise t;
          t.x.reserve(f.x.size());
          for (auto it = f.x.rbegin(); it != f.x.rend(); ++it) t.x.push_back(s - *it);
          t.pdf.assign(f.pdf.rbegin(), f.pdf.rend());
          return t;
        }
      },
      spec.family);
}

namespace detail {

/// Product of a tabulated factor with an analytic prior. When the prior's own automatic grid is
/// no finer than the factor's, the prior is evaluated in closed form on the factor's nodes so the
/// product needs no interpolation; otherwise the prior keeps its finer grid.
template <GridTabulated F>
GridDensity product_with_spec(const F& factor, const NoiseSpec& prior) {
  const GridSpec own = auto_grid(prior);
  if (!prior.is_tabulated() && own.step() >= factor.grid().step() * (1.0 - 1e-12)) {
    return pointwise_product(factor, tabulate(prior, factor.grid()));
  }
  return pointwise_product(factor, realize(prior));
}

}  // namespace detail

/// Posterior of Theta: Pr(t) ~ f1(s - t) pi(t), normalized.
inline GridDensity posterior_theta(const GridDensity& f1, const GridDensity& prior, double s) {
  return pointwise_product(likelihood_theta(f1, s), prior);
}

inline GridDensity posterior_theta(const GridDensity& f1, const PriorSpec& prior, double s) {
  return detail::product_with_spec(likelihood_theta(f1, s), prior);
}

/// Route A: posterior of Theta mapped through e = s - t.
inline GridDensity posterior_error_A(const GridDensity& f1, const GridDensity& prior, double s) {
  const GridDensity post = posterior_theta(f1, prior, s);
  return post.reversed_on(detail::mirrored(post.grid(), s));
}

inline GridDensity posterior_error_A(const GridDensity& f1, const PriorSpec& prior, double s) {
  const GridDensity post = posterior_theta(f1, prior, s);
  return post.reversed_on(detail::mirrored(post.grid(), s));
}

/// Route B: f1 as prior for E1, pi(s - e) as its likelihood.
inline GridDensity posterior_error_B(const GridDensity& f1, const GridDensity& prior, double s) {
  detail::check_observation(s);
  const GridDensity likelihood_e = prior.reversed_on(detail::mirrored(prior.grid(), s));
  return pointwise_product(f1, likelihood_e);
}

inline GridDensity posterior_error_B(const GridDensity& f1, const PriorSpec& prior, double s) {
  detail::check_observation(s);
  return detail::product_with_spec(f1, reflect_shift(prior, s));
}

struct ConsistencyReport {
  double sup_norm_gap = 0.0;
  double l1_gap = 0.0;
  std::size_t grid_points = 0;
  double tolerance = 0.0;
  bool no_overlap = false;  ///< data and prior incompatible; gaps are then zero and pass is false
  bool pass = false;
};

namespace detail {

inline ConsistencyReport compare_posteriors(const GridDensity& a, const GridDensity& b, double tolerance) {
  ConsistencyReport r;
  r.tolerance = tolerance;
  std::vector<double> diff;
  double step = a.grid().step();
  if (same_nodes(a.grid(), b.grid())) {
    diff.resize(a.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = std::abs(a[i] - b[i]);
  } else {
    // finer of the two grids; the other is interpolated onto it
    const bool a_fine = a.grid().step() <= b.grid().step();
    const GridDensity& fine = a_fine ? a : b;
    const GridDensity& other = a_fine ? b : a;
    diff.resize(fine.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = std::abs(fine[i] - other.at(fine.grid().x(i)));
    step = fine.grid().step();
  }
  r.grid_points = diff.size();
  r.sup_norm_gap = diff.empty() ? 0.0 : *std::max_element(diff.begin(), diff.end());
  r.l1_gap = trapezoid(diff, step);
  r.pass = r.sup_norm_gap <= tolerance;
  return r;
}

template <typename Prior>
ConsistencyReport check_consistency_impl(const GridDensity& f1, const Prior& prior, double s, double tolerance) {
  GridDensity a, b;
  try {
    a = posterior_error_A(f1, prior, s);
    b = posterior_error_B(f1, prior, s);
  } catch (const NoOverlapError&) {
    ConsistencyReport r;
    r.tolerance = tolerance;
    r.no_overlap = true;
    return r;
  }
  return compare_posteriors(a, b, tolerance);
}

}  // namespace detail

/// Runs routes A and B and reports their sup-norm and L1 gaps on a common grid.
/// Incompatible data and prior are reported through `no_overlap`, not thrown.
inline ConsistencyReport check_consistency(const GridDensity& f1, const GridDensity& prior, double s, double tolerance) {
  return detail::check_consistency_impl(f1, prior, s, tolerance);
}

inline ConsistencyReport check_consistency(const GridDensity& f1, const PriorSpec& prior, double s, double tolerance) {
  return detail::check_consistency_impl(f1, prior, s, tolerance);
}

/// Predictive density of x2 averaged over the posterior of Theta:
/// integral f2(x2 - t) Pr(t | x1 = s) dt, i.e. convolve(f2, posterior).
inline GridDensity prior_predictive(const MeasurementModel& model, const GridDensity& prior, double s) {
  model.validate();
  return convolve(model.realize_noise2(), posterior_theta(model.realize_noise1(), prior, s));
}

inline GridDensity prior_predictive(const MeasurementModel& model, const PriorSpec& prior, double s) {
  model.validate();
  return convolve(model.realize_noise2(), posterior_theta(model.realize_noise1(), prior, s));
}

/// Proper uniform prior on [center - half_width, center + half_width].
inline PriorSpec uniform_prior(double center, double half_width) {
  return UniformNoise{center - half_width, center + half_width};
}

}  // namespace pivotal

#endif  // PIVOTAL_BAYES_HPP
