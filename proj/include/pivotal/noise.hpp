#ifndef PIVOTAL_NOISE_HPP
#define PIVOTAL_NOISE_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "pivotal/errors.hpp"
#include "pivotal/grid.hpp"

namespace pivotal {

struct NormalNoise {
  double mean = 0.0;
  double sd = 1.0;
};

struct LaplaceNoise {
  double loc = 0.0;
  double scale = 1.0;
};

struct UniformNoise {
  double a = 0.0;
  double b = 1.0;
};

struct MixtureComponent {
  double weight = 1.0;
  double mean = 0.0;
  double sd = 1.0;
};

struct NormalMixtureNoise {
  std::vector<MixtureComponent> components;
};

/// Density given by nodes; `x` must be ascending and uniformly spaced.
struct TabulatedNoise {
  std::vector<double> x;
  std::vector<double> pdf;
};

/// Declarative description of a known noise density (or, for priors, of pi).
struct NoiseSpec {
  std::variant<NormalNoise, LaplaceNoise, UniformNoise, NormalMixtureNoise, TabulatedNoise> family;

  NoiseSpec() = default;
  template <typename F>
    requires std::is_constructible_v<decltype(family), F>
  NoiseSpec(F f) : family(std::move(f)) {}  // NOLINT(google-explicit-constructor)

  std::string_view family_name() const {
    return std::visit(
        [](const auto& f) -> std::string_view {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, NormalNoise>) return "normal";
          else if constexpr (std::is_same_v<T, LaplaceNoise>) return "laplace";
          else if constexpr (std::is_same_v<T, UniformNoise>) return "uniform";
          else if constexpr (std::is_same_v<T, NormalMixtureNoise>) return "normal-mixture";
          else return "tabulated";
        },
        family);
  }

  bool is_tabulated() const { return std::holds_alternative<TabulatedNoise>(family); }
};

/// Prior density pi(theta); same families and parameters as noise.
using PriorSpec = NoiseSpec;

namespace detail {

inline void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

inline double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace detail

/// Throws ValidationError naming the first parameter that violates its constraint.
inline void validate(const NoiseSpec& spec) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, NormalNoise>) {
          detail::require_finite(f.mean, "mean");
          detail::require_finite(f.sd, "sd");
          if (!(f.sd > 0.0)) throw ValidationError("sd", "must be positive");
        } else if constexpr (std::is_same_v<T, LaplaceNoise>) {
          detail::require_finite(f.loc, "loc");
          detail::require_finite(f.scale, "scale");
          if (!(f.scale > 0.0)) throw ValidationError("scale", "must be positive");
        } else if constexpr (std::is_same_v<T, UniformNoise>) {
          detail::require_finite(f.a, "a");
          detail::require_finite(f.b, "b");
          if (!(f.a < f.b)) throw ValidationError("b", "must be greater than a");
        } else if constexpr (std::is_same_v<T, NormalMixtureNoise>) {
          if (f.components.empty()) throw ValidationError("components", "must not be empty");
          double total = 0.0;
          for (const auto& c : f.components) {
            detail::require_finite(c.weight, "weight");
            detail::require_finite(c.mean, "mean");
            detail::require_finite(c.sd, "sd");
            if (!(c.weight > 0.0)) throw ValidationError("weight", "must be positive");
            if (!(c.sd > 0.0)) throw ValidationError("sd", "must be positive");
            total += c.weight;
          }
          if (std::abs(total - 1.0) > 1e-9) throw ValidationError("weight", "weights must sum to 1");
        } else {
          if (f.x.size() != f.pdf.size()) throw ValidationError("pdf", "must have the same length as x");
          if (f.x.size() < 9) throw ValidationError("x", "needs at least 9 nodes");
          if (f.x.size() % 2 == 0) throw ValidationError("x", "node count must be odd");
          for (double v : f.x) detail::require_finite(v, "x");
          if (!(f.x.front() < f.x.back())) throw ValidationError("x", "must be ascending");
          const double step = (f.x.back() - f.x.front()) / static_cast<double>(f.x.size() - 1);
          for (std::size_t i = 0; i < f.x.size(); ++i) {
            const double expected = f.x.front() + static_cast<double>(i) * step;
            if (std::abs(f.x[i] - expected) > 1e-9 * step) throw ValidationError("x", "spacing must be uniform");
          }
          std::size_t positive = 0;
          for (double v : f.pdf) {
            detail::require_finite(v, "pdf");
            if (v < 0.0) throw ValidationError("pdf", "must be nonnegative");
            if (v > 0.0) ++positive;
          }
          if (positive < 2) throw ValidationError("pdf", "needs mass on at least two nodes");
        }
      },
      spec.family);
}

/// Closed-form density at x. Tabulated specs interpolate linearly and are not renormalized.
inline double density_at(const NoiseSpec& spec, double x) {
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, NormalNoise>) {
          return detail::normal_pdf(x, f.mean, f.sd);
        } else if constexpr (std::is_same_v<T, LaplaceNoise>) {
          return std::exp(-std::abs(x - f.loc) / f.scale) / (2.0 * f.scale);
        } else if constexpr (std::is_same_v<T, UniformNoise>) {
          return (x >= f.a && x <= f.b) ? 1.0 / (f.b - f.a) : 0.0;
        } else if constexpr (std::is_same_v<T, NormalMixtureNoise>) {
          double sum = 0.0;
          for (const auto& c : f.components) sum += c.weight * detail::normal_pdf(x, c.mean, c.sd);
          return sum;
        } else {
          const GridSpec g{f.x.front(), f.x.back(), f.x.size()};
          return GridFunction(g, f.pdf).at(x);
        }
      },
      spec.family);
}

/// Mean of the family (trapezoid mean for tabulated specs).
inline double mean_of(const NoiseSpec& spec) {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, NormalNoise>) return f.mean;
        else if constexpr (std::is_same_v<T, LaplaceNoise>) return f.loc;
        else if constexpr (std::is_same_v<T, UniformNoise>) return 0.5 * (f.a + f.b);
        else if constexpr (std::is_same_v<T, NormalMixtureNoise>) {
          double m = 0.0;
          for (const auto& c : f.components) m += c.weight * c.mean;
          return m;
        } else {
          const GridSpec g{f.x.front(), f.x.back(), f.x.size()};
          std::vector<double> xf(f.x.size());
          for (std::size_t i = 0; i < xf.size(); ++i) xf[i] = f.x[i] * f.pdf[i];
          return trapezoid(xf, g.step()) / trapezoid(f.pdf, g.step());
        }
      },
      spec.family);
}

/// Standard deviation of the family (trapezoid estimate for tabulated specs).
inline double sd_of(const NoiseSpec& spec) {
  return std::visit(
      [&spec](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, NormalNoise>) return f.sd;
        else if constexpr (std::is_same_v<T, LaplaceNoise>) return std::numbers::sqrt2 * f.scale;
        else if constexpr (std::is_same_v<T, UniformNoise>) return (f.b - f.a) / std::sqrt(12.0);
        else if constexpr (std::is_same_v<T, NormalMixtureNoise>) {
          const double m = mean_of(spec);
          double v = 0.0;
          for (const auto& c : f.components) v += c.weight * (c.sd * c.sd + (c.mean - m) * (c.mean - m));
          return std::sqrt(v);
        } else {
          const GridSpec g{f.x.front(), f.x.back(), f.x.size()};
          const double m = mean_of(spec);
          std::vector<double> vf(f.x.size());
          for (std::size_t i = 0; i < vf.size(); ++i) vf[i] = (f.x[i] - m) * (f.x[i] - m) * f.pdf[i];
          return std::sqrt(trapezoid(vf, g.step()) / trapezoid(f.pdf, g.step()));
        }
      },
      spec.family);
}

/// Half-width of the automatic support, in units of the Laplace scale.
inline constexpr double kLaplaceHalfWidthScales = 25.0;
/// Half-width of the automatic support, in standard deviations, for normal families.
inline constexpr double kNormalHalfWidthSds = 10.0;

/// Automatic grid for a family: normal mean +- 10 sd, mixtures the union of component windows,
/// Laplace loc +- 25 scales, tabulated its own nodes. Uniform nodes sit at the cell midpoints
/// a + (i - 1/2) h with one zero node beyond each end, so no node lands on a jump and the
/// trapezoid mass, cdf and box convolutions are exact on the lattice.
inline GridSpec auto_grid(const NoiseSpec& spec, std::size_t n_points = kDefaultGridPoints) {
  validate(spec);
  return std::visit(
      [n_points](const auto& f) -> GridSpec {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, NormalNoise>) {
          return {f.mean - kNormalHalfWidthSds * f.sd, f.mean + kNormalHalfWidthSds * f.sd, n_points};
        } else if constexpr (std::is_same_v<T, LaplaceNoise>) {
          return {f.loc - kLaplaceHalfWidthScales * f.scale, f.loc + kLaplaceHalfWidthScales * f.scale, n_points};
        } else if constexpr (std::is_same_v<T, UniformNoise>) {
          const double step = (f.b - f.a) / static_cast<double>(n_points - 2);
          return {f.a - 0.5 * step, f.b + 0.5 * step, n_points};
        } else if constexpr (std::is_same_v<T, NormalMixtureNoise>) {
          double lo = f.components.front().mean, hi = lo;
          for (const auto& c : f.components) {
            lo = std::min(lo, c.mean - kNormalHalfWidthSds * c.sd);
            hi = std::max(hi, c.mean + kNormalHalfWidthSds * c.sd);
          }
          return {lo, hi, n_points};
        } else {
          return {f.x.front(), f.x.back(), f.x.size()};
        }
      },
      spec.family);
}

/// Evaluate the spec at every node of `grid` without normalizing.
/// Uniform endpoints falling on a node (to 1e-9 of a step) take half the interior value.
inline GridFunction tabulate(const NoiseSpec& spec, const GridSpec& grid) {
  validate(spec);
  grid.validate();
  std::vector<double> values(grid.n_points);
  if (const auto* u = std::get_if<UniformNoise>(&spec.family)) {
    const double c = 1.0 / (u->b - u->a);
    const double tol = 1e-9 * grid.step();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double x = grid.x(i);
      if (std::abs(x - u->a) <= tol || std::abs(x - u->b) <= tol) values[i] = 0.5 * c;
      else if (x > u->a && x < u->b) values[i] = c;
      else values[i] = 0.0;
    }
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = density_at(spec, grid.x(i));
  }
  return GridFunction(grid, std::move(values));
}

/// Turn a spec into a normalized grid density. Without an explicit grid the automatic grid is
/// used. Tabulated specs always keep their own nodes.
inline GridDensity realize(const NoiseSpec& spec, std::optional<GridSpec> grid = std::nullopt) {
  validate(spec);
  if (const auto* t = std::get_if<TabulatedNoise>(&spec.family)) {
    return normalize(GridSpec{t->x.front(), t->x.back(), t->x.size()}, t->pdf);
  }
  const GridSpec g = grid ? *grid : auto_grid(spec);
  return normalize(tabulate(spec, g));
}

}  // namespace pivotal

#endif  // PIVOTAL_NOISE_HPP
