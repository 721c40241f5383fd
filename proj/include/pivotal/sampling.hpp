#ifndef PIVOTAL_SAMPLING_HPP
#define PIVOTAL_SAMPLING_HPP

#include <cstddef>
#include <vector>

#include "pivotal/density.hpp"
#include "pivotal/rng.hpp"

namespace pivotal {

/// Inverse-cdf sampler over a grid density. Draws u in (0,1) and inverts the trapezoid cdf with
/// linear interpolation between bracketing nodes.
class InverseCdfSampler {
 public:
  explicit InverseCdfSampler(const GridDensity& d) : table_(d) {}

  double operator()(SplitMix64& rng) const noexcept { return table_.invert(rng.uniform() * table_.values().back()); }

  const CdfTable& table() const noexcept { return table_; }

 private:
  CdfTable table_;
};

/// `count` draws from d; consumes exactly one rng output per draw.
inline std::vector<double> sample(const GridDensity& d, SplitMix64& rng, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  const InverseCdfSampler draw(d);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(draw(rng));
  return out;
}

}  // namespace pivotal

#endif  // PIVOTAL_SAMPLING_HPP
