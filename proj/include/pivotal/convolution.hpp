#ifndef PIVOTAL_CONVOLUTION_HPP
#define PIVOTAL_CONVOLUTION_HPP

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <new>
#include <span>
#include <utility>
#include <vector>

#include "pivotal/density.hpp"
#include "pivotal/errors.hpp"
#include "pivotal/grid.hpp"

namespace pivotal {

namespace detail {

// The FFTW planner is not reentrant; plan execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

class FftwPlan {
 public:
  explicit FftwPlan(fftw_plan p) : plan_(p) {}
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  ~FftwPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

inline std::size_t fft_size(std::size_t min_size) {
  std::size_t n = 1;
  while (n < min_size) n <<= 1;
  return n;
}

enum class Pairing { convolution, correlation };

/// out[k] = sum_i a[i] * b[k - i]           (convolution, k = 0..na+nb-2)
/// out[k] = sum_i a[i] * b[i + k - (na-1)]  (correlation, k = 0..na+nb-2)
/// via zero-padded real FFTs of length >= na + nb - 1.
inline std::vector<double> fft_pair_sum(std::span<const double> a, std::span<const double> b, Pairing pairing) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t out_len = na + nb - 1;
  const std::size_t n = fft_size(out_len);
  const std::size_t nc = n / 2 + 1;

  FftwBuffer<double> ra(fftw_alloc_real(n));
  FftwBuffer<double> rb(fftw_alloc_real(n));
  FftwBuffer<fftw_complex> ca(fftw_alloc_complex(nc));
  FftwBuffer<fftw_complex> cb(fftw_alloc_complex(nc));
  if (!ra || !rb || !ca || !cb) throw std::bad_alloc();

  std::unique_ptr<FftwPlan> fa, fb, inv;
  {
    std::lock_guard lock(fftw_planner_mutex());
    const int len = static_cast<int>(n);
    fa = std::make_unique<FftwPlan>(fftw_plan_dft_r2c_1d(len, ra.get(), ca.get(), FFTW_ESTIMATE));
    fb = std::make_unique<FftwPlan>(fftw_plan_dft_r2c_1d(len, rb.get(), cb.get(), FFTW_ESTIMATE));
    inv = std::make_unique<FftwPlan>(fftw_plan_dft_c2r_1d(len, cb.get(), rb.get(), FFTW_ESTIMATE));
  }

  std::fill(ra.get(), ra.get() + n, 0.0);
  std::fill(rb.get(), rb.get() + n, 0.0);
  std::copy(a.begin(), a.end(), ra.get());
  std::copy(b.begin(), b.end(), rb.get());
  fa->execute();
  fb->execute();
  for (std::size_t k = 0; k < nc; ++k) {
    const std::complex<double> za(ca[k][0], ca[k][1]);
    const std::complex<double> zb(cb[k][0], cb[k][1]);
    const std::complex<double> z = pairing == Pairing::convolution ? za * zb : std::conj(za) * zb;
    cb[k][0] = z.real();
    cb[k][1] = z.imag();
  }
  inv->execute();

  std::vector<double> out(out_len);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < out_len; ++k) {
    // correlation lag m = k - (na - 1) lives at index m mod n
    const std::size_t idx = pairing == Pairing::convolution ? k : (k + n - (na - 1)) % n;
    out[k] = std::max(0.0, rb[idx] * scale);
  }
  return out;
}

/// Operands on grids with a common step: the finer step is kept and the coarser operand is
/// linearly resampled onto a lattice of that step centered on its own midpoint.
struct CommensurablePair {
  GridFunction a;
  GridFunction b;
  double step;
};

/// Lattice of the given step centered on g's midpoint and covering g. Centering commutes with
/// reflection, so resampling before or after reflect() lands on the same nodes.
inline GridSpec lattice_for_step(const GridSpec& g, double step) {
  const double span = g.hi - g.lo;
  const double cells = std::ceil(span / step - 1e-9);
  if (!(cells + 1 <= static_cast<double>(kMaxGridPoints))) {
    throw GridMismatchError("resampling to the finer step needs more than 2^24 nodes");
  }
  LatticeWindow w{0.0, step, 0, static_cast<std::int64_t>(cells)};
  make_odd_window(w);
  const double half = 0.5 * static_cast<double>(w.j1 - w.j0) * step;
  const double mid = 0.5 * (g.lo + g.hi);
  return GridSpec{mid - half, mid + half, w.count()};
}

inline GridFunction resample_to_step(const GridFunction& f, double step) {
  return resample(f, lattice_for_step(f.grid(), step));
}

inline CommensurablePair make_commensurable(const GridFunction& a, const GridFunction& b) {
  const double ha = a.grid().step();
  const double hb = b.grid().step();
  if (std::abs(ha - hb) <= 1e-9 * std::min(ha, hb)) return {a, b, std::min(ha, hb)};
  CommensurablePair p = ha < hb ? CommensurablePair{a, resample_to_step(b, ha), ha}
                                : CommensurablePair{resample_to_step(a, hb), b, hb};
  const double ra = p.a.grid().step();
  const double rb = p.b.grid().step();
  if (std::abs(ra - rb) > 1e-6 * p.step) throw GridMismatchError("grid steps differ after resampling");
  return p;
}

inline void check_output_size(const GridFunction& a, const GridFunction& b) {
  if (a.size() + b.size() - 1 > kMaxGridPoints) throw GridMismatchError("convolution output exceeds 2^24 nodes");
}

}  // namespace detail

/// Density of X + Y for independent X ~ a, Y ~ b, on [a.lo + b.lo, a.hi + b.hi] with the finer
/// input step. Computed by zero-padded FFT, scaled by the step, then renormalized.
inline GridDensity convolve(const GridDensity& a, const GridDensity& b) {
  auto p = detail::make_commensurable(a, b);
  detail::check_output_size(p.a, p.b);
  auto values = detail::fft_pair_sum(p.a.values(), p.b.values(), detail::Pairing::convolution);
  for (double& v : values) v *= p.step;
  const GridSpec g{p.a.grid().lo + p.b.grid().lo, p.a.grid().hi + p.b.grid().hi, values.size()};
  return normalize(g, std::move(values));
}

/// g(d) = integral a(xi) b(d + xi) dxi: the density of Y - X. Equal to convolve(reflect(a), b)
/// but computed directly from the conjugate spectrum of a.
inline GridDensity cross_correlate(const GridDensity& a, const GridDensity& b) {
  auto p = detail::make_commensurable(a, b);
  detail::check_output_size(p.a, p.b);
  auto values = detail::fft_pair_sum(p.a.values(), p.b.values(), detail::Pairing::correlation);
  for (double& v : values) v *= p.step;
  const GridSpec g{p.b.grid().lo - p.a.grid().hi, p.b.grid().hi - p.a.grid().lo, values.size()};
  return normalize(g, std::move(values));
}

}  // namespace pivotal

#endif  // PIVOTAL_CONVOLUTION_HPP
