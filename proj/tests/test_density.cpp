#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pivotal/density.hpp"
#include "pivotal/noise.hpp"

using namespace pivotal;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

GridDensity unit_normal() { return realize(NormalNoise{0.0, 1.0}); }

}  // namespace

TEST(GridSpec, RejectsInvalidGrids) {
  EXPECT_THROW((GridSpec{1.0, 1.0, 9}.validate()), ValidationError);
  EXPECT_THROW((GridSpec{2.0, 1.0, 9}.validate()), ValidationError);
  EXPECT_THROW((GridSpec{0.0, 1.0, 7}.validate()), ValidationError);
  EXPECT_THROW((GridSpec{0.0, 1.0, 10}.validate()), ValidationError);
  EXPECT_NO_THROW((GridSpec{0.0, 1.0, 9}.validate()));
  try {
    GridSpec{0.0, 1.0, 10}.validate();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "n_points");
  }
}

TEST(Realize, NormalPeakMatchesClosedForm) {
  const GridDensity d = unit_normal();
  ASSERT_EQ(d.size(), 4097u);
  const std::size_t center = d.size() / 2;
  EXPECT_DOUBLE_EQ(d.grid().x(center), 0.0);
  EXPECT_NEAR(d[center], 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-9);
  EXPECT_NEAR(d[center], 0.3989422804, 1e-9);
}

TEST(Realize, AnalyticFamiliesMatchClosedFormAtNodes) {
  const std::vector<NoiseSpec> specs = {
      NormalNoise{1.5, 0.7},
      NormalMixtureNoise{{{0.3, -2.0, 0.5}, {0.7, 1.0, 1.2}}},
      UniformNoise{-1.0, 3.0},
  };
  for (const auto& spec : specs) {
    const GridDensity d = realize(spec);
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double exact = density_at(spec, d.grid().x(i));
      if (exact > 1e-300 && i > 1 && i + 2 < d.size()) worst = std::max(worst, std::abs(d[i] / exact - 1.0));
    }
    EXPECT_LE(worst, 1e-9) << spec.family_name();
  }
}

TEST(Realize, LaplaceNodesCarryOnlyTheTrapezoidKinkBias) {
  // Exact node values have trapezoid mass h*coth(h/2)/2 because of the kink at loc, so the
  // normalized values sit below the closed form by that factor, about h^2/12.
  const GridDensity d = realize(LaplaceNoise{0.0, 1.0});
  const double h = d.grid().step();
  const double bias = h / std::tanh(h / 2.0) / 2.0 - 1.0;
  EXPECT_NEAR(bias, h * h / 12.0, 1e-3 * h * h);
  const std::size_t center = d.size() / 2;
  EXPECT_NEAR(d[center] * (1.0 + bias), 0.5, 1e-9);
  EXPECT_NEAR(d[center], 0.5, 0.5 * 2e-5);
  const GridFunction raw = tabulate(LaplaceNoise{0.0, 1.0}, d.grid());
  EXPECT_DOUBLE_EQ(raw[center], 0.5);
  for (std::size_t i = 0; i < d.size(); i += 97) {
    EXPECT_NEAR(d[i] * (1.0 + bias), density_at(LaplaceNoise{0.0, 1.0}, d.grid().x(i)), 1e-9 * d[i] + 1e-300);
  }
}

TEST(Realize, UniformInteriorIsConstant) {
  const GridDensity d = realize(UniformNoise{-1.0, 1.0});
  std::size_t interior = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = d.grid().x(i);
    if (x > -1.0 + 1e-9 && x < 1.0 - 1e-9) {
      EXPECT_NEAR(d[i], 0.5, 1e-12);
      ++interior;
    }
  }
  EXPECT_EQ(interior, d.size() - 2);
  EXPECT_EQ(d[0], 0.0);
  EXPECT_EQ(d[d.size() - 1], 0.0);
}

TEST(Realize, EdgesAreNegligibleForAnalyticFamilies) {
  const std::vector<NoiseSpec> specs = {NormalNoise{0, 1}, LaplaceNoise{2, 0.5}, UniformNoise{0, 1},
                                        NormalMixtureNoise{{{0.5, -3, 1}, {0.5, 3, 0.2}}}};
  for (const auto& spec : specs) {
    const GridDensity d = realize(spec);
    const double peak = *std::max_element(d.values().begin(), d.values().end());
    EXPECT_LE(d.values().front(), 1e-10 * peak) << spec.family_name();
    EXPECT_LE(d.values().back(), 1e-10 * peak) << spec.family_name();
    EXPECT_NEAR(d.integral(), 1.0, 1e-12);
  }
}

TEST(Realize, ValidationNamesTheField) {
  const auto field_of = [](const NoiseSpec& s) {
    try {
      (void)realize(s);
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(NormalNoise{0, 0}), "sd");
  EXPECT_EQ(field_of(NormalNoise{0, -1}), "sd");
  EXPECT_EQ(field_of(LaplaceNoise{0, 0}), "scale");
  EXPECT_EQ(field_of(UniformNoise{1, 1}), "b");
  EXPECT_EQ(field_of(UniformNoise{2, 1}), "b");
  EXPECT_EQ(field_of(NormalMixtureNoise{{{0.5, 0, 1}, {0.4, 0, 1}}}), "weight");
  std::vector<double> x(9), pdf(9, 1.0);
  for (int i = 0; i < 9; ++i) x[i] = i;
  pdf[3] = -0.1;
  EXPECT_EQ(field_of(TabulatedNoise{x, pdf}), "pdf");
  pdf[3] = 1.0;
  x[4] = 4.3;
  EXPECT_EQ(field_of(TabulatedNoise{x, pdf}), "x");
}

TEST(Realize, DeltaLikeTabulatedIsRejected) {
  std::vector<double> x(9), pdf(9, 0.0);
  for (int i = 0; i < 9; ++i) x[i] = i;
  pdf[4] = 1.0;
  EXPECT_THROW((void)realize(TabulatedNoise{x, pdf}), ValidationError);
}

TEST(Realize, TabulatedKeepsItsOwnGrid) {
  std::vector<double> x(11), pdf(11);
  for (int i = 0; i < 11; ++i) {
    x[i] = 0.1 * i;
    pdf[i] = 2.0 * (i == 0 || i == 10 ? 0.0 : 1.0);
  }
  const GridDensity d = realize(TabulatedNoise{x, pdf}, GridSpec{-5, 5, 101});
  EXPECT_EQ(d.size(), 11u);
  EXPECT_DOUBLE_EQ(d.grid().lo, 0.0);
  EXPECT_NEAR(d.integral(), 1.0, 1e-14);
  EXPECT_NEAR(d[5] / d[4], 1.0, 1e-15);
}

TEST(Normalize, HalvesMassTwo) {
  const GridSpec g{0.0, 1.0, 9};
  std::vector<double> v(9, 2.0);
  const GridDensity d = normalize(g, v);
  for (double x : d.values()) EXPECT_NEAR(x, 1.0, 1e-15);
}

TEST(Normalize, IdempotentOnNormalizedInput) {
  const GridDensity d = unit_normal();
  const GridDensity again = normalize(d);
  EXPECT_LE(max_abs_diff(d.values(), again.values()), 1e-12);
  EXPECT_NEAR(again.integral(), 1.0, 1e-12);
}

TEST(Normalize, DegenerateInputsThrow) {
  const GridSpec g{0.0, 1.0, 9};
  EXPECT_THROW(normalize(g, std::vector<double>(9, 0.0)), DegenerateDensityError);
  std::vector<double> v(9, 1.0);
  v[2] = std::nan("");
  EXPECT_THROW(normalize(g, v), DegenerateDensityError);
  v[2] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(normalize(g, v), DegenerateDensityError);
}

TEST(Summarize, NormalMoments) {
  const SummaryStats s = summarize(unit_normal());
  EXPECT_NEAR(s.mean, 0.0, 1e-8);
  EXPECT_NEAR(s.variance, 1.0, 1e-6);
  EXPECT_NEAR(s.total_mass, 1.0, 1e-12);
}

TEST(Summarize, UniformVariance) {
  const SummaryStats s = summarize(realize(UniformNoise{-1.0, 1.0}));
  EXPECT_NEAR(s.variance, 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(s.mean, 0.0, 1e-8);
}

TEST(Summarize, SymmetricDensityMeanIsCenter) {
  for (double c : {-3.0, 0.0, 2.5, 40.0}) {
    EXPECT_NEAR(summarize(realize(LaplaceNoise{c, 0.7})).mean, c, 1e-8);
    EXPECT_NEAR(summarize(realize(NormalMixtureNoise{{{0.5, c - 1, 0.3}, {0.5, c + 1, 0.3}}})).mean, c, 1e-8);
  }
}

TEST(Cdf, SymmetricCenterIsHalf) {
  const GridDensity d = realize(LaplaceNoise{1.0, 2.0});
  const auto c = cdf(d);
  EXPECT_EQ(c.front(), 0.0);
  EXPECT_NEAR(c.back(), 1.0, 1e-8);
  EXPECT_NEAR(c[d.size() / 2], 0.5, 1e-8);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GE(c[i], c[i - 1]);
}

TEST(Cdf, UniformIsLinearOnSupport) {
  const GridDensity d = realize(UniformNoise{0.0, 1.0});
  const auto c = cdf(d);
  for (std::size_t i = 1; i + 1 < d.size(); ++i) EXPECT_NEAR(c[i], d.grid().x(i), 1e-12);
  EXPECT_EQ(c.front(), 0.0);
  EXPECT_NEAR(c.back(), 1.0, 1e-12);
}

TEST(Tabulate, UniformEndpointOnANodeTakesHalfValue) {
  const GridFunction f = tabulate(UniformNoise{0.0, 1.0}, GridSpec{-1.0, 2.0, 13});
  EXPECT_DOUBLE_EQ(f[4], 0.5);
  EXPECT_DOUBLE_EQ(f[5], 1.0);
  EXPECT_DOUBLE_EQ(f[8], 0.5);
  EXPECT_DOUBLE_EQ(f[3], 0.0);
  EXPECT_NEAR(normalize(f).integral(), 1.0, 1e-15);
  EXPECT_NEAR(f.integral(), 1.0, 1e-15);
}

TEST(Cdf, NormalAtUpperCriticalValue) {
  const GridDensity d = unit_normal();
  const double expected = oracle::normal_cdf(1.959964);
  EXPECT_NEAR(expected, 0.975, 1e-6);
  EXPECT_NEAR(CdfTable(d).at(1.959964), expected, 1e-4);
  EXPECT_NEAR(CdfTable(d).at(1.959964), 0.975, 1e-4);
}

TEST(Quantile, Examples) {
  const GridDensity sym = realize(NormalNoise{3.0, 0.5});
  EXPECT_NEAR(quantile(sym, 0.5), 3.0, sym.grid().step());
  EXPECT_NEAR(quantile(unit_normal(), 0.975), oracle::normal_quantile(0.975), 1e-4);
  EXPECT_NEAR(quantile(unit_normal(), 0.975), 1.959964, 1e-4);
  EXPECT_NEAR(quantile(realize(UniformNoise{0.0, 1.0}), 0.25), 0.25, 1e-6);
}

TEST(Quantile, DomainErrors) {
  const GridDensity d = unit_normal();
  EXPECT_THROW((void)quantile(d, 0.0), DomainError);
  EXPECT_THROW((void)quantile(d, 1.0), DomainError);
  EXPECT_THROW((void)quantile(d, -0.2), DomainError);
  EXPECT_THROW((void)quantile(d, std::nan("")), DomainError);
}

TEST(Quantile, RecoversNodeFromItsCdfValue) {
  const GridDensity d = realize(NormalMixtureNoise{{{0.4, -1, 0.5}, {0.6, 2, 1.0}}});
  const CdfTable t(d);
  for (std::size_t i = 50; i + 50 < d.size(); i += 211) {
    const double p = t.values()[i];
    if (p < 1e-6 || p > 1.0 - 1e-6) continue;
    EXPECT_NEAR(t.quantile(p), d.grid().x(i), d.grid().step());
  }
}

TEST(Quantile, CdfRoundTripProperty) {
  const std::vector<NoiseSpec> specs = {NormalNoise{0, 1}, LaplaceNoise{-1, 2}, UniformNoise{-2, 5},
                                        NormalMixtureNoise{{{0.2, -4, 0.5}, {0.8, 1, 1}}}};
  for (const auto& spec : specs) {
    const CdfTable t(realize(spec));
    for (double p : {0.01, 0.1, 0.5, 0.9, 0.99}) EXPECT_NEAR(t.at(t.quantile(p)), p, 1e-6) << spec.family_name();
  }
}

TEST(Shift, Examples) {
  const GridDensity d = unit_normal();
  const GridDensity same = shift(d, 0.0);
  EXPECT_EQ(same.grid(), d.grid());
  EXPECT_LE(max_abs_diff(same.values(), d.values()), 0.0);
  EXPECT_NEAR(summarize(shift(d, 3.0)).mean, 3.0, 1e-8);
  const GridDensity back = shift(shift(d, 7.25), -7.25);
  EXPECT_NEAR(back.grid().lo, d.grid().lo, 1e-12);
  EXPECT_NEAR(back.grid().hi, d.grid().hi, 1e-12);
  EXPECT_LE(max_abs_diff(back.values(), d.values()), 1e-12);
}

TEST(Shift, MeanEquivarianceProperty) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> loc(-5, 5), scale(0.2, 3), c(-100, 100);
  for (int k = 0; k < 20; ++k) {
    const GridDensity d = realize(NormalMixtureNoise{{{0.5, loc(gen), scale(gen)}, {0.5, loc(gen), scale(gen)}}});
    const double shift_by = c(gen);
    EXPECT_NEAR(summarize(shift(d, shift_by)).mean, summarize(d).mean + shift_by, 1e-10);
  }
}

TEST(Reflect, Examples) {
  const GridDensity d = unit_normal();
  EXPECT_LE(max_abs_diff(reflect(d).values(), d.values()), 1e-12);
  const GridDensity m = realize(NormalNoise{2.0, 1.0});
  const GridDensity twice = reflect(reflect(m));
  EXPECT_EQ(twice.grid(), m.grid());
  EXPECT_LE(max_abs_diff(twice.values(), m.values()), 0.0);
  EXPECT_NEAR(summarize(reflect(m)).mean, -2.0, 1e-8);
}

TEST(PointwiseProduct, ConjugateNormal) {
  const GridDensity d = unit_normal();
  const GridDensity p = pointwise_product(d, d);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    worst = std::max(worst, std::abs(p[i] - oracle::normal_pdf(p.grid().x(i), 0.0, std::sqrt(0.5))));
  }
  EXPECT_LE(worst, 1e-6);
  EXPECT_NEAR(p.integral(), 1.0, 1e-12);
}

TEST(PointwiseProduct, WideUniformFactorCancels) {
  const GridDensity d = realize(NormalMixtureNoise{{{0.3, -1, 0.4}, {0.7, 1.5, 0.8}}});
  const GridDensity flat = realize(UniformNoise{-100.0, 100.0});
  const GridDensity p = pointwise_product(d, flat);
  EXPECT_LE(sup_norm_distance(p, d), 1e-8);
  const GridDensity q = pointwise_product(flat, d);
  EXPECT_LE(sup_norm_distance(q, d), 1e-8);
}

TEST(PointwiseProduct, DisjointSupportsThrow) {
  EXPECT_THROW((void)pointwise_product(realize(UniformNoise{0, 1}), realize(UniformNoise{2, 3})), NoOverlapError);
  EXPECT_THROW((void)pointwise_product(realize(UniformNoise{0, 1}), realize(NormalNoise{50, 1})), NoOverlapError);
}

TEST(DensityInvariants, TransformsStayNormalized) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> loc(-3, 3), scale(0.3, 2);
  for (int k = 0; k < 10; ++k) {
    const GridDensity a = realize(NormalNoise{loc(gen), scale(gen)});
    const GridDensity b = realize(LaplaceNoise{loc(gen), scale(gen)});
    EXPECT_NEAR(shift(a, loc(gen)).integral(), 1.0, 1e-8);
    EXPECT_NEAR(reflect(b).integral(), 1.0, 1e-8);
    EXPECT_NEAR(pointwise_product(a, b).integral(), 1.0, 1e-8);
    EXPECT_NEAR(normalize(resample(a, b.grid())).integral(), 1.0, 1e-8);
  }
}
