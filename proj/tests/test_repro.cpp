#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "adjsim/adjust.hpp"
#include "adjsim/errors.hpp"
#include "adjsim/repro.hpp"
#include "oracles.hpp"

using namespace adjsim;
using namespace adjsim::repro;

namespace {

// AS, E[AS] and A^2S for u1^2 under ind2 with domain max N^2, computed from
// the binomial oracle alone.
struct ToyOracle {
  Rational as, expected_as, a2s;
};

Rational oracle_as(Count u, Count n, const Rational& c) {
  const auto d = oracle::binomial(n, u);
  Rational e = 0;
  for (Count k = 0; k <= n; ++k) e += d[std::size_t(k)] * Rational(k * k);
  return oracle::adjust(Rational(u * u), e, Rational(n * n), c);
}

ToyOracle toy_oracle(Count u, Count n, const Rational& c) {
  ToyOracle o;
  o.as = oracle_as(u, n, c);
  const auto d = oracle::binomial(n, u);
  for (Count k = 0; k <= n; ++k) o.expected_as += d[std::size_t(k)] * oracle_as(k, n, c);
  const Rational max = c > 0 ? c : Rational(0);
  o.a2s = oracle::adjust(o.as, o.expected_as, max, c);
  return o;
}

}  // namespace

TEST(Repro, ClosedFormsMatchBinomialOracleExactly) {
  for (const Rational c : {Rational(0), Rational(1), Rational(-1), Rational(1, 2)})
    for (Count n = 1; n <= 8; ++n)
      for (Count u = 0; u <= n; ++u) {
        const auto o = toy_oracle(u, n, c);
        EXPECT_EQ(toy_adjusted<Rational>(u, n, c), o.as) << u << "/" << n;
        EXPECT_EQ(toy_expected_adjusted<Rational>(u, n, c), o.expected_as) << u << "/" << n;
        EXPECT_EQ(toy_double_adjusted<Rational>(u, n, c), o.a2s) << u << "/" << n;
      }
}

TEST(Repro, ClosedFormsMatchGenericPipeline) {
  // The grid's evaluators against adjust() + enumeration, N <= 6.
  const auto s = index_by_id<double>("toy_u1_squared");
  const NullModel m{ModelKind::ind2};
  for (const double c : {0.0, 1.0, -1.0})
    for (Count n = 1; n <= 6; ++n)
      for (Count u = 0; u <= n; ++u) {
        const auto t = oracle::column(u, n);
        const auto as = adjust<double>(s, m, MaxSpec::of(MaxKind::domain_max), t, c);
        EXPECT_NEAR(toy_adjusted<double>(u, n, c), as.adjusted, 1e-12);
        const auto as_index = adjusted_index<double>(s, m, MaxSpec::of(MaxKind::domain_max), c);
        EngineConfig cfg;
        cfg.method = Method::enumeration;
        const double e = expectation<double>(m, t, as_index, cfg).value;
        EXPECT_NEAR(toy_expected_adjusted<double>(u, n, c), e, 1e-12);
        const auto a2 = apply_adjustment<double>(as.adjusted, e, std::max(0.0, c), c);
        EXPECT_NEAR(toy_double_adjusted<double>(u, n, c), a2.value, 1e-12) << u << "/" << n << " c=" << c;
      }
}

TEST(Repro, DoubleTracksRational) {
  for (Count n = 2; n <= 30; ++n)
    for (Count u = 1; u < n; ++u) {
      EXPECT_NEAR(toy_expected_adjusted<double>(u, n, 1.0), to_double(toy_expected_adjusted<Rational>(u, n, 1)),
                  1e-14);
      const double a = toy_double_adjusted<double>(u, n, 0.0);
      EXPECT_NEAR(a, to_double(toy_double_adjusted<Rational>(u, n, 0)), 1e-11 * std::max(1.0, std::abs(a)));
    }
}

TEST(Repro, GEnvelope) {
  for (Count n = 2; n <= 40; ++n)
    for (Count u = 1; u < n; ++u) {
      const double g = expected_adjusted_below_max<double>(u, n);
      EXPECT_GT(g, -1.0 / double(n)) << u << "/" << n;
      EXPECT_LT(g, -1.0 / (4.0 * double(n * n))) << u << "/" << n;
    }
}

TEST(Repro, Prop1Parts) {
  const auto p1 = prop1_record<Rational>(1, 1, 2, Rational(0));
  EXPECT_EQ(*p1.expectation, Rational(3, 2));
  EXPECT_EQ(*p1.nested_expectation, Rational(7, 4));
  EXPECT_TRUE(p1.violated);

  const auto p2 = prop1_record<Rational>(2, 1, 6, Rational(0));
  EXPECT_GT(*p2.affine_residual, 0);
  EXPECT_TRUE(p2.violated);

  const auto p3 = prop1_record<Rational>(3, 1, 2, Rational(0));
  EXPECT_EQ(*p3.expected_adjusted, Rational(-1, 10));
  EXPECT_TRUE(p3.violated);

  const auto p4 = prop1_record<Rational>(4, 1, 2, Rational(0));
  EXPECT_EQ(*p4.adjusted, Rational(-1, 5));
  EXPECT_EQ(*p4.double_adjusted, Rational(-1));
  EXPECT_TRUE(p4.violated);

  for (Count n = 2; n <= 50; ++n)
    for (Count u = 1; u < n; ++u) {
      const auto p5 = prop1_record<double>(5, u, n, 0.0);
      EXPECT_EQ(*p5.standardized, 0.0);
      EXPECT_TRUE(p5.violated);
    }
}

TEST(Repro, Prop1InputErrors) {
  EXPECT_THROW(prop1_record<double>(4, 3, 2, 0.0), InputError);
  EXPECT_THROW(prop1_record<double>(4, -1, 2, 0.0), InputError);
  EXPECT_THROW(prop1_record<double>(6, 1, 2, 0.0), InputError);
  EXPECT_THROW(prop1_record<double>(1, 0, 0, 0.0), InputError);
}

TEST(Repro, GridShapeAndGoldenCell) {
  const std::vector<double> cs{0.0, 1.0, -1.0};
  const auto grid = figure1_grid(100, cs);
  ASSERT_EQ(grid.size(), 3u * 4950u);
  EXPECT_EQ(grid.front().c, 0.0);
  EXPECT_EQ(grid.front().n, 2);
  EXPECT_EQ(grid.front().u1, 1);
  EXPECT_NEAR(std::abs(grid.front().as_value - grid.front().a2s_value), 0.8, 1e-12);
  EXPECT_NEAR(grid.front().neg_log10_diff, -std::log10(0.8), 1e-12);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const auto& a = grid[k - 1];
    const auto& b = grid[k];
    const bool ordered = a.c != b.c || a.n < b.n || (a.n == b.n && a.u1 < b.u1);
    EXPECT_TRUE(ordered);
  }
}

TEST(Repro, GridCsvHeader) {
  const std::vector<double> cs{0.0};
  const auto grid = figure1_grid(3, cs);
  std::ostringstream os;
  write_grid_csv(os, grid);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "c,N,u1,AS,A2S,neg_log10_diff,underflow");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 3u);
  EXPECT_NE(plot_script("grid.csv").find("grid.csv"), std::string::npos);
}

TEST(Repro, GridRejectsSmallNMax) {
  const std::vector<double> cs{0.0};
  EXPECT_THROW(figure1_grid(1, cs), InputError);
}

TEST(Repro, Asymptotics) {
  const double limit1 = 2.0 / (std::exp(1.0) - 1.0);
  const auto r = asymptotic_check(1, 1.0, 1000);
  EXPECT_NEAR(r.limit, limit1, 1e-12);
  EXPECT_LT(std::abs(r.ratio - limit1) / limit1, 0.05);
  EXPECT_NEAR(asymptotic_check(2, 1.0, 100).limit, 2.0 / (std::exp(2.0) - 1.0), 1e-12);
  const auto neg = asymptotic_check(1, -1.0, 1000);
  EXPECT_EQ(neg.limit, -2.0);
  EXPECT_LT(std::abs(neg.ratio + 2.0), 0.05);
  EXPECT_THROW(asymptotic_check(1, 0.0, 100), CapabilityError);
  EXPECT_THROW(asymptotic_check(5, 1.0, 5), InputError);
  EXPECT_THROW(asymptotic_check(0, 1.0, 5), InputError);
}
