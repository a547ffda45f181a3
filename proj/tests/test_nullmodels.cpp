#include <gtest/gtest.h>

#include <cmath>

#include "adjsim/errors.hpp"
#include "adjsim/expectation.hpp"
#include "adjsim/sampling.hpp"
#include "oracles.hpp"

using namespace adjsim;

namespace {

oracle::Model oracle_model(ModelKind k) {
  switch (k) {
    case ModelKind::ind2:
      return oracle::Model::ind2;
    case ModelKind::ind1:
      return oracle::Model::ind1;
    default:
      return oracle::Model::uniform;
  }
}

oracle::Dist oracle_distribution(const NullModel& m, const ContingencyTable& t) {
  return m.kind == ModelKind::perm ? oracle::permutation_distribution(t)
                                   : oracle::sequence_distribution(t, oracle_model(m.kind));
}

}  // namespace

TEST(NullModel, IdsRoundTrip) {
  for (auto id : kModelIds) {
    EXPECT_EQ(model_from_id(id).id(), id);
    EXPECT_FALSE(describe_model(id).empty());
  }
  EXPECT_THROW(model_from_id("hyper"), InputError);
}

TEST(NullModel, Ind1NeedsSquareTable) {
  EXPECT_THROW(require_model_shape(NullModel{ModelKind::ind1}, ContingencyTable::from_rows({{1, 2, 0}, {0, 1, 1}})),
               ShapeError);
}

// Probabilities from the library equal the brute-force counts of permutations
// and observation sequences, and sum to one over the support.
TEST(NullModel, MassMatchesOracles) {
  for (auto kind : {ModelKind::perm, ModelKind::ind2, ModelKind::ind1, ModelKind::fixed_uniform}) {
    const NullModel m{kind};
    for (const auto& t : oracle::all_tables_up_to(4, 2, 2)) {
      const auto want = oracle_distribution(m, t);
      Rational total = 0;
      std::size_t count = 0;
      for_each_weighted<Rational>(m, t, {}, [&](const ContingencyTable& s, const Rational& p) {
        ++count;
        total += p;
        const auto it = want.find(s);
        ASSERT_NE(it, want.end()) << m.id() << " " << s.to_string();
        EXPECT_EQ(p, it->second) << m.id() << " " << t.to_string() << " -> " << s.to_string();
      });
      EXPECT_EQ(total, Rational(1)) << m.id() << " " << t.to_string();
      EXPECT_EQ(count, want.size()) << m.id() << " " << t.to_string();
    }
  }
}

TEST(NullModel, DoubleMassTracksExact) {
  const auto t = ContingencyTable::from_rows({{2, 1, 0}, {1, 2, 1}, {0, 1, 2}});
  for (auto kind : {ModelKind::perm, ModelKind::ind2, ModelKind::ind1}) {
    const NullModel m{kind};
    const ModelDistribution<double> d(m, t);
    const ModelDistribution<Rational> e(m, t);
    support(m, t).for_each([&](const ContingencyTable& s) {
      EXPECT_NEAR(d.mass(s), to_double(e.mass(s)), 1e-13);
    });
  }
}

TEST(Expectation, ClosedFormsMatchOracles) {
  const auto& reg = ClosedFormRegistry<Rational>::builtin();
  for (const auto& t : oracle::all_tables_up_to(5, 2, 2, 2)) {
    const auto perm = oracle::permutation_distribution(t);
    EXPECT_EQ((*reg.find_mean(ModelKind::perm, "p"))(t), oracle::mean(perm, oracle::p_index));
    EXPECT_EQ((*reg.find_mean(ModelKind::perm, "q_joint"))(t), oracle::mean(perm, oracle::q_index));
    const auto ind1 = oracle::sequence_distribution(t, oracle::Model::ind1);
    EXPECT_EQ((*reg.find_mean(ModelKind::ind1, "p"))(t), oracle::mean(ind1, oracle::p_index));
  }
  for (Count n = 1; n <= 6; ++n)
    for (Count u = 0; u <= n; ++u) {
      const auto t = oracle::column(u, n);
      const auto ind2 = oracle::sequence_distribution(t, oracle::Model::ind2);
      EXPECT_EQ((*reg.find_mean(ModelKind::ind2, "toy_u1"))(t), oracle::mean(ind2, oracle::u1));
      EXPECT_EQ((*reg.find_variance(ModelKind::ind2, "toy_u1"))(t), oracle::variance(ind2, oracle::u1));
      EXPECT_EQ((*reg.find_mean(ModelKind::ind2, "toy_u1_squared"))(t), oracle::mean(ind2, oracle::u1_squared));
    }
}

TEST(Expectation, EnumerationMatchesOracle) {
  const auto q = index_by_id<Rational>("q_joint");
  EngineConfig cfg;
  cfg.method = Method::enumeration;
  for (auto kind : {ModelKind::ind2, ModelKind::fixed_uniform, ModelKind::perm}) {
    const NullModel m{kind};
    for (const auto& t : oracle::all_tables_up_to(4, 2, 2, 2)) {
      const auto d = oracle_distribution(m, t);
      const auto e = expectation<Rational>(m, t, q, cfg);
      EXPECT_EQ(e.method, Method::enumeration);
      EXPECT_EQ(e.value, oracle::mean(d, oracle::q_index)) << m.id() << t.to_string();
      EXPECT_EQ(variance<Rational>(m, t, q, cfg).value, oracle::variance(d, oracle::q_index));
    }
  }
}

TEST(Expectation, AutoPrefersClosedForm) {
  const auto t = ContingencyTable::from_rows({{1, 1}, {0, 2}});
  EXPECT_EQ(expectation<double>(NullModel{ModelKind::perm}, t, index_by_id<double>("p")).method,
            Method::closed_form);
  EXPECT_EQ(expectation<double>(NullModel{ModelKind::ind2}, t, index_by_id<double>("q_joint")).method,
            Method::enumeration);
}

TEST(Expectation, ClosedFormMissingIsCapabilityError) {
  EngineConfig cfg;
  cfg.method = Method::closed_form;
  const auto t = ContingencyTable::from_rows({{1, 1}, {0, 2}});
  EXPECT_THROW(expectation<double>(NullModel{ModelKind::ind2}, t, index_by_id<double>("rand"), cfg), CapabilityError);
}

TEST(Expectation, MonteCarloNeedsSeedAndDouble) {
  EngineConfig cfg;
  cfg.method = Method::monte_carlo;
  const auto t = oracle::column(30, 100);
  EXPECT_THROW(expectation<double>(NullModel{ModelKind::ind2}, t, index_by_id<double>("toy_u1"), cfg),
               CapabilityError);
  cfg.mc.seed = 1;
  EXPECT_THROW(expectation<Rational>(NullModel{ModelKind::ind2}, t, index_by_id<Rational>("toy_u1"), cfg),
               CapabilityError);
}

TEST(Expectation, AutoOverBudgetFallsBackOnlyWithSeed) {
  EngineConfig cfg;
  cfg.budget.max_tables = 50;
  const auto t = ContingencyTable::from_rows({{3, 2, 1}, {1, 3, 2}, {2, 1, 3}});
  const auto s = index_by_id<double>("rand");
  EXPECT_THROW(expectation<double>(NullModel{ModelKind::ind2}, t, s, cfg), ResourceError);
  cfg.mc.seed = 11;
  cfg.mc.samples = 2000;
  const auto e = expectation<double>(NullModel{ModelKind::ind2}, t, s, cfg);
  EXPECT_EQ(e.method, Method::monte_carlo);
  ASSERT_TRUE(e.mc_std_error);
  EXPECT_GT(*e.mc_std_error, 0.0);
}

TEST(MonteCarlo, DeterministicAcrossRunsAndStreamsMatter) {
  const auto t = oracle::column(30, 100);
  MonteCarloConfig cfg;
  cfg.samples = 20000;
  cfg.seed = 42;
  cfg.streams = 3;
  const auto s = [](const ContingencyTable& n) { return double(n.row_margins()[0]); };
  const auto a = monte_carlo_moments(NullModel{ModelKind::ind2}, t, s, cfg);
  const auto b = monte_carlo_moments(NullModel{ModelKind::ind2}, t, s, cfg);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_EQ(a.samples, 20000u);
  EXPECT_NEAR(a.mean, 30.0, 4 * a.mean_std_error);
  EXPECT_NEAR(a.variance, 30.0 * 0.7, 4 * a.variance_std_error);
}

TEST(Sampling, DrawsStayInSupport) {
  Rng rng(5);
  const auto t = ContingencyTable::from_rows({{2, 1, 0}, {0, 1, 3}});
  for (auto kind : {ModelKind::perm, ModelKind::ind2, ModelKind::fixed_uniform}) {
    const NullModel m{kind};
    const TableSampler sampler(m, t);
    const ModelDistribution<double> d(m, t);
    for (int k = 0; k < 200; ++k) {
      const auto s = sampler.draw(rng);
      EXPECT_EQ(s.total(), t.total());
      EXPECT_GT(d.mass(s), 0.0) << m.id() << " " << s.to_string();
      if (kind == ModelKind::perm) {
        EXPECT_TRUE(std::equal(s.row_margins().begin(), s.row_margins().end(), t.row_margins().begin()));
        EXPECT_TRUE(std::equal(s.col_margins().begin(), s.col_margins().end(), t.col_margins().begin()));
      }
    }
  }
}

TEST(Sampling, PermFrequenciesFollowHypergeometric) {
  const auto t = ContingencyTable::from_rows({{2, 1}, {1, 2}});
  const auto draws = sample(NullModel{ModelKind::perm}, t, 9, 60000);
  const auto d = oracle::permutation_distribution(t);
  std::map<ContingencyTable, double> freq;
  for (const auto& s : draws) freq[s] += 1.0 / double(draws.size());
  for (const auto& [s, p] : d) {
    const double pd = to_double(p);
    EXPECT_NEAR(freq[s], pd, 5 * std::sqrt(pd * (1 - pd) / double(draws.size()))) << s.to_string();
  }
}

TEST(Sampling, StreamSeedsDiffer) {
  EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
  EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
  EXPECT_EQ(stream_seed(7, 3), stream_seed(7, 3));
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) EXPECT_LT(uniform_below(rng, 7), 7u);
}
