#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <utility>

#include "clusterlens/backends.hpp"
#include "clusterlens/pfic.hpp"
#include "clusterlens/sim.hpp"

namespace cl = clusterlens;
using cl::Index;
using cl::Matrix;

namespace {

cl::Dataset<double> data_of(const Matrix<double>& m) {
  return cl::validate_dataset<double>(m, cl::default_feature_names(m.cols()));
}

cl::PficConfig config(std::vector<Index> features, Index p, const std::string& score, int reps,
                      std::uint64_t seed = 1) {
  cl::PficConfig cfg{cl::FeatureSubset(std::move(features), p), cl::ScoreFunction::parse(score)};
  cfg.repetitions = reps;
  cfg.seed = seed;
  return cfg;
}

// Six points in two tight pairs of columns; x0 separates the clusters.
Matrix<double> toy() {
  Matrix<double> m(6, 2);
  m << 0.0, 0.1,
       0.2, 0.9,
       0.1, 0.5,
       5.0, 0.4,
       5.2, 0.2,
       4.9, 0.8;
  return m;
}

}  // namespace

TEST(Shuffle, SingleColumnFollowsPermutation) {
  Matrix<double> m(3, 2);
  m << 1, 10,
       2, 20,
       3, 30;
  const auto out = cl::permute_columns(m, cl::FeatureSubset({0}, 2), {2, 0, 1});
  EXPECT_EQ(out(0, 0), 3);
  EXPECT_EQ(out(1, 0), 1);
  EXPECT_EQ(out(2, 0), 2);
  EXPECT_EQ(out.col(1), m.col(1));
}

TEST(Shuffle, IdentityPermutationLeavesDataAndScoresUnchanged) {
  const Matrix<double> m = toy();
  const auto out = cl::permute_columns(m, cl::FeatureSubset({0, 1}, 2), {0, 1, 2, 3, 4, 5});
  EXPECT_EQ(out, m);
  const cl::KMeansModel<double> model(Matrix<double>{{0.1, 0.5}, {5.0, 0.5}});
  const auto before = cl::assign_hard<double>(model, m);
  const auto after = cl::assign_hard<double>(model, out);
  for (const char* s : {"macro-f1", "micro-jaccard", "macro-fm"}) {
    EXPECT_EQ(cl::ScoreFunction::parse(s)(before, after), 1.0) << s;
  }
  EXPECT_EQ(cl::g2pc(before, after), 0.0);
}

TEST(Shuffle, JointShuffleKeepsRowPairs) {
  cl::Rng rng(11);
  Matrix<double> m(25, 3);
  for (Index i = 0; i < m.size(); ++i) m(i) = rng.uniform();
  const auto d = data_of(m);
  const auto out = cl::shuffle_columns(d, cl::FeatureSubset({0, 1}, 3), rng);
  std::vector<std::pair<double, double>> a, b;
  for (Index i = 0; i < 25; ++i) {
    a.emplace_back(m(i, 0), m(i, 1));
    b.emplace_back(out.values()(i, 0), out.values()(i, 1));
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_EQ(out.values().col(2), m.col(2));
}

TEST(PficGlobal, ConstantColumnScoresOne) {
  Matrix<double> m = toy();
  m.col(1).setConstant(3.0);
  const auto d = data_of(m);
  const cl::KMeansModel<double> model(Matrix<double>{{0.1, 3.0}, {5.0, 3.0}});
  const auto r = cl::pfic_global(model, d, config({1}, 2, "macro-f1", 20));
  for (double v : r.summary.raw) EXPECT_EQ(v, 1.0);
  EXPECT_EQ(r.summary.median, 1.0);
}

TEST(PficGlobal, SingleRepetitionMatchesHandTrace) {
  const auto d = data_of(toy());
  const cl::KMeansModel<double> model(Matrix<double>{{0.1, 0.5}, {5.0, 0.5}});
  const auto cfg = config({0}, 2, "macro-f1", 1, 42);
  const auto r = cl::pfic_global(model, d, cfg);

  // Replay: stream (seed, 0) gives the permutation; reassign by hand with
  // nearest-centroid distances; score via the binary F1 formula.
  const auto perm = cl::Rng::stream(42, 0).permutation(6);
  const Matrix<double> m = toy();
  std::vector<int> before(6), after(6);
  for (Index i = 0; i < 6; ++i) {
    auto nearest = [&](double x0, double x1) {
      const double d0 = (x0 - 0.1) * (x0 - 0.1) + (x1 - 0.5) * (x1 - 0.5);
      const double d1 = (x0 - 5.0) * (x0 - 5.0) + (x1 - 0.5) * (x1 - 0.5);
      return d1 < d0 ? 1 : 0;
    };
    before[std::size_t(i)] = nearest(m(i, 0), m(i, 1));
    after[std::size_t(i)] = nearest(m(Index(perm[std::size_t(i)]), 0), m(i, 1));
  }
  double total = 0.0;
  for (int c = 0; c < 2; ++c) {
    double cc = 0, entered = 0, left = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      cc += before[i] == c && after[i] == c;
      entered += before[i] != c && after[i] == c;
      left += before[i] == c && after[i] != c;
    }
    const double p = cc + left == 0 ? 1.0 : cc / (cc + left);
    const double rr = cc + entered == 0 ? 1.0 : cc / (cc + entered);
    total += p + rr == 0 ? 0.0 : 2 * p * rr / (p + rr);
  }
  ASSERT_EQ(r.summary.raw.size(), 1u);
  EXPECT_NEAR(r.summary.raw[0], total / 2, 1e-15);
  EXPECT_EQ(r.summary.median, r.summary.raw[0]);
}

TEST(PficCluster, IdentityLikeShuffleScoresOne) {
  // With a single row every permutation is the identity.
  const auto d = data_of(Matrix<double>{{1.0, 2.0}});
  const cl::KMeansModel<double> model(Matrix<double>{{1.0, 2.0}});
  const auto r = cl::pfic_cluster_specific(model, d, config({0, 1}, 2, "f1", 5));
  ASSERT_EQ(r.clusters.size(), 1u);
  EXPECT_EQ(r.clusters[0].median, 1.0);
}

TEST(PficCluster, MatchesCollapseOracleOnStoredConfusions) {
  const auto s = cl::scenario_3class_2d(3);
  const auto model = cl::fit_kmeans(s.data, 3, cl::KMeansOptions<double>{s.class_means()});
  const auto cfg = config({1}, 2, "f1", 30, 9);
  const auto r = cl::pfic_cluster_specific(model, s.data, cfg);
  ASSERT_EQ(r.confusions.size(), 30u);
  for (int c = 0; c < 3; ++c) {
    std::vector<double> oracle;
    for (const auto& mc : r.confusions) {
      const auto& m = mc.counts();
      const std::int64_t cc = m(c, c);
      const std::int64_t row = m.row(c).sum() - cc;  // entered c
      const std::int64_t col = m.col(c).sum() - cc;  // left c
      const std::int64_t rest = m.sum() - cc - row - col;
      oracle.push_back(cl::f1(cl::BinaryConfusion::from_cells(cc, row, col, rest)));
    }
    EXPECT_EQ(r.clusters[std::size_t(c)].raw, oracle);
  }
  double mean = 0;
  for (const auto& c : r.clusters) mean += c.median;
  EXPECT_NEAR(r.mean_of_medians, mean / 3, 1e-15);
}

TEST(PficGlobal, DeterministicAcrossThreadCounts) {
  const auto s = cl::scenario_imbalanced_4class(5);
  const auto model = cl::fit_kmeans(s.data, 4, cl::KMeansOptions<double>{s.class_means()});
  auto cfg = config({0}, 2, "macro-f1", 40, 77);
  const auto a = cl::pfic_global(model, s.data, cfg);
  cfg.threads = 4;
  const auto b = cl::pfic_global(model, s.data, cfg);
  EXPECT_EQ(a.summary.raw, b.summary.raw);
  cfg.seed = 78;
  const auto c = cl::pfic_global(model, s.data, cfg);
  EXPECT_NE(a.summary.raw, c.summary.raw);
}

TEST(PficConfig, RejectsBadParameters) {
  const auto d = data_of(toy());
  const cl::KMeansModel<double> model(Matrix<double>{{0.1, 0.5}, {5.0, 0.5}});
  auto cfg = config({0}, 2, "f1", 0);
  EXPECT_THROW(cl::pfic_global(model, d, cfg), cl::Error);
  cfg = config({0}, 3, "f1", 5);
  EXPECT_THROW(cl::pfic_global(model, d, cfg), cl::Error);
}

TEST(Quantile, Type7Interpolation) {
  EXPECT_EQ(cl::quantile({3, 1, 2}, 0.5), 2.0);
  EXPECT_EQ(cl::quantile({1, 2, 3, 4}, 0.5), 2.5);
  // h = 0.05 * 9 = 0.45 between 1 and 2.
  EXPECT_NEAR(cl::quantile({10, 9, 8, 7, 6, 5, 4, 3, 2, 1}, 0.05), 1.45, 1e-12);
  EXPECT_EQ(cl::quantile({7}, 0.95), 7.0);
  EXPECT_EQ(cl::quantile({1, 5}, 0.0), 1.0);
  EXPECT_EQ(cl::quantile({1, 5}, 1.0), 5.0);
  EXPECT_THROW(cl::quantile({}, 0.5), cl::Error);
  EXPECT_THROW(cl::quantile({1}, 1.5), cl::Error);
}
