#include <gtest/gtest.h>

#include <memory>

#include "clusterlens/backends.hpp"
#include "clusterlens/icec.hpp"

namespace cl = clusterlens;
using cl::Errc;
using cl::Index;
using cl::Matrix;

namespace {

template <typename F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const cl::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::InvalidArgument;
}

cl::Dataset<double> data_of(const Matrix<double>& m) {
  return cl::validate_dataset<double>(m, cl::default_feature_names(m.cols()));
}

std::shared_ptr<const cl::SamplingGrid<double>> grid_of(const Matrix<double>& values) {
  auto g = std::make_shared<cl::SamplingGrid<double>>();
  g->values = values;
  g->strategy = "manual";
  g->lower = values.colwise().minCoeff().transpose();
  g->upper = values.colwise().maxCoeff().transpose();
  return g;
}

const Matrix<double> kCenters{{0.0, 0.0}, {4.0, 2.0}};

}  // namespace

TEST(Icec, SelfSubstitutionReproducesAssignment) {
  const auto d = data_of(Matrix<double>{{0.5, 0.2}, {3.0, 1.0}, {2.1, 0.9}});
  const cl::CMeansModel<double> model(kCenters, 2.0);
  const cl::FeatureSubset s({0}, 2);
  for (Index i = 0; i < 3; ++i) {
    const auto g = grid_of(Matrix<double>{{-1.0}, {d.values()(i, 0)}, {5.0}});
    const auto soft = cl::icec(model, d, i, s, g, cl::LabelMode::Soft);
    const auto hard = cl::icec(model, d, i, s, g, cl::LabelMode::Hard);
    EXPECT_EQ(soft.soft.row(1).transpose(), model.soft(d.row(i)));
    EXPECT_EQ(hard.hard[1], model.hard(d.row(i)));
    EXPECT_EQ(hard.initial_cluster, model.hard(d.row(i)));
  }
}

TEST(Icec, CentroidGivesOneHot) {
  // Observation already sits at centroid 1 on x1; substituting x0 = 4 puts it
  // exactly on the centroid.
  const auto d = data_of(Matrix<double>{{0.0, 2.0}});
  const cl::CMeansModel<double> model(kCenters, 2.0);
  const auto g = grid_of(Matrix<double>{{4.0}});
  const auto soft = cl::icec(model, d, 0, cl::FeatureSubset({0}, 2), g, cl::LabelMode::Soft);
  EXPECT_EQ(soft.soft(0, 0), 0.0);
  EXPECT_EQ(soft.soft(0, 1), 1.0);
  const auto hard = cl::icec(model, d, 0, cl::FeatureSubset({0}, 2), g, cl::LabelMode::Hard);
  EXPECT_EQ(hard.hard[0], 1);
}

TEST(Icec, HandTraceWithKMeans) {
  // Centroids (0,0) and (4,2); observation (1, 1.5); grid on x0 = {0, 2.5, 6}.
  // Squared distances:
  //   x0=0:   (0+2.25, 16+0.25)   -> 0
  //   x0=2.5: (6.25+2.25, 2.25+0.25) = (8.5, 2.5) -> 1
  //   x0=6:   (36+2.25, 4+0.25)   -> 1
  const auto d = data_of(Matrix<double>{{1.0, 1.5}});
  const cl::KMeansModel<double> model(kCenters);
  const auto curve = cl::icec(model, d, 0, cl::FeatureSubset({0}, 2),
                              grid_of(Matrix<double>{{0.0}, {2.5}, {6.0}}), cl::LabelMode::Hard);
  EXPECT_EQ(curve.hard, (std::vector<int>{0, 1, 1}));
  EXPECT_EQ(curve.initial_cluster, 0);
  EXPECT_EQ(curve.k, 2);
}

TEST(Icec, TwoFeatureSubstitution) {
  const auto d = data_of(Matrix<double>{{1.0, 1.5}});
  const cl::KMeansModel<double> model(kCenters);
  const auto curve = cl::icec(model, d, 0, cl::FeatureSubset({0, 1}, 2),
                              grid_of(Matrix<double>{{4.0, 2.0}, {0.1, -0.1}}), cl::LabelMode::Hard);
  EXPECT_EQ(curve.hard, (std::vector<int>{1, 0}));
}

TEST(IcecBatch, SingleObservationMatchesIcec) {
  const auto d = data_of(Matrix<double>{{1.0, 1.5}});
  const cl::CMeansModel<double> model(kCenters, 2.0);
  const cl::FeatureSubset s({1}, 2);
  const auto g = grid_of(Matrix<double>{{-1.0}, {0.5}, {3.0}});
  const auto batch = cl::icec_batch(model, d, s, g, cl::LabelMode::Soft);
  ASSERT_EQ(batch.size(), 1u);
  EXPECT_EQ(batch[0].soft, cl::icec(model, d, 0, s, g, cl::LabelMode::Soft).soft);
}

TEST(IcecBatch, SoftRowsSumToOneAndThreadsAgree) {
  cl::Rng rng(3);
  Matrix<double> m(40, 3);
  for (Index i = 0; i < m.size(); ++i) m(i) = 4 * rng.normal();
  const auto d = data_of(m);
  const auto model = cl::fit_cmeans(d, 3);
  const cl::FeatureSubset s({2}, 3);
  const auto g = std::make_shared<const cl::SamplingGrid<double>>(cl::grid_equidistant(d, s, 25));
  const auto a = cl::icec_batch(model, d, s, g, cl::LabelMode::Soft, 1);
  const auto b = cl::icec_batch(model, d, s, g, cl::LabelMode::Soft, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].soft, b[i].soft);
    for (Index j = 0; j < 25; ++j) EXPECT_NEAR(a[i].soft.row(j).sum(), 1.0, 1e-12);
  }
}

TEST(Icec, Errors) {
  const auto d = data_of(Matrix<double>{{1.0, 1.5}, {0.0, 0.0}});
  const cl::KMeansModel<double> km(kCenters);
  const cl::FeatureSubset s({0}, 2);
  const auto g = grid_of(Matrix<double>{{1.0}});
  EXPECT_EQ(error_code([&] { cl::icec(km, d, 0, s, g, cl::LabelMode::Soft); }),
            Errc::NotSoftCapable);
  EXPECT_EQ(error_code([&] { cl::icec(km, d, 2, s, g, cl::LabelMode::Hard); }),
            Errc::IndexOutOfRange);
  EXPECT_EQ(error_code([&] {
              cl::icec(km, d, 0, s, grid_of(Matrix<double>{{1.0, 2.0}}), cl::LabelMode::Hard);
            }),
            Errc::DimensionMismatch);
  EXPECT_EQ(error_code([] { cl::parse_label_mode("fuzzy"); }), Errc::InvalidArgument);
}
