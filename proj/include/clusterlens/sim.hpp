#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "clusterlens/core.hpp"
#include "clusterlens/rng.hpp"

namespace clusterlens {

/// Multivariate normal N(mean, covariance).
template <typename Scalar>
struct MvnSpec {
  Vector<Scalar> mean;
  Matrix<Scalar> covariance;

  Index p() const { return mean.size(); }

  // Lower Cholesky factor; throws NotPositiveDefinite.
  Matrix<Scalar> cholesky() const {
    if (covariance.rows() != p() || covariance.cols() != p()) {
      throw Error(Errc::DimensionMismatch, "covariance must be p x p");
    }
    if (!((covariance - covariance.transpose()).cwiseAbs().maxCoeff() <= Scalar(1e-9))) {
      throw Error(Errc::NotPositiveDefinite, "covariance is not symmetric");
    }
    Eigen::LLT<Matrix<Scalar>> llt(covariance);
    if (llt.info() != Eigen::Success) {
      throw Error(Errc::NotPositiveDefinite, "Cholesky factorization failed");
    }
    return llt.matrixL();
  }
};

/// count x p draws: mean + L z with z standard normal (polar method), rows
/// drawn in order from `rng`.
template <typename Scalar>
Matrix<Scalar> sample_mvn(const MvnSpec<Scalar>& spec, Index count, Rng& rng) {
  const Matrix<Scalar> chol = spec.cholesky();
  const Index p = spec.p();
  Matrix<Scalar> out(count, p);
  Vector<Scalar> z(p);
  for (Index i = 0; i < count; ++i) {
    for (Index j = 0; j < p; ++j) z(j) = Scalar(rng.normal());
    out.row(i) = (spec.mean + chol * z).transpose();
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> sample_mvn(const MvnSpec<Scalar>& spec, Index count, std::uint64_t seed) {
  Rng rng(seed);
  return sample_mvn(spec, count, rng);
}

/// Wishart_p(dof, scale): sum of dof outer products of N(0, scale) draws.
template <typename Scalar>
Matrix<Scalar> sample_wishart(int dof, const Matrix<Scalar>& scale, Rng& rng) {
  if (dof < scale.rows()) {
    throw Error(Errc::InvalidDof, "degrees of freedom " + std::to_string(dof) +
                                      " below dimension " + std::to_string(scale.rows()));
  }
  const MvnSpec<Scalar> base{Vector<Scalar>::Zero(scale.rows()), scale};
  const Matrix<Scalar> a = sample_mvn(base, dof, rng);
  const Matrix<Scalar> m = a.transpose() * a;
  return (m + m.transpose()) / Scalar(2);
}

template <typename Scalar>
Matrix<Scalar> sample_wishart(int dof, const Matrix<Scalar>& scale, std::uint64_t seed) {
  Rng rng(seed);
  return sample_wishart(dof, scale, rng);
}

/// Synthetic data set with its generating classes.
struct ScenarioData {
  std::string name;
  Dataset<double> data;
  HardLabeling latent;               // generating class per row
  std::vector<MvnSpec<double>> specs;

  // Class means as k x p starting centers.
  Matrix<double> class_means() const;
};

// Four imbalanced bivariate classes, sizes (20, 20, 60, 20).
ScenarioData scenario_imbalanced_4class(std::uint64_t seed);
// Three bivariate classes, sizes (20, 50, 20).
ScenarioData scenario_3class_2d(std::uint64_t seed);
// Three trivariate classes of 50 with Wishart-drawn covariances.
ScenarioData scenario_wishart_3class(std::uint64_t seed);

// Version tag of the frozen scenario parameters.
int scenario_config_version();

}  // namespace clusterlens
