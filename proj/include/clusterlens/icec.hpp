#pragma once

#include <memory>
#include <string>
#include <vector>

#include "clusterlens/backends.hpp"
#include "clusterlens/core.hpp"
#include "clusterlens/parallel.hpp"
#include "clusterlens/sampling.hpp"

namespace clusterlens {

enum class LabelMode { Hard, Soft };

inline LabelMode parse_label_mode(const std::string& name) {
  if (name == "hard") return LabelMode::Hard;
  if (name == "soft") return LabelMode::Soft;
  throw Error(Errc::InvalidArgument, "mode must be 'hard' or 'soft', got '" + name + "'");
}

/// Reassignment of one observation while x_S runs over a grid and x_{-S}
/// stays fixed. Soft curves hold an m x k membership matrix, hard curves an
/// m-vector of labels.
template <typename Scalar>
struct IcecCurve {
  Index observation = 0;
  std::shared_ptr<const SamplingGrid<Scalar>> grid;
  LabelMode mode = LabelMode::Hard;
  int k = 0;
  int initial_cluster = 0;
  Matrix<Scalar> soft;      // m x k, soft mode only
  std::vector<int> hard;    // m, hard mode only

  Index m() const { return grid->m(); }
};

namespace detail {

template <typename Scalar>
void check_icec_inputs(const ClusterModel<Scalar>& model, const Dataset<Scalar>& data,
                       const FeatureSubset& features, const SamplingGrid<Scalar>& grid,
                       LabelMode mode) {
  if (model.dims() != data.p()) {
    throw Error(Errc::DimensionMismatch, "model and data differ in feature count");
  }
  if (features.p() != data.p()) {
    throw Error(Errc::DimensionMismatch, "feature subset built for a different data set");
  }
  if (grid.width() != features.size()) {
    throw Error(Errc::DimensionMismatch, "grid width differs from |S|");
  }
  if (grid.m() < 1 || !grid.values.allFinite()) {
    throw Error(Errc::InvalidArgument, "grid must have at least one finite row");
  }
  if (mode == LabelMode::Soft && !model.soft_capable()) {
    throw Error(Errc::NotSoftCapable, model.backend() + " has no soft assignment");
  }
}

template <typename Scalar>
IcecCurve<Scalar> icec_unchecked(const ClusterModel<Scalar>& model, const Dataset<Scalar>& data,
                                 Index i, const FeatureSubset& features,
                                 const std::shared_ptr<const SamplingGrid<Scalar>>& grid,
                                 LabelMode mode) {
  IcecCurve<Scalar> curve;
  curve.observation = i;
  curve.grid = grid;
  curve.mode = mode;
  curve.k = model.k();
  curve.initial_cluster = model.hard(data.row(i));

  RowVector<Scalar> x = data.row(i);
  const Index m = grid->m();
  if (mode == LabelMode::Soft) {
    curve.soft.resize(m, model.k());
  } else {
    curve.hard.resize(std::size_t(m));
  }
  for (Index j = 0; j < m; ++j) {
    for (Index s = 0; s < features.size(); ++s) x(features[s]) = grid->values(j, s);
    if (mode == LabelMode::Soft) {
      curve.soft.row(j) = model.soft(x).transpose();
    } else {
      curve.hard[std::size_t(j)] = model.hard(x);
    }
  }
  return curve;
}

}  // namespace detail

template <typename Scalar>
IcecCurve<Scalar> icec(const ClusterModel<Scalar>& model, const Dataset<Scalar>& data, Index i,
                       const FeatureSubset& features,
                       std::shared_ptr<const SamplingGrid<Scalar>> grid, LabelMode mode) {
  detail::check_icec_inputs(model, data, features, *grid, mode);
  if (i < 0 || i >= data.n()) {
    throw Error(Errc::IndexOutOfRange, "observation " + std::to_string(i));
  }
  return detail::icec_unchecked(model, data, i, features, grid, mode);
}

/// ICEC curves for every observation on a shared grid.
template <typename Scalar>
std::vector<IcecCurve<Scalar>> icec_batch(const ClusterModel<Scalar>& model,
                                          const Dataset<Scalar>& data,
                                          const FeatureSubset& features,
                                          std::shared_ptr<const SamplingGrid<Scalar>> grid,
                                          LabelMode mode, int threads = 1) {
  detail::check_icec_inputs(model, data, features, *grid, mode);
  std::vector<IcecCurve<Scalar>> curves(std::size_t(data.n()));
  parallel_for(curves.size(), threads, [&](std::size_t i) {
    curves[i] = detail::icec_unchecked(model, data, Index(i), features, grid, mode);
  });
  return curves;
}

}  // namespace clusterlens
