#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "clusterlens/error.hpp"

namespace clusterlens {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Numeric data set: n observations (rows) by p features (columns).
///
/// Construct through validate_dataset(); a Dataset is immutable afterwards
/// and safe to share between threads.
template <typename Scalar>
class Dataset {
 public:
  Dataset() = default;

  const Matrix<Scalar>& values() const { return values_; }
  const std::vector<std::string>& feature_names() const { return names_; }
  Index n() const { return values_.rows(); }
  Index p() const { return values_.cols(); }

  auto row(Index i) const { return values_.row(i); }
  auto col(Index j) const { return values_.col(j); }

  // Column index of a feature name, or -1.
  Index find_feature(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    return it == names_.end() ? Index{-1} : Index(it - names_.begin());
  }

  bool operator==(const Dataset& other) const {
    return names_ == other.names_ && values_.rows() == other.values_.rows() &&
           values_.cols() == other.values_.cols() && values_ == other.values_;
  }

 private:
  template <typename S>
  friend Dataset<S> validate_dataset(Matrix<S>, std::vector<std::string>);

  Matrix<Scalar> values_;
  std::vector<std::string> names_;
};

template <typename Scalar>
Dataset<Scalar> validate_dataset(Matrix<Scalar> values,
                                 std::vector<std::string> names) {
  if (values.rows() == 0 || values.cols() == 0) {
    throw Error(Errc::EmptyDataset, "data set needs at least one row and one column");
  }
  if (Index(names.size()) != values.cols()) {
    throw Error(Errc::LengthMismatch,
                "got " + std::to_string(names.size()) + " feature names for " +
                    std::to_string(values.cols()) + " columns");
  }
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) {
      throw Error(Errc::DuplicateFeatureName, name);
    }
  }
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (!std::isfinite(values(i, j))) {
        throw Error(Errc::NonFiniteValue, "(" + std::to_string(i) + ", " +
                                              std::to_string(j) + ")");
      }
    }
  }
  Dataset<Scalar> out;
  out.values_ = std::move(values);
  out.names_ = std::move(names);
  return out;
}

// Default names x1..xp.
inline std::vector<std::string> default_feature_names(Index p) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  return names;
}

/// Nonempty, strictly increasing set of column indices S with complement -S.
class FeatureSubset {
 public:
  FeatureSubset(std::vector<Index> indices, Index p) : p_(p) {
    if (indices.empty()) {
      throw Error(Errc::InvalidArgument, "feature subset must not be empty");
    }
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
      throw Error(Errc::InvalidArgument, "feature subset has duplicate indices");
    }
    if (indices.front() < 0 || indices.back() >= p) {
      throw Error(Errc::IndexOutOfRange, "feature index outside [0, p)");
    }
    indices_ = std::move(indices);
  }

  // Resolve feature names against a data set.
  template <typename Scalar>
  static FeatureSubset from_names(const Dataset<Scalar>& data,
                                  const std::vector<std::string>& names) {
    std::vector<Index> idx;
    for (const auto& name : names) {
      Index j = data.find_feature(name);
      if (j < 0) throw Error(Errc::UnknownFeature, name);
      idx.push_back(j);
    }
    return FeatureSubset(std::move(idx), data.p());
  }

  const std::vector<Index>& indices() const { return indices_; }
  Index size() const { return Index(indices_.size()); }
  Index p() const { return p_; }
  Index operator[](Index s) const { return indices_[static_cast<std::size_t>(s)]; }

  std::vector<Index> complement() const {
    std::vector<Index> rest;
    std::size_t s = 0;
    for (Index j = 0; j < p_; ++j) {
      if (s < indices_.size() && indices_[s] == j) {
        ++s;
      } else {
        rest.push_back(j);
      }
    }
    return rest;
  }

  bool contains(Index j) const {
    return std::binary_search(indices_.begin(), indices_.end(), j);
  }

  // x_S and x_{-S} of a single observation.
  template <typename Derived>
  auto split(const Eigen::MatrixBase<Derived>& x) const {
    using S = typename Derived::Scalar;
    const auto rest = complement();
    Vector<S> in(size()), out(Index(rest.size()));
    for (Index s = 0; s < size(); ++s) in(s) = x(indices_[std::size_t(s)]);
    for (std::size_t r = 0; r < rest.size(); ++r) out(Index(r)) = x(rest[r]);
    return std::pair{in, out};
  }

  // Inverse of split().
  template <typename Scalar>
  Vector<Scalar> merge(const Vector<Scalar>& in, const Vector<Scalar>& out) const {
    Vector<Scalar> x(p_);
    const auto rest = complement();
    for (Index s = 0; s < size(); ++s) x(indices_[std::size_t(s)]) = in(s);
    for (std::size_t r = 0; r < rest.size(); ++r) x(rest[r]) = out(Index(r));
    return x;
  }

  template <typename Scalar>
  std::string label(const Dataset<Scalar>& data) const {
    std::string out;
    for (Index j : indices_) {
      if (!out.empty()) out += "+";
      out += data.feature_names()[std::size_t(j)];
    }
    return out;
  }

 private:
  std::vector<Index> indices_;
  Index p_ = 0;
};

/// Hard cluster assignment of n observations, labels in [0, k).
class HardLabeling {
 public:
  HardLabeling() = default;
  HardLabeling(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
    if (k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1");
    for (int c : labels_) {
      if (c < 0 || c >= k) {
        throw Error(Errc::ClusterOutOfRange,
                    "label " + std::to_string(c) + " not in [0, " +
                        std::to_string(k) + ")");
      }
    }
  }

  const std::vector<int>& labels() const { return labels_; }
  int k() const { return k_; }
  Index n() const { return Index(labels_.size()); }
  int operator[](Index i) const { return labels_[static_cast<std::size_t>(i)]; }

  // Share of observations per cluster.
  std::vector<double> proportions() const {
    std::vector<double> w(static_cast<std::size_t>(k_), 0.0);
    for (int c : labels_) w[std::size_t(c)] += 1.0;
    for (double& v : w) v /= double(labels_.size());
    return w;
  }

  bool operator==(const HardLabeling&) const = default;

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

/// Soft cluster memberships: n x k, every row on the probability simplex.
template <typename Scalar>
class SoftLabeling {
 public:
  explicit SoftLabeling(Matrix<Scalar> memberships)
      : memberships_(std::move(memberships)) {
    for (Index i = 0; i < memberships_.rows(); ++i) {
      const Scalar sum = memberships_.row(i).sum();
      if ((memberships_.row(i).array() < Scalar(0)).any() ||
          (memberships_.row(i).array() > Scalar(1)).any() ||
          std::abs(double(sum) - 1.0) > 1e-9) {
        throw Error(Errc::InvalidArgument,
                    "membership row " + std::to_string(i) + " not on the simplex");
      }
    }
  }

  const Matrix<Scalar>& memberships() const { return memberships_; }
  Index n() const { return memberships_.rows(); }
  int k() const { return int(memberships_.cols()); }

  // argmax per row, lowest index on ties.
  HardLabeling harden() const {
    std::vector<int> labels(static_cast<std::size_t>(n()));
    for (Index i = 0; i < n(); ++i) {
      Index best = 0;
      memberships_.row(i).maxCoeff(&best);
      labels[std::size_t(i)] = int(best);
    }
    return HardLabeling(std::move(labels), k());
  }

 private:
  Matrix<Scalar> memberships_;
};

/// Per-feature z-transform (population standard deviation).
template <typename Scalar>
struct Standardizer {
  Vector<Scalar> mean;
  Vector<Scalar> stddev;

  Index p() const { return mean.size(); }

  Scalar forward(Index j, Scalar v) const { return (v - mean(j)) / stddev(j); }
  Scalar inverse(Index j, Scalar z) const { return z * stddev(j) + mean(j); }

  Matrix<Scalar> transform(const Matrix<Scalar>& x) const {
    return ((x.rowwise() - mean.transpose()).array().rowwise() /
            stddev.transpose().array())
        .matrix();
  }

  Matrix<Scalar> inverse_transform(const Matrix<Scalar>& z) const {
    return ((z.array().rowwise() * stddev.transpose().array()).rowwise() +
            mean.transpose().array())
        .matrix();
  }

  // Identity transform for p features.
  static Standardizer identity(Index p) {
    return {Vector<Scalar>::Zero(p), Vector<Scalar>::Ones(p)};
  }
};

template <typename Scalar>
Standardizer<Scalar> fit_standardizer(const Dataset<Scalar>& data) {
  Standardizer<Scalar> st{Vector<Scalar>(data.p()), Vector<Scalar>(data.p())};
  const Scalar n = Scalar(data.n());
  for (Index j = 0; j < data.p(); ++j) {
    const Scalar mu = data.col(j).sum() / n;
    const Scalar var = (data.col(j).array() - mu).square().sum() / n;
    if (!(var > Scalar(0))) {
      throw Error(Errc::ZeroVariance, "column " + std::to_string(j) + " (" +
                                          data.feature_names()[std::size_t(j)] + ")");
    }
    st.mean(j) = mu;
    st.stddev(j) = std::sqrt(var);
  }
  return st;
}

/// z-standardize every column; returns the standardized data together with
/// the parameters needed to map values back to original units.
template <typename Scalar>
std::pair<Dataset<Scalar>, Standardizer<Scalar>> standardize(const Dataset<Scalar>& data) {
  auto st = fit_standardizer(data);
  return {validate_dataset<Scalar>(st.transform(data.values()), data.feature_names()),
          std::move(st)};
}

// Column subset of a data set.
template <typename Scalar>
Dataset<Scalar> select_columns(const Dataset<Scalar>& data, const std::vector<Index>& cols) {
  Matrix<Scalar> v(data.n(), Index(cols.size()));
  std::vector<std::string> names;
  for (std::size_t s = 0; s < cols.size(); ++s) {
    v.col(Index(s)) = data.col(cols[s]);
    names.push_back(data.feature_names()[std::size_t(cols[s])]);
  }
  return validate_dataset<Scalar>(std::move(v), std::move(names));
}

}  // namespace clusterlens
