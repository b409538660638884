#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "clusterlens/core.hpp"
#include "clusterlens/parallel.hpp"
#include "clusterlens/rng.hpp"

namespace clusterlens {

// A single observation: contiguous row vector or a strided row of a matrix.
template <typename Scalar>
using PointRef = Eigen::Ref<const RowVector<Scalar>, 0, Eigen::InnerStride<>>;

/// Reassignment interface shared by all clustering backends.
///
/// Every interpretation method only talks to a fitted model through this
/// interface: hard() maps a point to a cluster index, soft() to a membership
/// vector on the simplex. Implementations must be immutable after fitting so
/// that both calls are safe from any number of threads.
template <typename Scalar>
class ClusterModel {
 public:
  virtual ~ClusterModel() = default;

  virtual std::string backend() const = 0;
  virtual int k() const = 0;
  virtual Index dims() const = 0;
  virtual bool soft_capable() const { return false; }

  // Unchecked; use the free functions assign_hard / assign_soft.
  virtual int hard(const PointRef<Scalar>& x) const = 0;
  virtual Vector<Scalar> soft(const PointRef<Scalar>&) const {
    throw Error(Errc::NotSoftCapable, backend() + " has no soft assignment");
  }
};

namespace detail {

template <typename Scalar>
Vector<Scalar> squared_distances(const Matrix<Scalar>& centroids, const PointRef<Scalar>& x) {
  return (centroids.rowwise() - x).rowwise().squaredNorm();
}

// Lowest index among the minima.
template <typename Derived>
Index argmin_first(const Eigen::DenseBase<Derived>& v) {
  Index best = 0;
  for (Index c = 1; c < v.size(); ++c) {
    if (v(c) < v(best)) best = c;
  }
  return best;
}

template <typename Derived>
Index argmax_first(const Eigen::DenseBase<Derived>& v) {
  Index best = 0;
  for (Index c = 1; c < v.size(); ++c) {
    if (v(c) > v(best)) best = c;
  }
  return best;
}

}  // namespace detail

/// Fuzzy membership u_c = 1 / sum_j (d_c / d_j)^(2 / (m - 1)) from squared
/// Euclidean distances. A zero distance yields a one-hot vector on the lowest
/// such index.
template <typename Scalar>
Vector<Scalar> fuzzy_memberships(const Vector<Scalar>& sq_dist, Scalar fuzzifier) {
  const Index k = sq_dist.size();
  Vector<Scalar> u = Vector<Scalar>::Zero(k);
  for (Index c = 0; c < k; ++c) {
    if (sq_dist(c) == Scalar(0)) {
      u(c) = Scalar(1);
      return u;
    }
  }
  // Same ratio as the textbook form, scaled by the smallest distance so the
  // weights stay in (0, 1].
  const Scalar exponent = Scalar(1) / (fuzzifier - Scalar(1));
  const Scalar nearest = sq_dist.minCoeff();
  for (Index c = 0; c < k; ++c) u(c) = std::pow(nearest / sq_dist(c), exponent);
  return u / u.sum();
}

template <typename Scalar>
class KMeansModel final : public ClusterModel<Scalar> {
 public:
  KMeansModel() = default;
  explicit KMeansModel(Matrix<Scalar> centroids) : centroids_(std::move(centroids)) {}
  KMeansModel(Matrix<Scalar> centroids, Scalar inertia, int iterations,
              std::vector<Scalar> inertia_trace, HardLabeling labels)
      : centroids_(std::move(centroids)),
        inertia_(inertia),
        iterations_(iterations),
        inertia_trace_(std::move(inertia_trace)),
        labels_(std::move(labels)) {}

  std::string backend() const override { return "kmeans"; }
  int k() const override { return int(centroids_.rows()); }
  Index dims() const override { return centroids_.cols(); }

  int hard(const PointRef<Scalar>& x) const override {
    return int(detail::argmin_first(detail::squared_distances(centroids_, x)));
  }

  const Matrix<Scalar>& centroids() const { return centroids_; }
  Scalar inertia() const { return inertia_; }
  int iterations() const { return iterations_; }
  // Objective after each assignment step, for diagnostics.
  const std::vector<Scalar>& inertia_trace() const { return inertia_trace_; }
  const HardLabeling& labels() const { return labels_; }

 private:
  Matrix<Scalar> centroids_;
  Scalar inertia_ = 0;
  int iterations_ = 0;
  std::vector<Scalar> inertia_trace_;
  HardLabeling labels_;
};

template <typename Scalar>
class CMeansModel final : public ClusterModel<Scalar> {
 public:
  CMeansModel() = default;
  CMeansModel(Matrix<Scalar> centroids, Scalar fuzzifier)
      : centroids_(std::move(centroids)), fuzzifier_(fuzzifier) {
    if (!(fuzzifier_ > Scalar(1))) {
      throw Error(Errc::InvalidFuzzifier, "fuzzifier must be > 1");
    }
  }
  CMeansModel(Matrix<Scalar> centroids, Scalar fuzzifier, int iterations, Scalar tolerance,
              Matrix<Scalar> memberships)
      : CMeansModel(std::move(centroids), fuzzifier) {
    iterations_ = iterations;
    tolerance_ = tolerance;
    memberships_ = std::move(memberships);
  }

  std::string backend() const override { return "cmeans"; }
  int k() const override { return int(centroids_.rows()); }
  Index dims() const override { return centroids_.cols(); }
  bool soft_capable() const override { return true; }

  // Argmax of the memberships, so hard and soft assignment always agree.
  int hard(const PointRef<Scalar>& x) const override {
    return int(detail::argmax_first(soft(x)));
  }

  Vector<Scalar> soft(const PointRef<Scalar>& x) const override {
    return fuzzy_memberships<Scalar>(detail::squared_distances(centroids_, x), fuzzifier_);
  }

  const Matrix<Scalar>& centroids() const { return centroids_; }
  Scalar fuzzifier() const { return fuzzifier_; }
  int iterations() const { return iterations_; }
  Scalar tolerance() const { return tolerance_; }
  const Matrix<Scalar>& memberships() const { return memberships_; }

 private:
  Matrix<Scalar> centroids_;
  Scalar fuzzifier_ = 2;
  int iterations_ = 0;
  Scalar tolerance_ = 0;
  Matrix<Scalar> memberships_;
};

// ---------------------------------------------------------------------------
// Reassignment

template <typename Scalar>
void check_point(const ClusterModel<Scalar>& model, const PointRef<Scalar>& x) {
  if (x.size() != model.dims()) {
    throw Error(Errc::DimensionMismatch, "point has " + std::to_string(x.size()) +
                                             " features, model expects " +
                                             std::to_string(model.dims()));
  }
  if (!x.allFinite()) throw Error(Errc::NonFiniteValue, "point has non-finite entries");
}

template <typename Scalar>
int assign_hard(const ClusterModel<Scalar>& model,
                const std::type_identity_t<PointRef<Scalar>>& x) {
  check_point(model, x);
  return model.hard(x);
}

template <typename Scalar>
Vector<Scalar> assign_soft(const ClusterModel<Scalar>& model,
                           const std::type_identity_t<PointRef<Scalar>>& x) {
  if (!model.soft_capable()) {
    throw Error(Errc::NotSoftCapable, model.backend() + " has no soft assignment");
  }
  check_point(model, x);
  return model.soft(x);
}

// Exact-match overloads so a RowVector argument is read as one point and
// not converted to a 1 x p matrix of points.
template <typename Scalar>
int assign_hard(const ClusterModel<Scalar>& model, const RowVector<Scalar>& x) {
  return assign_hard<Scalar>(model, PointRef<Scalar>(x));
}

template <typename Scalar>
Vector<Scalar> assign_soft(const ClusterModel<Scalar>& model, const RowVector<Scalar>& x) {
  return assign_soft<Scalar>(model, PointRef<Scalar>(x));
}

// Hard labels for every row of `points`.
template <typename Scalar>
HardLabeling assign_hard(const ClusterModel<Scalar>& model, const Matrix<Scalar>& points,
                         int threads = 1) {
  if (points.cols() != model.dims()) {
    throw Error(Errc::DimensionMismatch, "points do not match model dimensionality");
  }
  std::vector<int> labels(static_cast<std::size_t>(points.rows()));
  parallel_for(labels.size(), threads, [&](std::size_t i) {
    labels[i] = model.hard(points.row(Index(i)));
  });
  return HardLabeling(std::move(labels), model.k());
}

template <typename Scalar>
SoftLabeling<Scalar> assign_soft(const ClusterModel<Scalar>& model,
                                 const Matrix<Scalar>& points, int threads = 1) {
  if (!model.soft_capable()) {
    throw Error(Errc::NotSoftCapable, model.backend() + " has no soft assignment");
  }
  if (points.cols() != model.dims()) {
    throw Error(Errc::DimensionMismatch, "points do not match model dimensionality");
  }
  Matrix<Scalar> u(points.rows(), model.k());
  parallel_for(std::size_t(points.rows()), threads, [&](std::size_t i) {
    u.row(Index(i)) = model.soft(points.row(Index(i))).transpose();
  });
  return SoftLabeling<Scalar>(std::move(u));
}

// ---------------------------------------------------------------------------
// Fitting

/// Seeded k-means++ seeding: first center uniform, then proportional to the
/// squared distance to the nearest chosen center.
template <typename Scalar>
Matrix<Scalar> kmeanspp_centers(const Dataset<Scalar>& data, int k, Rng& rng) {
  const Index n = data.n();
  Matrix<Scalar> centers(k, data.p());
  centers.row(0) = data.row(Index(rng.below(std::uint64_t(n))));
  Vector<Scalar> nearest(n);
  for (Index i = 0; i < n; ++i) nearest(i) = (data.row(i) - centers.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = double(nearest.sum());
    Index pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (Index i = 0; i < n; ++i) {
        target -= double(nearest(i));
        if (target < 0.0 && nearest(i) > Scalar(0)) {
          pick = i;
          break;
        }
      }
      // Rounding can leave target >= 0; fall back to the last positive weight.
      if (target >= 0.0) {
        for (Index i = n - 1; i >= 0; --i) {
          if (nearest(i) > Scalar(0)) {
            pick = i;
            break;
          }
        }
      }
    } else {
      pick = Index(rng.below(std::uint64_t(n)));
    }
    centers.row(c) = data.row(pick);
    for (Index i = 0; i < n; ++i) {
      nearest(i) = std::min(nearest(i), (data.row(i) - centers.row(c)).squaredNorm());
    }
  }
  return centers;
}

template <typename Scalar>
struct KMeansOptions {
  std::optional<Matrix<Scalar>> init;  // explicit k x p centers
  std::uint64_t seed = 1;
  int max_iter = 300;
  double tol = 1e-10;  // on the largest centroid shift (Euclidean)
  int restarts = 1;    // ignored when init is given
};

template <typename Scalar>
struct CMeansOptions {
  Scalar fuzzifier = 2;
  std::optional<Matrix<Scalar>> init;
  std::uint64_t seed = 1;
  int max_iter = 1000;
  double tol = 1e-9;  // on the largest membership change
};

namespace detail {

template <typename Scalar>
void check_init(const Dataset<Scalar>& data, int k, const Matrix<Scalar>& init) {
  if (init.rows() != k || init.cols() != data.p()) {
    throw Error(Errc::DimensionMismatch, "initial centers must be k x p");
  }
  if (!init.allFinite()) throw Error(Errc::NonFiniteValue, "initial centers");
}

template <typename Scalar>
void check_k(const Dataset<Scalar>& data, int k) {
  if (k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1");
  if (Index(k) > data.n()) {
    throw Error(Errc::KExceedsN, "k = " + std::to_string(k) + " exceeds n = " +
                                     std::to_string(data.n()));
  }
}

template <typename Scalar>
std::vector<int> nearest_labels(const Matrix<Scalar>& x, const Matrix<Scalar>& centers,
                                Vector<Scalar>& sq_dist) {
  std::vector<int> labels(static_cast<std::size_t>(x.rows()));
  sq_dist.resize(x.rows());
  for (Index i = 0; i < x.rows(); ++i) {
    const Vector<Scalar> d = squared_distances<Scalar>(centers, x.row(i));
    const Index c = argmin_first(d);
    labels[std::size_t(i)] = int(c);
    sq_dist(i) = d(c);
  }
  return labels;
}

}  // namespace detail

/// Lloyd iterations from fixed starting centers.
template <typename Scalar>
KMeansModel<Scalar> lloyd(const Dataset<Scalar>& data, Matrix<Scalar> centers, int max_iter,
                          double tol) {
  const Index n = data.n();
  const int k = int(centers.rows());
  const Matrix<Scalar>& x = data.values();
  std::vector<Scalar> trace;
  Vector<Scalar> sq_dist;
  std::vector<int> labels;
  int iter = 0;
  while (iter < max_iter) {
    ++iter;
    labels = detail::nearest_labels(x, centers, sq_dist);

    std::vector<Index> sizes(std::size_t(k), 0);
    for (int c : labels) ++sizes[std::size_t(c)];
    bool reseeded = false;
    for (int c = 0; c < k; ++c) {
      if (sizes[std::size_t(c)] != 0) continue;
      // Move the empty centroid onto the point farthest from its own
      // centroid, taken from a cluster that can spare it.
      Index far = -1;
      for (Index i = 0; i < n; ++i) {
        if (sizes[std::size_t(labels[std::size_t(i)])] < 2) continue;
        if (far < 0 || sq_dist(i) > sq_dist(far)) far = i;
      }
      if (far < 0) break;
      --sizes[std::size_t(labels[std::size_t(far)])];
      centers.row(c) = x.row(far);
      labels[std::size_t(far)] = c;
      sq_dist(far) = 0;
      sizes[std::size_t(c)] = 1;
      reseeded = true;
    }
    if (reseeded) {
      labels = detail::nearest_labels(x, centers, sq_dist);
      std::fill(sizes.begin(), sizes.end(), 0);
      for (int c : labels) ++sizes[std::size_t(c)];
      for (int c = 0; c < k; ++c) {
        if (sizes[std::size_t(c)] == 0) {
          throw Error(Errc::EmptyClusterUnrecoverable,
                      "cluster " + std::to_string(c) + " stays empty after re-seeding");
        }
      }
    }
    trace.push_back(sq_dist.sum());

    Matrix<Scalar> updated = Matrix<Scalar>::Zero(k, data.p());
    for (Index i = 0; i < n; ++i) updated.row(labels[std::size_t(i)]) += x.row(i);
    for (int c = 0; c < k; ++c) updated.row(c) /= Scalar(sizes[std::size_t(c)]);
    const double shift = double((updated - centers).rowwise().norm().maxCoeff());
    centers = std::move(updated);
    if (shift < tol) break;
  }
  labels = detail::nearest_labels(x, centers, sq_dist);
  const Scalar inertia = sq_dist.sum();
  return KMeansModel<Scalar>(std::move(centers), inertia, iter, std::move(trace),
                             HardLabeling(std::move(labels), k));
}

/// k-means via Lloyd's algorithm. With explicit starting centers a single run
/// is made; otherwise `restarts` seeded k-means++ starts are tried and the one
/// with the lowest inertia is kept (first one on ties).
template <typename Scalar>
KMeansModel<Scalar> fit_kmeans(const Dataset<Scalar>& data, int k,
                               const KMeansOptions<Scalar>& opts = {}) {
  detail::check_k(data, k);
  if (opts.init) {
    detail::check_init(data, k, *opts.init);
    return lloyd(data, *opts.init, opts.max_iter, opts.tol);
  }
  std::optional<KMeansModel<Scalar>> best;
  for (int r = 0; r < std::max(opts.restarts, 1); ++r) {
    Rng rng = Rng::stream(opts.seed, std::uint64_t(r));
    auto model = lloyd(data, kmeanspp_centers(data, k, rng), opts.max_iter, opts.tol);
    if (!best || model.inertia() < best->inertia()) best = std::move(model);
  }
  return std::move(*best);
}

/// Fuzzy c-means: alternate membership and centroid updates until the largest
/// membership change drops below tol.
template <typename Scalar>
CMeansModel<Scalar> fit_cmeans(const Dataset<Scalar>& data, int k,
                               const CMeansOptions<Scalar>& opts = {}) {
  detail::check_k(data, k);
  if (!(opts.fuzzifier > Scalar(1))) {
    throw Error(Errc::InvalidFuzzifier, "fuzzifier must be > 1");
  }
  Matrix<Scalar> centers;
  if (opts.init) {
    detail::check_init(data, k, *opts.init);
    centers = *opts.init;
  } else {
    Rng rng = Rng::stream(opts.seed, 0);
    centers = kmeanspp_centers(data, k, rng);
  }
  const Matrix<Scalar>& x = data.values();
  const Index n = data.n();
  auto memberships = [&](const Matrix<Scalar>& c) {
    Matrix<Scalar> u(n, k);
    for (Index i = 0; i < n; ++i) {
      u.row(i) = fuzzy_memberships<Scalar>(detail::squared_distances<Scalar>(c, x.row(i)),
                                           opts.fuzzifier)
                     .transpose();
    }
    return u;
  };

  Matrix<Scalar> u = memberships(centers);
  int iter = 0;
  while (iter < opts.max_iter) {
    ++iter;
    const Matrix<Scalar> w = u.array().pow(opts.fuzzifier).matrix();
    const Vector<Scalar> mass = w.colwise().sum().transpose();
    Matrix<Scalar> updated = w.transpose() * x;
    for (int c = 0; c < k; ++c) {
      // A cluster with no mass keeps its previous center.
      if (mass(c) > Scalar(0)) {
        updated.row(c) /= mass(c);
      } else {
        updated.row(c) = centers.row(c);
      }
    }
    centers = std::move(updated);
    Matrix<Scalar> next = memberships(centers);
    const double change = double((next - u).cwiseAbs().maxCoeff());
    u = std::move(next);
    if (change < opts.tol) break;
  }

  return CMeansModel<Scalar>(std::move(centers), opts.fuzzifier, iter, Scalar(opts.tol),
                             std::move(u));
}

}  // namespace clusterlens
