#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "clusterlens/core.hpp"
#include "clusterlens/rng.hpp"
#include "clusterlens/sobol.hpp"

namespace clusterlens {

/// m substitute vectors for the features in S (one row per grid point).
template <typename Scalar>
struct SamplingGrid {
  Matrix<Scalar> values;  // m x |S|
  std::string strategy;
  Vector<Scalar> lower;   // per feature in S
  Vector<Scalar> upper;

  Index m() const { return values.rows(); }
  Index width() const { return values.cols(); }

  // Same grid with every column mapped through f(column, value).
  template <typename F>
  SamplingGrid map_columns(F&& f) const {
    SamplingGrid out = *this;
    for (Index s = 0; s < width(); ++s) {
      for (Index j = 0; j < m(); ++j) out.values(j, s) = f(s, values(j, s));
      out.lower(s) = f(s, lower(s));
      out.upper(s) = f(s, upper(s));
    }
    return out;
  }
};

enum class Sampler { Observed, Equidistant, Sobol };

inline Sampler parse_sampler(const std::string& name) {
  if (name == "observed") return Sampler::Observed;
  if (name == "equidistant" || name == "grid") return Sampler::Equidistant;
  if (name == "sobol") return Sampler::Sobol;
  throw Error(Errc::InvalidArgument, "unknown sampler '" + name + "'");
}

namespace detail {

template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> feature_range(const Dataset<Scalar>& data,
                                                        const FeatureSubset& features) {
  Vector<Scalar> lo(features.size()), hi(features.size());
  for (Index s = 0; s < features.size(); ++s) {
    lo(s) = data.col(features[s]).minCoeff();
    hi(s) = data.col(features[s]).maxCoeff();
  }
  return {lo, hi};
}

// m points from lo to hi inclusive, endpoints exact.
template <typename Scalar>
Vector<Scalar> linspace(Scalar lo, Scalar hi, Index m) {
  Vector<Scalar> v(m);
  for (Index j = 0; j < m; ++j) v(j) = lo + (hi - lo) * (Scalar(j) / Scalar(m - 1));
  v(m - 1) = hi;
  return v;
}

}  // namespace detail

/// Observed values of S: all rows when m == n, otherwise a seeded subsample
/// without replacement. Sorted ascending when |S| = 1.
template <typename Scalar>
SamplingGrid<Scalar> grid_observed(const Dataset<Scalar>& data, const FeatureSubset& features,
                                   Index m, std::uint64_t seed = 1) {
  if (m < 1) throw Error(Errc::InvalidArgument, "m must be >= 1");
  if (m > data.n()) {
    throw Error(Errc::MExceedsN, "m = " + std::to_string(m) + " exceeds n = " +
                                     std::to_string(data.n()));
  }
  std::vector<std::size_t> rows;
  if (m == data.n()) {
    rows.resize(std::size_t(m));
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  } else {
    Rng rng(seed);
    rows = rng.sample_without_replacement(std::size_t(data.n()), std::size_t(m));
  }
  SamplingGrid<Scalar> grid;
  grid.strategy = "observed";
  grid.values.resize(m, features.size());
  for (Index j = 0; j < m; ++j) {
    for (Index s = 0; s < features.size(); ++s) {
      grid.values(j, s) = data.values()(Index(rows[std::size_t(j)]), features[s]);
    }
  }
  if (features.size() == 1) {
    std::sort(grid.values.data(), grid.values.data() + m);
  }
  std::tie(grid.lower, grid.upper) = detail::feature_range(data, features);
  return grid;
}

/// m equally spaced values over the observed [min, max] of a single feature.
template <typename Scalar>
SamplingGrid<Scalar> grid_equidistant(const Dataset<Scalar>& data, const FeatureSubset& features,
                                      Index m) {
  if (features.size() != 1) {
    throw Error(Errc::InvalidArgument, "equidistant grid takes one feature; use grid_cartesian");
  }
  if (m < 2) throw Error(Errc::InvalidArgument, "equidistant grid needs m >= 2");
  auto [lo, hi] = detail::feature_range(data, features);
  if (!(hi(0) > lo(0))) {
    throw Error(Errc::DegenerateRange, data.feature_names()[std::size_t(features[0])]);
  }
  SamplingGrid<Scalar> grid;
  grid.strategy = "equidistant";
  grid.values = detail::linspace(lo(0), hi(0), m);
  grid.lower = lo;
  grid.upper = hi;
  return grid;
}

/// First m Sobol points mapped affinely onto [lower, upper]. seed = 0 gives
/// the plain sequence; any other seed applies a random digital shift.
template <typename Scalar>
SamplingGrid<Scalar> grid_sobol(const Vector<Scalar>& lower, const Vector<Scalar>& upper, Index m,
                                std::uint32_t seed = 0) {
  if (m < 1) throw Error(Errc::InvalidArgument, "m must be >= 1");
  if (lower.size() != upper.size() || lower.size() < 1) {
    throw Error(Errc::InvalidBounds, "need one lower and upper bound per feature");
  }
  if (!lower.allFinite() || !upper.allFinite() || (upper.array() < lower.array()).any()) {
    throw Error(Errc::InvalidBounds, "bounds must be finite with lower <= upper");
  }
  SobolSequence seq(int(lower.size()), seed);
  SamplingGrid<Scalar> grid;
  grid.strategy = "sobol";
  grid.values.resize(m, lower.size());
  for (Index j = 0; j < m; ++j) {
    const auto u = seq.next();
    for (Index s = 0; s < lower.size(); ++s) {
      grid.values(j, s) = lower(s) + Scalar(u[std::size_t(s)]) * (upper(s) - lower(s));
    }
  }
  grid.lower = lower;
  grid.upper = upper;
  return grid;
}

template <typename Scalar>
SamplingGrid<Scalar> grid_sobol(const Dataset<Scalar>& data, const FeatureSubset& features,
                                Index m, std::uint32_t seed = 0) {
  auto [lo, hi] = detail::feature_range(data, features);
  return grid_sobol<Scalar>(lo, hi, m, seed);
}

/// m x m product of the two per-axis equidistant grids, row-major: the
/// first feature varies slowest.
template <typename Scalar>
SamplingGrid<Scalar> grid_cartesian(const Dataset<Scalar>& data, const FeatureSubset& features,
                                    Index m) {
  if (features.size() != 2) throw Error(Errc::InvalidArgument, "cartesian grid takes two features");
  const auto a = grid_equidistant(data, FeatureSubset({features[0]}, data.p()), m);
  const auto b = grid_equidistant(data, FeatureSubset({features[1]}, data.p()), m);
  SamplingGrid<Scalar> grid;
  grid.strategy = "cartesian";
  grid.values.resize(m * m, 2);
  for (Index r = 0; r < m; ++r) {
    for (Index c = 0; c < m; ++c) {
      grid.values(r * m + c, 0) = a.values(r, 0);
      grid.values(r * m + c, 1) = b.values(c, 0);
    }
  }
  grid.lower = Vector<Scalar>(2);
  grid.upper = Vector<Scalar>(2);
  grid.lower << a.lower(0), b.lower(0);
  grid.upper << a.upper(0), b.upper(0);
  return grid;
}

/// Dispatch used by the CLI: |S| = 2 with the equidistant sampler yields the
/// Cartesian product.
template <typename Scalar>
SamplingGrid<Scalar> make_grid(const Dataset<Scalar>& data, const FeatureSubset& features,
                               Sampler sampler, Index m, std::uint64_t seed) {
  switch (sampler) {
    case Sampler::Observed:
      return grid_observed(data, features, std::min(m, data.n()), seed);
    case Sampler::Equidistant:
      return features.size() == 2 ? grid_cartesian(data, features, m)
                                  : grid_equidistant(data, features, m);
    case Sampler::Sobol:
      return grid_sobol(data, features, m, 0u);
  }
  throw Error(Errc::InvalidArgument, "unknown sampler");
}

}  // namespace clusterlens
