#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "clusterlens/backends.hpp"
#include "clusterlens/core.hpp"
#include "clusterlens/rng.hpp"
#include "clusterlens/scores.hpp"

namespace clusterlens {

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). Probability must lie in [0, 1].
inline double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw Error(Errc::InvalidArgument, "quantile of empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw Error(Errc::InvalidArgument, "quantile probability outside [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double h = double(values.size() - 1) * prob;
  const auto lo = std::size_t(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - double(lo)) * (values[hi] - values[lo]);
}

struct ImportanceSummary {
  std::vector<double> raw;                          // one score per repetition
  double median = 0.0;
  std::vector<std::pair<double, double>> quantiles; // (probability, value)

  double at(double prob) const {
    for (const auto& [p, v] : quantiles) {
      if (p == prob) return v;
    }
    return quantile(raw, prob);
  }
};

inline ImportanceSummary summarize(std::vector<double> raw, const std::vector<double>& probes) {
  ImportanceSummary s;
  s.median = quantile(raw, 0.5);
  for (double p : probes) s.quantiles.emplace_back(p, quantile(raw, p));
  s.raw = std::move(raw);
  return s;
}

struct PficConfig {
  FeatureSubset features;
  ScoreFunction score;
  int repetitions = 100;
  std::uint64_t seed = 1;
  std::vector<double> probes{0.05, 0.5, 0.95};
  int threads = 1;

  void validate() const {
    if (repetitions < 1) throw Error(Errc::InvalidArgument, "repetitions must be >= 1");
    for (double p : probes) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(Errc::InvalidArgument, "quantile probes must lie in [0, 1]");
      }
    }
    if (!std::is_sorted(probes.begin(), probes.end())) {
      throw Error(Errc::InvalidArgument, "quantile probes must be sorted");
    }
  }
};

struct GlobalImportance {
  ImportanceSummary summary;
  std::vector<MultiConfusion> confusions;  // one per repetition
};

struct ClusterImportance {
  std::vector<ImportanceSummary> clusters;  // one per cluster
  double mean_of_medians = 0.0;              // unweighted over clusters
  std::vector<MultiConfusion> confusions;
};

/// Apply one row permutation jointly to all columns in S:
/// shuffled(i, j) = data(perm[i], j) for j in S; other columns untouched.
template <typename Scalar>
Matrix<Scalar> permute_columns(const Matrix<Scalar>& values, const FeatureSubset& features,
                               const std::vector<std::size_t>& perm) {
  if (Index(perm.size()) != values.rows()) {
    throw Error(Errc::LengthMismatch, "permutation length differs from row count");
  }
  Matrix<Scalar> out = values;
  for (Index j : features.indices()) {
    for (Index i = 0; i < values.rows(); ++i) out(i, j) = values(Index(perm[std::size_t(i)]), j);
  }
  return out;
}

template <typename Scalar>
Dataset<Scalar> shuffle_columns(const Dataset<Scalar>& data, const FeatureSubset& features,
                                Rng& rng) {
  const auto perm = rng.permutation(std::size_t(data.n()));
  return validate_dataset<Scalar>(permute_columns(data.values(), features, perm),
                                  data.feature_names());
}

namespace detail {

// Shuffle + reassign for each repetition; repetition r always uses stream
// (seed, r), so the result does not depend on the thread count.
template <typename Scalar>
std::vector<MultiConfusion> shuffled_confusions(const ClusterModel<Scalar>& model,
                                                const Dataset<Scalar>& data,
                                                const PficConfig& cfg,
                                                const HardLabeling& before) {
  cfg.validate();
  if (cfg.features.p() != data.p()) {
    throw Error(Errc::DimensionMismatch, "feature subset built for a different data set");
  }
  std::vector<MultiConfusion> out(std::size_t(cfg.repetitions),
                                  MultiConfusion(CountMatrix::Zero(1, 1)));
  parallel_for(out.size(), cfg.threads, [&](std::size_t r) {
    Rng rng = Rng::stream(cfg.seed, r);
    const auto perm = rng.permutation(std::size_t(data.n()));
    const Matrix<Scalar> shuffled = permute_columns(data.values(), cfg.features, perm);
    out[r] = multi_confusion(before, assign_hard(model, shuffled));
  });
  return out;
}

}  // namespace detail

/// Global PFIC: distribution of the aggregated score over t shuffles.
template <typename Scalar>
GlobalImportance pfic_global(const ClusterModel<Scalar>& model, const Dataset<Scalar>& data,
                             const PficConfig& cfg) {
  const HardLabeling before = assign_hard(model, data.values(), cfg.threads);
  GlobalImportance result;
  result.confusions = detail::shuffled_confusions(model, data, cfg, before);
  std::vector<double> raw;
  raw.reserve(result.confusions.size());
  for (const auto& mc : result.confusions) raw.push_back(cfg.score(mc));
  result.summary = summarize(std::move(raw), cfg.probes);
  return result;
}

/// Cluster-specific PFIC: per cluster, the binary score of c versus the rest.
template <typename Scalar>
ClusterImportance pfic_cluster_specific(const ClusterModel<Scalar>& model,
                                        const Dataset<Scalar>& data, const PficConfig& cfg) {
  const HardLabeling before = assign_hard(model, data.values(), cfg.threads);
  ClusterImportance result;
  result.confusions = detail::shuffled_confusions(model, data, cfg, before);
  const int k = model.k();
  std::vector<std::vector<double>> raw(static_cast<std::size_t>(k));
  for (const auto& mc : result.confusions) {
    for (int c = 0; c < k; ++c) raw[std::size_t(c)].push_back(cfg.score.binary(binary_confusion(mc, c)));
  }
  double total = 0.0;
  for (int c = 0; c < k; ++c) {
    result.clusters.push_back(summarize(std::move(raw[std::size_t(c)]), cfg.probes));
    total += result.clusters.back().median;
  }
  result.mean_of_medians = total / double(k);
  return result;
}

}  // namespace clusterlens
