#include <algorithm>
#include "clusterlens/scores.hpp"

#include <cmath>
#include <numeric>

namespace clusterlens {

MultiConfusion::MultiConfusion(CountMatrix counts) : counts_(std::move(counts)) {
  if (counts_.rows() != counts_.cols() || counts_.rows() == 0) {
    throw Error(Errc::InvalidArgument, "confusion matrix must be square and nonempty");
  }
  if ((counts_.array() < 0).any()) {
    throw Error(Errc::InvalidArgument, "confusion counts must be nonnegative");
  }
}

BinaryConfusion BinaryConfusion::from_cells(std::int64_t cc, std::int64_t c_cbar,
                                            std::int64_t cbar_c, std::int64_t cbar_cbar,
                                            int cluster) {
  return BinaryConfusion{cluster, cc, c_cbar, cbar_c, cbar_cbar};
}

double BinaryConfusion::precision() const {
  const auto den = stayed + left;
  return den == 0 ? 1.0 : double(stayed) / double(den);
}

double BinaryConfusion::recall() const {
  const auto den = stayed + entered;
  return den == 0 ? 1.0 : double(stayed) / double(den);
}

MultiConfusion multi_confusion(const HardLabeling& before, const HardLabeling& after) {
  if (before.n() != after.n()) {
    throw Error(Errc::LengthMismatch, std::to_string(before.n()) + " vs " +
                                          std::to_string(after.n()) + " labels");
  }
  if (before.k() != after.k()) {
    throw Error(Errc::KMismatch, "k = " + std::to_string(before.k()) + " vs " +
                                     std::to_string(after.k()));
  }
  CountMatrix counts = CountMatrix::Zero(before.k(), before.k());
  for (Index i = 0; i < before.n(); ++i) ++counts(after[i], before[i]);
  return MultiConfusion(std::move(counts));
}

BinaryConfusion binary_confusion(const MultiConfusion& mc, int c) {
  if (c < 0 || c >= mc.k()) {
    throw Error(Errc::ClusterOutOfRange, "cluster " + std::to_string(c));
  }
  const auto& m = mc.counts();
  BinaryConfusion bc;
  bc.cluster = c;
  bc.stayed = m(c, c);
  bc.left = m.col(c).sum() - m(c, c);
  bc.entered = m.row(c).sum() - m(c, c);
  bc.outside = m.sum() - bc.stayed - bc.left - bc.entered;
  return bc;
}

double f_beta(const BinaryConfusion& bc, double beta) {
  if (!(beta > 0.0)) throw Error(Errc::InvalidArgument, "beta must be > 0");
  const double p = bc.precision();
  const double r = bc.recall();
  if (p + r == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (b2 + 1.0) * p * r / (b2 * p + r);
}

double jaccard(const BinaryConfusion& bc) {
  const auto den = bc.stayed + bc.left + bc.entered;
  // Cluster empty before and after: nothing changed, same as F1 = 1.
  if (den == 0) return 1.0;
  return double(bc.stayed) / double(den);
}

double fowlkes_mallows(const BinaryConfusion& bc) {
  return std::sqrt(bc.precision() * bc.recall());
}

double mcc(const BinaryConfusion& bc) {
  const double tp = double(bc.stayed);
  const double fn = double(bc.left);
  const double fp = double(bc.entered);
  const double tn = double(bc.outside);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(den);
}

double aggregate(const std::vector<double>& binary_scores, const std::vector<double>& weights,
                 Aggregation mode) {
  if (binary_scores.empty()) throw Error(Errc::InvalidArgument, "no scores to aggregate");
  if (weights.size() != binary_scores.size()) {
    throw Error(Errc::LengthMismatch, "one weight per cluster required");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(Errc::WeightSumInvalid, "weights sum to " + std::to_string(total));
  }
  double s = 0.0;
  if (mode == Aggregation::Macro) {
    s = std::accumulate(binary_scores.begin(), binary_scores.end(), 0.0) /
        double(binary_scores.size());
  } else {
    for (std::size_t c = 0; c < binary_scores.size(); ++c) s += weights[c] * binary_scores[c];
  }
  // A weighted mean lies between the extremes; clamp away the rounding excess.
  const auto [lo, hi] = std::minmax_element(binary_scores.begin(), binary_scores.end());
  return std::clamp(s, *lo, *hi);
}

std::vector<double> micro_weights(const MultiConfusion& mc) {
  const auto& m = mc.counts();
  const double pooled = 2.0 * double(m.sum());
  std::vector<double> w(std::size_t(mc.k()));
  for (int c = 0; c < mc.k(); ++c) {
    w[std::size_t(c)] = double(m.col(c).sum() + m.row(c).sum()) / pooled;
  }
  return w;
}

double g2pc(const HardLabeling& before, const HardLabeling& after) {
  if (before.n() != after.n()) {
    throw Error(Errc::LengthMismatch, std::to_string(before.n()) + " vs " +
                                          std::to_string(after.n()) + " labels");
  }
  if (before.n() == 0) return 0.0;
  std::int64_t changed = 0;
  for (Index i = 0; i < before.n(); ++i) changed += before[i] != after[i];
  return double(changed) / double(before.n());
}

ScoreFunction ScoreFunction::parse(const std::string& spec) {
  ScoreFunction f;
  if (spec == "g2pc") {
    f.g2pc = true;
    return f;
  }
  std::string metric = spec;
  if (auto dash = spec.find('-'); dash != std::string::npos) {
    const std::string agg = spec.substr(0, dash);
    metric = spec.substr(dash + 1);
    if (agg == "micro") {
      f.aggregation = Aggregation::Micro;
    } else if (agg == "macro") {
      f.aggregation = Aggregation::Macro;
    } else {
      throw Error(Errc::InvalidArgument, "unknown aggregation '" + agg + "'");
    }
  }
  if (metric == "f1") {
    f.metric = BinaryMetric::FBeta;
  } else if (metric.rfind("fbeta:", 0) == 0) {
    f.metric = BinaryMetric::FBeta;
    try {
      f.beta = std::stod(metric.substr(6));
    } catch (const std::exception&) {
      throw Error(Errc::InvalidArgument, "bad beta in '" + spec + "'");
    }
    if (!(f.beta > 0.0)) throw Error(Errc::InvalidArgument, "beta must be > 0");
  } else if (metric == "jaccard") {
    f.metric = BinaryMetric::Jaccard;
  } else if (metric == "fm" || metric == "fowlkes_mallows") {
    f.metric = BinaryMetric::FowlkesMallows;
  } else {
    throw Error(Errc::InvalidArgument, "unknown score '" + spec + "'");
  }
  return f;
}

std::string ScoreFunction::name() const {
  if (g2pc) return "g2pc";
  std::string agg = aggregation == Aggregation::Micro ? "micro-" : "macro-";
  switch (metric) {
    case BinaryMetric::FBeta: {
      if (beta == 1.0) return agg + "f1";
      std::string b = std::to_string(beta);
      b.erase(b.find_last_not_of('0') + 1);
      if (!b.empty() && b.back() == '.') b.pop_back();
      return agg + "fbeta:" + b;
    }
    case BinaryMetric::Jaccard: return agg + "jaccard";
    case BinaryMetric::FowlkesMallows: return agg + "fm";
  }
  return agg;
}

double ScoreFunction::binary(const BinaryConfusion& bc) const {
  switch (metric) {
    case BinaryMetric::FBeta: return f_beta(bc, beta);
    case BinaryMetric::Jaccard: return jaccard(bc);
    case BinaryMetric::FowlkesMallows: return fowlkes_mallows(bc);
  }
  return 0.0;
}

std::vector<double> ScoreFunction::per_cluster(const MultiConfusion& mc) const {
  std::vector<double> s(std::size_t(mc.k()));
  for (int c = 0; c < mc.k(); ++c) s[std::size_t(c)] = binary(binary_confusion(mc, c));
  return s;
}

double ScoreFunction::operator()(const MultiConfusion& mc) const {
  if (g2pc) {
    const auto& m = mc.counts();
    return m.sum() == 0 ? 0.0 : 1.0 - double(m.trace()) / double(m.sum());
  }
  const auto s = per_cluster(mc);
  if (aggregation == Aggregation::Macro) {
    return aggregate(s, std::vector<double>(s.size(), 1.0 / double(s.size())),
                     Aggregation::Macro);
  }
  return aggregate(s, micro_weights(mc), Aggregation::Micro);
}

double ScoreFunction::operator()(const HardLabeling& before, const HardLabeling& after) const {
  if (g2pc) return clusterlens::g2pc(before, after);
  return (*this)(multi_confusion(before, after));
}

}  // namespace clusterlens
