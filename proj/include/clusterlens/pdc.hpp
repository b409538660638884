#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clusterlens/icec.hpp"
#include "clusterlens/pfic.hpp"

namespace clusterlens {

enum class Aggregator { Mean, Median };

inline Aggregator parse_aggregator(const std::string& name) {
  if (name == "mean") return Aggregator::Mean;
  if (name == "median") return Aggregator::Median;
  throw Error(Errc::InvalidArgument, "aggregator must be 'mean' or 'median'");
}

inline std::string to_string(Aggregator a) { return a == Aggregator::Mean ? "mean" : "median"; }

/// Pointwise aggregate of soft ICEC curves with a central quantile band.
/// With the median aggregator rows need not sum to one and are left as is.
template <typename Scalar>
struct SoftPdcCurve {
  std::shared_ptr<const SamplingGrid<Scalar>> grid;
  Aggregator aggregator = Aggregator::Mean;
  double coverage = 0.6;
  Index n = 0;               // number of curves aggregated
  Matrix<Scalar> values;     // m x k
  Matrix<Scalar> band_low;   // m x k
  Matrix<Scalar> band_high;  // m x k
};

/// Pointwise majority vote over hard ICEC curves. certainty is the share of
/// curves voting for the mode.
template <typename Scalar>
struct HardPdcCurve {
  std::shared_ptr<const SamplingGrid<Scalar>> grid;
  int k = 0;
  std::vector<int> modes;
  std::vector<double> certainty;
};

namespace detail {

template <typename Scalar>
bool same_grid(const SamplingGrid<Scalar>& a, const SamplingGrid<Scalar>& b) {
  if (&a == &b) return true;
  return a.values.rows() == b.values.rows() && a.values.cols() == b.values.cols() &&
         a.values == b.values;
}

template <typename Scalar>
void check_curves(const std::vector<const IcecCurve<Scalar>*>& curves, LabelMode mode) {
  if (curves.empty()) throw Error(Errc::InvalidArgument, "no curves to aggregate");
  const auto& first = *curves.front();
  for (const auto* c : curves) {
    if (c->mode != mode) {
      throw Error(Errc::InvalidArgument, mode == LabelMode::Soft ? "spdc needs soft curves"
                                                                 : "hpdc needs hard curves");
    }
    if (c->k != first.k || !same_grid(*c->grid, *first.grid)) {
      throw Error(Errc::GridMismatch, "curves do not share one grid");
    }
  }
}

template <typename Scalar>
SoftPdcCurve<Scalar> spdc_impl(const std::vector<const IcecCurve<Scalar>*>& curves,
                               Aggregator aggregator, double coverage) {
  check_curves(curves, LabelMode::Soft);
  if (!(coverage >= 0.0 && coverage <= 1.0)) {
    throw Error(Errc::InvalidArgument, "coverage must lie in [0, 1]");
  }
  const auto& first = *curves.front();
  const Index m = first.m();
  const int k = first.k;
  SoftPdcCurve<Scalar> out;
  out.grid = first.grid;
  out.aggregator = aggregator;
  out.coverage = coverage;
  out.n = Index(curves.size());
  out.values.resize(m, k);
  out.band_low.resize(m, k);
  out.band_high.resize(m, k);
  const double lo = (1.0 - coverage) / 2.0;
  const double hi = (1.0 + coverage) / 2.0;
  std::vector<double> column(curves.size());
  for (Index j = 0; j < m; ++j) {
    for (int c = 0; c < k; ++c) {
      double sum = 0.0;
      for (std::size_t i = 0; i < curves.size(); ++i) {
        column[i] = double(curves[i]->soft(j, c));
        sum += column[i];
      }
      out.values(j, c) = aggregator == Aggregator::Mean ? Scalar(sum / double(curves.size()))
                                                        : Scalar(quantile(column, 0.5));
      out.band_low(j, c) = Scalar(quantile(column, lo));
      out.band_high(j, c) = Scalar(quantile(column, hi));
    }
  }
  return out;
}

template <typename Scalar>
std::vector<const IcecCurve<Scalar>*> pointers(const std::vector<IcecCurve<Scalar>>& curves) {
  std::vector<const IcecCurve<Scalar>*> ptrs;
  ptrs.reserve(curves.size());
  for (const auto& c : curves) ptrs.push_back(&c);
  return ptrs;
}

}  // namespace detail

template <typename Scalar>
SoftPdcCurve<Scalar> spdc(const std::vector<IcecCurve<Scalar>>& curves,
                          Aggregator aggregator = Aggregator::Mean, double coverage = 0.6) {
  return detail::spdc_impl(detail::pointers(curves), aggregator, coverage);
}

template <typename Scalar>
HardPdcCurve<Scalar> hpdc(const std::vector<IcecCurve<Scalar>>& curves) {
  const auto ptrs = detail::pointers(curves);
  detail::check_curves(ptrs, LabelMode::Hard);
  const auto& first = curves.front();
  HardPdcCurve<Scalar> out;
  out.grid = first.grid;
  out.k = first.k;
  const Index m = first.m();
  out.modes.resize(std::size_t(m));
  out.certainty.resize(std::size_t(m));
  std::vector<std::size_t> votes(std::size_t(first.k));
  for (Index j = 0; j < m; ++j) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const auto& c : curves) ++votes[std::size_t(c.hard[std::size_t(j)])];
    // max_element returns the first maximum: lowest index wins ties.
    const auto best = std::max_element(votes.begin(), votes.end());
    out.modes[std::size_t(j)] = int(best - votes.begin());
    out.certainty[std::size_t(j)] = double(*best) / double(curves.size());
  }
  return out;
}

/// sPDC restricted to the observations of each initial cluster. Clusters
/// without members yield std::nullopt.
template <typename Scalar>
std::vector<std::optional<SoftPdcCurve<Scalar>>> spdc_by_initial_cluster(
    const std::vector<IcecCurve<Scalar>>& curves, const HardLabeling& initial,
    Aggregator aggregator = Aggregator::Mean, double coverage = 0.6) {
  if (Index(curves.size()) != initial.n()) {
    throw Error(Errc::LengthMismatch, "one initial label per curve required");
  }
  std::vector<std::vector<const IcecCurve<Scalar>*>> groups(std::size_t(initial.k()));
  for (std::size_t i = 0; i < curves.size(); ++i) {
    groups[std::size_t(initial[Index(i)])].push_back(&curves[i]);
  }
  std::vector<std::optional<SoftPdcCurve<Scalar>>> out(groups.size());
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (!groups[c].empty()) out[c] = detail::spdc_impl(groups[c], aggregator, coverage);
  }
  return out;
}

// Initial cluster of each curve's observation.
template <typename Scalar>
HardLabeling initial_labels(const std::vector<IcecCurve<Scalar>>& curves) {
  if (curves.empty()) throw Error(Errc::InvalidArgument, "no curves");
  std::vector<int> labels;
  labels.reserve(curves.size());
  for (const auto& c : curves) labels.push_back(c.initial_cluster);
  return HardLabeling(std::move(labels), curves.front().k);
}

}  // namespace clusterlens
