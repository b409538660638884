#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "clusterlens/core.hpp"

namespace clusterlens {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// k x k counts comparing two hard labelings. Entry (r, c) is the number of
/// observations that were in cluster c before shuffling and are in cluster r
/// afterwards.
class MultiConfusion {
 public:
  explicit MultiConfusion(CountMatrix counts);

  const CountMatrix& counts() const { return counts_; }
  int k() const { return int(counts_.rows()); }
  std::int64_t n() const { return counts_.sum(); }
  std::int64_t operator()(int after, int before) const { return counts_(after, before); }

 private:
  CountMatrix counts_;
};

/// One-vs-rest view of a MultiConfusion for cluster c.
struct BinaryConfusion {
  int cluster = 0;
  std::int64_t stayed = 0;    // #cc: in c before and after
  std::int64_t entered = 0;   // #c c-bar: in c after, elsewhere before
  std::int64_t left = 0;      // #c-bar c: in c before, elsewhere after
  std::int64_t outside = 0;   // #c-bar c-bar: never in c

  // Cells in the order (#cc, #c c-bar, #c-bar c, #c-bar c-bar).
  static BinaryConfusion from_cells(std::int64_t cc, std::int64_t c_cbar,
                                    std::int64_t cbar_c, std::int64_t cbar_cbar,
                                    int cluster = 0);

  std::int64_t n() const { return stayed + entered + left + outside; }
  double precision() const;  // #cc / (#cc + #c-bar c), 1 if undefined
  double recall() const;     // #cc / (#cc + #c c-bar), 1 if undefined

  bool operator==(const BinaryConfusion&) const = default;
};

MultiConfusion multi_confusion(const HardLabeling& before, const HardLabeling& after);
BinaryConfusion binary_confusion(const MultiConfusion& mc, int c);

// Binary scores. All are total: zero denominators follow fixed conventions
// so that an emptied cluster never aborts a run.
double f_beta(const BinaryConfusion& bc, double beta);
inline double f1(const BinaryConfusion& bc) { return f_beta(bc, 1.0); }
double jaccard(const BinaryConfusion& bc);
double fowlkes_mallows(const BinaryConfusion& bc);
double mcc(const BinaryConfusion& bc);  // in [-1, 1]

enum class Aggregation { Micro, Macro };

double aggregate(const std::vector<double>& binary_scores, const std::vector<double>& weights,
                 Aggregation mode);

// Share of each cluster among the 2n labels of both labelings. With these
// weights the micro F1 equals the fraction of unchanged labels.
std::vector<double> micro_weights(const MultiConfusion& mc);

// Fraction of observations whose label changed.
double g2pc(const HardLabeling& before, const HardLabeling& after);

enum class BinaryMetric { FBeta, Jaccard, FowlkesMallows };

/// Score h(f(D), f(D~_S)) used by PFIC. All variants are similarity indices
/// in [0, 1] except G2PC, which measures change.
struct ScoreFunction {
  BinaryMetric metric = BinaryMetric::FBeta;
  double beta = 1.0;
  Aggregation aggregation = Aggregation::Macro;
  bool g2pc = false;

  // Accepts "g2pc", "<micro|macro>-<f1|jaccard|fm|fbeta:B>", or a bare binary
  // metric name (macro implied).
  static ScoreFunction parse(const std::string& spec);
  std::string name() const;

  double binary(const BinaryConfusion& bc) const;
  std::vector<double> per_cluster(const MultiConfusion& mc) const;
  double operator()(const HardLabeling& before, const HardLabeling& after) const;
  double operator()(const MultiConfusion& mc) const;
};

}  // namespace clusterlens
