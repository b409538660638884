#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "clusterlens/backends.hpp"
#include "clusterlens/io.hpp"
#include "clusterlens/pdc.hpp"
#include "clusterlens/pfic.hpp"
#include "clusterlens/sim.hpp"

namespace clusterlens {

inline constexpr double kFuzzifier = 2.0;

/// Scenario data with c-means started at the generating class means, so
/// cluster c corresponds to class c.
struct FittedScenario {
  ScenarioData scenario;
  std::shared_ptr<const CMeansModel<double>> model;
  HardLabeling assignment;
};

FittedScenario fit_at_class_means(ScenarioData scenario);

// Global PFIC for one feature with a named score.
GlobalImportance feature_pfic(const ClusterModel<double>& model, const Dataset<double>& data,
                              Index feature, const std::string& score, std::uint64_t seed,
                              int repetitions, int threads);

struct ClassificationScores {
  double accuracy = 0.0;
  double f1 = 0.0;   // positive class as given
  double mcc = 0.0;
};

/// Two clusters against two classes under the better of the two cluster to
/// class matchings.
ClassificationScores evaluate_two_class(const HardLabeling& clusters, const HardLabeling& truth,
                                        int positive_class);

// ---- Wishart scenario ------------------------------------------------------

struct WishartCurves {
  FittedScenario fit;
  std::shared_ptr<const SamplingGrid<double>> grid;  // x1, equidistant
  std::vector<IcecCurve<double>> soft;
  std::vector<IcecCurve<double>> hard;
  SoftPdcCurve<double> spdc;
  HardPdcCurve<double> hpdc;
};

WishartCurves wishart_curves(std::uint64_t seed, Index m = 50, int threads = 1);

// Mean pairwise L-infinity distance between soft curves on one cluster's
// column, within initial clusters and across them.
struct CurveSpread {
  double within = 0.0;
  double across = 0.0;
};
CurveSpread curve_spread(const std::vector<IcecCurve<double>>& curves, int cluster);

// ---- Wisconsin -------------------------------------------------------------

struct WisconsinData {
  Dataset<double> raw;     // 30 features, original units
  HardLabeling diagnosis;  // class codes from the diagnosis column
  int malignant = 1;       // code of "M"
  bool checksum_ok = false;
};

// Expects columns id, diagnosis and the 30 named features.
WisconsinData load_wisconsin(const std::string& path);

struct WisconsinFit {
  Dataset<double> standardized;
  Standardizer<double> standardizer;
  std::shared_ptr<const CMeansModel<double>> model;
  HardLabeling clusters;
  ClassificationScores scores;
};

// Standardize, then two-cluster c-means with k-means++ starting centers.
WisconsinFit fit_wisconsin(const Dataset<double>& raw, const WisconsinData& wdbc,
                           std::uint64_t seed);

struct FeatureRanking {
  std::vector<GlobalImportance> per_feature;  // macro-F1 PFIC, column order
  std::vector<Index> order;                   // most important first
};

// Lower median similarity means more important; ties go to the lower mean
// score, then the lower column index.
FeatureRanking rank_features(const WisconsinFit& fit, std::uint64_t seed, int repetitions,
                             int threads);

struct FeatureSelection {
  WisconsinFit full;
  FeatureRanking ranking;
  std::vector<Index> top;
  std::vector<Index> bottom;
  WisconsinFit top_fit;
  WisconsinFit bottom_fit;
};

FeatureSelection wisconsin_feature_selection(const WisconsinData& wdbc, std::uint64_t seed,
                                             int repetitions, int threads, std::size_t count = 4);

// ---- runners ---------------------------------------------------------------

struct ExperimentOptions {
  std::string name;
  std::uint64_t seed = 1;
  int threads = 1;
  int repetitions = 100;
  std::string out_dir;
  std::string wisconsin_path;
};

const std::vector<std::string>& experiment_names();

/// Writes the experiment's tables and curves plus manifest.json under
/// out_dir. Returns the written file names relative to out_dir.
std::vector<std::string> run_experiment(const ExperimentOptions& options);

}  // namespace clusterlens
