#include "clusterlens/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>

namespace clusterlens {

FittedScenario fit_at_class_means(ScenarioData scenario) {
  CMeansOptions<double> opts;
  opts.fuzzifier = kFuzzifier;
  opts.init = scenario.class_means();
  auto model = std::make_shared<const CMeansModel<double>>(
      fit_cmeans(scenario.data, int(scenario.specs.size()), opts));
  HardLabeling assignment = assign_hard(*model, scenario.data.values());
  return {std::move(scenario), std::move(model), std::move(assignment)};
}

GlobalImportance feature_pfic(const ClusterModel<double>& model, const Dataset<double>& data,
                              Index feature, const std::string& score, std::uint64_t seed,
                              int repetitions, int threads) {
  PficConfig cfg{FeatureSubset({feature}, data.p()), ScoreFunction::parse(score)};
  cfg.repetitions = repetitions;
  cfg.seed = seed;
  cfg.threads = threads;
  return pfic_global(model, data, cfg);
}

ClassificationScores evaluate_two_class(const HardLabeling& clusters, const HardLabeling& truth,
                                        int positive_class) {
  if (clusters.n() != truth.n()) throw Error(Errc::LengthMismatch, "label counts differ");
  if (clusters.k() != 2 || truth.k() != 2) {
    throw Error(Errc::KMismatch, "two clusters and two classes expected");
  }
  Index agree = 0;
  for (Index i = 0; i < truth.n(); ++i) agree += clusters[i] == truth[i];
  const bool swap = 2 * agree < truth.n();
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (Index i = 0; i < truth.n(); ++i) {
    const int predicted = swap ? 1 - clusters[i] : clusters[i];
    const bool pp = predicted == positive_class;
    const bool tpos = truth[i] == positive_class;
    tp += pp && tpos;
    fp += pp && !tpos;
    fn += !pp && tpos;
    tn += !pp && !tpos;
  }
  ClassificationScores s;
  s.accuracy = (tp + tn) / double(truth.n());
  s.f1 = tp > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  s.mcc = denom > 0 ? (tp * tn - fp * fn) / std::sqrt(denom) : 0.0;
  return s;
}

// ---- Wishart ---------------------------------------------------------------

WishartCurves wishart_curves(std::uint64_t seed, Index m, int threads) {
  WishartCurves out{fit_at_class_means(scenario_wishart_3class(seed)), {}, {}, {}, {}, {}};
  const Dataset<double>& data = out.fit.scenario.data;
  const FeatureSubset x1({0}, data.p());
  out.grid = std::make_shared<const SamplingGrid<double>>(grid_equidistant(data, x1, m));
  out.soft = icec_batch<double>(*out.fit.model, data, x1, out.grid, LabelMode::Soft, threads);
  out.hard = icec_batch<double>(*out.fit.model, data, x1, out.grid, LabelMode::Hard, threads);
  out.spdc = spdc(out.soft, Aggregator::Mean, 0.6);
  out.hpdc = hpdc(out.hard);
  return out;
}

CurveSpread curve_spread(const std::vector<IcecCurve<double>>& curves, int cluster) {
  double within = 0.0, across = 0.0;
  std::size_t n_within = 0, n_across = 0;
  for (std::size_t a = 0; a < curves.size(); ++a) {
    for (std::size_t b = a + 1; b < curves.size(); ++b) {
      const double d =
          (curves[a].soft.col(cluster) - curves[b].soft.col(cluster)).cwiseAbs().maxCoeff();
      if (curves[a].initial_cluster == curves[b].initial_cluster) {
        within += d;
        ++n_within;
      } else {
        across += d;
        ++n_across;
      }
    }
  }
  return {n_within ? within / double(n_within) : 0.0, n_across ? across / double(n_across) : 0.0};
}

// ---- Wisconsin -------------------------------------------------------------

namespace {

const std::vector<std::string> kCharacteristics = {
    "radius",      "texture",   "perimeter",      "area",     "smoothness",
    "compactness", "concavity", "concave_points", "symmetry", "fractal_dimension"};
const std::vector<std::string> kCategories = {"mean", "se", "worst"};

// Sum of all feature values of the reference file.
constexpr double kWisconsinChecksum = 1056474.4596356;

std::vector<std::string> wisconsin_feature_names() {
  std::vector<std::string> names;
  for (const auto& kind : kCategories) {
    for (const auto& c : kCharacteristics) names.push_back(c + "_" + kind);
  }
  return names;
}

}  // namespace

WisconsinData load_wisconsin(const std::string& path) {
  if (path.empty() || !std::filesystem::exists(path)) {
    throw Error(Errc::MissingDataset,
                "Wisconsin data not found at '" + path +
                    "'; convert wdbc.data with tools/make_wdbc_csv.py and pass --data");
  }
  CsvOptions opts;
  opts.exclude_cols = {"id"};
  opts.label_col = "diagnosis";
  CsvData csv = read_csv_file(path, opts);
  const auto expected = wisconsin_feature_names();
  if (csv.data.n() != 569 || csv.data.p() != 30) {
    throw Error(Errc::ParseError, "expected 569 rows and 30 features, got " +
                                      std::to_string(csv.data.n()) + " x " +
                                      std::to_string(csv.data.p()));
  }
  if (csv.data.feature_names() != expected) {
    throw Error(Errc::ParseError, "feature columns do not match the expected Wisconsin names");
  }
  if (csv.label_values != std::vector<std::string>{"B", "M"}) {
    throw Error(Errc::ParseError, "diagnosis column must hold B and M");
  }
  WisconsinData out{csv.data, *csv.latent, 1, false};
  const double sum = csv.data.values().sum();
  out.checksum_ok = std::abs(sum - kWisconsinChecksum) <= 1e-6 * kWisconsinChecksum;
  if (!out.checksum_ok) {
    std::cerr << "warning: Wisconsin checksum " << sum << " differs from the reference "
              << kWisconsinChecksum << "; results may not match\n";
  }
  return out;
}

WisconsinFit fit_wisconsin(const Dataset<double>& raw, const WisconsinData& wdbc,
                           std::uint64_t seed) {
  auto [z, st] = standardize(raw);
  CMeansOptions<double> opts;
  opts.fuzzifier = kFuzzifier;
  opts.seed = seed;
  auto model = std::make_shared<const CMeansModel<double>>(fit_cmeans(z, 2, opts));
  HardLabeling clusters = assign_hard(*model, z.values());
  ClassificationScores scores = evaluate_two_class(clusters, wdbc.diagnosis, wdbc.malignant);
  return {std::move(z), std::move(st), std::move(model), std::move(clusters), scores};
}

FeatureRanking rank_features(const WisconsinFit& fit, std::uint64_t seed, int repetitions,
                             int threads) {
  FeatureRanking r;
  const Index p = fit.standardized.p();
  std::vector<double> mean(std::size_t(p), 0.0);
  for (Index j = 0; j < p; ++j) {
    r.per_feature.push_back(
        feature_pfic(*fit.model, fit.standardized, j, "macro-f1", seed, repetitions, threads));
    const auto& raw = r.per_feature.back().summary.raw;
    mean[std::size_t(j)] = std::accumulate(raw.begin(), raw.end(), 0.0) / double(raw.size());
  }
  r.order.resize(std::size_t(p));
  std::iota(r.order.begin(), r.order.end(), Index{0});
  std::stable_sort(r.order.begin(), r.order.end(), [&](Index a, Index b) {
    const double ma = r.per_feature[std::size_t(a)].summary.median;
    const double mb = r.per_feature[std::size_t(b)].summary.median;
    if (ma != mb) return ma < mb;
    return mean[std::size_t(a)] < mean[std::size_t(b)];
  });
  return r;
}

FeatureSelection wisconsin_feature_selection(const WisconsinData& wdbc, std::uint64_t seed,
                                             int repetitions, int threads, std::size_t count) {
  FeatureSelection fs;
  fs.full = fit_wisconsin(wdbc.raw, wdbc, seed);
  fs.ranking = rank_features(fs.full, seed, repetitions, threads);
  fs.top.assign(fs.ranking.order.begin(), fs.ranking.order.begin() + std::ptrdiff_t(count));
  fs.bottom.assign(fs.ranking.order.end() - std::ptrdiff_t(count), fs.ranking.order.end());
  std::sort(fs.top.begin(), fs.top.end());
  std::sort(fs.bottom.begin(), fs.bottom.end());
  fs.top_fit = fit_wisconsin(select_columns(wdbc.raw, fs.top), wdbc, seed);
  fs.bottom_fit = fit_wisconsin(select_columns(wdbc.raw, fs.bottom), wdbc, seed);
  return fs;
}

// ---- runners ---------------------------------------------------------------

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

class Report {
 public:
  Report(const ExperimentOptions& opts, Json manifest)
      : dir_(opts.out_dir), manifest_(std::move(manifest)) {}

  const Json& manifest() const { return manifest_; }

  // Manifest extended with per-file parameters.
  Json with(const Json& extra) const {
    Json m = manifest_;
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    return m;
  }

  void write(const std::string& name, const std::string& text) {
    write_text_file((std::filesystem::path(dir_) / name).string(), text);
    files_.push_back(name);
  }

  void write_json(const std::string& name, const Json& doc) { write(name, doc.dump(2) + "\n"); }

  std::vector<std::string> finish() {
    Json m = manifest_;
    m["schema_version"] = kSchemaVersion;
    m["kind"] = "manifest";
    m["files"] = files_;
    write_json("manifest.json", m);
    return files_;
  }

 private:
  std::string dir_;
  Json manifest_;
  std::vector<std::string> files_;
};

template <typename F>
std::string to_text(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

std::string summary_table(const std::string& title, const std::vector<std::string>& rows,
                          const std::vector<const ImportanceSummary*>& values) {
  std::ostringstream os;
  os << title << "\n";
  os << "features\t5% quantile\tmedian\t95% quantile\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << rows[r] << '\t' << fixed3(values[r]->at(0.05)) << '\t' << fixed3(values[r]->median)
       << '\t' << fixed3(values[r]->at(0.95)) << '\n';
  }
  return os.str();
}

void write_scenario_basics(Report& report, const FittedScenario& fit) {
  const Json m = report.with({{"file", "data"}});
  report.write("data.csv", to_text([&](std::ostream& os) {
                 write_csv(os, fit.scenario.data, m, &fit.scenario.latent);
               }));
  report.write_json("model.json", model_to_json(*fit.model, fit.scenario.data.feature_names(),
                                                std::nullopt, report.manifest()));
  const MultiConfusion mc = multi_confusion(fit.scenario.latent, fit.assignment);
  report.write("confusion.csv", to_text([&](std::ostream& os) {
                 write_manifest_comment(os, report.with({{"file", "class_by_cluster"}}));
                 os << "class,cluster,count\n";
                 for (int c = 0; c < mc.k(); ++c) {
                   for (int a = 0; a < mc.k(); ++a) {
                     os << c + 1 << ',' << a + 1 << ',' << mc.counts()(a, c) << '\n';
                   }
                 }
               }));
}

Json scenario_manifest(const ExperimentOptions& opts) {
  return {{"experiment", opts.name},
          {"seed", opts.seed},
          {"repetitions", opts.repetitions},
          {"backend", "cmeans"},
          {"fuzzifier", kFuzzifier},
          {"init", "class_means"},
          {"scenario_config_version", scenario_config_version()}};
}

std::vector<std::string> run_imbalanced4(const ExperimentOptions& opts) {
  Report report(opts, scenario_manifest(opts));
  const FittedScenario fit = fit_at_class_means(scenario_imbalanced_4class(opts.seed));
  write_scenario_basics(report, fit);
  const auto& data = fit.scenario.data;
  std::vector<PficRecord> records;
  std::string summary;
  for (const std::string score : {"micro-f1", "macro-f1"}) {
    std::vector<GlobalImportance> results;
    for (Index j = 0; j < data.p(); ++j) {
      results.push_back(
          feature_pfic(*fit.model, data, j, score, opts.seed, opts.repetitions, opts.threads));
      const auto rec = pfic_records(data.feature_names()[std::size_t(j)],
                                    ScoreFunction::parse(score), results.back());
      records.insert(records.end(), rec.begin(), rec.end());
    }
    summary += summary_table("PFIC " + score, data.feature_names(),
                             {&results[0].summary, &results[1].summary}) +
               "\n";
  }
  const Json m = report.with({{"quantiles", {0.05, 0.5, 0.95}}});
  report.write("pfic.csv", to_text([&](std::ostream& os) { write_pfic_csv(os, records, m); }));
  report.write_json("pfic.json", pfic_json(records, m));
  report.write("summary.txt", summary);
  return report.finish();
}

std::vector<std::string> run_threeclass(const ExperimentOptions& opts) {
  Report report(opts, scenario_manifest(opts));
  const FittedScenario fit = fit_at_class_means(scenario_3class_2d(opts.seed));
  write_scenario_basics(report, fit);
  const auto& data = fit.scenario.data;
  std::vector<PficRecord> global_records, cluster_records;
  std::vector<GlobalImportance> global;
  std::vector<ClusterImportance> specific;
  for (Index j = 0; j < data.p(); ++j) {
    PficConfig cfg{FeatureSubset({j}, data.p()), ScoreFunction::parse("macro-f1")};
    cfg.repetitions = opts.repetitions;
    cfg.seed = opts.seed;
    cfg.threads = opts.threads;
    const std::string& name = data.feature_names()[std::size_t(j)];
    global.push_back(pfic_global(*fit.model, data, cfg));
    auto rec = pfic_records(name, cfg.score, global.back());
    global_records.insert(global_records.end(), rec.begin(), rec.end());
    cfg.score = ScoreFunction::parse("f1");
    specific.push_back(pfic_cluster_specific(*fit.model, data, cfg));
    rec = pfic_records(name, cfg.score, specific.back());
    cluster_records.insert(cluster_records.end(), rec.begin(), rec.end());
  }
  const Json m = report.with({{"quantiles", {0.05, 0.5, 0.95}}});
  report.write("pfic_global.csv",
               to_text([&](std::ostream& os) { write_pfic_csv(os, global_records, m); }));
  report.write("pfic_cluster.csv",
               to_text([&](std::ostream& os) { write_pfic_csv(os, cluster_records, m); }));
  report.write_json("pfic_cluster.json", pfic_json(cluster_records, m));

  std::ostringstream summary;
  summary << summary_table("Global PFIC macro-f1", data.feature_names(),
                           {&global[0].summary, &global[1].summary})
          << "\nCluster-specific PFIC f1 (median)\nfeatures";
  for (int c = 0; c < fit.model->k(); ++c) summary << "\tcluster " << c + 1;
  summary << "\tmean\n";
  for (std::size_t j = 0; j < specific.size(); ++j) {
    summary << data.feature_names()[j];
    for (const auto& s : specific[j].clusters) summary << '\t' << fixed3(s.median);
    summary << '\t' << fixed3(specific[j].mean_of_medians) << '\n';
  }
  report.write("summary.txt", summary.str());
  return report.finish();
}

std::vector<std::string> run_wishart3(const ExperimentOptions& opts) {
  Json base = scenario_manifest(opts);
  base["grid"] = {{"feature", "x1"}, {"sampler", "equidistant"}, {"m", 50}};
  base["coverage"] = 0.6;
  base["aggregator"] = "mean";
  Report report(opts, base);
  const WishartCurves w = wishart_curves(opts.seed, 50, opts.threads);
  write_scenario_basics(report, w.fit);
  const std::vector<std::string> names{"x1"};
  const Json m = report.manifest();
  report.write("icec.csv", to_text([&](std::ostream& os) { write_icec_csv(os, w.soft, names, m); }));
  report.write("spdc.csv", to_text([&](std::ostream& os) { write_spdc_csv(os, w.spdc, names, m); }));
  report.write_json("spdc.json", spdc_json(w.spdc, names, m));
  report.write("hpdc.csv", to_text([&](std::ostream& os) { write_hpdc_csv(os, w.hpdc, names, m); }));
  report.write_json("hpdc.json", hpdc_json(w.hpdc, names, m));

  const auto groups = spdc_by_initial_cluster(w.soft, initial_labels(w.soft), Aggregator::Mean, 0.6);
  std::ostringstream by_initial;
  bool first = true;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (!groups[c]) continue;
    std::ostringstream part;
    write_spdc_csv(part, *groups[c], names, m, "initial_cluster", std::to_string(c + 1));
    std::string text = part.str();
    if (!first) {
      // Keep a single manifest and header.
      std::istringstream lines(text);
      std::string line, body;
      bool header_seen = false;
      while (std::getline(lines, line)) {
        if (!line.empty() && line.front() == '#') continue;
        if (!header_seen) {
          header_seen = true;
          continue;
        }
        body += line + "\n";
      }
      text = body;
    }
    by_initial << text;
    first = false;
  }
  report.write("spdc_by_initial.csv", by_initial.str());

  const CurveSpread spread = curve_spread(w.soft, 2);
  const Index last = w.grid->m() - 1;
  std::ostringstream summary;
  summary << "sPDC cluster 1 at lowest x1: " << fixed3(w.spdc.values(0, 0)) << "\n"
          << "sPDC cluster 2 at highest x1: " << fixed3(w.spdc.values(last, 1)) << "\n";
  Index argmax3 = 0;
  w.spdc.values.col(2).maxCoeff(&argmax3);
  summary << "sPDC cluster 3 maximal at x1 = " << fixed3(w.grid->values(argmax3, 0))
          << " (grid index " << argmax3 << " of " << w.grid->m() << ")\n"
          << "cluster-3 sICEC L-inf distance within initial clusters: " << fixed3(spread.within)
          << ", across: " << fixed3(spread.across) << "\n";
  report.write("summary.txt", summary.str());
  return report.finish();
}

Json wisconsin_manifest(const ExperimentOptions& opts) {
  return {{"experiment", opts.name},
          {"seed", opts.seed},
          {"repetitions", opts.repetitions},
          {"backend", "cmeans"},
          {"k", 2},
          {"fuzzifier", kFuzzifier},
          {"init", "kmeans++"},
          {"standardized", true},
          {"data", std::filesystem::path(opts.wisconsin_path).filename().string()}};
}

std::string feature_label(const Dataset<double>& data, const std::vector<Index>& cols) {
  return FeatureSubset(cols, data.p()).label(data);
}

std::vector<std::string> run_wisconsin_pfic(const ExperimentOptions& opts) {
  const WisconsinData wdbc = load_wisconsin(opts.wisconsin_path);
  Report report(opts, wisconsin_manifest(opts));
  const WisconsinFit fit = fit_wisconsin(wdbc.raw, wdbc, opts.seed);
  const Dataset<double>& z = fit.standardized;
  report.write_json("model.json", model_to_json(*fit.model, z.feature_names(), fit.standardizer,
                                                report.manifest()));
  const FeatureRanking ranking = rank_features(fit, opts.seed, opts.repetitions, opts.threads);
  std::vector<PficRecord> records;
  for (Index j = 0; j < z.p(); ++j) {
    const auto rec = pfic_records(z.feature_names()[std::size_t(j)],
                                  ScoreFunction::parse("macro-f1"),
                                  ranking.per_feature[std::size_t(j)]);
    records.insert(records.end(), rec.begin(), rec.end());
  }
  const Json m = report.with({{"quantiles", {0.05, 0.5, 0.95}}});
  report.write("pfic_features.csv",
               to_text([&](std::ostream& os) { write_pfic_csv(os, records, m); }));
  report.write("ranking.csv", to_text([&](std::ostream& os) {
                 write_manifest_comment(os, m);
                 os << "rank,feature,median\n";
                 for (std::size_t r = 0; r < ranking.order.size(); ++r) {
                   const Index j = ranking.order[r];
                   os << r + 1 << ',' << z.feature_names()[std::size_t(j)] << ','
                      << format_number(ranking.per_feature[std::size_t(j)].summary.median) << '\n';
                 }
               }));

  // Grouped, cluster-specific importance: one group per category and one per
  // characteristic, each shuffled jointly.
  std::vector<std::pair<std::string, std::vector<Index>>> groups;
  for (std::size_t k = 0; k < kCategories.size(); ++k) {
    std::vector<Index> cols;
    for (std::size_t c = 0; c < kCharacteristics.size(); ++c) cols.push_back(Index(k * 10 + c));
    groups.emplace_back(kCategories[k], cols);
  }
  for (std::size_t c = 0; c < kCharacteristics.size(); ++c) {
    groups.emplace_back(kCharacteristics[c],
                        std::vector<Index>{Index(c), Index(10 + c), Index(20 + c)});
  }
  std::vector<PficRecord> grouped;
  for (const auto& [name, cols] : groups) {
    PficConfig cfg{FeatureSubset(cols, z.p()), ScoreFunction::parse("f1")};
    cfg.repetitions = opts.repetitions;
    cfg.seed = opts.seed;
    cfg.threads = opts.threads;
    const auto rec = pfic_records(name, cfg.score, pfic_cluster_specific(*fit.model, z, cfg));
    grouped.insert(grouped.end(), rec.begin(), rec.end());
  }
  report.write("pfic_groups.csv",
               to_text([&](std::ostream& os) { write_pfic_csv(os, grouped, m); }));

  std::ostringstream summary;
  summary << "accuracy " << fixed3(fit.scores.accuracy) << ", F1 " << fixed3(fit.scores.f1)
          << ", MCC " << fixed3(fit.scores.mcc) << "\n\nrank\tfeature\tmedian macro-f1\n";
  for (std::size_t r = 0; r < ranking.order.size(); ++r) {
    const Index j = ranking.order[r];
    summary << r + 1 << '\t' << z.feature_names()[std::size_t(j)] << '\t'
            << fixed3(ranking.per_feature[std::size_t(j)].summary.median) << '\n';
  }
  report.write("summary.txt", summary.str());
  return report.finish();
}

std::vector<std::string> run_wisconsin_pdc(const ExperimentOptions& opts) {
  const WisconsinData wdbc = load_wisconsin(opts.wisconsin_path);
  constexpr double kCoverage = 0.7;
  constexpr Index kM1 = 50, kM2 = 20;
  Json base = wisconsin_manifest(opts);
  base["coverage"] = kCoverage;
  base["aggregator"] = "mean";
  base["grid_units"] = "original";
  Report report(opts, base);
  const WisconsinFit fit = fit_wisconsin(wdbc.raw, wdbc, opts.seed);
  const Dataset<double>& z = fit.standardized;
  report.write_json("model.json", model_to_json(*fit.model, z.feature_names(), fit.standardizer,
                                                report.manifest()));

  for (const std::string name : {"concavity_worst", "compactness_worst", "concave_points_worst"}) {
    const FeatureSubset s = FeatureSubset::from_names(z, {name});
    auto grid = std::make_shared<const SamplingGrid<double>>(grid_equidistant(z, s, kM1));
    const auto curves = icec_batch<double>(*fit.model, z, s, grid, LabelMode::Soft, opts.threads);
    auto curve = spdc(curves, Aggregator::Mean, kCoverage);
    curve.grid = original_units(*grid, fit.standardizer, s);
    const Json m = report.with({{"grid", {{"features", {name}}, {"sampler", "equidistant"}, {"m", kM1}}}});
    report.write("spdc_" + name + ".csv",
                 to_text([&](std::ostream& os) { write_spdc_csv(os, curve, {name}, m); }));
  }

  const std::vector<std::string> pair{"compactness_worst", "compactness_mean"};
  const FeatureSubset s2 = FeatureSubset::from_names(z, pair);
  // The Cartesian grid is built in column order; name the columns to match.
  std::vector<std::string> grid_names;
  for (Index j : s2.indices()) grid_names.push_back(z.feature_names()[std::size_t(j)]);
  auto grid2 = std::make_shared<const SamplingGrid<double>>(grid_cartesian(z, s2, kM2));
  const Json m2 = report.with(
      {{"grid", {{"features", grid_names}, {"sampler", "cartesian"}, {"m_per_axis", kM2}}}});
  const auto soft2 = icec_batch<double>(*fit.model, z, s2, grid2, LabelMode::Soft, opts.threads);
  const auto hard2 = icec_batch<double>(*fit.model, z, s2, grid2, LabelMode::Hard, opts.threads);
  auto spdc2 = spdc(soft2, Aggregator::Mean, kCoverage);
  auto hpdc2 = hpdc(hard2);
  spdc2.grid = hpdc2.grid = original_units(*grid2, fit.standardizer, s2);
  report.write("spdc_2d.csv",
               to_text([&](std::ostream& os) { write_spdc_csv(os, spdc2, grid_names, m2); }));
  report.write("hpdc_2d.csv",
               to_text([&](std::ostream& os) { write_hpdc_csv(os, hpdc2, grid_names, m2); }));
  return report.finish();
}

std::vector<std::string> run_wisconsin_featuresel(const ExperimentOptions& opts) {
  const WisconsinData wdbc = load_wisconsin(opts.wisconsin_path);
  Json base = wisconsin_manifest(opts);
  base["selected"] = 4;
  base["ranking_score"] = "macro-f1";
  Report report(opts, base);
  const FeatureSelection fs = wisconsin_feature_selection(wdbc, opts.seed, opts.repetitions,
                                                          opts.threads);
  struct Row {
    std::string label;
    std::string features;
    const ClassificationScores* s;
  };
  const std::vector<Row> rows{
      {"all", "all 30", &fs.full.scores},
      {"top4", feature_label(wdbc.raw, fs.top), &fs.top_fit.scores},
      {"bottom4", feature_label(wdbc.raw, fs.bottom), &fs.bottom_fit.scores}};
  report.write("table.csv", to_text([&](std::ostream& os) {
                 write_manifest_comment(os, report.manifest());
                 os << "row,features,accuracy,f1,mcc\n";
                 for (const auto& r : rows) {
                   os << r.label << ',' << r.features << ',' << format_number(r.s->accuracy) << ','
                      << format_number(r.s->f1) << ',' << format_number(r.s->mcc) << '\n';
                 }
               }));
  std::ostringstream summary;
  summary << "features\taccuracy\tF1\tMCC\n";
  for (const auto& r : rows) {
    summary << r.features << '\t' << fixed3(r.s->accuracy) << '\t' << fixed3(r.s->f1) << '\t'
            << fixed3(r.s->mcc) << '\n';
  }
  report.write("summary.txt", summary.str());
  return report.finish();
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"imbalanced4",    "threeclass",    "wishart3",
                                              "wisconsin-pfic", "wisconsin-pdc", "wisconsin-featuresel"};
  return names;
}

std::vector<std::string> run_experiment(const ExperimentOptions& options) {
  if (options.out_dir.empty()) throw Error(Errc::InvalidArgument, "output directory required");
  if (options.repetitions < 1) throw Error(Errc::InvalidArgument, "repetitions must be >= 1");
  if (options.name == "imbalanced4") return run_imbalanced4(options);
  if (options.name == "threeclass") return run_threeclass(options);
  if (options.name == "wishart3") return run_wishart3(options);
  if (options.name == "wisconsin-pfic") return run_wisconsin_pfic(options);
  if (options.name == "wisconsin-pdc") return run_wisconsin_pdc(options);
  if (options.name == "wisconsin-featuresel") return run_wisconsin_featuresel(options);
  throw Error(Errc::InvalidArgument, "unknown experiment '" + options.name + "'");
}

}  // namespace clusterlens
