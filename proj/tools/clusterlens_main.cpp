// Command-line front end: fit, interpret, and reproduce experiments.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "clusterlens/experiments.hpp"
#include "clusterlens/io.hpp"
#include "clusterlens/sim.hpp"

namespace cl = clusterlens;

namespace {

struct InputFlags {
  std::string path;
  std::vector<std::string> exclude;
  std::string label_col;

  void add(CLI::App* app) {
    app->add_option("-i,--input", path, "input CSV (header row first)")->required();
    app->add_option("--exclude-cols", exclude, "columns to drop")->delimiter(',');
    app->add_option("--label-col", label_col, "column held out as latent labels");
  }

  cl::CsvData read() const {
    cl::CsvOptions opts;
    opts.exclude_cols = exclude;
    if (!label_col.empty()) opts.label_col = label_col;
    return cl::read_csv_file(path, opts);
  }
};

std::string base_name(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

bool wants_json(const std::string& path) {
  return std::filesystem::path(path).extension() == ".json";
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    cl::write_text_file(path, text);
  }
}

// Names, or 1-based column positions when a token is not a feature name.
cl::FeatureSubset resolve_features(const cl::Dataset<double>& data,
                                   const std::vector<std::string>& tokens) {
  std::vector<cl::Index> idx;
  for (const auto& t : tokens) {
    cl::Index j = data.find_feature(t);
    if (j < 0 && !t.empty() && t.find_first_not_of("0123456789") == std::string::npos) {
      j = cl::Index(std::stoll(t)) - 1;
      if (j < 0 || j >= data.p()) {
        throw cl::Error(cl::Errc::IndexOutOfRange, "feature position " + t);
      }
    }
    if (j < 0) throw cl::Error(cl::Errc::UnknownFeature, t);
    idx.push_back(j);
  }
  return cl::FeatureSubset(std::move(idx), data.p());
}

std::vector<std::string> subset_names(const cl::Dataset<double>& data,
                                      const cl::FeatureSubset& s) {
  std::vector<std::string> names;
  for (cl::Index j : s.indices()) names.push_back(data.feature_names()[std::size_t(j)]);
  return names;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// ---- fit -------------------------------------------------------------------

struct FitCmd {
  InputFlags input;
  int k = 2;
  std::string backend = "cmeans";
  std::uint64_t seed = 1;
  bool standardize = false;
  double fuzzifier = 2.0;
  int restarts = 10;
  std::string out = "model.json";

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("fit", "fit a k-means or c-means model");
    input.add(app);
    app->add_option("-k,--k", k, "number of clusters")->required();
    app->add_option("--backend", backend, "kmeans or cmeans")
        ->check(CLI::IsMember({"kmeans", "cmeans"}));
    app->add_option("--seed", seed, "seed for k-means++ starts");
    app->add_flag("--standardize", standardize, "z-standardize features before fitting");
    app->add_option("--fuzzifier", fuzzifier, "c-means fuzzifier (> 1)");
    app->add_option("--restarts", restarts, "k-means restarts");
    app->add_option("-o,--out", out, "model document");
    app->callback([this] { run(); });
  }

  void run() {
    const cl::CsvData csv = input.read();
    std::optional<cl::Standardizer<double>> st;
    cl::Dataset<double> data = csv.data;
    if (standardize) {
      auto [z, s] = cl::standardize(csv.data);
      data = std::move(z);
      st = std::move(s);
    }
    cl::Json manifest{{"command", "fit"}, {"input", base_name(input.path)}, {"k", k},
                      {"backend", backend}, {"seed", seed}, {"standardize", standardize}};
    std::shared_ptr<cl::ClusterModel<double>> model;
    if (backend == "kmeans") {
      cl::KMeansOptions<double> opts;
      opts.seed = seed;
      opts.restarts = restarts;
      manifest["restarts"] = restarts;
      auto m = std::make_shared<cl::KMeansModel<double>>(cl::fit_kmeans(data, k, opts));
      std::cout << "inertia " << cl::format_number(m->inertia()) << ", iterations "
                << m->iterations() << "\n";
      model = m;
    } else {
      cl::CMeansOptions<double> opts;
      opts.seed = seed;
      opts.fuzzifier = fuzzifier;
      manifest["fuzzifier"] = fuzzifier;
      auto m = std::make_shared<cl::CMeansModel<double>>(cl::fit_cmeans(data, k, opts));
      std::cout << "iterations " << m->iterations() << "\n";
      model = m;
    }
    emit(out, cl::model_to_json(*model, data.feature_names(), st, manifest).dump(2) + "\n");
  }
};

// ---- shared model + data flags ---------------------------------------------

struct ModelInput {
  InputFlags input;
  std::string model_path;
  std::vector<std::string> features;
  int threads = 1;

  void add(CLI::App* app) {
    input.add(app);
    app->add_option("--model", model_path, "model document from 'fit'")->required();
    app->add_option("--features", features, "feature names or 1-based positions")
        ->delimiter(',')
        ->required();
    app->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }

  struct Loaded {
    cl::LoadedModel model;
    cl::Dataset<double> data;  // in model space
    cl::FeatureSubset subset;
  };

  Loaded load() const {
    cl::LoadedModel model = cl::load_model_file(model_path);
    cl::Dataset<double> data = model.prepare(input.read().data);
    cl::FeatureSubset subset = resolve_features(data, features);
    return {std::move(model), std::move(data), std::move(subset)};
  }
};

// ---- pfic ------------------------------------------------------------------

struct PficCmd {
  ModelInput mi;
  std::string score = "macro-f1";
  std::string mode = "global";
  int t = 100;
  std::uint64_t seed = 1;
  bool log = false;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("pfic", "permutation feature importance (features shuffled jointly)");
    mi.add(app);
    app->add_option("--score", score, "g2pc, micro-f1, macro-f1, macro-jaccard, macro-fm, fbeta:B");
    app->add_option("--mode", mode, "global or cluster")->check(CLI::IsMember({"global", "cluster"}));
    app->add_option("-t,--repetitions", t, "number of shuffles")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "shuffle seed");
    app->add_flag("--log", log, "report the natural log of the score");
    app->add_option("-o,--out", out, "output file (.csv or .json)");
    app->callback([this] { run(); });
  }

  void run() {
    auto [model, data, subset] = mi.load();
    cl::PficConfig cfg{subset, cl::ScoreFunction::parse(score)};
    cfg.repetitions = t;
    cfg.seed = seed;
    cfg.threads = mi.threads;
    const std::string label = subset.label(data);
    std::vector<cl::PficRecord> records;
    if (mode == "global") {
      records = cl::pfic_records(label, cfg.score, cl::pfic_global(*model.model, data, cfg));
    } else {
      if (cfg.score.g2pc) throw cl::Error(cl::Errc::InvalidArgument, "g2pc has no per-cluster form");
      records = cl::pfic_records(label, cfg.score, cl::pfic_cluster_specific(*model.model, data, cfg));
    }
    // The log scale is for display; files keep the raw scores.
    const auto shown = log ? cl::log_scale(records) : records;

    std::cout << "features\tscope\t5% quantile\tmedian\t95% quantile\n";
    std::vector<std::string> scopes;
    for (const auto& rec : shown) {
      if (std::find(scopes.begin(), scopes.end(), rec.scope) == scopes.end()) {
        scopes.push_back(rec.scope);
      }
    }
    for (const auto& scope : scopes) {
      auto cell = [&](double q) -> std::string {
        for (const auto& rec : shown) {
          if (rec.scope == scope && rec.quantile == q) return fixed3(rec.value);
        }
        return "";
      };
      std::cout << label << '\t' << scope << '\t' << cell(0.05) << '\t' << cell(0.5) << '\t'
                << cell(0.95) << '\n';
    }
    if (out.empty()) return;
    const cl::Json manifest{{"command", "pfic"},     {"input", base_name(mi.input.path)},
                            {"model", base_name(mi.model_path)}, {"features", label},
                            {"score", cfg.score.name()}, {"mode", mode},
                            {"repetitions", t},      {"seed", seed}};
    if (wants_json(out)) {
      emit(out, cl::pfic_json(records, manifest).dump(2) + "\n");
    } else {
      std::ostringstream os;
      cl::write_pfic_csv(os, records, manifest);
      emit(out, os.str());
    }
  }
};

// ---- icec / pdc --------------------------------------------------------------

struct GridFlags {
  std::string sampler = "equidistant";
  cl::Index m = 50;
  std::uint64_t seed = 1;

  void add(CLI::App* app) {
    app->add_option("--sampler", sampler, "observed, equidistant, or sobol")
        ->check(CLI::IsMember({"observed", "equidistant", "sobol"}));
    app->add_option("-m,--grid-size", m, "grid points (per axis for two equidistant features)");
    app->add_option("--seed", seed, "seed for observed subsampling");
  }

  std::shared_ptr<const cl::SamplingGrid<double>> make(const cl::Dataset<double>& data,
                                                       const cl::FeatureSubset& s) const {
    return std::make_shared<const cl::SamplingGrid<double>>(
        cl::make_grid(data, s, cl::parse_sampler(sampler), m, seed));
  }

  cl::Json manifest() const { return {{"sampler", sampler}, {"m", m}, {"seed", seed}}; }
};

struct IcecCmd {
  ModelInput mi;
  GridFlags grid;
  std::string mode = "soft";
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("icec", "per-observation reassignment curves");
    mi.add(app);
    grid.add(app);
    app->add_option("--mode", mode, "hard or soft")->check(CLI::IsMember({"hard", "soft"}));
    app->add_option("-o,--out", out, "output file (.csv or .json)");
    app->callback([this] { run(); });
  }

  void run() {
    auto [model, data, subset] = mi.load();
    const auto g = grid.make(data, subset);
    auto curves = cl::icec_batch<double>(*model.model, data, subset, g, cl::parse_label_mode(mode),
                                         mi.threads);
    if (model.standardizer) {
      const auto shown = cl::original_units(*g, *model.standardizer, subset);
      for (auto& c : curves) c.grid = shown;
    }
    cl::Json manifest = grid.manifest();
    manifest.update({{"command", "icec"}, {"input", base_name(mi.input.path)},
                     {"model", base_name(mi.model_path)}, {"mode", mode}});
    const auto names = subset_names(data, subset);
    if (wants_json(out)) {
      emit(out, cl::icec_json(curves, names, manifest).dump(2) + "\n");
    } else {
      std::ostringstream os;
      cl::write_icec_csv(os, curves, names, manifest);
      emit(out, os.str());
    }
  }
};

struct PdcCmd {
  ModelInput mi;
  GridFlags grid;
  std::string mode = "soft";
  std::string aggregator = "mean";
  double q = 0.6;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("pdc", "partial dependence over all observations");
    mi.add(app);
    grid.add(app);
    app->add_option("--mode", mode, "soft (sPDC) or hard (hPDC)")
        ->check(CLI::IsMember({"hard", "soft"}));
    app->add_option("--aggregator", aggregator, "mean or median")
        ->check(CLI::IsMember({"mean", "median"}));
    app->add_option("-q,--coverage", q, "central band coverage")->check(CLI::Range(0.0, 1.0));
    app->add_option("-o,--out", out, "output file (.csv or .json)");
    app->callback([this] { run(); });
  }

  void run() {
    auto [model, data, subset] = mi.load();
    const auto g = grid.make(data, subset);
    const auto label_mode = cl::parse_label_mode(mode);
    const auto curves = cl::icec_batch<double>(*model.model, data, subset, g, label_mode, mi.threads);
    const auto shown = model.standardizer ? cl::original_units(*g, *model.standardizer, subset) : g;
    cl::Json manifest = grid.manifest();
    manifest.update({{"command", "pdc"}, {"input", base_name(mi.input.path)},
                     {"model", base_name(mi.model_path)}, {"mode", mode}});
    const auto names = subset_names(data, subset);
    std::ostringstream os;
    if (label_mode == cl::LabelMode::Soft) {
      manifest["aggregator"] = aggregator;
      manifest["coverage"] = q;
      auto curve = cl::spdc(curves, cl::parse_aggregator(aggregator), q);
      curve.grid = shown;
      if (wants_json(out)) {
        os << cl::spdc_json(curve, names, manifest).dump(2) << "\n";
      } else {
        cl::write_spdc_csv(os, curve, names, manifest);
      }
    } else {
      auto curve = cl::hpdc(curves);
      curve.grid = shown;
      if (wants_json(out)) {
        os << cl::hpdc_json(curve, names, manifest).dump(2) << "\n";
      } else {
        cl::write_hpdc_csv(os, curve, names, manifest);
      }
    }
    emit(out, os.str());
  }
};

// ---- simulate / experiment -------------------------------------------------

struct SimulateCmd {
  std::string name;
  std::uint64_t seed = 1;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("simulate", "write a synthetic scenario as CSV");
    app->add_option("name", name, "imbalanced4, threeclass, or wishart3")
        ->required()
        ->check(CLI::IsMember({"imbalanced4", "threeclass", "wishart3"}));
    app->add_option("--seed", seed, "generator seed");
    app->add_option("-o,--out", out, "output CSV (stdout if omitted)");
    app->callback([this] { run(); });
  }

  void run() {
    const cl::ScenarioData s = name == "imbalanced4" ? cl::scenario_imbalanced_4class(seed)
                               : name == "threeclass" ? cl::scenario_3class_2d(seed)
                                                      : cl::scenario_wishart_3class(seed);
    std::ostringstream os;
    cl::write_csv(os, s.data,
                  {{"command", "simulate"}, {"scenario", name}, {"seed", seed},
                   {"scenario_config_version", cl::scenario_config_version()}},
                  &s.latent);
    emit(out, os.str());
  }
};

struct ExperimentCmd {
  cl::ExperimentOptions opts;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("experiment", "reproduce one of the reference experiments");
    app->add_option("name", opts.name, "experiment name")
        ->required()
        ->check(CLI::IsMember(cl::experiment_names()));
    app->add_option("--seed", opts.seed, "experiment seed");
    app->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("-t,--repetitions", opts.repetitions, "PFIC shuffles")
        ->check(CLI::PositiveNumber);
    app->add_option("-o,--out-dir", opts.out_dir, "report directory")->required();
    app->add_option("--data", opts.wisconsin_path, "Wisconsin CSV (see tools/make_wdbc_csv.py)");
    app->callback([this] { run(); });
  }

  void run() {
    const auto files = cl::run_experiment(opts);
    std::ifstream summary(std::filesystem::path(opts.out_dir) / "summary.txt");
    if (summary) std::cout << summary.rdbuf();
    std::cout << "wrote " << files.size() << " files to " << opts.out_dir << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpretation of clustering: PFIC, ICEC, and PDC"};
  app.require_subcommand(1);
  FitCmd fit;
  PficCmd pfic;
  IcecCmd icec;
  PdcCmd pdc;
  SimulateCmd simulate;
  ExperimentCmd experiment;
  fit.add(app);
  pfic.add(app);
  icec.add(app);
  pdc.add(app);
  simulate.add(app);
  experiment.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const cl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.category()) {
      case cl::ErrorCategory::Usage: return 2;
      case cl::ErrorCategory::Data: return 3;
      case cl::ErrorCategory::Numeric: return 4;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
