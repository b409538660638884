#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clusterlens/backends.hpp"
#include "clusterlens/core.hpp"
#include "clusterlens/pdc.hpp"
#include "clusterlens/pfic.hpp"

namespace clusterlens {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

// ---- CSV ingestion ---------------------------------------------------------

struct CsvOptions {
  std::vector<std::string> exclude_cols;
  std::optional<std::string> label_col;  // held out as latent labels
};

struct CsvData {
  Dataset<double> data;
  std::optional<HardLabeling> latent;
  std::vector<std::string> label_values;  // distinct latent strings, by code
  std::string label_name;
};

/// Header row first; blank lines and lines starting with '#' are skipped.
/// Errors name the 1-based line number of the offending row.
CsvData read_csv(std::istream& in, const CsvOptions& options = {});
CsvData read_csv_file(const std::string& path, const CsvOptions& options = {});

/// Writes the data set, optionally followed by a latent label column, with
/// the manifest as leading '#' lines.
void write_csv(std::ostream& out, const Dataset<double>& data, const Json& manifest,
               const HardLabeling* latent = nullptr, const std::string& label_name = "latent_class");

// "# key: value" lines for each manifest entry, keys sorted.
void write_manifest_comment(std::ostream& out, const Json& manifest);

// ---- model documents -------------------------------------------------------

struct LoadedModel {
  std::shared_ptr<const ClusterModel<double>> model;
  std::vector<std::string> feature_names;
  std::optional<Standardizer<double>> standardizer;

  // Raw input rows mapped into the space the model was fitted in.
  Dataset<double> prepare(const Dataset<double>& raw) const;
};

Json model_to_json(const ClusterModel<double>& model, const std::vector<std::string>& names,
                   const std::optional<Standardizer<double>>& standardizer, const Json& manifest);
LoadedModel model_from_json(const Json& doc);
LoadedModel load_model_file(const std::string& path);

// ---- result exports --------------------------------------------------------

struct PficRecord {
  std::string feature_set;
  std::string scope;  // "global", 1-based cluster, or "mean" over clusters
  std::string score_name;
  double quantile = 0.5;
  double value = 0.0;
};

std::vector<PficRecord> pfic_records(const std::string& feature_set, const ScoreFunction& score,
                                     const GlobalImportance& result);
std::vector<PficRecord> pfic_records(const std::string& feature_set, const ScoreFunction& score,
                                     const ClusterImportance& result);

// Natural log of each value, for display only.
std::vector<PficRecord> log_scale(std::vector<PficRecord> records);

void write_pfic_csv(std::ostream& out, const std::vector<PficRecord>& records,
                    const Json& manifest);
Json pfic_json(const std::vector<PficRecord>& records, const Json& manifest);

// Long format: i, grid columns, cluster, value. Hard curves are written
// one-hot so both modes share the layout.
void write_icec_csv(std::ostream& out, const std::vector<IcecCurve<double>>& curves,
                    const std::vector<std::string>& grid_names, const Json& manifest);
Json icec_json(const std::vector<IcecCurve<double>>& curves,
               const std::vector<std::string>& grid_names, const Json& manifest);

void write_spdc_csv(std::ostream& out, const SoftPdcCurve<double>& curve,
                    const std::vector<std::string>& grid_names, const Json& manifest,
                    const std::string& group_column = {}, const std::string& group_value = {});
Json spdc_json(const SoftPdcCurve<double>& curve, const std::vector<std::string>& grid_names,
               const Json& manifest);

void write_hpdc_csv(std::ostream& out, const HardPdcCurve<double>& curve,
                    const std::vector<std::string>& grid_names, const Json& manifest);
Json hpdc_json(const HardPdcCurve<double>& curve, const std::vector<std::string>& grid_names,
               const Json& manifest);

// Grid with every column mapped back from standardized to original units.
std::shared_ptr<const SamplingGrid<double>> original_units(const SamplingGrid<double>& grid,
                                                           const Standardizer<double>& st,
                                                           const FeatureSubset& features);

// Writes text to path, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace clusterlens
