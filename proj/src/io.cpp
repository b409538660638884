#include "clusterlens/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace clusterlens {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_long(const std::string& s, long long& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string parse_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

// Integer-looking labels sort numerically, anything else lexicographically.
std::vector<std::string> ordered_levels(const std::vector<std::string>& raw) {
  std::set<std::string> distinct(raw.begin(), raw.end());
  std::vector<std::string> levels(distinct.begin(), distinct.end());
  const bool numeric = std::all_of(levels.begin(), levels.end(), [](const std::string& s) {
    long long v;
    return parse_long(s, v);
  });
  if (numeric) {
    std::sort(levels.begin(), levels.end(), [](const std::string& a, const std::string& b) {
      long long x = 0, y = 0;
      parse_long(a, x);
      parse_long(b, y);
      return x < y;
    });
  }
  return levels;
}

}  // namespace

CsvData read_csv(std::istream& in, const CsvOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    header = split_fields(t);
    break;
  }
  if (header.empty()) throw Error(Errc::EmptyDataset, "no header row");

  std::vector<std::size_t> feature_cols;
  std::vector<std::string> names;
  std::optional<std::size_t> label_col;
  const std::set<std::string> exclude(options.exclude_cols.begin(), options.exclude_cols.end());
  for (const auto& name : exclude) {
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      throw Error(Errc::UnknownFeature, "excluded column '" + name + "' not in header");
    }
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (options.label_col && header[c] == *options.label_col) {
      label_col = c;
    } else if (!exclude.count(header[c])) {
      feature_cols.push_back(c);
      names.push_back(header[c]);
    }
  }
  if (options.label_col && !label_col) {
    throw Error(Errc::UnknownFeature, "label column '" + *options.label_col + "' not in header");
  }

  std::vector<double> flat;
  std::vector<std::string> raw_labels;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_fields(t);
    if (fields.size() != header.size()) {
      throw Error(Errc::ParseError, parse_error(line_no, "expected " +
                                                             std::to_string(header.size()) +
                                                             " fields, got " +
                                                             std::to_string(fields.size())));
    }
    for (std::size_t c : feature_cols) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw Error(Errc::ParseError, parse_error(line_no, "column '" + header[c] +
                                                               "': cannot parse '" + fields[c] +
                                                               "' as a number"));
      }
      if (!std::isfinite(v)) {
        throw Error(Errc::NonFiniteValue,
                    parse_error(line_no, "column '" + header[c] + "' is not finite"));
      }
      flat.push_back(v);
    }
    if (label_col) raw_labels.push_back(fields[*label_col]);
    ++rows;
  }

  const Index p = Index(feature_cols.size());
  Matrix<double> values(rows, p);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < p; ++j) values(i, j) = flat[std::size_t(i * p + j)];
  }
  CsvData out{validate_dataset<double>(std::move(values), std::move(names)), std::nullopt, {}, {}};
  if (label_col) {
    out.label_name = header[*label_col];
    out.label_values = ordered_levels(raw_labels);
    std::map<std::string, int> code;
    for (std::size_t c = 0; c < out.label_values.size(); ++c) code[out.label_values[c]] = int(c);
    std::vector<int> labels;
    labels.reserve(raw_labels.size());
    for (const auto& s : raw_labels) labels.push_back(code[s]);
    out.latent = HardLabeling(std::move(labels), int(out.label_values.size()));
  }
  return out;
}

CsvData read_csv_file(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::MissingDataset, "cannot open '" + path + "'");
  return read_csv(in, options);
}

void write_manifest_comment(std::ostream& out, const Json& manifest) {
  for (auto it = manifest.begin(); it != manifest.end(); ++it) {
    out << "# " << it.key() << ": " << it.value().dump() << '\n';
  }
}

void write_csv(std::ostream& out, const Dataset<double>& data, const Json& manifest,
               const HardLabeling* latent, const std::string& label_name) {
  if (latent && latent->n() != data.n()) {
    throw Error(Errc::LengthMismatch, "one latent label per row required");
  }
  write_manifest_comment(out, manifest);
  const auto& names = data.feature_names();
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  if (latent) out << ',' << label_name;
  out << '\n';
  for (Index i = 0; i < data.n(); ++i) {
    for (Index j = 0; j < data.p(); ++j) {
      out << (j ? "," : "") << format_number(data.values()(i, j));
    }
    if (latent) out << ',' << (*latent)[i] + 1;
    out << '\n';
  }
}

// ---- models ----------------------------------------------------------------

namespace {

Json matrix_json(const Matrix<double>& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const Vector<double>& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Matrix<double> json_matrix(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw Error(Errc::ParseError, "expected a non-empty matrix");
  }
  Matrix<double> m(Index(j.size()), Index(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j[0].size()) throw Error(Errc::ParseError, "ragged matrix");
    for (std::size_t c = 0; c < j[r].size(); ++c) m(Index(r), Index(c)) = j[r][c].get<double>();
  }
  return m;
}

Vector<double> json_vector(const Json& j) {
  Vector<double> v(Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Index(i)) = j[i].get<double>();
  return v;
}

}  // namespace

Dataset<double> LoadedModel::prepare(const Dataset<double>& raw) const {
  std::vector<Index> cols;
  for (const auto& name : feature_names) {
    const Index j = raw.find_feature(name);
    if (j < 0) throw Error(Errc::UnknownFeature, "model feature '" + name + "' not in data");
    cols.push_back(j);
  }
  Dataset<double> selected = select_columns(raw, cols);
  if (!standardizer) return selected;
  return validate_dataset<double>(standardizer->transform(selected.values()),
                                  selected.feature_names());
}

Json model_to_json(const ClusterModel<double>& model, const std::vector<std::string>& names,
                   const std::optional<Standardizer<double>>& standardizer, const Json& manifest) {
  if (Index(names.size()) != model.dims()) {
    throw Error(Errc::LengthMismatch, "one feature name per model dimension required");
  }
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "model";
  doc["backend"] = model.backend();
  doc["k"] = model.k();
  doc["feature_names"] = names;
  if (const auto* km = dynamic_cast<const KMeansModel<double>*>(&model)) {
    doc["centroids"] = matrix_json(km->centroids());
    doc["inertia"] = km->inertia();
    doc["iterations"] = km->iterations();
  } else if (const auto* cm = dynamic_cast<const CMeansModel<double>*>(&model)) {
    doc["centroids"] = matrix_json(cm->centroids());
    doc["fuzzifier"] = cm->fuzzifier();
    doc["iterations"] = cm->iterations();
  } else {
    throw Error(Errc::InvalidArgument, "backend '" + model.backend() + "' is not serializable");
  }
  if (standardizer) {
    doc["standardization"] = {{"mean", vector_json(standardizer->mean)},
                              {"stddev", vector_json(standardizer->stddev)}};
  } else {
    doc["standardization"] = nullptr;
  }
  doc["manifest"] = manifest;
  return doc;
}

LoadedModel model_from_json(const Json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(Errc::ParseError, "unsupported schema_version");
    }
    LoadedModel out;
    out.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    const Matrix<double> centroids = json_matrix(doc.at("centroids"));
    if (centroids.rows() != doc.at("k").get<int>()) {
      throw Error(Errc::KMismatch, "k differs from centroid count");
    }
    if (centroids.cols() != Index(out.feature_names.size())) {
      throw Error(Errc::DimensionMismatch, "centroid width differs from feature count");
    }
    const auto backend = doc.at("backend").get<std::string>();
    if (backend == "kmeans") {
      out.model = std::make_shared<KMeansModel<double>>(centroids);
    } else if (backend == "cmeans") {
      out.model = std::make_shared<CMeansModel<double>>(centroids, doc.at("fuzzifier").get<double>());
    } else {
      throw Error(Errc::ParseError, "unknown backend '" + backend + "'");
    }
    const Json& st = doc.at("standardization");
    if (!st.is_null()) {
      out.standardizer = Standardizer<double>{json_vector(st.at("mean")), json_vector(st.at("stddev"))};
      if (out.standardizer->p() != centroids.cols() ||
          out.standardizer->stddev.size() != centroids.cols()) {
        throw Error(Errc::DimensionMismatch, "standardization width differs from feature count");
      }
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("model document: ") + e.what());
  }
}

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::MissingDataset, "cannot open '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
  return model_from_json(doc);
}

// ---- exports ---------------------------------------------------------------

namespace {

void add_summary(std::vector<PficRecord>& out, const std::string& set, const std::string& scope,
                 const std::string& score, const ImportanceSummary& s) {
  bool has_median = false;
  for (const auto& [p, v] : s.quantiles) {
    out.push_back({set, scope, score, p, v});
    has_median = has_median || p == 0.5;
  }
  if (!has_median) out.push_back({set, scope, score, 0.5, s.median});
}

}  // namespace

std::vector<PficRecord> pfic_records(const std::string& feature_set, const ScoreFunction& score,
                                     const GlobalImportance& result) {
  std::vector<PficRecord> out;
  add_summary(out, feature_set, "global", score.name(), result.summary);
  return out;
}

std::vector<PficRecord> pfic_records(const std::string& feature_set, const ScoreFunction& score,
                                     const ClusterImportance& result) {
  std::vector<PficRecord> out;
  for (std::size_t c = 0; c < result.clusters.size(); ++c) {
    add_summary(out, feature_set, std::to_string(c + 1), score.name(), result.clusters[c]);
  }
  out.push_back({feature_set, "mean", score.name(), 0.5, result.mean_of_medians});
  return out;
}

std::vector<PficRecord> log_scale(std::vector<PficRecord> records) {
  for (auto& r : records) {
    r.value = std::log(r.value);
    r.score_name = "log(" + r.score_name + ")";
  }
  return records;
}

void write_pfic_csv(std::ostream& out, const std::vector<PficRecord>& records,
                    const Json& manifest) {
  write_manifest_comment(out, manifest);
  out << "feature_set,scope,score_name,quantile,value\n";
  for (const auto& r : records) {
    out << r.feature_set << ',' << r.scope << ',' << r.score_name << ','
        << format_number(r.quantile) << ',' << format_number(r.value) << '\n';
  }
}

Json pfic_json(const std::vector<PficRecord>& records, const Json& manifest) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "pfic";
  doc["manifest"] = manifest;
  Json rows = Json::array();
  for (const auto& r : records) {
    rows.push_back({{"feature_set", r.feature_set},
                    {"scope", r.scope},
                    {"score_name", r.score_name},
                    {"quantile", r.quantile},
                    {"value", r.value}});
  }
  doc["records"] = std::move(rows);
  return doc;
}

namespace {

void check_grid_names(const SamplingGrid<double>& grid, const std::vector<std::string>& names) {
  if (Index(names.size()) != grid.width()) {
    throw Error(Errc::LengthMismatch, "one name per grid column required");
  }
}

void write_grid_header(std::ostream& out, const std::vector<std::string>& names) {
  for (const auto& n : names) out << n << ',';
}

void write_grid_row(std::ostream& out, const SamplingGrid<double>& grid, Index j) {
  for (Index s = 0; s < grid.width(); ++s) out << format_number(grid.values(j, s)) << ',';
}

Json grid_json(const SamplingGrid<double>& grid, const std::vector<std::string>& names) {
  Json doc;
  doc["features"] = names;
  doc["values"] = matrix_json(grid.values);
  return doc;
}

}  // namespace

void write_icec_csv(std::ostream& out, const std::vector<IcecCurve<double>>& curves,
                    const std::vector<std::string>& grid_names, const Json& manifest) {
  write_manifest_comment(out, manifest);
  out << "i,";
  write_grid_header(out, grid_names);
  out << "cluster,value\n";
  for (const auto& curve : curves) {
    check_grid_names(*curve.grid, grid_names);
    for (Index j = 0; j < curve.m(); ++j) {
      for (int c = 0; c < curve.k; ++c) {
        out << curve.observation << ',';
        write_grid_row(out, *curve.grid, j);
        const double v = curve.mode == LabelMode::Soft
                             ? curve.soft(j, c)
                             : (curve.hard[std::size_t(j)] == c ? 1.0 : 0.0);
        out << c + 1 << ',' << format_number(v) << '\n';
      }
    }
  }
}

Json icec_json(const std::vector<IcecCurve<double>>& curves,
               const std::vector<std::string>& grid_names, const Json& manifest) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "icec";
  doc["manifest"] = manifest;
  if (!curves.empty()) {
    check_grid_names(*curves.front().grid, grid_names);
    doc["grid"] = grid_json(*curves.front().grid, grid_names);
    doc["mode"] = curves.front().mode == LabelMode::Soft ? "soft" : "hard";
    doc["k"] = curves.front().k;
  }
  Json arr = Json::array();
  for (const auto& curve : curves) {
    Json c;
    c["i"] = curve.observation;
    c["initial_cluster"] = curve.initial_cluster + 1;
    if (curve.mode == LabelMode::Soft) {
      c["memberships"] = matrix_json(curve.soft);
    } else {
      std::vector<int> labels;
      for (int v : curve.hard) labels.push_back(v + 1);
      c["labels"] = labels;
    }
    arr.push_back(std::move(c));
  }
  doc["curves"] = std::move(arr);
  return doc;
}

void write_spdc_csv(std::ostream& out, const SoftPdcCurve<double>& curve,
                    const std::vector<std::string>& grid_names, const Json& manifest,
                    const std::string& group_column, const std::string& group_value) {
  check_grid_names(*curve.grid, grid_names);
  write_manifest_comment(out, manifest);
  if (!group_column.empty()) out << group_column << ',';
  write_grid_header(out, grid_names);
  out << "cluster,aggregate,band_low,band_high\n";
  for (Index j = 0; j < curve.values.rows(); ++j) {
    for (Index c = 0; c < curve.values.cols(); ++c) {
      if (!group_column.empty()) out << group_value << ',';
      write_grid_row(out, *curve.grid, j);
      out << c + 1 << ',' << format_number(curve.values(j, c)) << ','
          << format_number(curve.band_low(j, c)) << ',' << format_number(curve.band_high(j, c))
          << '\n';
    }
  }
}

Json spdc_json(const SoftPdcCurve<double>& curve, const std::vector<std::string>& grid_names,
               const Json& manifest) {
  check_grid_names(*curve.grid, grid_names);
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "spdc";
  doc["manifest"] = manifest;
  doc["grid"] = grid_json(*curve.grid, grid_names);
  doc["aggregator"] = to_string(curve.aggregator);
  doc["coverage"] = curve.coverage;
  doc["curves_aggregated"] = curve.n;
  doc["aggregate"] = matrix_json(curve.values);
  doc["band_low"] = matrix_json(curve.band_low);
  doc["band_high"] = matrix_json(curve.band_high);
  return doc;
}

void write_hpdc_csv(std::ostream& out, const HardPdcCurve<double>& curve,
                    const std::vector<std::string>& grid_names, const Json& manifest) {
  check_grid_names(*curve.grid, grid_names);
  write_manifest_comment(out, manifest);
  write_grid_header(out, grid_names);
  out << "mode_label,certainty\n";
  for (std::size_t j = 0; j < curve.modes.size(); ++j) {
    write_grid_row(out, *curve.grid, Index(j));
    out << curve.modes[j] + 1 << ',' << format_number(curve.certainty[j]) << '\n';
  }
}

Json hpdc_json(const HardPdcCurve<double>& curve, const std::vector<std::string>& grid_names,
               const Json& manifest) {
  check_grid_names(*curve.grid, grid_names);
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "hpdc";
  doc["manifest"] = manifest;
  doc["grid"] = grid_json(*curve.grid, grid_names);
  std::vector<int> modes;
  for (int v : curve.modes) modes.push_back(v + 1);
  doc["mode_label"] = modes;
  doc["certainty"] = curve.certainty;
  return doc;
}

std::shared_ptr<const SamplingGrid<double>> original_units(const SamplingGrid<double>& grid,
                                                           const Standardizer<double>& st,
                                                           const FeatureSubset& features) {
  if (features.size() != grid.width()) {
    throw Error(Errc::DimensionMismatch, "grid width differs from |S|");
  }
  return std::make_shared<const SamplingGrid<double>>(
      grid.map_columns([&](Index s, double v) { return st.inverse(features[s], v); }));
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

}  // namespace clusterlens
