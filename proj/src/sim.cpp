#include "clusterlens/sim.hpp"

#include <json.hpp>

namespace clusterlens {

namespace {

// Embedded copy of config/scenarios.json, generated at configure time.
constexpr const char* kScenarioConfig =
#include "scenario_config.inc"
    ;

using nlohmann::json;

const json& config() {
  static const json parsed = json::parse(kScenarioConfig);
  return parsed;
}

Vector<double> to_vector(const json& j) {
  Vector<double> v(Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Index(i)) = j[i].get<double>();
  return v;
}

Matrix<double> to_matrix(const json& j) {
  Matrix<double> m(Index(j.size()), Index(j.at(0).size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    for (std::size_t c = 0; c < j[r].size(); ++c) m(Index(r), Index(c)) = j[r][c].get<double>();
  }
  return m;
}

ScenarioData assemble(std::string name, const std::vector<MvnSpec<double>>& specs,
                      const std::vector<Index>& sizes, Rng& rng) {
  const Index p = specs.front().p();
  Index n = 0;
  for (Index s : sizes) n += s;
  Matrix<double> values(n, p);
  std::vector<int> latent;
  Index row = 0;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    values.middleRows(row, sizes[c]) = sample_mvn(specs[c], sizes[c], rng);
    latent.insert(latent.end(), std::size_t(sizes[c]), int(c));
    row += sizes[c];
  }
  ScenarioData out{std::move(name),
                   validate_dataset<double>(std::move(values), default_feature_names(p)),
                   HardLabeling(std::move(latent), int(specs.size())), specs};
  return out;
}

ScenarioData fixed_covariance_scenario(const std::string& key, std::uint64_t seed) {
  const json& cfg = config().at(key);
  std::vector<MvnSpec<double>> specs;
  std::vector<Index> sizes;
  for (std::size_t c = 0; c < cfg.at("sizes").size(); ++c) {
    specs.push_back({to_vector(cfg["means"][c]), to_matrix(cfg["covariances"][c])});
    sizes.push_back(cfg["sizes"][c].get<Index>());
  }
  Rng rng(seed);
  return assemble(key, specs, sizes, rng);
}

}  // namespace

Matrix<double> ScenarioData::class_means() const {
  Matrix<double> m(Index(specs.size()), data.p());
  for (std::size_t c = 0; c < specs.size(); ++c) m.row(Index(c)) = specs[c].mean.transpose();
  return m;
}

int scenario_config_version() { return config().at("version").get<int>(); }

ScenarioData scenario_imbalanced_4class(std::uint64_t seed) {
  return fixed_covariance_scenario("imbalanced4", seed);
}

ScenarioData scenario_3class_2d(std::uint64_t seed) {
  return fixed_covariance_scenario("threeclass", seed);
}

ScenarioData scenario_wishart_3class(std::uint64_t seed) {
  const json& cfg = config().at("wishart3");
  const int dof = cfg.at("wishart_dof").get<int>();
  Rng rng(seed);
  std::vector<MvnSpec<double>> specs;
  std::vector<Index> sizes;
  for (std::size_t c = 0; c < cfg.at("sizes").size(); ++c) {
    const Vector<double> mean = to_vector(cfg["means"][c]);
    const Index p = mean.size();
    const Matrix<double> scale =
        cfg["wishart_scales"][c].get<double>() * Matrix<double>::Identity(p, p);
    // A draw that is numerically singular is replaced by the next one.
    Matrix<double> cov;
    for (;;) {
      cov = sample_wishart(dof, scale, rng);
      if (Eigen::LLT<Matrix<double>>(cov).info() == Eigen::Success) break;
    }
    specs.push_back({mean, cov});
    sizes.push_back(cfg["sizes"][c].get<Index>());
  }
  return assemble("wishart3", specs, sizes, rng);
}

}  // namespace clusterlens
