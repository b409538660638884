#pragma once

// Minimal seeded property harness: each invariant is checked on kCases
// generated inputs, and the first failing case index is reported so it can
// be replayed with Rng::stream(kPropertySeed, case).

#include <gtest/gtest.h>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "clusterlens/core.hpp"
#include "clusterlens/rng.hpp"
#include "clusterlens/scores.hpp"

namespace proptest {

namespace cl = clusterlens;

inline constexpr int kCases = 1000;
inline constexpr std::uint64_t kPropertySeed = 0x9e3779b97f4a7c15ULL;

template <typename F>
void for_all(const std::string& name, F&& check, int cases = kCases) {
  for (int c = 0; c < cases; ++c) {
    cl::Rng rng = cl::Rng::stream(kPropertySeed, std::uint64_t(c));
    check(rng);
    if (::testing::Test::HasFailure()) {
      ADD_FAILURE() << "property '" << name << "' falsified at case " << c;
      return;
    }
  }
  // Read by the acceptance runner to confirm the case count.
  std::cout << "[property] " << name << " cases=" << cases << "\n";
}

inline int uniform_int(cl::Rng& rng, int lo, int hi) {  // inclusive
  return lo + int(rng.below(std::uint64_t(hi - lo + 1)));
}

inline cl::Matrix<double> random_matrix(cl::Rng& rng, cl::Index n, cl::Index p,
                                        double scale = 10.0) {
  cl::Matrix<double> m(n, p);
  for (cl::Index i = 0; i < n; ++i) {
    for (cl::Index j = 0; j < p; ++j) m(i, j) = scale * (2.0 * rng.uniform() - 1.0);
  }
  return m;
}

inline cl::Dataset<double> random_dataset(cl::Rng& rng, int n_max = 40, int p_max = 5) {
  const int n = uniform_int(rng, 2, n_max);
  const int p = uniform_int(rng, 1, p_max);
  return cl::validate_dataset<double>(random_matrix(rng, n, p), cl::default_feature_names(p));
}

inline cl::HardLabeling random_labeling(cl::Rng& rng, int n, int k) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int& v : labels) v = int(rng.below(std::uint64_t(k)));
  return cl::HardLabeling(std::move(labels), k);
}

// Random after-labeling that keeps each label with probability `stay`.
inline cl::HardLabeling perturb(cl::Rng& rng, const cl::HardLabeling& before, double stay) {
  std::vector<int> labels = before.labels();
  for (int& v : labels) {
    if (rng.uniform() >= stay) v = int(rng.below(std::uint64_t(before.k())));
  }
  return cl::HardLabeling(std::move(labels), before.k());
}

inline cl::BinaryConfusion random_binary(cl::Rng& rng, int max_cell = 50) {
  auto cell = [&] { return std::int64_t(rng.below(std::uint64_t(max_cell + 1))); };
  const auto a = cell(), b = cell(), c = cell(), d = cell();
  return cl::BinaryConfusion::from_cells(a, b, c, d);
}

}  // namespace proptest
