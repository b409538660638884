#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace clusterlens {

/// Unscrambled Sobol sequence in up to 16 dimensions, Gray-code order, using
/// the Joe-Kuo direction numbers. The all-zero first point is skipped, so the
/// first call to next() returns (0.5, ..., 0.5).
class SobolSequence {
 public:
  static constexpr int kMaxDims = 16;
  static constexpr int kBits = 32;

  explicit SobolSequence(int dims, std::uint32_t digital_shift_seed = 0);

  int dims() const { return dims_; }

  // Next point in [0, 1)^dims.
  std::vector<double> next();

 private:
  int dims_;
  std::uint64_t index_ = 0;
  std::vector<std::array<std::uint32_t, kBits>> directions_;
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> shift_;
};

}  // namespace clusterlens
