#include "clusterlens/sobol.hpp"

#include <string>

#include "clusterlens/error.hpp"
#include "clusterlens/rng.hpp"

namespace clusterlens {

namespace {

struct Primitive {
  int degree;
  std::uint32_t coeffs;
  std::array<std::uint32_t, 6> initial;
};

// Dimensions 2..16 from new-joe-kuo-6.21201; dimension 1 is van der Corput.
constexpr std::array<Primitive, 15> kTable{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
}};

std::array<std::uint32_t, SobolSequence::kBits> direction_numbers(int dim) {
  constexpr int B = SobolSequence::kBits;
  std::array<std::uint32_t, B> v{};
  if (dim == 0) {
    for (int i = 0; i < B; ++i) v[std::size_t(i)] = 1u << (B - 1 - i);
    return v;
  }
  const Primitive& prim = kTable[std::size_t(dim - 1)];
  const int s = prim.degree;
  for (int i = 0; i < s; ++i) v[std::size_t(i)] = prim.initial[std::size_t(i)] << (B - 1 - i);
  for (int i = s; i < B; ++i) {
    std::uint32_t x = v[std::size_t(i - s)] ^ (v[std::size_t(i - s)] >> s);
    for (int j = 1; j < s; ++j) {
      if ((prim.coeffs >> (s - 1 - j)) & 1u) x ^= v[std::size_t(i - j)];
    }
    v[std::size_t(i)] = x;
  }
  return v;
}

}  // namespace

SobolSequence::SobolSequence(int dims, std::uint32_t digital_shift_seed) : dims_(dims) {
  if (dims < 1 || dims > kMaxDims) {
    throw Error(Errc::InvalidArgument,
                "Sobol dimension must be in [1, 16], got " + std::to_string(dims));
  }
  for (int d = 0; d < dims; ++d) directions_.push_back(direction_numbers(d));
  state_.assign(std::size_t(dims), 0u);
  shift_.assign(std::size_t(dims), 0u);
  if (digital_shift_seed != 0) {
    Rng rng(digital_shift_seed);
    for (auto& s : shift_) s = std::uint32_t(rng.next_u64() >> 32);
  }
}

std::vector<double> SobolSequence::next() {
  // Gray-code update: flip the direction number at the lowest zero bit of the
  // previous index.
  std::uint64_t prev = index_++;
  int bit = 0;
  while (prev & 1u) {
    prev >>= 1;
    ++bit;
  }
  if (bit >= kBits) throw Error(Errc::InvalidArgument, "Sobol sequence exhausted");
  std::vector<double> point(static_cast<std::size_t>(dims_));
  for (int d = 0; d < dims_; ++d) {
    state_[std::size_t(d)] ^= directions_[std::size_t(d)][std::size_t(bit)];
    point[std::size_t(d)] = double(state_[std::size_t(d)] ^ shift_[std::size_t(d)]) * 0x1.0p-32;
  }
  return point;
}

}  // namespace clusterlens
