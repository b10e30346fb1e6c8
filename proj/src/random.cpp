#include "vabench/random.hpp"

#include <cstring>

namespace vabench {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::string_view> labels) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((master >> (8 * i)) & 0xff);
  std::uint64_t h = fnv1a64(std::string_view(buf, 8));
  for (std::string_view label : labels) {
    const std::uint64_t len = label.size();
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((len >> (8 * i)) & 0xff);
    h = fnv1a64(std::string_view(buf, 8), h);
    h = fnv1a64(label, h);
  }
  return mix64(h);
}

double uniform01(Rng& rng) {
  // 53 random mantissa bits.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t draw_categorical(const std::vector<double>& weights, double total,
                             Rng& rng) {
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

}  // namespace vabench
