#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace vabench {

using Rng = std::mt19937_64;

/// 64-bit FNV-1a over raw bytes. Stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from a master seed and an ordered list of labels.
/// Labels are length-prefixed so ("ab","c") and ("a","bc") differ.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::string_view> labels);

/// Uniform double in [0, 1).
double uniform01(Rng& rng);

/// Index drawn with probability proportional to the nonnegative weights.
/// `total` must equal the sum of weights and be positive.
std::size_t draw_categorical(const std::vector<double>& weights, double total,
                             Rng& rng);

}  // namespace vabench
