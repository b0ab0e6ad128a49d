#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dmd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Seeded streams are owned by exactly one simulation; never shared across threads.
using Rng = std::mt19937_64;

// Execution policy for the row-parallel kernels. Both paths produce bit-identical output.
enum class Exec { serial, parallel };

// splitmix64 finalizer: decorrelates (master, stream) pairs into independent seeds.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace dmd
