#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mcland {

/// Identifier of the sampling stack. Bumped whenever any sampler below
/// changes its output for a fixed seed.
inline constexpr std::string_view kGeneratorName = "mt19937_64/boost-ziggurat/v1";

/// splitmix64 finalizer applied to (base, index); used for per-trial seeds so
/// results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double normal();
  double uniform01();
  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound);

  Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mcland
