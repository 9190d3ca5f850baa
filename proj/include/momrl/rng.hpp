#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace momrl {

// Named substreams off one root seed. The derivation is FNV-1a over the
// stream name mixed into the root by splitmix64, so that every stage
// (instance generation, exploration, recovery restarts, ...) can be rerun
// in isolation with a reproducible engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(root ^ h);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view name,
                                 std::uint64_t index) {
  return splitmix64(derive_seed(root, name) + 0x9e3779b97f4a7c15ULL * (index + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t root, std::string_view name) {
  return std::mt19937_64(derive_seed(root, name));
}

inline std::mt19937_64 make_rng(std::uint64_t root, std::string_view name,
                                std::uint64_t index) {
  return std::mt19937_64(derive_seed(root, name, index));
}

inline Eigen::VectorXd gaussian_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd x(d);
  for (int i = 0; i < d; ++i) x[i] = g(rng);
  return x;
}

inline Eigen::VectorXd random_unit_vector(int d, std::mt19937_64& rng) {
  Eigen::VectorXd x = gaussian_vector(d, rng);
  double n = x.norm();
  while (n < 1e-12) {
    x = gaussian_vector(d, rng);
    n = x.norm();
  }
  return x / n;
}

inline Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

}  // namespace momrl
