#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace momrl {

class TwoLayerNet;

// Feature/label batch from the truncated model: x ~ N(0, I_d),
// y = (f(x) + xi) * 1{||x|| <= B}. Truncated rows keep x but carry y = 0.
struct SampleBatch {
  Eigen::MatrixXd x;  // n x d, one sample per row
  Eigen::VectorXd y;  // n
  std::vector<std::uint8_t> truncated;
  double radius = 0.0;       // B
  double noise_theta = 0.0;  // sub-Gaussian parameter of xi (0 = noiseless)

  int size() const { return static_cast<int>(x.rows()); }
  int dim() const { return static_cast<int>(x.cols()); }
  int truncated_count() const;

  SampleBatch slice(int begin, int end) const;
  // Equal fourths in stream order; earlier parts take the extras.
  std::array<SampleBatch, 4> partition4() const;

  // Labels shifted by -mean(y); the estimators of order >= 1 are invariant
  // to label shifts, which this uses to cut their variance.
  SampleBatch centered(double* mean_out = nullptr) const;
};

double default_truncation_radius(int d);  // max(10 sqrt(d), d)

struct BatchOptions {
  double noise_theta = 0.0;
  double radius = 0.0;  // 0 -> default_truncation_radius(d)
  // Draw features in antithetic pairs (x, -x); each sample keeps the
  // standard Gaussian marginal while the pairing cancels the odd-label
  // variance in even-order moment estimates.
  bool antithetic = true;
};

SampleBatch sample_planted_batch(const TwoLayerNet& net, int n,
                                 const BatchOptions& opts, std::mt19937_64& rng);

// Gaussian features only (labels filled by a caller-run query loop).
Eigen::MatrixXd sample_gaussian_features(int n, int d, bool antithetic,
                                         std::mt19937_64& rng);

// Text table (x_1 .. x_d, y) with a 1-line header.
void write_batch(std::ostream& os, const SampleBatch& batch);
SampleBatch read_batch(std::istream& is);
void save_batch(const std::string& path, const SampleBatch& batch);
SampleBatch load_batch(const std::string& path);

}  // namespace momrl
