#include "momrl/sample_batch.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "momrl/errors.hpp"
#include "momrl/rng.hpp"
#include "momrl/two_layer_net.hpp"

namespace momrl {

int SampleBatch::truncated_count() const {
  int c = 0;
  for (auto t : truncated) c += (t != 0);
  return c;
}

SampleBatch SampleBatch::slice(int begin, int end) const {
  SampleBatch out;
  out.x = x.middleRows(begin, end - begin);
  out.y = y.segment(begin, end - begin);
  out.truncated.assign(truncated.begin() + begin, truncated.begin() + end);
  out.radius = radius;
  out.noise_theta = noise_theta;
  return out;
}

std::array<SampleBatch, 4> SampleBatch::partition4() const {
  const int n = size();
  int base = n / 4, extra = n % 4;
  std::array<SampleBatch, 4> parts;
  int at = 0;
  for (int i = 0; i < 4; ++i) {
    int len = base + (i < extra ? 1 : 0);
    parts[i] = slice(at, at + len);
    at += len;
  }
  return parts;
}

SampleBatch SampleBatch::centered(double* mean_out) const {
  SampleBatch out = *this;
  double mu = y.size() > 0 ? y.mean() : 0.0;
  out.y.array() -= mu;
  if (mean_out) *mean_out = mu;
  return out;
}

double default_truncation_radius(int d) {
  return std::max(10.0 * std::sqrt(static_cast<double>(d)), static_cast<double>(d));
}

Eigen::MatrixXd sample_gaussian_features(int n, int d, bool antithetic,
                                         std::mt19937_64& rng) {
  Eigen::MatrixXd x(n, d);
  std::normal_distribution<double> g(0.0, 1.0);
  if (!antithetic) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) x(i, j) = g(rng);
    return x;
  }
  for (int i = 0; i < n; i += 2) {
    for (int j = 0; j < d; ++j) x(i, j) = g(rng);
    if (i + 1 < n) x.row(i + 1) = -x.row(i);
  }
  return x;
}

SampleBatch sample_planted_batch(const TwoLayerNet& net, int n,
                                 const BatchOptions& opts, std::mt19937_64& rng) {
  SampleBatch b;
  const int d = net.dim();
  b.radius = opts.radius > 0 ? opts.radius : default_truncation_radius(d);
  b.noise_theta = opts.noise_theta;
  b.x = sample_gaussian_features(n, d, opts.antithetic, rng);
  b.y = net.eval_batch(b.x);
  if (opts.noise_theta > 0) {
    std::normal_distribution<double> g(0.0, opts.noise_theta);
    for (int i = 0; i < n; ++i) b.y[i] += g(rng);
  }
  b.truncated.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    if (b.x.row(i).norm() > b.radius) {
      b.truncated[i] = 1;
      b.y[i] = 0.0;
    }
  }
  return b;
}

void write_batch(std::ostream& os, const SampleBatch& batch) {
  os << "# momrl-batch v1 n=" << batch.size() << " d=" << batch.dim()
     << " radius=" << batch.radius << " theta=" << batch.noise_theta << "\n";
  os.precision(17);
  for (int i = 0; i < batch.size(); ++i) {
    for (int j = 0; j < batch.dim(); ++j) os << batch.x(i, j) << '\t';
    os << batch.y[i] << '\n';
  }
}

SampleBatch read_batch(std::istream& is) {
  std::string header;
  std::getline(is, header);
  SampleBatch b;
  int n = 0, d = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("n=", 0) == 0) n = std::stoi(tok.substr(2));
      if (tok.rfind("d=", 0) == 0) d = std::stoi(tok.substr(2));
      if (tok.rfind("radius=", 0) == 0) b.radius = std::stod(tok.substr(7));
      if (tok.rfind("theta=", 0) == 0) b.noise_theta = std::stod(tok.substr(6));
    }
  }
  if (n <= 0 || d <= 0) throw ValidationError("read_batch: bad header");
  b.x.resize(n, d);
  b.y.resize(n);
  b.truncated.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) is >> b.x(i, j);
    is >> b.y[i];
    if (!is) throw ValidationError("read_batch: truncated table");
    if (b.x.row(i).norm() > b.radius) b.truncated[i] = 1;
  }
  return b;
}

void save_batch(const std::string& path, const SampleBatch& batch) {
  std::ofstream os(path);
  if (!os) throw Error("save_batch: cannot open " + path);
  write_batch(os, batch);
}

SampleBatch load_batch(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("load_batch: cannot open " + path);
  return read_batch(is);
}

}  // namespace momrl
