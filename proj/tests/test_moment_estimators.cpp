#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "momrl/errors.hpp"
#include "momrl/moment_estimators.hpp"
#include "momrl/rng.hpp"
#include "momrl/two_layer_net.hpp"
#include "oracles.hpp"

using namespace momrl;

namespace {

SampleBatch random_batch(int n, int d, std::mt19937_64& rng, bool antithetic = false) {
  SampleBatch b;
  b.x = sample_gaussian_features(n, d, antithetic, rng);
  b.y.resize(n);
  std::normal_distribution<double> g(0, 1);
  for (int i = 0; i < n; ++i) b.y[i] = g(rng);
  b.truncated.assign(n, 0);
  b.radius = default_truncation_radius(d);
  return b;
}

double tensor_diff(const Tensor3& a, const Tensor3& b) {
  double m = 0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k)
        m = std::max(m, std::abs(a(i, j, k) - b(i, j, k)));
  return m;
}

Eigen::MatrixXd random_orthonormal(int d, int k, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(d, k, rng));
  return qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
}

MomentIndices indices_for(int j2, int j3, int l1, int l2) {
  MomentIndices idx;
  idx.j2 = j2;
  idx.j3 = j3;
  idx.l1 = l1;
  idx.l2 = l2;
  idx.c = {0.5, 0.4, 0.1, -0.4};
  idx.nonzero = {true, true, true, true};
  return idx;
}

}  // namespace

TEST_CASE("contracted estimators match the loop oracle on every index path") {
  std::mt19937_64 rng(21);
  for (int d : {3, 4}) {
    for (int k : {1, 2}) {
      SampleBatch b = random_batch(200, d, rng);
      Eigen::VectorXd alpha = random_unit_vector(d, rng);
      Eigen::MatrixXd v = random_orthonormal(d, k, rng);
      oracle::LoopMoments lm = oracle::loop_moments(b);
      for (int j2 : {2, 3, 4}) {
        MomentIndices idx = indices_for(j2, 3, 1, 2);
        Eigen::MatrixXd est = estimate_p2(b, alpha, idx);
        Eigen::MatrixXd ref = oracle::contract_p2(lm, j2, alpha);
        CHECK((est - ref).cwiseAbs().maxCoeff() < 1e-10);
      }
      for (int j3 : {3, 4}) {
        MomentIndices idx = indices_for(2, j3, 1, 2);
        Tensor3 est = estimate_r3(b, alpha, v, idx);
        Tensor3 ref = oracle::contract_r3(lm, j3, alpha, v);
        CHECK(tensor_diff(est, ref) < 1e-10);
      }
      for (int l1 : {1, 2, 3, 4}) {
        MomentIndices idx = indices_for(2, 3, l1, 2);
        Eigen::VectorXd est = estimate_q1(b, alpha, idx);
        Eigen::VectorXd ref = oracle::contract_q1(lm, l1, alpha);
        CHECK((est - ref).cwiseAbs().maxCoeff() < 1e-10);
      }
      for (int l2 : {2, 3, 4}) {
        MomentIndices idx = indices_for(2, 3, 1, l2);
        Eigen::MatrixXd est = estimate_q2(b, alpha, v, idx);
        Eigen::MatrixXd ref = oracle::contract_q2(lm, l2, alpha, v);
        CHECK((est - ref).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("p2 concentrates at the analytic rank-one moment for planted k=1 relu") {
  std::mt19937_64 rng = make_rng(99, "p2-analytic");
  const int d = 10;
  Eigen::VectorXi signs(1);
  signs << 1;
  TwoLayerNet net = random_planted_net(1, d, signs, Eigen::VectorXd::Ones(1),
                                       Activation::relu(), rng);
  BatchOptions opts;
  opts.antithetic = true;
  SampleBatch b = sample_planted_batch(net, 200000, opts, rng);
  MomentIndices idx = MomentIndices::select(Activation::relu());
  Eigen::MatrixXd p2 = estimate_p2(b, Eigen::VectorXd::Zero(d), idx);
  Eigen::VectorXd w = net.weights().row(0).transpose();
  Eigen::MatrixXd target = net.activation().m_coeff(2, w.norm()) / w.squaredNorm() *
                           w * w.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p2 - target);
  CHECK(svd.singularValues()[0] < 0.02);
}

TEST_CASE("cancellation pair zeroes every estimator") {
  std::mt19937_64 rng = make_rng(99, "cancel");
  const int d = 6;
  Eigen::VectorXi signs(2);
  signs << 1, -1;
  Eigen::MatrixXd w(2, d);
  Eigen::VectorXd row = random_unit_vector(d, rng);
  w.row(0) = row.transpose();
  w.row(1) = row.transpose();
  TwoLayerNet net(signs, w, Activation::relu());
  BatchOptions opts;
  SampleBatch b = sample_planted_batch(net, 100000, opts, rng);
  // f is identically zero, so labels vanish exactly and estimators are zero
  CHECK(b.y.cwiseAbs().maxCoeff() == 0.0);
  MomentIndices idx = MomentIndices::select(Activation::relu());
  Eigen::VectorXd alpha = random_unit_vector(d, rng);
  Eigen::MatrixXd v = random_orthonormal(d, 2, rng);
  CHECK(estimate_p2(b, alpha, idx).cwiseAbs().maxCoeff() == 0.0);
  CHECK(estimate_r3(b, alpha, v, idx).max_abs() == 0.0);
  CHECK(estimate_q1(b, alpha, idx).cwiseAbs().maxCoeff() == 0.0);
  CHECK(estimate_q2(b, alpha, v, idx).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("q1 and q2 concentrate for planted k=1 relu") {
  std::mt19937_64 rng = make_rng(99, "q1q2");
  const int d = 8;
  Eigen::VectorXi signs(1);
  signs << 1;
  TwoLayerNet net = random_planted_net(1, d, signs, Eigen::VectorXd::Ones(1),
                                       Activation::relu(), rng);
  BatchOptions opts;
  opts.antithetic = true;
  SampleBatch b = sample_planted_batch(net, 200000, opts, rng);
  MomentIndices idx = MomentIndices::select(Activation::relu());
  Eigen::VectorXd w = net.weights().row(0).transpose();
  Eigen::VectorXd alpha = random_unit_vector(d, rng);
  Eigen::VectorXd q1 = estimate_q1(b, alpha, idx);
  CHECK((q1 - 0.5 * w).norm() < 0.02);
  Eigen::MatrixXd v(d, 1);
  v.col(0) = w.normalized();
  Eigen::MatrixXd q2 = estimate_q2(b, alpha, v, idx);
  CHECK(std::abs(q2(0, 0) - net.activation().m_coeff(2, 1.0)) < 0.02);
}

TEST_CASE("truncation radius keeps the estimators essentially unchanged") {
  std::mt19937_64 rng = make_rng(99, "trunc");
  const int d = 10;
  Eigen::VectorXi signs(1);
  signs << 1;
  TwoLayerNet net = random_planted_net(1, d, signs, Eigen::VectorXd::Ones(1),
                                       Activation::relu(), rng);
  BatchOptions keep;
  keep.radius = 1e9;  // effectively untruncated
  SampleBatch full = sample_planted_batch(net, 50000, keep, rng);
  SampleBatch cut = full;
  cut.radius = default_truncation_radius(d);
  for (int i = 0; i < cut.size(); ++i) {
    if (cut.x.row(i).norm() > cut.radius) {
      cut.truncated[i] = 1;
      cut.y[i] = 0.0;
    }
  }
  MomentIndices idx = MomentIndices::select(Activation::relu());
  Eigen::MatrixXd a = estimate_p2(full, Eigen::VectorXd::Zero(d), idx);
  Eigen::MatrixXd b2 = estimate_p2(cut, Eigen::VectorXd::Zero(d), idx);
  CHECK((a - b2).norm() <= 1e-6 * a.norm());
}

TEST_CASE("homogeneity: scaling planted weights scales the moments") {
  std::mt19937_64 rng = make_rng(99, "homog");
  const int d = 6;
  Eigen::VectorXi signs(1);
  signs << 1;
  TwoLayerNet net1 = random_planted_net(1, d, signs, Eigen::VectorXd::Ones(1),
                                        Activation::relu(), rng);
  TwoLayerNet net2(net1.signs(), 2.0 * net1.weights(), net1.activation());
  std::mt19937_64 r1 = make_rng(5, "batch"), r2 = make_rng(5, "batch");
  BatchOptions opts;
  opts.antithetic = true;
  SampleBatch b1 = sample_planted_batch(net1, 150000, opts, r1);
  SampleBatch b2 = sample_planted_batch(net2, 150000, opts, r2);
  MomentIndices idx = MomentIndices::select(Activation::relu());
  Eigen::MatrixXd p1 = estimate_p2(b1, Eigen::VectorXd::Zero(d), idx);
  Eigen::MatrixXd p2 = estimate_p2(b2, Eigen::VectorXd::Zero(d), idx);
  // relu has p = 0, so the scale factor is 2^{p+1} = 2
  CHECK((p2 - 2.0 * p1).norm() < 0.05);
}

TEST_CASE("estimators are pure folds: shard means merge to the batch mean") {
  std::mt19937_64 rng(77);
  SampleBatch b = random_batch(999, 4, rng);
  Eigen::VectorXd alpha = random_unit_vector(4, rng);
  Eigen::MatrixXd v = random_orthonormal(4, 2, rng);
  MomentIndices idx = indices_for(4, 4, 3, 4);
  Eigen::MatrixXd whole = estimate_p2(b, alpha, idx);
  Tensor3 whole3 = estimate_r3(b, alpha, v, idx);
  // three shards of uneven size
  std::vector<std::pair<int, int>> cuts{{0, 100}, {100, 600}, {600, 999}};
  Eigen::MatrixXd merged = Eigen::MatrixXd::Zero(4, 4);
  Tensor3 merged3(2);
  for (auto [lo, hi] : cuts) {
    SampleBatch piece = b.slice(lo, hi);
    double w = static_cast<double>(hi - lo) / b.size();
    merged += w * estimate_p2(piece, alpha, idx);
    merged3 += estimate_r3(piece, alpha, v, idx) * w;
  }
  CHECK((whole - merged).cwiseAbs().maxCoeff() < 1e-10 * (1 + whole.cwiseAbs().maxCoeff()));
  CHECK(tensor_diff(whole3, merged3) < 1e-10 * (1 + whole3.max_abs()));
}

TEST_CASE("partition4 splits in stream order with extras up front") {
  std::mt19937_64 rng(1);
  SampleBatch b = random_batch(10, 2, rng);
  auto parts = b.partition4();
  CHECK(parts[0].size() == 3);
  CHECK(parts[1].size() == 3);
  CHECK(parts[2].size() == 2);
  CHECK(parts[3].size() == 2);
  CHECK(parts[0].x.row(0) == b.x.row(0));
  CHECK(parts[3].x.row(1) == b.x.row(9));
}

TEST_CASE("centering shifts labels but leaves estimators' expectations alone") {
  std::mt19937_64 rng(31);
  SampleBatch b = random_batch(50000, 4, rng);
  b.y.array() += 3.0;  // constant offset
  double mean = 0;
  SampleBatch c = b.centered(&mean);
  CHECK(mean == doctest::Approx(b.y.mean()));
  MomentIndices idx = indices_for(2, 3, 1, 2);
  Eigen::VectorXd alpha = random_unit_vector(4, rng);
  // constants perturb moment estimates only through sampling noise
  Eigen::MatrixXd pb = estimate_p2(b, alpha, idx);
  Eigen::MatrixXd pc = estimate_p2(c, alpha, idx);
  CHECK((pb - pc).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("estimators reject empty batches and bad subspaces") {
  SampleBatch empty;
  empty.x.resize(0, 3);
  empty.y.resize(0);
  MomentIndices idx = indices_for(2, 3, 1, 2);
  Eigen::VectorXd alpha = Eigen::VectorXd::Unit(3, 0);
  CHECK_THROWS_AS(estimate_p2(empty, alpha, idx), ValidationError);
  std::mt19937_64 rng(2);
  SampleBatch b = random_batch(10, 3, rng);
  Eigen::MatrixXd skew(3, 2);
  skew << 1, 1, 0, 1, 0, 0;
  CHECK_THROWS_AS(estimate_r3(b, alpha, skew, idx), ValidationError);
  CHECK_THROWS_AS(estimate_q2(b, alpha, skew, idx), ValidationError);
}
