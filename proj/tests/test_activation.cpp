#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "momrl/activation.hpp"
#include "momrl/errors.hpp"
#include "momrl/moment_estimators.hpp"
#include "oracles.hpp"

using namespace momrl;

TEST_CASE("relu gammas match half-normal closed forms") {
  Activation act = Activation::relu();
  for (double s : {0.5, 1.0, 2.0}) {
    for (int j = 0; j <= 4; ++j) {
      CHECK(act.gamma(j, s) == doctest::Approx(oracle::gamma_relu(j, s)).epsilon(0).scale(1).epsilon(1e-10));
    }
  }
  CHECK(act.m_coeff(1, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(act.m_coeff(3, 1.0)) < 1e-10);  // j3 = 4 for relu
  CHECK(act.m_coeff(2, 1.0) == doctest::Approx(1.0 / oracle::kSq2Pi).epsilon(1e-10));
  CHECK(act.m_coeff(4, 1.0) == doctest::Approx(-1.0 / oracle::kSq2Pi).epsilon(1e-10));
}

TEST_CASE("leaky and squared relu gammas match closed forms") {
  Activation leaky = Activation::leaky_relu(0.01);
  Activation sq = Activation::squared_relu();
  for (double s : {0.5, 1.0, 2.0}) {
    for (int j = 0; j <= 4; ++j) {
      CHECK(leaky.gamma(j, s) ==
            doctest::Approx(oracle::gamma_leaky(j, s, 0.01)).epsilon(1e-9));
      CHECK(sq.gamma(j, s) ==
            doctest::Approx(oracle::gamma_squared_relu(j, s)).epsilon(1e-9));
    }
  }
}

TEST_CASE("cubic power gammas match full-normal closed forms") {
  Activation cubic = Activation::power(3);
  for (double s : {0.5, 1.0, 2.0})
    for (int j = 0; j <= 4; ++j)
      CHECK(cubic.gamma(j, s) ==
            doctest::Approx(oracle::gamma_power(j, s, 3)).epsilon(1e-9));
}

TEST_CASE("quadrature agrees with monte carlo within sampling error") {
  Activation act = Activation::relu();
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0, 1);
  const int n = 2'000'000;
  for (double s : {0.5, 1.0, 2.0}) {
    for (int j = 0; j <= 2; ++j) {
      double sum = 0, sum2 = 0;
      for (int i = 0; i < n; ++i) {
        double z = g(rng);
        double powz = std::pow(z, j);
        double v = act.value(s * z) * powz;
        sum += v;
        sum2 += v * v;
      }
      double mean = sum / n;
      double sem = std::sqrt((sum2 / n - mean * mean) / n);
      CHECK(std::abs(act.gamma(j, s) - mean) < 5 * sem + 1e-12);
    }
  }
}

TEST_CASE("homogeneity: m_j(2s) = 2^{p+1} m_j(s)") {
  for (auto act : {Activation::relu(), Activation::leaky_relu(0.01),
                   Activation::squared_relu(), Activation::power(3)}) {
    double scale = std::pow(2.0, act.growth_exponent() + 1);
    for (int j = 1; j <= 4; ++j) {
      double lhs = act.m_coeff(j, 2.0);
      double rhs = scale * act.m_coeff(j, 1.0);
      CHECK(std::abs(lhs - rhs) < 1e-7 * (1 + std::abs(rhs)));
    }
  }
}

TEST_CASE("derivative bound and rho positivity on a grid") {
  for (auto act : {Activation::relu(), Activation::leaky_relu(0.01),
                   Activation::squared_relu()}) {
    for (double x = -4.0; x <= 4.0; x += 0.37) {
      double dp = act.derivative(x);
      CHECK(dp >= 0.0);
      CHECK(dp <= act.l1_constant() * std::pow(std::abs(x), act.growth_exponent()) + 1e-12);
    }
    for (double z : {0.25, 0.5, 1.0, 2.0, 4.0}) CHECK(act.rho(z) > 0.0);
  }
}

TEST_CASE("relu rho closed form") {
  // alpha0 = 1/2, alpha1 = 1/sqrt(2 pi), alpha2 = 1/2, beta0 = beta2 = 1/2
  Activation act = Activation::relu();
  double a1 = 1.0 / oracle::kSq2Pi;
  double expect = std::min(0.25 - a1 * a1, 0.5 - 0.25 - a1 * a1);
  CHECK(act.rho(1.0) == doctest::Approx(expect).epsilon(1e-9));
  CHECK(act.alpha_q(0, 2.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(act.beta_q(2, 0.7) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("moment index selection per activation") {
  MomentIndices relu = MomentIndices::select(Activation::relu());
  CHECK(relu.j2 == 2);
  CHECK(relu.j3 == 4);
  CHECK(relu.l1 == 1);
  CHECK(relu.l2 == 2);

  MomentIndices sq = MomentIndices::select(Activation::squared_relu());
  CHECK(sq.j2 == 2);
  CHECK(sq.j3 == 3);
  CHECK(sq.l1 == 1);
  CHECK(sq.l2 == 2);

  // odd cubic: M2 = M4 = 0 branch
  MomentIndices cubic = MomentIndices::select(Activation::power(3));
  CHECK(cubic.j2 == 3);
  CHECK(cubic.j3 == 3);
  CHECK(cubic.l1 == 1);
  CHECK(cubic.l2 == 3);

  // pure square: M3 = M4 = 0 violates the nonvanishing assumption
  CHECK_THROWS_AS(MomentIndices::select(Activation::power(2)), ValidationError);
}

TEST_CASE("gamma rejects bad input") {
  CHECK_THROWS_AS(Activation::relu().gamma(1, 0.0), ValidationError);
  CHECK_THROWS_AS(Activation::relu().gamma(1, -1.0), ValidationError);
}
