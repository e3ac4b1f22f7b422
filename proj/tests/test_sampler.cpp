#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "rmt/sampler.hpp"
#include "rmt/softedge.hpp"

using namespace rmt;

namespace {

ECDF uniform_sample(std::uint64_t seed, std::size_t N) {
  ECDF e;
  e.seed = seed;
  for (std::size_t i = 0; i < N; ++i) {
    CounterRng rng(seed, 0, i);
    e.sorted.push_back((rng() >> 11) * 0x1.0p-53);
  }
  std::sort(e.sorted.begin(), e.sorted.end());
  return e;
}

}  // namespace

TEST(CounterRng, KeyedBySeedStreamAndIndex) {
  CounterRng a(1, 0, 5), b(1, 0, 5), c(1, 1, 5), d(1, 0, 6), e(2, 0, 5);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  EXPECT_NE(x, e());
}

TEST(Sturm, AgreesWithADenseEigensolver) {
  for (int n : {1, 2, 7, 40}) {
    for (ModelKind kind : {ModelKind::LaguerreBeta2, ModelKind::GaussianBeta2}) {
      CounterRng rng(9, 0, n);
      const Tridiagonal T = draw({kind, n, 1.5}, rng);
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
      for (int k = 0; k < n; ++k) M(k, k) = T.diag[k];
      for (int k = 0; k + 1 < n; ++k) M(k, k + 1) = M(k + 1, k) = T.off[k];
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M).eigenvalues();
      EXPECT_NEAR(largest_eigenvalue(T), ev(n - 1), 1e-11 * std::max(1.0, std::abs(ev(n - 1)))) << n;
      for (int k = 0; k < n; ++k) {
        EXPECT_EQ(count_below(T, ev(k) - 1e-8), k);
        EXPECT_EQ(count_below(T, ev(k) + 1e-8), k + 1);
      }
    }
  }
  EXPECT_THROW(largest_eigenvalue(Tridiagonal{}), DomainError);
}

TEST(Sampler, SingleLaguerreEigenvalueIsExponential) {
  const std::size_t N = 40000;
  const ECDF e = sample_lue_max(1, 0, N, {});
  EXPECT_NEAR(e(std::log(2.0)), 0.5, 3 / std::sqrt(double(N)));
  EXPECT_NEAR(e.mean(), 1.0, 0.03);
}

TEST(Sampler, SingleGaussianEigenvalue) {
  const std::size_t N = 40000;
  const ECDF e = sample_gue_max(1, N, {});
  EXPECT_LE(ks_statistic(e, [](double t) { return 0.5 * (1 + std::erf(t)); }), ks_threshold(N));
  EXPECT_NEAR(e.variance(), 0.5, 0.02);
}

TEST(Sampler, ReproducibleAcrossThreadCounts) {
  const ECDF one = sample_lue_max(6, 0.5, 3000, {42, 3, 1, 0});
  const ECDF four = sample_lue_max(6, 0.5, 3000, {42, 3, 4, 0});
  EXPECT_EQ(one.sorted, four.sorted);
  EXPECT_NE(one.sorted, sample_lue_max(6, 0.5, 3000, {43, 3, 1, 0}).sorted);
  // index ranges merge back into the full run in either order
  const ECDF lo = sample_lue_max(6, 0.5, 1000, {42, 3, 2, 0});
  const ECDF hi = sample_lue_max(6, 0.5, 2000, {42, 3, 2, 1000});
  EXPECT_EQ(merge(lo, hi).sorted, one.sorted);
  EXPECT_EQ(merge(hi, lo).sorted, one.sorted);
  EXPECT_THROW(merge(lo, sample_lue_max(6, 0.5, 10, {7, 3, 1, 0})), DomainError);
  EXPECT_THROW(sample_lue_max(0, 0.5, 10, {}), DomainError);
  EXPECT_THROW(sample_lue_max(2, -1.0, 10, {}), DomainError);
}

TEST(KolmogorovSmirnov, SelfAndShifted) {
  const ECDF e = uniform_sample(5, 1000);
  EXPECT_LE(ks_statistic(e, [&](double x) { return e(x); }), 1.0 / e.N() + 1e-15);
  EXPECT_GT(ks_statistic(e, [](double x) { return std::clamp(x - 0.2, 0.0, 1.0); }), 0.15);
  EXPECT_GT(ks_pvalue(0.001, 1000), 0.99);
  EXPECT_LT(ks_pvalue(0.1, 1000), 1e-6);
}

TEST(KolmogorovSmirnov, UniformPassRateOverSeeds) {
  const std::size_t N = 10000;
  int pass = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    if (ks_statistic(uniform_sample(seed, N), [](double x) { return std::clamp(x, 0.0, 1.0); }) < ks_threshold(N)) ++pass;
  EXPECT_GE(pass, 95);
}

TEST(Sampler, TwoByTwoLaguerreMatchesTheAnalyticCDF) {
  const TabulatedCDF cdf = lue_cdf_table(2, 1, 40, 801, PrecisionContext(20));
  // p > 0.01 fails with probability 0.01 per seed; 3 or more of 20 has probability 1e-3
  int fail = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ECDF e = sample_lue_max(2, 1, 5000, {seed, 0, 1, 0});
    if (ks_pvalue(ks_statistic(e, std::cref(cdf)), e.N()) <= 0.01) ++fail;
  }
  EXPECT_LE(fail, 2);
}

TEST(Sampler, FourByFourGaussianMatchesTheAnalyticCDF) {
  const TabulatedCDF cdf = gue_cdf_table(4, -3, 6, 451, PrecisionContext(20));
  EXPECT_NEAR(cdf(-3), 0, 1e-6);
  EXPECT_NEAR(cdf(6), 1, 1e-12);
  const ECDF e = sample_gue_max(4, 50000, {3, 0, 1, 0});
  EXPECT_LE(ks_statistic(e, std::cref(cdf)), ks_threshold(e.N()));
}

TEST(Sampler, ScaledMaximaApproachTheSoftEdgeLaw) {
  const SoftEdgeGrid grid = solve_sigma_pii();
  auto tw = [&](double s) {
    if (s <= grid.s_min) return 0.0;
    if (s >= grid.s_max) return 1.0;
    return std::exp(log_cdf_at(grid, s));
  };
  double prev = 1;
  for (int n : {25, 50, 100}) {
    ECDF e = sample_lue_max(n, 0, 40000, {1, 0, 1, 0});
    const double c2 = std::pow(4.0, 2.0 / 3) * std::pow(double(n), 1.0 / 3);
    for (double& x : e.sorted) x = (x - 4.0 * n) / c2;
    const double d = ks_statistic(e, tw);
    EXPECT_LT(d, prev) << n;
    prev = d;
    if (n == 100) EXPECT_NEAR(e.mean(), tw_mean(grid), 0.1);
  }
}
