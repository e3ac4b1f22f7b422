#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rmt/special_fn.hpp"

namespace rmt {

// SplitMix64 stream whose starting state is a hash of (seed, stream, index),
// so draw i of a run never depends on how the run was split between workers.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }
  result_type operator()();

 private:
  std::uint64_t state_;
};

enum class ModelKind { LaguerreBeta2, GaussianBeta2 };

// Laguerre: T = B^T B with B bidiagonal, d_k^2 ~ Gamma(alpha + n - k), e_k^2 ~ Gamma(n - 1 - k),
// eigenvalue law of the weight x^alpha e^{-x}.
// Gaussian: diagonal N(0, 1/2), off-diagonal b_k^2 ~ Gamma(n - k, 1/2), weight e^{-x^2}.
struct TridiagonalModel {
  ModelKind kind = ModelKind::LaguerreBeta2;
  int n = 1;
  double alpha = 0;
};

struct Tridiagonal {
  std::vector<double> diag, off;  // off[k] couples k and k + 1
};

Tridiagonal draw(const TridiagonalModel& m, CounterRng& rng);

// Eigenvalues strictly below x, from the signs of the LDL^T pivots.
int count_below(const Tridiagonal& T, double x);
// Largest eigenvalue by bisection on the Sturm count inside the Gershgorin interval.
double largest_eigenvalue(const Tridiagonal& T, double abs_tol = 1e-12);

struct ECDF {
  std::vector<double> sorted;
  std::uint64_t seed = 0, stream = 0;
  std::size_t N() const { return sorted.size(); }
  // fraction of samples <= x (right-continuous)
  double operator()(double x) const;
  double mean() const;
  double variance() const;
};

struct SampleOptions {
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  int threads = 1;
  std::uint64_t first_index = 0;  // offset into the (seed, stream) sequence
};

ECDF sample_max(const TridiagonalModel& m, std::size_t N, const SampleOptions& opts);
ECDF sample_lue_max(int n, double alpha, std::size_t N, const SampleOptions& opts);
ECDF sample_gue_max(int n, std::size_t N, const SampleOptions& opts);

// Order-independent merge; both inputs must share seed and stream.
ECDF merge(const ECDF& a, const ECDF& b);

double ks_statistic(const ECDF& e, const std::function<double(double)>& cdf);
// 1.36 * 1.5 / sqrt(N)
double ks_threshold(std::size_t N);
// Asymptotic Kolmogorov tail probability with the Stephens small-N correction.
double ks_pvalue(double distance, std::size_t N);

// Piecewise-linear table of a CDF on a uniform grid, clamped to [0, 1] outside.
struct TabulatedCDF {
  std::vector<double> t, F;
  double operator()(double x) const;
};
TabulatedCDF tabulate_cdf(const std::function<double(double)>& cdf, double t_min, double t_max, int points);

// Analytic CDFs at modest precision for the goodness-of-fit runs.
TabulatedCDF lue_cdf_table(int n, double alpha, double t_max, int points, const PrecisionContext& ctx);
// P(lambda_max <= t) for the weight e^{-x^2}, from ln D_n(t) - ln D_n(inf).
TabulatedCDF gue_cdf_table(int n, double t_min, double t_max, int points, const PrecisionContext& ctx);

}  // namespace rmt
