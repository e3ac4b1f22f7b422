#include "rmt/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "rmt/gue_ensemble.hpp"
#include "rmt/lue_ensemble.hpp"

namespace rmt {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  state_ = mix(mix(mix(seed) ^ (stream + 0x632be59bd9b4e019ull)) ^ (index + 0x85157af5ull));
}

CounterRng::result_type CounterRng::operator()() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Tridiagonal draw(const TridiagonalModel& m, CounterRng& rng) {
  const int n = m.n;
  Tridiagonal T;
  T.diag.assign(n, 0.0);
  T.off.assign(n > 0 ? n - 1 : 0, 0.0);
  if (m.kind == ModelKind::LaguerreBeta2) {
    std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
    for (int k = 0; k < n; ++k) d[k] = std::sqrt(boost::random::gamma_distribution<double>(m.alpha + n - k, 1.0)(rng));
    for (int k = 0; k + 1 < n; ++k) e[k] = std::sqrt(boost::random::gamma_distribution<double>(n - 1 - k, 1.0)(rng));
    for (int k = 0; k < n; ++k) T.diag[k] = d[k] * d[k] + (k > 0 ? e[k - 1] * e[k - 1] : 0.0);
    for (int k = 0; k + 1 < n; ++k) T.off[k] = d[k] * e[k];
  } else {
    boost::random::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    for (int k = 0; k < n; ++k) T.diag[k] = normal(rng);
    for (int k = 0; k + 1 < n; ++k) T.off[k] = std::sqrt(boost::random::gamma_distribution<double>(n - 1 - k, 0.5)(rng));
  }
  return T;
}

int count_below(const Tridiagonal& T, double x) {
  int count = 0;
  double q = 1;
  const std::size_t n = T.diag.size();
  for (std::size_t k = 0; k < n; ++k) {
    q = (T.diag[k] - x) - (k > 0 ? T.off[k - 1] * T.off[k - 1] / q : 0.0);
    // an exact zero pivot is nudged, which counts x as just above the eigenvalue
    if (q == 0) q = -1e-300;
    if (q < 0) ++count;
  }
  return count;
}

double largest_eigenvalue(const Tridiagonal& T, double abs_tol) {
  const std::size_t n = T.diag.size();
  if (n == 0) throw DomainError("largest_eigenvalue: empty matrix");
  double lo = T.diag[0], hi = T.diag[0];
  for (std::size_t k = 0; k < n; ++k) {
    const double r = (k > 0 ? std::abs(T.off[k - 1]) : 0.0) + (k + 1 < n ? std::abs(T.off[k]) : 0.0);
    lo = std::min(lo, T.diag[k] - r);
    hi = std::max(hi, T.diag[k] + r);
  }
  const int all = static_cast<int>(n);
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(T, mid) == all)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double ECDF::operator()(double x) const {
  if (sorted.empty()) return 0;
  return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin()) / sorted.size();
}

double ECDF::mean() const {
  if (sorted.empty()) return 0;
  return std::accumulate(sorted.begin(), sorted.end(), 0.0) / sorted.size();
}

double ECDF::variance() const {
  if (sorted.size() < 2) return 0;
  const double m = mean();
  double s = 0;
  for (double x : sorted) s += (x - m) * (x - m);
  return s / (sorted.size() - 1);
}

ECDF sample_max(const TridiagonalModel& m, std::size_t N, const SampleOptions& opts) {
  if (m.n < 1) throw DomainError("sample_max: n must be at least 1");
  if (m.kind == ModelKind::LaguerreBeta2 && !(m.alpha > -1)) throw DomainError("sample_max: alpha must exceed -1");
  std::vector<double> out(N);
  const int workers = std::max(1, std::min<int>(opts.threads, static_cast<int>(std::max<std::size_t>(N, 1))));
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      CounterRng rng(opts.seed, opts.stream, opts.first_index + i);
      out[i] = largest_eigenvalue(draw(m, rng));
    }
  };
  if (workers == 1) {
    run(0, N);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, N * w / workers, N * (w + 1) / workers);
    for (std::thread& th : pool) th.join();
  }
  std::sort(out.begin(), out.end());
  ECDF e;
  e.sorted = std::move(out);
  e.seed = opts.seed;
  e.stream = opts.stream;
  return e;
}

ECDF sample_lue_max(int n, double alpha, std::size_t N, const SampleOptions& opts) {
  return sample_max({ModelKind::LaguerreBeta2, n, alpha}, N, opts);
}

ECDF sample_gue_max(int n, std::size_t N, const SampleOptions& opts) {
  return sample_max({ModelKind::GaussianBeta2, n, 0}, N, opts);
}

ECDF merge(const ECDF& a, const ECDF& b) {
  if (a.seed != b.seed || a.stream != b.stream) throw DomainError("merge: samples come from different keys");
  ECDF e;
  e.seed = a.seed;
  e.stream = a.stream;
  e.sorted.resize(a.N() + b.N());
  std::merge(a.sorted.begin(), a.sorted.end(), b.sorted.begin(), b.sorted.end(), e.sorted.begin());
  return e;
}

double ks_statistic(const ECDF& e, const std::function<double(double)>& cdf) {
  const double N = static_cast<double>(e.N());
  double d = 0;
  for (std::size_t i = 0; i < e.N(); ++i) {
    const double F = cdf(e.sorted[i]);
    d = std::max({d, (i + 1) / N - F, F - i / N});
  }
  return d;
}

double ks_threshold(std::size_t N) { return 1.36 * 1.5 / std::sqrt(static_cast<double>(N)); }

double ks_pvalue(double distance, std::size_t N) {
  const double rn = std::sqrt(static_cast<double>(N));
  const double lam = (rn + 0.12 + 0.11 / rn) * distance;
  if (lam < 0.2) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lam * lam);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double TabulatedCDF::operator()(double x) const {
  if (x <= t.front()) return F.front();
  if (x >= t.back()) return F.back();
  const double h = (t.back() - t.front()) / (t.size() - 1);
  const std::size_t i = std::min(t.size() - 2, static_cast<std::size_t>((x - t.front()) / h));
  const double u = (x - t[i]) / (t[i + 1] - t[i]);
  return F[i] + u * (F[i + 1] - F[i]);
}

TabulatedCDF tabulate_cdf(const std::function<double(double)>& cdf, double t_min, double t_max, int points) {
  if (points < 2 || !(t_max > t_min)) throw DomainError("tabulate_cdf: need at least two points on a proper interval");
  TabulatedCDF tab;
  tab.t.resize(points);
  tab.F.resize(points);
  for (int i = 0; i < points; ++i) {
    tab.t[i] = t_min + (t_max - t_min) * i / (points - 1);
    tab.F[i] = std::clamp(cdf(tab.t[i]), 0.0, 1.0);
  }
  return tab;
}

TabulatedCDF lue_cdf_table(int n, double alpha, double t_max, int points, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx);
  const Real a(alpha);
  return tabulate_cdf(
      [&](double t) { return t <= 0 ? 0.0 : largest_eigenvalue_cdf(n, a, Real(t), ctx).convert_to<double>(); }, 0.0,
      t_max, points);
}

TabulatedCDF gue_cdf_table(int n, double t_min, double t_max, int points, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx);
  // ln D_n(inf) = sum_j ln(sqrt(pi) j! / 2^j)
  Real full = 0;
  for (int j = 0; j < n; ++j) full += log(sqrt(pi(ctx))) + lgamma(Real(j + 1)) - j * log(Real(2));
  return tabulate_cdf(
      [&](double t) {
        const GUEChain c = gue_chain(Real(t), n, ctx);
        return exp(c.log_det[n] - full).convert_to<double>();
      },
      t_min, t_max, points);
}

}  // namespace rmt
