// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "rmt/chazy.hpp"
#include "rmt/frobenius.hpp"
#include "rmt/gue_ensemble.hpp"
#include "rmt/identity_lab.hpp"
#include "rmt/sampler.hpp"
#include "rmt/softedge.hpp"
#include "rmt/wavefunction.hpp"

using namespace rmt;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::vector<Real> reals(std::initializer_list<const char*> xs) {
  std::vector<Real> out;
  for (const char* x : xs) out.emplace_back(x);
  return out;
}

double worst_relative(const std::vector<ResidualReport>& reps, std::string* where = nullptr) {
  double w = 0;
  for (const ResidualReport& r : reps) {
    const double v = r.relative.convert_to<double>();
    if (!(v <= w)) {
      w = v;
      if (where) *where = r.identity_id + " n=" + std::to_string(r.n) + " t=" + r.t.str(6);
    }
  }
  return w;
}

const SoftEdgeGrid& softedge_grid() {
  static const SoftEdgeGrid g = solve_sigma_pii(-12, 12, 2401, 1e-10);
  return g;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

void identity_suite(Outcome& o) {
  const PrecisionContext ctx(60);
  PrecisionGuard guard(ctx);
  const auto reps = identity_sweep({1, 2, 3, 4, 5, 6, 7, 8}, reals({"0.1", "0.5", "1", "2.3"}),
                                   reals({"0.5", "1", "2", "4", "8", "16"}), ctx,
                                   SweepOptions{pow(Real(10), -20), true});
  std::string where;
  const double w = worst_relative(reps, &where);
  o.detail << reps.size() << " residuals, worst " << w << " (" << where << ")";
  o.require(w <= 1e-30, "relative residual <= 1e-30");
}

void gue_suite(Outcome& o) {
  const PrecisionContext ctx(60);
  PrecisionGuard guard(ctx);
  const auto reps = gue_sweep({1, 2, 3, 4, 5, 6}, reals({"-2", "-1", "0", "1", "2", "3", "4"}), pow(Real(10), -20), ctx);
  std::string where;
  const double w = worst_relative(reps, &where);
  o.detail << reps.size() << " residuals, worst " << w << " (" << where << ")";
  o.require(w <= 1e-25, "relative residual <= 1e-25");
}

void softedge_tails(Outcome& o) {
  const SoftEdgeGrid& g = softedge_grid();
  const TailValue left = tail_eval(TailSide::Left, -8), right = tail_eval(TailSide::Right, 8);
  const double sl = rel(sample(g, -8).sigma, left.sigma);
  const double sr = std::abs(sample(g, 8).sigma - right.sigma);
  const double ll = rel(log_cdf_at(g, -8), left.log_cdf);
  const double pr = std::abs(std::exp(log_cdf_at(g, 8)) - right.cdf);
  o.detail << "sigma(-8) rel " << sl << ", sigma(8) abs " << sr << ", lnP(-8) rel " << ll << ", P(8) abs " << pr
           << ", solver residual " << g.max_residual;
  o.require(sl <= 1e-6, "left sigma");
  o.require(sr <= 1e-8, "right sigma");
  o.require(ll <= 1e-4, "left ln P");
  o.require(pr <= 1e-6, "right P");
}

void convergence(Outcome& o) {
  const PrecisionContext ctx(80);
  PrecisionGuard guard(ctx);
  const std::vector<double> ss{-2, 0, 2};
  const auto rows = convergence_experiment({20, 40, 80}, Real(1), ss, ScalingRegime::Finite, softedge_grid(), ctx);
  int checked = 0;
  for (const ConvergenceRow& a : rows) {
    if (a.n != 20) continue;
    double prev = a.deviation;
    for (int n : {40, 80}) {
      const auto b = std::find_if(rows.begin(), rows.end(), [&](const ConvergenceRow& r) {
        return r.n == n && r.s == a.s && r.quantity == a.quantity;
      });
      if (b == rows.end()) {
        o.require(false, "missing row");
        return;
      }
      o.require(b->deviation < prev, std::string(scaled_quantity_name(a.quantity)) + " at s=" + std::to_string(a.s));
      prev = b->deviation;
    }
    ++checked;
  }
  o.detail << checked << " (quantity, s) sequences at n = 20, 40, 80";
  o.require(checked == 15, "15 sequences");
}

void wave_functions(Outcome& o) {
  const PrecisionContext ctx(60);
  PrecisionGuard guard(ctx);
  std::vector<ResidualReport> reps;
  const auto zs_lue = reals({"0.3", "1.1", "2.7", "3.6", "5.5", "9"});
  for (int n : {1, 2, 3, 5})
    for (const char* t : {"2", "4", "8"}) {
      const auto r = phi_ode_residual_lue(n, Real("1.5"), Real(t), zs_lue, ctx);
      reps.insert(reps.end(), r.begin(), r.end());
    }
  const auto zs_gue = reals({"-2.5", "-0.7", "0.35", "1.3", "2.9", "4.4"});
  for (int n : {1, 2, 3, 5})
    for (const char* t : {"-1", "0.5", "2"}) {
      const auto r = phi_ode_residual_gue(n, Real(t), zs_gue, ctx);
      reps.insert(reps.end(), r.begin(), r.end());
    }
  std::string where;
  const double w = worst_relative(reps, &where);
  const SoftEdgeGrid& g = softedge_grid();
  double sum_id = 0, pain_id = 0;
  for (std::size_t i = 0; i < g.s.size(); ++i) {
    const auto c = limit_ode_coeffs(g.s[i], g.d_sigma[i], g.dd_sigma[i]);
    sum_id = std::max(sum_id, c.sum_identity);
    pain_id = std::max(pain_id, c.painleve_identity);
  }
  o.detail << reps.size() << " phi residuals, worst " << w << " (" << where << "); limit identities " << sum_id
           << ", " << pain_id << " over " << g.s.size() << " grid points";
  o.require(w <= 1e-25, "phi residual <= 1e-25");
  o.require(sum_id <= 1e-10 && pain_id <= 1e-10, "limit identities <= 1e-10");
}

void frobenius(Outcome& o) {
  const PrecisionContext ctx(60);
  PrecisionGuard guard(ctx);
  const SoftEdgeGrid& g = softedge_grid();
  Real worst_series = 0;
  double worst_tail = 0, worst_connection = 0;
  for (double s : {-2.0, 0.0, 0.7}) {
    const auto p = sample(g, s);
    const LimitODECoeffs lc = limit_ode_coeffs(s, p.d_sigma, p.dd_sigma);
    const FrobeniusCoeffs k = frobenius_coeffs(lc, ctx);
    const auto z = series_zero(k, Real(0), 100, true, ctx);
    const auto two = series_one(k, 2, 100, false, ctx);
    const auto null = series_one(k, 0, 100, true, ctx);
    for (const char* x : {"0.02", "0.05", "0.1"}) {
      worst_series = max(worst_series, series_residual(z, Real(x), false).relative);
      worst_series = max(worst_series, series_residual(z, Real(x), true).relative);
    }
    for (const char* x : {"0.9", "0.95", "1.05", "1.1"}) {
      worst_series = max(worst_series, series_residual(two, Real(x), false).relative);
      worst_series = max(worst_series, series_residual(null, Real(x), true).relative);
    }
    o.require(std::all_of(null.c.begin(), null.c.end(), [](const Real& c) { return c == 0; }),
              "null coefficients at s=" + std::to_string(s));

    const Real tau("0.25");
    const auto zt = series_zero(k, tau, 800, true, ctx);
    const auto t0 = tail_zero(k, tau, 14, ctx);
    const auto two_long = series_one(k, 2, 400, false, ctx);
    const auto null_long = series_one(k, 0, 400, true, ctx);
    const auto t1 = tail_one(k, 2, 14, ctx);
    for (int l = 4; l <= 7; ++l) {
      worst_tail = std::max(worst_tail, std::abs(tail_match(zt, t0, 50, 200, l).exponent - (l + 1)));
      worst_tail = std::max(worst_tail, std::abs(tail_match_companion(zt, t0, 200, 700, l, 25).exponent - (l + 1)));
      worst_tail = std::max(worst_tail, std::abs(tail_match(two_long, t1, 50, 200, l).exponent - (l + 1)));
      worst_tail = std::max(worst_tail, std::abs(tail_match_companion(null_long, t1, 50, 200, l).exponent - (l + 1)));
    }
    const auto c = crosscheck_integration(lc, 0.5, 200, ctx);
    worst_connection = std::max({worst_connection, c.series_mismatch.convert_to<double>(),
                                 c.integrator_mismatch.convert_to<double>()});
  }
  o.detail << "series residual " << worst_series.convert_to<double>() << ", tail exponent offset " << worst_tail
           << ", connection mismatch " << worst_connection;
  o.require(worst_series <= Real("1e-20"), "series residual <= 1e-20");
  o.require(worst_tail <= 0.5, "tail exponents within 0.5");
  o.require(worst_connection <= 1e-8, "connection <= 1e-8");
}

void chazy(Outcome& o) {
  int tuples = 0, mismatches = 0;
  const std::vector<Rational> alphas{Rational(0), Rational(1), Rational(3, 2), Rational(7, 3)};
  const std::vector<Rational> bs{Rational(0), Rational(1, 2), Rational(2), Rational(-3, 4)};
  for (const ExampleSpec& e : example_table())
    for (int n = 1; n <= 6; ++n)
      for (const Rational& a : alphas)
        for (const Rational& b : bs) {
          const auto m = mapped_params(e, n, a, b), d = displayed_params(e.id, n, a, b);
          ++tuples;
          mismatches += !(m.member == d.member && m.alpha1 == d.alpha1 && m.beta1_re == d.beta1_re &&
                          m.beta1_im == d.beta1_im && m.gamma1 == d.gamma1);
        }
  o.require(mismatches == 0, std::to_string(mismatches) + " tuple mismatches");

  const PrecisionContext ctx(60);
  PrecisionGuard guard(ctx);
  Real rho_worst = 0, second_worst = 0, first_worst = 0;
  std::vector<Real> lue_ts, gue_ts;
  for (int i = 1; i <= 10; ++i) lue_ts.emplace_back(i);
  for (int i = -4; i <= 8; ++i) gue_ts.push_back(Real(i) / 2);
  for (int n : {1, 2, 3, 4})
    for (const char* a : {"0.5", "1", "2.3"}) {
      const Real alpha(a);
      const SigmaFormPV nu{0, Real(n), n + alpha};
      const auto path = lue_rho_path(n, alpha, lue_ts, ctx);
      for (const RhoSample& p : path) rho_worst = max(rho_worst, rho_ode_residual_pv(nu, p).relative);
      second_worst = max(second_worst, chazy_second_residual(chazy_second_params(nu), nu, path, ctx).worst);
    }
  for (int n : {1, 2, 3, 4, 5, 6}) {
    const SigmaFormPIV nu{0, Real(2 * n)};
    const auto path = gue_rho_path(n, gue_ts, ctx);
    for (const RhoSample& p : path) rho_worst = max(rho_worst, rho_ode_residual_piv(nu, p).relative);
    first_worst = max(first_worst, chazy_first_residual(chazy_first_params(nu), nu, path).worst);
  }
  o.detail << tuples << " exact tuples, " << mismatches << " mismatches; rho residual "
           << rho_worst.convert_to<double>() << ", Chazy second member " << second_worst.convert_to<double>()
           << ", first member " << first_worst.convert_to<double>();
  o.require(rho_worst <= Real("1e-25"), "rho residual <= 1e-25");
  o.require(first_worst <= Real("1e-25"), "first member <= 1e-25");
  o.require(second_worst <= Real("1e-15"), "second member <= 1e-15");
}

void monte_carlo(Outcome& o) {
  const PrecisionContext ctx(30);
  const std::size_t N = 200000;
  SampleOptions opts;
  opts.seed = 20260101;
  opts.threads = std::max(2u, std::thread::hardware_concurrency());
  const ECDF lue = sample_lue_max(5, 1.0, N, opts);
  const TabulatedCDF ref = lue_cdf_table(5, 1.0, std::max(60.0, lue.sorted.back() + 1), 6001, ctx);
  const double d = ks_statistic(lue, ref), thr = ks_threshold(N);

  const int n = 100;
  const ECDF big = sample_lue_max(n, 0.0, 20000, opts);
  const ScalingMap map = scaling_map(n, 0.0, ScalingRegime::Finite);
  double mean = 0;
  for (double x : big.sorted) mean += (x - map.c1 * n) / (map.c2 * std::cbrt(double(n)));
  mean /= big.N();
  const double tw = tw_mean(softedge_grid());
  o.detail << "KS " << d << " vs " << thr << " (p " << ks_pvalue(d, N) << "), scaled n=100 mean " << mean
           << " vs " << tw;
  o.require(d < thr, "KS distance");
  o.require(std::abs(mean - tw) <= 0.1, "scaled mean within 0.1");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"identity suite", identity_suite}, {"GUE suite", gue_suite},   {"soft-edge tails", softedge_tails},
      {"convergence", convergence},       {"wave functions", wave_functions}, {"Frobenius", frobenius},
      {"Chazy", chazy},                   {"Monte Carlo", monte_carlo}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("criterion %zu %s: %s (%.1f s) %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
