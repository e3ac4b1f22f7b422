#include "rmt/lue_ensemble.hpp"

#include <boost/math/special_functions/factorials.hpp>

#include <algorithm>
#include <cmath>

namespace rmt {

WeightSpec WeightSpec::laguerre(const Real& alpha, const Real& t) {
  if (boost::multiprecision::isnan(alpha) || alpha < 0) throw DomainError("Laguerre exponent must be >= 0");
  if (boost::multiprecision::isnan(t) || !(t > 0)) throw DomainError("cutoff t must be > 0");
  WeightSpec s;
  s.kind = WeightKind::LaguerreCutoff;
  s.alpha = alpha;
  s.t = t;
  return s;
}

Real WeightSpec::w(const Real& x) const {
  if (kind == WeightKind::HermiteCutoff) return exp(-x * x);
  if (alpha == 0) return exp(-x);
  if (x == 0) return Real(0);
  return exp(alpha * log(x) - x);
}

Real WeightSpec::v(const Real& x) const {
  if (kind == WeightKind::HermiteCutoff) return x * x;
  if (alpha == 0) return x;
  return x - alpha * log(x);
}

MomentTable moments(const WeightSpec& spec, int kmax, const PrecisionContext& ctx) {
  if (spec.kind != WeightKind::LaguerreCutoff) throw DomainError("moments: Laguerre weight only");
  if (kmax < 0) throw DomainError("moments: kmax < 0");
  PrecisionGuard g(ctx);
  MomentTable m;
  m.kmax = kmax;
  const Real a = at_precision(spec.alpha, ctx), t = at_precision(spec.t, ctx);
  for (int k = 0; k <= kmax; ++k) m.mu.push_back(lower_incomplete_gamma(a + k + 1, t, ctx));
  return m;
}

Real hankel_det(const MomentTable& m, int n, const PrecisionContext& ctx) {
  if (n < 1) throw DomainError("hankel_det: n < 1");
  if (2 * n - 2 > m.kmax) throw DomainError("hankel_det: moment table too short");
  PrecisionGuard g(ctx);
  std::vector<std::vector<Real>> a(n, std::vector<Real>(n));
  Real hadamard = 1;
  for (int i = 0; i < n; ++i) {
    Real row = 0;
    for (int j = 0; j < n; ++j) {
      a[i][j] = at_precision(m.mu[i + j], ctx);
      row += a[i][j] * a[i][j];
    }
    hadamard *= sqrt(row);
  }
  Real det = 1;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (abs(a[i][k]) > abs(a[p][k])) p = i;
    if (a[p][k] == 0) throw ConditioningAlarm("hankel_det: singular moment matrix");
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (int i = k + 1; i < n; ++i) {
      Real f = a[i][k] / a[k][k];
      for (int j = k + 1; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  // Hadamard ratio bounds the amplification of rounding in the elimination.
  Real est = n * ctx.epsilon() * hadamard / abs(det);
  if (est > pow(Real(10), -ctx.digits() / 2)) throw ConditioningAlarm("hankel_det: moment matrix too ill-conditioned");
  return det;
}

namespace {

// Upper integration limit: beyond it x^{2 n_max + alpha + 1} e^{-x} is below
// 10^-(digits+10) of its total mass.
double effective_cutoff(const WeightSpec& spec, int n_max, const PrecisionContext& ctx) {
  const double k = 2.0 * n_max + spec.alpha.convert_to<double>() + 1;
  const double target = -(ctx.digits() + 10) * std::log(10.0);
  double x = std::max(k, 1.0);
  while (k * std::log(x) - x - std::lgamma(k + 1) > target) x += 1;
  return x;
}

MeshLayout initial_layout(const WeightSpec& spec, double T, int n_max, const PrecisionContext& ctx) {
  std::vector<double> abs_breaks{0.0};
  const double alpha = spec.alpha.convert_to<double>();
  double start = 0;
  if (alpha != std::floor(alpha)) {
    // geometric panels toward the x^alpha endpoint singularity
    const double b = std::min(1.0, T / 2);
    const int K = static_cast<int>(
        std::ceil(((ctx.digits() + 5) * std::log(10.0) / (alpha + 1) + std::log(b)) / std::log(2.0)));
    for (int k = std::max(K, 1); k >= 1; --k) abs_breaks.push_back(std::ldexp(b, -k));
    abs_breaks.push_back(b);
    start = b;
  }
  const int panels = std::max(1, static_cast<int>(std::ceil((T - start) / 4.0)));
  for (int p = 1; p <= panels; ++p) abs_breaks.push_back(start + (T - start) * p / panels);
  MeshLayout layout;
  layout.order = n_max + 20 + ctx.digits() / 2;
  for (double b : abs_breaks) layout.breaks.push_back(b / T);
  layout.breaks.back() = 1.0;
  return layout;
}

void hankel_crosscheck(const WeightSpec& spec, const OPChain& chain, const PrecisionContext& ctx) {
  const int top = std::min(chain.n_max, 12);
  // the moment matrix loses digits geometrically in n; twice the working
  // digits keeps the determinant route certified to n ~ 10 at moderate t
  PrecisionContext hi = ctx.raised(ctx.digits() + 40);
  MomentTable m = moments(spec, 2 * top + 2, hi);
  PrecisionGuard g(hi);
  const Real tol = pow(Real(10), -ctx.digits() / 2);
  Real prev = 1;
  for (int n = 0; n <= top; ++n) {
    Real next;
    try {
      next = hankel_det(m, n + 1, hi);
    } catch (const ConditioningAlarm&) {
      return;  // determinant route exhausted; higher n are not cross-checked
    }
    Real hn = next / prev;
    if (abs(hn / at_precision(chain.h[n], hi) - 1) > tol)
      throw ConditioningAlarm("op_chain: Stieltjes norm h_" + std::to_string(n) + " disagrees with Hankel ratio");
    prev = next;
  }
}

}  // namespace

OPChain op_chain(const WeightSpec& spec, int n_max, const PrecisionContext& ctx, const ChainOptions& opts) {
  if (n_max < 1) throw DomainError("op_chain: n_max < 1");
  if (spec.kind != WeightKind::LaguerreCutoff) throw DomainError("op_chain: Laguerre weight only");
  PrecisionGuard g(ctx);
  const double cut = effective_cutoff(spec, n_max, ctx);
  const Real hi = is_infinite(spec.t) || spec.t > cut ? Real(cut) : at_precision(spec.t, ctx);
  MeshLayout layout =
      opts.pinned_mesh ? *opts.pinned_mesh : initial_layout(spec, hi.convert_to<double>(), n_max, ctx);
  const WeightSpec s = spec;
  OPChain chain = adaptive_chain(layout, opts.pinned_mesh.has_value(), Real(0), hi,
                                 [&s](const Real& x) { return s.w(x); }, n_max, ctx);
  for (int n = 0; n <= n_max; ++n)
    if (!(chain.h[n] > 0)) throw ConditioningAlarm("op_chain: non-positive norm h_" + std::to_string(n));
  if (opts.hankel_crosscheck) hankel_crosscheck(spec, chain, ctx);
  return chain;
}

LadderState ladder_state(const OPChain& chain, const WeightSpec& spec, int n, const PrecisionContext& ctx) {
  if (n < 0 || n > chain.n_max - 1) throw DomainError("ladder_state: need 0 <= n <= n_max - 1");
  if (is_infinite(spec.t)) throw DomainError("ladder_state: finite t required");
  PrecisionGuard g(ctx);
  LadderState s;
  s.n = n;
  s.alpha = at_precision(spec.alpha, ctx);
  s.t = at_precision(spec.t, ctx);
  const Real& t = s.t;
  const Real a = s.alpha;
  const Real m = 2 * n + a, nn = n * (n + a);

  auto P = chain.eval_all(n, t);
  const Real wt = spec.w(t);
  s.R = -P[n] * P[n] * wt / chain.h[n];
  s.r = n > 0 ? Real(-P[n] * P[n - 1] * wt / chain.h[n - 1]) : Real(0);
  s.alpha_n = chain.alpha_rec[n];
  s.beta_n = n > 0 ? chain.beta_rec[n] : Real(0);
  s.sigma = nn + t * s.r - s.beta_n;

  const Real eps = ctx.epsilon();
  if (abs(s.R) <= eps || abs(s.R - 1) <= eps) throw DegenerateState("ladder_state: R_n at 0 or 1");
  const Real& r = s.r;
  const Real& R = s.R;
  s.S = 1 - 1 / R;

  // t r' = (1/R + 1/(R-1)) r^2 + m R/(R-1) r + n(n+alpha) R/(R-1)
  const Real k = 1 / R + 1 / (R - 1);
  const Real q = R / (R - 1);
  const Real rhs = k * r * r + m * q * r + nn * q;
  s.d_r = rhs / t;
  // t R' = t R^2 + (m - t) R + 2 r
  s.d_R = (t * R * R + (m - t) * R + 2 * r) / t;

  const Real d_rhs_dr = 2 * k * r + m * q;
  const Real d_rhs_dR = (-1 / (R * R) - 1 / ((R - 1) * (R - 1))) * r * r - (m * r + nn) / ((R - 1) * (R - 1));
  s.dd_r = (d_rhs_dr * s.d_r + d_rhs_dR * s.d_R - s.d_r) / t;
  s.dd_R = (R * R + 2 * t * R * s.d_R + (m - t) * s.d_R - R + 2 * s.d_r - s.d_R) / t;

  s.d_S = s.d_R / (R * R);
  s.dd_S = s.dd_R / (R * R) - 2 * s.d_R * s.d_R / (R * R * R);
  s.d_sigma = r;
  s.dd_sigma = s.d_r;
  s.d_beta = t * s.d_r;
  s.dd_beta = s.d_r + t * s.dd_r;
  return s;
}

std::vector<LadderDifferences> ladder_differences_all(const WeightSpec& spec, const OPChain& base, const Real& step,
                                                     const PrecisionContext& ctx) {
  if (!(step > 0)) throw DomainError("ladder_differences: step must be > 0");
  PrecisionGuard g(ctx);
  ChainOptions opts;
  opts.pinned_mesh = base.mesh;
  opts.hankel_crosscheck = false;
  const Real h = at_precision(step, ctx);
  WeightSpec lo = spec, hi = spec;
  lo.t = spec.t - h;
  hi.t = spec.t + h;
  OPChain c0 = op_chain(spec, base.n_max, ctx, opts);
  OPChain cm = op_chain(lo, base.n_max, ctx, opts);
  OPChain cp = op_chain(hi, base.n_max, ctx, opts);
  std::vector<LadderDifferences> out;
  for (int n = 0; n < base.n_max; ++n) {
    LadderState s0 = ladder_state(c0, spec, n, ctx);
    LadderState sm = ladder_state(cm, lo, n, ctx);
    LadderState sp = ladder_state(cp, hi, n, ctx);
    LadderDifferences d;
    d.d_r = (sp.r - sm.r) / (2 * h);
    d.d_R = (sp.R - sm.R) / (2 * h);
    d.d_sigma = (sp.sigma - sm.sigma) / (2 * h);
    d.d_beta = (sp.beta_n - sm.beta_n) / (2 * h);
    d.dd_r = (sp.r - 2 * s0.r + sm.r) / (h * h);
    d.dd_beta = (sp.beta_n - 2 * s0.beta_n + sm.beta_n) / (h * h);
    out.push_back(d);
  }
  return out;
}

LadderDifferences ladder_differences(const WeightSpec& spec, const OPChain& base, int n, const Real& step,
                                     const PrecisionContext& ctx) {
  if (n < 0 || n > base.n_max - 1) throw DomainError("ladder_differences: need 0 <= n <= n_max - 1");
  return ladder_differences_all(spec, base, step, ctx)[n];
}

Real full_hankel_det(int n, const Real& alpha, const PrecisionContext& ctx) {
  PrecisionGuard g(ctx);
  Real d = 1;
  for (int j = 0; j < n; ++j)
    d *= boost::math::factorial<Real>(j) * gamma_fn(at_precision(alpha, ctx) + j + 1, ctx);
  return d;
}

Real largest_eigenvalue_cdf(int n, const Real& alpha, const Real& t, const PrecisionContext& ctx) {
  if (n < 1) throw DomainError("largest_eigenvalue_cdf: n < 1");
  WeightSpec spec = WeightSpec::laguerre(alpha, t);
  if (is_infinite(t)) return Real(1);
  PrecisionGuard g(ctx);
  // D_n(t) = prod_{j<n} h_j(t) and D_n(0, inf) = prod_{j<n} j! Gamma(j+alpha+1)
  OPChain chain = op_chain(spec, std::max(n - 1, 1), ctx);
  Real p = 1;
  for (int j = 0; j < n; ++j)
    p *= chain.h[j] / (boost::math::factorial<Real>(j) * gamma_fn(spec.alpha + j + 1, ctx));
  return p;
}

}  // namespace rmt
