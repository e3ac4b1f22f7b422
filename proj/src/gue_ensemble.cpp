#include "rmt/gue_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rmt {

namespace {

// Half-width beyond which x^{2 n_max} e^{-x^2} is below 10^-(digits+10).
double gaussian_reach(int n_max, const PrecisionContext& ctx) {
  const double target = -(ctx.digits() + 10) * std::log(10.0);
  double x = std::max(1.0, std::sqrt(static_cast<double>(n_max)));
  while (2.0 * n_max * std::log(x) - x * x > target) x += 0.25;
  return x;
}

MeshLayout gaussian_layout(double lo, double hi, int n_max, const PrecisionContext& ctx) {
  MeshLayout layout;
  layout.order = n_max + 20 + ctx.digits() / 2;
  const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
  for (int p = 0; p <= panels; ++p) layout.breaks.push_back(static_cast<double>(p) / panels);
  return layout;
}

}  // namespace

GUEChain gue_chain(const Real& t_in, int n_max, const PrecisionContext& ctx, const GUEChainOptions& opts) {
  if (n_max < 1) throw DomainError("gue_chain: n_max < 1");
  if (opts.jump_beta != -1 && opts.jump_beta != 1) throw DomainError("gue_chain: jump_beta must be -1 or +1");
  if (boost::multiprecision::isnan(t_in)) throw DomainError("gue_chain: t is NaN");
  PrecisionGuard g(ctx);
  GUEChain c;
  c.n_max = n_max;
  c.t = at_precision(t_in, ctx);
  c.jump_beta = opts.jump_beta;
  // the far end moves continuously with t so perturbed chains stay smooth
  const Real L0 = gaussian_reach(n_max, ctx);
  if (is_infinite(c.t)) {
    c.lower = -L0;
    c.upper = L0;
  } else if (c.jump_beta == -1) {
    Real tn = c.t < 0 ? c.t : Real(0);
    c.lower = -sqrt(L0 * L0 + tn * tn);
    c.upper = c.t;
  } else {
    Real tp = c.t > 0 ? c.t : Real(0);
    c.lower = c.t;
    c.upper = sqrt(L0 * L0 + tp * tp);
  }
  MeshLayout layout = opts.pinned_mesh ? *opts.pinned_mesh
                                       : gaussian_layout(c.lower.convert_to<double>(), c.upper.convert_to<double>(),
                                                         n_max, ctx);
  c.chain = adaptive_chain(layout, opts.pinned_mesh.has_value(), c.lower, c.upper,
                           [](const Real& x) { return Real(exp(-x * x)); }, n_max, ctx);
  c.h = c.chain.h;
  c.alpha_rec = c.chain.alpha_rec;
  c.beta_rec = c.chain.beta_rec;
  c.r.assign(n_max + 1, Real(0));
  c.sum_alpha.assign(n_max + 1, Real(0));
  c.log_det.assign(n_max + 1, Real(0));
  for (int n = 0; n <= n_max; ++n) {
    if (!(c.h[n] > 0)) throw ConditioningAlarm("gue_chain: non-positive norm");
    c.sum_alpha[n] = -c.chain.p1[n];
    if (n > 0) c.log_det[n] = c.log_det[n - 1] + log(c.h[n - 1]);
  }
  if (!is_infinite(c.t)) {
    auto P = c.chain.eval_all(n_max, c.t);
    const Real w = exp(-c.t * c.t);
    // the sign follows the side of the jump
    for (int n = 1; n <= n_max; ++n) c.r[n] = c.jump_beta * P[n] * P[n - 1] * w / c.h[n - 1];
  }
  return c;
}

GUEState gue_state(const GUEChain& c, int n, const PrecisionContext& ctx) {
  if (n < 1 || n > c.n_max - 1) throw DomainError("gue_state: need 1 <= n <= n_max - 1");
  if (is_infinite(c.t)) throw DomainError("gue_state: finite t required");
  PrecisionGuard g(ctx);
  GUEState s;
  s.n = n;
  s.t = c.t;
  const Real& t = s.t;
  s.alpha = c.alpha_rec[n];
  s.alpha_prev = c.alpha_rec[n - 1];
  s.r = c.r[n];
  s.r_prev = c.r[n - 1];
  s.beta = c.beta_rec[n];
  s.sum_alpha = c.sum_alpha[n];
  s.d_alpha = 2 * (s.r - s.alpha * (t - s.alpha));
  s.d_alpha_prev = 2 * (s.r_prev - s.alpha_prev * (t - s.alpha_prev));
  s.d_r = 2 * (n + s.r) * (s.alpha_prev - s.alpha);
  s.dd_alpha = 2 * (s.d_r - s.d_alpha * (t - s.alpha) - s.alpha * (1 - s.d_alpha));
  s.dd_r = 2 * s.d_r * (s.alpha_prev - s.alpha) + 2 * (n + s.r) * (s.d_alpha_prev - s.d_alpha);
  s.xi = 2 * t * s.r - 2 * (n + s.r) * (s.alpha + s.alpha_prev);
  s.d_xi = 2 * s.r;
  s.dd_xi = 2 * s.d_r;
  auto P = c.chain.eval_all(n, t);
  const Real w = exp(-t * t);
  s.xi_direct = 0;
  for (int j = 0; j < n; ++j) s.xi_direct += P[j] * P[j] * w / c.h[j];
  return s;
}

GUEDifferences gue_differences(const GUEChain& base, int n, const Real& step, const PrecisionContext& ctx) {
  if (!(step > 0)) throw DomainError("gue_differences: step must be > 0");
  PrecisionGuard g(ctx);
  GUEChainOptions opts;
  opts.jump_beta = base.jump_beta;
  opts.pinned_mesh = base.chain.mesh;
  const Real h = at_precision(step, ctx);
  GUEChain c0 = gue_chain(base.t, base.n_max, ctx, opts);
  GUEChain cm = gue_chain(base.t - h, base.n_max, ctx, opts);
  GUEChain cp = gue_chain(base.t + h, base.n_max, ctx, opts);
  GUEDifferences d;
  d.d_alpha = (cp.alpha_rec[n] - cm.alpha_rec[n]) / (2 * h);
  d.d_r = (cp.r[n] - cm.r[n]) / (2 * h);
  d.dd_alpha = (cp.alpha_rec[n] - 2 * c0.alpha_rec[n] + cm.alpha_rec[n]) / (h * h);
  d.d_log_det = (cp.log_det[n] - cm.log_det[n]) / (2 * h);
  d.dd_log_det = (cp.log_det[n] - 2 * c0.log_det[n] + cm.log_det[n]) / (h * h);
  return d;
}

namespace {

ResidualReport make(const std::string& id, const GUEState& s, const std::vector<Real>& terms) {
  return residual_from_terms(id, s.n, Real(0), s.t, terms);
}

}  // namespace

std::vector<ResidualReport> residual_gue_identities(const GUEState& s, const GUEDifferences& fd) {
  const int n = s.n;
  const Real &t = s.t, &r = s.r, &a = s.alpha, &ap = s.alpha_prev;
  return {
      make("gue_r_squared", s, {r * r, -2 * n * a * ap, -2 * r * a * ap}),
      make("gue_r_derivative", s, {fd.d_r, -2 * n * ap, 2 * n * a, -2 * r * ap, 2 * r * a}),
      make("gue_r_from_alpha", s, {r, -a * t, a * a, -fd.d_alpha / 2}),
      make("gue_sum_alpha", s, {-2 * s.sum_alpha, -2 * t * r, 2 * n * (a + ap), 2 * r * (a + ap)}),
  };
}

ResidualReport residual_gue_alphan_ode(const GUEState& s) {
  const int n = s.n;
  const Real &t = s.t, &a = s.alpha, &da = s.d_alpha;
  return make("gue_alpha_ode",
              s, {s.dd_alpha, -da * da / (2 * a), -6 * a * a * a, 8 * t * a * a, -2 * (t * t - 2 * n - 1) * a});
}

ResidualReport residual_sigma_piv(const GUEState& s) {
  const Real nu1 = 0, nu2 = 2 * s.n;
  const Real &x = s.xi, &dx = s.d_xi, &ddx = s.dd_xi, &t = s.t;
  const Real u = t * dx - x;
  return make("sigma_piv", s, {ddx * ddx, -4 * u * u, 4 * dx * (dx + nu1) * (dx + nu2)});
}

ResidualReport residual_gue_log_derivative(const GUEState& s) {
  return make("gue_log_derivative", s, {s.xi_direct, -s.xi});
}

std::vector<ResidualReport> gue_sweep(const std::vector<int>& ns, const std::vector<Real>& ts, const Real& fd_step,
                                      const PrecisionContext& ctx) {
  if (ns.empty()) return {};
  PrecisionGuard g(ctx);
  const int top = *std::max_element(ns.begin(), ns.end());
  const std::set<int> wanted(ns.begin(), ns.end());
  std::vector<ResidualReport> out;
  for (const Real& t : ts) {
    GUEChain c = gue_chain(at_precision(t, ctx), top + 1, ctx);
    for (int n : wanted) {
      GUEState s = gue_state(c, n, ctx);
      auto ids = residual_gue_identities(s, gue_differences(c, n, fd_step, ctx));
      out.insert(out.end(), ids.begin(), ids.end());
      out.push_back(residual_gue_alphan_ode(s));
      out.push_back(residual_sigma_piv(s));
      out.push_back(residual_gue_log_derivative(s));
    }
  }
  return out;
}

}  // namespace rmt
