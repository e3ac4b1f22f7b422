#include "rmt/op_chain.hpp"

namespace rmt {

std::vector<Real> OPChain::eval_all(int n, const Real& x) const {
  std::vector<Real> p(n + 1);
  p[0] = 1;
  if (n >= 1) p[1] = x - alpha_rec[0];
  for (int k = 1; k < n; ++k) p[k + 1] = (x - alpha_rec[k]) * p[k] - beta_rec[k] * p[k - 1];
  return p;
}

Real OPChain::eval(int n, const Real& x) const { return eval_all(n, x)[n]; }

OPChain stieltjes(const std::vector<Real>& x, const std::vector<Real>& w, int n_max) {
  const std::size_t m = x.size();
  OPChain c;
  c.n_max = n_max;
  c.h.resize(n_max + 1);
  c.alpha_rec.resize(n_max + 1);
  c.beta_rec.assign(n_max + 1, Real(0));
  c.p1.assign(n_max + 1, Real(0));
  c.poly.resize(n_max + 1);
  c.poly[0] = {Real(1)};

  std::vector<Real> prev(m, Real(0)), cur(m, Real(1)), next(m);
  for (int n = 0; n <= n_max; ++n) {
    Real hn = 0, xn = 0;
    for (std::size_t k = 0; k < m; ++k) {
      Real q = w[k] * cur[k] * cur[k];
      hn += q;
      xn += q * x[k];
    }
    c.h[n] = hn;
    c.alpha_rec[n] = xn / hn;
    if (n > 0) c.beta_rec[n] = hn / c.h[n - 1];
    if (n == n_max) break;
    for (std::size_t k = 0; k < m; ++k)
      next[k] = (x[k] - c.alpha_rec[n]) * cur[k] - c.beta_rec[n] * prev[k];
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  for (int n = 1; n <= n_max; ++n) {
    std::vector<Real> p(n + 1, Real(0));
    for (int k = 0; k < n; ++k) {
      p[k + 1] += c.poly[n - 1][k];
      p[k] -= c.alpha_rec[n - 1] * c.poly[n - 1][k];
    }
    if (n >= 2)
      for (int k = 0; k <= n - 2; ++k) p[k] -= c.beta_rec[n - 1] * c.poly[n - 2][k];
    c.poly[n] = std::move(p);
    c.p1[n] = c.p1[n - 1] - c.alpha_rec[n - 1];
  }
  return c;
}

void composite_rule(const MeshLayout& layout, const Real& lo, const Real& hi,
                    const std::function<Real(const Real&)>& weight_fn, const PrecisionContext& ctx,
                    std::vector<Real>& x, std::vector<Real>& w) {
  const QuadratureRule& q = gauss_legendre(layout.order, ctx);
  PrecisionGuard g(ctx);
  x.clear();
  w.clear();
  x.reserve((layout.breaks.size() - 1) * q.nodes.size());
  w.reserve(x.capacity());
  const Real span = hi - lo;
  for (std::size_t p = 0; p + 1 < layout.breaks.size(); ++p) {
    // breaks are stored as doubles; parse through exact binary values
    Real a = lo + span * Real(layout.breaks[p]);
    Real b = lo + span * Real(layout.breaks[p + 1]);
    Real half = (b - a) / 2, mid = (a + b) / 2;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      Real xi = mid + half * q.nodes[i];
      x.push_back(xi);
      w.push_back(half * q.weights[i] * weight_fn(xi));
    }
  }
}

MeshLayout refine(const MeshLayout& layout) {
  MeshLayout out;
  out.order = layout.order;
  for (std::size_t p = 0; p + 1 < layout.breaks.size(); ++p) {
    out.breaks.push_back(layout.breaks[p]);
    out.breaks.push_back(0.5 * (layout.breaks[p] + layout.breaks[p + 1]));
  }
  out.breaks.push_back(layout.breaks.back());
  return out;
}

OPChain adaptive_chain(const MeshLayout& initial, bool pinned, const Real& lo, const Real& hi,
                       const std::function<Real(const Real&)>& weight_fn, int n_max,
                       const PrecisionContext& ctx) {
  PrecisionGuard g(ctx);
  std::vector<Real> x, w;
  MeshLayout layout = initial;
  composite_rule(layout, lo, hi, weight_fn, ctx, x, w);
  OPChain chain = stieltjes(x, w, n_max);
  chain.mesh = layout;
  if (pinned) return chain;
  const Real tol = pow(Real(10), -(ctx.digits() - 10));
  for (int round = 0; round < 8; ++round) {
    MeshLayout finer = refine(layout);
    composite_rule(finer, lo, hi, weight_fn, ctx, x, w);
    OPChain next = stieltjes(x, w, n_max);
    next.mesh = finer;
    Real worst = 0;
    for (int n = 0; n <= n_max; ++n) {
      worst = std::max(worst, Real(abs(next.h[n] / chain.h[n] - 1)));
      Real scale = abs(next.alpha_rec[n]) + sqrt(abs(next.beta_rec[n])) + 1;
      worst = std::max(worst, Real(abs(next.alpha_rec[n] - chain.alpha_rec[n]) / scale));
    }
    chain = std::move(next);
    layout = finer;
    if (worst < tol) return chain;
  }
  throw ConditioningAlarm("quadrature refinement did not settle the recurrence coefficients");
}

}  // namespace rmt
