#include "rmt/frobenius.hpp"

#include <cmath>

namespace rmt {

namespace {

// exact for the small arguments used here; 0 outside 0 <= k <= n
Real binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return Real(0);
  Real b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

Real at(const std::vector<Real>& v, int i) { return i >= 0 && i < static_cast<int>(v.size()) ? v[i] : Real(0); }

Real relative_of(std::initializer_list<Real> terms) {
  Real sum = 0, scale = 0;
  for (const Real& t : terms) {
    sum += t;
    scale = std::max(scale, Real(abs(t)));
  }
  return scale > 0 ? Real(abs(sum) / scale) : Real(0);
}

}  // namespace

FrobeniusCoeffs frobenius_coeffs(const LimitODECoeffs& c, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx);
  if (c.r == 0) throw DegenerateState("frobenius_coeffs: r = 0");
  FrobeniusCoeffs k;
  k.s = c.s;
  k.r = c.r;
  k.d_r = c.d_r;
  const Real &s = k.s, &r = k.r, &dr = k.d_r;
  k.a0 = -dr * dr / 4 + dr / 2 + s * r * r - r * r * r;
  k.a1 = -dr / 2;
  k.a2 = -s * r * r;
  k.a3 = r * r * r;
  k.b1 = -dr * dr / 4 + 2 * s * r * r - r * r * r;
  k.b2 = -s * r * r - r * r * r;
  k.A = -s * r * r + 2 * r * r * r;
  return k;
}

FrobeniusSeries series_zero(const FrobeniusCoeffs& k, const Real& tau_in, int N, bool with_log,
                            const PrecisionContext& ctx) {
  if (N < 4) throw DomainError("series_zero: N >= 4 required");
  PrecisionGuard guard(ctx);
  const Real tau = at_precision(tau_in, ctx);
  for (int n = 0; n < N; ++n)
    if (tau + n + 1 == 0) throw DomainError("series_zero: indicial degeneracy, tau + n + 1 = 0");
  FrobeniusSeries S;
  S.point = FrobeniusPoint::Zero;
  S.exponent = tau;
  S.N = N;
  S.k = k;
  S.has_log = with_log;
  auto& c = S.c;
  c.assign(N + 1, Real(0));
  c[0] = 1;
  for (int n = 0; n < N; ++n) {
    const Real v = ((tau + n - 1) * (tau + n) - k.a0) * c[n] + k.b1 * at(c, n - 1) + k.b2 * at(c, n - 2) +
                   k.a3 * at(c, n - 3);
    c[n + 1] = v / ((tau + n + 1) * (tau + n + 1));
  }
  if (with_log) {
    auto& d = S.d;
    d.assign(N + 1, Real(0));
    for (int n = 0; n < N; ++n) {
      const Real v = -2 * (tau + n + 1) * c[n + 1] + (2 * tau + 2 * n - 1) * c[n] +
                     ((tau + n - 1) * (tau + n) - k.a0) * d[n] + k.b1 * at(d, n - 1) + k.b2 * at(d, n - 2) +
                     k.a3 * at(d, n - 3);
      d[n + 1] = v / ((tau + n + 1) * (tau + n + 1));
    }
  }
  return S;
}

FrobeniusSeries series_one(const FrobeniusCoeffs& k, int lam, int N, bool with_log, const PrecisionContext& ctx) {
  if (lam != 0 && lam != 2) throw DomainError("series_one: lambda must be 0 or 2");
  if (N < 4) throw DomainError("series_one: N >= 4 required");
  PrecisionGuard guard(ctx);
  FrobeniusSeries S;
  S.point = FrobeniusPoint::One;
  S.exponent = lam;
  S.N = N;
  S.k = k;
  S.has_log = with_log;
  const Real a1sq = k.a1 * k.a1;
  // (lam+n-1)(lam+n+1) c_{n+1} = -(a1 + (lam+n-1)(lam+n)) c_n + a1^2 c_{n-1} - A c_{n-2} - a3 c_{n-3}
  auto step = [&](const std::vector<Real>& v, int n, int l) {
    return -(k.a1 + Real((l + n - 1) * (l + n))) * v[n] + a1sq * at(v, n - 1) - k.A * at(v, n - 2) -
           k.a3 * at(v, n - 3);
  };
  auto& c = S.c;
  c.assign(N + 1, Real(0));
  c[0] = Real(lam) / 2;
  for (int n = 0; n < N; ++n) {
    const int lead = (lam + n - 1) * (lam + n + 1);
    const Real v = step(c, n, lam);
    if (lead == 0) {
      // lam = 0, n = 1: the equation reads 0 = 0 and c_2 is free; it is 0 in the limit
      if (v != 0) throw DegenerateState("series_one: inconsistent recurrence at a zero leading factor");
      c[n + 1] = 0;
    } else {
      c[n + 1] = v / lead;
    }
  }
  if (with_log) {
    auto& d = S.d;
    d.assign(N + 1, Real(0));
    if (lam == 0) {
      d[0] = 1;
      for (int n = 0; n < N; ++n) {
        const int lead = (n - 1) * (n + 1);
        d[n + 1] = lead == 0 ? Real(0) : Real(step(d, n, 0) / lead);
      }
    } else {
      // derivative in lam of the recurrence, with dc = d / 2
      std::vector<Real> dc(N + 1, Real(0));
      dc[0] = Real(1) / 2;
      for (int n = 0; n < N; ++n) {
        const Real v = step(dc, n, lam) - 2 * (lam + n) * c[n + 1] - (2 * (lam + n) - 1) * c[n];
        dc[n + 1] = v / ((lam + n) * (lam + n) - 1);
      }
      for (int n = 0; n <= N; ++n) d[n] = 2 * dc[n];
    }
  }
  return S;
}

SeriesValue evaluate(const FrobeniusSeries& s, const Real& x, bool companion) {
  if (companion && !s.has_log) throw DomainError("evaluate: series built without its companion");
  const bool zero = s.point == FrobeniusPoint::Zero;
  const Real y = zero ? x : Real(x - 1);
  if (y == 0) throw DomainError("evaluate: x at the expansion point");
  if (zero && !(y > 0)) throw DomainError("evaluate: the series at 0 needs x > 0");
  const Real& e = s.exponent;
  auto sums = [&](const std::vector<Real>& a, Real& f, Real& df, Real& ddf, Real& tail) {
    f = df = ddf = 0;
    Real p = zero ? Real(pow(y, e)) : Real(pow(y, e.convert_to<int>()));
    tail = 0;
    for (int n = 0; n <= s.N; ++n) {
      const Real m = e + n;
      const Real term = a[n] * p;
      f += term;
      df += m * term / y;
      ddf += m * (m - 1) * term / (y * y);
      if (n >= s.N - 2) tail = std::max(tail, Real(abs(term)));
      p *= y;
    }
    const Real q = std::min(Real(abs(y)), Real("0.99"));
    tail /= 1 - q;
  };
  SeriesValue v;
  Real tail;
  sums(s.c, v.f, v.df, v.ddf, tail);
  if (companion) {
    Real g, dg, ddg, tail_d;
    sums(s.d, g, dg, ddg, tail_d);
    // companion = sum d + w ln|y| Y with w = 1 at Zero and 2 at One
    const Real w = zero ? 1 : 2;
    const Real L = log(abs(y));
    g += w * L * v.f;
    dg += w * (v.f / y + L * v.df);
    ddg += w * (-v.f / (y * y) + 2 * v.df / y + L * v.ddf);
    tail = std::max(tail_d, Real(w * abs(L) * tail));
    v.f = g;
    v.df = dg;
    v.ddf = ddg;
  }
  v.truncation = abs(v.f) > 0 ? Real(tail / abs(v.f)) : tail;
  return v;
}

ResidualReport series_residual(const FrobeniusSeries& s, const Real& x, bool companion) {
  const SeriesValue v = evaluate(s, x, companion);
  const auto& k = s.k;
  std::vector<Real> terms;
  if (s.point == FrobeniusPoint::Zero) {
    terms = {(x * x - x) * v.ddf, -v.df, k.a3 * x * x * x * v.f, k.b2 * x * x * v.f, k.b1 * x * v.f, -k.a0 * v.f};
  } else {
    const Real y = x - 1;
    terms = {(y * y + y) * v.ddf, -v.df, k.a3 * y * y * y * v.f, k.A * y * y * v.f, -k.a1 * k.a1 * y * v.f, k.a1 * v.f};
  }
  ResidualReport rep = residual_from_terms(companion ? "frobenius_companion" : "frobenius_series", s.N, s.exponent,
                                           k.s, terms);
  rep.point = x;
  return rep;
}

Real recurrence_defect(const FrobeniusSeries& s) {
  const auto& k = s.k;
  const auto &c = s.c, &d = s.d;
  const Real& e = s.exponent;
  Real worst = 0;
  for (int n = 0; n < s.N; ++n) {
    if (s.point == FrobeniusPoint::Zero) {
      const Real tn = e + n;
      worst = std::max(worst, relative_of({(tn + 1) * (tn + 1) * c[n + 1], -((tn - 1) * tn - k.a0) * c[n],
                                           -k.b1 * at(c, n - 1), -k.b2 * at(c, n - 2), -k.a3 * at(c, n - 3)}));
      if (s.has_log)
        worst = std::max(worst, relative_of({(tn + 1) * (tn + 1) * d[n + 1], 2 * (tn + 1) * c[n + 1],
                                             -(2 * tn - 1) * c[n], -((tn - 1) * tn - k.a0) * d[n],
                                             -k.b1 * at(d, n - 1), -k.b2 * at(d, n - 2), -k.a3 * at(d, n - 3)}));
    } else {
      const Real ln = e + n;
      auto rec = [&](const std::vector<Real>& v, const Real& l) {
        return relative_of({(l - 1) * (l + 1) * v[n + 1], (k.a1 + (l - 1) * l) * v[n], -k.a1 * k.a1 * at(v, n - 1),
                            k.A * at(v, n - 2), k.a3 * at(v, n - 3)});
      };
      worst = std::max(worst, rec(c, ln));
      if (s.has_log) {
        if (e == 0) {
          worst = std::max(worst, rec(d, Real(n)));
        } else {
          worst = std::max(worst, relative_of({2 * ln * c[n + 1], (2 * ln - 1) * c[n], (ln * ln - 1) * d[n + 1] / 2,
                                               (k.a1 + (ln - 1) * ln) * d[n] / 2, -k.a1 * k.a1 * at(d, n - 1) / 2,
                                               k.A * at(d, n - 2) / 2, k.a3 * at(d, n - 3) / 2}));
        }
      }
    }
  }
  return worst;
}

TailCoeffs tail_zero(const FrobeniusCoeffs& k, const Real& tau_in, int lmax, const PrecisionContext& ctx) {
  if (lmax < 4) throw DomainError("tail_zero: lmax >= 4 required");
  PrecisionGuard guard(ctx);
  const Real tau = at_precision(tau_in, ctx);
  TailCoeffs t;
  t.point = FrobeniusPoint::Zero;
  t.exponent = tau;
  t.lmax = lmax;
  auto& th = t.theta;
  auto& nu = t.nu;
  th.assign(lmax + 1, Real(0));
  nu.assign(lmax + 1, Real(0));
  th[3] = 1;
  for (int l = 1; l + 3 <= lmax; ++l) {
    const Real diag = -tau * (1 + 2 * l) + Real(l * (l + 1)) / 2 - k.a1;
    Real v = diag * th[l + 2];
    Real w = -(1 + 2 * l) * th[l + 2] + diag * nu[l + 2];
    for (int j = 3; j <= l + 1; ++j) {
      const Real sgn = (l - j) % 2 == 0 ? 1 : -1;
      const Real mix = pow(Real(2), l - j + 2) * k.b2 + pow(Real(3), l - j + 2) * k.a3 + k.b1;
      const Real coef = sgn * (binom(l + 1, j - 3) - 2 * tau * binom(l + 1, j - 2) + tau * tau * binom(l + 1, j - 1)) -
                        mix * binom(l + 1, j - 1);
      v += coef * th[j];
      w += sgn * (-2 * binom(l + 1, j - 2) + 2 * tau * binom(l + 1, j - 1)) * th[j] + coef * nu[j];
    }
    th[l + 3] = v / l;
    nu[l + 3] = w / l;
  }
  return t;
}

namespace {

// m theta_{m+1} = (a0 + m(m+1)/2 - (2m-1) lam - 1) theta_m - sum_{j<m} [...] theta_j
std::vector<Real> one_recurrence(const FrobeniusCoeffs& k, int lam, const Real& seed, int lmax) {
  std::vector<Real> th(lmax + 1, Real(0));
  th[1] = seed;
  const Real a1sq = k.a1 * k.a1;
  for (int m = 1; m < lmax; ++m) {
    Real v = (k.a0 + Real(m * (m + 1)) / 2 - (2 * m - 1) * lam - 1) * th[m];
    for (int j = 1; j < m; ++j) {
      const Real sgn = (m - j + 1) % 2 == 0 ? 1 : -1;
      v -= (binom(m - 1, j - 1) * (a1sq + pow(Real(2), m - j) * k.A - pow(Real(3), m - j) * k.a3) +
            sgn * (binom(m, j - 2) + (1 - 2 * lam) * binom(m - 1, j - 2) + lam * (lam - 2) * binom(m - 1, j - 1))) *
           th[j];
    }
    th[m + 1] = v / m;
  }
  return th;
}

}  // namespace

TailCoeffs tail_one(const FrobeniusCoeffs& k, int lam, int lmax, const PrecisionContext& ctx) {
  if (lam != 0 && lam != 2) throw DomainError("tail_one: lambda must be 0 or 2");
  if (lmax < 4) throw DomainError("tail_one: lmax >= 4 required");
  PrecisionGuard guard(ctx);
  TailCoeffs t;
  t.point = FrobeniusPoint::One;
  t.exponent = lam;
  t.lmax = lmax;
  t.theta = one_recurrence(k, lam, Real(lam) / 2, lmax);
  // theta is linear in its seed lam/2, so 2 dtheta/dlam at 0 is the lam = 0 recurrence seeded by 1
  t.nu = one_recurrence(k, 0, Real(1), lmax);
  return t;
}

namespace {

Real tail_sum(const std::vector<Real>& a, int n, int l_used) {
  Real acc = 0;
  const Real inv = Real(1) / n;
  Real p = 1;
  for (int l = 1; l <= l_used && l < static_cast<int>(a.size()); ++l) {
    p *= inv;
    acc += a[l] * p;
  }
  return acc;
}

double fitted_exponent(const std::vector<int>& ns, const std::vector<Real>& rem) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    const double y = log(rem[i]).convert_to<double>();
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void check_window(const FrobeniusSeries& s, const TailCoeffs& t, int n_lo, int n_hi, int l_used, int n_step) {
  if (s.point != t.point) throw DomainError("tail_match: series and tail at different points");
  if (!(n_lo >= 1 && n_hi > n_lo && n_step >= 1)) throw DomainError("tail_match: bad window");
  if (s.N <= n_hi) throw DomainError("tail_match: series shorter than the window");
  if (l_used < 1 || l_used > t.lmax) throw DomainError("tail_match: l_used beyond the tail");
}

Real parity(const FrobeniusSeries& s, int n) { return s.point == FrobeniusPoint::One && n % 2 ? Real(-1) : Real(1); }

}  // namespace

TailMatch tail_match(const FrobeniusSeries& s, const TailCoeffs& t, int n_lo, int n_hi, int l_used, int n_step) {
  check_window(s, t, n_lo, n_hi, l_used, n_step);
  TailMatch m;
  m.l_used = l_used;
  m.scale = s.c[s.N] * parity(s, s.N) / tail_sum(t.theta, s.N, t.lmax);
  m.derivative_scale = 0;
  for (int n = n_lo; n <= n_hi; n += n_step) {
    m.n.push_back(n);
    m.remainder.push_back(abs(s.c[n] * parity(s, n) / m.scale - tail_sum(t.theta, n, l_used)));
  }
  m.exponent = fitted_exponent(m.n, m.remainder);
  return m;
}

TailMatch tail_match_companion(const FrobeniusSeries& s, const TailCoeffs& t, int n_lo, int n_hi, int l_used,
                               int n_step) {
  check_window(s, t, n_lo, n_hi, l_used, n_step);
  if (!s.has_log) throw DomainError("tail_match_companion: series built without its companion");
  TailMatch m;
  m.l_used = l_used;
  const int N = s.N;
  if (s.point == FrobeniusPoint::One) {
    if (s.exponent != 0) throw DomainError("tail_match_companion: the companion at 1 is matched at lambda = 0");
    // c vanishes identically at lambda = 0, so d_n ~ K (-1)^n sum nu / n^l
    m.scale = s.d[N] * parity(s, N) / tail_sum(t.nu, N, t.lmax);
    m.derivative_scale = 0;
    for (int n = n_lo; n <= n_hi; n += n_step) {
      m.n.push_back(n);
      m.remainder.push_back(abs(s.d[n] * parity(s, n) / m.scale - tail_sum(t.nu, n, l_used)));
    }
  } else {
    m.scale = s.c[N] / tail_sum(t.theta, N, t.lmax);
    m.derivative_scale = (s.d[N] - m.scale * tail_sum(t.nu, N, t.lmax)) / tail_sum(t.theta, N, t.lmax);
    for (int n = n_lo; n <= n_hi; n += n_step) {
      m.n.push_back(n);
      const Real model = m.derivative_scale * tail_sum(t.theta, n, l_used) + m.scale * tail_sum(t.nu, n, l_used);
      m.remainder.push_back(abs((s.d[n] - model) / m.scale));
    }
  }
  m.exponent = fitted_exponent(m.n, m.remainder);
  return m;
}

ConnectionReport crosscheck_integration(const LimitODECoeffs& c, double x_eval, int N, const PrecisionContext& ctx,
                                        double tolerance) {
  constexpr double h = 0.05;
  if (!(x_eval - h > 0 && x_eval + h < 1)) throw DomainError("crosscheck_integration: x_eval must lie in (0.05, 0.95)");
  PrecisionGuard guard(ctx);
  const FrobeniusCoeffs k = frobenius_coeffs(c, ctx);
  const FrobeniusSeries s0 = series_zero(k, Real(0), N, true, ctx);
  const FrobeniusSeries s1 = series_one(k, 2, N, false, ctx);
  const FrobeniusSeries s1log = series_one(k, 0, N, true, ctx);
  ConnectionReport rep;
  rep.x_eval = x_eval;
  rep.truncation = 0;
  struct Row {
    SeriesValue u1, u2, v1, v2;
  };
  auto row = [&](double x) {
    const Real X = x;
    Row r{evaluate(s0, X, false), evaluate(s0, X, true), evaluate(s1, X, false), evaluate(s1log, X, true)};
    for (const auto* v : {&r.u1, &r.u2, &r.v1, &r.v2}) rep.truncation = std::max(rep.truncation, v->truncation);
    return r;
  };
  const Row a = row(x_eval - h), b = row(x_eval + h), e = row(x_eval);
  // solve [v1 v2] M = [u1 u2] at the two collocation points
  const Real det = a.v1.f * b.v2.f - a.v2.f * b.v1.f;
  if (det == 0) throw DegenerateState("crosscheck_integration: singular collocation system");
  const Real m11 = (b.v2.f * a.u1.f - a.v2.f * b.u1.f) / det;
  const Real m21 = (a.v1.f * b.u1.f - b.v1.f * a.u1.f) / det;
  const Real m12 = (b.v2.f * a.u2.f - a.v2.f * b.u2.f) / det;
  const Real m22 = (a.v1.f * b.u2.f - b.v1.f * a.u2.f) / det;
  rep.matrix = {m11, m12, m21, m22};
  rep.determinant = m11 * m22 - m12 * m21;
  const Real p1 = e.v1.f * m11 + e.v2.f * m21;
  const Real p2 = e.v1.f * m12 + e.v2.f * m22;
  rep.series_mismatch = std::max(Real(abs(p1 - e.u1.f) / abs(e.u1.f)), Real(abs(p2 - e.u2.f) / abs(e.u2.f)));
  // the regular solution at 0 carried by the integrator from the first collocation point
  const LimitSolution sol = integrate_limit_ode(c, x_eval - h, a.u1.f.convert_to<double>(),
                                                a.u1.df.convert_to<double>(), {x_eval, x_eval + h});
  rep.integrator_mismatch = std::max(Real(abs(Real(sol.f[0]) - e.u1.f) / abs(e.u1.f)),
                                     Real(abs(Real(sol.f[1]) - b.u1.f) / abs(b.u1.f)));
  rep.truncation_warning = rep.truncation > tolerance;
  return rep;
}

}  // namespace rmt
