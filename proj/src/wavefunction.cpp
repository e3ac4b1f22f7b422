#include "rmt/wavefunction.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>

namespace rmt {

namespace {

struct PolyDerivs {
  Real p, dp, ddp;
};

PolyDerivs poly_derivs(const std::vector<Real>& coeffs, const Real& z) {
  PolyDerivs d{Real(0), Real(0), Real(0)};
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    d.ddp = d.ddp * z + 2 * d.dp;
    d.dp = d.dp * z + d.p;
    d.p = d.p * z + coeffs[k];
  }
  return d;
}

const std::vector<Real>& poly_row(const OPChain& chain, int n) {
  if (n < 0 || n >= static_cast<int>(chain.poly.size())) throw DomainError("wavefunction: degree beyond chain capacity");
  return chain.poly[n];
}

ResidualReport report(const std::string& id, const RationalLadderCoeffs& k, const Real& z,
                      const std::vector<Real>& terms) {
  ResidualReport rep = residual_from_terms(id, k.n, k.alpha, k.t, terms);
  rep.point = z;
  return rep;
}

}  // namespace

RationalLadderCoeffs lue_ladder_coeffs(const LadderState& s) {
  if (s.n < 1) throw DomainError("lue_ladder_coeffs: n >= 1 required");
  RationalLadderCoeffs k;
  k.n = s.n;
  k.alpha = s.alpha;
  k.t = s.t;
  k.r = s.r;
  k.R = s.R;
  k.sigma = s.sigma;
  k.alpha_n = s.alpha_n;
  k.poles = {Real(0), s.t, s.t - s.t * s.R};
  k.kappa1 = s.R / 2 - s.d_R / (2 * s.R) - s.sigma / s.t;
  k.kappa2 = s.d_R / (2 * s.R) + s.d_R / (2 * (1 - s.R));
  // sum_{j<n} R_j = -sigma_n / t
  const Real c = s.r / s.R + s.alpha / 2 + s.n;
  k.kappa1_direct = -c / s.t - s.sigma / s.t + Real(1) / 2;
  k.kappa2_direct = c / (s.t - s.t * s.R) - Real(1) / 2;
  return k;
}

RationalLadderCoeffs gue_ladder_coeffs(const GUEState& s) {
  RationalLadderCoeffs k;
  k.gue = true;
  k.n = s.n;
  k.alpha = 0;
  k.t = s.t;
  k.r = s.r;
  k.alpha_n = s.alpha;
  k.sum_alpha = s.sum_alpha;
  if (s.alpha == 0) throw DegenerateState("gue_ladder_coeffs: alpha_n = 0");
  k.poles = {s.t, s.t - s.alpha};
  const Real& a = s.alpha;
  const Real& da = s.d_alpha;
  k.kappa3 = da * da / (4 * a) - da / (2 * a) - a * a * a + 2 * s.t * a * a + (-s.t * s.t + 2 * s.n + 1) * a;
  k.kappa4 = da / (2 * a);
  return k;
}

void check_pole_distance(const RationalLadderCoeffs& k, const Real& z) {
  if (!k.gue && !(z > 0)) throw DomainError("wavefunction: LUE samples need z > 0");
  const Real guard = Real(1e-3) * std::max(Real(1), Real(abs(k.t)));
  for (const Real& p : k.poles)
    if (abs(z - p) < guard) throw DomainError("wavefunction: sample within the pole guard radius");
}

std::vector<Real> phi_terms(const RationalLadderCoeffs& k, const OPChain& chain, const Real& z) {
  check_pole_distance(k, z);
  const PolyDerivs P = poly_derivs(poly_row(chain, k.n), z);
  // phi = g P with g'/g = L and g''/g = L^2 + L'
  Real g, L, dL;
  if (k.gue) {
    g = exp(-z * z / 2);
    L = -z;
    dL = -1;
  } else {
    g = pow(z, k.alpha / 2) * exp(-z / 2);
    L = k.alpha / (2 * z) - Real(1) / 2;
    dL = -k.alpha / (2 * z * z);
  }
  const Real phi = g * P.p;
  const Real dphi = g * (P.dp + L * P.p);
  const Real ddphi = g * (P.ddp + 2 * L * P.dp + (L * L + dL) * P.p);
  if (k.gue) {
    const Real u = z - k.t, v = z - k.t + k.alpha_n;
    return {ddphi, dphi / u, -dphi / v, k.kappa3 / u * phi, k.kappa4 / v * phi, (2 * k.n + 1) * phi, -z * z * phi};
  }
  const Real u = z - k.t, v = z - k.t + k.t * k.R;
  return {ddphi,
          dphi / z,
          dphi / u,
          -dphi / v,
          -k.alpha * k.alpha / (4 * z * z) * phi,
          ((2 * k.n + k.alpha + 1) / 2 - k.kappa1 - k.kappa2) / z * phi,
          k.kappa1 / u * phi,
          k.kappa2 / v * phi,
          -phi / 4};
}

// A P'' - A' P' - A v' P' + (A B' - A' B + A sum_j A_j) P = 0, the P_n equation times A_n.
std::vector<Real> poly_terms(const RationalLadderCoeffs& k, const OPChain& chain, const Real& z) {
  check_pole_distance(k, z);
  const PolyDerivs P = poly_derivs(poly_row(chain, k.n), z);
  const Real u = z - k.t;
  Real A, dA, B, dB, dv, sumA;
  if (k.gue) {
    A = 2 * (k.alpha_n / u + 1);
    dA = -2 * k.alpha_n / (u * u);
    B = k.r / u;
    dB = -k.r / (u * u);
    dv = 2 * z;
    sumA = 2 * k.sum_alpha / u + 2 * k.n;
  } else {
    A = k.R / u + (1 - k.R) / z;
    dA = -k.R / (u * u) - (1 - k.R) / (z * z);
    B = k.r / u - (k.r + k.n) / z;
    dB = -k.r / (u * u) + (k.r + k.n) / (z * z);
    dv = 1 - k.alpha / z;
    const Real sumR = -k.sigma / k.t;
    sumA = sumR / u + (k.n - sumR) / z;
  }
  return {A * P.ddp, -dA * P.dp, -A * dv * P.dp, A * dB * P.p, -dA * B * P.p, A * sumA * P.p};
}

std::vector<ResidualReport> phi_ode_residual_lue(int n, const Real& alpha, const Real& t,
                                                 const std::vector<Real>& z_samples, const PrecisionContext& ctx) {
  if (n < 1) throw DomainError("phi_ode_residual_lue: n >= 1 required");
  PrecisionGuard guard(ctx);
  const WeightSpec spec = WeightSpec::laguerre(at_precision(alpha, ctx), at_precision(t, ctx));
  const OPChain chain = op_chain(spec, n + 1, ctx);
  const RationalLadderCoeffs k = lue_ladder_coeffs(ladder_state(chain, spec, n, ctx));
  std::vector<ResidualReport> out;
  for (const Real& z : z_samples) out.push_back(report("phi_lue", k, z, phi_terms(k, chain, at_precision(z, ctx))));
  for (const Real& z : z_samples) out.push_back(report("poly_lue", k, z, poly_terms(k, chain, at_precision(z, ctx))));
  return out;
}

std::vector<ResidualReport> phi_ode_residual_gue(int n, const Real& t, const std::vector<Real>& z_samples,
                                                 const PrecisionContext& ctx) {
  if (n < 1) throw DomainError("phi_ode_residual_gue: n >= 1 required");
  PrecisionGuard guard(ctx);
  const GUEChain c = gue_chain(at_precision(t, ctx), n + 1, ctx);
  const RationalLadderCoeffs k = gue_ladder_coeffs(gue_state(c, n, ctx));
  std::vector<ResidualReport> out;
  for (const Real& z : z_samples) out.push_back(report("phi_gue", k, z, phi_terms(k, c.chain, at_precision(z, ctx))));
  for (const Real& z : z_samples) out.push_back(report("poly_gue", k, z, poly_terms(k, c.chain, at_precision(z, ctx))));
  return out;
}

LimitResidues limit_residues_lue(double s, double sigma, double r, double dr) {
  (void)s;
  if (r == 0) throw DegenerateState("limit_residues_lue: r = 0");
  return {-dr / (2 * r) - sigma, dr / (2 * r)};
}

LimitResidues limit_residues_gue(double s, double u, double du) {
  if (u == 0) throw DegenerateState("limit_residues_gue: u = 0");
  return {du * du / (4 * u) - du / (2 * u) - s * u + u * u, du / (2 * u)};
}

namespace {

double rel_sum(std::initializer_list<double> terms) {
  double sum = 0, scale = 0;
  for (double x : terms) {
    sum += x;
    scale = std::max(scale, std::abs(x));
  }
  return scale > 0 ? std::abs(sum) / scale : 0;
}

void finish_coeffs(LimitODECoeffs& c) {
  const double s = c.s, r = c.r, dr = c.d_r;
  c.b1 = -dr * dr / 4 + 2 * s * r * r - r * r * r;
  c.b2 = -s * r * r - r * r * r;
  c.Acap = -s * r * r + 2 * r * r * r;
  const double disc = -4 * c.a2 + 4 * c.a1 + 5;
  c.lambda_real = disc >= 0;
  c.lambda_kummer = c.lambda_real ? std::sqrt(disc) / 2 : std::numeric_limits<double>::quiet_NaN();
  c.sum_identity = rel_sum({c.a0, c.a1, -c.a3, -c.b1, -c.b2});
  c.painleve_identity = rel_sum({c.a0, c.a1 * c.a1, c.a1, c.a2, c.a3});
}

}  // namespace

LimitODECoeffs limit_ode_coeffs(double s, double r, double d_r) {
  if (r == 0) throw DegenerateState("limit_ode_coeffs: r = 0");
  LimitODECoeffs c;
  c.s = s;
  c.r = r;
  c.d_r = d_r;
  c.a0 = -d_r * d_r / 4 + d_r / 2 + s * r * r - r * r * r;
  c.a1 = -d_r / 2;
  c.a2 = -s * r * r;
  c.a3 = r * r * r;
  finish_coeffs(c);
  return c;
}

LimitODECoeffs limit_ode_coeffs_from_residues(double s, double r, const LimitResidues& k) {
  if (r == 0) throw DegenerateState("limit_ode_coeffs_from_residues: r = 0");
  LimitODECoeffs c;
  c.s = s;
  c.r = r;
  c.d_r = 2 * r * k.at_shift;
  c.a0 = -r * k.at_s;
  c.a1 = -r * k.at_shift;
  c.a2 = -s * r * r;
  c.a3 = r * r * r;
  finish_coeffs(c);
  return c;
}

double p_coeff(double x) { return 1 / x - 1 / (x - 1); }

double q_coeff(const LimitODECoeffs& c, double x) { return c.a0 / x + c.a1 / (x - 1) + c.a2 + c.a3 * x; }

namespace {

template <class T>
T j_full(const LimitODECoeffs& c, const T& x) {
  const T xm = x - 1;
  return 1 / (4 * x * x) + (c.a0 - 0.5) / x - 3 / (4 * xm * xm) + (c.a1 + 0.5) / xm + c.a2 + c.a3 * x;
}

template <class T>
T j_truncated(AsymptoticRegion region, const LimitODECoeffs& c, const T& x) {
  switch (region) {
    case AsymptoticRegion::Zero:
      return 1 / (4 * x * x) + (c.a0 - 0.5) / x + c.a2 - c.a1 - 1.25;
    case AsymptoticRegion::One: {
      const T xm = x - 1;
      return -3 / (4 * xm * xm) + (c.a1 + 0.5) / xm - c.a1 * c.a1 - c.a1 - 0.25;
    }
    case AsymptoticRegion::Infinity:
      return c.a2 + c.a3 * x;
  }
  return T(0);
}

}  // namespace

double j_function(const LimitODECoeffs& c, double x) { return j_full(c, x); }

const char* region_name(AsymptoticRegion region) {
  switch (region) {
    case AsymptoticRegion::Zero: return "zero";
    case AsymptoticRegion::One: return "one";
    case AsymptoticRegion::Infinity: return "infinity";
  }
  return "?";
}

double j_approx(AsymptoticRegion region, const LimitODECoeffs& c, double x) { return j_truncated(region, c, x); }

namespace {

using OdeState = std::array<double, 2>;

bool crosses_singular_point(double a, double b) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  for (double p : {0.0, 1.0})
    if (lo <= p && p <= hi) return true;
  return false;
}

// (f, f') at each target, integrated from x0 in both directions.
std::vector<OdeState> march(const LimitODECoeffs& c, double x0, const OdeState& y0, const std::vector<double>& targets,
                            double tol) {
  namespace ode = boost::numeric::odeint;
  for (double x : targets)
    if (!std::isfinite(x) || crosses_singular_point(x0, x))
      throw DomainError("integrate_limit_ode: path crosses a singular point");
  auto rhs = [&c](const OdeState& y, OdeState& dy, double x) {
    dy[0] = y[1];
    dy[1] = -p_coeff(x) * y[1] - q_coeff(c, x) * y[0];
  };
  std::vector<OdeState> out(targets.size());
  for (int dir : {1, -1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i] == x0) out[i] = y0;
      else if (dir > 0 ? targets[i] > x0 : targets[i] < x0) idx.push_back(i);
    }
    if (idx.empty()) continue;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return dir > 0 ? targets[a] < targets[b] : targets[a] > targets[b];
    });
    std::vector<double> times{x0};
    for (std::size_t i : idx) times.push_back(targets[i]);
    OdeState y = y0;
    std::size_t k = 0;
    auto observer = [&](const OdeState& v, double) {
      if (k > 0) out[idx[k - 1]] = v;
      ++k;
    };
    ode::integrate_times(ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<OdeState>()), rhs, y,
                         times.begin(), times.end(), dir * 1e-3, observer);
  }
  return out;
}

}  // namespace

LimitSolution integrate_limit_ode(const LimitODECoeffs& c, double x0, double f0, double df0,
                                  const std::vector<double>& xs, double tol) {
  if (!(tol > 0)) throw DomainError("integrate_limit_ode: tol must be positive");
  if (x0 == 0 || x0 == 1) throw DomainError("integrate_limit_ode: x0 is a singular point");
  LimitSolution sol;
  sol.x0 = x0;
  sol.f0 = f0;
  sol.df0 = df0;
  sol.tol = tol;
  sol.x = xs;
  for (const auto& v : march(c, x0, {f0, df0}, xs, tol)) {
    sol.f.push_back(v[0]);
    sol.df.push_back(v[1]);
  }
  return sol;
}

LimitResidual limit_ode_residual(const LimitODECoeffs& c, const LimitSolution& sol, double step) {
  if (!(step > 0)) throw DomainError("limit_ode_residual: step must be positive");
  // sixth-order central differences; the step shrinks toward the singular points
  constexpr int offsets[6] = {-3, -2, -1, 1, 2, 3};
  constexpr double weights[6] = {-1, 9, -45, 45, -9, 1};
  std::vector<double> h(sol.x.size()), stencil;
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    const double x = sol.x[i];
    h[i] = step * std::min(1.0, 4 * std::min(std::abs(x), std::abs(x - 1)));
    for (int j : offsets) stencil.push_back(x + j * h[i]);
  }
  const auto ys = march(c, sol.x0, {sol.f0, sol.df0}, stencil, sol.tol);
  LimitResidual out;
  for (auto* rep : {&out.f_form, &out.F_form}) {
    rep->t = c.s;
    rep->alpha = 0;
    rep->relative = -1;
  }
  out.f_form.identity_id = "limit_f_form";
  out.F_form.identity_id = "limit_F_form";
  // F = f sqrt|x/(x-1)| up to the constant fixed at x0, so F' = m (f' + p f / 2)
  auto dF = [](double x, double f, double df) { return std::sqrt(std::abs(x / (x - 1))) * (df + p_coeff(x) * f / 2); };
  auto update = [](ResidualReport& rep, std::vector<double>& all, double x, std::initializer_list<double> terms) {
    double sum = 0, scale = 0;
    for (double v : terms) {
      sum += v;
      scale = std::max(scale, std::abs(v));
    }
    if (scale == 0) scale = 1;
    const double res = std::abs(sum);
    all.push_back(res / scale);
    if (res / scale > rep.relative) {
      rep.residual = res;
      rep.scale = scale;
      rep.relative = res / scale;
      rep.point = x;
    }
  };
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    const double x = sol.x[i], f = sol.f[i], df = sol.df[i];
    double ddf = 0, ddF = 0;
    for (int j = 0; j < 6; ++j) {
      const auto& y = ys[6 * i + j];
      ddf += weights[j] * y[1];
      ddF += weights[j] * dF(x + offsets[j] * h[i], y[0], y[1]);
    }
    ddf /= 60 * h[i];
    ddF /= 60 * h[i];
    const double F = std::sqrt(std::abs(x / (x - 1))) * f;
    update(out.f_form, out.f_relative, x, {ddf, p_coeff(x) * df, q_coeff(c, x) * f});
    const double xm = x - 1;
    update(out.F_form, out.F_relative, x,
           {ddF, F / (4 * x * x), (c.a0 - 0.5) / x * F, -3 * F / (4 * xm * xm), (c.a1 + 0.5) / xm * F, c.a2 * F,
            c.a3 * x * F});
  }
  return out;
}

namespace {

Real real_cbrt(const Real& v) { return v < 0 ? Real(-cbrt(Real(-v))) : Real(cbrt(v)); }

LocalApproximant evaluate(AsymptoticRegion region, const LimitODECoeffs& c, const std::array<double, 2>& k,
                          const Real& x, const PrecisionContext& ctx) {
  LocalApproximant out;
  const Real C1 = k[0], C2 = k[1];
  switch (region) {
    case AsymptoticRegion::Zero: {
      if (!c.lambda_real) throw DomainError("local_asymptotic: -4 a2 + 4 a1 + 5 < 0, lambda is not real");
      if (!(x > 0)) throw DomainError("local_asymptotic: zero region needs x > 0");
      const Real lam = sqrt(-4 * Real(c.a2) + 4 * Real(c.a1) + 5) / 2;
      if (lam == 0) throw DomainError("local_asymptotic: lambda = 0");
      out.degenerate = std::abs(c.a0 - 0.5) <= 1e-12;
      const Real mu = Real(1) / 2 - (Real(c.a0) - Real(1) / 2) / (2 * lam);
      const Real z = 2 * lam * x;
      Real v = 0;
      if (C1 != 0) v += C1 * kummer_M(mu, Real(1), z, ctx);
      if (C2 != 0) v += C2 * kummer_U(mu, Real(1), z, ctx);
      out.value = sqrt(z) * exp(-lam * x) * v;
      return out;
    }
    case AsymptoticRegion::One: {
      if (x == 1) throw DomainError("local_asymptotic: x = 1");
      const Real b = Real(c.a1) + Real(1) / 2;
      const Real root = sqrt(abs(x - 1));
      out.value = (C1 * exp(b * x) + C2 * (b * x - Real(c.a1)) * exp(-b * x)) / root;
      return out;
    }
    case AsymptoticRegion::Infinity: {
      if (c.a3 == 0) throw DomainError("local_asymptotic: a3 = 0");
      const Real cr = real_cbrt(Real(c.a3));
      const Real arg = -Real(c.a2) / (cr * cr) - cr * x;
      const AiryValues a = airy(arg, ctx);
      out.value = C1 * a.ai + C2 * a.bi;
      return out;
    }
  }
  return out;
}

}  // namespace

LocalApproximant local_asymptotic(AsymptoticRegion region, const LimitODECoeffs& c,
                                  const std::array<double, 2>& constants, const Real& x,
                                  const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx);
  return evaluate(region, c, constants, at_precision(x, ctx), ctx);
}

double local_asymptotic_residual(AsymptoticRegion region, const LimitODECoeffs& c,
                                 const std::array<double, 2>& constants, double x, const PrecisionContext& ctx) {
  const PrecisionContext hi = ctx.raised(10);
  PrecisionGuard guard(hi);
  const Real X = x;
  const Real h = pow(Real(10), -hi.digits() / 3);
  const Real f0 = evaluate(region, c, constants, X, hi).value;
  const Real fp = evaluate(region, c, constants, X + h, hi).value;
  const Real fm = evaluate(region, c, constants, X - h, hi).value;
  const Real dd = (fp - 2 * f0 + fm) / (h * h);
  const Real jf = j_truncated(region, c, X) * f0;
  const Real scale = std::max(Real(abs(dd)), Real(abs(jf)));
  if (scale == 0) return 0;
  return Real(abs(dd + jf) / scale).convert_to<double>();
}

}  // namespace rmt
