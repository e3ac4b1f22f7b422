#include "rmt/chazy.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "rmt/gue_ensemble.hpp"
#include "rmt/lue_ensemble.hpp"

namespace rmt {

namespace {

ResidualReport report(const std::string& id, const Real& t, const Real& diff, const Real& scale) {
  ResidualReport rep;
  rep.identity_id = id;
  rep.t = t;
  rep.alpha = 0;
  rep.residual = abs(diff);
  rep.scale = scale > 0 ? scale : Real(1);
  rep.relative = rep.residual / rep.scale;
  return rep;
}

template <class T>
Real modulus(const CPair<T>& z) {
  return sqrt(z.re * z.re + z.im * z.im);
}

}  // namespace

ResidualReport rho_ode_residual_pv(const SigmaFormPV& v, const RhoSample& p) {
  const Real s = v.nu1 + v.nu2 + v.nu3, e = v.nu1 * v.nu2 + v.nu1 * v.nu3 + v.nu2 * v.nu3, q = v.nu1 * v.nu2 * v.nu3;
  const Real ar = abs(p.rho), at = abs(p.t);
  // the scale is the size of the individual pieces, so cancellation inside either side is not rewarded
  const Real lmag = at * (abs(p.d_rho) + at * abs(p.dd_rho)) + 8 * ar * ar * ar + 6 * abs(s) * ar * ar +
                    4 * abs(e) * ar + 2 * abs(q);
  const Real fmag = 4 * ar + abs(s) + at;
  const Real bmag = p.t * p.t * p.d_rho * p.d_rho + 4 * pow(ar, 4) + 4 * abs(s) * pow(ar, 3) + 4 * abs(e) * ar * ar +
                    4 * abs(q) * ar;
  return report("rho_pv", p.t, rho_pv_difference(v, p.t, p.rho, p.d_rho, p.dd_rho),
                std::max(Real(lmag * lmag), Real(fmag * fmag * bmag)));
}

ResidualReport rho_ode_residual_piv(const SigmaFormPIV& v, const RhoSample& p) {
  const Real s = v.nu1 + v.nu2, q = v.nu1 * v.nu2;
  const Real ar = abs(p.rho);
  const Real lmag = abs(p.dd_rho) + 6 * ar * ar + 4 * abs(s) * ar + 2 * abs(q);
  const Real rmag = 4 * p.t * p.t * (p.d_rho * p.d_rho + 4 * pow(ar, 3) + 4 * abs(s) * ar * ar + 4 * abs(q) * ar);
  return report("rho_piv", p.t, rho_piv_difference(v, p.t, p.rho, p.d_rho, p.dd_rho),
                std::max(Real(lmag * lmag), rmag));
}

ChazyPathReport chazy_second_residual(const ChazyParams& k, const SigmaFormPV& nu, const std::vector<RhoSample>& path,
                                      const PrecisionContext& ctx) {
  ChazyPathReport out;
  out.worst = 0;
  out.branch = "z = ln|t/2| - i pi/2 for t > 0, ln|t/2| + i pi/2 for t < 0";
  const Real half_pi = pi(ctx) / 2;
  const Real sum_nu = nu.nu1 + nu.nu2 + nu.nu3;
  const Real ab = sqrt(k.beta1_re * k.beta1_re + k.beta1_im * k.beta1_im);
  for (const RhoSample& p : path) {
    if (p.t == 0) throw DomainError("chazy_second_residual: t = 0 has no preimage z");
    const Real re_z = log(abs(p.t) / 2);
    const Real im_z = p.t > 0 ? Real(-half_pi) : half_pi;
    const Real m = exp(re_z);
    const CPair<Real> ez(m * cos(im_z), m * sin(im_z));
    const auto pt = chazy_second_point<Real>(sum_nu, ez, CPair<Real>(p.rho), CPair<Real>(p.d_rho),
                                             CPair<Real>(p.dd_rho));
    const CPair<Real> diff = chazy_second_difference(k, pt);
    const Real th = modulus(pt.theta), w = modulus(pt.theta - pt.ez);
    const Real lmag = modulus(pt.dd_theta) + 2 * th * th * th + abs(k.alpha1) * th + ab;
    const Real bmag = pow(modulus(pt.d_theta), 2) + pow(th, 4) + abs(k.alpha1) * th * th + 2 * ab * th + abs(k.gamma1);
    ResidualReport rep = report("chazy_second", p.t, modulus(diff), std::max(Real(lmag * lmag), Real(4 * w * w * bmag)));
    rep.point = re_z;
    out.worst = std::max(out.worst, rep.relative);
    out.points.push_back(rep);
  }
  return out;
}

ChazyPathReport chazy_first_residual(const ChazyParams& k, const SigmaFormPIV& nu, const std::vector<RhoSample>& path) {
  ChazyPathReport out;
  out.worst = 0;
  out.branch = "z = sqrt(2) t (real, no branch)";
  for (const RhoSample& p : path) {
    const Real th = -p.rho / 2 - (nu.nu1 + nu.nu2) / 6;
    const Real ath = abs(th);
    const Real lmag = abs(p.dd_rho) / 4 + 6 * ath * ath + abs(k.alpha1);
    const Real rmag = 2 * p.t * p.t *
                      (p.d_rho * p.d_rho / 8 + 4 * ath * ath * ath + 2 * abs(k.alpha1) * ath + abs(k.beta1_re));
    ResidualReport rep = report("chazy_first", p.t, chazy_first_difference(k, nu, p.t, p.rho, p.d_rho, p.dd_rho),
                                std::max(Real(lmag * lmag), rmag));
    rep.point = sqrt(Real(2)) * p.t;
    out.worst = std::max(out.worst, rep.relative);
    out.points.push_back(rep);
  }
  return out;
}

namespace {

AffineNu affine(int c0, int cn, int ca, int cb) { return {Rational(c0), Rational(cn), Rational(ca), Rational(cb)}; }

AffineNu pv_shift(const std::vector<AffineNu>& nu) {
  // -(1/2) sum nu
  AffineNu s{0, 0, 0, 0};
  for (const AffineNu& a : nu) {
    s.c0 -= a.c0 / 2;
    s.cn -= a.cn / 2;
    s.ca -= a.ca / 2;
    s.cb -= a.cb / 2;
  }
  return s;
}

AffineNu piv_shift(const std::vector<AffineNu>& nu) {
  AffineNu s{0, 0, 0, 0};
  for (const AffineNu& a : nu) {
    s.c0 -= a.c0 / 6;
    s.cn -= a.cn / 6;
  }
  return s;
}

std::vector<ExampleSpec> build_table() {
  std::vector<ExampleSpec> t;
  auto pv = [&](ExampleId id, std::string name, std::vector<AffineNu> nu, std::string text, std::string rho,
                std::string tmap) {
    const AffineNu sh = pv_shift(nu);
    t.push_back({id, std::move(name), ChazyMember::Second, std::move(nu), std::move(text), std::move(rho),
                 std::move(tmap), sh});
  };
  auto piv = [&](ExampleId id, std::string name, std::string rho) {
    std::vector<AffineNu> nu{affine(0, 0, 0, 0), affine(0, 2, 0, 0)};
    const AffineNu sh = piv_shift(nu);
    t.push_back({id, std::move(name), ChazyMember::First, std::move(nu), "(0, 2n)", std::move(rho), "t = z/sqrt(2)",
                 sh});
  };
  pv(ExampleId::LUE_Largest, "lue_largest", {affine(0, 0, 0, 0), affine(0, 1, 0, 0), affine(0, 1, 1, 0)},
     "(0, n, n+alpha)", "rho(t) = r_n(t)", "t = 2i e^z");
  pv(ExampleId::MIMO_MGF, "mimo_mgf", {affine(0, 0, 0, 1), affine(0, -1, 0, 0), affine(0, -1, -1, 0)},
     "(lambda, -n, -n-alpha)", "rho(t) = -r_n(t)", "t = 2i e^z");
  pv(ExampleId::TimeDependentJacobi, "time_dependent_jacobi",
     {affine(0, 0, -1, 0), affine(0, 1, 0, 0), affine(0, 1, 0, 1)}, "(-alpha, n, n+beta)", "rho(t) = Xi'(t) = -r_n(t/2)",
     "t = 2i e^z, so t/2 = i e^z");
  pv(ExampleId::PollaczekJacobi, "pollaczek_jacobi", {affine(0, -1, -1, -1), affine(0, 1, 0, 0), affine(0, 0, 0, -1)},
     "(-(n+alpha+beta), n, -beta)", "rho(t) = (2n+alpha+beta) r*_n(t)/t - n", "t = 2i e^z");
  piv(ExampleId::GUE_Largest, "gue_largest", "rho(t) = Xi'(t) = 2 r_n(t), Xi = d/dt ln D_n");
  piv(ExampleId::GUE_Gap, "gue_gap", "rho(t) = Xi'(t) = 2 r_n(t)");
  return t;
}

}  // namespace

std::vector<ExampleSpec> example_table() { return build_table(); }

const ExampleSpec& example(ExampleId id) {
  static const std::vector<ExampleSpec> table = build_table();
  for (const ExampleSpec& e : table)
    if (e.id == id) return e;
  throw DomainError("example: unknown id");
}

SigmaFormPVT<Rational> pv_nu(const ExampleSpec& e, const Rational& n, const Rational& alpha, const Rational& b) {
  if (e.member != ChazyMember::Second) throw DomainError("pv_nu: example carries a P_IV map");
  return {e.nu_map[0].at(n, alpha, b), e.nu_map[1].at(n, alpha, b), e.nu_map[2].at(n, alpha, b)};
}

SigmaFormPIVT<Rational> piv_nu(const ExampleSpec& e, const Rational& n) {
  if (e.member != ChazyMember::First) throw DomainError("piv_nu: example carries a P_V map");
  return {e.nu_map[0].at(n, 0, 0), e.nu_map[1].at(n, 0, 0)};
}

ChazyParamsT<Rational> displayed_params(ExampleId id, const Rational& n, const Rational& a, const Rational& b) {
  ChazyParamsT<Rational> p;
  switch (id) {
    case ExampleId::LUE_Largest:
      p.alpha1 = (3 * a * a + 4 * n * n + 4 * a * n) / 2;
      p.beta1_im = a * a * (a + 2 * n) / 2;
      p.gamma1 = (2 * n - a) * (a + 2 * n) * (a + 2 * n) * (3 * a + 2 * n) / 16;
      break;
    case ExampleId::MIMO_MGF:
    case ExampleId::TimeDependentJacobi:
      // the two displays coincide with lambda and beta in the same slot
      p.alpha1 = (4 * n * n + 4 * n * a + 3 * a * a + 4 * n * b + 2 * a * b + 3 * b * b) / 2;
      p.beta1_im = -(a - b) * (a + b) * (2 * n + a + b) / 2;
      p.gamma1 = (2 * n + a - b) * (2 * n - a + b) * (2 * n + 3 * a + b) * (2 * n + a + 3 * b) / 16;
      break;
    case ExampleId::PollaczekJacobi:
      p.alpha1 = (8 * n * n + 8 * n * a + 3 * a * a + 8 * n * b + 4 * a * b + 4 * b * b) / 2;
      p.beta1_im = -a * (2 * n + a) * (2 * n + a + 2 * b) / 2;
      p.gamma1 = -(a - 2 * b) * (a + 2 * b) * (4 * n + a + 2 * b) * (4 * n + 3 * a + 2 * b) / 16;
      break;
    case ExampleId::GUE_Largest:
    case ExampleId::GUE_Gap:
      p.member = ChazyMember::First;
      p.alpha1 = -Rational(2, 3) * n * n;
      p.beta1_re = -Rational(8, 27) * n * n * n;
      break;
  }
  return p;
}

ChazyParamsT<Rational> mapped_params(const ExampleSpec& e, const Rational& n, const Rational& alpha,
                                     const Rational& b) {
  if (e.member == ChazyMember::Second) return chazy_second_params(pv_nu(e, n, alpha, b));
  return chazy_first_params(piv_nu(e, n));
}

std::string to_string(const Rational& q) { return q.str(); }

std::vector<RhoSample> lue_rho_path(int n, const Real& alpha, const std::vector<Real>& ts, const PrecisionContext& ctx) {
  std::vector<RhoSample> out;
  out.reserve(ts.size());
  for (const Real& t : ts) {
    const WeightSpec spec = WeightSpec::laguerre(alpha, t);
    const OPChain chain = op_chain(spec, n + 1, ctx);
    const LadderState s = ladder_state(chain, spec, n, ctx);
    out.push_back({t, s.r, s.d_r, s.dd_r});
  }
  return out;
}

std::vector<RhoSample> gue_rho_path(int n, const std::vector<Real>& ts, const PrecisionContext& ctx) {
  std::vector<RhoSample> out;
  out.reserve(ts.size());
  for (const Real& t : ts) {
    const GUEChain c = gue_chain(t, n + 1, ctx);
    const GUEState s = gue_state(c, n, ctx);
    out.push_back({t, 2 * s.r, 2 * s.d_r, 2 * s.dd_r});
  }
  return out;
}

namespace {

using State = std::array<double, 3>;  // Xi, rho, rho'

template <class Rhs>
std::vector<RhoSample> integrate_path(Rhs rhs, State y0, double t0, const std::vector<double>& ts) {
  namespace ode = boost::numeric::odeint;
  std::vector<RhoSample> out(ts.size());
  auto record = [&](std::size_t i, const State& y, double t) {
    State dy;
    rhs(y, dy, t);
    out[i] = {Real(t), Real(y[1]), Real(y[2]), Real(dy[2])};
  };
  // march outward from t0 in each direction so every target is reached monotonically
  for (int dir : {1, -1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if ((dir > 0 && ts[i] >= t0) || (dir < 0 && ts[i] < t0)) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dir * ts[a] < dir * ts[b]; });
    State y = y0;
    double t = t0;
    for (std::size_t i : idx) {
      auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
      double h = dir * 1e-3;
      // a movable pole between t and the target stalls the step size; give up instead
      for (int steps = 0; t != ts[i]; ++steps) {
        if (steps > 200000) throw ConvergenceError("manufactured path: step budget exhausted (pole on the path?)");
        if (dir * (t + h - ts[i]) > 0) h = ts[i] - t;
        if (stepper.try_step(rhs, y, t, h) == ode::success && dir * (t - ts[i]) >= 0) t = ts[i];
      }
      record(i, y, t);
    }
  }
  return out;
}

}  // namespace

std::vector<RhoSample> manufactured_pv_path(const SigmaFormPV& nu, double t0, double rho0, double d_rho0,
                                            const std::vector<double>& ts) {
  const double s = (nu.nu1 + nu.nu2 + nu.nu3).convert_to<double>();
  const double e = (nu.nu1 * nu.nu2 + nu.nu1 * nu.nu3 + nu.nu2 * nu.nu3).convert_to<double>();
  const double q = (nu.nu1 * nu.nu2 * nu.nu3).convert_to<double>();
  auto quartic = [=](double r) { return r * (r * (r * (r + s) + e) + q); };
  auto d_quartic = [=](double r) { return r * (r * (4 * r + 3 * s) + 2 * e) + q; };
  const double disc = t0 * t0 * d_rho0 * d_rho0 + 4 * quartic(rho0);
  if (disc < 0) throw DomainError("manufactured_pv_path: initial data admit no real Xi");
  if (t0 == 0) throw DomainError("manufactured_pv_path: t0 = 0 is singular");
  for (double t : ts)
    if (t * t0 <= 0) throw DomainError("manufactured_pv_path: path crosses t = 0");
  State y0{std::sqrt(disc) + t0 * rho0 - 2 * rho0 * rho0 - s * rho0, rho0, d_rho0};
  auto rhs = [=](const State& y, State& dy, double t) {
    const double r = y[1];
    const double big_e = y[0] - t * r + 2 * r * r + s * r;
    dy[0] = r;
    dy[1] = y[2];
    dy[2] = (big_e * (4 * r + s - t) - 2 * d_quartic(r)) / (t * t) - y[2] / t;
  };
  return integrate_path(rhs, y0, t0, ts);
}

std::vector<RhoSample> manufactured_piv_path(const SigmaFormPIV& nu, double t0, double rho0, double d_rho0,
                                             const std::vector<double>& ts) {
  const double s = (nu.nu1 + nu.nu2).convert_to<double>(), q = (nu.nu1 * nu.nu2).convert_to<double>();
  auto cubic = [=](double r) { return r * (r + nu.nu1.convert_to<double>()) * (r + nu.nu2.convert_to<double>()); };
  auto d_cubic = [=](double r) { return 3 * r * r + 2 * s * r + q; };
  const double disc = d_rho0 * d_rho0 + 4 * cubic(rho0);
  if (disc < 0) throw DomainError("manufactured_piv_path: initial data admit no real Xi");
  State y0{t0 * rho0 - std::sqrt(disc) / 2, rho0, d_rho0};
  auto rhs = [=](const State& y, State& dy, double t) {
    dy[0] = y[1];
    dy[1] = y[2];
    dy[2] = 4 * t * (t * y[1] - y[0]) - 2 * d_cubic(y[1]);
  };
  return integrate_path(rhs, y0, t0, ts);
}

}  // namespace rmt
