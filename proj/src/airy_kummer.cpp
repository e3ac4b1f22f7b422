#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

#include "rmt/special_fn.hpp"

namespace rmt {

namespace {

const double kLog10e = 0.4342944819032518;

bool is_nonpositive_integer(const Real& x) { return x <= 0 && x == floor(x); }

// 1/Γ(x), zero at the poles.
Real rgamma(const Real& x) {
  if (is_nonpositive_integer(x)) return Real(0);
  return 1 / boost::math::tgamma(x);
}

// Airy power series from y'' = x y, for the pair with y(0)=c0, y'(0)=c1.
void airy_maclaurin(const Real& x, const Real& c0, const Real& c1, const Real& eps, Real& y, Real& dy) {
  // a_{k+3} = a_k / ((k+2)(k+3)); track the three residues separately.
  Real a0 = c0, a1 = c1;
  Real x3 = x * x * x;
  Real p0 = 1, p1 = x;  // x^{3m}, x^{3m+1}
  y = a0 + a1 * x;
  dy = a1;
  for (int m = 0; m < 100000; ++m) {
    int k0 = 3 * m, k1 = 3 * m + 1;
    a0 /= Real((k0 + 2) * (k0 + 3));
    a1 /= Real((k1 + 2) * (k1 + 3));
    Real q0 = p0 * x * x;  // x^{3m+2}
    Real q1 = p1 * x * x;  // x^{3m+3}
    p0 *= x3;
    p1 *= x3;
    Real t0 = a0 * p0, t1 = a1 * p1;
    Real d0 = a0 * (k0 + 3) * q0, d1 = a1 * (k1 + 3) * q1;
    y += t0 + t1;
    dy += d0 + d1;
    if (m > 2 && abs(t0) + abs(t1) < eps * abs(y) && abs(d0) + abs(d1) < eps * (abs(dy) + eps)) break;
  }
}

AiryValues airy_asymptotic(const Real& x, const Real& eps) {
  const Real pi = boost::math::constants::pi<Real>();
  const Real sqpi = sqrt(pi);
  Real ax = abs(x);
  Real zeta = 2 * ax * sqrt(ax) / 3;
  Real q = sqrt(sqrt(ax));  // |x|^{1/4}
  // u_k, v_k with sums truncated at the smallest term.
  std::vector<Real> u{Real(1)}, v{Real(1)};
  Real last = 1;
  for (int k = 1; k < 10000; ++k) {
    Real uk = u.back() * Real((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / (Real(216) * k * (2 * k - 1));
    Real vk = -uk * Real(6 * k + 1) / Real(6 * k - 1);
    Real mag = abs(uk) / pow(zeta, k);
    if (mag > last) break;
    u.push_back(uk);
    v.push_back(vk);
    last = mag;
    if (mag < eps) break;
  }
  AiryValues r;
  if (x > 0) {
    Real su = 0, sua = 0, sv = 0, sva = 0, zk = 1;
    for (std::size_t k = 0; k < u.size(); ++k) {
      Real sgn = (k % 2) ? -1 : 1;
      sua += sgn * u[k] / zk;
      su += u[k] / zk;
      sva += sgn * v[k] / zk;
      sv += v[k] / zk;
      zk *= zeta;
    }
    Real em = exp(-zeta), ep = exp(zeta);
    r.ai = em / (2 * sqpi * q) * sua;
    r.dai = -q * em / (2 * sqpi) * sva;
    r.bi = ep / (sqpi * q) * su;
    r.dbi = q * ep / sqpi * sv;
  } else {
    Real ue = 0, uo = 0, ve = 0, vo = 0, zk = 1;
    for (std::size_t k = 0; k < u.size(); ++k) {
      Real sgn = ((k / 2) % 2) ? -1 : 1;
      if (k % 2 == 0) {
        ue += sgn * u[k] / zk;
        ve += sgn * v[k] / zk;
      } else {
        uo += sgn * u[k] / zk;
        vo += sgn * v[k] / zk;
      }
      zk *= zeta;
    }
    Real ph = zeta - pi / 4, c = cos(ph), s = sin(ph);
    r.ai = (c * ue + s * uo) / (sqpi * q);
    r.dai = q * (s * ve - c * vo) / sqpi;
    r.bi = (-s * ue + c * uo) / (sqpi * q);
    r.dbi = q * (c * ve + s * vo) / sqpi;
  }
  return r;
}

}  // namespace

AiryValues airy(const Real& x_in, const PrecisionContext& ctx) {
  if (boost::multiprecision::isnan(x_in) || is_infinite(x_in)) throw DomainError("Airy argument must be finite");
  const double xd = x_in.convert_to<double>();
  const double zeta = 2.0 / 3.0 * std::pow(std::abs(xd), 1.5);
  // The asymptotic series bottoms out near e^{-2 zeta}.
  const double zeta_switch = (ctx.digits() + 3) / kLog10e / 2;
  AiryValues out;
  if (zeta > zeta_switch) {
    PrecisionContext work = ctx.raised(10);
    PrecisionGuard g(work);
    out = airy_asymptotic(at_precision(x_in, work), work.epsilon() / 1000);
  } else {
    int extra = static_cast<int>(2 * zeta * kLog10e) + 10;
    PrecisionContext work = ctx.raised(extra);
    PrecisionGuard g(work);
    Real x = at_precision(x_in, work);
    Real g23 = boost::math::tgamma(Real(2) / 3), g13 = boost::math::tgamma(Real(1) / 3);
    Real c1 = pow(Real(3), Real(-2) / 3) / g23;  // Ai(0)
    Real c2 = pow(Real(3), Real(-1) / 3) / g13;  // -Ai'(0)
    Real eps = work.epsilon() / 1000;
    Real f, df, gg, dg;
    airy_maclaurin(x, Real(1), Real(0), eps, f, df);
    airy_maclaurin(x, Real(0), Real(1), eps, gg, dg);
    Real s3 = sqrt(Real(3));
    out.ai = c1 * f - c2 * gg;
    out.dai = c1 * df - c2 * dg;
    out.bi = s3 * (c1 * f + c2 * gg);
    out.dbi = s3 * (c1 * df + c2 * dg);
  }
  if (is_infinite(out.bi)) throw OverflowError("Bi overflow");
  return {at_precision(out.ai, ctx), at_precision(out.dai, ctx), at_precision(out.bi, ctx),
          at_precision(out.dbi, ctx)};
}

namespace {

// Σ (a)_k / (b)_k z^k / k! for z >= 0 at the current precision.
Real m_series(const Real& a, const Real& b, const Real& z, const Real& eps) {
  Real term = 1, sum = 1;
  for (int k = 0; k < 1000000; ++k) {
    term *= (a + k) / (b + k) * z / (k + 1);
    sum += term;
    if (term == 0) break;
    if (abs(term) < eps * abs(sum) && k > abs(a).convert_to<double>() + z.convert_to<double>()) break;
  }
  return sum;
}

int kummer_extra_digits(const Real& z) {
  return static_cast<int>(abs(z).convert_to<double>() * kLog10e) + 20;
}

// U(a, n+1, z), integer n >= 0, a not a non-positive integer, z > 0.
Real u_integer_b(const Real& a, int n, const Real& z, const Real& eps) {
  Real sum_log = 0;
  Real lead = rgamma(a - n);
  if (lead != 0) {
    Real lz = log(z);
    Real psi_a = boost::math::digamma(a);
    Real psi_1 = boost::math::digamma(Real(1));
    Real psi_n1 = boost::math::digamma(Real(n + 1));
    Real coef = 1;  // (a)_k / ((n+1)_k k!) z^k
    for (int k = 0; k < 1000000; ++k) {
      Real term = coef * (lz + psi_a - psi_1 - psi_n1);
      sum_log += term;
      if (k > 5 && abs(term) < eps * abs(sum_log) && k > z.convert_to<double>() + abs(a).convert_to<double>()) break;
      psi_a += 1 / (a + k);
      psi_1 += Real(1) / (k + 1);
      psi_n1 += Real(1) / (n + k + 1);
      coef *= (a + k) / Real((n + 1 + k) * (k + 1)) * z;
    }
    Real nf = boost::math::factorial<Real>(n);
    sum_log *= ((n + 1) % 2 ? -1 : 1) * lead / nf;
  }
  Real finite = 0;
  for (int k = 1; k <= n; ++k) {
    Real poch = 1;  // (1 - a + k)_{n-k}
    for (int j = 0; j < n - k; ++j) poch *= (1 - a + k + j);
    finite += boost::math::factorial<Real>(k - 1) * poch / boost::math::factorial<Real>(n - k) * pow(z, -k);
  }
  return sum_log + rgamma(a) * finite;
}

}  // namespace

Real kummer_M(const Real& mu, const Real& nu, const Real& z_in, const PrecisionContext& ctx) {
  if (is_nonpositive_integer(nu)) throw DomainError("kummer_M: nu is a non-positive integer");
  PrecisionContext work = ctx.raised(kummer_extra_digits(z_in));
  PrecisionGuard g(work);
  Real a = at_precision(mu, work), b = at_precision(nu, work), z = at_precision(z_in, work);
  Real eps = work.epsilon() / 1000;
  Real r = (z < 0) ? exp(z) * m_series(b - a, b, -z, eps) : m_series(a, b, z, eps);
  return at_precision(r, ctx);
}

Real kummer_U(const Real& mu, const Real& nu, const Real& z_in, const PrecisionContext& ctx) {
  if (!(z_in > 0)) throw DomainError("kummer_U requires z > 0");
  PrecisionContext work = ctx.raised(kummer_extra_digits(z_in));
  PrecisionGuard g(work);
  Real a = at_precision(mu, work), b = at_precision(nu, work), z = at_precision(z_in, work);
  Real eps = work.epsilon() / 1000;
  Real prefactor = 1;
  // Reflect b <= 0 to 2 - b >= 2: U(a,b,z) = z^{1-b} U(a-b+1, 2-b, z).
  if (b < 1) {
    prefactor = pow(z, 1 - b);
    a = a - b + 1;
    b = 2 - b;
  }
  Real r;
  if (is_nonpositive_integer(a)) {
    int m = static_cast<int>((-a).convert_to<double>() + 0.5);
    Real poch = 1;
    for (int j = 0; j < m; ++j) poch *= b + j;
    r = ((m % 2) ? -1 : 1) * poch * m_series(a, b, z, eps);
  } else if (b == floor(b)) {
    r = u_integer_b(a, static_cast<int>(b.convert_to<double>() + 0.5) - 1, z, eps);
  } else {
    Real t1 = boost::math::tgamma(1 - b) * rgamma(a - b + 1) * m_series(a, b, z, eps);
    Real t2 = boost::math::tgamma(b - 1) * rgamma(a) * pow(z, 1 - b) * m_series(a - b + 1, 2 - b, z, eps);
    r = t1 + t2;
  }
  if (boost::multiprecision::isnan(r) || is_infinite(r)) throw DomainError("kummer_U parameter degeneracy");
  return at_precision(prefactor * r, ctx);
}

}  // namespace rmt
