#include "rmt/special_fn.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <map>
#include <mutex>

namespace rmt {

PrecisionContext::PrecisionContext(int decimal_digits) : digits_(decimal_digits) {
  if (decimal_digits < 16) throw DomainError("precision below 16 decimal digits");
}

Real PrecisionContext::epsilon() const {
  PrecisionGuard g(*this);
  return pow(Real(10), 2 - digits_);
}

PrecisionGuard::PrecisionGuard(const PrecisionContext& ctx) : saved_(Real::default_precision()) {
  Real::default_precision(static_cast<unsigned>(ctx.digits()));
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_); }

Real at_precision(const Real& x, const PrecisionContext& ctx) {
  Real r(x);
  r.precision(static_cast<unsigned>(ctx.digits()));
  return r;
}

Real parse_real(const std::string& text, const PrecisionContext& ctx) {
  PrecisionGuard g(ctx);
  try {
    return Real(text);
  } catch (const std::exception&) {
    throw DomainError("not a real number: " + text);
  }
}

Real infinity() { return std::numeric_limits<Real>::infinity(); }

bool is_infinite(const Real& x) { return boost::multiprecision::isinf(x); }

Real pi(const PrecisionContext& ctx) {
  PrecisionGuard g(ctx);
  return boost::math::constants::pi<Real>();
}

Real gamma_fn(const Real& a, const PrecisionContext& ctx) {
  PrecisionGuard g(ctx);
  try {
    return boost::math::tgamma(at_precision(a, ctx));
  } catch (const std::overflow_error&) {
    throw OverflowError("Gamma overflow");
  } catch (const std::domain_error& e) {
    throw DomainError(e.what());
  }
}

namespace {

// x^a e^{-x} Σ x^k / (a)_{k+1}
Real lower_series(const Real& a, const Real& x, const Real& eps) {
  Real term = 1 / a, sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (abs(term) < eps * abs(sum)) break;
  }
  return sum * exp(a * log(x) - x);
}

// Modified Lentz on the Legendre continued fraction for Γ(a, x).
Real upper_cf(const Real& a, const Real& x, const Real& eps) {
  const Real tiny = pow(Real(10), -static_cast<int>(Real::default_precision()) - 100);
  Real b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
  for (int i = 1; i < 200000; ++i) {
    Real an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (abs(c) < tiny) c = tiny;
    d = 1 / d;
    Real delta = d * c;
    h *= delta;
    if (abs(delta - 1) < eps) return exp(a * log(x) - x) * h;
  }
  throw ConvergenceError("incomplete gamma continued fraction");
}

void check_gamma_args(const Real& a, const Real& x) {
  if (!(a > 0)) throw DomainError("incomplete gamma requires a > 0");
  if (x < 0 || boost::multiprecision::isnan(x)) throw DomainError("incomplete gamma requires x >= 0");
}

}  // namespace

Real lower_incomplete_gamma(const Real& a_in, const Real& x_in, const PrecisionContext& ctx) {
  check_gamma_args(a_in, x_in);
  if (is_infinite(x_in)) return gamma_fn(a_in, ctx);
  PrecisionContext work = ctx.raised(8);
  PrecisionGuard g(work);
  Real a = at_precision(a_in, work), x = at_precision(x_in, work);
  if (x == 0) return at_precision(Real(0), ctx);
  Real eps = work.epsilon() / 1000;
  Real r = (x < a + 1) ? lower_series(a, x, eps) : gamma_fn(a, work) - upper_cf(a, x, eps);
  return at_precision(r, ctx);
}

Real upper_incomplete_gamma(const Real& a_in, const Real& x_in, const PrecisionContext& ctx) {
  check_gamma_args(a_in, x_in);
  if (is_infinite(x_in)) return at_precision(Real(0), ctx);
  PrecisionContext work = ctx.raised(8);
  PrecisionGuard g(work);
  Real a = at_precision(a_in, work), x = at_precision(x_in, work);
  Real eps = work.epsilon() / 1000;
  if (x >= a + 1) return at_precision(upper_cf(a, x, eps), ctx);
  // Alternating form γ = x^a Σ (-x)^k / (k! (a+k)), kept apart from the
  // positive-term series used for the lower tail; extra digits cover the
  // alternation.
  int extra = static_cast<int>(std::ceil(x.convert_to<double>() / std::log(10.0))) + 4;
  PrecisionContext alt = work.raised(extra);
  PrecisionGuard g2(alt);
  Real xa = at_precision(x, alt), aa = at_precision(a, alt);
  Real pw = 1, sum = 1 / aa;
  for (int k = 1; k < 100000; ++k) {
    pw *= -xa / k;
    Real term = pw / (aa + k);
    sum += term;
    if (abs(term) < alt.epsilon() * abs(sum)) break;
  }
  Real lower = exp(aa * log(xa)) * sum;
  return at_precision(gamma_fn(aa, alt) - lower, ctx);
}

const QuadratureRule& gauss_legendre(int order, const PrecisionContext& ctx) {
  if (order < 1) throw DomainError("quadrature order must be positive");
  static std::mutex mu;
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(order, ctx.digits());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  PrecisionContext work = ctx.raised(10);
  PrecisionGuard g(work);
  const Real tol = work.epsilon() / 100;
  const int n = order;
  QuadratureRule rule;
  rule.order = n;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Real pi_w = boost::math::constants::pi<Real>();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = cos(pi_w * (Real(i) + Real(3) / 4) / (Real(n) + Real(1) / 2));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) < tol) break;
    }
    // one more derivative evaluation at the converged node
    Real p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1;
    dp = n * (x * p1 - p0) / (x * x - 1);
    Real w = 2 / ((1 - x * x) * dp * dp);
    if (2 * i + 1 == n) x = 0;
    rule.nodes[i] = at_precision(-x, ctx);
    rule.nodes[n - 1 - i] = at_precision(x, ctx);
    rule.weights[i] = at_precision(w, ctx);
    rule.weights[n - 1 - i] = at_precision(w, ctx);
  }
  return cache.emplace(key, std::move(rule)).first->second;
}

}  // namespace rmt
