#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace rmt {

using Real = boost::multiprecision::mpfr_float;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};
// Raised when a computation cannot certify its own accuracy.
struct ConditioningAlarm : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateState : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A solution left the admissible root of a quadratic relation.
struct BranchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Working precision in decimal digits. epsilon() = 10^(2 - digits).
class PrecisionContext {
 public:
  explicit PrecisionContext(int decimal_digits = 60);
  int digits() const { return digits_; }
  Real epsilon() const;
  // Same context with `extra` more digits, for internal cancellation headroom.
  PrecisionContext raised(int extra) const { return PrecisionContext(digits_ + extra); }

 private:
  int digits_;
};

// Makes `ctx` the precision of every Real created in scope. The underlying
// default is process-wide, so guards must not be used from several threads.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(const PrecisionContext& ctx);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

// Copy of x rounded to the precision of ctx.
Real at_precision(const Real& x, const PrecisionContext& ctx);
Real parse_real(const std::string& text, const PrecisionContext& ctx);
Real infinity();
bool is_infinite(const Real& x);
Real pi(const PrecisionContext& ctx);

// γ(a, x) = ∫₀ˣ u^{a-1} e^{-u} du; x = +∞ returns Γ(a).
Real lower_incomplete_gamma(const Real& a, const Real& x, const PrecisionContext& ctx);
// Γ(a, x) by continued fraction (independent of the lower-tail series).
Real upper_incomplete_gamma(const Real& a, const Real& x, const PrecisionContext& ctx);
Real gamma_fn(const Real& a, const PrecisionContext& ctx);

struct AiryValues {
  Real ai, dai, bi, dbi;
};
AiryValues airy(const Real& x, const PrecisionContext& ctx);

Real kummer_M(const Real& mu, const Real& nu, const Real& z, const PrecisionContext& ctx);
Real kummer_U(const Real& mu, const Real& nu, const Real& z, const PrecisionContext& ctx);

struct QuadratureRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
  int order = 0;
};
// Cached per (order, digits).
const QuadratureRule& gauss_legendre(int order, const PrecisionContext& ctx);

}  // namespace rmt
