#include <cmath>

#include "rmt/softedge.hpp"

namespace rmt {

namespace {

constexpr double kZetaPrimeMinusOne = -0.16542114370045092921391966024278064276063;

double power_sum(const std::vector<RationalCoeff>& cs, double s, bool doubled) {
  double acc = 0;
  for (const auto& c : cs) acc += c.value() * std::pow(s, doubled ? 0.5 * c.power : c.power);
  return acc;
}

double power_sum_derivative(const std::vector<RationalCoeff>& cs, double s, bool doubled) {
  double acc = 0;
  for (const auto& c : cs) {
    const double p = doubled ? 0.5 * c.power : c.power;
    acc += c.value() * p * std::pow(s, p - 1);
  }
  return acc;
}

}  // namespace

const TailSeries& left_tail() {
  static const TailSeries t{
      TailSide::Left,
      {{2, 1, 4}, {-1, -1, 8}, {-4, 9, 64}, {-7, -189, 128}, {-10, 21663, 512}},
      {},
      {{-3, -3, 1LL << 6}, {-6, 2025, 1LL << 13}, {-9, -2470825, 1LL << 19}, {-12, 26389914075LL, 1LL << 27}},
      std::pow(2.0, 1.0 / 24.0) * std::exp(kZetaPrimeMinusOne),
  };
  return t;
}

// Right side: F(s) = prefactor e^{-4/3 s^{3/2}} s^{-3/2} (1 + sum c s^{power/2}) and
// h = d/ds ln F; 1 - F is the CDF.
const TailSeries& right_tail() {
  static const TailSeries t{
      TailSide::Right,
      {},
      {{1, -2, 1}, {-2, -3, 2}, {-5, 35, 16}},
      {{-3, -35, 24}},
      1.0 / (16.0 * M_PI),
  };
  return t;
}

TailValue tail_eval(TailSide side, double s) {
  TailValue v{};
  if (side == TailSide::Left) {
    if (!(s <= -4)) throw DomainError("tail_eval: left series needs s <= -4");
    const auto& L = left_tail();
    v.sigma = power_sum(L.sigma_coeffs, s, false);
    v.d_sigma = power_sum_derivative(L.sigma_coeffs, s, false);
    // first omitted term -4825971/(2048 s^13)
    v.sigma_error = std::abs(4825971.0 / 2048.0 * std::pow(s, -13));
    const double bracket = 1 + power_sum(L.correction_coeffs, s, false);
    v.log_cdf = std::log(L.cdf_prefactor) + s * s * s / 12 - std::log(-s) / 8 + std::log(bracket);
    v.cdf = std::exp(v.log_cdf);
    v.upper_tail = -std::expm1(v.log_cdf);
    v.cdf_error = std::abs(L.correction_coeffs.back().value() * std::pow(s, -12)) / bracket;
    return v;
  }
  if (!(s >= 4)) throw DomainError("tail_eval: right series needs s >= 4");
  const auto& T = right_tail();
  const double s32 = std::pow(s, 1.5);
  const double F = T.cdf_prefactor * std::exp(-4.0 / 3.0 * s32) / s32 * (1 + power_sum(T.correction_coeffs, s, true));
  const double h = power_sum(T.h_coeffs, s, true);
  const double dh = power_sum_derivative(T.h_coeffs, s, true);
  const double dF = h * F, ddF = (dh + h * h) * F;
  const double q = 1 - F;
  v.sigma = -dF / q;
  v.d_sigma = -ddF / q - dF * dF / (q * q);
  v.cdf = q;
  v.log_cdf = std::log1p(-F);
  v.upper_tail = F;
  // the omitted O(s^-3) relative correction has coefficient near -3.25
  v.sigma_error = 4 * std::abs(v.sigma) / (s * s * s);
  v.cdf_error = 4 / (s * s * s);  // relative, in 1 - cdf
  return v;
}

}  // namespace rmt
