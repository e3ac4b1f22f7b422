#include <gtest/gtest.h>

#include "rmt/frobenius.hpp"
#include "rmt/softedge.hpp"

using namespace rmt;

namespace {

const SoftEdgeGrid& grid() {
  static const SoftEdgeGrid g = solve_sigma_pii(-12, 12, 2001, 1e-10);
  return g;
}

LimitODECoeffs limit_at(double s) {
  const auto p = sample(grid(), s);
  return limit_ode_coeffs(s, p.d_sigma, p.dd_sigma);
}

}  // namespace

class Frobenius : public ::testing::TestWithParam<double> {
 protected:
  PrecisionContext ctx{60};
  PrecisionGuard guard{ctx};
  FrobeniusCoeffs k = frobenius_coeffs(limit_at(GetParam()), ctx);
};

TEST_P(Frobenius, CoefficientRelationsHoldInWorkingPrecision) {
  EXPECT_LE(abs(k.a0 + k.a1 - k.a3 - k.b1 - k.b2), Real("1e-55"));
  EXPECT_LE(abs(k.a0 + k.a1 * k.a1 + k.a1 + k.a2 + k.a3), Real("1e-55"));
  EXPECT_LE(abs(k.A - k.a2 - 2 * k.a3), Real("1e-55"));
}

TEST_P(Frobenius, SeriesAtZero) {
  const auto z = series_zero(k, Real(0), 100, true, ctx);
  EXPECT_EQ(z.c[0], 1);
  EXPECT_EQ(z.c[1], -k.a0);
  EXPECT_EQ(z.d[0], 0);
  EXPECT_LE(recurrence_defect(z), Real("1e-50"));
  for (const char* x : {"0.02", "0.05", "0.1"}) {
    EXPECT_LE(series_residual(z, Real(x), false).relative, Real("1e-20")) << x;
    EXPECT_LE(series_residual(z, Real(x), true).relative, Real("1e-20")) << x;
  }
  // x = 1 is an apparent singularity, so the regular solution at 0 is entire:
  // c_100 sits at the rounding floor, far below the algebraic tail of a nearby exponent
  const auto shifted = series_zero(k, Real("0.25"), 100, false, ctx);
  EXPECT_LE(abs(z.c[100]), Real("1e-40") * abs(shifted.c[100]));
  EXPECT_THROW(series_zero(k, Real(-3), 10, false, ctx), DomainError);
  EXPECT_THROW(evaluate(z, Real(-0.1), false), DomainError);
}

TEST_P(Frobenius, CompanionIsTheExponentDerivative) {
  const auto z = series_zero(k, Real(0), 30, true, ctx);
  Real err_prev = -1;
  for (const char* hs : {"1e-4", "5e-5"}) {
    const Real h(hs);
    const auto p = series_zero(k, h, 30, false, ctx), m = series_zero(k, -h, 30, false, ctx);
    Real err = 0;
    for (int n = 1; n <= 30; ++n)
      err = std::max(err, Real(abs((p.c[n] - m.c[n]) / (2 * h) - z.d[n]) / std::max(Real(1), Real(abs(z.d[n])))));
    EXPECT_LE(err, Real("1e-6"));
    // second order in h
    if (err_prev > 0) EXPECT_NEAR((err_prev / err).convert_to<double>(), 4.0, 0.2);
    err_prev = err;
  }
}

TEST_P(Frobenius, SeriesAtOne) {
  const auto null = series_one(k, 0, 100, true, ctx);
  for (const Real& c : null.c) EXPECT_EQ(c, 0);
  const auto two = series_one(k, 2, 100, true, ctx);
  ASSERT_EQ(two.c[0], 1);
  // the displayed linear triangle for c_1..c_3
  const Real c1 = -(k.a1 + 2) * two.c[0] / 3;
  const Real c2 = -((k.a1 + 6) * c1 - k.a1 * k.a1 * two.c[0]) / 8;
  const Real c3 = -((k.a1 + 12) * c2 - k.a1 * k.a1 * c1 + k.A * two.c[0]) / 15;
  EXPECT_LE(abs(two.c[1] - c1), Real("1e-55"));
  EXPECT_LE(abs(two.c[2] - c2), Real("1e-55"));
  EXPECT_LE(abs(two.c[3] - c3), Real("1e-55"));
  // companion at lambda = 0 starts 1, a1, 0, (a1^3 - A)/3
  EXPECT_EQ(null.d[0], 1);
  EXPECT_EQ(null.d[1], k.a1);
  EXPECT_EQ(null.d[2], 0);
  EXPECT_LE(abs(null.d[3] - (k.a1 * k.a1 * k.a1 - k.A) / 3), Real("1e-55"));
  EXPECT_LE(recurrence_defect(null), Real("1e-50"));
  EXPECT_LE(recurrence_defect(two), Real("1e-50"));
  for (const char* x : {"0.9", "0.95", "1.05", "1.1"}) {
    EXPECT_LE(series_residual(two, Real(x), false).relative, Real("1e-20")) << x;
    EXPECT_LE(series_residual(null, Real(x), true).relative, Real("1e-20")) << x;
  }
  EXPECT_THROW(series_one(k, 1, 10, false, ctx), DomainError);
}

TEST_P(Frobenius, TailSeeds) {
  const Real tau("0.25");
  const auto t0 = tail_zero(k, tau, 10, ctx);
  EXPECT_EQ(t0.theta[3], 1);
  EXPECT_LE(abs(t0.theta[4] - (-3 * tau + 1 - k.a1)), Real("1e-55"));
  EXPECT_EQ(t0.nu[4], -3);
  // nu is the tau-derivative of theta
  const Real h("1e-20");
  const auto tp = tail_zero(k, tau + h, 10, ctx), tm = tail_zero(k, tau - h, 10, ctx);
  for (int l = 4; l <= 10; ++l)
    EXPECT_LE(abs((tp.theta[l] - tm.theta[l]) / (2 * h) - t0.nu[l]), Real("1e-30") * std::max(Real(1), Real(abs(t0.nu[l]))));

  const auto t1 = tail_one(k, 2, 10, ctx);
  EXPECT_EQ(t1.nu[1], 1);
  EXPECT_LE(abs(t1.nu[2] - k.a0), Real("1e-55"));
  EXPECT_EQ(t1.theta[1], 1);
  EXPECT_LE(abs(t1.theta[2] - (k.a0 - 2)), Real("1e-55"));
  // closed lines at lambda = 2, with 2 a2 in the l = 2 and l = 3 brackets
  const Real q = k.a1 * k.a1 + 2 * k.a2 + k.a3;
  EXPECT_LE(abs(2 * t1.theta[3] - ((k.a0 - 4) * t1.theta[2] - q)), Real("1e-55"));
  EXPECT_LE(abs(3 * t1.theta[4] - ((k.a0 - 5) * t1.theta[3] - 2 * (q - 1) * t1.theta[2] -
                                   (k.a1 * k.a1 + 4 * k.a2 - k.a3))),
            Real("1e-55"));
  const auto t1z = tail_one(k, 0, 10, ctx);
  for (int l = 1; l <= 10; ++l) EXPECT_EQ(t1z.theta[l], 0);
}

TEST_P(Frobenius, TailsMatchTheCoefficients) {
  const Real tau("0.25");
  const auto z = series_zero(k, tau, 800, true, ctx);
  const auto t0 = tail_zero(k, tau, 14, ctx);
  for (int l = 4; l <= 7; ++l) {
    EXPECT_NEAR(tail_match(z, t0, 50, 200, l).exponent, l + 1, 0.5) << l;
    // the companion's next-but-one coefficient can be large (s = -2), so match further out
    EXPECT_NEAR(tail_match_companion(z, t0, 200, 700, l, 25).exponent, l + 1, 0.5) << l;
  }
  const auto two = series_one(k, 2, 400, false, ctx);
  const auto null = series_one(k, 0, 400, true, ctx);
  const auto t1 = tail_one(k, 2, 14, ctx);
  for (int l = 2; l <= 7; ++l) {
    EXPECT_NEAR(tail_match(two, t1, 50, 200, l).exponent, l + 1, 0.5) << l;
    EXPECT_NEAR(tail_match_companion(null, t1, 50, 200, l).exponent, l + 1, 0.5) << l;
  }
  EXPECT_THROW(tail_match(two, t1, 50, 400, 4), DomainError);
  EXPECT_THROW(tail_match(two, t0, 50, 200, 4), DomainError);
}

TEST_P(Frobenius, ConnectionBetweenThePoints) {
  const auto c = limit_at(GetParam());
  for (double x : {0.25, 0.5}) {
    const auto r = crosscheck_integration(c, x, 200, ctx);
    EXPECT_FALSE(r.truncation_warning) << x;
    EXPECT_LE(r.series_mismatch, Real("1e-8")) << x;
    EXPECT_LE(r.integrator_mismatch, Real("1e-8")) << x;
    EXPECT_GT(abs(r.determinant), Real("1e-3"));
  }
  EXPECT_TRUE(crosscheck_integration(c, 0.5, 10, ctx).truncation_warning);
  EXPECT_THROW(crosscheck_integration(c, 0.02, 100, ctx), DomainError);
}

INSTANTIATE_TEST_SUITE_P(SoftEdgePoints, Frobenius, ::testing::Values(-2.0, 0.0, 0.7));
