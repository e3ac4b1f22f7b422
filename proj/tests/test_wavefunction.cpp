#include <gtest/gtest.h>

#include <cmath>

#include "rmt/softedge.hpp"
#include "rmt/wavefunction.hpp"

using namespace rmt;

namespace {

const SoftEdgeGrid& grid() {
  static const SoftEdgeGrid g = solve_sigma_pii(-12, 12, 2001, 1e-10);
  return g;
}

LimitODECoeffs coeffs_at(double s) {
  const auto p = sample(grid(), s);
  return limit_ode_coeffs(s, p.d_sigma, p.dd_sigma);
}

double max_relative(const std::vector<ResidualReport>& reps) {
  double worst = 0;
  for (const auto& r : reps) worst = std::max(worst, r.relative.convert_to<double>());
  return worst;
}

}  // namespace

TEST(FiniteLUE, PhiEquationAtSamplePoint) {
  PrecisionContext ctx(60);
  PrecisionGuard guard(ctx);
  const WeightSpec spec = WeightSpec::laguerre(Real(1), Real(4));
  const OPChain chain = op_chain(spec, 3, ctx);
  const auto k = lue_ladder_coeffs(ladder_state(chain, spec, 2, ctx));
  // independent Gram–Schmidt oracle on the truncated moments
  EXPECT_NEAR(chain.eval(2, Real("1.3")).convert_to<double>(), -0.61675968504180143098, 1e-18);
  EXPECT_NEAR(k.kappa1.convert_to<double>(), -0.85001481673144045462, 1e-15);
  EXPECT_NEAR(k.kappa2.convert_to<double>(), -0.09650576955006392559, 1e-15);
  EXPECT_LE(abs(k.kappa1 - k.kappa1_direct), Real("1e-50"));
  EXPECT_LE(abs(k.kappa2 - k.kappa2_direct), Real("1e-50"));
  ASSERT_EQ(k.poles.size(), 3u);
  EXPECT_EQ(k.poles[0], 0);
  EXPECT_EQ(k.poles[1], 4);

  const auto reps = phi_ode_residual_lue(2, Real(1), Real(4), {Real("1.3"), Real("0.4"), Real("3.1")}, ctx);
  ASSERT_EQ(reps.size(), 6u);
  EXPECT_EQ(reps[0].identity_id, "phi_lue");
  EXPECT_EQ(reps[3].identity_id, "poly_lue");
  EXPECT_EQ(reps[0].point, Real("1.3"));
  EXPECT_LE(max_relative(reps), 1e-35);
}

TEST(FiniteLUE, DegreeOneClosedForm) {
  PrecisionContext ctx(50);
  PrecisionGuard guard(ctx);
  const Real alpha("0.5"), t(3);
  const WeightSpec spec = WeightSpec::laguerre(alpha, t);
  const OPChain chain = op_chain(spec, 2, ctx);
  // P_1(z) = z - gamma(alpha + 2, t) / gamma(alpha + 1, t)
  const Real shift = lower_incomplete_gamma(alpha + 2, t, ctx) / lower_incomplete_gamma(alpha + 1, t, ctx);
  EXPECT_LE(abs(chain.poly[1][0] + shift), Real("1e-45"));
  EXPECT_EQ(chain.poly[1][1], 1);
  const auto reps = phi_ode_residual_lue(1, alpha, t, {Real("0.2"), Real("1.7"), Real("2.9")}, ctx);
  EXPECT_LE(max_relative(reps), 1e-25);
}

TEST(FiniteLUE, PerturbedResidueBreaksTheEquation) {
  PrecisionContext ctx(60);
  PrecisionGuard guard(ctx);
  const WeightSpec spec = WeightSpec::laguerre(Real(1), Real(4));
  const OPChain chain = op_chain(spec, 3, ctx);
  auto k = lue_ladder_coeffs(ladder_state(chain, spec, 2, ctx));
  k.kappa1 += Real("1e-5");
  const auto rep = residual_from_terms("phi_lue", 2, k.alpha, k.t, phi_terms(k, chain, Real("1.3")));
  EXPECT_GT(rep.relative, Real("1e-7"));
}

TEST(FiniteLUE, PoleGuard) {
  PrecisionContext ctx(40);
  EXPECT_THROW(phi_ode_residual_lue(2, Real(1), Real(4), {Real("4.001")}, ctx), DomainError);
  EXPECT_THROW(phi_ode_residual_lue(2, Real(1), Real(4), {Real(0)}, ctx), DomainError);
  EXPECT_THROW(phi_ode_residual_lue(2, Real(1), Real(4), {Real(-1)}, ctx), DomainError);
  EXPECT_NO_THROW(phi_ode_residual_lue(2, Real(1), Real(4), {Real("4.01")}, ctx));
}

TEST(FiniteGUE, PhiEquation) {
  PrecisionContext ctx(60);
  PrecisionGuard guard(ctx);
  const GUEChain c = gue_chain(Real(1), 3, ctx);
  const auto k = gue_ladder_coeffs(gue_state(c, 2, ctx));
  EXPECT_NEAR(c.chain.eval(2, Real("0.4")).convert_to<double>(), 0.02115660488403386427, 1e-18);
  EXPECT_NEAR(k.alpha_n.convert_to<double>(), -0.64909137892606717757, 1e-18);
  EXPECT_NEAR(k.kappa4.convert_to<double>(), -0.46179450320117686473, 1e-15);

  auto reps = phi_ode_residual_gue(2, Real(1), {Real("0.4"), Real(-2), Real("2.5")}, ctx);
  EXPECT_LE(max_relative(reps), 1e-35);
  reps = phi_ode_residual_gue(3, Real(2), {Real(-1), Real("0.3"), Real(3)}, ctx);
  EXPECT_LE(max_relative(reps), 1e-35);
  EXPECT_THROW(phi_ode_residual_gue(3, Real(2), {Real(2)}, ctx), DomainError);
}

TEST(LimitEquation, CoefficientIdentitiesOnTheGrid) {
  const auto& g = grid();
  int real_count = 0;
  for (std::size_t i = 0; i < g.s.size(); i += 10) {
    const auto c = limit_ode_coeffs(g.s[i], g.d_sigma[i], g.dd_sigma[i]);
    EXPECT_LE(c.sum_identity, 1e-10) << g.s[i];
    EXPECT_LE(c.painleve_identity, 1e-10) << g.s[i];
    EXPECT_EQ(c.a1, -g.dd_sigma[i] / 2);
    EXPECT_EQ(c.Acap, -g.s[i] * c.r * c.r + 2 * c.r * c.r * c.r);
    real_count += c.lambda_real;
  }
  EXPECT_GT(real_count, 0);
  // lambda^2 = (5 - 4 a2 + 4 a1) / 4 with a2 = -s r^2 > 0 for s << 0
  EXPECT_TRUE(coeffs_at(0).lambda_real);
  EXPECT_TRUE(coeffs_at(6).lambda_real);
  EXPECT_FALSE(coeffs_at(-8).lambda_real);
  EXPECT_TRUE(std::isnan(coeffs_at(-8).lambda_kummer));
  EXPECT_THROW(limit_ode_coeffs(0, 0, 1), DegenerateState);
}

TEST(LimitEquation, LaguerreAndHermiteLimitsCoincide) {
  const auto& g = grid();
  for (double s : {-6.0, -2.0, 0.0, 1.5, 4.0}) {
    const auto p = sample(g, s);
    const auto lue = limit_residues_lue(s, p.sigma, p.d_sigma, p.dd_sigma);
    const auto gue = limit_residues_gue(s, p.d_sigma, p.dd_sigma);
    EXPECT_EQ(lue.at_shift, gue.at_shift);
    EXPECT_NEAR(lue.at_s, gue.at_s, 1e-7 * std::max(1.0, std::abs(gue.at_s))) << s;
    const auto a = limit_ode_coeffs_from_residues(s, p.d_sigma, gue);
    const auto b = coeffs_at(s);
    EXPECT_NEAR(a.a0, b.a0, 1e-12 * std::max(1.0, std::abs(b.a0)));
    EXPECT_NEAR(a.a1, b.a1, 1e-15);
  }
}

TEST(LimitEquation, IntegratedSolutionSatisfiesBothForms) {
  for (double s : {-2.0, 0.0, 2.0}) {
    const auto c = coeffs_at(s);
    std::vector<double> xs;
    for (int i = 1; i <= 9; ++i) xs.push_back(0.1 * i);
    const auto sol = integrate_limit_ode(c, 0.5, 1.0, 0.3, xs);
    ASSERT_EQ(sol.f.size(), xs.size());
    EXPECT_EQ(sol.f[4], 1.0);
    const auto res = limit_ode_residual(c, sol);
    EXPECT_LE(res.f_form.relative, Real(1e-9)) << s;
    EXPECT_LE(res.F_form.relative, Real(1e-9)) << s;
  }
  const auto c = coeffs_at(0);
  EXPECT_THROW(integrate_limit_ode(c, 0.5, 1, 0, {1.2}), DomainError);
  EXPECT_THROW(integrate_limit_ode(c, 0.5, 1, 0, {-0.1}), DomainError);
  EXPECT_THROW(integrate_limit_ode(c, 1.0, 1, 0, {0.5}), DomainError);
  EXPECT_NO_THROW(integrate_limit_ode(c, 2.0, 1, 0, {1.5, 4.0}));
}

TEST(LimitEquation, JLimitingForms) {
  const auto c = coeffs_at(0.5);
  // next order near 0: (a3 - a1 - 2) x
  for (double x : {1e-2, 1e-3, 1e-4}) {
    const double d = j_function(c, x) - j_approx(AsymptoticRegion::Zero, c, x);
    EXPECT_NEAR(d / x, c.a3 - c.a1 - 2, 10 * x) << x;
  }
  // next order near 1: (a3 - a0)(x - 1)
  for (double e : {1e-2, -1e-3, 1e-4}) {
    const double d = j_function(c, 1 + e) - j_approx(AsymptoticRegion::One, c, 1 + e);
    EXPECT_NEAR(d / e, c.a3 - c.a0, 10 * std::abs(e)) << e;
  }
  // next order at infinity: (a0 + a1) / x
  for (double x : {1e2, 1e3, 1e4}) {
    const double d = j_function(c, x) - j_approx(AsymptoticRegion::Infinity, c, x);
    EXPECT_NEAR(d * x, c.a0 + c.a1, 10 / x * std::max(1.0, std::abs(c.a0))) << x;
  }
}

TEST(LocalAsymptotics, ApproximantsSolveTheirTruncatedEquations) {
  PrecisionContext ctx(30);
  const auto c = coeffs_at(0.5);
  for (double x : {0.05, 0.2}) {
    EXPECT_LE(local_asymptotic_residual(AsymptoticRegion::Zero, c, {1.0, 0.0}, x, ctx), 1e-8);
    EXPECT_LE(local_asymptotic_residual(AsymptoticRegion::Zero, c, {0.0, 1.0}, x, ctx), 1e-8);
    EXPECT_LE(local_asymptotic_residual(AsymptoticRegion::Zero, c, {0.7, -1.3}, x, ctx), 1e-8);
  }
  for (double x : {0.9, 1.05, 1.3}) {
    EXPECT_LE(local_asymptotic_residual(AsymptoticRegion::One, c, {1.0, 0.0}, x, ctx), 1e-8);
    EXPECT_LE(local_asymptotic_residual(AsymptoticRegion::One, c, {0.0, 1.0}, x, ctx), 1e-8);
  }
  for (double x : {3.0, 10.0, 40.0}) {
    EXPECT_LE(local_asymptotic_residual(AsymptoticRegion::Infinity, c, {1.0, 0.0}, x, ctx), 1e-8);
    EXPECT_LE(local_asymptotic_residual(AsymptoticRegion::Infinity, c, {0.0, 1.0}, x, ctx), 1e-8);
  }
}

TEST(LocalAsymptotics, ClosedForms) {
  PrecisionContext ctx(30);
  PrecisionGuard guard(ctx);
  const auto c = coeffs_at(0.5);
  // C4 = 0 leaves e^{(a1 + 1/2) x} / sqrt(x - 1)
  const double x = 1.25;
  const double want = std::exp((c.a1 + 0.5) * x) / std::sqrt(x - 1);
  const auto one = local_asymptotic(AsymptoticRegion::One, c, {1.0, 0.0}, Real(x), ctx);
  EXPECT_NEAR(one.value.convert_to<double>(), want, 1e-14 * want);
  // the Airy argument is s - r x
  const auto inf = local_asymptotic(AsymptoticRegion::Infinity, c, {1.0, 0.0}, Real(2), ctx);
  const Real arg = Real(c.s) - Real(c.r) * 2;
  EXPECT_NEAR(inf.value.convert_to<double>(), airy(arg, ctx).ai.convert_to<double>(), 1e-15);
  EXPECT_FALSE(local_asymptotic(AsymptoticRegion::Zero, c, {1.0, 0.0}, Real("0.1"), ctx).degenerate);
  EXPECT_THROW(local_asymptotic(AsymptoticRegion::Zero, c, {1.0, 0.0}, Real(-1), ctx), DomainError);
  EXPECT_THROW(local_asymptotic(AsymptoticRegion::Zero, coeffs_at(-8), {1.0, 0.0}, Real("0.1"), ctx), DomainError);
}

TEST(LocalAsymptotics, DegenerateParameterFlagged) {
  PrecisionContext ctx(30);
  LimitODECoeffs c = coeffs_at(0.5);
  c.a0 = 0.5;
  const auto v = local_asymptotic(AsymptoticRegion::Zero, c, {1.0, 1.0}, Real("0.2"), ctx);
  EXPECT_TRUE(v.degenerate);
  EXPECT_LE(local_asymptotic_residual(AsymptoticRegion::Zero, c, {1.0, 1.0}, 0.2, ctx), 1e-8);
}
