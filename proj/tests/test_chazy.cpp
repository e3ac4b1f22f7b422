#include <gtest/gtest.h>

#include <random>

#include "rmt/chazy.hpp"
#include "rmt/gue_ensemble.hpp"

using namespace rmt;

namespace {

std::vector<Real> grid(double a, double b, int k) {
  std::vector<Real> out;
  for (int i = 0; i < k; ++i) out.push_back(Real(a + (b - a) * i / (k - 1)));
  return out;
}

Rational random_rational(std::mt19937& g) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  return Rational(num(g), den(g));
}

void expect_same(const ChazyParamsT<Rational>& a, const ChazyParamsT<Rational>& b, const std::string& where) {
  EXPECT_TRUE(a.member == b.member) << where;
  EXPECT_EQ(to_string(a.alpha1), to_string(b.alpha1)) << where;
  EXPECT_EQ(to_string(a.beta1_re), to_string(b.beta1_re)) << where;
  EXPECT_EQ(to_string(a.beta1_im), to_string(b.beta1_im)) << where;
  EXPECT_EQ(to_string(a.gamma1), to_string(b.gamma1)) << where;
}

}  // namespace

TEST(ChazyParameters, DisplayedTuplesFollowFromTheNuMaps) {
  const std::vector<Rational> alphas{Rational(0), Rational(1), Rational(3, 2), Rational(7, 3)};
  const std::vector<Rational> bs{Rational(0), Rational(1, 2), Rational(2), Rational(-3, 4)};
  for (const ExampleSpec& e : example_table())
    for (int n = 1; n <= 5; ++n)
      for (const Rational& a : alphas)
        for (const Rational& b : bs)
          expect_same(mapped_params(e, n, a, b), displayed_params(e.id, n, a, b),
                      e.name + " n=" + std::to_string(n) + " a=" + to_string(a) + " b=" + to_string(b));
}

TEST(ChazyParameters, ExactStringsForSmallCases) {
  // LUE at n = 2, alpha = 1: alpha1 = 27/2, beta1 = 5i/2, gamma1 = 525/16
  const auto lue = mapped_params(example(ExampleId::LUE_Largest), 2, 1, 0);
  EXPECT_EQ(to_string(lue.alpha1), "27/2");
  EXPECT_EQ(to_string(lue.beta1_im), "5/2");
  EXPECT_EQ(to_string(lue.gamma1), "525/16");
  const auto gue = mapped_params(example(ExampleId::GUE_Largest), 1, 0, 0);
  EXPECT_EQ(to_string(gue.alpha1), "-2/3");
  EXPECT_EQ(to_string(gue.beta1_re), "-8/27");
  EXPECT_EQ(to_string(gue.gamma1), "0");
  const auto gap = mapped_params(example(ExampleId::GUE_Gap), 3, 0, 0);
  EXPECT_EQ(to_string(gap.alpha1), "-6");
  EXPECT_EQ(to_string(gap.beta1_re), "-8");
}

TEST(ChazyParameters, SecondMemberIsSymmetricInTheLastTwoNu) {
  std::mt19937 g(7);
  for (int i = 0; i < 50; ++i) {
    const SigmaFormPVT<Rational> v{random_rational(g), random_rational(g), random_rational(g)};
    const SigmaFormPVT<Rational> w{v.nu1, v.nu3, v.nu2};
    expect_same(chazy_second_params(v), chazy_second_params(w), "swap");
    // beta1 is purely imaginary for real nu
    EXPECT_EQ(chazy_second_params(v).beta1_re, 0);
  }
  const auto zero = chazy_second_params(SigmaFormPVT<Rational>{0, 0, 0});
  EXPECT_EQ(zero.alpha1, 0);
  EXPECT_EQ(zero.beta1_im, 0);
  EXPECT_EQ(zero.gamma1, 0);
}

TEST(ChazyTable, MapsAndTransforms) {
  const auto table = example_table();
  ASSERT_EQ(table.size(), 6u);
  EXPECT_EQ(example(ExampleId::LUE_Largest).nu_text, "(0, n, n+alpha)");
  EXPECT_EQ(example(ExampleId::MIMO_MGF).rho_def, "rho(t) = -r_n(t)");
  EXPECT_NE(example(ExampleId::TimeDependentJacobi).rho_def.find("-r_n(t/2)"), std::string::npos);
  EXPECT_NE(example(ExampleId::PollaczekJacobi).rho_def.find("(2n+alpha+beta) r*_n(t)/t - n"), std::string::npos);
  const Rational n(3), a(5, 2), b(1, 3);
  EXPECT_EQ(example(ExampleId::LUE_Largest).theta_shift.at(n, a, b), -(2 * n + a) / 2);
  EXPECT_EQ(example(ExampleId::MIMO_MGF).theta_shift.at(n, a, b), (2 * n + a - b) / 2);
  EXPECT_EQ(example(ExampleId::TimeDependentJacobi).theta_shift.at(n, a, b), -(2 * n - a + b) / 2);
  EXPECT_EQ(example(ExampleId::PollaczekJacobi).theta_shift.at(n, a, b), (a + 2 * b) / 2);
  EXPECT_EQ(example(ExampleId::GUE_Largest).theta_shift.at(n, a, b), -n / 3);
  EXPECT_EQ(example(ExampleId::GUE_Gap).theta_shift.at(n, a, b), -n / 3);
  EXPECT_THROW(piv_nu(example(ExampleId::LUE_Largest), n), DomainError);
  EXPECT_THROW(pv_nu(example(ExampleId::GUE_Gap), n, a, b), DomainError);
}

TEST(ChazyTransform, ExactAtRationalPoints) {
  std::mt19937 g(11);
  for (int i = 0; i < 40; ++i) {
    const SigmaFormPVT<Rational> v{random_rational(g), random_rational(g), random_rational(g)};
    Rational t = random_rational(g);
    if (t == 0) t = 1;
    const Rational r = random_rational(g), dr = random_rational(g), ddr = random_rational(g);
    // e^z = t / (2i)
    const CPair<Rational> ez(Rational(0), -t / 2);
    const auto pt = chazy_second_point<Rational>(v.nu1 + v.nu2 + v.nu3, ez, r, dr, ddr);
    const auto c = chazy_second_difference(chazy_second_params(v), pt);
    const Rational d = rho_pv_difference(v, t, r, dr, ddr);
    EXPECT_EQ(c.re, -4 * d);
    EXPECT_EQ(c.im, 0);

    const SigmaFormPIVT<Rational> w{random_rational(g), random_rational(g)};
    EXPECT_EQ(chazy_first_difference(chazy_first_params(w), w, t, r, dr, ddr), rho_piv_difference(w, t, r, dr, ddr) / 16);
  }
}

TEST(ChazyTransform, ZeroFunctionWithVanishingFirstNu) {
  const SigmaFormPVT<Rational> v{0, Rational(2), Rational(7, 2)};
  for (int t = 1; t <= 5; ++t) EXPECT_EQ(rho_pv_difference<Rational>(v, t, 0, 0, 0), 0);
  const SigmaFormPIVT<Rational> w{0, Rational(4)};
  EXPECT_EQ(rho_piv_difference<Rational>(w, 3, 0, 0, 0), 0);
}

class ChazyTrajectory : public ::testing::Test {
 protected:
  PrecisionContext ctx{60};
  PrecisionGuard guard{ctx};
};

TEST_F(ChazyTrajectory, FourViewsOfTheLUEFunction) {
  const int n = 3;
  const Real alpha = 1, t = 5;
  const WeightSpec spec = WeightSpec::laguerre(alpha, t);
  const OPChain chain = op_chain(spec, n + 1, ctx);
  const LadderState s = ladder_state(chain, spec, n, ctx);
  const SigmaFormPV nu{0, Real(n), n + alpha};
  const RhoSample p{t, s.r, s.d_r, s.dd_r};
  const auto general = rho_ode_residual_pv(nu, p);
  const auto special = residual_rn_ode(s);
  const Real tol("1e-35");
  EXPECT_LE(general.relative, tol);
  EXPECT_LE(special.relative, tol);
  EXPECT_LE(residual_sigma_form(s).relative, tol);
  // both are the same polynomial in (t, r, r', r'')
  EXPECT_LE(abs(general.residual - special.residual), Real("1e-40") * general.scale);
  const auto chazy = chazy_second_residual(chazy_second_params(nu), nu, {p}, ctx);
  EXPECT_LE(chazy.worst, tol);
}

TEST_F(ChazyTrajectory, LUEAlongTheRealAxis) {
  const int n = 2;
  const Real alpha = 1;
  const auto path = lue_rho_path(n, alpha, grid(1, 10, 10), ctx);
  const SigmaFormPV nu{0, Real(n), n + alpha};
  for (const RhoSample& p : path) EXPECT_LE(rho_ode_residual_pv(nu, p).relative, Real("1e-25")) << p.t;
  const auto rep = chazy_second_residual(chazy_second_params(nu), nu, path, ctx);
  EXPECT_EQ(rep.points.size(), path.size());
  EXPECT_LE(rep.worst, Real("1e-15"));
  EXPECT_LE(rep.worst, Real("1e-30"));
  // the path lies on Im z = -pi/2, Re z = ln(t/2)
  EXPECT_LE(abs(rep.points.front().point - log(Real("0.5"))), Real("1e-50"));
  // an unrelated parameter set is visibly violated
  ChazyParams wrong = chazy_second_params(nu);
  wrong.gamma1 += 1;
  EXPECT_GT(chazy_second_residual(wrong, nu, path, ctx).worst, Real("1e-6"));
  EXPECT_THROW(chazy_second_residual(chazy_second_params(nu), nu, {RhoSample{0, 1, 1, 1}}, ctx), DomainError);
}

TEST_F(ChazyTrajectory, GUEWithRhoTwiceRn) {
  const int n = 2;
  const SigmaFormPIV nu{0, Real(2 * n)};
  const auto k = chazy_first_params(nu);
  const auto path = gue_rho_path(n, grid(-2, 4, 7), ctx);
  for (const RhoSample& p : path) EXPECT_LE(rho_ode_residual_piv(nu, p).relative, Real("1e-25")) << p.t;
  EXPECT_LE(chazy_first_residual(k, nu, path).worst, Real("1e-25"));
  // rho = r_n alone does not satisfy it
  std::vector<RhoSample> half = path;
  for (RhoSample& p : half) p = {p.t, p.rho / 2, p.d_rho / 2, p.dd_rho / 2};
  EXPECT_GT(chazy_first_residual(k, nu, half).worst, Real("1e-3"));
}

TEST(ChazyManufactured, OtherExamplesAlongSyntheticPaths) {
  PrecisionContext ctx(30);
  PrecisionGuard guard(ctx);
  const std::vector<double> ts{1.2, 1.35, 1.5, 1.65, 1.8};
  struct Case {
    ExampleId id;
    double rho0, d_rho0;  // data at t = 1.5 with a real Xi and no pole on the window
  };
  for (const Case& c : {Case{ExampleId::MIMO_MGF, 2.0, 0.5}, Case{ExampleId::TimeDependentJacobi, -1.0, 0.5},
                        Case{ExampleId::PollaczekJacobi, 0.3, -0.2}}) {
    const auto nr = pv_nu(example(c.id), 3, Rational(3, 2), Rational(1, 2));
    const SigmaFormPV nu{Real(nr.nu1), Real(nr.nu2), Real(nr.nu3)};
    const auto path = manufactured_pv_path(nu, 1.5, c.rho0, c.d_rho0, ts);
    for (const RhoSample& p : path) EXPECT_LE(rho_ode_residual_pv(nu, p).relative, Real("1e-12")) << p.t;
    EXPECT_LE(chazy_second_residual(chazy_second_params(nu), nu, path, ctx).worst, Real("1e-12"));
  }
  const auto nr = piv_nu(example(ExampleId::GUE_Gap), 2);
  const SigmaFormPIV nu{Real(nr.nu1), Real(nr.nu2)};
  const auto path = manufactured_piv_path(nu, 0.5, 0.4, 0.1, {0.0, 0.25, 0.75, 1.0});
  for (const RhoSample& p : path) EXPECT_LE(rho_ode_residual_piv(nu, p).relative, Real("1e-12")) << p.t;
  EXPECT_LE(chazy_first_residual(chazy_first_params(nu), nu, path).worst, Real("1e-12"));

  const SigmaFormPV lue{0, 3, Real("4.5")};
  EXPECT_THROW(manufactured_pv_path(lue, 1.0, 0.1, 0.1, {-1.0}), DomainError);
  EXPECT_THROW(manufactured_pv_path(lue, 1.0, -3.5, 0.0, {2.0}), DomainError);
  // this MIMO trajectory runs into a pole before t = 2.8
  const auto mimo = pv_nu(example(ExampleId::MIMO_MGF), 3, Rational(3, 2), Rational(1, 2));
  EXPECT_THROW(manufactured_pv_path({Real(mimo.nu1), Real(mimo.nu2), Real(mimo.nu3)}, 1.5, 0.3, -0.2, {2.8}),
               ConvergenceError);
}
