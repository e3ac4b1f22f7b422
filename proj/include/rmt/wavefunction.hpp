#pragma once

#include <array>
#include <vector>

#include "rmt/gue_ensemble.hpp"
#include "rmt/identity_lab.hpp"

namespace rmt {

// Coefficients of the second-order equation for phi_n = e^{-v/2} P_n.
// LUE: poles {0, t, t - t R_n}, residues kappa1 at t and kappa2 at t - t R_n.
// GUE: poles {t, t - alpha_n}, residues kappa3 at t and kappa4 at t - alpha_n.
struct RationalLadderCoeffs {
  bool gue = false;
  int n = 0;
  Real alpha, t;
  std::vector<Real> poles;
  Real kappa1, kappa2, kappa3, kappa4;
  // kappa1, kappa2 rebuilt from r_n, R_n without the Riccati derivatives
  Real kappa1_direct, kappa2_direct;
  // ladder functions A_n, B_n and sum_{j<n} A_j need these
  Real r, R, sigma, alpha_n, sum_alpha;
};

RationalLadderCoeffs lue_ladder_coeffs(const LadderState& s);
RationalLadderCoeffs gue_ladder_coeffs(const GUEState& s);

// Signed terms of the phi_n equation and of the equation for P_n itself at z.
// Polynomial derivatives come from the monic coefficient row of `chain`.
std::vector<Real> phi_terms(const RationalLadderCoeffs& k, const OPChain& chain, const Real& z);
std::vector<Real> poly_terms(const RationalLadderCoeffs& k, const OPChain& chain, const Real& z);

// Pole guard: 1e-3 max(1, |t|) around every pole; z <= 0 is rejected for LUE.
void check_pole_distance(const RationalLadderCoeffs& k, const Real& z);

// One report per sample for the phi_n equation, followed by one per sample
// for the P_n equation.
std::vector<ResidualReport> phi_ode_residual_lue(int n, const Real& alpha, const Real& t,
                                                 const std::vector<Real>& z_samples, const PrecisionContext& ctx);
std::vector<ResidualReport> phi_ode_residual_gue(int n, const Real& t, const std::vector<Real>& z_samples,
                                                 const PrecisionContext& ctx);

// Residues of the limiting phi equation at z* = s and z* = s - r.
struct LimitResidues {
  double at_s, at_shift;
};
// From sigma, r, r' (Laguerre scaling) and from u, u' (Hermite scaling).
LimitResidues limit_residues_lue(double s, double sigma, double r, double dr);
LimitResidues limit_residues_gue(double s, double u, double du);

struct LimitODECoeffs {
  double s = 0, r = 0, d_r = 0;
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0, b1 = 0, b2 = 0, Acap = 0;
  bool lambda_real = false;
  double lambda_kummer = 0;  // NaN when -4 a2 + 4 a1 + 5 < 0
  // relative residuals of a0 + a1 - a3 - b1 - b2 = 0 and a0 = -a1^2 - a1 - a2 - a3
  double sum_identity = 0, painleve_identity = 0;
};

LimitODECoeffs limit_ode_coeffs(double s, double r, double d_r);
// Same coefficients from the residues of the phi equation, a0 = -r K1, a1 = -r K2.
LimitODECoeffs limit_ode_coeffs_from_residues(double s, double r, const LimitResidues& k);

double p_coeff(double x);
double q_coeff(const LimitODECoeffs& c, double x);
double j_function(const LimitODECoeffs& c, double x);

enum class AsymptoticRegion { Zero, One, Infinity };
const char* region_name(AsymptoticRegion region);
// Truncated J valid near the region's point.
double j_approx(AsymptoticRegion region, const LimitODECoeffs& c, double x);

// f'' + p f' + q f = 0 from (x0, f0, df0) by adaptive Dormand–Prince.
struct LimitSolution {
  double x0 = 0.5, f0 = 1, df0 = 0;
  double tol = 1e-13;
  std::vector<double> x, f, df;
};
LimitSolution integrate_limit_ode(const LimitODECoeffs& c, double x0, double f0, double df0,
                                  const std::vector<double>& xs, double tol = 1e-13);

// Residuals of the f-form and of F'' + J F = 0 with F = f sqrt(|x| / |x - 1|),
// second derivatives from central differences of re-integrated f'.
struct LimitResidual {
  ResidualReport f_form, F_form;  // worst sample of each
  std::vector<double> f_relative, F_relative;
};
LimitResidual limit_ode_residual(const LimitODECoeffs& c, const LimitSolution& sol, double step = 1e-3);

struct LocalApproximant {
  Real value;
  bool degenerate = false;  // Zero region with a0 = 1/2
};

// Zero: C1 sqrt(2 lambda x) e^{-lambda x} M(k, 1, 2 lambda x) + C2 (same with U), k = 1/2 - (a0 - 1/2)/(2 lambda).
// One: C3 e^{b x}/sqrt|x - 1| + C4 (b x - a1) e^{-b x}/sqrt|x - 1|, b = a1 + 1/2.
// Infinity: C5 Ai(s - r x) + C6 Bi(s - r x).
LocalApproximant local_asymptotic(AsymptoticRegion region, const LimitODECoeffs& c,
                                  const std::array<double, 2>& constants, const Real& x,
                                  const PrecisionContext& ctx);

// |F'' + J_approx F| / max(|F''|, |J_approx F|) with F'' by a central second
// difference at raised precision.
double local_asymptotic_residual(AsymptoticRegion region, const LimitODECoeffs& c,
                                 const std::array<double, 2>& constants, double x, const PrecisionContext& ctx);

}  // namespace rmt
