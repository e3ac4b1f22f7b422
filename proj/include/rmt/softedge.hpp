#pragma once

#include <vector>

#include "rmt/lue_ensemble.hpp"

namespace rmt {

// ---- tail expansions of sigma(s) and the soft-edge CDF ----

enum class TailSide { Left, Right };

struct RationalCoeff {
  int power;  // exponent of s (half-integers are stored doubled, see TailSeries)
  long long num, den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct TailSeries {
  TailSide side;
  // Left: sigma = sum c s^power. Right: unused.
  std::vector<RationalCoeff> sigma_coeffs;
  // Right: h(s) = d/ds ln F, powers stored doubled (-2 s^{1/2} has power 1).
  std::vector<RationalCoeff> h_coeffs;
  // Left CDF bracket 1 + sum c s^power.
  std::vector<RationalCoeff> correction_coeffs;
  double cdf_prefactor;  // 2^{1/24} e^{zeta'(-1)} on the left, 1/(16 pi) on the right
};

const TailSeries& left_tail();
const TailSeries& right_tail();

struct TailValue {
  double sigma, d_sigma;
  double cdf;
  double log_cdf;
  double upper_tail;   // 1 - cdf without cancellation
  double sigma_error;  // size of the first omitted term
  double cdf_error;    // relative; in 1 - cdf on the right
};

// Left requires s <= -4, Right requires s >= 4.
TailValue tail_eval(TailSide side, double s);

// ---- scaling t = c1 n + c2 n^{1/3} s ----

enum class ScalingRegime { Proportional, Finite };

struct ScalingMap {
  int n = 0;
  double alpha = 0, mu = 0, c1 = 4, c2 = 0;
};

ScalingMap scaling_map(int n, double alpha, ScalingRegime regime);

// ---- sigma form of P_II on [s_min, s_max] ----

struct SoftEdgeGrid {
  std::vector<double> s, sigma, d_sigma, dd_sigma;
  std::vector<double> w;     // sqrt(-sigma'), zero where -sigma' rounds below 0
  std::vector<double> y;     // -1/sigma'
  std::vector<double> logP;  // ln of the soft-edge CDF
  double s_min = 0, s_max = 0, tol = 0;
  double max_residual = 0;  // first-integral residual, relative to max(1, largest term)
  int fine_points = 0;      // size of the finest collocation mesh
  int newton_iterations = 0;

  const std::vector<double>& r() const { return d_sigma; }
};

// Trapezoidal collocation of sigma''' = -6 sigma'^2 + 4 s sigma' - 2 sigma on
// meshes of grid_n, 2 grid_n - 1 and 4 grid_n - 3 points with Richardson
// extrapolation to the grid_n points; doubles grid_n until the first-integral
// residual is below tol.
SoftEdgeGrid solve_sigma_pii(double s_min = -12, double s_max = 12, int grid_n = 2401, double tol = 1e-10);

// sigma, sigma', sigma'' at an arbitrary s inside the grid (quintic Hermite).
struct SoftEdgePoint {
  double sigma, d_sigma, dd_sigma;
};
SoftEdgePoint sample(const SoftEdgeGrid& g, double s);

// sigma''' and sigma'''' from the third-order equation.
double third_derivative(double s, double sigma, double d_sigma);
double fourth_derivative(double s, double d_sigma, double dd_sigma);

struct HastingsMcLeod {
  std::vector<double> w;
  double pii_residual = 0;      // max |w'' - 2w^3 - s w| / max(1, |s w|, |2 w^3|)
  double p5inf_residual = 0;    // y'' = 3y'^2/(2y) - 2 s y - 4 on the well-resolved part
  double limitrn_residual = 0;  // r'' = r'^2/(2r) + 2 s r - 4 r^2
  double checked_up_to = 0;     // largest s where w is above the noise floor
  bool clamped = false;         // -sigma' < 0 from rounding somewhere
};
HastingsMcLeod hastings_mcleod(const SoftEdgeGrid& g);

// Pointwise relations between sigma, r = sigma' and y = -1/r, max relative residuals.
struct SigmaRelations {
  double sigma_y = 0, sigma_r = 0, d_sigma_y = 0, first_integral = 0;
};
SigmaRelations sigma_relations(const SoftEdgeGrid& g);

// ln of the CDF at an arbitrary s inside the grid (quintic Hermite with sigma, sigma').
double log_cdf_at(const SoftEdgeGrid& g, double s);
std::vector<double> tw_cdf(const SoftEdgeGrid& g);
double tw_mean(const SoftEdgeGrid& g);

// ---- finite-n convergence ----

enum class ScaledQuantity { Sigma, R, BetaCombination, RCap, AlphaCombination };
const char* scaled_quantity_name(ScaledQuantity q);

struct ConvergenceRow {
  int n;
  double s;
  ScaledQuantity quantity;
  double scaled, limit, deviation;
};

std::vector<ConvergenceRow> convergence_experiment(const std::vector<int>& n_list, const Real& alpha,
                                                   const std::vector<double>& s_list, ScalingRegime regime,
                                                   const SoftEdgeGrid& grid, const PrecisionContext& ctx);

}  // namespace rmt
