#pragma once

#include <array>
#include <vector>

#include "rmt/identity_lab.hpp"
#include "rmt/wavefunction.hpp"

namespace rmt {

// Coefficients of the limit equation in working precision, rebuilt from (s, r, r')
// so that the linear relations between them hold to rounding.
struct FrobeniusCoeffs {
  Real s, r, d_r;
  Real a0, a1, a2, a3, b1, b2, A;
};
FrobeniusCoeffs frobenius_coeffs(const LimitODECoeffs& c, const PrecisionContext& ctx);

enum class FrobeniusPoint { Zero, One };

// Y = sum c_n y^{exponent + n} with y = x at Zero and y = x - 1 at One.
// At Zero, d_n = dc_n/dtau and the companion is sum d_n y^{tau+n} + ln x Y.
// At One, d_n = 2 dc_n/dlambda and the companion is sum d_n y^{lambda+n} + 2 ln|x - 1| Y.
struct FrobeniusSeries {
  FrobeniusPoint point = FrobeniusPoint::Zero;
  Real exponent;
  std::vector<Real> c, d;
  bool has_log = false;
  int N = 0;
  FrobeniusCoeffs k;
};

FrobeniusSeries series_zero(const FrobeniusCoeffs& k, const Real& tau, int N, bool with_log, const PrecisionContext& ctx);
// lam must be 0 or 2. At lam = 0 every c_n vanishes and the companion follows
// the lam = 0 recurrence with d_0 = 1, d_2 = 0.
FrobeniusSeries series_one(const FrobeniusCoeffs& k, int lam, int N, bool with_log, const PrecisionContext& ctx);

struct SeriesValue {
  Real f, df, ddf;
  Real truncation;  // size of the omitted tail relative to |f|, geometric estimate
};
SeriesValue evaluate(const FrobeniusSeries& s, const Real& x, bool companion);

// Terms of the equation at the series' point (x^2 - x) f'' - f' + (...) f,
// or its form in powers of x - 1.
ResidualReport series_residual(const FrobeniusSeries& s, const Real& x, bool companion);

// Largest relative defect of the coefficient recurrences, re-evaluated term by term.
Real recurrence_defect(const FrobeniusSeries& s);

// Large-index coefficients: c_n ~ K sum theta_l / n^l at Zero (l >= 3) and
// c_n ~ K (-1)^n sum theta_l / n^l at One (l >= 1); nu is the matching
// exponent derivative (d/dtau at Zero, 2 d/dlambda at lambda = 0 at One).
struct TailCoeffs {
  FrobeniusPoint point = FrobeniusPoint::Zero;
  Real exponent;
  std::vector<Real> theta, nu;  // indexed by l, unused low entries are 0
  int lmax = 0;
};

TailCoeffs tail_zero(const FrobeniusCoeffs& k, const Real& tau, int lmax, const PrecisionContext& ctx);
TailCoeffs tail_one(const FrobeniusCoeffs& k, int lam, int lmax, const PrecisionContext& ctx);

struct TailMatch {
  Real scale;            // K, fitted from the last coefficient
  Real derivative_scale;  // K' for the companion match, 0 otherwise
  double exponent = 0;   // fitted decay exponent of the remainder (positive)
  int l_used = 0;
  std::vector<int> n;
  std::vector<Real> remainder;
};

// Least-squares slope of ln|c_n/K - sum_{l <= l_used} theta_l / n^l| against ln n
// over n in [n_lo, n_hi] (step n_step). Needs s.N > n_hi.
TailMatch tail_match(const FrobeniusSeries& s, const TailCoeffs& t, int n_lo, int n_hi, int l_used, int n_step = 10);
// Same for the companion: d_n ~ K' sum theta / n^l + K sum nu / n^l at Zero,
// d_n ~ K (-1)^n sum nu / n^l at One (lambda = 0).
TailMatch tail_match_companion(const FrobeniusSeries& s, const TailCoeffs& t, int n_lo, int n_hi, int l_used,
                               int n_step = 10);

struct ConnectionReport {
  Real x_eval;
  // [Y0, Y0 companion] = [Y1(lam=2), Y1 companion] M at the collocation points
  std::array<Real, 4> matrix;
  Real determinant;
  Real series_mismatch;      // at x_eval, relative
  Real integrator_mismatch;  // series against the adaptive integrator, relative
  Real truncation;           // worst truncation estimate of the four series
  bool truncation_warning = false;
};

ConnectionReport crosscheck_integration(const LimitODECoeffs& c, double x_eval, int N, const PrecisionContext& ctx,
                                        double tolerance = 1e-8);

}  // namespace rmt
