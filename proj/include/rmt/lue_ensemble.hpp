#pragma once

#include <optional>
#include <vector>

#include "rmt/op_chain.hpp"
#include "rmt/special_fn.hpp"

namespace rmt {

enum class WeightKind { LaguerreCutoff, HermiteCutoff };

// x^alpha e^{-x} on (0, t) or e^{-x^2} on (-inf, t]. t may be +inf.
struct WeightSpec {
  WeightKind kind = WeightKind::LaguerreCutoff;
  Real alpha = 0;
  Real t = 0;

  static WeightSpec laguerre(const Real& alpha, const Real& t);
  Real w(const Real& x) const;
  // v = -ln w
  Real v(const Real& x) const;
};

struct MomentTable {
  std::vector<Real> mu;
  int kmax = 0;
};

MomentTable moments(const WeightSpec& spec, int kmax, const PrecisionContext& ctx);

// det(mu_{i+j}), i,j < n, by partially pivoted elimination.
Real hankel_det(const MomentTable& m, int n, const PrecisionContext& ctx);

struct ChainOptions {
  std::optional<MeshLayout> pinned_mesh;
  bool hankel_crosscheck = true;
};

OPChain op_chain(const WeightSpec& spec, int n_max, const PrecisionContext& ctx,
                 const ChainOptions& opts = {});

// Boundary values of the ladder coefficients at x = t and their t-derivatives
// closed through the Riccati pair.
struct LadderState {
  int n = 0;
  Real alpha, t;
  Real r, R, S, sigma;
  Real alpha_n, beta_n;  // recurrence coefficients of the chain at n
  Real d_r, d_R, dd_r, dd_R;
  Real d_S, dd_S;
  Real d_sigma, dd_sigma;
  Real d_beta, dd_beta;
};

LadderState ladder_state(const OPChain& chain, const WeightSpec& spec, int n, const PrecisionContext& ctx);

// Central differences of directly recomputed r, R, sigma, beta over chains at
// t +/- step that reuse the base chain's panel layout.
struct LadderDifferences {
  Real d_r, d_R, d_sigma, d_beta;
  Real dd_r, dd_beta;  // second differences
};
LadderDifferences ladder_differences(const WeightSpec& spec, const OPChain& base, int n, const Real& step,
                                     const PrecisionContext& ctx);
// Same for every n < base.n_max from one pair of perturbed chains.
std::vector<LadderDifferences> ladder_differences_all(const WeightSpec& spec, const OPChain& base, const Real& step,
                                                     const PrecisionContext& ctx);

Real largest_eigenvalue_cdf(int n, const Real& alpha, const Real& t, const PrecisionContext& ctx);

// D_n(0, inf) = prod_{j<n} j! Gamma(j + alpha + 1)
Real full_hankel_det(int n, const Real& alpha, const PrecisionContext& ctx);

}  // namespace rmt
