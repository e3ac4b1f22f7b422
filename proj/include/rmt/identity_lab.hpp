#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmt/lue_ensemble.hpp"

namespace rmt {

// |Σ terms| of an identity written as Σ terms = 0, relative to the largest term.
struct ResidualReport {
  std::string identity_id;
  int n = 0;
  Real alpha, t;
  Real residual;
  Real scale;
  Real relative;
  Real point = 0;  // evaluation coordinate (z or x) where the identity is pointwise
};

// Builds a report from the signed terms of an identity that should sum to 0.
ResidualReport residual_from_terms(const std::string& id, int n, const Real& alpha, const Real& t,
                                   const std::vector<Real>& terms);

// Replaces the Riccati-closed derivatives of `s` by finite differences.
LadderState with_differences(const LadderState& s, const LadderDifferences& d);

// t r' and t R' against their Riccati right-hand sides. With `fd` the
// derivatives come from central differences instead of the closure.
std::vector<ResidualReport> residual_riccati(const LadderState& s, const std::optional<LadderDifferences>& fd = {});

// r_{n+1} + r_n against R_n, and the quadratic in r_n linking R_n, R_{n-1}.
std::vector<ResidualReport> residual_difference(const LadderState& prev, const LadderState& cur,
                                                const LadderState& next);

// alpha_n and beta_n recovered from r_n, R_n.
std::vector<ResidualReport> residual_alpha_beta(const LadderState& s);

// Quadratic in r_n with coefficients in beta_n, beta_n'.
ResidualReport residual_betan_quartic(const LadderState& s);

// Second-order second-degree ODE for beta_n.
ResidualReport residual_betan_ode(const LadderState& s);

// Generic Painlevé V coefficients (pv_a, pv_b, pv_c, pv_d) satisfied by S_n.
struct PVParameters {
  Real pv_a, pv_b, pv_c, pv_d;
};
PVParameters pv_parameters(int n, const Real& alpha);
ResidualReport residual_pv_Sn(const LadderState& s);

// Jimbo–Miwa–Okamoto sigma form with nu = (0, n, n + alpha).
ResidualReport residual_sigma_form(const LadderState& s);

// sigma_n rebuilt from (R_n, R_n') and from (S_n, S_n').
std::vector<ResidualReport> residual_sigma_Rn(const LadderState& s);

// Third-degree ODE for r_n alone.
ResidualReport residual_rn_ode(const LadderState& s);

// R_n recovered from (r_n, r_n') on both square-root branches. Each report
// compares one branch with R_n; the discriminant is returned alongside.
struct BranchReport {
  ResidualReport plus, minus;
  Real discriminant;
};
BranchReport residual_rn_branches(const LadderState& s);

struct DiscreteMapState {
  std::vector<Real> x_seq;  // x_n = 1 - 1/R_{n-1}, index n (x_seq[0] unused)
  std::vector<Real> y_seq;  // y_n = -r_n
};
DiscreteMapState discrete_map_state(const std::vector<LadderState>& states);

// states[n] for n = 0..N; reports both recurrences for n = 1..N.
std::vector<ResidualReport> discrete_map_check(const std::vector<LadderState>& states);

struct SweepOptions {
  // Riccati pair checked against central differences with this step; the
  // closure derivatives are used elsewhere.
  Real fd_step;
  bool use_fd = true;
};

// All identities on the grid n x alpha x t at the context precision.
std::vector<ResidualReport> identity_sweep(const std::vector<int>& ns, const std::vector<Real>& alphas,
                                           const std::vector<Real>& ts, const PrecisionContext& ctx,
                                           const SweepOptions& opts);

}  // namespace rmt
