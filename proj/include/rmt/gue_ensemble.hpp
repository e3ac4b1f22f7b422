#pragma once

#include <optional>
#include <vector>

#include "rmt/identity_lab.hpp"
#include "rmt/op_chain.hpp"

namespace rmt {

// Monic orthogonal polynomials of e^{-x^2} on (-inf, t] (jump_beta = -1,
// largest eigenvalue) or on [t, inf) (jump_beta = +1, smallest eigenvalue).
struct GUEChain {
  int n_max = 0;
  Real t;
  int jump_beta = -1;
  Real lower, upper;  // truncated support actually integrated
  std::vector<Real> h, alpha_rec, beta_rec;
  std::vector<Real> r;          // r_n, r_0 = 0
  std::vector<Real> sum_alpha;  // sum_{j<n} alpha_j
  std::vector<Real> log_det;    // ln D_n = sum_{j<n} ln h_j
  OPChain chain;
};

struct GUEChainOptions {
  int jump_beta = -1;
  std::optional<MeshLayout> pinned_mesh;
};

GUEChain gue_chain(const Real& t, int n_max, const PrecisionContext& ctx, const GUEChainOptions& opts = {});

// Values at degree n with derivatives closed through r_n' = 2(n+r)(alpha_{n-1}-alpha_n)
// and alpha_n' = 2(r_n - alpha_n(t - alpha_n)).
struct GUEState {
  int n = 0;
  Real t;
  Real alpha, alpha_prev, r, r_prev, beta, sum_alpha;
  Real d_alpha, d_alpha_prev, dd_alpha;
  Real d_r, dd_r;
  Real xi, d_xi, dd_xi;  // d/dt ln D_n and its derivatives
  Real xi_direct;        // sum_j P_j(t)^2 e^{-t^2} / h_j
};

GUEState gue_state(const GUEChain& c, int n, const PrecisionContext& ctx);

// Central differences over chains at t +/- step on the base panel layout.
struct GUEDifferences {
  Real d_alpha, d_r, dd_alpha, dd_log_det, d_log_det;
};
GUEDifferences gue_differences(const GUEChain& base, int n, const Real& step, const PrecisionContext& ctx);

// r^2 = 2(n+r) alpha_n alpha_{n-1}; r' against alpha_{n-1} - alpha_n;
// r against alpha_n and alpha_n'; -2 sum alpha_j against r, alpha_n, alpha_{n-1}.
// Derivatives are taken from `fd`.
std::vector<ResidualReport> residual_gue_identities(const GUEState& s, const GUEDifferences& fd);

// Second-order ODE for alpha_n with closure derivatives.
ResidualReport residual_gue_alphan_ode(const GUEState& s);

// sigma form of Painlevé IV for xi with nu = (0, 2n).
ResidualReport residual_sigma_piv(const GUEState& s);

// xi from the sum over the chain against its closed expression.
ResidualReport residual_gue_log_derivative(const GUEState& s);

std::vector<ResidualReport> gue_sweep(const std::vector<int>& ns, const std::vector<Real>& ts, const Real& fd_step,
                                      const PrecisionContext& ctx);

}  // namespace rmt
