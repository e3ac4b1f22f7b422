#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rmt/special_fn.hpp"

namespace rmt {

// Panel layout of a composite Gauss–Legendre rule on [lo, hi], expressed in
// fractions of the interval so it can be reused at a perturbed endpoint.
struct MeshLayout {
  std::vector<double> breaks;  // ascending, breaks.front()=0, breaks.back()=1
  int order = 0;
};

// Monic orthogonal polynomials of a discretised weight.
struct OPChain {
  int n_max = 0;
  std::vector<Real> h;          // squared norms, 0..n_max
  std::vector<Real> alpha_rec;  // 0..n_max
  std::vector<Real> beta_rec;   // beta_rec[0] unused (0)
  std::vector<Real> p1;         // sub-leading coefficient, p1[0] = 0
  std::vector<std::vector<Real>> poly;  // poly[n][k] = coefficient of x^k in P_n
  MeshLayout mesh;

  // P_0..P_n at x by the three-term recurrence.
  std::vector<Real> eval_all(int n, const Real& x) const;
  Real eval(int n, const Real& x) const;
};

// Stieltjes procedure on the discrete measure Σ w_k δ(x - x_k).
OPChain stieltjes(const std::vector<Real>& x, const std::vector<Real>& w, int n_max);

// Nodes/weights of the composite rule for `layout` mapped to [lo, hi],
// multiplied by weight_fn(x).
void composite_rule(const MeshLayout& layout, const Real& lo, const Real& hi,
                    const std::function<Real(const Real&)>& weight_fn, const PrecisionContext& ctx,
                    std::vector<Real>& x, std::vector<Real>& w);

// Splits every panel in two.
MeshLayout refine(const MeshLayout& layout);

// Builds the chain on [lo, hi] starting from `initial`, doubling panels until
// successive h and alpha agree to 10^-(digits-10) relative. A pinned layout is
// used as is.
OPChain adaptive_chain(const MeshLayout& initial, bool pinned, const Real& lo, const Real& hi,
                       const std::function<Real(const Real&)>& weight_fn, int n_max,
                       const PrecisionContext& ctx);

}  // namespace rmt
