#include "rmt/identity_lab.hpp"

#include <algorithm>
#include <set>

namespace rmt {

ResidualReport residual_from_terms(const std::string& id, int n, const Real& alpha, const Real& t,
                                   const std::vector<Real>& terms) {
  ResidualReport rep;
  rep.identity_id = id;
  rep.n = n;
  rep.alpha = alpha;
  rep.t = t;
  Real sum = 0, scale = 0;
  for (const Real& x : terms) {
    sum += x;
    scale = std::max(scale, Real(abs(x)));
  }
  rep.residual = abs(sum);
  // an identity whose terms all vanish is satisfied exactly
  rep.scale = scale > 0 ? scale : Real(1);
  rep.relative = rep.residual / rep.scale;
  return rep;
}

namespace {

ResidualReport make(const std::string& id, const LadderState& s, const std::vector<Real>& terms) {
  return residual_from_terms(id, s.n, s.alpha, s.t, terms);
}

void require_nonzero(const Real& x, const char* what) {
  if (x == 0) throw DegenerateState(std::string("division by zero ") + what);
}

}  // namespace

LadderState with_differences(const LadderState& s, const LadderDifferences& d) {
  LadderState o = s;
  o.d_r = d.d_r;
  o.d_R = d.d_R;
  o.d_sigma = d.d_sigma;
  o.dd_sigma = d.d_r;
  o.d_beta = d.d_beta;
  o.dd_r = d.dd_r;
  o.dd_beta = d.dd_beta;
  o.d_S = d.d_R / (s.R * s.R);
  return o;
}

std::vector<ResidualReport> residual_riccati(const LadderState& s, const std::optional<LadderDifferences>& fd) {
  const Real &t = s.t, &r = s.r, &R = s.R;
  const Real m = 2 * s.n + s.alpha, nn = s.n * (s.n + s.alpha);
  const Real dr = fd ? fd->d_r : s.d_r;
  const Real dR = fd ? fd->d_R : s.d_R;
  require_nonzero(R, "R_n");
  require_nonzero(R - 1, "R_n - 1");
  return {
      make("riccati_r", s, {t * dr, -r * r / R, -r * r / (R - 1), -m * R * r / (R - 1), -nn * R / (R - 1)}),
      make("riccati_R", s, {t * dR, -t * R * R, -m * R, t * R, -2 * r}),
  };
}

std::vector<ResidualReport> residual_difference(const LadderState& prev, const LadderState& cur,
                                                const LadderState& next) {
  if (cur.n < 1 || prev.n != cur.n - 1 || next.n != cur.n + 1)
    throw DomainError("residual_difference: need states at n-1, n, n+1 with n >= 1");
  const Real &t = cur.t, &r = cur.r, &R = cur.R, &Rp = prev.R;
  const int n = cur.n;
  const Real m = 2 * n + cur.alpha, nn = n * (n + cur.alpha);
  require_nonzero(R, "R_n");
  require_nonzero(Rp, "R_{n-1}");
  return {
      make("difference_r", cur, {next.r, r, -(t - 2 * n - 1 - cur.alpha) * R, t * R * R}),
      make("difference_R", cur, {r * r / (R * Rp), -r * r / R, -r * r / Rp, -m * r, -nn}),
  };
}

std::vector<ResidualReport> residual_alpha_beta(const LadderState& s) {
  const Real &t = s.t, &r = s.r, &R = s.R, &b = s.beta_n;
  const Real m = 2 * s.n + s.alpha, nn = s.n * (s.n + s.alpha);
  require_nonzero(R, "R_n");
  return {
      make("alpha_from_R", s, {s.alpha_n, -(2 * s.n + 1 + s.alpha), -t * R}),
      make("beta_from_rR", s, {b, -b * R, -m * r, -nn, -r * r / R}),
  };
}

ResidualReport residual_betan_quartic(const LadderState& s) {
  const Real &r = s.r, &b = s.beta_n, &db = s.d_beta;
  const Real m = 2 * s.n + s.alpha, nn = s.n * (s.n + s.alpha);
  return make("beta_quartic", s,
              {m * m * r * r, -4 * b * r * r, 2 * m * nn * r, -2 * m * b * r, nn * nn, -2 * nn * b, b * b, -db * db});
}

ResidualReport residual_betan_ode(const LadderState& s) {
  const Real &t = s.t, &a = s.alpha, &b = s.beta_n, &db = s.d_beta, &ddb = s.dd_beta;
  const int n = s.n;
  const Real m = 2 * n + a, nn = n * (n + a);
  const Real k = m * m - 4 * b;
  const Real inner = 2 * nn * nn * m * m - 8 * nn * (a * a + 3 * n * n + 3 * a * n) * b + 6 * m * m * b * b -
                     8 * b * b * b + 2 * k * db * db + k * k * ddb;
  const Real lhs = t * t * inner * inner;
  const Real c = m * m * m * m - a * a * m * t - 8 * m * m * b + 16 * b * b;
  const Real rhs = c * c * (4 * b * (nn - b) * (nn - b) + k * db * db);
  return make("beta_ode", s, {lhs, -rhs});
}

PVParameters pv_parameters(int n, const Real& alpha) {
  return {Real(0), -alpha * alpha / 2, 2 * n + 1 + alpha, Real(-1) / 2};
}

ResidualReport residual_pv_Sn(const LadderState& s) {
  const Real &t = s.t, &S = s.S, &dS = s.d_S, &ddS = s.dd_S;
  require_nonzero(S, "S_n");
  require_nonzero(S - 1, "S_n - 1");
  const PVParameters p = pv_parameters(s.n, s.alpha);
  const Real w = (S - 1) * (S - 1) / (t * t);
  return make("painleve5_S", s,
              {ddS, -dS * dS / (2 * S), -dS * dS / (S - 1), dS / t, -w * p.pv_a * S, -w * p.pv_b / S,
               -p.pv_c * S / t, -p.pv_d * S * (S + 1) / (S - 1)});
}

ResidualReport residual_sigma_form(const LadderState& s) {
  const Real &t = s.t, &sg = s.sigma, &d = s.d_sigma, &dd = s.dd_sigma;
  const Real m = 2 * s.n + s.alpha, nn = s.n * (s.n + s.alpha);
  const Real a = t * dd, b = sg - (t - m) * d;
  return make("sigma_form_pv", s, {a * a, -b * b, -4 * d * d * (sg - t * d - nn)});
}

std::vector<ResidualReport> residual_sigma_Rn(const LadderState& s) {
  const Real &t = s.t, &a = s.alpha, &R = s.R, &dR = s.d_R, &S = s.S, &dS = s.d_S;
  const int n = s.n;
  require_nonzero(R, "R_n");
  require_nonzero(R - 1, "R_n - 1");
  require_nonzero(S, "S_n");
  const Real c = 4 * n + 2 * a - t;
  return {
      make("sigma_from_R", s,
           {s.sigma, -a * a / 4 * R / (1 - R), c * t * R / 4, t * t * R * R / 4, t * t * dR * dR / (4 * R * (1 - R))}),
      make("sigma_from_S", s,
           {s.sigma, a * a / (4 * S), -t * c / (4 * (S - 1)), t * t / (4 * (S - 1) * (S - 1)),
            -t * t * dS * dS / (4 * (S - 1) * (S - 1) * S)}),
  };
}

ResidualReport residual_rn_ode(const LadderState& s) {
  const Real &t = s.t, &r = s.r, &dr = s.d_r, &ddr = s.dd_r;
  const Real m = 2 * s.n + s.alpha, nn = s.n * (s.n + s.alpha);
  const Real l = t * (dr + t * ddr) + 8 * r * r * r + 6 * m * r * r + 4 * nn * r;
  const Real f = 4 * r + m - t;
  const Real rhs = f * f * (t * t * dr * dr + 4 * r * r * r * r + 4 * m * r * r * r + 4 * nn * r * r);
  return make("r_ode", s, {l * l, -rhs});
}

BranchReport residual_rn_branches(const LadderState& s) {
  const Real &t = s.t, &r = s.r, &dr = s.d_r;
  const Real m = 2 * s.n + s.alpha, nn = s.n * (s.n + s.alpha);
  BranchReport out;
  out.discriminant = 4 * nn * r * r + 4 * m * r * r * r + 4 * r * r * r * r + t * t * dr * dr;
  const Real den = 2 * (t * dr - m * r - nn);
  require_nonzero(den, "branch denominator");
  const Real root = out.discriminant >= 0 ? Real(sqrt(out.discriminant)) : Real(0);
  const Real rp = (t * dr + 2 * r * r + root) / den;
  const Real rm = (t * dr + 2 * r * r - root) / den;
  out.plus = make("r_branch_plus", s, {rp, -s.R});
  out.minus = make("r_branch_minus", s, {rm, -s.R});
  if (out.discriminant < 0) {
    out.plus.relative = out.minus.relative = std::numeric_limits<Real>::infinity();
  }
  return out;
}

DiscreteMapState discrete_map_state(const std::vector<LadderState>& states) {
  DiscreteMapState d;
  const std::size_t N = states.size();
  d.x_seq.assign(N + 1, Real(0));
  d.y_seq.assign(N, Real(0));
  for (std::size_t n = 0; n < N; ++n) {
    if (states[n].n != static_cast<int>(n)) throw DomainError("discrete_map_state: states must be indexed by n");
    require_nonzero(states[n].R, "R_n");
    d.x_seq[n + 1] = 1 - 1 / states[n].R;
    d.y_seq[n] = -states[n].r;
  }
  return d;
}

std::vector<ResidualReport> discrete_map_check(const std::vector<LadderState>& states) {
  const DiscreteMapState d = discrete_map_state(states);
  std::vector<ResidualReport> out;
  for (std::size_t i = 1; i < states.size(); ++i) {
    const LadderState& s = states[i];
    const int n = s.n;
    const Real m = 2 * n + s.alpha, nn = n * (n + s.alpha);
    const Real &x = d.x_seq[n], &xn = d.x_seq[n + 1], &y = d.y_seq[n], &yp = d.y_seq[n - 1];
    const Real c = 2 * n - 1 + s.alpha;
    // both recurrences multiplied through by their denominators
    out.push_back(make("discrete_map_x", s, {xn * x * y * y, -y * y, m * y, -nn}));
    out.push_back(
        make("discrete_map_y", s, {y * (x - 1) * (x - 1), yp * (x - 1) * (x - 1), (-s.t + c) * x, -c}));
  }
  return out;
}

std::vector<ResidualReport> identity_sweep(const std::vector<int>& ns, const std::vector<Real>& alphas,
                                           const std::vector<Real>& ts, const PrecisionContext& ctx,
                                           const SweepOptions& opts) {
  if (ns.empty()) return {};
  PrecisionGuard g(ctx);
  const int top = *std::max_element(ns.begin(), ns.end());
  if (*std::min_element(ns.begin(), ns.end()) < 1) throw DomainError("identity_sweep: n >= 1 required");
  const std::set<int> wanted(ns.begin(), ns.end());
  std::vector<ResidualReport> out;
  for (const Real& a : alphas)
    for (const Real& t : ts) {
      WeightSpec spec = WeightSpec::laguerre(at_precision(a, ctx), at_precision(t, ctx));
      OPChain chain = op_chain(spec, top + 2, ctx);
      std::vector<LadderState> states;
      for (int n = 0; n <= top + 1; ++n) states.push_back(ladder_state(chain, spec, n, ctx));
      std::vector<LadderDifferences> fd;
      if (opts.use_fd) fd = ladder_differences_all(spec, chain, opts.fd_step, ctx);
      for (int n : wanted) {
        const LadderState& s = states[n];
        auto add = [&out](std::vector<ResidualReport> v) { out.insert(out.end(), v.begin(), v.end()); };
        add(residual_riccati(s, opts.use_fd ? std::optional<LadderDifferences>(fd[n]) : std::nullopt));
        add(residual_difference(states[n - 1], s, states[n + 1]));
        add(residual_alpha_beta(s));
        out.push_back(residual_betan_quartic(s));
        out.push_back(residual_betan_ode(s));
        out.push_back(residual_pv_Sn(s));
        out.push_back(residual_sigma_form(s));
        add(residual_sigma_Rn(s));
        out.push_back(residual_rn_ode(s));
      }
      for (const ResidualReport& rep : discrete_map_check(states))
        if (wanted.count(rep.n)) out.push_back(rep);
    }
  return out;
}

}  // namespace rmt
