#include "rmt/softedge.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <array>
#include <boost/math/special_functions/airy.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <sstream>

namespace rmt {

ScalingMap scaling_map(int n, double alpha, ScalingRegime regime) {
  if (n < 1) throw DomainError("scaling_map: n < 1");
  if (!(alpha >= 0)) throw DomainError("scaling_map: alpha < 0");
  ScalingMap m;
  m.n = n;
  m.alpha = alpha;
  m.mu = regime == ScalingRegime::Proportional ? alpha / n : 0.0;
  const double root = std::sqrt(m.mu + 1) + 1;
  m.c1 = root * root;
  m.c2 = std::pow(root, 4.0 / 3.0) / std::pow(m.mu + 1, 1.0 / 6.0);
  return m;
}

double third_derivative(double s, double sigma, double d_sigma) {
  return -6 * d_sigma * d_sigma + 4 * s * d_sigma - 2 * sigma;
}

double fourth_derivative(double s, double d_sigma, double dd_sigma) {
  return -12 * d_sigma * dd_sigma + 2 * d_sigma + 4 * s * dd_sigma;
}

namespace {

struct Mesh {
  double s0, h;
  int m;
  std::vector<double> y;  // (sigma, sigma', sigma'') per node
  int iterations = 0;

  double s(int i) const { return s0 + i * h; }
};

struct Boundary {
  double sigma_left, sigma_right, d_sigma_right;
};

// Starting guess: w'' = s w + 2 w^3 marched leftwards from Airy data together with
// sigma' = -w^2. The march leaves the separatrix somewhere on the left; from there
// the left series takes over.
std::vector<double> initial_guess(double s0, double h, int m, double sigma_right) {
  using State = std::array<double, 3>;  // w, w', sigma
  std::vector<double> y(3 * static_cast<std::size_t>(m));
  const double s_end = s0 + (m - 1) * h;
  State x{boost::math::airy_ai(s_end), boost::math::airy_ai_prime(s_end), sigma_right};
  auto rhs = [](const State& u, State& du, double s) {
    du[0] = u[1];
    du[1] = s * u[0] + 2 * u[0] * u[0] * u[0];
    du[2] = -u[0] * u[0];
  };
  boost::numeric::odeint::runge_kutta4<State> stepper;
  int lost = -1;
  for (int i = m - 1; i >= 0; --i) {
    const double s = s0 + i * h;
    const double w = x[0];
    if (!std::isfinite(w) || w < 0 || w > 1.5 * std::sqrt(std::max(1.0, -s / 2)) + 0.5 || (s < -3 && w < 0.5 * std::sqrt(-s / 2))) {
      lost = i;
      break;
    }
    y[3 * i] = x[2];
    y[3 * i + 1] = -w * w;
    y[3 * i + 2] = -2 * w * x[1];
    if (i > 0)
      for (int k = 0; k < 8; ++k) stepper.do_step(rhs, x, s - k * h / 8, -h / 8);
  }
  if (lost < 0) return y;
  // join the left series to the last trusted point
  const int join = std::min(m - 1, lost + static_cast<int>(std::ceil(0.5 / h)));
  const double sj = s0 + join * h;
  if (sj > -3) throw ConvergenceError("solve_sigma_pii: no usable starting guess");
  const auto& L = left_tail();
  auto series = [&](double s, int k) {
    double acc = 0;
    for (const auto& c : L.sigma_coeffs) {
      double f = c.value();
      for (int d = 0; d < k; ++d) f *= c.power - d;
      acc += f * std::pow(s, c.power - k);
    }
    return acc;
  };
  const double shift[3] = {y[3 * join] - series(sj, 0), y[3 * join + 1] - series(sj, 1), y[3 * join + 2] - series(sj, 2)};
  for (int i = 0; i < join; ++i) {
    const double s = s0 + i * h;
    const double fade = std::exp(-(sj - s));
    for (int e = 0; e < 3; ++e) y[3 * i + e] = series(s, e) + fade * shift[e];
  }
  return y;
}

void residual(const Mesh& M, const Boundary& b, const std::vector<double>& y, Eigen::VectorXd& G) {
  const int m = M.m;
  G.resize(3 * m);
  auto f = [&](int i, int e) {
    const double s = M.s(i), sg = y[3 * i], p = y[3 * i + 1], q = y[3 * i + 2];
    return e == 0 ? p : e == 1 ? q : third_derivative(s, sg, p);
  };
  G[0] = y[0] - b.sigma_left;
  for (int i = 0; i + 1 < m; ++i)
    for (int e = 0; e < 3; ++e)
      G[1 + 3 * i + e] = y[3 * (i + 1) + e] - y[3 * i + e] - M.h / 2 * (f(i, e) + f(i + 1, e));
  G[3 * m - 2] = y[3 * (m - 1)] - b.sigma_right;
  G[3 * m - 1] = y[3 * (m - 1) + 1] - b.d_sigma_right;
}

Eigen::SparseMatrix<double> jacobian(const Mesh& M, const std::vector<double>& y) {
  const int m = M.m;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(m) * 16);
  trip.emplace_back(0, 0, 1.0);
  const double hh = M.h / 2;
  for (int i = 0; i + 1 < m; ++i) {
    for (int side = 0; side < 2; ++side) {
      const int j = i + side;
      const double sgn = side == 0 ? -1.0 : 1.0;
      const int c = 3 * j;
      const double s = M.s(j), p = y[c + 1];
      // d/dY_j of (+/- Y_j - h/2 f(Y_j))
      trip.emplace_back(1 + 3 * i, c, sgn);
      trip.emplace_back(1 + 3 * i, c + 1, -hh);
      trip.emplace_back(2 + 3 * i, c + 1, sgn);
      trip.emplace_back(2 + 3 * i, c + 2, -hh);
      trip.emplace_back(3 + 3 * i, c + 2, sgn);
      trip.emplace_back(3 + 3 * i, c, 2 * hh);
      trip.emplace_back(3 + 3 * i, c + 1, -hh * (-12 * p + 4 * s));
    }
  }
  trip.emplace_back(3 * m - 2, 3 * (m - 1), 1.0);
  trip.emplace_back(3 * m - 1, 3 * (m - 1) + 1, 1.0);
  Eigen::SparseMatrix<double> J(3 * m, 3 * m);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

void newton(Mesh& M, const Boundary& b) {
  Eigen::VectorXd G, Gt;
  residual(M, b, M.y, G);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  for (int it = 0; it < 60; ++it) {
    auto J = jacobian(M, M.y);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw ConvergenceError("solve_sigma_pii: singular collocation Jacobian");
    Eigen::VectorXd d = lu.solve(-G);
    const double g0 = G.lpNorm<Eigen::Infinity>();
    double lam = 1;
    std::vector<double> trial(M.y.size());
    for (;;) {
      for (std::size_t k = 0; k < trial.size(); ++k) trial[k] = M.y[k] + lam * d[static_cast<Eigen::Index>(k)];
      residual(M, b, trial, Gt);
      if (Gt.lpNorm<Eigen::Infinity>() <= (1 - lam / 4) * g0 || lam < 1.0 / 1024) break;
      lam /= 2;
    }
    M.y.swap(trial);
    G = Gt;
    M.iterations = it + 1;
    double ymax = 1;
    for (double v : M.y) ymax = std::max(ymax, std::abs(v));
    if (lam == 1 && d.lpNorm<Eigen::Infinity>() <= 1e-13 * ymax) return;
    if (G.lpNorm<Eigen::Infinity>() <= 64 * std::numeric_limits<double>::epsilon() * ymax) return;
  }
  std::ostringstream os;
  os << "solve_sigma_pii: Newton did not converge, residual " << G.lpNorm<Eigen::Infinity>();
  throw ConvergenceError(os.str());
}

// Prolongation from m to 2m - 1 points by cubic Hermite midpoints.
std::vector<double> prolong(const Mesh& M) {
  const int m2 = 2 * M.m - 1;
  std::vector<double> y(3 * static_cast<std::size_t>(m2));
  for (int i = 0; i < M.m; ++i)
    for (int e = 0; e < 3; ++e) y[6 * i + e] = M.y[3 * i + e];
  for (int i = 0; i + 1 < M.m; ++i) {
    const double sa = M.s(i), sb = M.s(i + 1);
    const double* a = &M.y[3 * i];
    const double* b = &M.y[3 * (i + 1)];
    const double ta = third_derivative(sa, a[0], a[1]), tb = third_derivative(sb, b[0], b[1]);
    const double va[3] = {a[1], a[2], ta}, vb[3] = {b[1], b[2], tb};
    for (int e = 0; e < 3; ++e)
      y[3 * (2 * i + 1) + e] = (a[e] + b[e]) / 2 + M.h * (va[e] - vb[e]) / 8;
  }
  return y;
}

double first_integral_residual(double s, double sg, double p, double q) {
  const double terms[4] = {q * q, 4 * p * p * p, -4 * s * p * p, 4 * sg * p};
  double sum = 0, scale = 1;
  for (double t : terms) {
    sum += t;
    scale = std::max(scale, std::abs(t));
  }
  return std::abs(sum) / scale;
}

// Quintic least-squares derivative weights on seven equispaced nodes.
struct FitWeights {
  double d1[7], d2[7];
};

const FitWeights& fit_weights() {
  static const FitWeights w = [] {
    Eigen::Matrix<double, 7, 6> V;
    for (int k = 0; k < 7; ++k)
      for (int p = 0; p < 6; ++p) V(k, p) = std::pow(static_cast<double>(k - 3), p);
    Eigen::Matrix<double, 6, 7> P = (V.transpose() * V).inverse() * V.transpose();
    FitWeights f{};
    for (int k = 0; k < 7; ++k) {
      f.d1[k] = P(1, k);
      f.d2[k] = 2 * P(2, k);
    }
    return f;
  }();
  return w;
}

double fit_d1(const std::vector<double>& v, int i, double h) {
  double acc = 0;
  for (int k = 0; k < 7; ++k) acc += fit_weights().d1[k] * v[i + k - 3];
  return acc / h;
}

double fit_d2(const std::vector<double>& v, int i, double h) {
  double acc = 0;
  for (int k = 0; k < 7; ++k) acc += fit_weights().d2[k] * v[i + k - 3];
  return acc / (h * h);
}

double relative_sum(std::initializer_list<double> terms, double floor = 0) {
  double sum = 0, scale = floor;
  for (double t : terms) {
    sum += t;
    scale = std::max(scale, std::abs(t));
  }
  return scale > 0 ? std::abs(sum) / scale : 0.0;
}

double hermite5(double h, double f0, double d0, double dd0, double f1, double d1, double dd1, double t) {
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  return f0 * (1 - 10 * t3 + 15 * t4 - 6 * t5) + h * d0 * (t - 6 * t3 + 8 * t4 - 3 * t5) +
         h * h * dd0 * (t2 - 3 * t3 + 3 * t4 - t5) / 2 + h * h * dd1 * (t3 - 2 * t4 + t5) / 2 +
         h * d1 * (-4 * t3 + 7 * t4 - 3 * t5) + f1 * (10 * t3 - 15 * t4 + 6 * t5);
}

SoftEdgeGrid solve_once(double s_min, double s_max, int grid_n, double tol) {
  const TailValue left = tail_eval(TailSide::Left, s_min);
  const TailValue right = tail_eval(TailSide::Right, s_max);
  const Boundary b{left.sigma, right.sigma, right.d_sigma};

  Mesh A{s_min, (s_max - s_min) / (grid_n - 1), grid_n, {}};
  A.y = initial_guess(A.s0, A.h, A.m, b.sigma_right);
  newton(A, b);
  Mesh B{s_min, A.h / 2, 2 * grid_n - 1, prolong(A)};
  newton(B, b);
  Mesh C{s_min, B.h / 2, 2 * B.m - 1, prolong(B)};
  newton(C, b);

  SoftEdgeGrid g;
  g.s_min = s_min;
  g.s_max = s_max;
  g.tol = tol;
  g.fine_points = C.m;
  g.newton_iterations = A.iterations + B.iterations + C.iterations;
  const int m = grid_n;
  g.s.resize(m);
  g.sigma.resize(m);
  g.d_sigma.resize(m);
  g.dd_sigma.resize(m);
  for (int i = 0; i < m; ++i) {
    g.s[i] = i == m - 1 ? s_max : A.s(i);
    double v[3];
    // even-power error expansion of the trapezoidal scheme
    for (int e = 0; e < 3; ++e) v[e] = (64 * C.y[3 * (4 * i) + e] - 20 * B.y[3 * (2 * i) + e] + A.y[3 * i + e]) / 45;
    g.sigma[i] = v[0];
    g.d_sigma[i] = v[1];
    g.dd_sigma[i] = v[2];
  }
  g.max_residual = 0;
  for (int i = 0; i < m; ++i)
    g.max_residual =
        std::max(g.max_residual, first_integral_residual(g.s[i], g.sigma[i], g.d_sigma[i], g.dd_sigma[i]));
  return g;
}

void finish(SoftEdgeGrid& g) {
  const int m = static_cast<int>(g.s.size());
  double dmax = 0;
  for (double d : g.d_sigma) dmax = std::max(dmax, std::abs(d));
  g.w.resize(m);
  g.y.resize(m);
  for (int i = 0; i < m; ++i) {
    const double d = g.d_sigma[i];
    if (d > 1e3 * std::numeric_limits<double>::epsilon() * dmax) {
      std::ostringstream os;
      os << "solve_sigma_pii: sigma' > 0 at s = " << g.s[i];
      throw BranchError(os.str());
    }
    g.w[i] = d < 0 ? std::sqrt(-d) : 0.0;
    g.y[i] = d < 0 ? -1 / d : std::numeric_limits<double>::infinity();
  }
  // ln P from s_max leftwards, Euler-Maclaurin through the third derivative
  const double h = (g.s_max - g.s_min) / (m - 1);
  g.logP.assign(m, 0.0);
  g.logP[m - 1] = tail_eval(TailSide::Right, g.s_max).log_cdf;
  for (int i = m - 2; i >= 0; --i) {
    const double t0 = third_derivative(g.s[i], g.sigma[i], g.d_sigma[i]);
    const double t1 = third_derivative(g.s[i + 1], g.sigma[i + 1], g.d_sigma[i + 1]);
    const double piece = h / 2 * (g.sigma[i] + g.sigma[i + 1]) - h * h / 12 * (g.d_sigma[i + 1] - g.d_sigma[i]) +
                         std::pow(h, 4) / 720 * (t1 - t0);
    g.logP[i] = g.logP[i + 1] - piece;
  }
}

}  // namespace

SoftEdgeGrid solve_sigma_pii(double s_min, double s_max, int grid_n, double tol) {
  if (!(s_min <= -4) || !(s_max >= 4)) throw DomainError("solve_sigma_pii: need s_min <= -4 and s_max >= 4");
  if (grid_n < 11) throw DomainError("solve_sigma_pii: grid_n < 11");
  if (!(tol >= 1e-12)) throw DomainError("solve_sigma_pii: tol below 1e-12");
  SoftEdgeGrid g;
  for (int attempt = 0; attempt < 3; ++attempt) {
    g = solve_once(s_min, s_max, grid_n, tol);
    if (g.max_residual <= tol) {
      finish(g);
      return g;
    }
    grid_n = 2 * grid_n - 1;
  }
  std::ostringstream os;
  os << "solve_sigma_pii: residual " << g.max_residual << " above tolerance " << tol;
  throw ConvergenceError(os.str());
}

SoftEdgePoint sample(const SoftEdgeGrid& g, double s) {
  if (!(s >= g.s_min && s <= g.s_max)) throw DomainError("sample: s outside the grid");
  const int m = static_cast<int>(g.s.size());
  const double h = (g.s_max - g.s_min) / (m - 1);
  int i = std::min(m - 2, static_cast<int>(std::floor((s - g.s_min) / h)));
  const double t = (s - g.s[i]) / h;
  const int j = i + 1;
  const double t3i = third_derivative(g.s[i], g.sigma[i], g.d_sigma[i]);
  const double t3j = third_derivative(g.s[j], g.sigma[j], g.d_sigma[j]);
  const double t4i = fourth_derivative(g.s[i], g.d_sigma[i], g.dd_sigma[i]);
  const double t4j = fourth_derivative(g.s[j], g.d_sigma[j], g.dd_sigma[j]);
  return {hermite5(h, g.sigma[i], g.d_sigma[i], g.dd_sigma[i], g.sigma[j], g.d_sigma[j], g.dd_sigma[j], t),
          hermite5(h, g.d_sigma[i], g.dd_sigma[i], t3i, g.d_sigma[j], g.dd_sigma[j], t3j, t),
          hermite5(h, g.dd_sigma[i], t3i, t4i, g.dd_sigma[j], t3j, t4j, t)};
}

HastingsMcLeod hastings_mcleod(const SoftEdgeGrid& g) {
  HastingsMcLeod r;
  const int m = static_cast<int>(g.s.size());
  const double h = (g.s_max - g.s_min) / (m - 1);
  r.w = g.w;
  for (double d : g.d_sigma) r.clamped = r.clamped || d >= 0;
  double wmax = 0;
  for (double w : g.w) wmax = std::max(wmax, w);
  r.checked_up_to = g.s_min;
  for (int i = 3; i + 3 < m; ++i) {
    const double s = g.s[i], w = g.w[i];
    const double ddw = fit_d2(g.w, i, h);
    r.pii_residual = std::max(r.pii_residual, std::abs(ddw - 2 * w * w * w - s * w) /
                                                  std::max({1.0, std::abs(s * w), 2 * w * w * w, std::abs(ddw)}));
    // the y and r forms divide by sigma'; skip where it is at the noise floor
    if (w < 1e-5 * wmax) continue;
    r.checked_up_to = s;
    const double sp = g.d_sigma[i], spp = g.dd_sigma[i];
    const double sppp = fit_d1(g.dd_sigma, i, h);
    const double y = g.y[i], dy = spp / (sp * sp), ddy = (sppp * sp - 2 * spp * spp) / (sp * sp * sp);
    r.p5inf_residual = std::max(r.p5inf_residual, relative_sum({ddy, -3 * dy * dy / (2 * y), 2 * s * y, 4}));
    r.limitrn_residual =
        std::max(r.limitrn_residual, relative_sum({sppp, -spp * spp / (2 * sp), -2 * s * sp, 4 * sp * sp}));
  }
  return r;
}

SigmaRelations sigma_relations(const SoftEdgeGrid& g) {
  SigmaRelations out;
  for (std::size_t i = 0; i < g.s.size(); ++i) {
    const double s = g.s[i], sg = g.sigma[i], r = g.d_sigma[i], dr = g.dd_sigma[i];
    out.first_integral = std::max(out.first_integral, first_integral_residual(s, sg, r, dr));
    if (!(r < 0)) continue;
    const double y = g.y[i], dy = dr / (r * r);
    // scaled like the first integral: absolute below 1
    out.sigma_y = std::max(out.sigma_y, relative_sum({sg, s / y, 1 / (y * y), -dy * dy / (4 * y * y * y)}, 1.0));
    out.sigma_r = std::max(out.sigma_r, relative_sum({sg, dr * dr / (4 * r), r * r, -s * r}, 1.0));
    out.d_sigma_y = std::max(out.d_sigma_y, relative_sum({r, 1 / y}, 1.0));
  }
  return out;
}

double log_cdf_at(const SoftEdgeGrid& g, double s) {
  if (!(s >= g.s_min && s <= g.s_max)) throw DomainError("log_cdf_at: s outside the grid");
  const int m = static_cast<int>(g.s.size());
  const double h = (g.s_max - g.s_min) / (m - 1);
  const int i = std::min(m - 2, static_cast<int>(std::floor((s - g.s_min) / h)));
  const int j = i + 1;
  return hermite5(h, g.logP[i], g.sigma[i], g.d_sigma[i], g.logP[j], g.sigma[j], g.d_sigma[j], (s - g.s[i]) / h);
}

std::vector<double> tw_cdf(const SoftEdgeGrid& g) {
  std::vector<double> P(g.logP.size());
  for (std::size_t i = 0; i < P.size(); ++i) P[i] = std::exp(g.logP[i]);
  return P;
}

double tw_mean(const SoftEdgeGrid& g) {
  // E s = s_max - s_min P(s_min) - int P, with P' = sigma P
  const auto P = tw_cdf(g);
  const int m = static_cast<int>(P.size());
  const double h = (g.s_max - g.s_min) / (m - 1);
  auto d1 = [&](int i) { return g.sigma[i] * P[i]; };
  auto d3 = [&](int i) {
    const double sg = g.sigma[i];
    return (g.dd_sigma[i] + 3 * sg * g.d_sigma[i] + sg * sg * sg) * P[i];
  };
  double integral = 0;
  for (int i = 0; i + 1 < m; ++i)
    integral += h / 2 * (P[i] + P[i + 1]) - h * h / 12 * (d1(i + 1) - d1(i)) + std::pow(h, 4) / 720 * (d3(i + 1) - d3(i));
  return g.s_max - g.s_min * P[0] - integral;
}

const char* scaled_quantity_name(ScaledQuantity q) {
  switch (q) {
    case ScaledQuantity::Sigma: return "sigma";
    case ScaledQuantity::R: return "r";
    case ScaledQuantity::BetaCombination: return "beta";
    case ScaledQuantity::RCap: return "R";
    case ScaledQuantity::AlphaCombination: return "alpha";
  }
  return "?";
}

std::vector<ConvergenceRow> convergence_experiment(const std::vector<int>& n_list, const Real& alpha,
                                                   const std::vector<double>& s_list, ScalingRegime regime,
                                                   const SoftEdgeGrid& grid, const PrecisionContext& ctx) {
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] < 1 || n_list[k] > 120) throw DomainError("convergence_experiment: n outside [1, 120]");
    if (k > 0 && n_list[k] <= n_list[k - 1]) throw DomainError("convergence_experiment: n_list not ascending");
  }
  PrecisionGuard guard(ctx);
  const Real a = at_precision(alpha, ctx);
  std::vector<ConvergenceRow> out;
  for (int n : n_list) {
    const Real nn = n;
    const Real mu = regime == ScalingRegime::Proportional ? Real(a / nn) : Real(0);
    const Real root = sqrt(mu + 1) + 1;
    const Real c1 = root * root;
    const Real c2 = pow(root, Real(4) / 3) / pow(mu + 1, Real(1) / 6);
    const Real n13 = cbrt(nn);
    for (double s : s_list) {
      const SoftEdgePoint lim = sample(grid, s);
      const Real t = c1 * nn + c2 * n13 * Real(s);
      const WeightSpec spec = WeightSpec::laguerre(a, t);
      ChainOptions opts;
      opts.hankel_crosscheck = false;
      const OPChain chain = op_chain(spec, n + 1, ctx, opts);
      const LadderState st = ladder_state(chain, spec, n, ctx);
      const Real scaled[5] = {
          c2 / c1 * st.sigma / (n13 * n13),
          c2 * c2 / c1 * st.r / n13,
          c2 * c2 / (c1 * c1) * (st.beta_n - nn * (nn + a)) / (nn * n13),
          c1 / c2 * n13 * n13 * st.R,
          (st.alpha_n - 2 * nn - a) / (c2 * n13),
      };
      for (int q = 0; q < 5; ++q) {
        ConvergenceRow row;
        row.n = n;
        row.s = s;
        row.quantity = static_cast<ScaledQuantity>(q);
        row.scaled = scaled[q].convert_to<double>();
        row.limit = q == 0 ? lim.sigma : lim.d_sigma;
        row.deviation = std::abs(row.scaled - row.limit);
        out.push_back(row);
      }
    }
  }
  return out;
}

}  // namespace rmt
