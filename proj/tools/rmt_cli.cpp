#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "rmt/chazy.hpp"
#include "rmt/format.hpp"
#include "rmt/frobenius.hpp"
#include "rmt/gue_ensemble.hpp"
#include "rmt/identity_lab.hpp"
#include "rmt/lue_ensemble.hpp"
#include "rmt/sampler.hpp"
#include "rmt/softedge.hpp"
#include "rmt/wavefunction.hpp"

using namespace rmt;
using nlohmann::json;

namespace {

// Bad flags or values that violate a subcommand's preconditions: exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_digits() {
  if (const char* env = std::getenv("RMT_DIGITS")) {
    try {
      return std::stoi(env);
    } catch (...) {
      throw UsageError("RMT_DIGITS is not an integer");
    }
  }
  return 60;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  if (out.empty()) throw UsageError("empty list");
  return out;
}

int to_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (...) {
    throw UsageError("not an integer: " + s);
  }
  if (pos != s.size()) throw UsageError("not an integer: " + s);
  return v;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (...) {
    throw UsageError("not a number: " + s);
  }
  if (pos != s.size()) throw UsageError("not a number: " + s);
  return v;
}

// "a..b" inclusive, or a comma list of integers
std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (const std::string& item : split(text)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item));
      continue;
    }
    const int a = to_int(item.substr(0, dots)), b = to_int(item.substr(dots + 2));
    if (b < a) throw UsageError("empty range " + item);
    for (int i = a; i <= b; ++i) out.push_back(i);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text)) out.push_back(to_double(item));
  return out;
}

std::vector<Real> parse_reals(const std::string& text, const PrecisionContext& ctx) {
  std::vector<Real> out;
  for (const std::string& item : split(text)) {
    to_double(item);  // rejects malformed input before the high-precision parse
    out.push_back(parse_real(item, ctx));
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(to_int(text));
  const int den = to_int(text.substr(slash + 1));
  if (den == 0) throw UsageError("zero denominator in " + text);
  return Rational(to_int(text.substr(0, slash)), den);
}

Real to_real(const Rational& q) {
  return Real(numerator(q).str()) / Real(denominator(q).str());
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

struct Common {
  int digits = 60;
  std::string format = "csv";
  std::string output;
  int threads = 1;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

// Emits reports, raises one alarm line per failure, returns the exit code.
int finish_residuals(const std::string& what, const std::vector<ResidualReport>& reps, const Real& tol,
                     const Common& c) {
  Output out(c.output);
  Real worst = 0;
  int failed = 0;
  for (const ResidualReport& r : reps) {
    worst = std::max(worst, r.relative);
    if (!(r.relative <= tol)) {
      ++failed;
      std::cerr << alarm_line("residual", what + " above tolerance", residual_json(r, 20)) << '\n';
    }
  }
  if (c.format == "json") {
    json j{{"command", what}, {"count", reps.size()}, {"failed", failed}, {"tolerance", format_real(tol, 6)},
           {"worst", format_real(worst, 6)}};
    j["reports"] = json::array();
    for (const ResidualReport& r : reps) j["reports"].push_back(residual_json(r, c.digits));
    out.os() << j.dump(2) << '\n';
  } else {
    write_csv(out.os(), residual_table(reps, c.digits));
  }
  return failed ? 1 : 0;
}

Real tolerance(const std::string& text, const Real& fallback, const PrecisionContext& ctx) {
  if (text.empty()) return fallback;
  const Real t = parse_real(text, ctx);
  require(t > 0, "--tol must be positive");
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-n and soft-edge largest-eigenvalue laws: residual checks, tables and sampling"};
  app.require_subcommand(1);
  Common c;
  std::string tol_text;
  try {
    c.digits = default_digits();
  } catch (const UsageError& e) {
    std::cerr << alarm_line("usage", e.what()) << '\n';
    return 2;
  }
  app.add_option("--digits", c.digits, "working precision in decimal digits (default $RMT_DIGITS or 60)");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", c.output, "output path (default stdout)");
  app.add_option("--threads", c.threads, "worker cap for the sampler")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol_text, "tolerance for the subcommand's checks");
  app.fallthrough();

  std::function<int()> action;

  // cdf
  std::string n_text, alpha_text, t_text;
  auto* cdf = app.add_subcommand("cdf", "largest-eigenvalue CDF P(n, t) of the Laguerre ensemble");
  cdf->add_option("--n", n_text, "degrees, a..b or list")->required();
  cdf->add_option("--alpha", alpha_text, "alpha list")->required();
  cdf->add_option("--t", t_text, "t list")->required();
  cdf->callback([&] {
    action = [&] {
      const PrecisionContext ctx(c.digits);
      PrecisionGuard g(ctx);
      const auto ns = parse_ints(n_text);
      const auto alphas = parse_reals(alpha_text, ctx);
      const auto ts = parse_reals(t_text, ctx);
      for (int n : ns) require(n >= 1, "--n must be >= 1");
      for (const Real& a : alphas) require(a >= 0, "--alpha must be >= 0");
      for (const Real& t : ts) require(t >= 0, "--t must be >= 0");
      CsvTable table{{"n", "alpha", "t", "P"}, {}};
      json rows = json::array();
      for (int n : ns)
        for (const Real& a : alphas)
          for (const Real& t : ts) {
            const Real p = largest_eigenvalue_cdf(n, a, t, ctx);
            table.rows.push_back({std::to_string(n), format_real(a, c.digits), format_real(t, c.digits),
                                  format_real(p, c.digits)});
            rows.push_back({{"n", n}, {"alpha", json_real(a, c.digits)}, {"t", json_real(t, c.digits)},
                            {"P", json_real(p, c.digits)}});
          }
      Output out(c.output);
      if (c.format == "json")
        out.os() << json{{"command", "cdf"}, {"rows", rows}}.dump(2) << '\n';
      else
        write_csv(out.os(), table);
      return 0;
    };
  });

  // identities
  auto* ids = app.add_subcommand("identities", "finite-n Laguerre identity residual sweep");
  ids->add_option("--n", n_text, "degrees")->required();
  ids->add_option("--alpha", alpha_text, "alpha list")->required();
  ids->add_option("--t", t_text, "t list")->required();
  ids->callback([&] {
    action = [&] {
      const PrecisionContext ctx(c.digits);
      PrecisionGuard g(ctx);
      const auto ns = parse_ints(n_text);
      const auto alphas = parse_reals(alpha_text, ctx);
      const auto ts = parse_reals(t_text, ctx);
      for (int n : ns) require(n >= 1, "--n must be >= 1");
      for (const Real& a : alphas) require(a >= 0, "--alpha must be >= 0");
      for (const Real& t : ts) require(t > 0, "--t must be > 0");
      const Real tol = tolerance(tol_text, pow(Real(10), -c.digits / 2), ctx);
      SweepOptions opts{pow(Real(10), -c.digits / 3), true};
      return finish_residuals("identities", identity_sweep(ns, alphas, ts, ctx, opts), tol, c);
    };
  });

  // gue-identities
  auto* gids = app.add_subcommand("gue-identities", "Gaussian-weight identity residual sweep");
  gids->add_option("--n", n_text, "degrees")->required();
  gids->add_option("--t", t_text, "t list")->required();
  gids->callback([&] {
    action = [&] {
      const PrecisionContext ctx(c.digits);
      PrecisionGuard g(ctx);
      const auto ns = parse_ints(n_text);
      const auto ts = parse_reals(t_text, ctx);
      for (int n : ns) require(n >= 1, "--n must be >= 1");
      const Real tol = tolerance(tol_text, Real("1e-25"), ctx);
      return finish_residuals("gue-identities", gue_sweep(ns, ts, pow(Real(10), -c.digits / 3), ctx), tol, c);
    };
  });

  // softedge and tails share the grid options
  double smin = -12, smax = 12, grid_tol = 1e-10;
  int grid_n = 2001;
  auto add_grid_options = [&](CLI::App* sub) {
    sub->add_option("--smin", smin, "left end of the s interval");
    sub->add_option("--smax", smax, "right end of the s interval");
    sub->add_option("--grid", grid_n, "coarse grid size")->check(CLI::Range(101, 1000001));
  };
  auto solve_grid = [&] {
    require(smin <= -4 && smax >= 4, "--smin must be <= -4 and --smax >= 4 (boundary data come from the tails)");
    return solve_sigma_pii(smin, smax, grid_n, grid_tol);
  };

  auto* soft = app.add_subcommand("softedge", "solve sigma(s) and export sigma, w and the soft-edge CDF");
  add_grid_options(soft);
  soft->callback([&] {
    action = [&] {
      if (!tol_text.empty()) grid_tol = to_double(tol_text);
      require(grid_tol > 0, "--tol must be positive");
      const SoftEdgeGrid g = solve_grid();
      int code = 0;
      if (!(g.max_residual <= grid_tol)) {
        std::cerr << alarm_line("residual", "first integral above tolerance", {{"max_residual", g.max_residual}})
                  << '\n';
        code = 1;
      }
      for (std::size_t i = 1; i < g.logP.size(); ++i)
        if (g.logP[i] < g.logP[i - 1]) {
          std::cerr << alarm_line("monotonicity", "soft-edge CDF decreases", {{"s", g.s[i]}}) << '\n';
          code = 1;
          break;
        }
      Output out(c.output);
      if (c.format == "json")
        out.os() << json{{"command", "softedge"},
                         {"s_min", g.s_min},
                         {"s_max", g.s_max},
                         {"points", g.s.size()},
                         {"fine_points", g.fine_points},
                         {"newton_iterations", g.newton_iterations},
                         {"max_residual", g.max_residual},
                         {"mean", tw_mean(g)}}
                        .dump(2)
                 << '\n';
      else
        write_csv(out.os(), grid_table(g));
      return code;
    };
  });

  // tails
  std::string s_text = "-10,-8,-6,6,8,10";
  auto* tails = app.add_subcommand("tails", "tail series against the solved sigma and CDF");
  add_grid_options(tails);
  tails->add_option("--s", s_text, "s list with |s| >= 4");
  tails->callback([&] {
    action = [&] {
      const auto ss = parse_doubles(s_text);
      for (double s : ss) require(std::abs(s) >= 4, "--s needs |s| >= 4");
      const SoftEdgeGrid g = solve_grid();
      for (double s : ss) require(s >= g.s_min && s <= g.s_max, "--s outside the solved interval");
      CsvTable t{{"side", "s", "sigma_series", "sigma_solver", "sigma_rel_diff", "sigma_error", "logP_series",
                  "logP_solver", "cdf_error"},
                 {}};
      json rows = json::array();
      for (double s : ss) {
        const TailSide side = s < 0 ? TailSide::Left : TailSide::Right;
        const TailValue v = tail_eval(side, s);
        const double sig = sample(g, s).sigma, lp = log_cdf_at(g, s);
        const double rel = std::abs(sig - v.sigma) / std::max(std::abs(v.sigma), 1e-300);
        const std::string name = side == TailSide::Left ? "left" : "right";
        t.rows.push_back({name, format_double(s), format_double(v.sigma), format_double(sig), format_double(rel),
                          format_double(v.sigma_error), format_double(v.log_cdf), format_double(lp),
                          format_double(v.cdf_error)});
        rows.push_back({{"side", name}, {"s", s}, {"sigma_series", v.sigma}, {"sigma_solver", sig},
                        {"sigma_rel_diff", rel}, {"logP_series", v.log_cdf}, {"logP_solver", lp}});
      }
      Output out(c.output);
      if (c.format == "json")
        out.os() << json{{"command", "tails"}, {"rows", rows}}.dump(2) << '\n';
      else
        write_csv(out.os(), t);
      return 0;
    };
  });

  // converge
  std::string conv_n = "20,40,80", conv_s = "-2,0,2", regime_text = "finite", conv_alpha = "1";
  auto* conv = app.add_subcommand("converge", "scaled finite-n quantities against their soft-edge limits");
  conv->add_option("--n", conv_n, "increasing degrees");
  conv->add_option("--alpha", conv_alpha, "alpha");
  conv->add_option("--s", conv_s, "s list");
  conv->add_option("--regime", regime_text, "finite or proportional")->check(CLI::IsMember({"finite", "proportional"}));
  conv->callback([&] {
    action = [&] {
      const PrecisionContext ctx(c.digits);
      PrecisionGuard g(ctx);
      const auto ns = parse_ints(conv_n);
      const auto ss = parse_doubles(conv_s);
      const Real alpha = parse_reals(conv_alpha, ctx).at(0);
      require(alpha >= 0, "--alpha must be >= 0");
      for (std::size_t i = 0; i < ns.size(); ++i)
        require(ns[i] >= 1 && (i == 0 || ns[i] > ns[i - 1]), "--n must be increasing and >= 1");
      for (double s : ss) require(s > -12 && s < 12, "--s must lie inside (-12, 12)");
      const SoftEdgeGrid grid = solve_sigma_pii();
      const auto regime = regime_text == "finite" ? ScalingRegime::Finite : ScalingRegime::Proportional;
      const auto rows = convergence_experiment(ns, alpha, ss, regime, grid, ctx);
      int code = 0;
      std::map<std::pair<double, int>, double> last;
      CsvTable t{{"n", "s", "quantity", "scaled", "limit", "deviation"}, {}};
      json jrows = json::array();
      for (const ConvergenceRow& r : rows) {
        const auto key = std::make_pair(r.s, static_cast<int>(r.quantity));
        if (last.count(key) && !(r.deviation < last[key])) {
          std::cerr << alarm_line("convergence", "deviation did not decrease",
                                  {{"n", r.n}, {"s", r.s}, {"quantity", scaled_quantity_name(r.quantity)}})
                    << '\n';
          code = 1;
        }
        last[key] = r.deviation;
        t.rows.push_back({std::to_string(r.n), format_double(r.s), scaled_quantity_name(r.quantity),
                          format_double(r.scaled), format_double(r.limit), format_double(r.deviation)});
        jrows.push_back({{"n", r.n}, {"s", r.s}, {"quantity", scaled_quantity_name(r.quantity)}, {"scaled", r.scaled},
                         {"limit", r.limit}, {"deviation", r.deviation}});
      }
      Output out(c.output);
      if (c.format == "json")
        out.os() << json{{"command", "converge"}, {"rows", jrows}}.dump(2) << '\n';
      else
        write_csv(out.os(), t);
      return code;
    };
  });

  // wavefn
  std::string ensemble = "lue", z_text = "0.5,1.5,2.5,3.5,5.5,7";
  auto* wave = app.add_subcommand("wavefn", "residuals of the wave-function and polynomial equations");
  wave->add_option("--ensemble", ensemble, "lue or gue")->check(CLI::IsMember({"lue", "gue"}));
  wave->add_option("--n", n_text, "degrees")->required();
  wave->add_option("--alpha", alpha_text, "alpha (lue)");
  wave->add_option("--t", t_text, "t list")->required();
  wave->add_option("--z", z_text, "z samples");
  wave->callback([&] {
    action = [&] {
      const PrecisionContext ctx(c.digits);
      PrecisionGuard g(ctx);
      const auto ns = parse_ints(n_text);
      const auto ts = parse_reals(t_text, ctx);
      const auto zs = parse_reals(z_text, ctx);
      for (int n : ns) require(n >= 1, "--n must be >= 1");
      std::vector<Real> alphas{Real(0)};
      if (ensemble == "lue") {
        require(!alpha_text.empty(), "--alpha is required for lue");
        alphas = parse_reals(alpha_text, ctx);
        for (const Real& a : alphas) require(a >= 0, "--alpha must be >= 0");
        for (const Real& t : ts) require(t > 0, "--t must be > 0");
        for (const Real& z : zs) require(z > 0, "--z must be > 0 for lue");
      }
      const Real tol = tolerance(tol_text, Real("1e-25"), ctx);
      std::vector<ResidualReport> reps;
      for (int n : ns)
        for (const Real& a : alphas)
          for (const Real& t : ts) {
            const auto part =
                ensemble == "lue" ? phi_ode_residual_lue(n, a, t, zs, ctx) : phi_ode_residual_gue(n, t, zs, ctx);
            reps.insert(reps.end(), part.begin(), part.end());
          }
      return finish_residuals("wavefn", reps, tol, c);
    };
  });

  // frobenius
  double fs = 0, connection_x = 0.5;
  std::string point_text = "zero", tau_text = "0";
  int lam = 2, N = 100, lmax = 10, l_used = 0;
  bool with_log = false, connection = false;
  auto* frob = app.add_subcommand("frobenius", "series coefficients, residuals, tail match and connection check");
  frob->add_option("--s", fs, "soft-edge coordinate");
  frob->add_option("--point", point_text, "zero or one")->check(CLI::IsMember({"zero", "one"}));
  frob->add_option("--tau", tau_text, "exponent at zero");
  frob->add_option("--lambda", lam, "exponent at one (0 or 2)");
  frob->add_option("--N", N, "number of coefficients")->check(CLI::Range(4, 100000));
  frob->add_option("--lmax", lmax, "tail coefficients");
  frob->add_option("--l", l_used, "tail terms used in the decay fit (0 skips the fit)");
  frob->add_flag("--log", with_log, "include the logarithmic companion");
  frob->add_flag("--connection", connection, "run the integration cross-check");
  frob->add_option("--x", connection_x, "cross-check point in (0.05, 0.95)");
  frob->callback([&] {
    action = [&] {
      const PrecisionContext ctx(c.digits);
      PrecisionGuard g(ctx);
      require(fs > -12 && fs < 12, "--s must lie inside (-12, 12)");
      require(lam == 0 || lam == 2, "--lambda must be 0 or 2");
      require(l_used == 0 || (l_used >= 1 && l_used <= lmax && N > 200), "--l needs 1 <= l <= lmax and N > 200");
      if (connection) require(connection_x > 0.05 && connection_x < 0.95, "--x must lie in (0.05, 0.95)");
      const Real tau = parse_reals(tau_text, ctx).at(0);
      const SoftEdgeGrid grid = solve_sigma_pii();
      const auto p = sample(grid, fs);
      const LimitODECoeffs lc = limit_ode_coeffs(fs, p.d_sigma, p.dd_sigma);
      const FrobeniusCoeffs k = frobenius_coeffs(lc, ctx);
      const bool zero = point_text == "zero";
      const bool log_needed = with_log || (!zero && lam == 0);
      const FrobeniusSeries series = zero ? series_zero(k, tau, N, log_needed, ctx) : series_one(k, lam, N, log_needed, ctx);
      const Real tol = tolerance(tol_text, Real("1e-20"), ctx);
      int code = 0;
      json summary{{"command", "frobenius"}, {"s", fs}, {"point", point_text}, {"N", N},
                   {"recurrence_defect", format_real(recurrence_defect(series), 6)}};
      json res = json::array();
      const bool null_series = !zero && lam == 0;
      // off the indicial exponents the series only follows the recurrence
      const bool solution = !zero || tau == 0;
      summary["solves_equation"] = solution;
      for (const char* dx : {"0.02", "0.05", "0.1"}) {
        const Real x = zero ? Real(dx) : Real(1) - Real(dx);
        const bool comp = null_series || with_log;
        const ResidualReport r = series_residual(series, x, comp);
        res.push_back({{"x", format_real(x, 6)}, {"companion", comp}, {"relative", format_real(r.relative, 6)}});
        if (solution && !(r.relative <= tol)) {
          std::cerr << alarm_line("residual", "series residual above tolerance", residual_json(r, 20)) << '\n';
          code = 1;
        }
      }
      summary["residuals"] = res;
      if (l_used > 0) {
        const TailCoeffs tail = zero ? tail_zero(k, tau, lmax, ctx) : tail_one(k, lam == 0 ? 2 : lam, lmax, ctx);
        const TailMatch m = null_series ? tail_match_companion(series, tail, 50, 200, l_used)
                                        : tail_match(series, tail, 50, 200, l_used);
        summary["tail"] = {{"l", l_used}, {"exponent", m.exponent}, {"expected", l_used + 1}};
        if (std::abs(m.exponent - (l_used + 1)) > 0.5) {
          std::cerr << alarm_line("tail", "decay exponent off by more than 0.5", summary["tail"]) << '\n';
          code = 1;
        }
      }
      if (connection) {
        const ConnectionReport cr = crosscheck_integration(lc, connection_x, std::max(N, 100), ctx);
        summary["connection"] = {{"x", connection_x},
                                 {"determinant", format_real(cr.determinant, 12)},
                                 {"series_mismatch", format_real(cr.series_mismatch, 6)},
                                 {"integrator_mismatch", format_real(cr.integrator_mismatch, 6)},
                                 {"truncation_warning", cr.truncation_warning}};
        if (!(cr.series_mismatch <= Real("1e-8")) || !(cr.integrator_mismatch <= Real("1e-8"))) {
          std::cerr << alarm_line("connection", "cross-check mismatch above 1e-8", summary["connection"]) << '\n';
          code = 1;
        }
      }
      Output out(c.output);
      if (c.format == "json")
        out.os() << summary.dump(2) << '\n';
      else
        write_csv(out.os(), frobenius_table(series, c.digits));
      return code;
    };
  });

  // chazy
  std::string q_alpha = "1", q_b = "1/2", lue_t = "1,2,3,4,5,6,7,8,9,10", gue_t = "-2,-1,0,1,2,3,4";
  int q_n = 2;
  auto* chz = app.add_subcommand("chazy", "parameter tables and residuals along the Laguerre and Gaussian paths");
  chz->add_option("--n", q_n, "degree")->check(CLI::Range(1, 1000));
  chz->add_option("--alpha", q_alpha, "alpha as an exact rational, e.g. 3/2");
  chz->add_option("--b", q_b, "lambda or beta of the other examples, exact rational");
  chz->add_option("--lue-t", lue_t, "t list for the Laguerre path");
  chz->add_option("--gue-t", gue_t, "t list for the Gaussian path");
  chz->callback([&] {
    action = [&] {
      const PrecisionContext ctx(c.digits);
      PrecisionGuard g(ctx);
      const Rational a = parse_rational(q_alpha), b = parse_rational(q_b), n(q_n);
      require(a >= 0, "--alpha must be >= 0");
      const auto lts = parse_reals(lue_t, ctx);
      for (const Real& t : lts) require(t > 0, "--lue-t must be > 0");
      const auto gts = parse_reals(gue_t, ctx);
      int code = 0;
      CsvTable t{{"example", "member", "nu", "alpha1", "beta1_re", "beta1_im", "gamma1", "matches_display", "rho",
                  "t_map", "theta_shift"},
                 {}};
      json table = json::array();
      for (const ExampleSpec& e : example_table()) {
        const auto m = mapped_params(e, n, a, b);
        const auto d = displayed_params(e.id, n, a, b);
        const bool same = m.alpha1 == d.alpha1 && m.beta1_re == d.beta1_re && m.beta1_im == d.beta1_im &&
                          m.gamma1 == d.gamma1 && m.member == d.member;
        if (!same) {
          std::cerr << alarm_line("parameters", "mapped parameters differ from the displayed closed form",
                                  {{"example", e.name}})
                    << '\n';
          code = 1;
        }
        std::vector<std::string> nu;
        for (const AffineNu& v : e.nu_map) nu.push_back(to_string(v.at(n, a, b)));
        const std::string member = e.member == ChazyMember::Second ? "second" : "first";
        std::string nu_joined;
        for (std::size_t i = 0; i < nu.size(); ++i) nu_joined += (i ? " " : "") + nu[i];
        t.rows.push_back({e.name, member, nu_joined, to_string(m.alpha1), to_string(m.beta1_re),
                          to_string(m.beta1_im), to_string(m.gamma1), same ? "true" : "false", "\"" + e.rho_def + "\"",
                          "\"" + e.t_map + "\"", to_string(e.theta_shift.at(n, a, b))});
        table.push_back({{"example", e.name},
                         {"member", member},
                         {"nu_map", e.nu_text},
                         {"nu", nu},
                         {"alpha1", to_string(m.alpha1)},
                         {"beta1", {to_string(m.beta1_re), to_string(m.beta1_im)}},
                         {"gamma1", to_string(m.gamma1)},
                         {"matches_display", same},
                         {"rho", e.rho_def},
                         {"t_map", e.t_map},
                         {"theta_shift", to_string(e.theta_shift.at(n, a, b))}});
      }
      // trajectories
      const Real ra = to_real(a);
      const SigmaFormPV pv{0, Real(q_n), q_n + ra};
      const auto lpath = lue_rho_path(q_n, ra, lts, ctx);
      Real rho_worst = 0;
      for (const RhoSample& p : lpath) rho_worst = std::max(rho_worst, rho_ode_residual_pv(pv, p).relative);
      const auto c2 = chazy_second_residual(chazy_second_params(pv), pv, lpath, ctx);
      const SigmaFormPIV piv{0, Real(2 * q_n)};
      const auto gpath = gue_rho_path(q_n, gts, ctx);
      Real piv_worst = 0;
      for (const RhoSample& p : gpath) piv_worst = std::max(piv_worst, rho_ode_residual_piv(piv, p).relative);
      const auto c1 = chazy_first_residual(chazy_first_params(piv), piv, gpath);
      const Real rho_tol = tolerance(tol_text, Real("1e-25"), ctx), chazy_tol("1e-15");
      json checks{{"lue_rho", format_real(rho_worst, 6)},
                  {"lue_chazy_second", format_real(c2.worst, 6)},
                  {"branch", c2.branch},
                  {"gue_rho", format_real(piv_worst, 6)},
                  {"gue_chazy_first", format_real(c1.worst, 6)}};
      if (!(rho_worst <= rho_tol) || !(piv_worst <= rho_tol) || !(c1.worst <= rho_tol) || !(c2.worst <= chazy_tol)) {
        std::cerr << alarm_line("residual", "trajectory residual above tolerance", checks) << '\n';
        code = 1;
      }
      Output out(c.output);
      if (c.format == "json")
        out.os() << json{{"command", "chazy"}, {"n", q_n}, {"alpha", to_string(a)}, {"b", to_string(b)},
                         {"examples", table}, {"residuals", checks}}
                        .dump(2)
                 << '\n';
      else
        write_csv(out.os(), t);
      return code;
    };
  });

  // sample
  std::string sens = "lue";
  double s_alpha = 0;
  int s_n = 5;
  std::size_t s_N = 10000;
  std::uint64_t seed = 1, stream = 0;
  bool ks = false, dump = false;
  auto* samp = app.add_subcommand("sample", "Monte Carlo largest eigenvalues with an optional KS test");
  samp->add_option("--ensemble", sens, "lue or gue")->check(CLI::IsMember({"lue", "gue"}));
  samp->add_option("--n", s_n, "matrix size")->check(CLI::Range(1, 100000));
  samp->add_option("--alpha", s_alpha, "Laguerre exponent");
  samp->add_option("--N", s_N, "number of samples");
  samp->add_option("--seed", seed, "seed");
  samp->add_option("--stream", stream, "stream key");
  samp->add_flag("--ks", ks, "compare against the analytic CDF");
  samp->add_flag("--dump", dump, "write the sorted samples, one per line, instead of the summary");
  samp->callback([&] {
    action = [&] {
      require(s_N >= 1000, "--N must be at least 1000");
      require(sens == "gue" || s_alpha >= 0, "--alpha must be >= 0");
      const SampleOptions opts{seed, stream, c.threads, 0};
      const ECDF e = sens == "lue" ? sample_lue_max(s_n, s_alpha, s_N, opts) : sample_gue_max(s_n, s_N, opts);
      json j{{"command", "sample"}, {"ensemble", sens}, {"n", s_n}, {"N", e.N()}, {"seed", seed},
             {"stream", stream}, {"mean", e.mean()}, {"variance", e.variance()},
             {"min", e.sorted.front()}, {"max", e.sorted.back()}};
      if (sens == "lue") j["alpha"] = s_alpha;
      int code = 0;
      if (ks) {
        const PrecisionContext ctx(20);
        const TabulatedCDF cdf = sens == "lue" ? lue_cdf_table(s_n, s_alpha, e.sorted.back() + 1, 1201, ctx)
                                               : gue_cdf_table(s_n, e.sorted.front() - 1, e.sorted.back() + 1, 1201, ctx);
        const double d = ks_statistic(e, std::cref(cdf));
        j["ks"] = {{"distance", d}, {"threshold", ks_threshold(e.N())}, {"p_value", ks_pvalue(d, e.N())},
                   {"pass", d < ks_threshold(e.N())}};
        if (!(d < ks_threshold(e.N()))) {
          std::cerr << alarm_line("ks", "KS distance above 1.36*1.5/sqrt(N)", j["ks"]) << '\n';
          code = 1;
        }
      }
      Output out(c.output);
      if (dump)
        write_samples(out.os(), e);
      else
        out.os() << j.dump(2) << '\n';
      return code;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << alarm_line("usage", e.what()) << '\n';
    return 2;
  }
  if (c.digits < 16 || c.digits > 2000) {
    std::cerr << alarm_line("usage", "--digits must lie in [16, 2000]") << '\n';
    return 2;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << alarm_line("usage", e.what()) << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << alarm_line("domain", e.what()) << '\n';
    return 1;
  } catch (const ConditioningAlarm& e) {
    std::cerr << alarm_line("conditioning", e.what()) << '\n';
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << alarm_line("convergence", e.what()) << '\n';
    return 1;
  } catch (const DegenerateState& e) {
    std::cerr << alarm_line("degenerate", e.what()) << '\n';
    return 1;
  } catch (const BranchError& e) {
    std::cerr << alarm_line("branch", e.what()) << '\n';
    return 1;
  } catch (const OverflowError& e) {
    std::cerr << alarm_line("overflow", e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << alarm_line("error", e.what()) << '\n';
    return 1;
  }
}
