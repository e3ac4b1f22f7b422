#include "rmt/format.hpp"

#include <cmath>
#include <cstdio>

namespace rmt {

std::string format_real(const Real& x, int digits) {
  if (isnan(x)) return "nan";
  if (isinf(x)) return x > 0 ? "inf" : "-inf";
  return x.str(std::max(0, digits - 1), std::ios::scientific);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

nlohmann::json json_real(const Real& x, int digits) {
  if (digits <= 17 && isfinite(x)) return x.convert_to<double>();
  return format_real(x, digits);
}

void write_csv(std::ostream& os, const CsvTable& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

CsvTable residual_table(const std::vector<ResidualReport>& reps, int digits) {
  CsvTable t{{"identity_id", "n", "alpha", "t", "point", "residual", "scale", "relative"}, {}};
  for (const ResidualReport& r : reps)
    t.rows.push_back({r.identity_id, std::to_string(r.n), format_real(r.alpha, digits), format_real(r.t, digits),
                      format_real(r.point, digits), format_real(r.residual, 6), format_real(r.scale, 6),
                      format_real(r.relative, 6)});
  return t;
}

nlohmann::json residual_json(const ResidualReport& r, int digits) {
  return {{"identity_id", r.identity_id},
          {"n", r.n},
          {"alpha", json_real(r.alpha, digits)},
          {"t", json_real(r.t, digits)},
          {"point", json_real(r.point, digits)},
          {"residual", format_real(r.residual, 6)},
          {"relative", format_real(r.relative, 6)}};
}

CsvTable grid_table(const SoftEdgeGrid& g) {
  CsvTable t{{"s", "sigma", "d_sigma", "w", "logP", "P"}, {}};
  for (std::size_t i = 0; i < g.s.size(); ++i)
    t.rows.push_back({format_double(g.s[i]), format_double(g.sigma[i]), format_double(g.d_sigma[i]),
                      format_double(g.w[i]), format_double(g.logP[i]), format_double(std::exp(g.logP[i]))});
  return t;
}

CsvTable frobenius_table(const FrobeniusSeries& s, int digits) {
  CsvTable t{{"n", "c_n", "d_n"}, {}};
  for (std::size_t n = 0; n < s.c.size(); ++n)
    t.rows.push_back({std::to_string(n), format_real(s.c[n], digits),
                      n < s.d.size() && s.has_log ? format_real(s.d[n], digits) : std::string("")});
  return t;
}

void write_samples(std::ostream& os, const ECDF& e) {
  for (double x : e.sorted) os << format_double(x) << '\n';
}

std::string alarm_line(const std::string& kind, const std::string& message, const nlohmann::json& context) {
  nlohmann::json j{{"alarm", kind}, {"message", message}};
  if (!context.is_null()) j["context"] = context;
  return j.dump();
}

}  // namespace rmt
