#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rmt/frobenius.hpp"
#include "rmt/identity_lab.hpp"
#include "rmt/sampler.hpp"
#include "rmt/softedge.hpp"

namespace rmt {

// Scientific notation with an explicit exponent; `digits` significant digits.
std::string format_real(const Real& x, int digits);
std::string format_double(double x);

// Reals as JSON numbers when binary64 holds them losslessly (digits <= 17),
// as strings otherwise.
nlohmann::json json_real(const Real& x, int digits);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
void write_csv(std::ostream& os, const CsvTable& t);

// identity_id, n, alpha, t, point, residual, scale, relative
CsvTable residual_table(const std::vector<ResidualReport>& reps, int digits);
nlohmann::json residual_json(const ResidualReport& r, int digits);

// s, sigma, d_sigma, w, logP, P
CsvTable grid_table(const SoftEdgeGrid& g);

// n, c_n, d_n
CsvTable frobenius_table(const FrobeniusSeries& s, int digits);

// One value per line.
void write_samples(std::ostream& os, const ECDF& e);

// Single-line JSON diagnostic for stderr.
std::string alarm_line(const std::string& kind, const std::string& message, const nlohmann::json& context = {});

}  // namespace rmt
