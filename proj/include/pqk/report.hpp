#pragma once

// CSV and JSON serialisation of sweep rows, bound reports, moment tables and
// discrepancy reports. Numbers carry 15 significant digits in both formats.

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "pqk/bounds.hpp"
#include "pqk/harness.hpp"
#include "pqk/moments.hpp"
#include "pqk/summation.hpp"

namespace pqk {

enum class ReportFormat { csv, json };

inline ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw std::invalid_argument("unknown report format '" + s + "' (expected csv or json)");
}

namespace detail {

inline std::string csv_cell(const std::optional<double>& v) {
  return v ? format15(*v) : std::string();
}

inline nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round15(v);
}

inline nlohmann::json json_number(const std::optional<double>& v) {
  return v ? json_number(*v) : nlohmann::json(nullptr);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Convergence rows

inline const char* convergence_csv_header() {
  return "n,p,q,pq_n,f,x_max,sup_error,weighted_sup_error,alpha,bound_thm5,bound_thm6,"
         "bound_thm10";
}

inline std::string to_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = convergence_csv_header();
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + format15(r.p) + ',' + format15(r.q) + ',' +
           format15(r.pq_n) + ',' + r.f + ',' + format15(r.x_max) + ',' +
           format15(r.sup_error) + ',' + format15(r.weighted_sup_error) + ',' +
           format15(r.alpha) + ',' + detail::csv_cell(r.bound_thm5) + ',' +
           detail::csv_cell(r.bound_thm6) + ',' + detail::csv_cell(r.bound_thm10) + '\n';
  }
  return out;
}

inline nlohmann::json to_json(const ConvergenceRow& r) {
  using detail::json_number;
  return nlohmann::json{{"n", r.n},
                        {"p", json_number(r.p)},
                        {"q", json_number(r.q)},
                        {"pq_n", json_number(r.pq_n)},
                        {"f", r.f},
                        {"x_max", json_number(r.x_max)},
                        {"sup_error", json_number(r.sup_error)},
                        {"weighted_sup_error", json_number(r.weighted_sup_error)},
                        {"alpha", json_number(r.alpha)},
                        {"bound_thm5", json_number(r.bound_thm5)},
                        {"bound_thm6", json_number(r.bound_thm6)},
                        {"bound_thm10", json_number(r.bound_thm10)},
                        {"converged", r.converged}};
}

inline nlohmann::json to_json(const std::vector<ConvergenceRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  return arr;
}

/// Inverse of `to_csv` for convergence rows. The `converged` flag is not part
/// of the CSV schema and reads back as true.
inline std::vector<ConvergenceRow> parse_convergence_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != convergence_csv_header()) {
    throw std::invalid_argument("convergence CSV: missing or unexpected header");
  }
  std::vector<ConvergenceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = detail::split_csv_line(line);
    if (c.size() != 12) {
      throw std::invalid_argument("convergence CSV: expected 12 columns in '" + line + "'");
    }
    auto opt = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return detail::parse_number(s);
    };
    ConvergenceRow r;
    r.n = static_cast<std::size_t>(std::stoull(c[0]));
    r.p = detail::parse_number(c[1]);
    r.q = detail::parse_number(c[2]);
    r.pq_n = detail::parse_number(c[3]);
    r.f = c[4];
    r.x_max = detail::parse_number(c[5]);
    r.sup_error = detail::parse_number(c[6]);
    r.weighted_sup_error = detail::parse_number(c[7]);
    r.alpha = detail::parse_number(c[8]);
    r.bound_thm5 = opt(c[9]);
    r.bound_thm6 = opt(c[10]);
    r.bound_thm10 = opt(c[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Bound reports

inline std::string to_csv(const std::vector<BoundReport>& reports) {
  std::string out =
      "theorem,f,n,p,q,x,actual_error,bound_value,slack,M_f,a,M,K,lambda,"
      "empirical_constant,refinements,violation\n";
  for (const auto& r : reports) {
    out += r.theorem + ',' + r.function + ',' + std::to_string(r.n) + ',' + format15(r.p) +
           ',' + format15(r.q) + ',' + format15(r.x) + ',' + format15(r.actual_error) + ',' +
           format15(r.bound_value) + ',' + format15(r.slack) + ',' +
           detail::csv_cell(r.growth_constant) + ',' + detail::csv_cell(r.a) + ',' +
           detail::csv_cell(r.M) + ',' + detail::csv_cell(r.K) + ',' +
           detail::csv_cell(r.lambda) + ',' + detail::csv_cell(r.empirical_constant) + ',' +
           std::to_string(r.refinements) + ',' + (r.violation ? "true" : "false") + '\n';
  }
  return out;
}

inline nlohmann::json to_json(const BoundReport& r) {
  using detail::json_number;
  return nlohmann::json{{"theorem", r.theorem},
                        {"f", r.function},
                        {"n", r.n},
                        {"p", json_number(r.p)},
                        {"q", json_number(r.q)},
                        {"x", json_number(r.x)},
                        {"actual_error", json_number(r.actual_error)},
                        {"bound_value", json_number(r.bound_value)},
                        {"slack", json_number(r.slack)},
                        {"M_f", json_number(r.growth_constant)},
                        {"a", json_number(r.a)},
                        {"M", json_number(r.M)},
                        {"K", json_number(r.K)},
                        {"lambda", json_number(r.lambda)},
                        {"empirical_constant", json_number(r.empirical_constant)},
                        {"refinements", r.refinements},
                        {"operator_converged", r.operator_converged},
                        {"violation", r.violation}};
}

inline nlohmann::json to_json(const std::vector<BoundReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

// ---------------------------------------------------------------------------
// Moment tables

inline std::string to_csv(const MomentTable& t) {
  std::string out = "operator,n,p,q,x,order,closed,recurrence,direct,printed,direct_converged\n";
  for (const auto& row : t.rows) {
    out += std::string(to_string(t.kind)) + ',' + std::to_string(t.n) + ',' + format15(t.p) +
           ',' + format15(t.q) + ',' + format15(t.x) + ',' + std::to_string(row.order) + ',' +
           detail::csv_cell(row.value_closed) + ',' + detail::csv_cell(row.value_recurrence) +
           ',' + format15(row.value_direct) + ',' + detail::csv_cell(row.value_printed) + ',' +
           (row.direct_converged ? "true" : "false") + '\n';
  }
  return out;
}

inline nlohmann::json to_json(const MomentTable& t) {
  using detail::json_number;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"order", row.order},
                    {"closed", json_number(row.value_closed)},
                    {"recurrence", json_number(row.value_recurrence)},
                    {"direct", json_number(row.value_direct)},
                    {"printed", json_number(row.value_printed)},
                    {"direct_converged", row.direct_converged}});
  }
  return nlohmann::json{{"operator", to_string(t.kind)},
                        {"n", t.n},
                        {"p", json_number(t.p)},
                        {"q", json_number(t.q)},
                        {"x", json_number(t.x)},
                        {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Discrepancy reports

inline std::string to_csv(const DiscrepancyReport& r) {
  std::string out = "formula,n,p,q,x,printed,oracle,relative_gap\n";
  for (const auto& e : r.entries) {
    out += e.formula + ',' + std::to_string(e.point.n) + ',' + format15(e.point.p) + ',' +
           format15(e.point.q) + ',' + format15(e.point.x) + ',' + format15(e.printed) + ',' +
           format15(e.oracle) + ',' + format15(e.relative_gap) + '\n';
  }
  return out;
}

inline nlohmann::json to_json(const DiscrepancyReport& r) {
  using detail::json_number;
  nlohmann::json sections = nlohmann::json::object();
  for (const auto& id : r.formulas) sections[id] = nlohmann::json::array();
  for (const auto& e : r.entries) {
    sections[e.formula].push_back({{"n", e.point.n},
                                   {"p", json_number(e.point.p)},
                                   {"q", json_number(e.point.q)},
                                   {"x", json_number(e.point.x)},
                                   {"printed", json_number(e.printed)},
                                   {"oracle", json_number(e.oracle)},
                                   {"relative_gap", json_number(e.relative_gap)}});
  }
  return nlohmann::json{{"threshold", json_number(r.threshold)},
                        {"points_checked", r.points_checked},
                        {"sections", sections}};
}

// ---------------------------------------------------------------------------
// Output

/// Writes `content` to `destination`; "-" or an empty string means stdout.
inline void write_output(const std::string& destination, const std::string& content) {
  if (destination.empty() || destination == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + destination + "' for writing: " +
                             std::strerror(errno));
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("error while writing '" + destination + "'");
  }
}

template <class T>
std::string render(const T& value, ReportFormat format) {
  if (format == ReportFormat::csv) return to_csv(value);
  return to_json(value).dump(2) + '\n';
}

template <class T>
void emit_report(const T& value, ReportFormat format, const std::string& destination) {
  write_output(destination, render(value, format));
}

}  // namespace pqk
