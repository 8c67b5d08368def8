// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pqk/pqk.hpp"

namespace {

struct Criterion {
  int number;
  const char* title;
  std::function<pqk::CheckResult()> run;
};

pqk::CheckResult discrepancy_report_criterion() {
  const pqk::DiscrepancyReport report = pqk::discrepancy_report(pqk::standard_grid());
  pqk::CheckResult r = pqk::check_discrepancy_sections(report);
  const std::string json = pqk::to_json(report).dump();
  const std::string csv = pqk::to_csv(report);
  if (json.empty() || csv.empty()) r.passed = false;
  r.detail += "; serialised " + std::to_string(json.size()) + " bytes of JSON";
  return r;
}

pqk::CheckResult determinism_criterion() {
  pqk::CheckResult r{"determinism", "repeated converge runs give identical CSV"};
  pqk::ConvergeConfig cfg;
  const pqk::TestFunction f = pqk::require_function("exp_neg");
  const std::string a = pqk::to_csv(pqk::converge_run(f, cfg));
  const std::string b = pqk::to_csv(pqk::converge_run(f, cfg));
  r.measured = a == b ? 0.0 : 1.0;
  r.passed = a == b;
  r.detail = std::to_string(a.size()) + " bytes per run";
  return r;
}

}  // namespace

int main() {
  const std::vector<pqk::GridPoint> grid = pqk::standard_grid();
  const std::vector<Criterion> criteria = {
      {1, "quadrature identity", [] { return pqk::check_quadrature_identity(); }},
      {2, "partition of unity", [&] { return pqk::check_partition_of_unity(grid); }},
      {3, "moment triangle", [&] { return pqk::check_moment_triangle_grid(grid); }},
      {4, "closed forms vs numeric pipeline", [] { return pqk::check_numeric_pipeline(); }},
      {5, "exponential identity", [] { return pqk::check_exponential_identity(); }},
      {6, "linear exact error", [] { return pqk::check_linear_exact_error(); }},
      {7, "pointwise bound domination", [&] { return pqk::check_theorem5_domination(grid); }},
      {8, "convergence sweep", [] { return pqk::check_convergence_sweep(); }},
      {9, "classical limit", [] { return pqk::check_classical_limit(); }},
      {10, "auxiliary operator", [] { return pqk::check_auxiliary_operator(); }},
      {11, "discrepancy report", [] { return discrepancy_report_criterion(); }},
      {12, "determinism", [] { return determinism_criterion(); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    const pqk::CheckResult r = c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!r.passed) ++failures;
    std::printf("criterion %2d %-34s %s  measured %s  limit %s  (%.2fs)  %s\n", c.number,
                c.title, r.passed ? "PASS" : "FAIL", pqk::format15(r.measured).c_str(),
                pqk::format15(r.threshold).c_str(), secs, r.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
