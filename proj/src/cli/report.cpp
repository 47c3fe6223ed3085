#include "ametric/cli/report.hpp"

#include <cmath>

namespace ametric::cli {

ordered_json number_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json point_json(const Point& p) {
  ordered_json out = ordered_json::array();
  for (double v : p) out.push_back(number_json(v));
  return out;
}

ordered_json to_json(const CheckReport& report, std::size_t max_violations) {
  ordered_json violations = ordered_json::array();
  for (std::size_t i = 0; i < report.violations.size() && i < max_violations; ++i) {
    const auto& v = report.violations[i];
    ordered_json witness = ordered_json::array();
    for (const auto& p : v.witness) witness.push_back(point_json(p));
    violations.push_back({{"check", v.check},
                          {"witness", witness},
                          {"lhs", number_json(v.lhs)},
                          {"rhs", number_json(v.rhs)},
                          {"gap", number_json(v.gap)},
                          {"tol", number_json(v.tol)}});
  }
  return {{"name", report.name},
          {"passed", report.passed()},
          {"checked", report.checked},
          {"max_gap", number_json(report.max_gap)},
          {"n_violations", report.violations.size()},
          {"violations", violations}};
}

ordered_json to_json(const BranchConstants& bc) {
  return {{"x", point_json(bc.x)},
          {"y", point_json(bc.y)},
          {"a_req", number_json(bc.a_req)},
          {"b_req", number_json(bc.b_req)},
          {"c_req", number_json(bc.c_req)}};
}

ordered_json to_json(const ZamfirescuCertificate& cert) {
  ordered_json witnesses = ordered_json::array();
  for (const auto& w : cert.witnesses) witnesses.push_back(to_json(w));
  return {{"valid", cert.valid},
          {"a", number_json(cert.a)},
          {"b", number_json(cert.b)},
          {"c", number_json(cert.c)},
          {"delta", number_json(cert.delta)},
          {"t", cert.t},
          {"exhaustive", cert.exhaustive},
          {"n_pairs", cert.n_pairs},
          {"near_diagonal", cert.near_diagonal},
          {"branch_counts",
           {{"banach", cert.branch_counts[0]},
            {"kannan", cert.branch_counts[1]},
            {"chatterjea", cert.branch_counts[2]}}},
          {"witnesses", witnesses}};
}

ordered_json trace_summary(const PicardTrace& trace) {
  ordered_json out{{"status", to_string(trace.status)},
                   {"iterations", trace.iterations()},
                   {"delta", trace.monitored() ? number_json(trace.delta) : ordered_json(nullptr)},
                   {"x0", point_json(trace.iterates.front())},
                   {"final_step", trace.steps.empty() ? ordered_json(0.0) : number_json(trace.steps.back())}};
  if (trace.monitored() && !trace.steps.empty()) {
    out["final_bound"] = number_json(trace.bound.back());
    out["final_tail_bound"] =
        number_json(tail_bound(trace.delta, Arity(trace.t), trace.steps.front(), trace.steps.size()));
  } else {
    out["final_bound"] = nullptr;
    out["final_tail_bound"] = nullptr;
  }
  out["limit"] = trace.limit ? point_json(*trace.limit) : ordered_json(nullptr);
  return out;
}

ordered_json to_json(const CauchyReport& report) {
  ordered_json out = to_json(report.envelope);
  out["pairs"] = report.pairs;
  out["finite_form_rate"] = number_json(report.finite_form_rate);
  out["naive_form_rate"] = number_json(report.naive_form_rate);
  return out;
}

}  // namespace ametric::cli
