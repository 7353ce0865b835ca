#include "tanglekit/report_json.hpp"

namespace tanglekit {

using nlohmann::json;

json verdict_to_json(const ConstraintVerdict& v) {
  json out{{"id", v.id},
           {"lhs", v.lhs},
           {"rhs", v.rhs},
           {"residual", v.residual},
           {"tolerance", v.tolerance},
           {"status", status_name(v.status)},
           {"conservative", v.conservative}};
  if (v.status == VerdictStatus::reported) {
    out["pass"] = nullptr;
  } else {
    out["pass"] = v.pass();
  }
  return out;
}

json report_to_json(const FullReport& report, const StateMeta& meta) {
  const auto& t = report.tangles;
  json out;
  out["state_meta"] = meta;
  out["n_qubits"] = t.n_qubits;
  out["focus"] = t.focus;
  out["one_tangle"] = t.one_tangle;

  json pairs = json::array();
  for (const auto& p : t.pairs) {
    const auto& inv = p.invariants;
    pairs.push_back({{"j", p.j},
                     {"n4", inv.n4},
                     {"n8", inv.n8},
                     {"n12", inv.n12},
                     {"n16", inv.n16},
                     {"c_value", inv.c_value},
                     {"f16", inv.f16},
                     {"chi_branch", inv.plus_branch() ? "+" : "-"},
                     {"chi_active", inv.active_chi()},
                     {"two_tangle", inv.two_tangle}});
  }
  out["pairs"] = std::move(pairs);

  json triples = json::array();
  for (const auto& tr : t.triples) {
    json entry{{"j", tr.j}, {"k", tr.k}, {"three_tangle", tr.three_tangle},
               {"conservative", tr.conservative}};
    if (tr.roof) {
      entry["roof"] = {{"ensemble_size", tr.roof->ensemble_size},
                       {"restarts_used", tr.roof->restarts_used},
                       {"iterations", tr.roof->iterations},
                       {"converged", tr.roof->converged},
                       {"eigen_ensemble_value", tr.roof->eigen_ensemble_value}};
    }
    triples.push_back(std::move(entry));
  }
  out["triples"] = std::move(triples);

  json verdicts = json::array();
  for (const auto& v : report.verdicts) verdicts.push_back(verdict_to_json(v));
  out["verdicts"] = std::move(verdicts);

  const auto& s = report.sums;
  out["sum_rules"] = {{"sum_n4", s.sum_n4},     {"x_sum", s.x_sum},
                      {"js", s.js},             {"delta", s.delta},
                      {"Delta", s.Delta},       {"sum_delta", s.sum_delta},
                      {"sum_Delta", s.sum_Delta}, {"conservative", s.conservative}};

  json flags = json::array();
  for (std::size_t i = 0; i < report.criterion.js.size(); ++i) {
    flags.push_back({{"j", report.criterion.js[i]}, {"flag", bool(report.criterion.flags[i])}});
  }
  out["criterion"] = {{"pairs", std::move(flags)}, {"witnessed", report.criterion.witnessed}};
  return out;
}

}  // namespace tanglekit
