#include "tanglekit/monogamy.hpp"

#include <algorithm>
#include <cmath>

#include "tanglekit/parallel.hpp"

namespace tanglekit {
namespace {

std::string pair_id(std::string_view stem, int focus, int j) {
  return std::string(stem) + "_" + std::to_string(focus) + "_" + std::to_string(j);
}

ConstraintVerdict identity_verdict(std::string id, Real lhs, Real rhs, Real tol) {
  ConstraintVerdict v{std::move(id), lhs, rhs, lhs - rhs, tol};
  v.status = std::abs(v.residual) <= tol ? VerdictStatus::pass : VerdictStatus::violation;
  return v;
}

// residual >= -tol. A shortfall is a violation only when no convex-roof
// upper bound entered the residual.
ConstraintVerdict inequality_verdict(std::string id, Real lhs, Real rhs, Real tol,
                                     bool conservative) {
  ConstraintVerdict v{std::move(id), lhs, rhs, lhs - rhs, tol};
  v.conservative = conservative;
  if (v.residual >= -tol) {
    v.status = VerdictStatus::pass;
  } else {
    v.status = conservative ? VerdictStatus::inconclusive : VerdictStatus::violation;
  }
  return v;
}

ConstraintVerdict reported_verdict(std::string id, Real lhs, Real rhs, bool conservative) {
  ConstraintVerdict v{std::move(id), lhs, rhs, lhs - rhs, 0};
  v.status = VerdictStatus::reported;
  v.conservative = conservative;
  return v;
}

void require_at_least(const TangleReport& report, int n, std::string_view what) {
  if (report.n_qubits < n) {
    throw std::invalid_argument(std::string(what) + " needs at least " + std::to_string(n) +
                                " qubits");
  }
}

void require_triples(const TangleReport& report, std::string_view what) {
  require_at_least(report, 3, what);
  if (report.triples.empty()) {
    throw std::invalid_argument(std::string(what) + " needs three-tangles in the report");
  }
}

Real sum_two_tangle_squares(const TangleReport& report) {
  Real s = 0;
  for (const auto& p : report.pairs) s += p.invariants.two_tangle * p.invariants.two_tangle;
  return s;
}

}  // namespace

std::string_view status_name(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::violation: return "violation";
    case VerdictStatus::inconclusive: return "inconclusive";
    case VerdictStatus::reported: return "reported";
  }
  return "?";
}

Real TangleReport::three_tangle(int j, int k) const {
  for (const auto& t : triples) {
    if ((t.j == j && t.k == k) || (t.j == k && t.k == j)) return t.three_tangle;
  }
  throw std::out_of_range("no three-tangle for qubits " + std::to_string(j) + "," +
                          std::to_string(k));
}

Real TangleReport::three_tangle_square_sum(int j) const {
  Real s = 0;
  for (const auto& t : triples) {
    if (t.j == j || t.k == j) s += t.three_tangle * t.three_tangle;
  }
  return s;
}

bool TangleReport::conservative() const {
  return std::any_of(triples.begin(), triples.end(), [](const auto& t) { return t.conservative; });
}

TangleReport tangle_report(const PureState& state, int focus, const ConvexRoofConfig& roof,
                           bool with_triples) {
  const int n = state.n_qubits();
  if (n < 2) throw std::invalid_argument("tangle report needs at least two qubits");
  const auto order = focus_first_order(n, focus);
  const PureState ps = relabel(state, order);
  auto label = [&](int p) { return order[static_cast<std::size_t>(p - 1)]; };

  TangleReport report;
  report.n_qubits = n;
  report.focus = focus;
  report.one_tangle = one_tangle(ps, 1);
  for (int p = 2; p <= n; ++p) {
    report.pairs.push_back({label(p), pair_invariants(marginal(ps, {1, p}))});
  }
  if (!with_triples || n < 3) return report;

  if (n == 3) {
    report.triples.push_back({label(2), label(3), three_tangle_pure(ps), false, std::nullopt});
    return report;
  }
  std::uint64_t triple_index = 0;
  for (int p = 2; p <= n; ++p)
    for (int q = p + 1; q <= n; ++q, ++triple_index) {
      ConvexRoofConfig cfg = roof;
      cfg.seed = derive_seed(roof.seed, triple_index);
      auto result = three_tangle_mixed(marginal(ps, {1, p, q}), cfg);
      const Real value = result.value;
      report.triples.push_back({label(p), label(q), value, true, std::move(result)});
    }
  return report;
}

ConstraintVerdict ckw_check(const TangleReport& report, const Tolerances& tol) {
  if (report.n_qubits != 3) {
    throw std::invalid_argument("CKW check needs exactly three qubits");
  }
  require_triples(report, "CKW check");
  const Real rhs = sum_two_tangle_squares(report) + report.triples.front().three_tangle;
  return identity_verdict("ckw", report.one_tangle, rhs, tol.identity);
}

ConstraintVerdict ov_check(const TangleReport& report, const Tolerances& tol) {
  return inequality_verdict("ov", report.one_tangle, sum_two_tangle_squares(report),
                            tol.inequality, false);
}

std::pair<SumRuleReport, ConstraintVerdict> n4_sum_rule(const TangleReport& report,
                                                        const Tolerances& tol) {
  require_at_least(report, 3, "n4 sum rule");
  SumRuleReport sums;
  for (const auto& p : report.pairs) {
    sums.js.push_back(p.j);
    sums.sum_n4 += p.invariants.n4;
  }
  sums.x_sum = sums.sum_n4 - report.one_tangle;
  auto verdict = report.n_qubits % 2 == 1
                     ? identity_verdict("n4sum", sums.sum_n4, report.one_tangle, tol.identity)
                     : reported_verdict("n4sum", sums.sum_n4, report.one_tangle, false);
  return {std::move(sums), std::move(verdict)};
}

std::pair<SumRuleReport, std::vector<ConstraintVerdict>> n8_sum_rule(const TangleReport& report,
                                                                     const Tolerances& tol) {
  require_triples(report, "n8 sum rule");
  SumRuleReport sums = n4_sum_rule(report, tol).first;
  sums.conservative = report.conservative();
  std::vector<ConstraintVerdict> verdicts;
  Real lhs_total = 0;
  Real rhs_total = 0;
  for (const auto& p : report.pairs) {
    const Real squares = report.three_tangle_square_sum(p.j);
    const Real delta = 4 * p.invariants.n8 - squares / 4;
    sums.delta.push_back(delta);
    sums.Delta.push_back(delta + p.invariants.active_chi());
    sums.sum_delta += delta;
    sums.sum_Delta += sums.Delta.back();
    lhs_total += 4 * p.invariants.n8;
    rhs_total += squares / 4;
    if (report.n_qubits == 3) {
      verdicts.push_back(identity_verdict(pair_id("n8sum", report.focus, p.j),
                                          16 * p.invariants.n8, squares, tol.identity));
    }
  }
  if (report.n_qubits > 3) {
    verdicts.push_back(reported_verdict("n8sum", lhs_total, rhs_total, sums.conservative));
  }
  return {std::move(sums), std::move(verdicts)};
}

ConstraintVerdict two_three_constraint(const TangleReport& report, const Tolerances& tol) {
  require_triples(report, "two/three-tangle constraint");
  Real lhs = 0;
  for (const auto& p : report.pairs) {
    const Real gap = p.invariants.n4 - p.invariants.two_tangle * p.invariants.two_tangle;
    lhs += gap * gap;
  }
  Real triple_squares = 0;
  for (const auto& t : report.triples) triple_squares += t.three_tangle * t.three_tangle;
  lhs -= triple_squares / 2;

  if (report.n_qubits == 3) {
    const Real rhs = n8_sum_rule(report, tol).first.sum_Delta;
    return identity_verdict("twothree", lhs, rhs, tol.identity);
  }
  return inequality_verdict("twothree", lhs, 0, tol.roof, report.conservative());
}

ConstraintVerdict residual_beyond_three(const TangleReport& report, const Tolerances& tol) {
  require_triples(report, "residual inequality");
  Real squares = 0;
  for (const auto& p : report.pairs) squares += report.three_tangle_square_sum(p.j);
  const Real rhs = sum_two_tangle_squares(report) + std::sqrt(squares) / 2;
  return inequality_verdict("residual3", report.one_tangle, rhs, tol.roof, report.conservative());
}

std::vector<ConstraintVerdict> n4_relation_checks(const TangleReport& report,
                                                  const Tolerances& tol) {
  std::vector<ConstraintVerdict> out;
  for (const auto& p : report.pairs) {
    const auto& inv = p.invariants;
    const Real lhs = inv.n4 - inv.two_tangle * inv.two_tangle;
    const Real rhs = std::sqrt(std::max(Real(0), 4 * inv.n8 + inv.active_chi()));
    out.push_back(identity_verdict(pair_id("n4rel", report.focus, p.j), lhs, rhs, tol.identity));
  }
  return out;
}

std::vector<ConstraintVerdict> closure_checks(const TangleReport& report, const Tolerances& tol) {
  const auto sums = n8_sum_rule(report, tol).first;
  std::vector<ConstraintVerdict> out;
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    const auto& p = report.pairs[i];
    const Real lhs = p.invariants.n4 - p.invariants.two_tangle * p.invariants.two_tangle;
    const Real inside = report.three_tangle_square_sum(p.j) / 4 + sums.Delta[i];
    const Real rhs = std::sqrt(std::max(Real(0), inside));
    out.push_back(identity_verdict(pair_id("closure", report.focus, p.j), lhs, rhs, tol.closure));
  }
  return out;
}

CriterionResult multipartite_criterion(const TangleReport& report, Real threshold) {
  require_at_least(report, 3, "multipartite criterion");
  CriterionResult out;
  out.witnessed = true;
  for (const auto& p : report.pairs) {
    const bool flag = p.invariants.n4 > threshold && 2 * p.invariants.n8 > threshold;
    out.js.push_back(p.j);
    out.flags.push_back(flag);
    out.witnessed = out.witnessed && flag;
  }
  return out;
}

ConstraintVerdict ckw_check(const PureState& state3, int focus, const Tolerances& tol) {
  if (state3.n_qubits() != 3) throw std::invalid_argument("CKW check needs exactly three qubits");
  return ckw_check(tangle_report(state3, focus, {}, true), tol);
}

ConstraintVerdict ov_check(const PureState& state, int focus, const Tolerances& tol) {
  return ov_check(tangle_report(state, focus, {}, false), tol);
}

std::pair<SumRuleReport, ConstraintVerdict> n4_sum_rule(const PureState& state, int focus,
                                                        const Tolerances& tol) {
  return n4_sum_rule(tangle_report(state, focus, {}, false), tol);
}

std::pair<SumRuleReport, std::vector<ConstraintVerdict>> n8_sum_rule(
    const PureState& state, int focus, const ConvexRoofConfig& roof, const Tolerances& tol) {
  return n8_sum_rule(tangle_report(state, focus, roof, true), tol);
}

ConstraintVerdict two_three_constraint(const PureState& state, int focus,
                                       const ConvexRoofConfig& roof, const Tolerances& tol) {
  return two_three_constraint(tangle_report(state, focus, roof, true), tol);
}

ConstraintVerdict residual_beyond_three(const PureState& state, int focus,
                                        const ConvexRoofConfig& roof, const Tolerances& tol) {
  return residual_beyond_three(tangle_report(state, focus, roof, true), tol);
}

CriterionResult multipartite_criterion(const PureState& state, int focus, Real threshold) {
  return multipartite_criterion(tangle_report(state, focus, {}, false), threshold);
}

bool FullReport::has_violation() const {
  return std::any_of(verdicts.begin(), verdicts.end(),
                     [](const auto& v) { return v.status == VerdictStatus::violation; });
}

const ConstraintVerdict* FullReport::find(std::string_view id) const {
  for (const auto& v : verdicts) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

FullReport full_report(const PureState& state, int focus, const ConvexRoofConfig& roof,
                       const Tolerances& tol) {
  if (state.n_qubits() < 3) throw std::invalid_argument("full report needs at least three qubits");
  FullReport out;
  out.tangles = tangle_report(state, focus, roof, true);
  const auto& t = out.tangles;

  auto [sums, n8_verdicts] = n8_sum_rule(t, tol);
  out.sums = std::move(sums);
  out.criterion = multipartite_criterion(t);

  if (t.n_qubits == 3) out.verdicts.push_back(ckw_check(t, tol));
  out.verdicts.push_back(ov_check(t, tol));
  out.verdicts.push_back(n4_sum_rule(t, tol).second);
  for (auto& v : n8_verdicts) out.verdicts.push_back(std::move(v));
  out.verdicts.push_back(two_three_constraint(t, tol));
  out.verdicts.push_back(residual_beyond_three(t, tol));
  for (auto& v : n4_relation_checks(t, tol)) out.verdicts.push_back(std::move(v));
  for (auto& v : closure_checks(t, tol)) out.verdicts.push_back(std::move(v));
  return out;
}

}  // namespace tanglekit
