#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tanglekit/convexroof.hpp"
#include "tanglekit/invariants.hpp"
#include "tanglekit/qstate.hpp"

namespace tanglekit {

enum class VerdictStatus {
  pass,
  violation,     // identity or roof-free inequality failed
  inconclusive,  // roof-dependent inequality not met by upper bounds
  reported,      // value reported without a pass/fail claim
};

std::string_view status_name(VerdictStatus status);

struct ConstraintVerdict {
  std::string id;
  Real lhs = 0;
  Real rhs = 0;
  Real residual = 0;
  Real tolerance = 0;
  VerdictStatus status = VerdictStatus::reported;
  bool conservative = false;

  bool pass() const { return status == VerdictStatus::pass; }
};

struct Tolerances {
  Real identity = 1e-8;
  Real inequality = 1e-9;
  Real roof = 1e-6;
  Real closure = 1e-7;
};

struct PairReport {
  int j;
  PairInvariants invariants;
};

struct TripleReport {
  int j;
  int k;
  Real three_tangle;
  bool conservative;  // true when the value is a convex-roof upper bound
  std::optional<ConvexRoofResult> roof;
};

/// Tangles around one focus qubit. Pair and triple labels are the original
/// register positions.
struct TangleReport {
  int n_qubits = 0;
  int focus = 1;
  Real one_tangle = 0;
  std::vector<PairReport> pairs;
  std::vector<TripleReport> triples;

  Real three_tangle(int j, int k) const;
  /// sum_{k != j} tau^2_{1|j|k}
  Real three_tangle_square_sum(int j) const;
  bool conservative() const;
};

struct SumRuleReport {
  Real sum_n4 = 0;
  Real x_sum = 0;  // sum_j n4(rho_1j) - tau_1
  std::vector<int> js;
  std::vector<Real> delta;  // 4 n8(rho_1j) - 1/4 sum_{k != j} tau^2_{1|j|k}
  std::vector<Real> Delta;  // delta_1j + active chi_1j
  Real sum_delta = 0;
  Real sum_Delta = 0;
  bool conservative = false;
};

struct CriterionResult {
  std::vector<int> js;
  std::vector<bool> flags;  // n4 > threshold and 2 n8 > threshold
  bool witnessed = false;   // all pairs flagged
};

/// Builds the one-tangle and pair invariants for `focus`, plus three-tangles
/// when `with_triples` is set (pure formula for N = 3, convex roofs otherwise).
TangleReport tangle_report(const PureState& state, int focus, const ConvexRoofConfig& roof,
                           bool with_triples = true);

// Checks on a prepared report. Each requires the fields it reads.
ConstraintVerdict ckw_check(const TangleReport& report, const Tolerances& tol = {});
ConstraintVerdict ov_check(const TangleReport& report, const Tolerances& tol = {});
std::pair<SumRuleReport, ConstraintVerdict> n4_sum_rule(const TangleReport& report,
                                                        const Tolerances& tol = {});
std::pair<SumRuleReport, std::vector<ConstraintVerdict>> n8_sum_rule(const TangleReport& report,
                                                                     const Tolerances& tol = {});
ConstraintVerdict two_three_constraint(const TangleReport& report, const Tolerances& tol = {});
ConstraintVerdict residual_beyond_three(const TangleReport& report, const Tolerances& tol = {});
std::vector<ConstraintVerdict> n4_relation_checks(const TangleReport& report,
                                                  const Tolerances& tol = {});
std::vector<ConstraintVerdict> closure_checks(const TangleReport& report,
                                              const Tolerances& tol = {});
CriterionResult multipartite_criterion(const TangleReport& report, Real threshold = 1e-9);

// Convenience forms on a state.
ConstraintVerdict ckw_check(const PureState& state3, int focus = 1, const Tolerances& tol = {});
ConstraintVerdict ov_check(const PureState& state, int focus = 1, const Tolerances& tol = {});
std::pair<SumRuleReport, ConstraintVerdict> n4_sum_rule(const PureState& state, int focus = 1,
                                                        const Tolerances& tol = {});
std::pair<SumRuleReport, std::vector<ConstraintVerdict>> n8_sum_rule(
    const PureState& state, int focus = 1, const ConvexRoofConfig& roof = {},
    const Tolerances& tol = {});
ConstraintVerdict two_three_constraint(const PureState& state, int focus = 1,
                                       const ConvexRoofConfig& roof = {},
                                       const Tolerances& tol = {});
ConstraintVerdict residual_beyond_three(const PureState& state, int focus = 1,
                                        const ConvexRoofConfig& roof = {},
                                        const Tolerances& tol = {});
CriterionResult multipartite_criterion(const PureState& state, int focus = 1,
                                       Real threshold = 1e-9);

struct FullReport {
  TangleReport tangles;
  SumRuleReport sums;
  CriterionResult criterion;
  std::vector<ConstraintVerdict> verdicts;

  bool has_violation() const;
  const ConstraintVerdict* find(std::string_view id) const;
};

/// Every check for one focus qubit. Requires N >= 3.
FullReport full_report(const PureState& state, int focus = 1, const ConvexRoofConfig& roof = {},
                       const Tolerances& tol = {});

}  // namespace tanglekit
