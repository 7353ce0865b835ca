// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tanglekit/convexroof.hpp"
#include "tanglekit/invariants.hpp"
#include "tanglekit/monogamy.hpp"
#include "tanglekit/parallel.hpp"

using namespace tanglekit;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PureState sample(int n, std::uint64_t suite, std::uint64_t i) {
  return haar_random(n, derive_seed(suite, i));
}

bool rel_ok(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = full_report(ghz_state(3));
  const double secs = seconds_since(t0);
  const double t1 = r.tangles.one_tangle;
  const double t12 = r.tangles.pairs[0].invariants.two_tangle;
  const double t13 = r.tangles.pairs[1].invariants.two_tangle;
  const double t3 = r.tangles.three_tangle(2, 3);
  const bool ok = std::abs(t1 - 1) <= 1e-10 && std::abs(t12) <= 1e-10 && std::abs(t13) <= 1e-10 &&
                  std::abs(t3 - 1) <= 1e-10 && secs < 1;
  return {ok, fmt("one_tangle=%.17g two_tangles=(%.3g, %.3g) three_tangle=%.17g time=%.3fs", t1, t12, t13,
                  t3, secs)};
}

Outcome ac2() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) worst = std::max(worst, std::abs(ckw_check(sample(3, 2, i)).residual));
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && secs < 10, fmt("1000 states max|residual|=%.3g time=%.2fs", worst, secs)};
}

Outcome ac3() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (int n = 3; n <= 5; ++n) {
    double worst4 = 0;
    double worst8 = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
      const auto s = sample(n, 30 + n, i);
      for (int j = 2; j <= n; ++j) {
        const auto inv = pair_invariants(marginal(s, {1, j}));
        const double d4 = std::abs(n4_from_invariants(s, 1, j) - inv.n4) / std::max(1.0, inv.n4);
        const double d8 = std::abs(n8_from_invariants(s, 1, j) - inv.n8) / std::max(1.0, inv.n8);
        worst4 = std::max(worst4, d4);
        worst8 = std::max(worst8, d8);
        ok = ok && rel_ok(n4_from_invariants(s, 1, j), inv.n4, 1e-9) && rel_ok(n8_from_invariants(s, 1, j), inv.n8, 1e-9);
      }
    }
    detail += fmt("N=%d rel n4=%.2g n8=%.2g; ", n, worst4, worst8);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 60, detail + fmt("time=%.2fs", secs)};
}

Outcome ac4() {
  double worst = 0;
  int positive = 0;
  int zero = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto s = sample(4, 4, i);
    const int j = 2 + static_cast<int>(i % 3);
    const auto inv = pair_invariants(marginal(s, {1, j}));
    worst = std::max(worst, n4_relation_residual(inv));
    if (inv.c_value > 0) ++positive;
    if (!inv.plus_branch()) ++zero;
  }
  return {worst <= 1e-8 && positive > 0 && zero > 0,
          fmt("1000 marginals max residual=%.3g, chi+ with C>0: %d, chi- with tau=0: %d", worst, positive, zero)};
}

Outcome ac5() {
  bool ok = true;
  std::string detail;
  for (int n : {3, 5}) {
    double worst = 0;
    for (std::uint64_t i = 0; i < 1000; ++i)
      worst = std::max(worst, std::abs(n4_sum_rule(sample(n, 50 + n, i)).first.x_sum));
    ok = ok && worst <= 1e-8;
    detail += fmt("N=%d max|x_sum|=%.3g; ", n, worst);
  }
  return {ok, detail};
}

Outcome ac6() {
  double worst = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto s = sample(3, 6, i);
    const double tau = three_tangle_pure(s);
    for (int j = 2; j <= 3; ++j)
      worst = std::max(worst, std::abs(16 * pair_invariants(marginal(s, {1, j})).n8 - tau * tau));
  }
  return {worst <= 1e-8, fmt("1000 states max|16 n8 - tau3^2|=%.3g", worst)};
}

Outcome ac7() {
  bool ok = true;
  std::string detail;
  for (int n = 3; n <= 6; ++n) {
    double lowest = 1e300;
    for (std::uint64_t i = 0; i < 1000; ++i) lowest = std::min(lowest, ov_check(sample(n, 70 + n, i)).residual);
    ok = ok && lowest >= -1e-9;
    detail += fmt("N=%d min residual=%.3g; ", n, lowest);
  }
  const double w = ov_check(w_state(3)).residual;
  ok = ok && std::abs(w) <= 1e-10;
  return {ok, detail + fmt("W3 residual=%.3g", w)};
}

Outcome ac8() {
  const auto bell = bell_times_rest(3);
  const auto inv = pair_invariants(marginal(bell, {1, 2}));
  const auto cb = multipartite_criterion(bell);
  const auto cg = multipartite_criterion(ghz_state(3));
  const bool ok = !cb.flags[0] && inv.n4 > 1e-9 && 2 * inv.n8 <= 1e-9 && cg.flags[0] && cg.flags[1] && cg.witnessed;
  return {ok, fmt("Bell x |0>: pair(1,2) flag=%d n4=%.3g n8=%.3g; GHZ3 flags=(%d,%d)", int(cb.flags[0]), inv.n4,
                  inv.n8, int(cg.flags[0]), int(cg.flags[1]))};
}

Outcome ac9() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  // pure inputs
  double pure_err = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto s = i == 0 ? ghz_state(3) : sample(3, 90, i);
    const auto res = three_tangle_mixed(DensityMatrix::projector(s));
    pure_err = std::max(pure_err, std::abs(res.value - oracle::three_tangle(s.amplitudes())));
  }
  ok = ok && pure_err <= 1e-9;
  // mixture of |000> and |111>
  MatrixXc m = MatrixXc::Zero(8, 8);
  m(0, 0) = m(7, 7) = 0.5;
  const double mixed = three_tangle_mixed(DensityMatrix::validated(m, {1, 2, 3})).value;
  ok = ok && mixed <= 1e-6;
  // optimizer against random decompositions
  std::vector<double> gap(50);
  parallel_for(50, [&](std::size_t i) {
    const auto rho = marginal(sample(4, 91, i), {1, 2, 3});
    ConvexRoofConfig cfg;
    cfg.seed = i;
    const double value = three_tangle_mixed(rho, cfg).value;
    const oracle::RandomDecompositions oracle_dec(rho.elements());
    std::mt19937_64 rng(derive_seed(92, i));
    double best = 1e300;
    for (int t = 0; t < 100000; ++t) best = std::min(best, oracle_dec.sample(oracle_dec.rank() + t % 3, rng));
    gap[i] = value - best;
  });
  const double worst_gap = *std::max_element(gap.begin(), gap.end());
  const double secs = seconds_since(t0);
  ok = ok && worst_gap <= 1e-9 && secs < 600;
  return {ok, fmt("pure err=%.3g, GHZ mixture=%.3g, 50 marginals max(opt - best random)=%.3g, time=%.1fs", pure_err,
                  mixed, worst_gap, secs)};
}

Outcome ac10() {
  const auto t0 = std::chrono::steady_clock::now();
  const double ghz = residual_beyond_three(ghz_state(3)).residual;
  bool ok = std::abs(ghz - (1 - std::sqrt(2.0) / 2)) <= 1e-9;
  std::vector<VerdictStatus> status(200);
  parallel_for(200, [&](std::size_t i) {
    ConvexRoofConfig cfg;
    cfg.seed = i;
    status[i] = residual_beyond_three(sample(4, 10, i), 1, cfg).status;
  });
  const auto count = [&](VerdictStatus s) { return std::count(status.begin(), status.end(), s); };
  ok = ok && count(VerdictStatus::violation) == 0;
  return {ok, fmt("GHZ3 residual=%.17g; N=4: pass=%ld inconclusive=%ld violation=%ld, time=%.1fs", ghz,
                  count(VerdictStatus::pass), count(VerdictStatus::inconclusive), count(VerdictStatus::violation),
                  seconds_since(t0))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 GHZ3 anchor", ac1},
      {"AC2 CKW equality", ac2},
      {"AC3 invariant/spectral agreement", ac3},
      {"AC4 n4 relation", ac4},
      {"AC5 odd-N n4 sum rule", ac5},
      {"AC6 N=3 n8 identity", ac6},
      {"AC7 Osborne-Verstraete", ac7},
      {"AC8 multipartite criterion", ac8},
      {"AC9 convex roof sanity", ac9},
      {"AC10 residual inequality", ac10},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
