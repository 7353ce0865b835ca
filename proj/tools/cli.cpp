#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "tanglekit/monogamy.hpp"
#include "tanglekit/parallel.hpp"
#include "tanglekit/report_json.hpp"
#include "tanglekit/state_io.hpp"

namespace tanglekit::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::string_view kBasisConvention =
    "basis index b = sum_m i_m 2^(N-m), qubit 1 most significant";

const std::vector<std::string> kChecks = {"ckw",      "ov",       "n4sum", "n8sum", "residual3",
                                          "criterion", "twothree", "n4rel", "all"};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Options {
  std::string family;
  std::string state_path;
  int n = 3;
  int focus = 1;
  long samples = 1000;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int roof_restarts = 32;
  int roof_ensemble_max = 0;
  std::string check;
  std::string param;
  std::string out;
  std::string format = "json";
};

// --- small recursive-descent parser for real expressions -------------------

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  double parse() {
    const double v = expression();
    skip_space();
    if (pos_ != text_.size()) fail();
    return v;
  }

 private:
  double expression() {
    double v = term();
    for (;;) {
      skip_space();
      if (accept('+')) v += term();
      else if (accept('-')) v -= term();
      else return v;
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      skip_space();
      if (accept('*')) v *= factor();
      else if (accept('/')) v /= factor();
      else return v;
    }
  }

  double factor() {
    skip_space();
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    if (accept('(')) {
      const double v = expression();
      skip_space();
      if (!accept(')')) fail();
      return v;
    }
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return std::numbers::pi;
    }
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail();
    }
    pos_ += used;
    return v;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail() const {
    throw UsageError("malformed number '" + std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    out.push_back(parse_real(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// --- output helpers ----------------------------------------------------------

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file " + path);
    }
    stream_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& stream() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

using Row = std::vector<std::pair<std::string, std::string>>;

void write_csv(std::ostream& os, const std::vector<Row>& rows) {
  if (rows.empty()) return;
  const Row& first = rows.front();
  for (std::size_t c = 0; c < first.size(); ++c) os << (c ? "," : "") << first[c].first;
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != first.size()) throw std::logic_error("CSV rows disagree on columns");
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c].second;
    os << '\n';
  }
}

// --- evaluation --------------------------------------------------------------

struct Evaluation {
  TangleReport tangles;
  std::vector<ConstraintVerdict> verdicts;
  std::optional<CriterionResult> criterion;
};

bool check_needs_triples(const std::string& check) {
  return check == "ckw" || check == "n8sum" || check == "twothree" || check == "residual3" ||
         check == "all";
}

Evaluation evaluate(const std::string& check, const PureState& state, int focus,
                    const ConvexRoofConfig& roof, const Tolerances& tol) {
  if (check == "all") {
    FullReport r = full_report(state, focus, roof, tol);
    return {std::move(r.tangles), std::move(r.verdicts), std::move(r.criterion)};
  }
  Evaluation e{tangle_report(state, focus, roof, check_needs_triples(check)), {}, std::nullopt};
  const auto& t = e.tangles;
  if (check == "ckw") e.verdicts.push_back(ckw_check(t, tol));
  else if (check == "ov") e.verdicts.push_back(ov_check(t, tol));
  else if (check == "n4sum") e.verdicts.push_back(n4_sum_rule(t, tol).second);
  else if (check == "n8sum") e.verdicts = n8_sum_rule(t, tol).second;
  else if (check == "twothree") e.verdicts.push_back(two_three_constraint(t, tol));
  else if (check == "residual3") e.verdicts.push_back(residual_beyond_three(t, tol));
  else if (check == "n4rel") e.verdicts = n4_relation_checks(t, tol);
  else if (check == "criterion") e.criterion = multipartite_criterion(t);
  else throw UsageError("unknown check '" + check + "'");
  return e;
}

Row make_row(const Evaluation& e, const std::string& state_id, std::optional<double> param) {
  Row row;
  row.emplace_back("state_id", state_id);
  if (param) row.emplace_back("param", num(*param));
  row.emplace_back("n", std::to_string(e.tangles.n_qubits));
  row.emplace_back("focus", std::to_string(e.tangles.focus));
  row.emplace_back("one_tangle", num(e.tangles.one_tangle));
  for (const auto& p : e.tangles.pairs) {
    const auto j = std::to_string(p.j);
    row.emplace_back("n4_" + j, num(p.invariants.n4));
    row.emplace_back("n8_" + j, num(p.invariants.n8));
    row.emplace_back("two_tangle_" + j, num(p.invariants.two_tangle));
  }
  for (const auto& t : e.tangles.triples) {
    row.emplace_back("three_tangle_" + std::to_string(t.j) + "_" + std::to_string(t.k),
                     num(t.three_tangle));
  }
  if (e.criterion) {
    for (std::size_t i = 0; i < e.criterion->js.size(); ++i) {
      row.emplace_back("criterion_" + std::to_string(e.criterion->js[i]),
                       e.criterion->flags[i] ? "1" : "0");
    }
    row.emplace_back("criterion_witnessed", e.criterion->witnessed ? "1" : "0");
  }
  for (const auto& v : e.verdicts) {
    row.emplace_back("residual_" + v.id, num(v.residual));
    row.emplace_back("status_" + v.id, std::string(status_name(v.status)));
  }
  return row;
}

struct Tally {
  long pass = 0;
  long violation = 0;
  long inconclusive = 0;
  long reported = 0;
  double max_abs_residual = 0;

  void add(const ConstraintVerdict& v) {
    switch (v.status) {
      case VerdictStatus::pass: ++pass; break;
      case VerdictStatus::violation: ++violation; break;
      case VerdictStatus::inconclusive: ++inconclusive; break;
      case VerdictStatus::reported: ++reported; return;
    }
    max_abs_residual = std::max(max_abs_residual, std::abs(v.residual));
  }
};

std::string summary(const Tally& t) {
  std::ostringstream os;
  os << "max_abs_residual=" << num(t.max_abs_residual) << " pass=" << t.pass
     << " violation=" << t.violation << " inconclusive=" << t.inconclusive
     << " reported=" << t.reported;
  return os.str();
}

// --- option validation -------------------------------------------------------

void require_qubits(int n, int lo) {
  if (n < lo || n > kMaxQubits) {
    throw UsageError("--n must be in " + std::to_string(lo) + ".." + std::to_string(kMaxQubits));
  }
}

void require_focus(const Options& o, int n) {
  if (o.focus < 1 || o.focus > n) throw UsageError("--focus must be in 1.." + std::to_string(n));
}

ConvexRoofConfig roof_config(const Options& o, std::uint64_t seed) {
  if (o.roof_restarts < 1) throw UsageError("--roof-restarts must be >= 1");
  if (o.roof_ensemble_max < 0 || o.roof_ensemble_max > kMaxEnsembleSize) {
    throw UsageError("--roof-ensemble-max must be in 0.." + std::to_string(kMaxEnsembleSize));
  }
  ConvexRoofConfig cfg;
  cfg.restarts = o.roof_restarts;
  cfg.max_ensemble_size = o.roof_ensemble_max;
  cfg.seed = seed;
  return cfg;
}

Tolerances tolerances(const Options& o) {
  if (!(o.tol > 0) || !std::isfinite(o.tol)) throw UsageError("--tol must be positive");
  Tolerances tol;
  tol.identity = o.tol;
  return tol;
}

StateFamily family_from(const Options& o) {
  StateFamily f;
  try {
    f.tag = parse_family(o.family);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  f.n_qubits = o.n;
  f.params = parse_list(o.param);
  f.seed = o.seed;
  return f;
}

StateMeta family_meta(const Options& o) {
  StateMeta meta{{"family", o.family}, {"n", std::to_string(o.n)}};
  if (o.family == "haar") meta["seed"] = std::to_string(o.seed);
  if (!o.param.empty()) meta["param"] = o.param;
  return meta;
}

// --- subcommands -------------------------------------------------------------

int cmd_gen(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.family.empty()) throw UsageError("--family is required");
  if (o.family == "file") throw UsageError("gen cannot use the file family");
  require_qubits(o.n, 2);
  PureState state = [&] {
    try {
      return named_state(family_from(o));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  Sink sink(o.out, out);
  sink.stream() << state_to_json(state, family_meta(o)) << '\n';
  std::ostream& info = sink.to_file() ? out : err;
  info << "norm=" << num(state.amplitudes().norm()) << " n_qubits=" << state.n_qubits() << " ("
       << kBasisConvention << ")\n";
  return kOk;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream&) {
  StateFile input = [&]() -> StateFile {
    if (!o.state_path.empty()) return read_state_file(o.state_path);
    if (o.family.empty()) throw UsageError("analyze needs a state file or --family");
    require_qubits(o.n, 3);
    try {
      return {named_state(family_from(o)), family_meta(o)};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  const int n = input.state.n_qubits();
  if (n < 3) throw UsageError("analyze needs at least three qubits");
  require_focus(o, n);
  if (o.format != "json" && o.format != "csv") throw UsageError("--format must be json or csv");

  const FullReport report = full_report(input.state, o.focus, roof_config(o, o.seed), tolerances(o));
  Sink sink(o.out, out);
  if (o.format == "json") {
    sink.stream() << report_to_json(report, input.meta).dump(2) << '\n';
  } else {
    Evaluation e{report.tangles, report.verdicts, report.criterion};
    write_csv(sink.stream(), {make_row(e, "0", std::nullopt)});
  }
  if (sink.to_file()) {
    Tally t;
    for (const auto& v : report.verdicts) t.add(v);
    out << "analyze n=" << n << " focus=" << o.focus << " one_tangle=" << num(report.tangles.one_tangle)
        << ' ' << summary(t) << '\n';
  }
  return report.has_violation() ? kViolation : kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  if (std::find(kChecks.begin(), kChecks.end(), o.check) == kChecks.end()) {
    throw UsageError("--check must be one of ckw, ov, n4sum, n8sum, residual3, criterion, "
                     "twothree, n4rel, all");
  }
  require_qubits(o.n, 3);
  if (o.check == "ckw" && o.n != 3) throw UsageError("the ckw check requires --n 3");
  if (o.samples < 1) throw UsageError("--samples must be >= 1");
  if (o.format != "csv" && o.format != "json") throw UsageError("--format must be json or csv");
  require_focus(o, o.n);
  const Tolerances tol = tolerances(o);
  const ConvexRoofConfig base_roof = roof_config(o, 0);

  const auto count = static_cast<std::size_t>(o.samples);
  std::vector<Evaluation> evals(count);
  parallel_for(count, [&](std::size_t i) {
    const std::uint64_t state_seed = derive_seed(o.seed, i);
    ConvexRoofConfig roof = base_roof;
    roof.seed = derive_seed(state_seed, 1);
    evals[i] = evaluate(o.check, haar_random(o.n, state_seed), o.focus, roof, tol);
  });

  std::vector<Row> rows;
  Tally tally;
  for (std::size_t i = 0; i < count; ++i) {
    rows.push_back(make_row(evals[i], std::to_string(i), std::nullopt));
    for (const auto& v : evals[i].verdicts) tally.add(v);
  }
  Sink sink(o.out, out);
  write_csv(sink.stream(), rows);
  std::ostream& info = sink.to_file() ? out : err;
  info << "verify check=" << o.check << " n=" << o.n << " samples=" << o.samples
       << " seed=" << o.seed << ' ' << summary(tally) << '\n';
  return tally.violation > 0 ? kViolation : kOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const FamilyTag tag = [&] {
    try {
      return parse_family(o.family);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  if (tag != FamilyTag::ghz_w && tag != FamilyTag::gghz) {
    throw UsageError("sweep needs a one-parameter family (ghz_w or gghz)");
  }
  require_qubits(o.n, 3);
  require_focus(o, o.n);
  if (o.param.empty()) throw UsageError("sweep needs --param start:stop:step");
  const auto values = expand_range(parse_range(o.param));
  const Tolerances tol = tolerances(o);
  const ConvexRoofConfig base_roof = roof_config(o, o.seed);

  std::vector<Evaluation> evals(values.size());
  parallel_for(values.size(), [&](std::size_t i) {
    StateFamily f{tag, o.n, {values[i]}, 0, {}};
    ConvexRoofConfig roof = base_roof;
    roof.seed = derive_seed(o.seed, i);
    evals[i] = evaluate("all", named_state(f), o.focus, roof, tol);
  });
  std::vector<Row> rows;
  Tally tally;
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows.push_back(make_row(evals[i], std::to_string(i), values[i]));
    for (const auto& v : evals[i].verdicts) tally.add(v);
  }
  Sink sink(o.out, out);
  write_csv(sink.stream(), rows);
  std::ostream& info = sink.to_file() ? out : err;
  info << "sweep family=" << o.family << " n=" << o.n << " points=" << values.size() << ' '
       << summary(tally) << '\n';
  return tally.violation > 0 ? kViolation : kOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.n, "Number of qubits");
  sub->add_option("--focus", o.focus, "Focus qubit (1-based)");
  sub->add_option("--seed", o.seed, "Random seed");
  sub->add_option("--out", o.out, "Output path (default: stdout)");
}

void add_roof(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol, "Identity tolerance");
  sub->add_option("--roof-restarts", o.roof_restarts, "Convex-roof restarts per ensemble size");
  sub->add_option("--roof-ensemble-max", o.roof_ensemble_max,
                  "Largest convex-roof ensemble size (0: rank + 2)");
  sub->add_option("--format", o.format, "Output format: json or csv");
}

}  // namespace

double parse_real(std::string_view text) {
  const double v = ExprParser(text).parse();
  if (!std::isfinite(v)) throw UsageError("non-finite number '" + std::string(text) + "'");
  return v;
}

Range parse_range(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == text.npos ? text.npos : text.find(':', first + 1);
  if (first == text.npos || second == text.npos || text.find(':', second + 1) != text.npos) {
    throw UsageError("range must look like start:stop:step");
  }
  Range r{parse_real(text.substr(0, first)), parse_real(text.substr(first + 1, second - first - 1)),
          parse_real(text.substr(second + 1))};
  if (r.step == 0) throw UsageError("range step must be nonzero");
  if ((r.stop - r.start) * r.step < 0) throw UsageError("range step points away from stop");
  return r;
}

std::vector<double> expand_range(const Range& range) {
  const double span = (range.stop - range.start) / range.step;
  const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
  if (count > 1000000) throw UsageError("range has too many points");
  std::vector<double> out;
  for (long k = 0; k < count; ++k) out.push_back(range.start + static_cast<double>(k) * range.step);
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tangles, polynomial invariants and monogamy checks for multiqubit pure states"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Write a state file");
  gen->add_option("--family", o.family, "ghz | w | product | bell_times_rest | haar | ghz_w | gghz");
  gen->add_option("--param", o.param, "Comma-separated family parameters (pi allowed)");
  add_common(gen, o);

  auto* analyze = app.add_subcommand("analyze", "Full monogamy report for one state");
  analyze->add_option("state", o.state_path, "State JSON file");
  analyze->add_option("--family", o.family, "Generate the state instead of reading a file");
  analyze->add_option("--param", o.param, "Family parameters");
  add_common(analyze, o);
  add_roof(analyze, o);

  auto* verify = app.add_subcommand("verify", "Check constraints on Haar-random states");
  verify->add_option("--check", o.check, "ckw | ov | n4sum | n8sum | residual3 | criterion | "
                                         "twothree | n4rel | all")
      ->required();
  verify->add_option("--samples", o.samples, "Number of random states");
  add_common(verify, o);
  add_roof(verify, o);

  auto* sweep = app.add_subcommand("sweep", "Scan a one-parameter family");
  sweep->add_option("--family", o.family, "ghz_w | gghz")->required();
  sweep->add_option("--param", o.param, "Range start:stop:step (pi allowed)");
  add_common(sweep, o);
  add_roof(sweep, o);
  o.format = "";

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out, err);
    if (o.format.empty()) o.format = verify->parsed() || sweep->parsed() ? "csv" : "json";
    if (analyze->parsed()) return cmd_analyze(o, out, err);
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"tanglekit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace tanglekit::cli
