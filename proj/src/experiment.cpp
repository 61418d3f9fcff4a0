#include "removal/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "removal/constructions.hpp"
#include "removal/counting.hpp"
#include "removal/errors.hpp"
#include "removal/instances.hpp"
#include "removal/packing.hpp"
#include "removal/procedures.hpp"
#include "removal/rng.hpp"
#include "removal/tester.hpp"

namespace removal {
namespace {

enum class ArgType { kUint, kUintList, kRational, kPattern, kWord };

struct KeySpec {
  ArgType type;
  bool required;
};

const std::map<std::string, std::map<std::string, KeySpec>, std::less<>>& step_table() {
  static const std::map<std::string, std::map<std::string, KeySpec>, std::less<>> table{
      {"gap-table", {{"m", {ArgType::kUintList, true}}}},
      {"lb-blowup", {{"m", {ArgType::kUint, true}}, {"n", {ArgType::kUint, true}}}},
      {"count",
       {{"seeds", {ArgType::kUint, true}},
        {"n", {ArgType::kUint, true}},
        {"p", {ArgType::kRational, false}},
        {"pattern", {ArgType::kPattern, false}}}},
      {"plant-pack",
       {{"n", {ArgType::kUint, true}},
        {"target", {ArgType::kUint, true}},
        {"pattern", {ArgType::kPattern, false}}}},
      {"plant-test",
       {{"n", {ArgType::kUint, true}},
        {"eps", {ArgType::kRational, true}},
        {"q", {ArgType::kUintList, true}},
        {"trials", {ArgType::kUint, true}},
        {"pattern", {ArgType::kPattern, false}}}},
      {"repair-sweep",
       {{"seeds", {ArgType::kUint, true}},
        {"n", {ArgType::kUint, true}},
        {"eps", {ArgType::kRational, true}},
        {"r", {ArgType::kUint, false}},
        {"pattern", {ArgType::kPattern, false}}}},
      {"separate-sweep",
       {{"seeds", {ArgType::kUint, true}},
        {"n", {ArgType::kUint, true}},
        {"density", {ArgType::kRational, true}},
        {"base", {ArgType::kUint, false}},
        {"pattern", {ArgType::kPattern, false}}}},
  };
  return table;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void check_value(std::size_t line, const std::string& key, const std::string& value, ArgType type) {
  auto fail = [&](const char* what) {
    throw ParseError(ParseErrorKind::kMalformedRecord, line,
                     fmt::format("{}: '{}' is not {}", key, value, what));
  };
  switch (type) {
    case ArgType::kUint:
      if (!to_uint(value)) fail("a non-negative integer");
      break;
    case ArgType::kUintList:
      for (const auto part : split(value, ',')) {
        if (!to_uint(part)) fail("a comma-separated integer list");
      }
      break;
    case ArgType::kRational:
      try {
        (void)Rational::parse(value);
      } catch (const std::exception&) {
        fail("a rational");
      }
      break;
    case ArgType::kPattern:
      try {
        (void)parse_pattern_literal(value);
      } catch (const std::exception&) {
        fail("a pattern");
      }
      break;
    case ArgType::kWord:
      break;
  }
}

class Args {
 public:
  explicit Args(const ExperimentStep& step) : step_(step) {
    for (const auto& [k, v] : step.args) values_[k] = v;
  }
  [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
  [[nodiscard]] std::uint64_t uint(const std::string& key, std::uint64_t fallback = 0) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : *to_uint(it->second);
  }
  [[nodiscard]] std::vector<std::size_t> list(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const auto part : split(values_.at(key), ',')) out.push_back(*to_uint(part));
    return out;
  }
  [[nodiscard]] Rational rational(const std::string& key, Rational fallback = {}) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : Rational::parse(it->second);
  }
  [[nodiscard]] Pattern pattern() const {
    const auto it = values_.find("pattern");
    return parse_pattern_literal(it == values_.end() ? "I2" : it->second);
  }
  /// A value that parses but makes no sense for the step.
  [[noreturn]] void reject(const std::string& what) const {
    throw ParseError(ParseErrorKind::kMalformedRecord, step_.line, what);
  }

 private:
  const ExperimentStep& step_;
  std::map<std::string, std::string> values_;
};

double binomial_density(CopyCount count, std::size_t m, std::size_t n, const Pattern& a) {
  const double denom = binomial(m, a.rows()).to_double() * binomial(n, a.cols()).to_double();
  return denom == 0 ? 0.0 : count.to_double() / denom;
}

std::string rat(const Rational& r) { return r.str(); }

void run_gap_table(const Args& args, std::uint64_t seed, std::vector<ExperimentRow>& out) {
  const auto ms = args.list("m");
  std::vector<GapRow> table;
  try {
    table = gap_table(ms);
  } catch (const InputError& e) {
    args.reject(e.what());
  }
  for (const auto& g : table) {
    out.push_back({fmt::format("gap-table:m={}", g.m), g.m, rat(g.eps_hat), std::nullopt,
                   g.delta_hat.to_double(), seed,
                   fmt::format("set_size={};delta_hat={};ratio={}", g.set_size, rat(g.delta_hat),
                               rat(g.ratio))});
  }
}

void run_fr_blowup(const Args& args, std::uint64_t seed, const Limits& limits,
                   std::vector<ExperimentRow>& out) {
  const auto m = args.uint("m"), n = args.uint("n");
  if (m == 0 || m % 10 != 0 || n % m != 0) args.reject("lb-blowup needs 10 | m and m | n");
  const auto inst = lower_bound_base(m, behrend_set(m / 10), true, limits);
  const auto big = blowup(inst.base, n);
  const auto packing = blowup_packing(inst.planted, m, n);
  const auto count = count_copies(big, lb_pattern_a(), limits);
  const std::uint64_t b = n / m;
  const auto expected = CopyCount::of(b * b * b * b * inst.q);
  const bool packing_ok = verify_copy_set(big, packing) && packing.copies.size() == b * b * inst.q;
  if (count != expected || !packing_ok) {
    throw std::logic_error(fmt::format("lb-blowup m={} n={}: identity check failed", m, n));
  }
  const double n4 = static_cast<double>(n) * n * n * n;
  out.push_back({fmt::format("lb-blowup:m={}:n={}", m, n), n,
                 rat(Rational(static_cast<std::int64_t>(packing.copies.size()),
                              static_cast<std::int64_t>(n * n))),
                 std::nullopt, binomial_density(count, n, n, lb_pattern_a()), seed,
                 fmt::format("q={};count={};packing={};density_n4={:.10g}", inst.q, count.str(),
                             packing.copies.size(), count.to_double() / n4)});
}

void run_count(const Args& args, std::uint64_t seed, const Limits& limits,
               std::vector<ExperimentRow>& out) {
  const auto seeds = args.uint("seeds"), n = args.uint("n");
  const auto p = args.rational("p", Rational(1, 2));
  const auto a = args.pattern();
  for (std::uint64_t k = 0; k < seeds; ++k) {
    const auto s = derive_seed(seed, k);
    const auto mat = random_binary(n, n, p.to_double(), s);
    const auto c = count_copies(mat, a, limits);
    out.push_back({fmt::format("count:{}", k), n, rat(p), std::nullopt,
                   binomial_density(c, n, n, a), s, fmt::format("count={}", c.str())});
  }
}

const std::vector<double> kZeroBackground{1.0, 0.0};

void run_plant_pack(const Args& args, std::uint64_t seed, const Limits& limits,
                    std::vector<ExperimentRow>& out) {
  const auto n = args.uint("n"), target = args.uint("target");
  const auto a = args.pattern();
  const auto inst = plant_disjoint_copies(n, n, a, target, kZeroBackground, seed);
  const auto greedy = greedy_maximal_packing(inst.matrix, a, limits);
  std::string exact = "refused";
  try {
    exact = std::to_string(exact_max_packing(inst.matrix, a, limits).size());
  } catch (const BudgetExceeded&) {
  }
  const auto c = count_copies(inst.matrix, a, limits);
  out.push_back({fmt::format("plant-pack:n={}", n), n,
                 rat(Rational(static_cast<std::int64_t>(inst.packing.size()),
                              static_cast<std::int64_t>(n * n))),
                 std::nullopt, binomial_density(c, n, n, a), seed,
                 fmt::format("planted={};greedy={};exact={}", inst.packing.size(), greedy.size(),
                             exact)});
}

void run_plant_test(const Args& args, std::uint64_t seed, const Limits& limits,
                    std::vector<ExperimentRow>& out) {
  const auto n = args.uint("n"), trials = args.uint("trials");
  const auto eps = args.rational("eps");
  const auto a = args.pattern();
  if (trials == 0) args.reject("plant-test needs trials >= 1");
  const auto target = static_cast<std::size_t>(eps.floor_times(static_cast<std::int64_t>(n * n)));
  const auto inst = plant_disjoint_copies(n, n, a, target, kZeroBackground, derive_seed(seed, 0));
  const auto density = estimate_copy_density(inst.matrix, a, 4000, derive_seed(seed, 1));
  for (const auto q : args.list("q")) {
    TesterConfig cfg{q, trials, derive_seed(seed, 2 + q), {a}};
    const auto res = freeness_tester(inst.matrix, cfg, limits);
    out.push_back({fmt::format("plant-test:n={}:q={}", n, q), n,
                   rat(Rational(static_cast<std::int64_t>(inst.packing.size()),
                                static_cast<std::int64_t>(n * n))),
                   res.frequency().to_double(), density.point_estimate().to_double(), cfg.seed,
                   fmt::format("planted={};rejections={}/{}", inst.packing.size(), res.rejections,
                               trials)});
  }
}

void run_repair_sweep(const Args& args, std::uint64_t seed, const Limits& limits,
                      std::vector<ExperimentRow>& out) {
  const auto seeds = args.uint("seeds"), n = args.uint("n");
  const auto eps = args.rational("eps");
  const auto r_max = args.uint("r", n);
  const std::vector<Pattern> base{args.pattern()};
  const auto family = row_permutation_closure(base);
  static constexpr const char* kKinds[] = {"random", "block", "staircase"};
  for (std::uint64_t k = 0; k < seeds; ++k) {
    const auto s = derive_seed(seed, k);
    const auto kind = kKinds[k % 3];
    const DenseMatrix mat = k % 3 == 0   ? random_binary(n, n, 0.5, s)
                            : k % 3 == 1 ? block_structured(n, n, 3, 3, 0.02, s).matrix
                                         : staircase(n, n, s);
    const auto res = row_perm_repair(mat, family, eps, r_max, limits);
    const bool ok = verify_repair(mat, family, res, limits);
    if (!ok) throw std::logic_error(fmt::format("repair-sweep instance {}: certificate rejected", k));
    CopyCount total;
    for (const auto& f : family) total = checked_add(total, count_copies(mat, f, limits));
    const std::size_t edits = res.edits ? res.edits->edits.size() : 0;
    out.push_back({fmt::format("repair:{}:{}", kind, k), n, rat(eps), std::nullopt,
                   binomial_density(total, n, n, family.front()), s,
                   fmt::format("branch={};edits={};budget={};copies={};clusters={};verified=1",
                               to_string(res.branch), edits, res.edit_budget, res.copies.size(),
                               res.clusters)});
  }
}

void run_separate_sweep(const Args& args, std::uint64_t seed, std::vector<ExperimentRow>& out) {
  const auto seeds = args.uint("seeds"), n = args.uint("n");
  const auto density = args.rational("density");
  const auto a = args.pattern();
  const auto target =
      static_cast<std::size_t>(density.ceil_times(static_cast<std::int64_t>(n * n)));
  for (std::uint64_t k = 0; k < seeds; ++k) {
    const auto s = derive_seed(seed, k);
    // base=b: blown-up random b x b matrix instead of sparse planting; the
    // density key is then a floor the instance must reach.
    const auto inst = args.has("base")
                          ? blowup_instance(args.uint("base"), n, 0.5, a, s)
                          : plant_disjoint_copies(n, n, a, target, kZeroBackground, s);
    if (inst.packing.size() < target) {
      out.push_back({fmt::format("separate:{}", k), n, "", std::nullopt, std::nullopt, s,
                     fmt::format("skipped;packing={}<{}", inst.packing.size(), target)});
      continue;
    }
    const auto res = separator_extraction(inst.matrix, a, inst.packing);
    bool verified = false;
    if (res.result) {
      verified = verify_separated_packing(inst.matrix, *res.result);
      if (!verified) throw std::logic_error("separate-sweep: separated packing rejected");
    }
    const auto audits = std::ranges::count_if(res.audit, [](const auto& st) { return st.audit_ok; });
    out.push_back({fmt::format("separate:{}", k), n,
                   rat(Rational(static_cast<std::int64_t>(inst.packing.size()),
                                static_cast<std::int64_t>(n * n))),
                   std::nullopt, std::nullopt, s,
                   fmt::format("status={};steps={};audits_ok={};survivors={};verified={}",
                               to_string(res.status), res.audit.size(), audits,
                               res.result ? res.result->packing.size() : 0, verified ? 1 : 0)});
  }
}

std::string csv_double(const std::optional<double>& v) {
  return v ? fmt::format("{:.10g}", *v) : std::string();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

Pattern parse_pattern_literal(std::string_view text) {
  if (text == "I2") return lb_pattern_a();
  if (text == "B") return lb_pattern_b();
  std::vector<std::vector<int>> rows;
  int top = 1;
  for (const auto part : split(text, '/')) {
    std::vector<int> row;
    for (const char c : part) {
      if (c < '0' || c > '9') throw InputError("pattern: bad symbol");
      row.push_back(c - '0');
      top = std::max(top, c - '0');
    }
    if (row.empty() || (!rows.empty() && row.size() != rows.front().size())) {
      throw InputError("pattern: ragged or empty rows");
    }
    rows.push_back(std::move(row));
  }
  return DenseMatrix::from_rows(rows, static_cast<unsigned>(top + 1));
}

ExperimentSpec parse_experiment(std::istream& in) {
  ExperimentSpec spec;
  bool seen_seed = false;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (kind == "seed") {
      std::string value, extra;
      if (seen_seed) throw ParseError(ParseErrorKind::kMalformedRecord, line, "duplicate seed");
      if (!(ls >> value) || (ls >> extra) || !to_uint(value)) {
        throw ParseError(ParseErrorKind::kMalformedRecord, line, "seed takes one u64");
      }
      if (!spec.steps.empty()) {
        throw ParseError(ParseErrorKind::kMalformedRecord, line, "seed must precede all steps");
      }
      spec.seed = *to_uint(value);
      seen_seed = true;
      continue;
    }
    const auto& table = step_table();
    const auto it = table.find(kind);
    if (it == table.end()) {
      throw ParseError(ParseErrorKind::kMalformedRecord, line, "unknown step '" + kind + "'");
    }
    ExperimentStep step{line, kind, {}};
    std::string token;
    while (ls >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ParseError(ParseErrorKind::kMalformedRecord, line, "expected key=value, got '" + token + "'");
      }
      auto key = token.substr(0, eq), value = token.substr(eq + 1);
      const auto ks = it->second.find(key);
      if (ks == it->second.end()) {
        throw ParseError(ParseErrorKind::kMalformedRecord, line,
                         "unknown key '" + key + "' for " + kind);
      }
      for (const auto& [k, v] : step.args) {
        if (k == key) throw ParseError(ParseErrorKind::kMalformedRecord, line, "duplicate key '" + key + "'");
      }
      check_value(line, key, value, ks->second.type);
      step.args.emplace_back(std::move(key), std::move(value));
    }
    for (const auto& [key, ks] : it->second) {
      const bool present = std::ranges::any_of(step.args, [&](const auto& kv) { return kv.first == key; });
      if (ks.required && !present) {
        throw ParseError(ParseErrorKind::kMalformedRecord, line, "missing key '" + key + "' for " + kind);
      }
    }
    spec.steps.push_back(std::move(step));
  }
  return spec;
}

ExperimentSpec parse_experiment(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_experiment(in);
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec, const Limits& limits) {
  std::vector<ExperimentRow> rows;
  for (std::size_t k = 0; k < spec.steps.size(); ++k) {
    const auto& step = spec.steps[k];
    const Args args(step);
    const auto seed = derive_seed(spec.seed, k + 1);
    if (step.kind == "gap-table") {
      run_gap_table(args, seed, rows);
    } else if (step.kind == "lb-blowup") {
      run_fr_blowup(args, seed, limits, rows);
    } else if (step.kind == "count") {
      run_count(args, seed, limits, rows);
    } else if (step.kind == "plant-pack") {
      run_plant_pack(args, seed, limits, rows);
    } else if (step.kind == "plant-test") {
      run_plant_test(args, seed, limits, rows);
    } else if (step.kind == "repair-sweep") {
      run_repair_sweep(args, seed, limits, rows);
    } else if (step.kind == "separate-sweep") {
      run_separate_sweep(args, seed, rows);
    }
  }
  return rows;
}

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kExperimentCsvHeader << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.instance) << ',' << r.n << ',' << csv_field(r.epsilon) << ','
        << csv_double(r.rejection_frequency) << ',' << csv_double(r.copy_density) << ','
        << r.seed << ',' << csv_field(r.note) << '\n';
  }
}

}  // namespace removal
