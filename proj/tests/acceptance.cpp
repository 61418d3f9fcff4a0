// Acceptance run: one PASS/FAIL line per criterion. Exits non-zero only when
// a criterion throws, or under --strict when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "oracles.hpp"
#include "removal/constructions.hpp"
#include "removal/counting.hpp"
#include "removal/graph.hpp"
#include "removal/instances.hpp"
#include "removal/packing.hpp"
#include "removal/procedures.hpp"
#include "removal/regularity.hpp"
#include "removal/rng.hpp"
#include "removal/tester.hpp"

using namespace removal;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

const Pattern kA = lb_pattern_a();
const Pattern kB = lb_pattern_b();

DenseMatrix random_pattern(std::size_t s, std::size_t t, CounterRng& rng) {
  std::vector<Symbol> e(s * t);
  for (auto& x : e) x = static_cast<Symbol>(rng.uniform(2));
  return {s, t, Alphabet(2), std::move(e)};
}

// 1. count_copies against a full submatrix histogram.
Verdict oracle_equivalence() {
  const auto t0 = Clock::now();
  std::vector<Pattern> twos, threes;
  for (unsigned code = 0; code < 16; ++code) {
    twos.push_back(DenseMatrix::from_rows({{int(code >> 3 & 1), int(code >> 2 & 1)},
                                           {int(code >> 1 & 1), int(code & 1)}}));
  }
  CounterRng prng(0xacce, 1);
  for (int k = 0; k < 50; ++k) threes.push_back(random_pattern(3, 3, prng));
  std::size_t mismatches = 0, checks = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    CounterRng rng(derive_seed(0xacce, k));
    const std::size_t m = 3 + rng.uniform(10), n = 3 + rng.uniform(10);
    const auto mat = random_binary(m, n, 0.2 + 0.6 * rng.unit(), derive_seed(0xacce0, k));
    const auto h2 = oracle::histogram(mat, 2, 2);
    const auto h3 = oracle::histogram(mat, 3, 3);
    auto expect = [](const auto& h, const Pattern& a) {
      const auto it = h.find(oracle::code_of(a));
      return it == h.end() ? std::uint64_t{0} : it->second;
    };
    for (const auto& a : twos) {
      ++checks;
      if (count_copies(mat, a) != CopyCount::of(expect(h2, a))) ++mismatches;
    }
    for (const auto& a : threes) {
      ++checks;
      if (count_copies(mat, a) != CopyCount::of(expect(h3, a))) ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 60.0,
          fmt::format("{} comparisons, {} mismatches, {:.1f}s (limit 60s)", checks, mismatches, secs)};
}

// 2. Blown-up lower-bound instances: exact count and packing identities.
Verdict lb_identities() {
  const auto t0 = Clock::now();
  std::vector<std::string> parts;
  bool ok = true;
  for (const auto [m, n] : {std::pair<std::size_t, std::size_t>{10, 20}, {10, 40}, {20, 40}}) {
    const auto inst = lower_bound_base(m, behrend_set(m / 10));
    const auto big = blowup(inst.base, n);
    const std::uint64_t b = n / m;
    const auto count = count_copies(big, kA);
    const auto packing = blowup_packing(inst.planted, m, n);
    const bool count_ok = count == CopyCount::of(b * b * b * b * inst.q);
    const bool pack_ok = packing.copies.size() == b * b * inst.q && verify_copy_set(big, packing);
    const auto exact = exact_max_packing(big, kA);
    const bool exact_ok = exact.size() == b * b * inst.q && verify_packing(big, exact);
    ok = ok && count_ok && pack_ok && exact_ok;
    parts.push_back(fmt::format("({},{}) q={} count={} packing={} exact={}", m, n, inst.q,
                                count.str(), packing.copies.size(), exact.size()));
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 120.0, fmt::format("{}; {:.1f}s (limit 120s)", fmt::join(parts, "; "), secs)};
}

// 3. delta_hat * m^2 = eps_hat exactly for every row.
Verdict gap_law() {
  std::vector<std::size_t> ms;
  for (std::size_t m = 10; m <= 200; m += 10) ms.push_back(m);
  const auto rows = gap_table(ms);
  std::size_t bad = 0;
  for (const auto& r : rows) {
    const auto mm = static_cast<std::int64_t>(r.m);
    if (r.delta_hat * Rational(mm * mm) != r.eps_hat) ++bad;
    // Recompute from the set itself rather than the stored size.
    if (r.eps_hat != Rational(static_cast<std::int64_t>(behrend_set(r.m / 10).elements.size()), 5 * mm)) ++bad;
  }
  return {bad == 0 && rows.size() == 20,
          fmt::format("{} rows, {} violations; eps_hat(200) = {}, delta_hat(200) = {}", rows.size(),
                      bad, rows.back().eps_hat.str(), rows.back().delta_hat.str())};
}

// 4. Behrend sets are solution-free for every m <= 1000.
Verdict behrend_validity() {
  const auto t0 = Clock::now();
  std::size_t bad = 0, largest = 0;
  for (std::size_t m = 1; m <= 1000; ++m) {
    const auto b = behrend_set(m);
    if (!verify_solution_free(b.elements)) ++bad;
    for (const auto x : b.elements) {
      if (x < 1 || x > m) ++bad;
    }
    if (m <= 200 && !oracle::solution_free(b.elements)) ++bad;
    largest = b.elements.size();
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 60.0,
          fmt::format("m = 1..1000, {} violations, |X(1000)| = {}, {:.1f}s (limit 60s)", bad, largest, secs)};
}

// Homogeneous fraction recomputed directly from the classes.
Rational direct_fraction(const DenseMatrix& mat, const BlockPartition& p, const Rational& delta) {
  std::int64_t good = 0;
  for (const auto& rc : p.row_classes) {
    for (const auto& cc : p.col_classes) {
      std::map<Symbol, std::int64_t> freq;
      for (const auto i : rc) {
        for (const auto j : cc) ++freq[mat(i, j)];
      }
      std::int64_t top = 0;
      for (const auto& [sym, c] : freq) top = std::max(top, c);
      const auto size = static_cast<std::int64_t>(rc.size() * cc.size());
      if (Rational(size - top, size) <= delta) good += size;
    }
  }
  return {good, static_cast<std::int64_t>(mat.rows() * mat.cols())};
}

// 5. Clustering at delta^2/16 on block-structured matrices yields a partition
//    with homogeneous fraction >= 1 - delta.
Verdict partition_check() {
  const Rational delta(1, 5);
  const Rational cdelta = delta * delta / Rational(16);
  const double noise = (delta * delta / Rational(64)).to_double();
  std::size_t failures = 0;
  Rational worst(1);
  for (std::uint64_t k = 0; k < 100; ++k) {
    CounterRng rng(derive_seed(0x5a, k));
    const std::size_t r = 1 + rng.uniform(8), c = 1 + rng.uniform(8);
    const auto inst = block_structured(128, 128, r, c, noise, derive_seed(0x5b, k));
    const auto rows = clustering(inst.matrix, Axis::kRow, cdelta, 128);
    const auto cols = clustering(inst.matrix, Axis::kCol, cdelta, 128);
    if (!rows || !cols || !satisfies_clustering_invariants(inst.matrix, *rows) ||
        !satisfies_clustering_invariants(inst.matrix, *cols)) {
      ++failures;
      continue;
    }
    const auto part = clusterings_to_partition(*rows, *cols);
    const auto rep = verify_partition(inst.matrix, part, delta);
    if (rep.homogeneous_fraction != direct_fraction(inst.matrix, part, delta)) ++failures;
    if (rep.homogeneous_fraction < Rational(1) - delta) ++failures;
    worst = std::min(worst, rep.homogeneous_fraction);
  }
  return {failures == 0,
          fmt::format("100 instances n=128, noise {:.6f}, clustering delta {}, {} failures, worst fraction {} ({:.4f})",
                      noise, cdelta.str(), failures, worst.str(), worst.to_double())};
}

// 6. Repair returns a verifying branch; edits stay within budget and leave no copy.
Verdict repair_soundness() {
  const std::vector<Pattern> base{kA};
  const auto family = row_permutation_closure(base);
  std::map<RepairBranch, std::size_t> branches;
  std::size_t bad = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const Rational eps = k % 2 ? Rational(1, 4) : Rational(1, 8);
    const auto s = derive_seed(0x6a, k);
    const DenseMatrix mat = k % 3 == 0   ? random_binary(32, 32, 0.5, s)
                            : k % 3 == 1 ? block_structured(32, 32, 3, 3, 0.02, s).matrix
                                         : staircase(32, 32, s);
    const auto res = row_perm_repair(mat, family, eps, 32);
    ++branches[res.branch];
    if (!verify_repair(mat, family, res)) ++bad;
    if (res.branch == RepairBranch::kDensityBranch) ++bad;
    if (res.branch == RepairBranch::kEdit) {
      const auto budget = static_cast<std::size_t>((eps * Rational(5, 6)).ceil_times(32 * 32));
      if (!res.edits || res.edits->edits.size() > budget) ++bad;
      const auto edited = apply_edits(mat, res.edits->edits);
      for (const auto& f : family) {
        if (count_copies(edited, f).value != 0) ++bad;
      }
    }
    if (res.branch == RepairBranch::kCopies) {
      std::set<std::pair<std::size_t, std::size_t>> used;
      for (const auto& fc : res.copies) {
        if (extract_submatrix(mat, fc.copy) != family[fc.member]) ++bad;
        for (const auto& cell : fc.copy.cells()) {
          if (!used.insert({cell.row, cell.col}).second) ++bad;
        }
      }
    }
  }
  return {bad == 0, fmt::format("50 instances n=32, {} violations; branches edit={} copies={} density={}",
                                bad, branches[RepairBranch::kEdit], branches[RepairBranch::kCopies],
                                branches[RepairBranch::kDensityBranch])};
}

bool separated_by_hand(const DenseMatrix& mat, const Pattern& a, const SeparatedPacking& sp) {
  std::set<std::pair<std::size_t, std::size_t>> used;
  const auto& sep = sp.separators;
  if (sep.rows.size() + 1 != a.rows() || sep.cols.size() + 1 != a.cols()) return false;
  for (const auto& c : sp.packing.copy_set.copies) {
    if (extract_submatrix(mat, c) != a) return false;
    for (const auto i : c.rows) {
      for (const auto j : c.cols) {
        if (!used.insert({i, j}).second) return false;
      }
    }
    for (std::size_t i = 0; i + 1 < c.rows.size(); ++i) {
      if (!(c.rows[i] <= sep.rows[i] && sep.rows[i] < c.rows[i + 1])) return false;
    }
    for (std::size_t j = 0; j + 1 < c.cols.size(); ++j) {
      if (!(c.cols[j] <= sep.cols[j] && sep.cols[j] < c.cols[j + 1])) return false;
    }
  }
  return true;
}

// 7. Every returned separated packing passes the checker; completed steps pass their audit.
Verdict separator_validity() {
  std::map<SeparationStatus, std::size_t> status;
  std::size_t bad = 0, steps = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto s = derive_seed(0x7a, k);
    // Half sparse planting, half blown-up random bases (both density >= 0.05).
    const auto inst = k % 2 == 0 ? plant_disjoint_copies(60, 60, kA, 180, std::vector<double>{1.0, 0.0}, s)
                                 : blowup_instance(k % 4 == 1 ? 10 : 12, 60, 0.5, kA, s);
    if (inst.packing.size() * 20 < 3600) {
      ++bad;
      continue;
    }
    const auto res = separator_extraction(inst.matrix, kA, inst.packing);
    ++status[res.status];
    if (res.result) {
      if (!verify_separated_packing(inst.matrix, *res.result)) ++bad;
      if (!separated_by_hand(inst.matrix, kA, *res.result)) ++bad;
    }
    for (std::size_t i = 0; i < res.audit.size(); ++i) {
      if (res.failed_step == i + 1) continue;
      ++steps;
      if (!res.audit[i].audit_ok) ++bad;
    }
  }
  return {bad == 0,
          fmt::format("50 instances n=60, {} violations over {} completed steps; separated={} "
                      "density-branch={} exhausted={}",
                      bad, steps, status[SeparationStatus::kSeparated],
                      status[SeparationStatus::kDensityBranch], status[SeparationStatus::kPackingExhausted])};
}

// 8. Clique count equals reordered-copy count; packings map to edge-disjoint cliques.
Verdict clique_bijection() {
  std::size_t count_bad = 0, full_bad = 0, cross_bad = 0, clique_bad = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    CounterRng rng(derive_seed(0x8a, k));
    const std::size_t m = 2 + rng.uniform(5), n = 2 + rng.uniform(5);
    const auto mat = random_binary(m, n, 0.5, derive_seed(0x8b, k));
    const auto a = random_pattern(2, 2, rng);
    const auto g = build_partite_graph(mat, a);
    const auto cliques = count_cliques(g, 4);
    if (cliques != count_reordered_copies(mat, a) || cliques != CopyCount::of(oracle::reordered_count(mat, a))) {
      ++count_bad;
    }
    const auto packing = greedy_maximal_packing(mat, a);
    std::vector<std::vector<std::size_t>> mapped;
    for (const auto& c : packing.copy_set.copies) {
      mapped.push_back(clique_of_copy(g, c));
      if (!is_clique(g, mapped.back())) ++clique_bad;
    }
    if (!edge_disjoint(mapped)) ++full_bad;
    if (!cross_edge_disjoint(g, mapped)) ++cross_bad;
  }
  return {count_bad == 0 && clique_bad == 0 && full_bad == 0,
          fmt::format("500 instances n<=6: count mismatches {}, non-clique images {}, packings whose "
                      "cliques share an edge {} (row-column edges shared: {})",
                      count_bad, clique_bad, full_bad, cross_bad)};
}

// 9. Tester: never rejects free inputs, always rejects the all-A tiling.
Verdict tester_extremes() {
  const std::vector<Pattern> family{kA, kB};
  std::size_t free_rejections = 0, free_bad = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto mat = staircase(100, 100, derive_seed(0x9a, k));
    if (count_copies(mat, kA).value + count_copies(mat, kB).value != 0) ++free_bad;
    free_rejections += freeness_tester(mat, {8, 10'000, derive_seed(0x9b, k), family}).rejections;
  }
  const auto tiling = periodic_tiling(kA, 100, 100);
  const auto tiled = freeness_tester(tiling, {8, 10'000, 0x9c, {kA}});

  // Reported sweep on a planted far instance.
  const auto far = plant_disjoint_copies(200, 200, kA, 2000, std::vector<double>{1.0, 0.0}, 0x9d);
  std::vector<std::string> sweep;
  std::optional<std::size_t> first_q;
  for (const std::size_t q : {2, 4, 8, 16, 32, 64}) {
    const auto f = freeness_tester(far.matrix, {q, 1000, derive_seed(0x9e, q), {kA}}).frequency();
    if (!first_q && f >= Rational(2, 3)) first_q = q;
    sweep.push_back(fmt::format("q={}:{:.3f}", q, f.to_double()));
  }
  const bool pass = free_bad == 0 && free_rejections == 0 && tiled.frequency() == Rational(1);
  return {pass, fmt::format("free corpus rejections {}/200000 (free check violations {}); tiling "
                            "frequency {} = {:.4f}; reported sweep on planted {} copies, n=200: {} "
                            "(first q with >= 2/3: {})",
                            free_rejections, free_bad, tiled.frequency().str(),
                            tiled.frequency().to_double(), far.packing.size(), fmt::join(sweep, " "),
                            first_q ? std::to_string(*first_q) : "none")};
}

// 10. max packing <= min hitting set <= s t greedy.
Verdict weak_duality() {
  std::size_t instances = 0, skipped = 0, bad = 0;
  for (std::uint64_t k = 0; k < 300; ++k) {
    CounterRng rng(derive_seed(0x10a, k));
    const std::size_t m = 3 + rng.uniform(8), n = 3 + rng.uniform(8);
    const std::size_t s = 1 + rng.uniform(2), t = 1 + rng.uniform(3);
    const auto mat = random_binary(m, n, 0.2 + 0.6 * rng.unit(), derive_seed(0x10b, k));
    const auto a = random_pattern(s, t, rng);
    if (count_copies(mat, a).value > 5000 || count_copies(mat, a).value == 0) {
      ++skipped;
      continue;
    }
    ++instances;
    const auto greedy = greedy_maximal_packing(mat, a).size();
    const auto pack = exact_max_packing(mat, a).size();
    const auto hit = exact_min_hitting_set(mat, a).entries.size();
    if (!(pack <= hit && hit <= s * t * greedy && greedy <= pack)) ++bad;
  }
  return {bad == 0 && instances > 0,
          fmt::format("{} instances checked ({} skipped: zero or > 5000 copies), {} violations",
                      instances, skipped, bad)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  bool strict = false;
  app.add_option("--only", only, "Run only these criteria");
  app.add_flag("--strict", strict, "Exit 1 when any criterion fails");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"oracle-equivalence", oracle_equivalence}, {"lb-identities", lb_identities},
      {"gap-law", gap_law},                       {"behrend-validity", behrend_validity},
      {"partition-check", partition_check},       {"repair-soundness", repair_soundness},
      {"separator-validity", separator_validity}, {"clique-bijection", clique_bijection},
      {"tester-extremes", tester_extremes},       {"weak-duality", weak_duality},
  };
  int failed = 0, errors = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::ranges::find(only, id) == only.end()) continue;
    const auto& [name, run] = criteria[i];
    const auto t0 = Clock::now();
    try {
      const auto v = run();
      failed += v.pass ? 0 : 1;
      fmt::print("{} {} {} [{:.1f}s] {}\n", v.pass ? "PASS" : "FAIL", id, name, seconds_since(t0), v.detail);
    } catch (const std::exception& e) {
      ++errors;
      fmt::print("FAIL {} {} error: {}\n", id, name, e.what());
    }
    std::fflush(stdout);
  }
  return errors > 0 || (strict && failed > 0) ? 1 : 0;
}
