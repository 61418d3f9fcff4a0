#include "removal/packing.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>

#include "removal/bitset.hpp"
#include "removal/counting.hpp"
#include "removal/errors.hpp"
#include "removal/rng.hpp"

namespace removal {
namespace {

std::size_t cell_id(const Cell& c, std::size_t n) { return (c.row - 1) * n + (c.col - 1); }

/// All copies, refusing once there are more than `cap`.
std::vector<SubmatrixIndex> copies_up_to(const DenseMatrix& matrix, const Pattern& pattern,
                                         std::size_t cap, const Limits& limits,
                                         const char* who) {
  std::vector<SubmatrixIndex> out;
  for_each_copy(
      matrix, pattern,
      [&](const SubmatrixIndex& idx) {
        if (out.size() >= cap) {
          throw BudgetExceeded(std::string(who) + ": exact solver refused, more than " +
                               std::to_string(cap) + " copies");
        }
        out.push_back(idx);
        return true;
      },
      limits);
  return out;
}

/// Copies as sorted lists of dense entry ids.
std::vector<std::vector<std::size_t>> entry_lists(const std::vector<SubmatrixIndex>& copies,
                                                  std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(copies.size());
  for (const auto& c : copies) {
    std::vector<std::size_t> ids;
    for (const auto& cell : c.cells()) ids.push_back(cell_id(cell, n));
    out.push_back(std::move(ids));
  }
  return out;
}

/// Branch-and-bound maximum independent set in the conflict graph of one
/// connected component. Copies conflict iff they share an entry. Upper bounds:
/// the cells carrying symbol b that candidates use, divided by the number of
/// b's in the pattern (a packing spends that many such cells per copy); and a
/// greedy clique cover of the conflict graph.
class PackingSearch {
 public:
  PackingSearch(const std::vector<std::vector<std::size_t>>& entries,
                const std::vector<std::size_t>& members, const std::vector<Bitset>& conflicts,
                std::vector<std::vector<std::size_t>> symbol_positions, std::uint64_t& nodes, std::uint64_t node_budget)
      : entries_(entries),
        members_(members),
        conflicts_(conflicts),
        groups_(std::move(symbol_positions)),
        nodes_(nodes),
        node_budget_(node_budget) {}

  std::vector<std::size_t> solve() {
    Bitset cand(conflicts_.size());
    for (const auto v : members_) cand.set(v);
    // Greedy incumbent in index (= lexicographic) order.
    Bitset left = cand;
    for (std::size_t v = left.first(); v < left.size(); v = left.next(v + 1)) {
      best_.push_back(v);
      left.subtract(conflicts_[v]);
    }
    std::vector<std::size_t> current;
    recurse(cand, current);
    return best_;
  }

 private:
  std::size_t bound(const Bitset& cand) {
    std::size_t best = cand.count();
    for (const auto& group : groups_) {
      if (best == 0) break;
      ++stamp_;
      std::size_t distinct = 0;
      cand.for_each([&](std::size_t v) {
        for (const auto p : group) {
          const std::size_t e = entries_[v][p];
          if (seen_.size() <= e) seen_.resize(e + 1, 0);
          if (seen_[e] != stamp_) {
            seen_[e] = stamp_;
            ++distinct;
          }
        }
      });
      best = std::min(best, distinct / group.size());
    }
    return best;
  }

  // Greedy partition of cand into conflict cliques; a packing takes at most
  // one copy per clique.
  std::size_t clique_cover(const Bitset& cand) const {
    Bitset left = cand;
    std::size_t cliques = 0;
    for (std::size_t v = left.first(); v < left.size(); v = left.first()) {
      ++cliques;
      left.reset(v);
      Bitset room = left;
      room &= conflicts_[v];
      for (std::size_t u = room.first(); u < room.size(); u = room.next(u + 1)) {
        left.reset(u);
        room &= conflicts_[u];
      }
    }
    return cliques;
  }

  void recurse(Bitset& cand, std::vector<std::size_t>& current) {
    if (++nodes_ > node_budget_) {
      throw BudgetExceeded("exact packing exceeded the node budget of " +
                           std::to_string(node_budget_));
    }
    if (cand.first() == cand.size()) {
      if (current.size() > best_.size()) best_ = current;
      return;
    }
    if (current.size() + bound(cand) <= best_.size()) return;
    if (current.size() + clique_cover(cand) <= best_.size()) return;
    // Branch on the copy with fewest live conflicts; an isolated copy is
    // always taken.
    std::size_t v = cand.size(), degree = cand.size();
    cand.for_each([&](std::size_t u) {
      const std::size_t d = conflicts_[u].and_count(cand);
      if (d < degree) {
        degree = d;
        v = u;
      }
    });
    {
      Bitset with = cand;
      with.subtract(conflicts_[v]);
      with.reset(v);
      current.push_back(v);
      recurse(with, current);
      current.pop_back();
    }
    if (degree == 0) return;
    cand.reset(v);
    recurse(cand, current);
    cand.set(v);
  }

  const std::vector<std::vector<std::size_t>>& entries_;
  const std::vector<std::size_t>& members_;
  const std::vector<Bitset>& conflicts_;
  std::vector<std::vector<std::size_t>> groups_;
  std::uint64_t& nodes_;
  std::uint64_t node_budget_;
  std::vector<std::size_t> best_;
  std::vector<std::uint32_t> seen_;
  std::uint32_t stamp_ = 0;
};

}  // namespace

Packing greedy_maximal_packing(const DenseMatrix& matrix, const Pattern& pattern,
                               const Limits& limits) {
  Packing out{{pattern, {}, true}, true};
  Bitset used(matrix.rows() * matrix.cols());
  for_each_copy(
      matrix, pattern,
      [&](const SubmatrixIndex& idx) {
        const auto cells = idx.cells();
        for (const auto& c : cells) {
          if (used.test(cell_id(c, matrix.cols()))) return true;
        }
        for (const auto& c : cells) used.set(cell_id(c, matrix.cols()));
        out.copy_set.copies.push_back(idx);
        return true;
      },
      limits);
  return out;
}

Packing exact_max_packing(const DenseMatrix& matrix, const Pattern& pattern,
                          const Limits& limits) {
  const auto copies =
      copies_up_to(matrix, pattern, limits.exact_copy_cap, limits, "exact_max_packing");
  const auto entries = entry_lists(copies, matrix.cols());
  const std::size_t k = copies.size();

  std::vector<Bitset> conflicts(k, Bitset(k));
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_entry;
  for (std::size_t v = 0; v < k; ++v) {
    for (const auto e : entries[v]) by_entry[e].push_back(v);
  }
  for (const auto& [e, users] : by_entry) {
    for (const auto u : users) {
      for (const auto w : users) {
        if (u != w) conflicts[u].set(w);
      }
    }
  }

  std::map<Symbol, std::vector<std::size_t>> by_symbol;
  const auto pe = pattern.entries();
  for (std::size_t p = 0; p < pe.size(); ++p) by_symbol[pe[p]].push_back(p);
  std::vector<std::vector<std::size_t>> groups;
  for (auto& [sym, ps] : by_symbol) groups.push_back(std::move(ps));

  // Connected components are solved independently.
  std::vector<std::size_t> component(k, k);
  std::vector<std::size_t> chosen;
  std::uint64_t nodes = 0;
  for (std::size_t root = 0; root < k; ++root) {
    if (component[root] != k) continue;
    std::vector<std::size_t> members{root};
    component[root] = root;
    for (std::size_t q = 0; q < members.size(); ++q) {
      conflicts[members[q]].for_each([&](std::size_t w) {
        if (component[w] == k) {
          component[w] = root;
          members.push_back(w);
        }
      });
    }
    std::ranges::sort(members);
    PackingSearch search(entries, members, conflicts, groups, nodes,
                         limits.node_budget);
    const auto best = search.solve();
    chosen.insert(chosen.end(), best.begin(), best.end());
  }
  std::ranges::sort(chosen);

  Packing out{{pattern, {}, true}, true};
  for (const auto v : chosen) out.copy_set.copies.push_back(copies[v]);
  return out;
}

namespace {

/// Minimum hitting set of one connected group of copies, by branching on
/// the entries of the most constrained unhit copy.
std::vector<std::size_t> hitting_component(const std::vector<std::vector<std::size_t>>& entries,
                                           std::size_t universe, std::uint64_t node_budget,
                                           std::uint64_t& nodes) {
  const std::size_t k = entries.size();
  std::vector<std::vector<std::size_t>> users(universe);
  for (std::size_t v = 0; v < k; ++v) {
    for (const auto e : entries[v]) users[e].push_back(v);
  }

  // Greedy max-coverage incumbent.
  std::vector<std::size_t> best;
  {
    std::vector<char> hit(k, 0);
    std::size_t remaining = k;
    while (remaining > 0) {
      std::size_t pick = 0, gain = 0;
      for (std::size_t e = 0; e < universe; ++e) {
        std::size_t g = 0;
        for (const auto v : users[e]) g += hit[v] ? 0 : 1;
        if (g > gain) {
          gain = g;
          pick = e;
        }
      }
      best.push_back(pick);
      for (const auto v : users[pick]) {
        if (!hit[v]) {
          hit[v] = 1;
          --remaining;
        }
      }
    }
  }

  std::vector<int> hit_count(k, 0);
  std::vector<char> forbidden(universe, 0);
  std::vector<std::size_t> chosen;
  std::vector<char> used(universe, 0);

  auto lower_bound = [&]() {
    // Unhit copies with no allowed entry in common each need their own
    // entry; forbidden entries cannot be picked, so they do not conflict.
    std::size_t lb = 0;
    std::vector<std::size_t> touched;
    for (std::size_t v = 0; v < k; ++v) {
      if (hit_count[v] > 0) continue;
      bool free = true;
      for (const auto e : entries[v]) free = free && (forbidden[e] || !used[e]);
      if (!free) continue;
      ++lb;
      for (const auto e : entries[v]) {
        if (forbidden[e]) continue;
        used[e] = 1;
        touched.push_back(e);
      }
    }
    for (const auto e : touched) used[e] = 0;
    return lb;
  };

  std::function<void()> recurse = [&]() {
    if (++nodes > node_budget) {
      throw BudgetExceeded("exact hitting set exceeded the node budget of " +
                           std::to_string(node_budget));
    }
    // Most constrained unhit copy.
    std::size_t pick = k, allowed_min = SIZE_MAX;
    for (std::size_t v = 0; v < k; ++v) {
      if (hit_count[v] > 0) continue;
      std::size_t allowed = 0;
      for (const auto e : entries[v]) allowed += forbidden[e] ? 0 : 1;
      if (allowed < allowed_min) {
        allowed_min = allowed;
        pick = v;
      }
    }
    if (pick == k) {
      if (chosen.size() < best.size()) best = chosen;
      return;
    }
    if (allowed_min == 0) return;
    if (chosen.size() + lower_bound() >= best.size()) return;

    std::vector<std::size_t> options;
    for (const auto e : entries[pick]) {
      if (!forbidden[e]) options.push_back(e);
    }
    auto unhit_users = [&](std::size_t e) {
      std::size_t g = 0;
      for (const auto v : users[e]) g += hit_count[v] == 0 ? 1 : 0;
      return g;
    };
    std::ranges::stable_sort(options, [&](std::size_t a, std::size_t b) {
      return unhit_users(a) > unhit_users(b);
    });
    std::vector<std::size_t> newly_forbidden;
    for (const auto e : options) {
      chosen.push_back(e);
      for (const auto v : users[e]) ++hit_count[v];
      recurse();
      for (const auto v : users[e]) --hit_count[v];
      chosen.pop_back();
      // Later branches must not use e: that case was just covered.
      forbidden[e] = 1;
      newly_forbidden.push_back(e);
    }
    for (const auto e : newly_forbidden) forbidden[e] = 0;
  };
  recurse();
  return best;
}

}  // namespace

HittingSet exact_min_hitting_set(const DenseMatrix& matrix, const Pattern& pattern,
                                 const Limits& limits) {
  const auto copies =
      copies_up_to(matrix, pattern, limits.exact_copy_cap, limits, "exact_min_hitting_set");
  const auto entries = entry_lists(copies, matrix.cols());
  const std::size_t universe = matrix.rows() * matrix.cols();

  // Copies sharing an entry are linked; groups are solved independently.
  std::vector<std::size_t> parent(copies.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = root(parent[v]);
  };
  std::vector<std::size_t> owner(universe, copies.size());
  for (std::size_t v = 0; v < copies.size(); ++v) {
    for (const auto e : entries[v]) {
      if (owner[e] == copies.size()) owner[e] = v;
      else parent[root(v)] = root(owner[e]);
    }
  }
  std::map<std::size_t, std::vector<std::vector<std::size_t>>> groups;
  for (std::size_t v = 0; v < copies.size(); ++v) groups[root(v)].push_back(entries[v]);

  std::uint64_t nodes = 0;
  std::vector<std::size_t> best;
  for (const auto& [r, group] : groups) {
    const auto part = hitting_component(group, universe, limits.node_budget, nodes);
    best.insert(best.end(), part.begin(), part.end());
  }

  std::ranges::sort(best);
  HittingSet out;
  for (const auto e : best) out.entries.push_back({e / matrix.cols() + 1, e % matrix.cols() + 1});
  return out;
}

DenseMatrix apply_edits(const DenseMatrix& matrix, std::span<const Edit> edits) {
  DenseMatrix out = matrix;
  for (const auto& e : edits) out.set(e.row, e.col, e.symbol);
  return out;
}

namespace {

/// First copy of any family member in lexicographic order, members in order.
std::optional<SubmatrixIndex> first_family_copy(const DenseMatrix& matrix,
                                                std::span<const Pattern> family,
                                                const Limits& limits) {
  for (const auto& p : family) {
    if (p.rows() > matrix.rows() || p.cols() > matrix.cols()) continue;
    if (auto c = first_copy(matrix, p, limits)) return c;
  }
  return std::nullopt;
}

/// Greedy disjoint packing over copies of all family members.
std::size_t family_packing_bound(const DenseMatrix& matrix, std::span<const Pattern> family,
                                 const Limits& limits) {
  Bitset used(matrix.rows() * matrix.cols());
  std::size_t size = 0;
  for (const auto& p : family) {
    if (p.rows() > matrix.rows() || p.cols() > matrix.cols()) continue;
    for_each_copy(
        matrix, p,
        [&](const SubmatrixIndex& idx) {
          const auto cells = idx.cells();
          for (const auto& c : cells) {
            if (used.test(cell_id(c, matrix.cols()))) return true;
          }
          for (const auto& c : cells) used.set(cell_id(c, matrix.cols()));
          ++size;
          return true;
        },
        limits);
  }
  return size;
}

std::string matrix_key(const DenseMatrix& m) {
  return {m.entries().begin(), m.entries().end()};
}

}  // namespace

EditDistance exact_edit_distance_to_freeness(const DenseMatrix& matrix,
                                             std::span<const Pattern> family,
                                             const Limits& limits) {
  if (matrix.rows() > limits.edit_max_dim || matrix.cols() > limits.edit_max_dim) {
    throw BudgetExceeded("exact edit distance is capped at " +
                         std::to_string(limits.edit_max_dim) + "x" +
                         std::to_string(limits.edit_max_dim) + " matrices");
  }
  if (family.empty()) return {0, {{}, true}};
  for (const auto& p : family) {
    if (p.rows() > limits.max_pattern_dim || p.cols() > limits.max_pattern_dim) {
      throw BudgetExceeded("family member exceeds the pattern size guardrail");
    }
  }
  const unsigned sigma = matrix.alphabet().size();
  const std::size_t n = matrix.cols();
  std::uint64_t nodes = 0;
  // Failed (matrix, remaining budget) states; a failure with budget b also
  // rules out every smaller budget.
  std::unordered_map<std::string, std::size_t> failed;
  std::vector<char> edited(matrix.rows() * n, 0);
  std::vector<Edit> path;

  std::function<bool(DenseMatrix&, std::size_t)> search = [&](DenseMatrix& work,
                                                               std::size_t budget) -> bool {
    if (++nodes > limits.node_budget) {
      throw BudgetExceeded("exact edit distance exceeded the node budget of " +
                           std::to_string(limits.node_budget));
    }
    const auto copy = first_family_copy(work, family, limits);
    if (!copy) return true;
    if (budget == 0) return false;
    const std::string key = matrix_key(work);
    if (auto it = failed.find(key); it != failed.end() && it->second >= budget) return false;
    if (family_packing_bound(work, family, limits) > budget) {
      failed[key] = std::max(failed[key], budget);
      return false;
    }
    // Some entry of this copy must end up different; entries already
    // rewritten on this path keep their final value.
    for (const auto& cell : copy->cells()) {
      const std::size_t id = cell_id(cell, n);
      if (edited[id]) continue;
      const Symbol old = work(cell.row, cell.col);
      for (unsigned v = 0; v < sigma; ++v) {
        if (v == old) continue;
        work.set(cell.row, cell.col, static_cast<Symbol>(v));
        edited[id] = 1;
        path.push_back({cell.row, cell.col, static_cast<Symbol>(v)});
        const bool ok = search(work, budget - 1);
        if (ok) return true;
        path.pop_back();
        edited[id] = 0;
        work.set(cell.row, cell.col, old);
      }
    }
    failed[key] = std::max(failed[key], budget);
    return false;
  };

  const std::size_t max_depth = matrix.rows() * matrix.cols();
  for (std::size_t depth = 0; depth <= max_depth; ++depth) {
    DenseMatrix work = matrix;
    path.clear();
    std::ranges::fill(edited, 0);
    if (search(work, depth)) {
      std::ranges::sort(path, [](const Edit& a, const Edit& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
      });
      EditCertificate cert{path, false};
      const DenseMatrix result = apply_edits(matrix, cert.edits);
      cert.free = !first_family_copy(result, family, limits).has_value();
      return {path.size(), cert};
    }
  }
  throw InputError("no family-free matrix is reachable: the family is unavoidable");
}

PlantedInstance plant_disjoint_copies(std::size_t m, std::size_t n, const Pattern& pattern,
                                      std::size_t target, std::span<const double> background,
                                      std::uint64_t seed, std::size_t retry_factor) {
  const std::size_t s = pattern.rows();
  const std::size_t t = pattern.cols();
  if (s > m || t > n) throw InputError("plant: pattern does not fit");
  if (target * s * t > m * n) {
    throw InputError("plant: " + std::to_string(target) + " disjoint " + std::to_string(s) + "x" +
                     std::to_string(t) + " copies cannot fit in " + std::to_string(m) + "x" +
                     std::to_string(n));
  }
  if (background.empty()) throw InputError("plant: empty background distribution");
  const double total = std::accumulate(background.begin(), background.end(), 0.0);
  if (!(total > 0.0)) throw InputError("plant: background weights must have positive sum");
  for (const double w : background) {
    if (w < 0.0) throw InputError("plant: negative background weight");
  }
  const unsigned sigma = std::max<unsigned>(
      {pattern.alphabet().size(), static_cast<unsigned>(background.size()), 2U});
  const Alphabet alphabet(sigma);

  CounterRng rng(seed, 0);
  std::vector<Symbol> entries(m * n);
  for (auto& e : entries) {
    const double u = rng.unit() * total;
    double acc = 0.0;
    std::size_t k = 0;
    for (; k + 1 < background.size(); ++k) {
      acc += background[k];
      if (u < acc) break;
    }
    e = static_cast<Symbol>(k);
  }
  DenseMatrix matrix(m, n, alphabet, std::move(entries));

  CounterRng placer(seed, 1);
  Bitset used(m * n);
  std::vector<SubmatrixIndex> placed;
  const std::size_t max_tries = retry_factor * std::max<std::size_t>(target, 1);
  std::size_t tries = 0;
  while (placed.size() < target) {
    if (++tries > max_tries) {
      throw InputError("plant: placed only " + std::to_string(placed.size()) + " of " +
                       std::to_string(target) + " copies after " + std::to_string(max_tries) +
                       " attempts");
    }
    SubmatrixIndex idx{placer.subset(m, s), placer.subset(n, t)};
    const auto cells = idx.cells();
    bool clash = false;
    for (const auto& c : cells) clash = clash || used.test(cell_id(c, n));
    if (clash) continue;
    for (const auto& c : cells) used.set(cell_id(c, n));
    for (std::size_t a = 1; a <= s; ++a) {
      for (std::size_t b = 1; b <= t; ++b) {
        matrix.set(idx.rows[a - 1], idx.cols[b - 1], pattern(a, b));
      }
    }
    placed.push_back(std::move(idx));
  }
  std::ranges::sort(placed);
  return {std::move(matrix), Packing{{pattern, std::move(placed), true}, false}};
}

bool hits_every_copy(const DenseMatrix& matrix, const Pattern& pattern,
                     const HittingSet& hitting, const Limits& limits) {
  Bitset marked(matrix.rows() * matrix.cols());
  for (const auto& c : hitting.entries) marked.set(cell_id(c, matrix.cols()));
  bool ok = true;
  for_each_copy(
      matrix, pattern,
      [&](const SubmatrixIndex& idx) {
        bool hit = false;
        for (const auto& c : idx.cells()) hit = hit || marked.test(cell_id(c, matrix.cols()));
        ok = hit;
        return ok;
      },
      limits);
  return ok;
}

bool is_maximal_packing(const DenseMatrix& matrix, const Pattern& pattern,
                        std::span<const SubmatrixIndex> copies, const Limits& limits) {
  Bitset used(matrix.rows() * matrix.cols());
  for (const auto& c : copies) {
    for (const auto& cell : c.cells()) used.set(cell_id(cell, matrix.cols()));
  }
  bool maximal = true;
  for_each_copy(
      matrix, pattern,
      [&](const SubmatrixIndex& idx) {
        bool touches = false;
        for (const auto& c : idx.cells()) touches = touches || used.test(cell_id(c, matrix.cols()));
        maximal = touches;
        return maximal;
      },
      limits);
  return maximal;
}

bool verify_packing(const DenseMatrix& host, const Packing& packing) {
  return packing.copy_set.disjoint && verify_copy_set(host, packing.copy_set);
}

}  // namespace removal
