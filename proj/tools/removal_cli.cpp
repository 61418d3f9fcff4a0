// Command-line front end. Every subcommand prints one JSON document (or CSV
// with --format csv) and exits 0 on success, 1 when the tester rejects,
// 2 on bad input and 3 when a guardrail refuses the work.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "removal/constructions.hpp"
#include "removal/counting.hpp"
#include "removal/errors.hpp"
#include "removal/experiment.hpp"
#include "removal/graph.hpp"
#include "removal/packing.hpp"
#include "removal/procedures.hpp"
#include "removal/regularity.hpp"
#include "removal/tester.hpp"

using json = nlohmann::ordered_json;
using namespace removal;

namespace {

constexpr int kExitReject = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct Globals {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  std::string out;
  std::string format = "json";
};

// ---- JSON conversions ------------------------------------------------------

json to_json(const SubmatrixIndex& idx) { return {{"rows", idx.rows}, {"cols", idx.cols}}; }

json to_json(const std::vector<SubmatrixIndex>& copies) {
  json a = json::array();
  for (const auto& c : copies) a.push_back(to_json(c));
  return a;
}

json to_json(const SeparatorSet& sep) { return {{"rows", sep.rows}, {"cols", sep.cols}}; }

json to_json(const Clustering& c) {
  return {{"axis", to_string(c.axis)},
          {"delta", c.delta.str()},
          {"r", c.r()},
          {"clusters", c.clusters},
          {"error_cluster", c.error_cluster}};
}

json to_json(const std::vector<Edit>& edits) {
  json a = json::array();
  for (const auto& e : edits) a.push_back({{"row", e.row}, {"col", e.col}, {"symbol", e.symbol}});
  return a;
}

json to_json(const std::vector<FamilyCopy>& copies) {
  json a = json::array();
  for (const auto& c : copies) {
    a.push_back({{"member", c.member}, {"rows", c.copy.rows}, {"cols", c.copy.cols}});
  }
  return a;
}

// ---- inputs ----------------------------------------------------------------

std::vector<SubmatrixIndex> read_copies_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_copies_jsonl(in);
}

std::vector<Pattern> read_family(const std::vector<std::string>& paths, bool closure) {
  std::vector<Pattern> family;
  for (const auto& p : paths) family.push_back(read_matrix_file(p));
  return closure ? row_permutation_closure(family) : family;
}

Packing packing_from(const DenseMatrix& m, const Pattern& a, const std::string& path,
                     const Limits& limits) {
  if (path.empty()) return greedy_maximal_packing(m, a, limits);
  Packing p{CopySet{a, read_copies_file(path), true}, false};
  if (!verify_packing(m, p)) throw InputError("packing in " + path + " does not verify");
  return p;
}

SeparatorSet parse_separators(const std::vector<std::size_t>& rows,
                              const std::vector<std::size_t>& cols) {
  return {rows, cols};
}

// ---- output ----------------------------------------------------------------

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

/// A "table" array of flat objects becomes a CSV table; otherwise the
/// top-level fields become key,value lines (non-scalars as compact JSON).
std::string render_csv(const json& doc) {
  std::ostringstream out;
  if (doc.contains("table") && doc["table"].is_array() && !doc["table"].empty()) {
    const auto& rows = doc["table"];
    bool first = true;
    for (const auto& [k, v] : rows.front().items()) {
      out << (first ? "" : ",") << k;
      first = false;
    }
    out << '\n';
    for (const auto& row : rows) {
      first = true;
      for (const auto& [k, v] : row.items()) {
        out << (first ? "" : ",") << csv_escape(scalar_text(v));
        first = false;
      }
      out << '\n';
    }
    return out.str();
  }
  out << "key,value\n";
  for (const auto& [k, v] : doc.items()) out << k << ',' << csv_escape(scalar_text(v)) << '\n';
  return out.str();
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw InputError("cannot write " + g.out);
  f << text;
}

void emit(const Globals& g, const json& doc) {
  emit(g, g.format == "csv" ? render_csv(doc) : doc.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

std::string copies_text(const std::vector<SubmatrixIndex>& copies) {
  std::ostringstream s;
  write_copies_jsonl(s, copies);
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix removal: counting, packing, separators, repair and testing"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--budget", g.budget, "Search-node cap for exact solvers");
  app.add_option("--out", g.out, "Write the report here instead of stdout");
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  int exit_code = 0;
  Limits limits;
  auto lim = [&]() -> const Limits& {
    if (g.budget) limits.node_budget = *g.budget;
    return limits;
  };

  std::string matrix_path, pattern_path, packing_path, axis_text = "row", rule = "lowest";
  std::vector<std::string> family_paths;
  std::vector<std::size_t> row_seps, col_seps, ms;
  std::size_t j = 1, r_max = 1024, k = 2, m = 0, n = 0, target = 0, q = 0, trials = 1;
  std::uint64_t samples = 1000, pattern_samples = 64;
  std::string delta_text = "1/5", eps_text = "1/4", width_text = "0", const_delta;
  std::string matrix_out, copies_out, partition_path, cluster_delta, background = "1,0";
  bool exact = false, closure = false;

  auto add_mp = [&](CLI::App* c) {
    c->add_option("matrix", matrix_path, "Matrix file")->required();
    c->add_option("pattern", pattern_path, "Pattern file")->required();
  };

  // count
  auto* c_count = app.add_subcommand("count", "Exact number of pattern copies");
  add_mp(c_count);
  c_count->add_option("--row-seps", row_seps, "Row separators (count separated copies)");
  c_count->add_option("--col-seps", col_seps, "Column separators");
  c_count->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto a = read_matrix_file(pattern_path);
    json doc{{"m", mat.rows()}, {"n", mat.cols()}};
    if (!row_seps.empty() || !col_seps.empty()) {
      const auto sep = parse_separators(row_seps, col_seps);
      doc["separators"] = to_json(sep);
      doc["count"] = count_separated_copies(mat, a, sep, lim()).str();
    } else {
      doc["count"] = count_copies(mat, a, lim()).str();
    }
    emit(g, doc);
  });

  // density
  auto* c_density = app.add_subcommand("density", "Monte-Carlo copy density");
  add_mp(c_density);
  c_density->add_option("--samples", samples)->capture_default_str();
  c_density->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto a = read_matrix_file(pattern_path);
    const auto est = estimate_copy_density(mat, a, samples, g.seed);
    emit(g, json{{"hits", est.hits},
                 {"samples", est.samples},
                 {"seed", est.seed},
                 {"estimate", est.point_estimate().str()},
                 {"estimate_decimal", est.point_estimate().to_double()}});
  });

  // widest
  auto* c_widest = app.add_subcommand("widest", "Copy of maximum (i,j)-width");
  add_mp(c_widest);
  c_widest->add_option("--axis", axis_text)->check(CLI::IsMember({"row", "col"}));
  c_widest->add_option("--j", j, "Gap between index j and j+1")->capture_default_str();
  c_widest->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto a = read_matrix_file(pattern_path);
    const auto w = widest_copy(mat, a, parse_axis(axis_text), j, lim());
    json doc{{"axis", axis_text}, {"j", j}, {"found", w.has_value()}};
    if (w) {
      doc["width"] = w->width.str();
      doc["copy"] = to_json(w->copy);
    }
    emit(g, doc);
  });

  // pack
  auto* c_pack = app.add_subcommand("pack", "Disjoint packing of copies");
  add_mp(c_pack);
  c_pack->add_flag("--exact", exact, "Maximum packing by branch-and-bound");
  c_pack->add_option("--copies-out", copies_out, "Write the packing as JSONL");
  c_pack->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto a = read_matrix_file(pattern_path);
    const auto p = exact ? exact_max_packing(mat, a, lim()) : greedy_maximal_packing(mat, a, lim());
    if (!copies_out.empty()) write_text_file(copies_out, copies_text(p.copy_set.copies));
    emit(g, json{{"method", exact ? "exact" : "greedy"},
                 {"size", p.size()},
                 {"maximal", p.maximal},
                 {"copies", to_json(p.copy_set.copies)}});
  });

  // hit
  auto* c_hit = app.add_subcommand("hit", "Minimum hitting set of the copies");
  add_mp(c_hit);
  c_hit->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto a = read_matrix_file(pattern_path);
    const auto h = exact_min_hitting_set(mat, a, lim());
    json cells = json::array();
    for (const auto& c : h.entries) cells.push_back({c.row, c.col});
    emit(g, json{{"size", h.entries.size()}, {"entries", cells}});
  });

  // distance
  auto* c_dist = app.add_subcommand("distance", "Exact edit distance to family-freeness");
  c_dist->add_option("matrix", matrix_path)->required();
  c_dist->add_option("family", family_paths, "Pattern files")->required();
  c_dist->add_flag("--closure", closure, "Add all row permutations of the patterns");
  c_dist->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto fam = read_family(family_paths, closure);
    const auto d = exact_edit_distance_to_freeness(mat, fam, lim());
    emit(g, json{{"distance", d.distance},
                 {"free", d.certificate.free},
                 {"edits", to_json(d.certificate.edits)}});
  });

  // plant
  auto* c_plant = app.add_subcommand("plant", "Random matrix with planted disjoint copies");
  c_plant->add_option("pattern", pattern_path)->required();
  c_plant->add_option("--m", m)->required();
  c_plant->add_option("--n", n)->required();
  c_plant->add_option("--target", target)->required();
  c_plant->add_option("--background", background, "Symbol weights, comma separated")
      ->capture_default_str();
  c_plant->add_option("--matrix-out", matrix_out);
  c_plant->add_option("--copies-out", copies_out);
  c_plant->callback([&] {
    const auto a = read_matrix_file(pattern_path);
    std::vector<double> w;
    std::stringstream bs(background);
    for (std::string tok; std::getline(bs, tok, ',');) {
      try {
        w.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw InputError("bad background weight '" + tok + "'");
      }
    }
    const auto inst = plant_disjoint_copies(m, n, a, target, w, g.seed);
    const auto text = serialize_matrix(inst.matrix);
    if (!matrix_out.empty()) write_text_file(matrix_out, text);
    if (!copies_out.empty()) write_text_file(copies_out, copies_text(inst.packing.copy_set.copies));
    emit(g, json{{"planted", inst.packing.size()},
                 {"matrix", text},
                 {"copies", to_json(inst.packing.copy_set.copies)}});
  });

  // cluster
  auto* c_cluster = app.add_subcommand("cluster", "Greedy (delta, r)-clustering of rows or columns");
  c_cluster->add_option("matrix", matrix_path)->required();
  c_cluster->add_option("--axis", axis_text)->check(CLI::IsMember({"row", "col"}));
  c_cluster->add_option("--delta", delta_text)->capture_default_str();
  c_cluster->add_option("--r-max", r_max)->capture_default_str();
  c_cluster->add_option("--rule", rule)->check(CLI::IsMember({"lowest", "farthest"}));
  c_cluster->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto c = clustering(mat, parse_axis(axis_text), Rational::parse(delta_text), r_max,
                              rule == "lowest" ? CenterRule::kLowestIndex
                                               : CenterRule::kFarthestFirst);
    json doc{{"success", c.has_value()}};
    if (c) doc["clustering"] = to_json(*c);
    emit(g, doc);
  });

  // partition-verify
  auto* c_part = app.add_subcommand("partition-verify", "Block homogeneity of a partition");
  c_part->add_option("matrix", matrix_path)->required();
  c_part->add_option("--delta", delta_text)->capture_default_str();
  c_part->add_option("--partition", partition_path,
                     "JSON {\"row_classes\": [[...]], \"col_classes\": [[...]]}");
  c_part->add_option("--cluster-delta", cluster_delta,
                     "Without --partition: cluster both axes at this delta");
  c_part->add_option("--r-max", r_max)->capture_default_str();
  c_part->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    BlockPartition part;
    if (!partition_path.empty()) {
      std::ifstream in(partition_path);
      if (!in) throw InputError("cannot open " + partition_path);
      json pj;
      try {
        pj = json::parse(in);
        part.row_classes = pj.at("row_classes").get<std::vector<std::vector<std::size_t>>>();
        part.col_classes = pj.at("col_classes").get<std::vector<std::vector<std::size_t>>>();
      } catch (const json::exception& e) {
        throw InputError(std::string("partition file: ") + e.what());
      }
    } else {
      const auto cd = Rational::parse(cluster_delta.empty() ? delta_text : cluster_delta);
      const auto rows = clustering(mat, Axis::kRow, cd, r_max);
      const auto cols = clustering(mat, Axis::kCol, cd, r_max);
      if (!rows || !cols) throw InputError("clustering failed; pass --partition or raise --r-max");
      part = clusterings_to_partition(*rows, *cols);
    }
    const auto rep = verify_partition(mat, part, Rational::parse(delta_text));
    json blocks = json::array();
    for (const auto& b : rep.blocks) {
      blocks.push_back({{"row_class", b.row_class},
                        {"col_class", b.col_class},
                        {"value", b.value},
                        {"size", b.size},
                        {"mismatches", b.mismatches},
                        {"homogeneous", b.homogeneous}});
    }
    emit(g, json{{"delta", rep.delta.str()},
                 {"homogeneous_fraction", rep.homogeneous_fraction.str()},
                 {"row_classes", part.row_classes.size()},
                 {"col_classes", part.col_classes.size()},
                 {"table", blocks}});
  });

  // dichotomy
  auto* c_dich = app.add_subcommand("dichotomy", "Clustering or low-density witness");
  c_dich->add_option("matrix", matrix_path)->required();
  c_dich->add_option("--k", k)->capture_default_str();
  c_dich->add_option("--delta", delta_text)->capture_default_str();
  c_dich->add_option("--r-max", r_max)->capture_default_str();
  c_dich->add_option("--samples", samples)->capture_default_str();
  c_dich->add_option("--patterns", pattern_samples, "Sampled patterns when k > 2")
      ->capture_default_str();
  c_dich->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto rep = dichotomy_probe(mat, k, Rational::parse(delta_text), r_max, samples, g.seed,
                                     pattern_samples, lim());
    json doc{{"k", rep.k},
             {"delta", rep.delta.str()},
             {"clustering_branch", rep.clustering_branch()},
             {"density_branch", rep.density_branch},
             {"sampled_patterns", rep.sampled_patterns}};
    if (rep.rows) doc["rows"] = to_json(*rep.rows);
    if (rep.cols) doc["cols"] = to_json(*rep.cols);
    json dens = json::array();
    for (const auto& d : rep.densities) {
      dens.push_back({{"pattern", serialize_matrix(d.pattern)},
                      {"hits", d.estimate.hits},
                      {"samples", d.estimate.samples},
                      {"estimate", d.estimate.point_estimate().str()}});
    }
    doc["densities"] = dens;
    if (rep.argmin) doc["argmin"] = *rep.argmin;
    emit(g, doc);
  });

  // separate
  auto* c_sep = app.add_subcommand("separate", "Separator extraction from a packing");
  add_mp(c_sep);
  c_sep->add_option("--packing", packing_path, "JSONL packing (default: greedy)");
  c_sep->add_option("--r-max", r_max)->capture_default_str();
  c_sep->add_option("--constant-delta", const_delta);
  c_sep->add_option("--copies-out", copies_out);
  c_sep->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto a = read_matrix_file(pattern_path);
    const auto p = packing_from(mat, a, packing_path, lim());
    SeparationParams params;
    params.r_max = r_max;
    if (!const_delta.empty()) params.constant_delta = Rational::parse(const_delta);
    const auto res = separator_extraction(mat, a, p, params);
    json steps = json::array();
    for (const auto& s : res.audit) {
      steps.push_back({{"axis", to_string(s.axis)},
                       {"index", s.index},
                       {"delta", s.delta.str()},
                       {"delta_saturated", s.delta_saturated},
                       {"clusters", s.clusters},
                       {"good_lines", s.good_lines},
                       {"half", s.half},
                       {"separator", s.separator},
                       {"before", s.before},
                       {"survivors", s.survivors},
                       {"audit_ok", s.audit_ok}});
    }
    json doc{{"status", to_string(res.status)},
             {"failed_step", res.failed_step},
             {"message", res.message},
             {"input_packing", p.size()},
             {"steps", steps}};
    if (res.result) {
      doc["separators"] = to_json(res.result->separators);
      doc["copies"] = to_json(res.result->packing.copy_set.copies);
      doc["verified"] = verify_separated_packing(mat, *res.result);
      if (!copies_out.empty()) {
        write_text_file(copies_out, copies_text(res.result->packing.copy_set.copies));
      }
    }
    emit(g, doc);
  });

  // repair
  auto* c_rep = app.add_subcommand("repair", "Row-permutation repair: edits or disjoint copies");
  c_rep->add_option("matrix", matrix_path)->required();
  c_rep->add_option("family", family_paths, "Pattern files")->required();
  c_rep->add_flag("--closure", closure, "Add all row permutations of the patterns");
  c_rep->add_option("--eps", eps_text)->capture_default_str();
  c_rep->add_option("--r-max", r_max)->capture_default_str();
  c_rep->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto fam = read_family(family_paths, closure);
    const auto res = row_perm_repair(mat, fam, Rational::parse(eps_text), r_max, lim());
    json doc{{"branch", to_string(res.branch)},
             {"clusters", res.clusters},
             {"representatives", res.representatives},
             {"q_packing", res.q_packing},
             {"packing_threshold", res.packing_threshold.str()},
             {"edit_budget", res.edit_budget},
             {"verified", verify_repair(mat, fam, res, lim())}};
    if (res.edits) {
      doc["edits"] = to_json(res.edits->edits);
      doc["free"] = res.edits->free;
    }
    doc["copies"] = to_json(res.copies);
    emit(g, doc);
  });

  // strip-bound
  auto* c_strip = app.add_subcommand("strip-bound", "Copy lower bound in an s-row strip");
  c_strip->add_option("strip", matrix_path)->required();
  c_strip->add_option("pattern", pattern_path)->required();
  c_strip->add_option("--packing", packing_path, "JSONL packing (default: greedy)");
  c_strip->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto a = read_matrix_file(pattern_path);
    const auto p = packing_from(mat, a, packing_path, lim());
    const auto b = strip_split_count(mat, a, p);
    json groups = json::array();
    for (const auto& gr : b.witness.groups) groups.push_back(to_json(gr));
    emit(g, json{{"packing", p.size()},
                 {"lower_bound", b.lower_bound.str()},
                 {"actual", count_copies_in_strip(mat, a, lim()).str()},
                 {"assembled_checked", b.assembled_checked},
                 {"all_checked_match", b.all_checked_match},
                 {"groups", groups}});
  });

  // fold-bound
  auto* c_fold = app.add_subcommand("fold-bound", "Folded-pattern copy bound");
  add_mp(c_fold);
  c_fold->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto a = read_matrix_file(pattern_path);
    const auto r = folding_bound_check(mat, a, lim());
    json doc{{"folded", serialize_matrix(r.folded)},
             {"folded_count", r.folded_count.str()},
             {"actual_count", r.actual_count.str()},
             {"eps_prime", r.eps_prime},
             {"delta", r.delta},
             {"predicted", r.predicted},
             {"holds", r.holds}};
    if (r.predicted_exact) doc["predicted_exact"] = r.predicted_exact->str();
    emit(g, doc);
  });

  // augmented-separate
  auto* c_aug = app.add_subcommand("augmented-separate", "Separators over the augmented alphabet");
  add_mp(c_aug);
  c_aug->add_option("--packing", packing_path, "JSONL packing (default: greedy)");
  c_aug->add_option("--width", width_text, "Minimum collected width")->capture_default_str();
  c_aug->add_option("--matrix-out", matrix_out, "Write the final augmented matrix");
  c_aug->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto a = read_matrix_file(pattern_path);
    const auto p = packing_from(mat, a, packing_path, lim());
    const auto r = augmented_separator_iteration(mat, a, p, Rational::parse(width_text), lim());
    if (!matrix_out.empty()) write_text_file(matrix_out, serialize_matrix(r.final_matrix));
    json steps = json::array();
    for (const auto& s : r.audit) {
      steps.push_back({{"axis", to_string(s.axis)},
                       {"index", s.index},
                       {"collected", s.collected},
                       {"separator", s.separator},
                       {"kept", s.kept}});
    }
    emit(g, json{{"width_branch_failed", r.width_branch_failed},
                 {"separators", to_json(r.separated.separators)},
                 {"copies", to_json(r.separated.packing.copy_set.copies)},
                 {"verified", verify_separated_packing(mat, r.separated)},
                 {"steps", steps}});
  });

  // encode
  bool separated = false;
  auto* c_enc = app.add_subcommand("encode", "(s+t)-partite graph of a matrix and pattern");
  add_mp(c_enc);
  c_enc->add_flag("--separated", separated, "Band encoding; needs --row-seps/--col-seps");
  c_enc->add_option("--row-seps", row_seps);
  c_enc->add_option("--col-seps", col_seps);
  c_enc->add_option("--graph-out", matrix_out, "Write the graph text format here");
  c_enc->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    const auto a = read_matrix_file(pattern_path);
    const auto graph = separated
                           ? build_separated_graph(mat, a, parse_separators(row_seps, col_seps), lim())
                           : build_partite_graph(mat, a, lim());
    std::ostringstream text;
    write_graph(text, graph);
    if (!matrix_out.empty()) write_text_file(matrix_out, text.str());
    emit(g, json{{"parts", graph.part_count()},
                 {"vertices", graph.vertex_count()},
                 {"edges", graph.edge_count()},
                 {"graph", text.str()}});
  });

  // cliques
  std::string graph_path;
  auto* c_cl = app.add_subcommand("cliques", "Count cliques with one vertex per part");
  c_cl->add_option("graph", graph_path, "Graph text file")->required();
  c_cl->callback([&] {
    std::ifstream in(graph_path);
    if (!in) throw InputError("cannot open " + graph_path);
    const auto graph = parse_graph(in);
    emit(g, json{{"k", graph.part_count()},
                 {"cliques", count_cliques(graph, graph.part_count(), lim()).str()}});
  });

  // behrend
  auto* c_beh = app.add_subcommand("behrend", "Set in [1,m] free of x1+x2+x3 = 3x4");
  c_beh->add_option("--m", m)->required();
  c_beh->callback([&] {
    const auto b = behrend_set(m);
    emit(g, json{{"m", b.m},
                 {"size", b.elements.size()},
                 {"method", b.method},
                 {"verified", verify_solution_free(b.elements)},
                 {"elements", b.elements}});
  });

  // lb-instance
  auto* c_lb = app.add_subcommand("lb-instance", "Ternary lower-bound base matrix");
  c_lb->add_option("--m", m, "Multiple of 10")->required();
  c_lb->add_option("--matrix-out", matrix_out);
  c_lb->add_option("--copies-out", copies_out);
  c_lb->callback([&] {
    const auto inst = lower_bound_base(m, behrend_set(m / 10), true, lim());
    const auto text = serialize_matrix(inst.base);
    if (!matrix_out.empty()) write_text_file(matrix_out, text);
    if (!copies_out.empty()) write_text_file(copies_out, copies_text(inst.planted.copies));
    emit(g, json{{"m", inst.m},
                 {"set", inst.behrend.elements},
                 {"q", inst.q},
                 {"matrix", text},
                 {"copies", to_json(inst.planted.copies)}});
  });

  // blowup
  auto* c_blow = app.add_subcommand("blowup", "Blow a square matrix up to n x n");
  c_blow->add_option("matrix", matrix_path)->required();
  c_blow->add_option("--n", n)->required();
  c_blow->add_option("--copies", packing_path, "Base copies (JSONL) to blow up as well");
  c_blow->add_option("--matrix-out", matrix_out);
  c_blow->add_option("--copies-out", copies_out);
  c_blow->callback([&] {
    const auto base = read_matrix_file(matrix_path);
    const auto big = blowup(base, n);
    const auto text = serialize_matrix(big);
    if (!matrix_out.empty()) write_text_file(matrix_out, text);
    json doc{{"m", base.rows()}, {"n", n}, {"matrix", text}};
    if (!packing_path.empty()) {
      const auto base_copies = read_copies_file(packing_path);
      const auto bp = blowup_packing(CopySet{Pattern::filled(1, 1, Alphabet(2), 0), base_copies, true},
                                     base.rows(), n);
      if (!copies_out.empty()) write_text_file(copies_out, copies_text(bp.copies));
      doc["copies"] = to_json(bp.copies);
    }
    emit(g, doc);
  });

  // gap-table
  auto* c_gap = app.add_subcommand("gap-table", "Exact eps/delta table of the lower bound");
  c_gap->add_option("--m", ms, "Multiples of 10")->required();
  c_gap->callback([&] {
    const auto rows = gap_table(ms);
    if (g.format == "csv") {
      std::ostringstream s;
      write_gap_table_csv(s, rows);
      emit(g, s.str());
      return;
    }
    json table = json::array();
    for (const auto& r : rows) {
      table.push_back({{"m", r.m},
                       {"set_size", r.set_size},
                       {"eps_hat", r.eps_hat.str()},
                       {"delta_hat", r.delta_hat.str()},
                       {"ratio", r.ratio.str()}});
    }
    emit(g, json{{"table", table}});
  });

  // test
  bool show_trials = false;
  auto* c_test = app.add_subcommand("test", "One-sided freeness tester (exit 1 on reject)");
  c_test->add_option("matrix", matrix_path)->required();
  c_test->add_option("family", family_paths, "Pattern files")->required();
  c_test->add_flag("--closure", closure, "Add all row permutations of the patterns");
  c_test->add_option("--q", q)->required();
  c_test->add_option("--trials", trials)->capture_default_str();
  c_test->add_flag("--trials-detail", show_trials, "List every trial");
  c_test->callback([&] {
    const auto mat = read_matrix_file(matrix_path);
    TesterConfig cfg{q, trials, g.seed, read_family(family_paths, closure)};
    const auto res = freeness_tester(mat, cfg, lim());
    json doc{{"q", q},
             {"trials", trials},
             {"seed", g.seed},
             {"rejections", res.rejections},
             {"frequency", res.frequency().str()},
             {"frequency_decimal", res.frequency().to_double()}};
    if (show_trials) {
      json table = json::array();
      for (std::size_t t = 0; t < res.trials.size(); ++t) {
        const auto& v = res.trials[t];
        json row{{"trial", t}, {"reject", v.reject}};
        row["member"] = v.witness ? json(v.witness->member) : json("");
        row["rows"] = v.witness ? json(v.witness->copy.rows).dump() : "";
        row["cols"] = v.witness ? json(v.witness->copy.cols).dump() : "";
        table.push_back(row);
      }
      doc["table"] = table;
    } else if (res.rejections > 0) {
      for (const auto& v : res.trials) {
        if (v.witness) {
          doc["first_witness"] = {{"member", v.witness->member},
                                  {"rows", v.witness->copy.rows},
                                  {"cols", v.witness->copy.cols}};
          break;
        }
      }
    }
    emit(g, doc);
    if (res.rejections > 0) exit_code = kExitReject;
  });

  // experiment
  std::string spec_path;
  auto* c_exp = app.add_subcommand("experiment", "Run an experiment spec, emit CSV");
  c_exp->add_option("spec", spec_path)->required();
  c_exp->callback([&] {
    std::ifstream in(spec_path);
    if (!in) throw InputError("cannot open " + spec_path);
    auto spec = parse_experiment(in);
    if (app.get_option("--seed")->count() > 0) spec.seed = g.seed;
    const auto rows = run_experiment(spec, lim());
    std::ostringstream s;
    write_experiment_csv(s, rows);
    emit(g, s.str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kExitBudget;
  } catch (const CountOverflow& e) {
    std::cerr << "overflow: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "input: " << e.what() << '\n';
    return kExitInput;
  }
  return exit_code;
}
