#include "locc/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "locc/compress_m1.hpp"
#include "locc/error.hpp"
#include "locc/quantum/json_io.hpp"
#include "locc/slim_m2.hpp"
#include "locc/tree/evaluate.hpp"
#include "locc/tree/generators.hpp"
#include "locc/tree/tree_json.hpp"

namespace locc::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse(const std::string& bytes, const std::string& path) {
  try {
    return json::parse(bytes);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << text;
}

json header(const std::string& operation, const std::string& input_digest) {
  return {{"version", kReportVersion}, {"tool", kToolVersion}, {"operation", operation},
          {"input_digest", input_digest}, {"status", "ok"}};
}

json width_json(const WidthReport& w) {
  return {{"max_outdegree", w.max_outdegree}, {"leaf_count", w.leaf_count}, {"height", w.height},
          {"depth_max", w.depth_max}};
}

// max over internal vertices of outdegree − factor·d_loc² (≤ 0 means within bound)
long long width_excess(const ProtocolTree& t, std::size_t factor, bool nonzero_only) {
  const WidthReport w = width_report(t, nonzero_only);
  long long worst = std::numeric_limits<long long>::min();
  for (VertexId v = 0; v < t.size(); ++v) {
    if (t.vertex(v).is_leaf()) continue;
    const std::size_t d = t.local_dim(v);
    worst = std::max(worst, static_cast<long long>(w.outdegree[v]) - static_cast<long long>(factor * d * d));
  }
  return worst == std::numeric_limits<long long>::min() ? 0 : worst;
}

std::size_t max_local_dim(const ProtocolTree& t) {
  std::size_t d = 0;
  for (VertexId v = 0; v < t.size(); ++v)
    if (!t.vertex(v).is_leaf()) d = std::max(d, t.local_dim(v));
  return d;
}

json diagnostics_json(const std::vector<TreeDiagnostic>& diags) {
  json out = json::array();
  for (const TreeDiagnostic& d : diags) out.push_back({{"vertex", d.vertex}, {"message", d.message}});
  return out;
}

Ensemble load_ensemble(const std::string& path, std::string& bytes) {
  bytes = read_file(path);
  return parse(bytes, path).get<Ensemble>();
}

ProtocolTree load_tree(const std::string& path, std::string& bytes) {
  bytes = read_file(path);
  return tree_from_json(parse(bytes, path));
}

// Serializes and re-reads the tree, then evaluates it again.
double roundtrip_success(const ProtocolTree& t, const Ensemble& s) {
  return evaluate_success(tree_from_json(json::parse(tree_to_json(t).dump())), s).probability;
}

// Shared body of compress-m1 and the demos.
json compress_section(const ProtocolTree& t, const Ensemble& s, const Tolerances& tol, ProtocolTree* out_tree) {
  M1Options opts;
  opts.equalize.equal_tol = tol.equal;
  opts.reduction.null_tol = tol.null;
  opts.prob_cutoff = tol.prob_cutoff;
  M1Report rep;
  ProtocolTree c = compress_protocol_m1(t, s, opts, &rep);
  const double before = evaluate_success(t, s).probability;
  const double after = evaluate_success(c, s).probability;
  const std::vector<TreeDiagnostic> diags = validate_tree(c, {tol.completeness});
  json j = {{"success_before", before},
            {"success_after", after},
            {"success_roundtrip", roundtrip_success(c, s)},
            {"width_before", width_json(width_report(t))},
            {"width_after", width_json(width_report(c))},
            {"bound_two_dloc_sq", 2 * max_local_dim(t) * max_local_dim(t)},
            {"within_bound", width_excess(c, 2, false) <= 0},
            {"vertices_compressed", rep.vertices_compressed},
            {"merges", rep.merges},
            {"residuals",
             {{"completeness", max_completeness_residual(c)},
              {"telescoping", rep.max_telescoping_drift},
              {"second_stage", rep.max_second_stage_residual},
              {"success", std::abs(after - before)}}},
            {"diagnostics", diagnostics_json(diags)}};
  if (out_tree) *out_tree = std::move(c);
  return j;
}

// Largest |Σ_j λ_j·scalar_j(e) − 1| over edges, and the largest nonzero
// outdegree minus d_loc² over all vertex components.
std::pair<double, long long> decomposition_checks(const SlimDecomposition& dec) {
  const ProtocolTree& t = dec.source();
  double edge = 0.0;
  long long excess = std::numeric_limits<long long>::min();
  for (std::size_t i = 0; i < dec.internal_vertices().size(); ++i) {
    const VertexId v = dec.internal_vertices()[i];
    const std::vector<VertexId>& kids = t.vertex(v).children;
    const std::size_t d = t.local_dim(v);
    for (std::size_t k = 0; k < kids.size(); ++k) {
      double acc = 0.0;
      for (const PovmComponent& c : dec.vertex_components(i)) acc += c.lambda * c.scalars[k];
      edge = std::max(edge, std::abs(acc - 1.0));
    }
    for (const PovmComponent& c : dec.vertex_components(i)) {
      long long nz = 0;
      for (std::size_t k = 0; k < kids.size(); ++k)
        if (c.scalars[k] > 0.0 && edge_is_nonzero(t, kids[k])) ++nz;
      excess = std::max(excess, nz - static_cast<long long>(d * d));
    }
  }
  return {edge, excess == std::numeric_limits<long long>::min() ? 0 : excess};
}

json best_slim_section(const SlimDecomposition& dec, const Ensemble& s) {
  const BestSlim b = best_slim(dec, s);
  return {{"success_before", b.original_success},
          {"success_best", b.success},
          {"success_best_reevaluated", evaluate_success(b.tree, s).probability},
          {"lambda", b.lambda},
          {"choice", b.choice},
          {"exhaustive", b.exhaustive},
          {"width_best_nonzero", width_json(width_report(b.tree, true))}};
}

}  // namespace

std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

double max_completeness_residual(const ProtocolTree& t) {
  double worst = 0.0;
  for (VertexId v = 0; v < t.size(); ++v) {
    const Vertex& x = t.vertex(v);
    if (x.is_leaf()) continue;
    const std::size_t d = t.local_dim(v);
    ComplexMatrix sum(d, d);
    for (VertexId c : x.children) sum += t.vertex(c).edge.effect();
    worst = std::max(worst, frobenius_distance(sum, ComplexMatrix::identity(d)));
  }
  return worst;
}

Report cmd_validate(const std::string& tree_path, const Tolerances& tol) {
  std::string bytes;
  const ProtocolTree t = load_tree(tree_path, bytes);
  const std::vector<TreeDiagnostic> diags = validate_tree(t, {tol.completeness});
  json j = header("validate", digest(bytes));
  j["valid"] = diags.empty();
  j["diagnostics"] = diagnostics_json(diags);
  j["width"] = width_json(width_report(t));
  j["fine_grained"] = is_fine_grained(t);
  j["residuals"] = {{"completeness", max_completeness_residual(t)}};
  if (!diags.empty()) j["status"] = "invalid";
  return {std::move(j), diags.empty() ? 0 : 1};
}

Report cmd_evaluate(const std::string& tree_path, const std::string& ensemble_path, bool relabel,
                    const Tolerances& tol) {
  std::string tb, eb;
  const ProtocolTree t = load_tree(tree_path, tb);
  const Ensemble s = load_ensemble(ensemble_path, eb);
  const std::vector<TreeDiagnostic> diags = validate_tree(t, {tol.completeness});
  json j = header("evaluate", digest(tb + eb));
  if (!diags.empty()) {
    j["status"] = "invalid";
    j["diagnostics"] = diagnostics_json(diags);
    return {std::move(j), 1};
  }
  const SuccessResult r = evaluate_success(t, s, relabel);
  j["relabel"] = relabel;
  j["success"] = r.probability;
  json labels = json::object();
  for (const auto& [v, l] : r.labels) labels[std::to_string(v)] = l;
  j["leaf_labels"] = std::move(labels);
  j["width"] = width_json(width_report(t));
  return {std::move(j), 0};
}

Report cmd_compress_m1(const std::string& tree_path, const std::string& ensemble_path,
                       const std::optional<std::string>& out, const Tolerances& tol) {
  std::string tb, eb;
  const ProtocolTree t = load_tree(tree_path, tb);
  const Ensemble s = load_ensemble(ensemble_path, eb);
  json j = header("compress-m1", digest(tb + eb));
  const std::vector<TreeDiagnostic> diags = validate_tree(t, {tol.completeness});
  if (!diags.empty()) {
    j["status"] = "invalid";
    j["diagnostics"] = diagnostics_json(diags);
    return {std::move(j), 1};
  }
  ProtocolTree c;
  j["compress_m1"] = compress_section(t, s, tol, &c);
  if (out) {
    write_file(*out, tree_to_json(c).dump(2) + "\n");
    j["output"] = *out;
  }
  return {std::move(j), 0};
}

Report cmd_slim(const std::string& tree_path, const SlimArgs& args, const Tolerances& tol) {
  std::string tb, eb;
  const ProtocolTree input = load_tree(tree_path, tb);
  std::optional<Ensemble> s;
  if (args.ensemble_path) s = load_ensemble(*args.ensemble_path, eb);
  json j = header("slim", digest(tb + eb));
  const std::vector<TreeDiagnostic> diags = validate_tree(input, {tol.completeness});
  if (!diags.empty()) {
    j["status"] = "invalid";
    j["diagnostics"] = diagnostics_json(diags);
    return {std::move(j), 1};
  }
  const ProtocolTree t = is_fine_grained(input) ? input : fine_grain(input);
  const SlimDecomposition dec(t, {tol.null});
  const auto [edge_residual, excess] = decomposition_checks(dec);
  const std::size_t d = max_local_dim(t);

  json summary = {{"components", dec.count() ? json(*dec.count()) : json("overflow")},
                  {"cap", args.cap},
                  {"bound_dloc_sq", d * d},
                  {"within_bound", excess <= 0},
                  {"width_source", width_json(width_report(t))}};
  json residuals = {{"edge_recombination", edge_residual}};

  const bool exhaustive = dec.count() && *dec.count() <= args.cap;
  summary["exhaustive"] = exhaustive;
  double lambda_sum = 0.0;
  std::vector<WeightedInstrument> mix;
  std::ofstream lines;
  if (args.out) {
    lines.open(*args.out, std::ios::binary);
    if (!lines) throw Error(ErrorCode::InvalidInput, "cannot write " + *args.out);
  }
  std::size_t invalid_components = 0;
  dec.for_each(args.cap, [&](std::uint64_t index, const ComponentChoice& c) {
    const double l = dec.lambda(c);
    lambda_sum += l;
    if (!args.out && !args.reduce_rand && !exhaustive) return;
    const ProtocolTree tree = dec.build(c);
    if (!validate_tree(tree, {tol.completeness}).empty()) ++invalid_components;
    if (args.out) lines << json{{"index", index}, {"lambda", l}, {"tree", tree_to_json(tree)}}.dump() << "\n";
    if (exhaustive || args.reduce_rand) mix.push_back({l, extract_instrument(tree)});
  });
  summary["lambda_sum_emitted"] = lambda_sum;
  summary["invalid_components"] = invalid_components;

  const Instrument original = extract_instrument(t);
  std::vector<int> labels;
  std::vector<std::size_t> outcome_dims;
  for (const InstrumentBranch& b : original.branches) {
    labels.push_back(b.label);
    outcome_dims.push_back(b.map.out_dim);
  }
  if (exhaustive) {
    residuals["lambda_sum"] = std::abs(lambda_sum - 1.0);
    const std::vector<ComplexMatrix> mixed = mixture_choi(mix, labels, original.in_dim, outcome_dims);
    double worst = 0.0;
    for (std::size_t k = 0; k < labels.size(); ++k)
      worst = std::max(worst, frobenius_distance(mixed[k], choi_of(original.branches[k].map).matrix));
    residuals["instrument_recombination"] = worst;
  }
  if (args.reduce_rand) {
    if (!exhaustive) {
      throw Error(ErrorCode::CapExceeded, "--reduce-rand needs every component; raise --cap");
    }
    const SharedRandomnessResult r = reduce_shared_randomness(mix, original.in_dim, outcome_dims, {tol.null});
    j["shared_randomness"] = {{"bound_R", r.bound},
                              {"retained", r.components.size()},
                              {"within_bound", r.within_bound},
                              {"kept", r.kept}};
    residuals["shared_randomness_choi"] = r.choi_residual;
  }
  if (s) j["best_slim"] = best_slim_section(dec, *s);
  if (args.out) {
    summary["output"] = *args.out;
    lines << json{{"summary", summary}, {"residuals", residuals}}.dump() << "\n";
  }
  j["slim"] = std::move(summary);
  j["residuals"] = std::move(residuals);
  return {std::move(j), 0};
}

Report cmd_demo(const DemoArgs& args, const Tolerances& tol) {
  DemoInstance inst;
  std::ostringstream key;
  key << "demo:" << args.name;
  if (args.name == "bell") {
    inst = bell_demo();
  } else if (args.name == "product-basis") {
    inst = product_basis_demo();
  } else if (args.name == "random") {
    if (args.dims.empty() || args.rounds == 0) throw Error(ErrorCode::InvalidInput, "need --dims and --rounds ≥ 1");
    key << ":" << args.seed << ":" << args.rounds;
    for (std::size_t d : args.dims) key << ":" << d;
    Rng rng(args.seed);
    RandomProtocolSpec spec;
    spec.party_dims = args.dims;
    spec.rounds = args.rounds;
    spec.root_min = 6;
    spec.root_max = 10;
    spec.labels = 3;
    inst.tree = random_protocol(spec, rng);
    inst.ensemble = random_ensemble(MultipartiteSpace{args.dims}, 3, rng);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown demo '" + args.name + "'");
  }
  json j = header("demo", digest(key.str()));
  j["demo"] = args.name;
  j["success"] = evaluate_success(inst.tree, inst.ensemble).probability;
  j["compress_m1"] = compress_section(inst.tree, inst.ensemble, tol, nullptr);

  const ProtocolTree fine = is_fine_grained(inst.tree) ? inst.tree : fine_grain(inst.tree);
  const SlimDecomposition dec(fine, {tol.null});
  const auto [edge_residual, excess] = decomposition_checks(dec);
  j["slim"] = best_slim_section(dec, inst.ensemble);
  j["slim"]["components"] = dec.count() ? json(*dec.count()) : json("overflow");
  j["slim"]["within_bound"] = excess <= 0;
  j["slim"]["edge_recombination"] = edge_residual;
  return {std::move(j), 0};
}

int run(int argc, char** argv) {
  CLI::App app{"LOCC protocol trees: validation, evaluation and width compression"};
  app.require_subcommand(1);
  Tolerances tol;
  std::optional<std::string> report_out;
  bool timing = false;
  app.add_option("--tol-completeness", tol.completeness, "‖Σ K†K − I‖_F allowed at each vertex");
  app.add_option("--tol-equal", tol.equal, "Equalization tolerance on conditional success");
  app.add_option("--tol-null", tol.null, "Relative tolerance of the affine-dependency search");
  app.add_option("--tol-prob", tol.prob_cutoff, "Branch probability treated as zero");
  app.add_option("--report", report_out, "Write the report here instead of stdout");
  app.add_flag("--timing", timing, "Include wall time in the report");

  std::string tree_path, ensemble_path;
  bool relabel = false;
  std::optional<std::string> out;

  CLI::App* validate = app.add_subcommand("validate", "Check a protocol tree");
  validate->add_option("tree", tree_path)->required();

  CLI::App* evaluate = app.add_subcommand("evaluate", "Success probability on an ensemble");
  evaluate->add_option("tree", tree_path)->required();
  evaluate->add_option("ensemble", ensemble_path)->required();
  evaluate->add_flag("--relabel", relabel, "Score each leaf by its best state");

  CLI::App* compress = app.add_subcommand("compress-m1", "Bound every measurement by 2·d_loc² outcomes");
  compress->add_option("tree", tree_path)->required();
  compress->add_option("ensemble", ensemble_path)->required();
  compress->add_option("--out", out, "Write the compressed tree here");

  SlimArgs slim_args;
  CLI::App* slim = app.add_subcommand("slim", "Decompose into slim protocols");
  slim->add_option("tree", tree_path)->required();
  slim->add_option("--ensemble", slim_args.ensemble_path, "Also report the best slim protocol");
  slim->add_option("--cap", slim_args.cap, "Components to enumerate")->capture_default_str();
  slim->add_option("--out", slim_args.out, "JSON-lines file of {lambda, tree} records");
  slim->add_flag("--reduce-rand", slim_args.reduce_rand, "Reduce the mixture's shared randomness");

  DemoArgs demo_args;
  std::string dims = "2,2";
  CLI::App* demo = app.add_subcommand("demo", "Run a built-in instance");
  demo->add_option("name", demo_args.name)->required()->check(CLI::IsMember({"bell", "product-basis", "random"}));
  demo->add_option("--seed", demo_args.seed)->capture_default_str();
  demo->add_option("--rounds", demo_args.rounds)->capture_default_str();
  demo->add_option("--dims", dims, "Comma-separated party dimensions")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const auto start = std::chrono::steady_clock::now();
  Report rep;
  try {
    if (*validate) {
      rep = cmd_validate(tree_path, tol);
    } else if (*evaluate) {
      rep = cmd_evaluate(tree_path, ensemble_path, relabel, tol);
    } else if (*compress) {
      rep = cmd_compress_m1(tree_path, ensemble_path, out, tol);
    } else if (*slim) {
      rep = cmd_slim(tree_path, slim_args, tol);
    } else {
      demo_args.dims.clear();
      std::stringstream ss(dims);
      for (std::string part; std::getline(ss, part, ',');) demo_args.dims.push_back(std::stoul(part));
      rep = cmd_demo(demo_args, tol);
    }
  } catch (const Error& e) {
    rep.body = {{"version", kReportVersion},
                {"status", "error"},
                {"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}};
    rep.exit_code = is_numerical(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    rep.body = {{"version", kReportVersion},
                {"status", "error"},
                {"error", {{"code", "InvalidInput"}, {"message", e.what()}}}};
    rep.exit_code = 1;
  }
  if (timing) {
    rep.body["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  const std::string text = rep.body.dump(2) + "\n";
  if (report_out) {
    try {
      write_file(*report_out, text);
    } catch (const Error& e) {
      std::cerr << e.what() << "\n";
      return 1;
    }
  } else {
    std::cout << text;
  }
  return rep.exit_code;
}

}  // namespace locc::cli
