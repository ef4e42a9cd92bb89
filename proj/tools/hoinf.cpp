// hoinf: command-line front end for generation, sampling, recovery, Cheeger
// audits and seeded experiment sweeps.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hoinf/hoinf.hpp"

namespace {

using hoinf::json;

/// Invalid flag combination or value detected after parsing.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    hoinf::write_text_file(path, text);
  }
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + " is empty");
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  for (double v : parse_double_list(text, what)) {
    if (v != static_cast<int>(v)) throw UsageError(std::string(what) + ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// -- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string family;
  int n = 0;
  int m = 6;
  double prob = 0.5;
  double degree = 4.0;
  int bridges = 1;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  json j;
  if (a.family == "complete") {
    j = hoinf::to_json(hoinf::complete_hypergraph(a.n, a.m));
  } else if (a.family == "erdos_renyi") {
    j = hoinf::to_json(hoinf::erdos_renyi_hypergraph(a.n, a.m, a.prob, a.seed));
  } else if (a.family == "regular_like") {
    const auto r = hoinf::regular_like_hypergraph(a.n, a.m, a.degree, a.seed);
    j = hoinf::to_json(r.graph);
    j["degree_report"] = {{"target_degree", r.target_degree},  {"target_edges", r.target_edges},
                          {"min_degree", r.min_degree},        {"max_degree", r.max_degree},
                          {"mean_degree", r.mean_degree}};
  } else if (a.family == "two_blocks") {
    j = hoinf::to_json(hoinf::two_blocks_bridged(a.n, a.m, a.bridges, a.seed));
  } else {
    throw UsageError("unknown family '" + a.family + "' (expected complete, erdos_renyi, regular_like or two_blocks)");
  }
  emit(a.out, j.dump(2) + "\n");
  return 0;
}

// -- sample -----------------------------------------------------------------

struct SampleArgs {
  std::string graph;
  std::string labels;
  double p = 0.0;
  double q = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string truth_out;
};

int cmd_sample(const SampleArgs& a) {
  const auto g = hoinf::hypergraph_from_json(hoinf::read_json_file(a.graph));
  hoinf::GroundTruth truth;
  if (!a.labels.empty()) {
    truth = hoinf::ground_truth_from_json(hoinf::read_json_file(a.labels));
  } else {
    truth.y_star = hoinf::random_labels(g.n(), hoinf::derive_seed(a.seed, 2));
  }
  auto obs = hoinf::sample_observation(g, truth.y_star, a.p, a.q, a.seed);
  obs.graph_ref = a.graph;
  emit(a.out, hoinf::to_json(obs).dump(2) + "\n");
  if (!a.truth_out.empty()) hoinf::write_text_file(a.truth_out, hoinf::to_json(truth).dump(2) + "\n");
  return 0;
}

// -- recover ----------------------------------------------------------------

struct RecoverArgs {
  std::string observation;
  std::string truth;
  std::string method = "oracle";
  bool certify = false;
  std::string dual = "diagonal-amgm";
  std::uint64_t seed = 0;
  std::string config;
  int restarts = 4;
  int eigen_restarts = 32;
  bool brief = false;
  std::string out;
};

int cmd_recover(const RecoverArgs& a) {
  const auto obs = hoinf::observation_from_json(hoinf::read_json_file(a.observation));
  std::optional<hoinf::GroundTruth> truth;
  if (!a.truth.empty()) truth = hoinf::ground_truth_from_json(hoinf::read_json_file(a.truth));

  hoinf::PipelineConfig pc;
  pc.method = hoinf::parse_method(a.method);
  pc.certify = a.certify;
  pc.certify_config.dual = hoinf::parse_dual_construction(a.dual);
  pc.relax.seed = a.seed;
  pc.relax.restarts = a.restarts;
  pc.certify_config.eigen.seed = a.seed;
  pc.certify_config.eigen.restarts = a.eigen_restarts;
  pc.threads = hoinf::default_thread_count();
  if (!a.config.empty()) {
    const json c = hoinf::read_json_file(a.config);
    try {
      if (c.contains("relax_restarts")) pc.relax.restarts = c.at("relax_restarts").get<int>();
      if (c.contains("factors")) pc.relax.factors = c.at("factors").get<int>();
      if (c.contains("penalty_schedule")) pc.relax.penalty_schedule = c.at("penalty_schedule").get<std::vector<double>>();
      if (c.contains("iterations_per_stage")) pc.relax.iterations_per_stage = c.at("iterations_per_stage").get<int>();
      if (c.contains("rounding")) {
        const auto r = c.at("rounding").get<std::string>();
        if (r == "dominant-factor") {
          pc.relax.rounding = hoinf::Rounding::kDominantFactor;
        } else if (r == "probe") {
          pc.relax.rounding = hoinf::Rounding::kProbe;
        } else {
          throw UsageError("config: rounding must be dominant-factor or probe");
        }
      }
      if (c.contains("eigen_restarts")) pc.certify_config.eigen.restarts = c.at("eigen_restarts").get<int>();
      if (c.contains("lambda2_margin")) pc.certify_config.lambda2_margin = c.at("lambda2_margin").get<double>();
      if (c.contains("require_strict")) pc.certify_config.require_strict = c.at("require_strict").get<bool>();
      if (c.contains("gap_tol")) pc.certify_config.gap_tol = c.at("gap_tol").get<double>();
    } catch (const json::exception& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
  }
  const auto r = hoinf::run_pipeline(obs, pc, truth);
  emit(a.out, hoinf::to_json(r, !a.brief).dump(2) + "\n");
  return 0;
}

// -- audit ------------------------------------------------------------------

struct AuditArgs {
  std::string graph;
  std::string semantics = "edge-set";
  int restarts = 32;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_audit(const AuditArgs& a) {
  const auto g = hoinf::hypergraph_from_json(hoinf::read_json_file(a.graph));
  hoinf::EigenConfig ec;
  ec.restarts = a.restarts;
  ec.seed = a.seed;
  ec.threads = hoinf::default_thread_count();
  const auto audit = hoinf::cheeger_audit(g, hoinf::parse_boundary_semantics(a.semantics), ec);
  emit(a.out, hoinf::to_json(audit).dump(2) + "\n");
  return 0;
}

// -- experiment -------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::string family;
  int n = 0;
  int m = 0;
  std::string p_grid;
  std::string bridges;
  double q = -1.0;
  int trials = 0;
  std::string method;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool certify = false;
  bool no_timing = false;
  std::string csv = "experiment.csv";
  std::string summary = "summary.json";
  std::string manifest = "manifest.json";
};

int cmd_experiment(const ExperimentArgs& a) {
  hoinf::ExperimentConfig c;
  if (!a.config.empty()) c = hoinf::experiment_config_from_json(hoinf::read_json_file(a.config));
  if (!a.family.empty()) c.family = a.family;
  if (a.n > 0) c.n = a.n;
  if (a.m > 0) c.m = a.m;
  if (!a.p_grid.empty()) c.p_grid = parse_double_list(a.p_grid, "--p-grid");
  if (!a.bridges.empty()) c.bridges = parse_int_list(a.bridges, "--bridges");
  if (a.q >= 0.0) c.q = a.q;
  if (a.trials > 0) c.trials = a.trials;
  if (!a.method.empty()) c.method = hoinf::parse_method(a.method);
  if (a.seed_set) c.seed = a.seed;
  if (a.certify) c.certify = true;
  if (a.no_timing) c.record_wall_time = false;
  c.threads = hoinf::default_thread_count();

  const auto out = hoinf::run_experiment(c);
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
  emit(a.csv, hoinf::to_csv(out.rows));
  hoinf::write_text_file(a.summary, out.summary.dump(2) + "\n");
  hoinf::write_text_file(a.manifest, out.manifest.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order hypergraph inference: generation, recovery and Cheeger audits"};
  app.set_version_flag("--version", hoinf::kVersion);
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a hypergraph as JSON");
  g->add_option("family", gen.family, "complete | erdos_renyi | regular_like | two_blocks")->required();
  g->add_option("--n", gen.n, "Number of vertices")->required();
  g->add_option("--m", gen.m, "Edge order (2 or 6)");
  g->add_option("--prob", gen.prob, "Edge probability (erdos_renyi)");
  g->add_option("--degree", gen.degree, "Target mean hypervertex degree (regular_like)");
  g->add_option("--bridges", gen.bridges, "Crossing edges (two_blocks)");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("-o,--out", gen.out, "Output file (default stdout)");

  SampleArgs smp;
  auto* s = app.add_subcommand("sample", "Sample a noisy observation from a hypergraph");
  s->add_option("--graph", smp.graph, "Hypergraph JSON")->required();
  s->add_option("--labels", smp.labels, "Ground-truth JSON {\"y_star\": [...]} (default: random from seed)");
  s->add_option("--p", smp.p, "Edge flip probability");
  s->add_option("--q", smp.q, "Node flip probability");
  s->add_option("--seed", smp.seed, "Random seed");
  s->add_option("-o,--out", smp.out, "Observation output (default stdout)");
  s->add_option("--truth-out", smp.truth_out, "Also write the ground truth used");

  RecoverArgs rec;
  auto* r = app.add_subcommand("recover", "Run stage one, optional certification, and stage two");
  r->add_option("--observation", rec.observation, "Observation JSON")->required();
  r->add_option("--truth", rec.truth, "Ground-truth JSON for the exact flag");
  r->add_option("--method", rec.method, "oracle | relax");
  r->add_flag("--certify", rec.certify, "Build and check a KKT certificate");
  r->add_option("--dual", rec.dual, "diagonal-amgm | zeta-degree");
  r->add_option("--seed", rec.seed, "Solver seed");
  r->add_option("--restarts", rec.restarts, "Relaxation restarts");
  r->add_option("--eigen-restarts", rec.eigen_restarts, "Restarts for certificate eigenvalue checks");
  r->add_option("--config", rec.config, "Solver config JSON");
  r->add_flag("--brief", rec.brief, "Omit certificate tensors from the output");
  r->add_option("-o,--out", rec.out, "Output file (default stdout)");

  AuditArgs aud;
  auto* au = app.add_subcommand("audit", "Compare lambda_2 with phi^m for a hypergraph");
  au->add_option("--graph", aud.graph, "Hypergraph JSON")->required();
  au->add_option("--semantics", aud.semantics, "edge-set | pair-count");
  au->add_option("--restarts", aud.restarts, "Eigen solver restarts");
  au->add_option("--seed", aud.seed, "Eigen solver seed");
  au->add_option("-o,--out", aud.out, "Output file (default stdout)");

  ExperimentArgs exp;
  auto* e = app.add_subcommand("experiment", "Seeded recovery sweep writing CSV, summary and manifest");
  e->add_option("--config", exp.config, "Experiment config JSON (flags override)");
  e->add_option("--family", exp.family, "complete | erdos_renyi | regular_like | two_blocks");
  e->add_option("--n", exp.n, "Number of vertices");
  e->add_option("--m", exp.m, "Edge order");
  e->add_option("--p-grid", exp.p_grid, "Comma-separated edge noise levels");
  e->add_option("--bridges", exp.bridges, "Comma-separated bridge counts (two_blocks)");
  e->add_option("--q", exp.q, "Node noise level");
  e->add_option("--trials", exp.trials, "Trials per cell");
  e->add_option("--method", exp.method, "oracle | relax");
  e->add_option("--seed", exp.seed, "Master seed")->each([&](const std::string&) { exp.seed_set = true; });
  e->add_flag("--certify", exp.certify, "Certify every stage-one output");
  e->add_flag("--no-timing", exp.no_timing, "Write wall_ms = 0 for byte-identical reruns");
  e->add_option("--csv", exp.csv, "CSV output path ('-' for stdout)");
  e->add_option("--summary", exp.summary, "Summary JSON path");
  e->add_option("--manifest", exp.manifest, "Manifest JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*s) return cmd_sample(smp);
    if (*r) return cmd_recover(rec);
    if (*au) return cmd_audit(aud);
    if (*e) return cmd_experiment(exp);
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 1;
}
