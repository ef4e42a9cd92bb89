#pragma once

// Seeded experiment sweeps: (bridges x p) cells, trials per cell, one CSV row
// per trial plus a summary and a replay manifest.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hoinf/audit.hpp"
#include "hoinf/hypergraph.hpp"
#include "hoinf/inference.hpp"
#include "hoinf/json_io.hpp"
#include "hoinf/labels.hpp"
#include "hoinf/model.hpp"
#include "hoinf/parallel.hpp"
#include "hoinf/version.hpp"

namespace hoinf {

inline constexpr const char* kCsvHeader =
    "family,n,m,p,q,phi_exact_or_bound,trial,seed,method,stage1_match,exact,objective,wall_ms";

struct ExperimentConfig {
  /// complete | erdos_renyi | regular_like | two_blocks
  std::string family = "complete";
  int n = 8;
  int m = 6;
  double edge_prob = 0.5;
  double degree = 4.0;
  /// two_blocks only; one cell row per entry
  std::vector<int> bridges{1};
  std::vector<double> p_grid{0.0};
  double q = 0.0;
  int trials = 20;
  StageOneMethod method = StageOneMethod::kRelaxation;
  std::uint64_t seed = 0;
  bool certify = false;
  BoundarySemantics semantics = BoundarySemantics::kEdgeSet;
  int relax_restarts = 4;
  int eigen_restarts = 8;
  /// 0 writes wall_ms = 0 so that reruns are byte-identical
  bool record_wall_time = true;
  unsigned threads = 1;
  /// projected per-cell budget before oracle is downgraded to relaxation
  double cell_budget_seconds = 60.0;
};

struct ExperimentRow {
  std::string family;
  int n = 0;
  int m = 0;
  double p = 0.0;
  double q = 0.0;
  double phi = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  StageOneMethod method = StageOneMethod::kOracle;
  bool stage1_match = false;
  bool exact = false;
  double objective = 0.0;
  double wall_ms = 0.0;
  // not in the CSV
  std::size_t cell = 0;
  int bridges = -1;
  bool phi_exact = false;
  std::size_t edge_count = 0;
  std::optional<bool> certified;
};

struct ExperimentOutput {
  std::vector<ExperimentRow> rows;
  json summary;
  json manifest;
  std::vector<std::string> warnings;
};

inline void validate(const ExperimentConfig& c) {
  auto bad = [](const std::string& why) { throw std::invalid_argument("experiment config: " + why); };
  if (c.family != "complete" && c.family != "erdos_renyi" && c.family != "regular_like" && c.family != "two_blocks") {
    bad("unknown family '" + c.family + "' (expected complete, erdos_renyi, regular_like or two_blocks)");
  }
  require_supported_order(c.m);
  if (c.n < c.m) bad("n must be at least m");
  if (c.p_grid.empty()) bad("p grid is empty");
  for (double p : c.p_grid) {
    if (!(p >= 0.0 && p < 1.0)) bad("p values must lie in [0, 1)");
  }
  if (!(c.q >= 0.0 && c.q < 1.0)) bad("q must lie in [0, 1)");
  if (c.trials < 1) bad("trials must be at least 1");
  if (c.family == "two_blocks" && c.bridges.empty()) bad("bridges grid is empty");
  if (c.relax_restarts < 1 || c.eigen_restarts < 1) bad("restart counts must be positive");
}

inline json to_json(const ExperimentConfig& c) {
  return {{"family", c.family},
          {"n", c.n},
          {"m", c.m},
          {"edge_prob", c.edge_prob},
          {"degree", c.degree},
          {"bridges", c.bridges},
          {"p_grid", c.p_grid},
          {"q", c.q},
          {"trials", c.trials},
          {"method", to_string(c.method)},
          {"seed", c.seed},
          {"certify", c.certify},
          {"semantics", to_string(c.semantics)},
          {"relax_restarts", c.relax_restarts},
          {"eigen_restarts", c.eigen_restarts},
          {"record_wall_time", c.record_wall_time},
          {"cell_budget_seconds", c.cell_budget_seconds}};
}

/// Reads any subset of the fields written by to_json; others keep defaults.
inline ExperimentConfig experiment_config_from_json(const json& j, ExperimentConfig c = {}) {
  if (!j.is_object()) throw FormatError("experiment config: expected a JSON object");
  try {
    if (j.contains("family")) c.family = j.at("family").get<std::string>();
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("m")) c.m = j.at("m").get<int>();
    if (j.contains("edge_prob")) c.edge_prob = j.at("edge_prob").get<double>();
    if (j.contains("degree")) c.degree = j.at("degree").get<double>();
    if (j.contains("bridges")) c.bridges = j.at("bridges").get<std::vector<int>>();
    if (j.contains("p_grid")) c.p_grid = j.at("p_grid").get<std::vector<double>>();
    if (j.contains("q")) c.q = j.at("q").get<double>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("certify")) c.certify = j.at("certify").get<bool>();
    if (j.contains("semantics")) c.semantics = parse_boundary_semantics(j.at("semantics").get<std::string>());
    if (j.contains("relax_restarts")) c.relax_restarts = j.at("relax_restarts").get<int>();
    if (j.contains("eigen_restarts")) c.eigen_restarts = j.at("eigen_restarts").get<int>();
    if (j.contains("record_wall_time")) c.record_wall_time = j.at("record_wall_time").get<bool>();
    if (j.contains("cell_budget_seconds")) c.cell_budget_seconds = j.at("cell_budget_seconds").get<double>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("experiment config: ") + e.what());
  }
  return c;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Seed of trial t in cell c.
inline std::uint64_t trial_seed(std::uint64_t master, std::size_t cell, int trial) {
  return derive_seed(master, 0xC0 + cell, static_cast<std::uint64_t>(trial));
}

inline UniformHypergraph make_family_graph(const ExperimentConfig& c, int bridges, std::uint64_t seed) {
  if (c.family == "complete") return complete_hypergraph(c.n, c.m);
  if (c.family == "erdos_renyi") return erdos_renyi_hypergraph(c.n, c.m, c.edge_prob, seed);
  if (c.family == "regular_like") return regular_like_hypergraph(c.n, c.m, c.degree, seed).graph;
  return two_blocks_bridged(c.n, c.m, bridges, seed);
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.family << ',' << r.n << ',' << r.m << ',' << format_number(r.p) << ',' << format_number(r.q) << ','
        << format_number(r.phi) << ',' << r.trial << ',' << r.seed << ',' << to_string(r.method) << ','
        << (r.stage1_match ? 1 : 0) << ',' << (r.exact ? 1 : 0) << ',' << format_number(r.objective) << ','
        << format_number(r.wall_ms) << '\n';
  }
  return out.str();
}

/// Rough oracle cost in seconds: 2^(n-1) candidates times |X| terms.
inline double projected_oracle_seconds(int n, std::size_t edges, int trials) {
  return std::ldexp(1.0, n - 1) * static_cast<double>(edges) * trials / 2e8;
}

namespace detail {

struct PhiInfo {
  double phi = 0.0;
  bool exact = false;
};

inline PhiInfo measure_phi(const UniformHypergraph& g, const ExperimentConfig& c, std::uint64_t seed) {
  if (binomial(g.n(), g.m() / 2) <= kExactCheegerLimit) return {cheeger_exact(g, c.semantics).phi, true};
  EigenConfig ec;
  ec.restarts = c.eigen_restarts;
  ec.seed = seed;
  ec.max_iterations = 2000;
  const LaplacianOperator op(g);
  const auto eig =
      tensor_eig_min(op, g.n(), g.m(), {std::vector<double>(static_cast<std::size_t>(g.n()), 1.0)}, ec);
  return {cheeger_sweep(g, eig.vector, c.semantics).expansion, false};
}

}  // namespace detail

inline ExperimentOutput run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentOutput out;
  struct Cell {
    int bridges;
    double p;
    StageOneMethod method;
  };
  std::vector<Cell> cells;
  const std::vector<int> bridge_grid = config.family == "two_blocks" ? config.bridges : std::vector<int>{-1};
  for (int b : bridge_grid) {
    for (double p : config.p_grid) cells.push_back({b, p, config.method});
  }

  // Oracle guard per cell, using the first trial's graph as the size probe.
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].method != StageOneMethod::kOracle) continue;
    const auto g = make_family_graph(config, cells[c].bridges, derive_seed(trial_seed(config.seed, c, 0), 1));
    const bool over_guard = config.n > oracle_limit(config.m);
    const double secs = projected_oracle_seconds(config.n, g.edge_count(), config.trials);
    if (over_guard || secs > config.cell_budget_seconds) {
      cells[c].method = StageOneMethod::kRelaxation;
      out.warnings.push_back("cell " + std::to_string(c) + ": oracle projected at " + format_number(secs) +
                             " s (limit " + format_number(config.cell_budget_seconds) +
                             " s) or over its size guard; using relaxation");
    }
  }

  const std::size_t total = cells.size() * static_cast<std::size_t>(config.trials);
  out.rows.resize(total);
  std::vector<std::string> phi_keys(total);
  // phi depends only on the graph; cache it by edge list.
  std::map<std::string, detail::PhiInfo> phi_cache;
  std::vector<UniformHypergraph> graphs;
  graphs.reserve(total);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int t = 0; t < config.trials; ++t) {
      const std::uint64_t s = trial_seed(config.seed, c, t);
      graphs.push_back(make_family_graph(config, cells[c].bridges, derive_seed(s, 1)));
    }
  }
  std::vector<detail::PhiInfo> phis(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::string key = to_json(graphs[i]).dump();
    auto it = phi_cache.find(key);
    if (it == phi_cache.end()) {
      it = phi_cache.emplace(key, detail::measure_phi(graphs[i], config, derive_seed(config.seed, 0xF1))).first;
    }
    phis[i] = it->second;
  }

  parallel_for(total, config.threads, [&](std::size_t i) {
    const std::size_t c = i / static_cast<std::size_t>(config.trials);
    const int t = static_cast<int>(i % static_cast<std::size_t>(config.trials));
    const std::uint64_t s = trial_seed(config.seed, c, t);
    const auto& g = graphs[i];
    const GroundTruth truth{random_labels(config.n, derive_seed(s, 2))};
    Observation obs = sample_observation(g, truth.y_star, cells[c].p, config.q, derive_seed(s, 3));
    PipelineConfig pc;
    pc.method = cells[c].method;
    pc.relax.seed = derive_seed(s, 4);
    pc.relax.restarts = config.relax_restarts;
    pc.certify = config.certify;
    pc.certify_config.eigen.restarts = config.eigen_restarts;
    pc.certify_config.eigen.seed = derive_seed(s, 5);
    const auto t0 = std::chrono::steady_clock::now();
    const RecoveryResult r = run_pipeline(obs, pc, truth);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    ExperimentRow& row = out.rows[i];
    row.family = config.family;
    row.n = config.n;
    row.m = config.m;
    row.p = cells[c].p;
    row.q = config.q;
    row.phi = phis[i].phi;
    row.phi_exact = phis[i].exact;
    row.trial = t;
    row.seed = s;
    row.method = cells[c].method;
    row.stage1_match = r.stage1_match.value_or(false);
    row.exact = r.exact.value_or(false);
    row.objective = r.stage1.objective;
    row.wall_ms = config.record_wall_time ? std::round(ms * 1000.0) / 1000.0 : 0.0;
    row.cell = c;
    row.bridges = cells[c].bridges;
    row.edge_count = g.edge_count();
    if (r.certificate) row.certified = r.certificate->certified;
  });

  json cell_list = json::array();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    int s1 = 0;
    int ex = 0;
    int cert = 0;
    double phi_sum = 0.0;
    double bound_sum = 0.0;
    bool bound_defined = true;
    bool all_exact_phi = true;
    for (int t = 0; t < config.trials; ++t) {
      const auto& row = out.rows[c * static_cast<std::size_t>(config.trials) + static_cast<std::size_t>(t)];
      s1 += row.stage1_match;
      ex += row.exact;
      cert += row.certified.value_or(false);
      phi_sum += row.phi;
      all_exact_phi = all_exact_phi && row.phi_exact;
      if (row.phi > 0.0 && row.p < 0.5) {
        bound_sum += 1.0 - combined_failure_bound(row.phi, row.n, row.p, row.q, row.edge_count, row.m);
      } else {
        bound_defined = false;
      }
    }
    const double trials = config.trials;
    json cell = {{"cell", c},
                 {"p", cells[c].p},
                 {"q", config.q},
                 {"method", to_string(cells[c].method)},
                 {"trials", config.trials},
                 {"phi_mean", phi_sum / trials},
                 {"phi_exact", all_exact_phi},
                 {"stage1_rate", s1 / trials},
                 {"exact_rate", ex / trials}};
    if (config.family == "two_blocks") cell["bridges"] = cells[c].bridges;
    if (config.certify) cell["certified_rate"] = cert / trials;
    if (bound_defined) {
      const double guaranteed = bound_sum / trials;
      cell["bound_success_probability"] = guaranteed;
      cell["rate_at_least_bound"] = ex / trials >= guaranteed;
    } else {
      cell["bound_success_probability"] = nullptr;
      cell["rate_at_least_bound"] = nullptr;
    }
    cell_list.push_back(std::move(cell));
  }

  const json cfg = to_json(config);
  const std::string hash = hex64(fnv1a(cfg.dump()));
  out.summary = {{"config_hash", hash}, {"cells", std::move(cell_list)}, {"warnings", out.warnings}};
  json seeds = json::array();
  for (const auto& row : out.rows) seeds.push_back({{"cell", row.cell}, {"trial", row.trial}, {"seed", row.seed}});
  out.manifest = {{"version", kVersion},
                  {"config_hash", hash},
                  {"config", cfg},
                  {"seed_rule", "seed = derive_seed(master, 0xC0 + cell, trial); graph/labels/observation/solver "
                                "streams use derive_seed(seed, 1..5)"},
                  {"seeds", std::move(seeds)}};
  return out;
}

}  // namespace hoinf
