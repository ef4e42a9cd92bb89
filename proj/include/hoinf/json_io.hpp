#pragma once

// JSON encodings for tensors, hypergraphs, observations and results.
// Vertex ids are 0-based in every format.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hoinf/audit.hpp"
#include "hoinf/hypergraph.hpp"
#include "hoinf/inference.hpp"
#include "hoinf/model.hpp"
#include "hoinf/tensor.hpp"

namespace hoinf {

using json = nlohmann::json;

/// Malformed or invalid JSON input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

inline int int_field(const json& j, const char* key, const char* what) {
  const json& v = field(j, key, what);
  if (!v.is_number_integer()) throw FormatError(std::string(what) + ": field \"" + key + "\" must be an integer");
  return v.get<int>();
}

inline std::vector<int> int_list(const json& v, const char* what) {
  if (!v.is_array()) throw FormatError(std::string(what) + ": expected an array of integers");
  std::vector<int> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw FormatError(std::string(what) + ": expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace detail

// -- tensors ----------------------------------------------------------------

inline json to_json(const SymmetricTensor& t) {
  json entries = json::array();
  for (const auto& [idx, v] : t.orbits()) entries.push_back(json::array({json(std::vector<int>(idx.begin(), idx.end())), v}));
  return {{"m", t.order()}, {"n", t.dim()}, {"entries", std::move(entries)}};
}

/// Rejects non-canonical (unsorted) indices and repeated orbits.
inline SymmetricTensor tensor_from_json(const json& j) {
  const int m = detail::int_field(j, "m", "tensor");
  const int n = detail::int_field(j, "n", "tensor");
  SymmetricTensor t(m, n);
  const json& entries = detail::field(j, "entries", "tensor");
  if (!entries.is_array()) throw FormatError("tensor: \"entries\" must be an array");
  std::map<MultiIndex, bool> seen;
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2 || !e[1].is_number()) {
      throw FormatError("tensor: each entry must be [[i_1, ..., i_m], value]");
    }
    const auto ids = detail::int_list(e[0], "tensor entry index");
    if (static_cast<int>(ids.size()) != m) {
      throw FormatError("tensor: entry index has " + std::to_string(ids.size()) + " values, expected " + std::to_string(m));
    }
    const MultiIndex idx(ids);
    if (!idx.is_canonical()) throw FormatError("tensor: entry index is not sorted ascending (canonical form required)");
    if (!seen.emplace(idx, true).second) throw FormatError("tensor: duplicate orbit in entries");
    t.set(idx, e[1].get<double>());
  }
  return t;
}

// -- hypergraphs ------------------------------------------------------------

inline json to_json(const UniformHypergraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back(std::vector<int>(e.begin(), e.end()));
  return {{"n", g.n()}, {"m", g.m()}, {"edges", std::move(edges)}};
}

inline UniformHypergraph hypergraph_from_json(const json& j) {
  const int n = detail::int_field(j, "n", "hypergraph");
  const int m = detail::int_field(j, "m", "hypergraph");
  const json& list = detail::field(j, "edges", "hypergraph");
  if (!list.is_array()) throw FormatError("hypergraph: \"edges\" must be an array");
  std::vector<MultiIndex> edges;
  edges.reserve(list.size());
  for (const auto& e : list) {
    const auto ids = detail::int_list(e, "hypergraph edge");
    if (static_cast<int>(ids.size()) != m) {
      throw FormatError("hypergraph: edge has " + std::to_string(ids.size()) + " vertices, expected " + std::to_string(m));
    }
    edges.emplace_back(ids);
  }
  return {n, m, std::move(edges)};
}

// -- labels, observations ---------------------------------------------------

inline json to_json(const GroundTruth& t) { return {{"y_star", t.y_star}}; }

inline GroundTruth ground_truth_from_json(const json& j) {
  GroundTruth t;
  t.y_star = detail::int_list(detail::field(j, "y_star", "ground truth"), "ground truth y_star");
  require_signs(t.y_star, static_cast<int>(t.y_star.size()), "ground truth y_star");
  return t;
}

inline json to_json(const Observation& o) {
  return {{"X", to_json(o.X)}, {"z", o.z}, {"p", o.p}, {"q", o.q}, {"seed", o.seed}, {"graph_ref", o.graph_ref}};
}

inline Observation observation_from_json(const json& j) {
  Observation o;
  o.X = tensor_from_json(detail::field(j, "X", "observation"));
  o.z = detail::int_list(detail::field(j, "z", "observation"), "observation z");
  require_signs(o.z, o.X.dim(), "observation z");
  const json& p = detail::field(j, "p", "observation");
  const json& q = detail::field(j, "q", "observation");
  if (!p.is_number() || !q.is_number()) throw FormatError("observation: p and q must be numbers");
  o.p = p.get<double>();
  o.q = q.get<double>();
  require_probability(o.p, "observation p");
  require_probability(o.q, "observation q");
  if (const auto it = j.find("seed"); it != j.end() && it->is_number_unsigned()) o.seed = it->get<std::uint64_t>();
  if (const auto it = j.find("graph_ref"); it != j.end() && it->is_string()) o.graph_ref = it->get<std::string>();
  return o;
}

// -- results ----------------------------------------------------------------

inline json to_json(const EigenResult& e) {
  return {{"value", e.value},       {"vector", e.vector},       {"restarts_used", e.restarts_used},
          {"residual", e.residual}, {"converged", e.converged}, {"best_restart", e.best_restart}};
}

inline json to_json(const StageOneResult& s) {
  return {{"y_hat", s.y_hat}, {"objective", s.objective}, {"method", to_string(s.method)}, {"converged", s.converged}};
}

inline json to_json(const Certificate& c, bool include_tensors = true) {
  json j = {{"dual", to_string(c.dual)},
            {"stationarity_residual", c.stationarity_residual},
            {"primal_feasibility_residual", c.primal_feasibility_residual},
            {"dual_feasibility_residual", c.dual_feasibility_residual},
            {"complementary_slackness_residual", c.complementary_slackness_residual},
            {"a_on_y", c.a_on_y},
            {"primal_objective", c.primal_objective},
            {"dual_objective", c.dual_objective},
            {"duality_gap", c.duality_gap},
            {"lambda2_of_A", to_json(c.lambda2_of_A)},
            {"lambda_min_of_A", to_json(c.lambda_min_of_A)},
            {"spectral_checks_numerical", c.spectral_checks_numerical},
            {"certified", c.certified},
            {"failures", c.failures}};
  if (include_tensors) {
    j["V"] = to_json(c.V);
    j["V_plus"] = to_json(c.V_plus);
    j["V_minus"] = to_json(c.V_minus);
    j["A"] = to_json(c.A);
  }
  return j;
}

inline json to_json(const RecoveryResult& r, bool include_tensors = true) {
  json j = {{"y_recovered", r.y_recovered}, {"stage1", to_json(r.stage1)}, {"stage2_margin", r.stage2_margin}};
  j["certificate"] = r.certificate ? to_json(*r.certificate, include_tensors) : json(nullptr);
  j["stage1_match"] = r.stage1_match ? json(*r.stage1_match) : json(nullptr);
  j["exact"] = r.exact ? json(*r.exact) : json(nullptr);
  return j;
}

inline json to_json(const CutReport& c) {
  json members = json::array();
  for (const auto& h : c.members) members.push_back(std::vector<int>(h.members.begin(), h.members.end()));
  json boundary = json::array();
  for (const auto& e : c.boundary_edges) boundary.push_back(std::vector<int>(e.begin(), e.end()));
  return {{"semantics", to_string(c.semantics)}, {"set_size", c.set_size}, {"members", std::move(members)},
          {"boundary_edges", std::move(boundary)}, {"pair_count", c.pair_count}, {"expansion", c.expansion}};
}

inline json to_json(const CheegerAudit& a) {
  return {{"lambda2", a.lambda2},
          {"phi", a.phi},
          {"phi_pow_m", a.phi_pow_m},
          {"satisfied", a.satisfied},
          {"semantics", to_string(a.semantics)},
          {"phi_exact", a.phi_exact},
          {"ratio", a.ratio ? json(*a.ratio) : json(nullptr)},
          {"eigen", to_json(a.eigen)},
          {"cut", to_json(a.cut)}};
}

// -- files ------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace hoinf
