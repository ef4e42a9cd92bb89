#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace hoinf;

TEST(TensorJson, RoundTrip) {
  SymmetricTensor t(6, 5);
  t.set({0, 0, 1, 2, 3, 4}, -1.5);
  t.set({1, 1, 1, 1, 2, 2}, 2.0);
  const auto back = tensor_from_json(json::parse(to_json(t).dump()));
  EXPECT_EQ(max_abs_difference(t, back), 0.0);
  EXPECT_EQ(back.order(), 6);
  EXPECT_EQ(back.dim(), 5);
}

TEST(TensorJson, RejectsMalformedEntries) {
  EXPECT_THROW(tensor_from_json(json::parse(R"({"m":2,"n":3,"entries":[[[1,0],1.0]]})")), FormatError);
  EXPECT_THROW(tensor_from_json(json::parse(R"({"m":2,"n":3,"entries":[[[0,1],1.0],[[0,1],2.0]]})")), FormatError);
  EXPECT_THROW(tensor_from_json(json::parse(R"({"m":2,"n":3,"entries":[[[0,1,2],1.0]]})")), FormatError);
  EXPECT_THROW(tensor_from_json(json::parse(R"({"m":2,"n":3,"entries":[[[0,1],"x"]]})")), FormatError);
  EXPECT_THROW(tensor_from_json(json::parse(R"({"m":2,"entries":[]})")), FormatError);
  EXPECT_THROW(tensor_from_json(json::parse(R"({"m":2,"n":3,"entries":[[[0,3],1.0]]})")), std::domain_error);
  EXPECT_THROW(tensor_from_json(json::parse(R"({"m":4,"n":3,"entries":[]})")), std::domain_error);
}

TEST(HypergraphJson, RoundTripAndValidation) {
  const auto g = erdos_renyi_hypergraph(9, 6, 0.3, 4);
  EXPECT_EQ(hypergraph_from_json(json::parse(to_json(g).dump())), g);
  EXPECT_THROW(hypergraph_from_json(json::parse(R"({"n":3,"m":2,"edges":[[1,0]]})")), std::domain_error);
  EXPECT_THROW(hypergraph_from_json(json::parse(R"({"n":3,"m":2,"edges":[[0,1,2]]})")), FormatError);
  EXPECT_THROW(hypergraph_from_json(json::parse(R"({"n":3,"m":2,"edges":"none"})")), FormatError);
}

TEST(ObservationJson, RoundTrip) {
  const auto g = complete_hypergraph(8, 6);
  auto obs = sample_observation(g, random_labels(8, 1), 0.2, 0.1, 77);
  obs.graph_ref = "g.json";
  const auto back = observation_from_json(json::parse(to_json(obs).dump()));
  EXPECT_EQ(max_abs_difference(obs.X, back.X), 0.0);
  EXPECT_EQ(back.z, obs.z);
  EXPECT_EQ(back.p, 0.2);
  EXPECT_EQ(back.q, 0.1);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.graph_ref, "g.json");
  auto bad = to_json(obs);
  bad["z"][0] = 0;
  EXPECT_THROW(observation_from_json(bad), std::domain_error);
  bad = to_json(obs);
  bad["p"] = 1.0;
  EXPECT_THROW(observation_from_json(bad), std::domain_error);
}

TEST(ResultJson, RecoveryResultFields) {
  const auto g = complete_hypergraph(8, 6);
  const auto y = random_labels(8, 2);
  PipelineConfig cfg;
  cfg.certify = true;
  cfg.certify_config.eigen.restarts = 4;
  const auto r = run_pipeline(sample_observation(g, y, 0.0, 0.0, 2), cfg, GroundTruth{y});
  const auto j = to_json(r);
  EXPECT_EQ(j.at("exact"), true);
  EXPECT_EQ(j.at("certificate").at("certified"), true);
  EXPECT_TRUE(j.at("certificate").contains("A"));
  EXPECT_FALSE(to_json(r, false).at("certificate").contains("A"));
  EXPECT_EQ(j.at("stage1").at("method"), "oracle");
}

TEST(Experiment, GoldenCsvHeader) {
  EXPECT_STREQ(kCsvHeader,
               "family,n,m,p,q,phi_exact_or_bound,trial,seed,method,stage1_match,exact,objective,wall_ms");
  const auto csv = to_csv({});
  EXPECT_EQ(csv, std::string(kCsvHeader) + "\n");
}

TEST(Experiment, CleanCompleteRecoversEveryTrial) {
  ExperimentConfig c;
  c.family = "complete";
  c.n = 8;
  c.m = 6;
  c.p_grid = {0.0};
  c.q = 0.0;
  c.trials = 20;
  const auto out = run_experiment(c);
  ASSERT_EQ(out.rows.size(), 20u);
  const auto& cell = out.summary.at("cells").at(0);
  EXPECT_EQ(cell.at("exact_rate"), 1.0);
  EXPECT_EQ(cell.at("stage1_rate"), 1.0);
  EXPECT_EQ(cell.at("phi_exact"), false);
  EXPECT_TRUE(cell.at("rate_at_least_bound").get<bool>());
}

TEST(Experiment, ByteIdenticalReruns) {
  ExperimentConfig c;
  c.family = "two_blocks";
  c.n = 12;
  c.bridges = {0, 2};
  c.p_grid = {0.0, 0.2};
  c.q = 0.1;
  c.trials = 3;
  c.record_wall_time = false;
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  EXPECT_EQ(to_csv(a.rows), to_csv(b.rows));
  EXPECT_EQ(a.summary.dump(), b.summary.dump());
  EXPECT_EQ(a.manifest.dump(), b.manifest.dump());
  c.threads = 3;
  EXPECT_EQ(to_csv(run_experiment(c).rows), to_csv(a.rows));
}

TEST(Experiment, ManifestIsReplayable) {
  ExperimentConfig c;
  c.family = "erdos_renyi";
  c.n = 9;
  c.p_grid = {0.1};
  c.trials = 2;
  c.seed = 1234;
  c.record_wall_time = false;
  const auto out = run_experiment(c);
  EXPECT_EQ(out.manifest.at("version"), kVersion);
  EXPECT_EQ(out.manifest.at("config_hash"), out.summary.at("config_hash"));
  const auto replay = experiment_config_from_json(out.manifest.at("config"));
  EXPECT_EQ(to_json(replay), to_json(c));
  EXPECT_EQ(to_csv(run_experiment(replay).rows), to_csv(out.rows));
  ASSERT_EQ(out.manifest.at("seeds").size(), 2u);
  EXPECT_EQ(out.manifest.at("seeds").at(1).at("seed").get<std::uint64_t>(), trial_seed(1234, 0, 1));
}

TEST(Experiment, SeedsAreDistinctPerCellAndTrial) {
  std::set<std::uint64_t> seen;
  for (std::size_t cell = 0; cell < 10; ++cell) {
    for (int t = 0; t < 50; ++t) EXPECT_TRUE(seen.insert(trial_seed(7, cell, t)).second);
  }
}

TEST(Experiment, OracleDowngradeWarns) {
  ExperimentConfig c;
  c.n = 8;
  c.trials = 1;
  c.method = StageOneMethod::kOracle;
  c.cell_budget_seconds = 1e-9;
  const auto out = run_experiment(c);
  ASSERT_EQ(out.warnings.size(), 1u);
  EXPECT_EQ(out.rows.front().method, StageOneMethod::kRelaxation);
  c.cell_budget_seconds = 60;
  EXPECT_TRUE(run_experiment(c).warnings.empty());
}

TEST(Experiment, ValidationRejectsBadConfigs) {
  ExperimentConfig c;
  c.p_grid.clear();
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c = {};
  c.trials = 0;
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c = {};
  c.family = "star";
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c = {};
  c.q = 1.0;
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  EXPECT_THROW(experiment_config_from_json(json::parse(R"({"n":"eight"})")), FormatError);
}
