#include <gtest/gtest.h>

#include <sstream>

#include "likert_miner/config.hpp"
#include "likert_miner/pipeline.hpp"

using namespace likert;

namespace {

RunConfig parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  read_config(in, cfg, "test.cfg");
  return cfg;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Config, Defaults) {
  const RunConfig cfg;
  EXPECT_EQ(cfg.seed, 20131u);
  EXPECT_EQ(cfg.response, "Opinion");
  EXPECT_EQ(cfg.cluster_k, 3u);
  EXPECT_EQ(cfg.factor_q, 2u);
  EXPECT_TRUE(cfg.stages.forest);
}

TEST(Config, ParsesSectionKeysCommentsAndBlanks) {
  const auto cfg = parse(
      "# analysis settings\n"
      "\n"
      "input = data/survey.csv\n"
      "forest.trees=500   # ensemble size\n"
      "cluster.k = 4\n"
      "stages.tree = false\n"
      "correlation.method = pearson\n"
      "format = json,csv\n");
  EXPECT_EQ(cfg.input, "data/survey.csv");
  EXPECT_EQ(cfg.forest.trees, 500u);
  EXPECT_EQ(cfg.cluster_k, 4u);
  EXPECT_FALSE(cfg.stages.tree);
  EXPECT_EQ(cfg.correlation_method, CorrelationMethod::Pearson);
  EXPECT_EQ(cfg.format, (std::vector<std::string>{"json", "csv"}));
}

TEST(Config, ErrorsNameTheLine) {
  try {
    parse("seed=1\ncluster.k=three\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
    EXPECT_NE(std::string(e.what()).find("test.cfg:2"), std::string::npos);
  }
  EXPECT_EQ(kind_of([] { parse("no equals here\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse("forest.colour=red\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse("format=pdf\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse("stages.tree=maybe\n"); }), ErrorKind::ConfigError);
}

TEST(Config, EntriesRoundTrip) {
  RunConfig cfg = parse("cluster.k=5\nforest.cp=0.25\nassociations.pairs=instr:class\nresponse=Q10\n");
  RunConfig copy;
  for (const auto& [key, value] : config_entries(cfg)) apply_setting(copy, key, value);
  EXPECT_EQ(config_entries(copy), config_entries(cfg));
  EXPECT_EQ(copy.association_pairs.size(), 1u);
  EXPECT_EQ(copy.forest.tree.cp, 0.25);
}

TEST(Config, LaterSettingWins) {
  RunConfig cfg = parse("seed=3\n");
  apply_setting(cfg, "seed", "9");
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_TRUE(is_config_key("forest.trees"));
  EXPECT_FALSE(is_config_key("forest.colour"));
}

TEST(Config, Validation) {
  RunConfig cfg;
  EXPECT_EQ(kind_of([&] { validate_config(cfg); }), ErrorKind::ConfigError);  // no input
  cfg.input = "x.csv";
  EXPECT_NO_THROW(validate_config(cfg));

  auto opinion_without_clusters = cfg;
  opinion_without_clusters.stages.clustering = false;
  EXPECT_EQ(kind_of([&] { validate_config(opinion_without_clusters); }), ErrorKind::ConfigError);

  auto opinion_k4 = cfg;
  opinion_k4.cluster_k = 4;
  EXPECT_EQ(kind_of([&] { validate_config(opinion_k4); }), ErrorKind::ConfigError);
  opinion_k4.response = "Q10";
  EXPECT_NO_THROW(validate_config(opinion_k4));

  auto factor_alone = cfg;
  factor_alone.stages.correlation = false;
  EXPECT_EQ(kind_of([&] { validate_config(factor_alone); }), ErrorKind::ConfigError);
}

TEST(Config, SubcommandSelectsStages) {
  RunConfig cfg;
  cfg.input = "x.csv";
  const auto rel = config_for_subcommand(cfg, "reliability");
  EXPECT_TRUE(rel.stages.reliability);
  EXPECT_FALSE(rel.stages.summaries || rel.stages.forest || rel.stages.clustering);

  const auto factor = config_for_subcommand(cfg, "factor");
  EXPECT_TRUE(factor.stages.factor && factor.stages.correlation);
  EXPECT_NO_THROW(validate_config(factor));

  const auto forest = config_for_subcommand(cfg, "forest");
  EXPECT_TRUE(forest.stages.forest && forest.stages.clustering);
  EXPECT_FALSE(forest.stages.tree);

  cfg.response = "Q10";
  EXPECT_FALSE(config_for_subcommand(cfg, "tree").stages.clustering);
  EXPECT_EQ(kind_of([&] { config_for_subcommand(cfg, "plot"); }), ErrorKind::ConfigError);
}

TEST(Config, ShippedSampleMatchesDefaults) {
  const auto cfg = load_config(std::string(LIKERT_SOURCE_DIR) + "/config/analyze.cfg");
  RunConfig defaults;
  defaults.input = cfg.input;
  defaults.format = {"json", "text", "csv"};
  EXPECT_EQ(config_entries(cfg), config_entries(defaults));
}
