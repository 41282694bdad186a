#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "association.hpp"
#include "clustering.hpp"
#include "config.hpp"
#include "correlation.hpp"
#include "dataset.hpp"
#include "factor.hpp"
#include "forest.hpp"
#include "parallel.hpp"
#include "reliability.hpp"
#include "summaries.hpp"
#include "tree.hpp"

namespace likert {

struct SubsetAlpha {
  std::optional<double> alpha;  // empty when undefined on the subset
  std::string note;
};

struct ReliabilityStage {
  ReliabilityReport items;
  std::optional<ReliabilityReport> respondents;
  std::string respondents_note;
  VariationPartition partition;
  SubsetAlpha nonzero_alpha;
  SubsetAlpha zero_alpha;
};

struct GroupSummary {
  int group = 0;
  std::size_t n = 0;
  GrandSummary summary;
};

struct SummariesStage {
  GrandSummary overall;
  std::vector<ItemDistribution> distributions;
  std::vector<GroupSummary> by_instructor;
};

struct AssociationResult {
  ContingencyTable table;
  std::optional<ChiSquaredResult> test;
  std::string error;  // set when the test could not be computed
};

struct AssociationsStage {
  std::vector<AssociationResult> results;
  ContingencyTable course_variation;
};

struct CorrelationStage {
  CorrelationMatrix matrix;
  std::optional<CorrelationMatrix> pearson;  // the comparison partner when the main method is tau-b
  std::optional<CorrelationComparison> comparison;
};

struct ClusteringStage {
  ClusterModel model;
  std::vector<std::string> labels;  // only for k = 3
  std::vector<VariationPoint> curve;
};

struct FactorStage {
  FactorModel model;
  std::optional<FactorScores> scores;
};

struct SupervisedData {
  std::string response;
  LabeledDataset data;
};

struct TreeStage {
  std::string response;
  std::vector<std::string> classes;
  std::vector<std::string> feature_names;
  DecisionTree tree;
  double training_error = 0.0;
};

struct ForestStage {
  std::string response;
  Forest forest;
  double avoob = 0.0;
  std::size_t defined_trees = 0;
  ConfusionMatrix confusion;
  ImportanceReport importance;
};

struct StageFailure {
  std::string stage;
  ErrorKind kind = ErrorKind::InvalidArgument;
  std::string message;
};

struct AnalysisReport {
  RunConfig config;
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<std::string> item_names;
  std::size_t instructors = 0;
  std::size_t courses = 0;
  bool loaded = false;

  std::vector<std::string> stages_run;  // completed stages in execution order
  std::optional<ReliabilityStage> reliability;
  std::optional<SummariesStage> summaries;
  std::optional<AssociationsStage> associations;
  std::optional<CorrelationStage> correlation;
  std::optional<ClusteringStage> clustering;
  std::optional<FactorStage> factor;
  std::optional<TreeStage> tree;
  std::optional<ForestStage> forest;
  std::optional<StageFailure> failure;

  bool ok() const noexcept { return !failure.has_value(); }
  int exit_code() const noexcept { return ok() ? 0 : 1; }
};

namespace detail {

inline SubsetAlpha subset_alpha(const LikertMatrix& m, const std::vector<std::size_t>& rows) {
  if (rows.size() < 2) return {std::nullopt, "fewer than two rows"};
  try {
    return {cronbach_alpha(m.select_rows(rows)).alpha, ""};
  } catch (const Error& e) {
    return {std::nullopt, e.what()};
  }
}

inline ReliabilityStage run_reliability(const EvaluationDataset& ds) {
  ReliabilityStage s;
  s.items = cronbach_alpha(ds.matrix());
  try {
    s.respondents = respondent_reliability(ds.matrix());
  } catch (const Error& e) {
    s.respondents_note = e.what();
  }
  s.partition = partition_by_variation(ds.matrix());
  s.nonzero_alpha = subset_alpha(ds.matrix(), s.partition.nonzero_rows);
  s.zero_alpha = subset_alpha(ds.matrix(), s.partition.zero_rows);
  return s;
}

inline SummariesStage run_summaries(const EvaluationDataset& ds, bool by_instructor) {
  SummariesStage s{summarize(ds.matrix()), item_distributions(ds.matrix()), {}};
  if (by_instructor) {
    const std::set<int> ids(ds.meta().instructor.begin(), ds.meta().instructor.end());
    for (int id : ids) {
      const auto sub = filter_rows(ds, RowFilter::instructor(id));
      s.by_instructor.push_back({id, sub.n(), summarize(sub.matrix())});
    }
  }
  return s;
}

inline AssociationsStage run_associations(const EvaluationDataset& ds, const RunConfig& cfg) {
  AssociationsStage s;
  for (const auto& [r, c] : cfg.association_pairs) {
    AssociationResult result{crosstab(ds, r, c), std::nullopt, ""};
    try {
      result.test = chi_squared_test(result.table);
    } catch (const Error& e) {
      result.error = e.what();
    }
    s.results.push_back(std::move(result));
  }
  s.course_variation = crosstab(ds, "class", "variation");
  return s;
}

inline CorrelationStage run_correlation(const EvaluationDataset& ds, const RunConfig& cfg, std::size_t workers) {
  CorrelationStage s{correlation_matrix(ds.matrix(), cfg.correlation_method, workers), std::nullopt, std::nullopt};
  if (cfg.correlation_compare && ds.p() >= 3) {
    if (cfg.correlation_method == CorrelationMethod::KendallTauB) {
      s.pearson = correlation_matrix(ds.matrix(), CorrelationMethod::Pearson, workers);
      s.comparison = compare_correlations(*s.pearson, s.matrix);
    } else {
      const auto kendall = correlation_matrix(ds.matrix(), CorrelationMethod::KendallTauB, workers);
      s.comparison = compare_correlations(s.matrix, kendall);
    }
  }
  return s;
}

inline ClusteringStage run_clustering(const EvaluationDataset& ds, const RunConfig& cfg) {
  ClusteringStage s;
  const auto x = ds.matrix().to_real();
  s.model = kmeans(x, cfg.cluster_k, cfg.seed, cfg.kmeans);
  if (cfg.cluster_k == 3) s.labels = label_clusters(s.model);
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k <= std::min(cfg.cluster_curve_max_k, ds.n()); ++k) ks.push_back(k);
  if (!ks.empty()) s.curve = variation_explained_curve(x, ks, cfg.seed, cfg.kmeans);
  return s;
}

inline FactorStage run_factor(const EvaluationDataset& ds, const RunConfig& cfg, const CorrelationMatrix& c) {
  detail::require(cfg.factor_q < ds.p(), ErrorKind::ConfigError,
                  "factor.q = " + std::to_string(cfg.factor_q) + " must be below the item count " +
                      std::to_string(ds.p()));
  FactorStage s{extract_factors(c, cfg.factor_q, cfg.factor), std::nullopt};
  if (cfg.factor_scores) s.scores = factor_scores(s.model, ds.matrix(), c);
  return s;
}

inline SupervisedData supervised_data(const EvaluationDataset& ds, const RunConfig& cfg,
                                      const std::optional<ClusteringStage>& clustering) {
  if (cfg.response == "Opinion") {
    detail::require(clustering.has_value(), ErrorKind::StageNotRun, "response Opinion needs the clustering stage");
    return {"Opinion", derived_response_dataset(ds.matrix(), opinion_column(clustering->model))};
  }
  std::vector<std::pair<std::string, std::vector<int>>> extra;
  if (cfg.response_include_metadata) {
    extra.emplace_back(cfg.schema.attendance, ds.meta().attendance);
    extra.emplace_back(cfg.schema.difficulty, ds.meta().difficulty);
    extra.emplace_back(cfg.schema.repetitions, ds.meta().repetitions);
  }
  return {cfg.response, item_response_dataset(ds.matrix(), cfg.response, extra)};
}

inline TreeStage run_tree(const SupervisedData& sd, const RunConfig& cfg) {
  TreeStage s{sd.response, sd.data.classes, sd.data.feature_names, grow_tree(sd.data, cfg.tree), 0.0};
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < sd.data.n(); ++i) wrong += s.tree.predict(sd.data.features.row(i)) != sd.data.labels[i];
  s.training_error = sd.data.n() ? static_cast<double>(wrong) / static_cast<double>(sd.data.n()) : 0.0;
  return s;
}

inline ForestStage run_forest(const SupervisedData& sd, const RunConfig& cfg, std::size_t workers) {
  ForestParams params = cfg.forest;
  params.seed = cfg.seed;
  params.workers = workers;
  ForestStage s;
  s.response = sd.response;
  s.forest = train_forest(sd.data, params);
  s.avoob = avoob(s.forest);
  for (const auto& m : s.forest.members) s.defined_trees += m.oob_error.has_value();
  s.confusion = oob_confusion(s.forest, sd.data);
  s.importance = variable_importance(s.forest);
  return s;
}

}  // namespace detail

/// Enables the stages a single-stage subcommand depends on.
inline RunConfig config_for_subcommand(RunConfig cfg, const std::string& subcommand) {
  if (subcommand == "analyze") return cfg;
  StageToggles only{false, false, false, false, false, false, false, false};
  if (subcommand == "reliability") {
    only.reliability = true;
  } else if (subcommand == "summarize") {
    only.summaries = true;
  } else if (subcommand == "associate") {
    only.associations = true;
  } else if (subcommand == "correlate") {
    only.correlation = true;
  } else if (subcommand == "cluster") {
    only.clustering = true;
  } else if (subcommand == "factor") {
    only.correlation = only.factor = true;
  } else if (subcommand == "tree" || subcommand == "forest") {
    (subcommand == "tree" ? only.tree : only.forest) = true;
    only.clustering = cfg.response == "Opinion";
  } else {
    detail::fail(ErrorKind::ConfigError, "unknown subcommand " + subcommand);
  }
  cfg.stages = only;
  return cfg;
}

/// Runs the enabled stages in dependency order. A failing stage stops the
/// run; everything computed before it stays in the report together with the
/// failure record.
inline AnalysisReport run_pipeline(const RunConfig& cfg, const EvaluationDataset& loaded) {
  AnalysisReport report;
  report.config = cfg;
  report.n = loaded.n();
  report.p = loaded.p();
  report.item_names = loaded.matrix().item_names();
  report.instructors = std::set<int>(loaded.meta().instructor.begin(), loaded.meta().instructor.end()).size();
  report.courses = std::set<int>(loaded.meta().course.begin(), loaded.meta().course.end()).size();
  report.loaded = true;

  const std::size_t workers = default_worker_count();
  EvaluationDataset ds = loaded.with_column(variation_column(partition_by_variation(loaded.matrix())));
  std::optional<SupervisedData> supervised;

  auto stage = [&](const char* name, bool enabled, auto&& body) {
    if (!enabled || report.failure) return;
    try {
      body();
      report.stages_run.emplace_back(name);
    } catch (const Error& e) {
      report.failure = StageFailure{name, e.kind(), e.what()};
    } catch (const std::exception& e) {
      report.failure = StageFailure{name, ErrorKind::InvalidArgument, e.what()};
    }
  };

  const auto& on = cfg.stages;
  stage("reliability", on.reliability, [&] { report.reliability = detail::run_reliability(ds); });
  stage("summaries", on.summaries, [&] { report.summaries = detail::run_summaries(ds, cfg.summaries_by_instructor); });
  stage("associations", on.associations, [&] { report.associations = detail::run_associations(ds, cfg); });
  stage("correlation", on.correlation, [&] { report.correlation = detail::run_correlation(ds, cfg, workers); });
  stage("clustering", on.clustering, [&] { report.clustering = detail::run_clustering(ds, cfg); });
  stage("factor", on.factor, [&] {
    detail::require(report.correlation.has_value(), ErrorKind::StageNotRun, "factor needs the correlation stage");
    report.factor = detail::run_factor(ds, cfg, report.correlation->matrix);
  });
  stage("tree", on.tree, [&] {
    supervised = detail::supervised_data(ds, cfg, report.clustering);
    report.tree = detail::run_tree(*supervised, cfg);
  });
  stage("forest", on.forest, [&] {
    if (!supervised) supervised = detail::supervised_data(ds, cfg, report.clustering);
    report.forest = detail::run_forest(*supervised, cfg, workers);
  });
  return report;
}

/// Loads the configured input and runs the pipeline. A load failure is
/// reported as a failed "load" stage.
inline AnalysisReport run_pipeline(const RunConfig& cfg) {
  validate_config(cfg);
  try {
    return run_pipeline(cfg, load_csv(cfg.input, cfg.schema));
  } catch (const Error& e) {
    AnalysisReport report;
    report.config = cfg;
    report.failure = StageFailure{"load", e.kind(), e.what()};
    return report;
  }
}

}  // namespace likert
