#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pipeline.hpp"

namespace likert {

using Json = nlohmann::ordered_json;

namespace detail {

// Shortest decimal text that reads back to the same double.
inline std::string exact(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

inline Json matrix_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json matrix_json(const Matrix<std::int64_t>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json summary_json(const GrandSummary& s) {
  Json modes = Json::array(), medians = Json::array();
  for (const auto& m : s.column_modes) modes.push_back({{"mode", m.mode}, {"ties", m.ties}});
  for (const auto& m : s.column_medians) medians.push_back(m.value);
  return {{"grand_mean", s.grand_mean},
          {"grand_mode", s.grand_mode},
          {"grand_mode_ties", s.grand_mode_ties},
          {"grand_median", s.grand_median.value},
          {"grand_median_on_likert_level", s.grand_median.on_likert_level},
          {"column_modes", modes},
          {"column_medians", medians}};
}

inline Json tree_json(const DecisionTree& t) {
  Json nodes = Json::array();
  for (const auto& node : t.nodes()) {
    Json j{{"leaf", node.is_leaf}, {"depth", node.depth}, {"class_counts", node.class_counts},
           {"predicted", t.classes()[static_cast<std::size_t>(node.predicted_class)]}};
    if (!node.is_leaf) {
      j["feature"] = t.feature_names()[node.feature];
      j["threshold"] = node.threshold;
      j["left"] = node.left;
      j["right"] = node.right;
      j["impurity_decrease"] = node.impurity_decrease;
    }
    nodes.push_back(std::move(j));
  }
  return nodes;
}

inline std::size_t tree_depth(const DecisionTree& t) {
  std::size_t d = 0;
  for (const auto& node : t.nodes()) d = std::max(d, node.depth);
  return d;
}

// Human-readable renderings, one per stage.

inline std::string load_text(const AnalysisReport& r) {
  std::ostringstream out;
  out << "Dataset: " << r.n << " respondents x " << r.p << " items, " << r.instructors << " instructors, "
      << r.courses << " courses\n";
  return out.str();
}

inline std::string reliability_text(const ReliabilityStage& s, std::size_t n) {
  std::ostringstream out;
  out << "Cronbach alpha (items): " << fixed(s.items.alpha, 4) << "\n";
  out << "Respondent reliability: "
      << (s.respondents ? fixed(s.respondents->alpha, 4) : "undefined (" + s.respondents_note + ")") << "\n";
  out << "Zero-variation respondents: " << s.partition.zero_rows.size() << " of " << n << " ("
      << fixed(s.partition.zero_fraction, 4) << ")\n";
  auto subset = [](const SubsetAlpha& a) { return a.alpha ? fixed(*a.alpha, 4) : "undefined (" + a.note + ")"; };
  out << "Alpha, nonzero-variation subset: " << subset(s.nonzero_alpha) << "\n";
  out << "Alpha, zero-variation subset: " << subset(s.zero_alpha) << "\n";
  return out.str();
}

inline std::string summaries_text(const SummariesStage& s) {
  std::ostringstream out;
  out << "Grand mean " << fixed(s.overall.grand_mean, 3) << ", grand mode " << s.overall.grand_mode
      << ", grand median " << fixed(s.overall.grand_median.value, 1)
      << (s.overall.grand_median.on_likert_level ? "" : " (between levels)") << "\n";
  for (const auto& g : s.by_instructor)
    out << "  instructor " << g.group << " (n=" << g.n << "): mean " << fixed(g.summary.grand_mean, 3) << ", mode "
        << g.summary.grand_mode << ", median " << fixed(g.summary.grand_median.value, 1) << "\n";
  return out.str();
}

inline std::string associations_text(const AssociationsStage& s) {
  std::ostringstream out;
  for (const auto& a : s.results) {
    out << a.table.row_attr << " x " << a.table.col_attr << ": ";
    if (a.test)
      out << "X-squared = " << fixed(a.test->statistic, 3) << ", df = " << a.test->df
          << ", p-value = " << format_p_value(a.test->p_value) << "\n";
    else
      out << "not computed (" << a.error << ")\n";
  }
  return out.str();
}

inline std::string correlation_text(const CorrelationStage& s) {
  std::ostringstream out;
  out << "Correlation matrix: " << to_string(s.matrix.method) << ", " << s.matrix.values.rows() << " x "
      << s.matrix.values.cols() << "\n";
  if (s.comparison)
    out << "Pearson minus Kendall tau-b, mean off-diagonal: " << fixed(s.comparison->mean_difference, 4)
        << "; rank agreement " << fixed(s.comparison->rank_agreement, 4) << "\n";
  return out.str();
}

inline std::string clustering_text(const ClusteringStage& s) {
  std::ostringstream out;
  out << "k-means, k = " << s.model.k << ": WCSS " << fixed(s.model.wcss, 2) << ", variation explained "
      << fixed(100.0 * s.model.pct_variation, 2) << "%\n";
  for (std::size_t c = 0; c < s.model.k; ++c) {
    out << "  cluster " << c + 1 << ": center average " << fixed(s.model.center_averages[c], 3) << ", size "
        << s.model.sizes[c];
    if (!s.labels.empty()) out << ", " << s.labels[c];
    out << "\n";
  }
  if (!s.curve.empty()) {
    out << "  variation explained by k:";
    for (const auto& pt : s.curve) out << " " << pt.k << ":" << fixed(100.0 * pt.pct_variation, 1) << "%";
    out << "\n";
  }
  return out.str();
}

inline std::string factor_text(const FactorStage& s) {
  std::ostringstream out;
  const auto& m = s.model;
  out << "Principal-axis factoring, q = " << m.q << ", rotation " << m.rotation << ", iterations " << m.iterations
      << (m.converged ? "" : " (not converged)") << (m.heywood ? ", Heywood case" : "")
      << (m.degenerate ? ", degenerate" : "") << "\n";
  out << "  variation captured: " << fixed(100.0 * m.pct_variance, 1) << "%\n";
  for (std::size_t i = 0; i < m.loadings.rows(); ++i) {
    out << "  " << std::left << std::setw(8) << m.item_names[i] << std::right;
    for (std::size_t f = 0; f < m.q; ++f) out << std::setw(8) << fixed(m.loadings(i, f), 3);
    out << "\n";
  }
  return out.str();
}

inline std::string tree_text(const TreeStage& s) {
  std::ostringstream out;
  out << "Classification tree for " << s.response << ": " << s.tree.leaf_count() << " leaves, training error "
      << fixed(s.training_error, 4) << "\n"
      << s.tree.render();
  return out.str();
}

inline std::string forest_text(const ForestStage& s) {
  std::ostringstream out;
  out << "Random forest for " << s.response << ": " << s.forest.size() << " trees, " << s.forest.features_per_tree
      << " features per tree, AVOOB " << fixed(s.avoob, 5) << "\n";
  out << "  OOB confusion (rows true, columns predicted):\n";
  const auto& cm = s.confusion;
  for (std::size_t k = 0; k < cm.classes.size(); ++k) {
    out << "    " << std::left << std::setw(14) << cm.classes[k] << std::right;
    for (std::size_t c = 0; c < cm.classes.size(); ++c) out << std::setw(7) << cm.counts(k, c);
    out << "  class.error " << fixed(cm.class_error[k], 4) << "\n";
  }
  if (cm.uncovered) out << "  rows in every bag (not scored): " << cm.uncovered << "\n";
  out << "  importance:";
  for (std::size_t r = 0; r < std::min<std::size_t>(5, s.importance.ranking.size()); ++r) {
    const auto j = s.importance.ranking[r];
    out << " " << s.importance.feature_names[j] << " " << fixed(s.importance.scores[j], 2);
  }
  out << "\n";
  return out.str();
}

}  // namespace detail

/// Machine-readable report. Sections follow the execution order; stages that
/// were disabled are absent.
inline Json to_json(const AnalysisReport& r) {
  Json config = Json::object();
  for (const auto& [k, v] : config_entries(r.config)) config[k] = v;

  Json sections = Json::array();
  auto section = [&](const std::string& name, Json payload, std::string text) {
    sections.push_back({{"stage", name}, {"payload", std::move(payload)}, {"text", std::move(text)}});
  };

  if (r.loaded)
    section("load",
            {{"n", r.n}, {"p", r.p}, {"items", r.item_names}, {"instructors", r.instructors}, {"courses", r.courses}},
            detail::load_text(r));

  for (const auto& name : r.stages_run) {
    if (name == "reliability") {
      const auto& s = *r.reliability;
      section(name,
              {{"alpha", s.items.alpha},
               {"n", s.items.n},
               {"p", s.items.p},
               {"item_variances", s.items.item_variances},
               {"total_variance", s.items.total_variance},
               {"respondent_reliability", s.respondents ? Json(s.respondents->alpha) : Json(nullptr)},
               {"respondent_reliability_note", s.respondents_note},
               {"zero_variation_count", s.partition.zero_rows.size()},
               {"nonzero_variation_count", s.partition.nonzero_rows.size()},
               {"zero_fraction", s.partition.zero_fraction},
               {"alpha_nonzero_variation", detail::optional_number(s.nonzero_alpha.alpha)},
               {"alpha_zero_variation", detail::optional_number(s.zero_alpha.alpha)}},
              detail::reliability_text(s, r.n));
    } else if (name == "summaries") {
      const auto& s = *r.summaries;
      Json dists = Json::array(), groups = Json::array();
      for (const auto& d : s.distributions)
        dists.push_back({{"item", d.item_name}, {"counts", d.counts}});
      for (const auto& g : s.by_instructor)
        groups.push_back({{"instructor", g.group}, {"n", g.n}, {"summary", detail::summary_json(g.summary)}});
      section(name, {{"overall", detail::summary_json(s.overall)}, {"item_distributions", dists}, {"by_instructor", groups}},
              detail::summaries_text(s));
    } else if (name == "associations") {
      const auto& s = *r.associations;
      Json tests = Json::array();
      for (const auto& a : s.results) {
        Json t{{"row_attr", a.table.row_attr},
               {"col_attr", a.table.col_attr},
               {"row_labels", a.table.row_labels},
               {"col_labels", a.table.col_labels},
               {"observed", detail::matrix_json(a.table.observed)},
               {"total", a.table.total}};
        if (a.test) {
          t["expected"] = detail::matrix_json(a.test->expected);
          t["statistic"] = a.test->statistic;
          t["df"] = a.test->df;
          t["p_value"] = a.test->p_value;
          t["p_value_text"] = format_p_value(a.test->p_value);
        } else {
          t["error"] = a.error;
        }
        tests.push_back(std::move(t));
      }
      section(name, {{"tests", tests}}, detail::associations_text(s));
    } else if (name == "correlation") {
      const auto& s = *r.correlation;
      Json payload{{"method", to_string(s.matrix.method)},
                   {"items", s.matrix.item_names},
                   {"matrix", detail::matrix_json(s.matrix.values)}};
      if (s.comparison)
        payload["comparison"] = {{"mean_difference", s.comparison->mean_difference},
                                 {"rank_agreement", s.comparison->rank_agreement}};
      section(name, std::move(payload), detail::correlation_text(s));
    } else if (name == "clustering") {
      const auto& s = *r.clustering;
      Json curve = Json::array();
      for (const auto& pt : s.curve) curve.push_back({{"k", pt.k}, {"pct_variation", pt.pct_variation}, {"rerun", pt.rerun}});
      section(name,
              {{"k", s.model.k},
               {"restarts", r.config.kmeans.restarts},
               {"centers", detail::matrix_json(s.model.centers)},
               {"sizes", s.model.sizes},
               {"center_averages", s.model.center_averages},
               {"labels", s.labels},
               {"wcss", s.model.wcss},
               {"between_ss", s.model.between_ss},
               {"total_ss", s.model.total_ss},
               {"pct_variation", s.model.pct_variation},
               {"iterations", s.model.iterations},
               {"variation_curve", curve}},
              detail::clustering_text(s));
    } else if (name == "factor") {
      const auto& m = r.factor->model;
      Json loadings = Json::array();
      for (std::size_t i = 0; i < m.loadings.rows(); ++i) {
        std::vector<double> row(m.q);
        for (std::size_t f = 0; f < m.q; ++f) row[f] = m.loadings(i, f);
        loadings.push_back({{"item", m.item_names[i]},
                            {"loadings", row},
                            {"communality", m.communalities[i]},
                            {"uniqueness", m.uniquenesses[i]}});
      }
      section(name,
              {{"q", m.q},
               {"method", "principal_axis"},
               {"rotation", m.rotation},
               {"loadings", loadings},
               {"ss_loadings", m.ss_loadings},
               {"pct_variance", m.pct_variance},
               {"iterations", m.iterations},
               {"converged", m.converged},
               {"heywood", m.heywood},
               {"degenerate", m.degenerate},
               {"scores_method", r.factor->scores ? Json(r.factor->scores->method) : Json(nullptr)}},
              detail::factor_text(*r.factor));
    } else if (name == "tree") {
      const auto& s = *r.tree;
      const auto& root = s.tree.root();
      section(name,
              {{"response", s.response},
               {"classes", s.classes},
               {"features", s.feature_names},
               {"params",
                {{"min_split", s.tree.params().min_split},
                 {"min_leaf", s.tree.params().min_leaf},
                 {"max_depth", s.tree.params().max_depth},
                 {"cp", s.tree.params().cp}}},
               {"root_split", root.is_leaf ? Json(nullptr) : Json(s.feature_names[root.feature])},
               {"leaves", s.tree.leaf_count()},
               {"depth", detail::tree_depth(s.tree)},
               {"training_error", s.training_error},
               {"nodes", detail::tree_json(s.tree)}},
              detail::tree_text(s));
    } else if (name == "forest") {
      const auto& s = *r.forest;
      Json importance = Json::array();
      for (std::size_t rank = 0; rank < s.importance.ranking.size(); ++rank) {
        const auto j = s.importance.ranking[rank];
        importance.push_back({{"feature", s.importance.feature_names[j]}, {"importance", s.importance.scores[j]}, {"rank", rank + 1}});
      }
      Json oob = Json::array();
      for (const auto& m : s.forest.members) oob.push_back(detail::optional_number(m.oob_error));
      section(name,
              {{"response", s.response},
               {"trees", s.forest.size()},
               {"features_per_tree", s.forest.features_per_tree},
               {"seed", r.config.seed},
               {"avoob", s.avoob},
               {"trees_with_oob", s.defined_trees},
               {"oob_errors", oob},
               {"confusion",
                {{"classes", s.confusion.classes},
                 {"counts", detail::matrix_json(s.confusion.counts)},
                 {"class_error", s.confusion.class_error},
                 {"covered", s.confusion.covered},
                 {"uncovered", s.confusion.uncovered}}},
               {"importance", importance}},
              detail::forest_text(s));
    }
  }

  Json failure = nullptr;
  if (r.failure)
    failure = {{"stage", r.failure->stage}, {"kind", to_string(r.failure->kind)}, {"message", r.failure->message}};
  return {{"tool", "likert-miner"},
          {"report_version", 1},
          {"status", r.ok() ? "ok" : "failed"},
          {"failure", failure},
          {"seed", r.config.seed},
          {"config", config},
          {"stages", r.stages_run},
          {"sections", sections}};
}

inline std::string render_text(const AnalysisReport& r) {
  const Json j = to_json(r);
  std::ostringstream out;
  for (const auto& s : j["sections"]) {
    out << "== " << s["stage"].get<std::string>() << " ==\n" << s["text"].get<std::string>() << "\n";
  }
  if (r.failure)
    out << "FAILED in stage " << r.failure->stage << ": " << to_string(r.failure->kind) << ": " << r.failure->message
        << "\n";
  return out.str();
}

inline const std::vector<std::string>& plot_kinds() {
  static const std::vector<std::string> kinds{"course_variation", "item_bars", "correlation", "variation_curve",
                                              "loadings",         "scores",    "confusion",   "importance"};
  return kinds;
}

/// Whether the stage behind a plot kind ran.
inline bool plot_available(const AnalysisReport& r, const std::string& kind) {
  if (kind == "course_variation") return r.associations.has_value();
  if (kind == "item_bars") return r.summaries.has_value();
  if (kind == "correlation") return r.correlation.has_value();
  if (kind == "variation_curve") return r.clustering.has_value();
  if (kind == "loadings") return r.factor.has_value();
  if (kind == "scores") return r.factor.has_value() && r.factor->scores.has_value();
  if (kind == "confusion" || kind == "importance") return r.forest.has_value();
  detail::fail(ErrorKind::InvalidArgument, "unknown plot kind " + kind);
}

/// Writes the CSV (and for correlation also JSON) plot data for one kind into
/// `dir`, returning the written paths.
inline std::vector<std::filesystem::path> emit_plot_data(const AnalysisReport& r, const std::string& kind,
                                                         const std::filesystem::path& dir) {
  if (!plot_available(r, kind)) detail::fail(ErrorKind::StageNotRun, "plot " + kind + " needs a stage that did not run");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) detail::fail(ErrorKind::IoError, "cannot write " + path.string());
    written.push_back(path);
    return out;
  };
  using detail::exact;

  if (kind == "course_variation") {
    const auto& t = r.associations->course_variation;
    auto out = open(dir / "course_variation.csv");
    out << "course,variation_class,count\n";
    for (std::size_t i = 0; i < t.row_labels.size(); ++i)
      for (std::size_t j = 0; j < t.col_labels.size(); ++j)
        out << t.row_labels[i] << ',' << t.col_labels[j] << ',' << t.observed(i, j) << '\n';
  } else if (kind == "item_bars") {
    std::filesystem::create_directories(dir / "item_bars");
    for (const auto& d : r.summaries->distributions) {
      auto out = open(dir / "item_bars" / (d.item_name + ".csv"));
      out << "item,level,count,proportion\n";
      for (std::size_t k = 0; k < d.counts.size(); ++k)
        out << d.item_name << ',' << k + kMinLevel << ',' << d.counts[k] << ','
            << (d.proportions ? exact((*d.proportions)[k]) : std::string("NA")) << '\n';
    }
  } else if (kind == "correlation") {
    const auto& c = r.correlation->matrix;
    auto out = open(dir / "correlation.csv");
    out << "item";
    for (const auto& name : c.item_names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < c.values.rows(); ++i) {
      out << c.item_names[i];
      for (std::size_t j = 0; j < c.values.cols(); ++j) out << ',' << exact(c.values(i, j));
      out << '\n';
    }
    auto js = open(dir / "correlation.json");
    js << Json{{"method", to_string(c.method)}, {"items", c.item_names}, {"matrix", detail::matrix_json(c.values)}}.dump(2)
       << '\n';
  } else if (kind == "variation_curve") {
    auto out = open(dir / "variation_curve.csv");
    out << "k,pct_variation\n";
    for (const auto& pt : r.clustering->curve) out << pt.k << ',' << exact(pt.pct_variation) << '\n';
  } else if (kind == "loadings") {
    const auto& m = r.factor->model;
    auto out = open(dir / "loadings.csv");
    out << "item";
    for (std::size_t f = 0; f < m.q; ++f) out << ",factor" << f + 1;
    out << ",communality\n";
    for (std::size_t i = 0; i < m.loadings.rows(); ++i) {
      out << m.item_names[i];
      for (std::size_t f = 0; f < m.q; ++f) out << ',' << exact(m.loadings(i, f));
      out << ',' << exact(m.communalities[i]) << '\n';
    }
  } else if (kind == "scores") {
    const auto& s = r.factor->scores->scores;
    auto out = open(dir / "scores.csv");
    out << "row_id";
    for (std::size_t f = 0; f < s.cols(); ++f) out << ",z" << f + 1;
    out << '\n';
    for (std::size_t i = 0; i < s.rows(); ++i) {
      out << i + 1;
      for (std::size_t f = 0; f < s.cols(); ++f) out << ',' << exact(s(i, f));
      out << '\n';
    }
  } else if (kind == "confusion") {
    const auto& cm = r.forest->confusion;
    auto out = open(dir / "confusion.csv");
    out << "true";
    for (const auto& c : cm.classes) out << ',' << c;
    out << ",class.error\n";
    for (std::size_t k = 0; k < cm.classes.size(); ++k) {
      out << cm.classes[k];
      for (std::size_t c = 0; c < cm.classes.size(); ++c) out << ',' << cm.counts(k, c);
      out << ',' << exact(cm.class_error[k]) << '\n';
    }
  } else if (kind == "importance") {
    const auto& imp = r.forest->importance;
    auto out = open(dir / "importance.csv");
    out << "feature,importance,rank\n";
    for (std::size_t rank = 0; rank < imp.ranking.size(); ++rank) {
      const auto j = imp.ranking[rank];
      out << imp.feature_names[j] << ',' << exact(imp.scores[j]) << ',' << rank + 1 << '\n';
    }
  }
  return written;
}

}  // namespace likert
