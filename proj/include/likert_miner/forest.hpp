#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "random.hpp"
#include "tree.hpp"

namespace likert {

// Forest trees are grown out fully by default, as in the usual random forest.
inline TreeParams fully_grown_tree_params() { return TreeParams{2, 1, 64, 0.0}; }

struct ForestParams {
  std::size_t trees = 500;
  std::size_t features_per_tree = 0;  // 0 selects floor(sqrt(p))
  std::uint64_t seed = 20131;
  TreeParams tree = fully_grown_tree_params();
  bool bootstrap = true;  // false trains every tree on all rows exactly once
  std::size_t workers = 0;  // 0 reads LIKERT_MINER_THREADS / hardware
};

struct ForestMember {
  DecisionTree tree;
  std::vector<std::size_t> features;  // selected feature subset, ascending
  std::vector<std::size_t> oob_rows;  // rows absent from the bootstrap sample
  std::optional<double> oob_error;    // undefined when every row was drawn
};

struct Forest {
  std::vector<ForestMember> members;
  std::vector<std::string> classes;
  std::vector<std::string> feature_names;
  std::size_t features_per_tree = 0;
  std::size_t n_train = 0;

  std::size_t size() const noexcept { return members.size(); }
};

struct ConfusionMatrix {
  std::vector<std::string> classes;
  Matrix<std::int64_t> counts;      // true x predicted
  std::vector<double> class_error;  // 1 - diagonal / row sum (0 for empty rows)
  std::size_t covered = 0;          // rows with at least one out-of-bag vote
  std::size_t uncovered = 0;        // rows that were in every bag
};

struct ImportanceReport {
  std::vector<std::string> feature_names;
  std::vector<double> scores;        // mean decrease in Gini per tree
  std::vector<std::size_t> ranking;  // feature indices, most important first
};

/// Bagged random-subspace ensemble: tree b draws n rows with replacement and
/// d features without replacement from the stream mix_seed(seed, b), then
/// grows a tree on that reduced sample. Trees are independent, so the result
/// does not depend on the number of workers.
inline Forest train_forest(const LabeledDataset& data, const ForestParams& params = {}) {
  data.validate();
  const std::size_t n = data.n(), p = data.p();
  detail::require(n >= 1 && p >= 1, ErrorKind::InvalidArgument, "forest needs rows and features");
  detail::require(params.trees >= 1, ErrorKind::InvalidArgument, "forest needs at least one tree");
  const std::size_t d = params.features_per_tree == 0
                            ? std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(double(p)))))
                            : params.features_per_tree;
  detail::require(d >= 1 && d <= p, ErrorKind::InvalidArgument, "features per tree must lie in [1, p]");

  const detail::EncodedFeatures encoded(data.features);
  const TreeGrower grower(data, encoded, params.tree);
  Forest forest;
  forest.classes = data.classes;
  forest.feature_names = data.feature_names;
  forest.features_per_tree = d;
  forest.n_train = n;
  forest.members.resize(params.trees);

  const std::size_t workers = params.workers == 0 ? default_worker_count() : params.workers;
  parallel_for(params.trees, workers, [&](std::size_t b) {
    Rng rng(mix_seed(params.seed, b));
    std::vector<std::size_t> rows(n);
    std::vector<char> in_bag(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      rows[i] = params.bootstrap ? static_cast<std::size_t>(rng.below(n)) : i;
      in_bag[rows[i]] = 1;
    }
    auto features = sample_without_replacement(rng, p, d);
    ForestMember member{grower.grow(std::move(rows), features), features, {}, std::nullopt};
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_bag[i]) continue;
      member.oob_rows.push_back(i);
      if (member.tree.predict(data.features.row(i)) != data.labels[i]) ++wrong;
    }
    if (!member.oob_rows.empty())
      member.oob_error = static_cast<double>(wrong) / static_cast<double>(member.oob_rows.size());
    forest.members[b] = std::move(member);
  });
  return forest;
}

/// Majority vote; ties go to the class listed first.
inline int predict_forest(const Forest& forest, std::span<const int> x) {
  if (x.size() != forest.feature_names.size())
    detail::fail(ErrorKind::FeatureMismatch, "expected " + std::to_string(forest.feature_names.size()) +
                                                 " features, got " + std::to_string(x.size()));
  std::vector<std::int64_t> votes(forest.classes.size(), 0);
  for (const auto& m : forest.members) ++votes[static_cast<std::size_t>(m.tree.predict(x))];
  return detail::argmax_lowest(votes);
}

/// Mean over trees of each tree's out-of-bag misclassification rate. Trees
/// with an empty out-of-bag set are skipped.
inline double avoob(const Forest& forest) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& m : forest.members)
    if (m.oob_error) {
      sum += *m.oob_error;
      ++count;
    }
  if (count == 0) detail::fail(ErrorKind::NoOOBData, "no tree has out-of-bag rows");
  return sum / static_cast<double>(count);
}

/// Out-of-bag vote confusion matrix: each row is predicted only by the trees
/// that did not see it.
inline ConfusionMatrix oob_confusion(const Forest& forest, const LabeledDataset& data) {
  detail::require(data.n() == forest.n_train, ErrorKind::InvalidArgument, "dataset differs from the training data");
  const std::size_t g = forest.classes.size();
  Matrix<std::int64_t> votes(data.n(), g);
  for (const auto& m : forest.members)
    for (auto r : m.oob_rows) ++votes(r, static_cast<std::size_t>(m.tree.predict(data.features.row(r))));

  ConfusionMatrix cm{forest.classes, Matrix<std::int64_t>(g, g), std::vector<double>(g, 0.0), 0, 0};
  for (std::size_t r = 0; r < data.n(); ++r) {
    const auto row = votes.row(r);
    if (std::all_of(row.begin(), row.end(), [](auto v) { return v == 0; })) {
      ++cm.uncovered;
      continue;
    }
    ++cm.covered;
    const auto predicted = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    ++cm.counts(static_cast<std::size_t>(data.labels[r]), predicted);
  }
  for (std::size_t k = 0; k < g; ++k) {
    std::int64_t total = 0;
    for (std::size_t c = 0; c < g; ++c) total += cm.counts(k, c);
    cm.class_error[k] = total == 0 ? 0.0 : 1.0 - static_cast<double>(cm.counts(k, k)) / static_cast<double>(total);
  }
  return cm;
}

/// Mean decrease in Gini impurity: split gains summed per feature within each
/// tree, averaged over trees.
inline ImportanceReport variable_importance(const Forest& forest) {
  ImportanceReport out{forest.feature_names, std::vector<double>(forest.feature_names.size(), 0.0), {}};
  for (const auto& m : forest.members)
    for (const auto& node : m.tree.nodes())
      if (!node.is_leaf) out.scores[node.feature] += node.impurity_decrease;
  for (auto& s : out.scores) s /= static_cast<double>(forest.members.size());
  out.ranking.resize(out.scores.size());
  std::iota(out.ranking.begin(), out.ranking.end(), 0);
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [&](auto a, auto b) { return out.scores[a] > out.scores[b]; });
  return out;
}

}  // namespace likert
