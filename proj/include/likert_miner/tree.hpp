#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "matrix.hpp"

namespace likert {

/// Integer-coded predictors (Likert levels or ordinal metadata) with a
/// categorical response. `labels` index into `classes`, whose order is also
/// the tie-break order.
struct LabeledDataset {
  Matrix<int> features;
  std::vector<std::string> feature_names;
  std::vector<int> labels;
  std::vector<std::string> classes;

  std::size_t n() const noexcept { return features.rows(); }
  std::size_t p() const noexcept { return features.cols(); }

  void validate() const {
    detail::require(feature_names.size() == features.cols(), ErrorKind::InvalidArgument,
                    "feature names do not match feature columns");
    detail::require(labels.size() == features.rows(), ErrorKind::InvalidArgument, "labels are not aligned with rows");
    detail::require(!classes.empty(), ErrorKind::InvalidArgument, "class set is empty");
    for (int y : labels)
      detail::require(y >= 0 && static_cast<std::size_t>(y) < classes.size(), ErrorKind::InvalidArgument,
                      "label outside the class set");
  }
};

/// Predict one Likert item from the others (plus optional extra columns).
inline LabeledDataset item_response_dataset(const LikertMatrix& m, const std::string& response,
                                            const std::vector<std::pair<std::string, std::vector<int>>>& extra = {}) {
  const std::size_t target = m.item_index(response);
  LabeledDataset d;
  for (std::size_t j = 0; j < m.p(); ++j)
    if (j != target) d.feature_names.push_back(m.item_names()[j]);
  for (const auto& [name, values] : extra) {
    detail::require(values.size() == m.n(), ErrorKind::InvalidArgument, "extra column " + name + " is misaligned");
    d.feature_names.push_back(name);
  }
  d.features = Matrix<int>(m.n(), d.feature_names.size());
  for (std::size_t i = 0; i < m.n(); ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < m.p(); ++j)
      if (j != target) d.features(i, c++) = m(i, j);
    for (const auto& e : extra) d.features(i, c++) = e.second[i];
    d.labels.push_back(m(i, target) - kMinLevel);
  }
  for (int level = kMinLevel; level <= kMaxLevel; ++level) d.classes.push_back(std::to_string(level));
  return d;
}

/// All items as predictors of a derived categorical column.
inline LabeledDataset derived_response_dataset(const LikertMatrix& m, const DerivedColumn& response) {
  LabeledDataset d{m.to_int(), m.item_names(), response.codes, response.levels};
  d.validate();
  return d;
}

struct TreeParams {
  std::size_t min_split = 20;
  std::size_t min_leaf = 7;
  std::size_t max_depth = 30;
  double cp = 0.01;  // a split must remove at least cp * (root impurity mass)
};

struct TreeNode {
  bool is_leaf = true;
  std::size_t feature = 0;  // index into the dataset's feature columns
  int threshold = 0;        // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  std::vector<std::int64_t> class_counts;
  int predicted_class = 0;
  double impurity_decrease = 0.0;  // n * Gini(parent) - sum n_child * Gini(child)
  std::size_t depth = 0;
};

/// Gini impurity 1 - sum (c_j / total)^2.
inline double gini(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  for (auto c : counts) {
    detail::require(c >= 0, ErrorKind::InvalidArgument, "negative class count");
    total += c;
  }
  if (total == 0) detail::fail(ErrorKind::EmptyNode, "gini of an empty node");
  double s = 0.0;
  for (auto c : counts) {
    const double share = static_cast<double>(c) / static_cast<double>(total);
    s += share * share;
  }
  return 1.0 - s;
}

inline double gini(const std::vector<std::int64_t>& counts) { return gini(std::span<const std::int64_t>(counts)); }

namespace detail {

inline int argmax_lowest(const std::vector<std::int64_t>& counts) {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

__extension__ typedef __int128 Wide;

// n * Gini, computed from counts without dividing twice.
inline double weighted_gini(const std::int64_t* counts, std::size_t g, std::int64_t n) {
  if (n == 0) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < g; ++k) s += static_cast<double>(counts[k]) * static_cast<double>(counts[k]);
  return static_cast<double>(n) - s / static_cast<double>(n);
}

// Per-feature dense level codes, shared by every tree grown on the dataset.
struct EncodedFeatures {
  std::vector<std::vector<int>> levels;   // sorted distinct values per feature
  Matrix<std::uint16_t> codes;            // row x feature

  explicit EncodedFeatures(const Matrix<int>& features) : codes(features.rows(), features.cols()) {
    levels.resize(features.cols());
    for (std::size_t f = 0; f < features.cols(); ++f) {
      auto values = features.column(f);
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      require(values.size() < 65536, ErrorKind::InvalidArgument, "feature has too many distinct levels");
      levels[f] = values;
      for (std::size_t i = 0; i < features.rows(); ++i)
        codes(i, f) = static_cast<std::uint16_t>(
            std::lower_bound(values.begin(), values.end(), features(i, f)) - values.begin());
    }
  }
};

}  // namespace detail

class DecisionTree {
 public:
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  const TreeParams& params() const noexcept { return params_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<std::size_t>& feature_subset() const noexcept { return feature_subset_; }
  bool single_class() const noexcept { return single_class_; }

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](auto& n) { return n.is_leaf; }));
  }

  std::size_t leaf_index(std::span<const int> x) const {
    if (x.size() != feature_names_.size())
      detail::fail(ErrorKind::FeatureMismatch, "expected " + std::to_string(feature_names_.size()) +
                                                   " features, got " + std::to_string(x.size()));
    std::size_t at = 0;
    while (!nodes_[at].is_leaf)
      at = static_cast<std::size_t>(x[nodes_[at].feature] <= nodes_[at].threshold ? nodes_[at].left : nodes_[at].right);
    return at;
  }

  int predict(std::span<const int> x) const { return nodes_[leaf_index(x)].predicted_class; }

  /// Indented rendering, one line per node.
  std::string render() const {
    std::ostringstream out;
    render_node(out, 0, 0, "root");
    return out.str();
  }

 private:
  friend class TreeGrower;

  void render_node(std::ostringstream& out, std::size_t at, std::size_t indent, const std::string& rule) const {
    const auto& node = nodes_[at];
    std::int64_t n = 0;
    for (auto c : node.class_counts) n += c;
    out << std::string(indent * 2, ' ') << rule << "  n=" << n << " class=" << classes_[node.predicted_class]
        << " (";
    for (std::size_t k = 0; k < node.class_counts.size(); ++k) out << (k ? " " : "") << node.class_counts[k];
    out << ")" << (node.is_leaf ? " *" : "") << '\n';
    if (node.is_leaf) return;
    const auto& name = feature_names_[node.feature];
    render_node(out, static_cast<std::size_t>(node.left), indent + 1, name + "<=" + std::to_string(node.threshold));
    render_node(out, static_cast<std::size_t>(node.right), indent + 1, name + ">" + std::to_string(node.threshold));
  }

  std::vector<TreeNode> nodes_;
  TreeParams params_;
  std::vector<std::string> classes_;
  std::vector<std::string> feature_names_;
  std::vector<std::size_t> feature_subset_;
  bool single_class_ = false;
};

/// Greedy recursive partitioning with Gini impurity. Only ordinal splits
/// x <= t are considered, t ranging over the observed levels of the node.
/// Ties in impurity decrease go to the lowest feature index, then the lowest
/// threshold.
class TreeGrower {
 public:
  TreeGrower(const LabeledDataset& data, const detail::EncodedFeatures& encoded, TreeParams params)
      : data_(data), encoded_(encoded), params_(params), g_(data.classes.size()) {}

  /// `rows` may repeat (bootstrap multiset); `features` lists usable columns.
  DecisionTree grow(std::vector<std::size_t> rows, std::vector<std::size_t> features) const {
    detail::require(!rows.empty(), ErrorKind::InvalidArgument, "cannot grow a tree on zero rows");
    std::sort(features.begin(), features.end());
    DecisionTree tree;
    tree.params_ = params_;
    tree.classes_ = data_.classes;
    tree.feature_names_ = data_.feature_names;
    tree.feature_subset_ = features;
    const auto counts = class_counts(rows);
    tree.single_class_ = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    const double root_mass = detail::weighted_gini(counts.data(), g_, static_cast<std::int64_t>(rows.size()));
    build(tree, rows, features, 0, root_mass);
    return tree;
  }

 private:
  std::vector<std::int64_t> class_counts(const std::vector<std::size_t>& rows) const {
    std::vector<std::int64_t> counts(g_, 0);
    for (auto r : rows) ++counts[static_cast<std::size_t>(data_.labels[r])];
    return counts;
  }

  struct Split {
    bool found = false;
    std::size_t feature = 0;
    std::size_t code = 0;  // left side holds codes <= this
    double gain = 0.0;
    detail::Wide num = 0, den = 1;
  };

  Split best_split(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& features,
                   const std::vector<std::int64_t>& parent) const {
    const auto n = static_cast<std::int64_t>(rows.size());
    const double parent_mass = detail::weighted_gini(parent.data(), g_, n);
    Split best;
    std::vector<std::int64_t> hist;
    std::vector<std::int64_t> left(g_), right(g_);
    for (auto f : features) {
      const std::size_t levels = encoded_.levels[f].size();
      hist.assign(levels * g_, 0);
      for (auto r : rows) ++hist[encoded_.codes(r, f) * g_ + static_cast<std::size_t>(data_.labels[r])];
      std::fill(left.begin(), left.end(), 0);
      std::int64_t n_left = 0;
      for (std::size_t code = 0; code + 1 < levels; ++code) {
        std::int64_t here = 0;
        for (std::size_t k = 0; k < g_; ++k) {
          left[k] += hist[code * g_ + k];
          here += hist[code * g_ + k];
        }
        if (here == 0) continue;  // level absent from this node
        n_left += here;
        const std::int64_t n_right = n - n_left;
        if (n_right == 0) break;
        if (n_left < static_cast<std::int64_t>(params_.min_leaf) || n_right < static_cast<std::int64_t>(params_.min_leaf))
          continue;
        for (std::size_t k = 0; k < g_; ++k) right[k] = parent[k] - left[k];
        // Gain order equals the order of S_l/n_l + S_r/n_r (S = sum of squared
        // class counts); comparing that fraction exactly keeps ties on the
        // lowest feature and threshold.
        std::int64_t s_left = 0, s_right = 0;
        for (std::size_t k = 0; k < g_; ++k) {
          s_left += left[k] * left[k];
          s_right += right[k] * right[k];
        }
        const detail::Wide num = static_cast<detail::Wide>(s_left) * n_right + static_cast<detail::Wide>(s_right) * n_left;
        const detail::Wide den = static_cast<detail::Wide>(n_left) * n_right;
        if (best.found && num * best.den <= best.num * den) continue;
        const double gain = parent_mass - detail::weighted_gini(left.data(), g_, n_left) -
                            detail::weighted_gini(right.data(), g_, n_right);
        best = {true, f, code, gain, num, den};
      }
    }
    return best;
  }

  int build(DecisionTree& tree, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& features,
            std::size_t depth, double root_mass) const {
    const int index = static_cast<int>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    {
      auto& node = tree.nodes_.back();
      node.class_counts = class_counts(rows);
      node.predicted_class = detail::argmax_lowest(node.class_counts);
      node.depth = depth;
    }
    const auto counts = tree.nodes_[static_cast<std::size_t>(index)].class_counts;
    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || rows.size() < params_.min_split || depth >= params_.max_depth) return index;

    const Split split = best_split(rows, features, counts);
    const double floor = std::max(1e-12 * static_cast<double>(rows.size()), params_.cp * root_mass);
    if (!split.found || split.gain <= 0.0 || split.gain < floor) return index;

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows) (encoded_.codes(r, split.feature) <= split.code ? left_rows : right_rows).push_back(r);
    {
      auto& node = tree.nodes_[static_cast<std::size_t>(index)];
      node.is_leaf = false;
      node.feature = split.feature;
      node.threshold = encoded_.levels[split.feature][split.code];
      node.impurity_decrease = split.gain;
    }
    const int l = build(tree, left_rows, features, depth + 1, root_mass);
    const int r = build(tree, right_rows, features, depth + 1, root_mass);
    tree.nodes_[static_cast<std::size_t>(index)].left = l;
    tree.nodes_[static_cast<std::size_t>(index)].right = r;
    return index;
  }

  const LabeledDataset& data_;
  const detail::EncodedFeatures& encoded_;
  TreeParams params_;
  std::size_t g_;
};

inline DecisionTree grow_tree(const LabeledDataset& data, const TreeParams& params = {}) {
  data.validate();
  detail::require(data.n() >= 1, ErrorKind::InvalidArgument, "cannot grow a tree on zero rows");
  const detail::EncodedFeatures encoded(data.features);
  std::vector<std::size_t> rows(data.n()), features(data.p());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (std::size_t j = 0; j < features.size(); ++j) features[j] = j;
  return TreeGrower(data, encoded, params).grow(std::move(rows), std::move(features));
}

inline int predict(const DecisionTree& tree, std::span<const int> x) { return tree.predict(x); }

}  // namespace likert
