#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "matrix.hpp"
#include "random.hpp"

namespace likert {

struct KMeansOptions {
  std::size_t restarts = 10;
  int max_iterations = 300;
};

struct ClusterModel {
  std::size_t k = 0;
  RealMatrix centers;  // k x p
  std::vector<std::size_t> assignments;
  double wcss = 0.0;
  double between_ss = 0.0;
  double total_ss = 0.0;
  double pct_variation = 0.0;  // between_ss / total_ss
  std::vector<std::size_t> sizes;
  std::vector<double> center_averages;

  int iterations = 0;
  std::vector<double> wcss_history;  // best run, one entry per Lloyd iteration
  std::vector<double> restart_wcss;  // final WCSS of every restart
};

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

struct LloydRun {
  RealMatrix centers;
  std::vector<std::size_t> assignments;
  double wcss = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

inline RealMatrix kmeanspp_seed(const RealMatrix& x, std::size_t k, Rng& rng) {
  const std::size_t n = x.rows(), p = x.cols();
  RealMatrix centers(k, p);
  std::size_t first = static_cast<std::size_t>(rng.below(n));
  std::copy_n(x.row(first).begin(), p, centers.row(0).begin());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x.row(i), centers.row(c - 1)));
      total += d2[i];
    }
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.below(n));
    }
    std::copy_n(x.row(pick).begin(), p, centers.row(c).begin());
  }
  return centers;
}

inline void update_centers(const RealMatrix& x, const std::vector<std::size_t>& assign, RealMatrix& centers,
                           std::vector<std::size_t>& sizes) {
  const std::size_t k = centers.rows(), p = x.cols();
  centers = RealMatrix(k, p);
  sizes.assign(k, 0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    ++sizes[assign[i]];
    for (std::size_t j = 0; j < p; ++j) centers(assign[i], j) += x(i, j);
  }
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < p; ++j) centers(c, j) /= static_cast<double>(sizes[c]);
}

inline double wcss_of(const RealMatrix& x, const RealMatrix& centers, const std::vector<std::size_t>& assign) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) s += squared_distance(x.row(i), centers.row(assign[i]));
  return s;
}

inline LloydRun lloyd(const RealMatrix& x, RealMatrix centers, int max_iterations) {
  const std::size_t n = x.rows(), k = centers.rows();
  LloydRun run;
  run.assignments.assign(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> sizes;
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(x.row(i), centers.row(0));
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(x.row(i), centers.row(c));
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      dist[i] = best_d;
      if (run.assignments[i] != best) {
        run.assignments[i] = best;
        changed = true;
      }
    }
    // Refill empty clusters with the point farthest from its own center.
    std::vector<std::size_t> counts(k, 0);
    for (auto a : run.assignments) ++counts[a];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i)
        if (counts[run.assignments[i]] > 1 && (far == n || dist[i] > dist[far])) far = i;
      if (far == n) break;
      --counts[run.assignments[far]];
      run.assignments[far] = c;
      dist[far] = 0.0;
      ++counts[c];
      changed = true;
    }
    if (!changed) break;
    update_centers(x, run.assignments, centers, sizes);
    run.history.push_back(wcss_of(x, centers, run.assignments));
    run.iterations = iter + 1;
  }
  run.centers = std::move(centers);
  run.wcss = wcss_of(x, run.centers, run.assignments);
  return run;
}

}  // namespace detail

/// Lloyd's k-means on raw coordinates with k-means++ seeding; the run with the
/// smallest WCSS over `restarts` independent seedings is kept. Restart r uses
/// the stream mix_seed(seed, r), so results depend only on (data, seed, options).
inline ClusterModel kmeans(const RealMatrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {}) {
  const std::size_t n = x.rows(), p = x.cols();
  detail::require(k >= 1, ErrorKind::InvalidArgument, "k must be at least 1");
  detail::require(k <= n, ErrorKind::KTooLarge, "k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  detail::require(options.restarts >= 1, ErrorKind::InvalidArgument, "need at least one restart");

  ClusterModel model;
  detail::LloydRun best;
  bool have_best = false;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    Rng rng(mix_seed(seed, r));
    auto run = detail::lloyd(x, detail::kmeanspp_seed(x, k, rng), options.max_iterations);
    model.restart_wcss.push_back(run.wcss);
    if (!have_best || run.wcss < best.wcss) {
      best = std::move(run);
      have_best = true;
    }
  }

  model.k = k;
  model.centers = best.centers;
  model.assignments = best.assignments;
  model.wcss = best.wcss;
  model.iterations = best.iterations;
  model.wcss_history = best.history;
  model.sizes.assign(k, 0);
  for (auto a : model.assignments) ++model.sizes[a];

  std::vector<double> grand(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) grand[j] += x(i, j);
  for (auto& g : grand) g /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) model.total_ss += detail::squared_distance(x.row(i), grand);
  for (std::size_t c = 0; c < k; ++c)
    model.between_ss += static_cast<double>(model.sizes[c]) * detail::squared_distance(model.centers.row(c), grand);
  model.pct_variation = model.total_ss > 0 ? model.between_ss / model.total_ss : 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j) s += model.centers(c, j);
    model.center_averages.push_back(p == 0 ? 0.0 : s / static_cast<double>(p));
  }
  return model;
}

inline ClusterModel kmeans(const LikertMatrix& m, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {}) {
  return kmeans(m.to_real(), k, seed, options);
}

struct VariationPoint {
  std::size_t k = 0;
  double pct_variation = 0.0;
  bool rerun = false;  // a first attempt fell below the previous k and was repeated
};

/// Percentage of variation explained for each k. If a k scores below its
/// predecessor, it is rerun with four times the restarts and flagged.
inline std::vector<VariationPoint> variation_explained_curve(const RealMatrix& x, const std::vector<std::size_t>& ks,
                                                             std::uint64_t seed, const KMeansOptions& options = {}) {
  std::vector<VariationPoint> out;
  for (auto k : ks) {
    VariationPoint point{k, kmeans(x, k, seed, options).pct_variation, false};
    if (!out.empty() && point.pct_variation < out.back().pct_variation && k > out.back().k) {
      KMeansOptions more = options;
      more.restarts *= 4;
      point.pct_variation = std::max(point.pct_variation, kmeans(x, k, mix_seed(seed, 0x5eed), more).pct_variation);
      point.rerun = true;
    }
    out.push_back(point);
  }
  return out;
}

inline const std::vector<std::string>& opinion_levels() {
  static const std::vector<std::string> levels{"Dissatisfied", "Neutral", "Satisfied"};
  return levels;
}

/// Names each of three clusters by the rank of its center average:
/// lowest Dissatisfied, middle Neutral, highest Satisfied.
inline std::vector<std::string> label_clusters(const ClusterModel& model) {
  if (model.k != 3) detail::fail(ErrorKind::NotThreeClusters, "cluster labelling needs k = 3");
  std::vector<std::size_t> order{0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return model.center_averages[a] < model.center_averages[b]; });
  for (std::size_t i = 0; i + 1 < 3; ++i)
    if (model.center_averages[order[i]] == model.center_averages[order[i + 1]])
      detail::fail(ErrorKind::TieBetweenCenters, "two clusters have the same center average");
  std::vector<std::string> labels(3);
  for (std::size_t rank = 0; rank < 3; ++rank) labels[order[rank]] = opinion_levels()[rank];
  return labels;
}

/// Derived "Opinion" column for a three-cluster model.
inline DerivedColumn opinion_column(const ClusterModel& model) {
  const auto labels = label_clusters(model);
  DerivedColumn col{"Opinion", {}, opinion_levels()};
  for (auto a : model.assignments) {
    const auto it = std::find(opinion_levels().begin(), opinion_levels().end(), labels[a]);
    col.codes.push_back(static_cast<int>(it - opinion_levels().begin()));
  }
  return col;
}

}  // namespace likert
