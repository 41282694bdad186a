#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "matrix.hpp"
#include "parallel.hpp"

namespace likert {

enum class CorrelationMethod { Pearson, KendallTauB };

inline const char* to_string(CorrelationMethod m) {
  return m == CorrelationMethod::Pearson ? "pearson" : "kendall_tau_b";
}

struct CorrelationMatrix {
  CorrelationMethod method = CorrelationMethod::KendallTauB;
  RealMatrix values;
  std::vector<std::string> item_names;
};

struct TauBComponents {
  std::int64_t n_c = 0;
  std::int64_t n_d = 0;
  std::int64_t n0 = 0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::vector<std::int64_t> x_tie_groups;  // t_i, sizes of groups of equal x
  std::vector<std::int64_t> y_tie_groups;  // u_j
};

struct TauBResult {
  double tau = 0.0;
  TauBComponents components;
};

/// Sample Pearson correlation, n-1 denominators.
template <typename T>
double pearson(const std::vector<T>& x, const std::vector<T>& y) {
  detail::require(x.size() == y.size(), ErrorKind::InvalidArgument, "pearson needs equal lengths");
  detail::require(x.size() >= 2, ErrorKind::InvalidArgument, "pearson needs at least 2 observations");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += static_cast<double>(x[i]);
    my += static_cast<double>(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = static_cast<double>(x[i]) - mx;
    const double dy = static_cast<double>(y[i]) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) detail::fail(ErrorKind::ZeroVariance, "pearson input has zero variance");
  const double sx = std::sqrt(sxx / (n - 1.0));
  const double sy = std::sqrt(syy / (n - 1.0));
  return std::clamp(sxy / ((n - 1.0) * sx * sy), -1.0, 1.0);
}

/// Kendall tau-b with tie correction. Values are arbitrary integers; they are
/// mapped to ranks and the pair counts are read off the joint contingency
/// table, so the cost is O(n + r^2 c^2) for r, c distinct levels.
inline TauBResult kendall_tau_b(const std::vector<int>& x, const std::vector<int>& y) {
  detail::require(x.size() == y.size(), ErrorKind::InvalidArgument, "kendall_tau_b needs equal lengths");
  detail::require(x.size() >= 2, ErrorKind::InvalidArgument, "kendall_tau_b needs at least 2 observations");

  auto ranks = [](const std::vector<int>& v, std::vector<int>& levels) {
    levels = v;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<std::size_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      out[i] = static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), v[i]) - levels.begin());
    return out;
  };
  std::vector<int> xl, yl;
  const auto rx = ranks(x, xl);
  const auto ry = ranks(y, yl);
  const std::size_t r = xl.size(), c = yl.size();
  Matrix<std::int64_t> joint(r, c);
  for (std::size_t i = 0; i < x.size(); ++i) ++joint(rx[i], ry[i]);

  TauBResult out;
  auto& k = out.components;
  const auto n = static_cast<std::int64_t>(x.size());
  k.n0 = n * (n - 1) / 2;
  for (std::size_t a = 0; a < r; ++a) {
    std::int64_t t = 0;
    for (std::size_t b = 0; b < c; ++b) t += joint(a, b);
    k.x_tie_groups.push_back(t);
    k.n1 += t * (t - 1) / 2;
  }
  for (std::size_t b = 0; b < c; ++b) {
    std::int64_t u = 0;
    for (std::size_t a = 0; a < r; ++a) u += joint(a, b);
    k.y_tie_groups.push_back(u);
    k.n2 += u * (u - 1) / 2;
  }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < c; ++b) {
      const std::int64_t here = joint(a, b);
      if (here == 0) continue;
      std::int64_t above_right = 0, above_left = 0;
      for (std::size_t a2 = a + 1; a2 < r; ++a2) {
        for (std::size_t b2 = b + 1; b2 < c; ++b2) above_right += joint(a2, b2);
        for (std::size_t b2 = 0; b2 < b; ++b2) above_left += joint(a2, b2);
      }
      k.n_c += here * above_right;
      k.n_d += here * above_left;
    }
  if (k.n0 == k.n1 || k.n0 == k.n2)
    detail::fail(ErrorKind::DegenerateTies, "kendall_tau_b input is constant");
  out.tau = static_cast<double>(k.n_c - k.n_d) /
            std::sqrt(static_cast<double>(k.n0 - k.n1) * static_cast<double>(k.n0 - k.n2));
  return out;
}

/// Pairwise correlation of every item pair; the upper triangle is computed
/// once and mirrored. Cells are independent, so they may run concurrently.
inline CorrelationMatrix correlation_matrix(const LikertMatrix& m, CorrelationMethod method,
                                            std::size_t workers = 1) {
  const std::size_t p = m.p();
  std::vector<std::vector<int>> cols(p);
  for (std::size_t j = 0; j < p; ++j) {
    cols[j] = m.column(j);
    const bool constant = std::all_of(cols[j].begin(), cols[j].end(), [&](int v) { return v == cols[j].front(); });
    if (cols[j].empty() || constant)
      detail::fail(ErrorKind::ZeroVariance, "column " + m.item_names()[j] + " has zero variance");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) pairs.emplace_back(i, j);

  CorrelationMatrix out{method, RealMatrix::identity(p), m.item_names()};
  std::vector<double> cell(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    cell[k] = method == CorrelationMethod::Pearson ? pearson(cols[i], cols[j]) : kendall_tau_b(cols[i], cols[j]).tau;
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    out.values(i, j) = cell[k];
    out.values(j, i) = cell[k];
  }
  return out;
}

/// Comparison of two correlation matrices over their off-diagonal entries.
struct CorrelationComparison {
  double mean_difference = 0.0;  // mean of (a - b) over i < j
  double rank_agreement = 0.0;   // Spearman correlation of the vectorised entries
};

namespace detail {
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}
}  // namespace detail

inline CorrelationComparison compare_correlations(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  const std::size_t p = a.values.rows();
  detail::require(p == b.values.rows() && p >= 3, ErrorKind::InvalidArgument,
                  "comparison needs equal-sized matrices with p >= 3");
  std::vector<double> va, vb;
  double diff = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      va.push_back(a.values(i, j));
      vb.push_back(b.values(i, j));
      diff += a.values(i, j) - b.values(i, j);
    }
  CorrelationComparison out;
  out.mean_difference = diff / static_cast<double>(va.size());
  out.rank_agreement = pearson(detail::average_ranks(va), detail::average_ranks(vb));
  return out;
}

}  // namespace likert
