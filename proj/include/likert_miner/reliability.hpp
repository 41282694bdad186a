#pragma once

#include <cstddef>
#include <vector>

#include "dataset.hpp"
#include "matrix.hpp"

namespace likert {

struct ReliabilityReport {
  double alpha = 0.0;
  std::size_t n = 0;  // observations (rows of the analysed matrix)
  std::size_t p = 0;  // items (columns of the analysed matrix)
  std::vector<double> item_variances;
  double total_variance = 0.0;
  std::vector<double> item_sums;  // Z_j, the column totals
};

struct VariationPartition {
  std::vector<std::size_t> zero_rows;
  std::vector<std::size_t> nonzero_rows;
  double zero_fraction = 0.0;
  std::vector<double> per_row_variance;  // unbiased, divisor p-1
};

namespace detail {

// Unbiased sample variance, two-pass.
template <typename Range>
double sample_variance(const Range& values) {
  const auto n = static_cast<double>(std::size(values));
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / (n - 1.0);
}

}  // namespace detail

/// Cronbach's alpha of a real matrix whose columns are the items:
/// alpha = p/(p-1) * (1 - sum_j V(X_j) / V(sum_l X_l)), all variances with n-1.
inline ReliabilityReport cronbach_alpha(const RealMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  detail::require(n >= 2, ErrorKind::InvalidArgument, "cronbach_alpha needs at least 2 observations");
  detail::require(p >= 2, ErrorKind::InvalidArgument, "cronbach_alpha needs at least 2 items");

  ReliabilityReport report;
  report.n = n;
  report.p = p;
  report.item_variances.resize(p);
  report.item_sums.assign(p, 0.0);
  std::vector<double> totals(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      totals[i] += x(i, j);
      report.item_sums[j] += x(i, j);
    }
  double item_variance_sum = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    report.item_variances[j] = detail::sample_variance(x.column(j));
    item_variance_sum += report.item_variances[j];
  }
  report.total_variance = detail::sample_variance(totals);
  if (report.total_variance == 0.0)
    detail::fail(ErrorKind::DegenerateVariance, "variance of the item sum is zero; alpha undefined");
  const double pd = static_cast<double>(p);
  report.alpha = (pd / (pd - 1.0)) * (1.0 - item_variance_sum / report.total_variance);
  return report;
}

inline ReliabilityReport cronbach_alpha(const LikertMatrix& m) { return cronbach_alpha(m.to_real()); }

/// Respondent reliability: Cronbach's alpha of the transposed matrix, so the
/// respondents play the role of items.
inline ReliabilityReport respondent_reliability(const LikertMatrix& m) {
  return cronbach_alpha(m.to_real().transpose());
}

/// Splits rows into zero-variation (constant) and the rest.
inline VariationPartition partition_by_variation(const LikertMatrix& m) {
  VariationPartition out;
  out.per_row_variance.resize(m.n());
  for (std::size_t i = 0; i < m.n(); ++i) {
    const auto row = m.row(i);
    const bool constant = std::all_of(row.begin(), row.end(), [&](auto v) { return v == row[0]; });
    if (constant) {
      out.per_row_variance[i] = 0.0;
      out.zero_rows.push_back(i);
    } else {
      std::vector<double> values(row.begin(), row.end());
      out.per_row_variance[i] = detail::sample_variance(values);
      out.nonzero_rows.push_back(i);
    }
  }
  out.zero_fraction = m.n() == 0 ? 0.0 : static_cast<double>(out.zero_rows.size()) / static_cast<double>(m.n());
  return out;
}

inline const std::vector<std::string>& variation_levels() {
  static const std::vector<std::string> levels{"zero", "nonzero"};
  return levels;
}

/// Derived categorical column "variation" with levels {zero, nonzero}.
inline DerivedColumn variation_column(const VariationPartition& part) {
  DerivedColumn col{"variation", std::vector<int>(part.per_row_variance.size(), 1), variation_levels()};
  for (auto r : part.zero_rows) col.codes[r] = 0;
  return col;
}

}  // namespace likert
