#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "matrix.hpp"

namespace likert {

/// A categorical view of one dataset column: per-row level index plus the
/// level labels in display order.
struct Attribute {
  std::string name;
  std::vector<std::string> levels;
  std::vector<std::size_t> codes;  // index into levels, one per row
};

struct ContingencyTable {
  std::string row_attr;
  std::string col_attr;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  Matrix<std::int64_t> observed;
  std::int64_t total = 0;

  double proportion(std::size_t r, std::size_t c) const {
    return total == 0 ? 0.0 : static_cast<double>(observed(r, c)) / static_cast<double>(total);
  }
};

struct ChiSquaredResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  RealMatrix expected;
};

namespace detail {

inline Attribute integer_attribute(std::string name, const std::vector<int>& values,
                                   const std::vector<std::string>* fixed_labels = nullptr, int label_base = 0) {
  std::set<int> distinct(values.begin(), values.end());
  std::vector<int> levels(distinct.begin(), distinct.end());
  Attribute attr{std::move(name), {}, {}};
  for (int v : levels) {
    if (fixed_labels && v - label_base >= 0 && static_cast<std::size_t>(v - label_base) < fixed_labels->size())
      attr.levels.push_back((*fixed_labels)[static_cast<std::size_t>(v - label_base)]);
    else
      attr.levels.push_back(std::to_string(v));
  }
  attr.codes.reserve(values.size());
  for (int v : values)
    attr.codes.push_back(static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), v) - levels.begin()));
  return attr;
}

}  // namespace detail

/// Resolves an attribute by name. Metadata columns answer to both their
/// canonical name (instructor, course, repetitions, attendance, difficulty)
/// and their default CSV header; derived columns and items by their own name.
/// Only observed levels are kept, ordered by code.
inline Attribute attribute(const EvaluationDataset& ds, const std::string& name) {
  const auto& m = ds.meta();
  if (name == "instructor" || name == "instr") return detail::integer_attribute(name, m.instructor);
  if (name == "course" || name == "class") return detail::integer_attribute(name, m.course);
  if (name == "repetitions" || name == "nb.repeat") return detail::integer_attribute(name, m.repetitions);
  if (name == "attendance") return detail::integer_attribute(name, m.attendance, &attendance_labels(), 0);
  if (name == "difficulty") return detail::integer_attribute(name, m.difficulty, &difficulty_labels(), 1);
  if (const auto* col = ds.find_derived(name)) {
    Attribute attr{name, col->levels, {}};
    for (int c : col->codes) attr.codes.push_back(static_cast<std::size_t>(c));
    return attr;
  }
  if (auto item = ds.matrix().find_item(name)) return detail::integer_attribute(name, ds.matrix().column(*item));
  detail::fail(ErrorKind::UnknownAttribute, "no attribute named " + name);
}

inline ContingencyTable crosstab(const Attribute& rows, const Attribute& cols) {
  detail::require(rows.codes.size() == cols.codes.size(), ErrorKind::InvalidArgument,
                  "attributes have different lengths");
  ContingencyTable t{rows.name, cols.name, rows.levels, cols.levels,
                     Matrix<std::int64_t>(rows.levels.size(), cols.levels.size()), 0};
  for (std::size_t i = 0; i < rows.codes.size(); ++i) ++t.observed(rows.codes[i], cols.codes[i]);
  t.total = static_cast<std::int64_t>(rows.codes.size());
  return t;
}

inline ContingencyTable crosstab(const EvaluationDataset& ds, const std::string& row_attr, const std::string& col_attr) {
  return crosstab(attribute(ds, row_attr), attribute(ds, col_attr));
}

/// Regularized upper incomplete gamma Q(a, x). Series for P below x < a + 1,
/// modified Lentz continued fraction for Q above.
inline double regularized_gamma_q(double a, double x) {
  detail::require(a > 0.0 && x >= 0.0, ErrorKind::InvalidArgument, "regularized_gamma_q needs a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  constexpr double eps = 1e-16;
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * eps) break;
    }
    return 1.0 - sum * std::exp(log_prefix);
  }
  constexpr double tiny = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return std::exp(log_prefix) * h;
}

/// Upper tail probability of the chi-squared distribution.
inline double chi_squared_sf(double x, int df) {
  detail::require(x >= 0.0, ErrorKind::InvalidArgument, "chi_squared_sf needs x >= 0");
  detail::require(df >= 1, ErrorKind::InvalidArgument, "chi_squared_sf needs df >= 1");
  return std::clamp(regularized_gamma_q(0.5 * df, 0.5 * x), 0.0, 1.0);
}

/// Pearson chi-squared test of independence, no continuity correction.
inline ChiSquaredResult chi_squared_test(const ContingencyTable& t) {
  const std::size_t r = t.observed.rows();
  const std::size_t c = t.observed.cols();
  detail::require(r >= 2 && c >= 2, ErrorKind::InvalidArgument, "chi-squared test needs at least a 2x2 table");
  std::vector<double> row_sum(r, 0.0), col_sum(c, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const auto v = static_cast<double>(t.observed(i, j));
      row_sum[i] += v;
      col_sum[j] += v;
      total += v;
    }
  ChiSquaredResult out;
  out.expected = RealMatrix(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double e = row_sum[i] * col_sum[j] / total;
      if (!(e > 0.0))
        detail::fail(ErrorKind::ZeroExpectedCell, "expected count is zero at (" + t.row_labels[i] + ", " +
                                                      t.col_labels[j] + ")");
      out.expected(i, j) = e;
      const double diff = static_cast<double>(t.observed(i, j)) - e;
      out.statistic += diff * diff / e;
    }
  out.df = static_cast<int>((r - 1) * (c - 1));
  out.p_value = chi_squared_sf(out.statistic, out.df);
  return out;
}

/// Text rendering of a p-value; values under 2.2e-16 print as "< 2.2e-16".
inline std::string format_p_value(double p) {
  if (p < 2.2e-16) return "< 2.2e-16";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", p);
  return buf;
}

}  // namespace likert
