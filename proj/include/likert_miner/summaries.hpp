#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace likert {

struct ItemDistribution {
  std::string item_name;
  std::array<std::size_t, kLevelCount> counts{};
  // Empty when n == 0 (proportions undefined).
  std::optional<std::array<double, kLevelCount>> proportions;
};

/// Mode of a set of Likert values. The lowest tied level is reported as the
/// mode; the full tie set is kept alongside.
struct ModeResult {
  int mode = 0;
  std::vector<int> ties;  // every level reaching the maximal frequency, ascending
};

struct MedianResult {
  double value = 0.0;
  // False when the median falls between two levels (a half-integer), i.e.
  // outside the ordinal domain.
  bool on_likert_level = true;
};

struct GrandSummary {
  double grand_mean = 0.0;
  std::vector<ModeResult> column_modes;
  int grand_mode = 0;
  std::vector<int> grand_mode_ties;
  std::vector<MedianResult> column_medians;
  MedianResult grand_median;
};

inline std::array<std::size_t, kLevelCount> level_counts(const std::vector<int>& values) {
  std::array<std::size_t, kLevelCount> counts{};
  for (int v : values) ++counts.at(static_cast<std::size_t>(v - kMinLevel));
  return counts;
}

inline ModeResult mode_of(const std::vector<int>& values) {
  detail::require(!values.empty(), ErrorKind::InvalidArgument, "mode of an empty set");
  const auto counts = level_counts(values);
  const std::size_t best = *std::max_element(counts.begin(), counts.end());
  ModeResult out;
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k] == best) out.ties.push_back(static_cast<int>(k) + kMinLevel);
  out.mode = out.ties.front();
  return out;
}

// Median with the midpoint rule for even counts.
inline MedianResult median_of(std::vector<double> values) {
  detail::require(!values.empty(), ErrorKind::InvalidArgument, "median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double med = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return {med, std::floor(med) == med};
}

inline double grand_mean(const LikertMatrix& m) {
  detail::require(m.n() >= 1, ErrorKind::InvalidArgument, "grand_mean needs n >= 1");
  double total = 0.0;
  for (std::size_t i = 0; i < m.n(); ++i)
    for (auto v : m.row(i)) total += v;
  return total / (static_cast<double>(m.n()) * static_cast<double>(m.p()));
}

inline std::vector<ModeResult> column_modes(const LikertMatrix& m) {
  detail::require(m.n() >= 1, ErrorKind::InvalidArgument, "column_modes needs n >= 1");
  std::vector<ModeResult> out;
  for (std::size_t j = 0; j < m.p(); ++j) out.push_back(mode_of(m.column(j)));
  return out;
}

/// Mode of the column modes.
inline ModeResult grand_mode_detail(const LikertMatrix& m) {
  std::vector<int> modes;
  for (const auto& cm : column_modes(m)) modes.push_back(cm.mode);
  return mode_of(modes);
}

inline int grand_mode(const LikertMatrix& m) { return grand_mode_detail(m).mode; }

inline std::vector<MedianResult> column_medians(const LikertMatrix& m) {
  detail::require(m.n() >= 1, ErrorKind::InvalidArgument, "column_medians needs n >= 1");
  std::vector<MedianResult> out;
  for (std::size_t j = 0; j < m.p(); ++j) {
    const auto col = m.column(j);
    out.push_back(median_of(std::vector<double>(col.begin(), col.end())));
  }
  return out;
}

/// Median of the column medians.
inline MedianResult grand_median(const LikertMatrix& m) {
  std::vector<double> medians;
  for (const auto& cm : column_medians(m)) medians.push_back(cm.value);
  return median_of(std::move(medians));
}

inline std::vector<ItemDistribution> item_distributions(const LikertMatrix& m) {
  std::vector<ItemDistribution> out;
  for (std::size_t j = 0; j < m.p(); ++j) {
    ItemDistribution dist;
    dist.item_name = m.item_names()[j];
    dist.counts = level_counts(m.column(j));
    if (m.n() > 0) {
      std::array<double, kLevelCount> props{};
      for (std::size_t k = 0; k < props.size(); ++k)
        props[k] = static_cast<double>(dist.counts[k]) / static_cast<double>(m.n());
      dist.proportions = props;
    }
    out.push_back(std::move(dist));
  }
  return out;
}

inline GrandSummary summarize(const LikertMatrix& m) {
  GrandSummary s;
  s.grand_mean = grand_mean(m);
  s.column_modes = column_modes(m);
  const auto gm = grand_mode_detail(m);
  s.grand_mode = gm.mode;
  s.grand_mode_ties = gm.ties;
  s.column_medians = column_medians(m);
  s.grand_median = grand_median(m);
  return s;
}

}  // namespace likert
