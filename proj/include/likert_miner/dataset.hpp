#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

namespace likert {

inline constexpr int kMinLevel = 1;
inline constexpr int kMaxLevel = 5;
inline constexpr int kLevelCount = kMaxLevel - kMinLevel + 1;

class LikertScore {
 public:
  explicit LikertScore(int value) : value_(static_cast<std::uint8_t>(value)) {
    detail::require(value >= kMinLevel && value <= kMaxLevel, ErrorKind::OutOfRangeScore,
                    "Likert score must be in 1..5, got " + std::to_string(value));
  }
  int value() const noexcept { return value_; }
  friend auto operator<=>(const LikertScore&, const LikertScore&) = default;

 private:
  std::uint8_t value_;
};

/// n x p grid of Likert scores with unique item names. Rows are respondents,
/// columns are questionnaire items. n may be 0 (e.g. after filtering).
class LikertMatrix {
 public:
  LikertMatrix() = default;

  LikertMatrix(std::vector<std::string> item_names, Matrix<std::uint8_t> scores)
      : item_names_(std::move(item_names)), scores_(std::move(scores)) {
    detail::require(scores_.cols() == item_names_.size(), ErrorKind::InvalidArgument,
                    "item name count does not match column count");
    detail::require(!item_names_.empty(), ErrorKind::InvalidArgument, "matrix needs at least one item");
    std::unordered_set<std::string> seen;
    for (const auto& name : item_names_)
      detail::require(seen.insert(name).second, ErrorKind::InvalidArgument,
                      "duplicate item name " + name);
    for (auto v : scores_.data())
      detail::require(v >= kMinLevel && v <= kMaxLevel, ErrorKind::OutOfRangeScore,
                      "Likert score must be in 1..5, got " + std::to_string(int(v)));
  }

  static LikertMatrix from_rows(std::vector<std::string> item_names,
                                const std::vector<std::vector<int>>& rows) {
    const std::size_t p = item_names.size();
    Matrix<std::uint8_t> scores(rows.size(), p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail::require(rows[i].size() == p, ErrorKind::RaggedRow,
                      "row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                          " scores, expected " + std::to_string(p));
      for (std::size_t j = 0; j < p; ++j) scores(i, j) = static_cast<std::uint8_t>(LikertScore(rows[i][j]).value());
    }
    return LikertMatrix(std::move(item_names), std::move(scores));
  }

  // Items named prefix1..prefixP.
  static std::vector<std::string> default_names(std::size_t p, const std::string& prefix = "Q") {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) names.push_back(prefix + std::to_string(j + 1));
    return names;
  }

  std::size_t n() const noexcept { return scores_.rows(); }
  std::size_t p() const noexcept { return scores_.cols(); }

  int operator()(std::size_t i, std::size_t j) const { return scores_(i, j); }
  std::span<const std::uint8_t> row(std::size_t i) const { return scores_.row(i); }

  const std::vector<std::string>& item_names() const noexcept { return item_names_; }

  std::optional<std::size_t> find_item(std::string_view name) const {
    auto it = std::find(item_names_.begin(), item_names_.end(), name);
    if (it == item_names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - item_names_.begin());
  }

  std::size_t item_index(std::string_view name) const {
    auto idx = find_item(name);
    if (!idx) detail::fail(ErrorKind::UnknownItem, "no item named " + std::string(name));
    return *idx;
  }

  std::vector<int> column(std::size_t j) const {
    std::vector<int> out(n());
    for (std::size_t i = 0; i < n(); ++i) out[i] = scores_(i, j);
    return out;
  }

  std::vector<int> column(std::string_view name) const { return column(item_index(name)); }

  LikertMatrix select_rows(std::span<const std::size_t> rows) const {
    Matrix<std::uint8_t> out(rows.size(), p());
    for (std::size_t r = 0; r < rows.size(); ++r)
      std::copy_n(scores_.row(rows[r]).begin(), p(), out.row(r).begin());
    return LikertMatrix(item_names_, std::move(out));
  }

  LikertMatrix select_items(std::span<const std::size_t> items) const {
    Matrix<std::uint8_t> out(n(), items.size());
    std::vector<std::string> names;
    for (auto j : items) names.push_back(item_names_.at(j));
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t c = 0; c < items.size(); ++c) out(i, c) = scores_(i, items[c]);
    return LikertMatrix(std::move(names), std::move(out));
  }

  RealMatrix to_real() const { return scores_.cast<double>(); }
  Matrix<int> to_int() const { return scores_.cast<int>(); }

  friend bool operator==(const LikertMatrix&, const LikertMatrix&) = default;

 private:
  std::vector<std::string> item_names_;
  Matrix<std::uint8_t> scores_;
};

/// A categorical column derived after loading (variation class, cluster
/// opinion, ...). `codes` index into `levels`.
struct DerivedColumn {
  std::string name;
  std::vector<int> codes;
  std::vector<std::string> levels;

  friend bool operator==(const DerivedColumn&, const DerivedColumn&) = default;
};

struct Metadata {
  std::vector<int> instructor;
  std::vector<int> course;
  std::vector<int> repetitions;
  std::vector<int> attendance;  // raw 0..4 coding
  std::vector<int> difficulty;  // 1..5

  friend bool operator==(const Metadata&, const Metadata&) = default;
};

inline const std::vector<std::string>& attendance_labels() {
  static const std::vector<std::string> labels{"Poor", "Minimal", "Reasonable", "Good", "Excellent"};
  return labels;
}

inline const std::vector<std::string>& difficulty_labels() {
  static const std::vector<std::string> labels{"Too Easy", "Easy", "Normal", "Difficult", "Too Difficult"};
  return labels;
}

/// Column-name mapping for CSV input. Item columns are every header cell that
/// starts with `item_prefix`, in header order.
struct Schema {
  std::string instructor = "instr";
  std::string course = "class";
  std::string repetitions = "nb.repeat";
  std::string attendance = "attendance";
  std::string difficulty = "difficulty";
  std::string item_prefix = "Q";
};

class EvaluationDataset {
 public:
  EvaluationDataset() = default;
  EvaluationDataset(LikertMatrix matrix, Metadata meta, std::vector<DerivedColumn> derived = {})
      : matrix_(std::move(matrix)), meta_(std::move(meta)), derived_(std::move(derived)) {
    const std::size_t n = matrix_.n();
    for (const auto* col : {&meta_.instructor, &meta_.course, &meta_.repetitions, &meta_.attendance,
                            &meta_.difficulty})
      detail::require(col->size() == n, ErrorKind::InvalidArgument, "metadata column length differs from n");
    for (int a : meta_.attendance)
      detail::require(a >= 0 && a <= 4, ErrorKind::InvalidArgument, "attendance must be in 0..4");
    for (int d : meta_.difficulty)
      detail::require(d >= 1 && d <= 5, ErrorKind::InvalidArgument, "difficulty must be in 1..5");
    for (const auto& c : derived_) check_derived(c);
  }

  const LikertMatrix& matrix() const noexcept { return matrix_; }
  const Metadata& meta() const noexcept { return meta_; }
  const std::vector<DerivedColumn>& derived() const noexcept { return derived_; }
  std::size_t n() const noexcept { return matrix_.n(); }
  std::size_t p() const noexcept { return matrix_.p(); }

  const DerivedColumn* find_derived(std::string_view name) const {
    for (const auto& c : derived_)
      if (c.name == name) return &c;
    return nullptr;
  }

  // Returns a copy with `column` added (or replacing one of the same name).
  EvaluationDataset with_column(DerivedColumn column) const {
    check_derived(column);
    EvaluationDataset out = *this;
    auto it = std::find_if(out.derived_.begin(), out.derived_.end(),
                           [&](const DerivedColumn& c) { return c.name == column.name; });
    if (it != out.derived_.end())
      *it = std::move(column);
    else
      out.derived_.push_back(std::move(column));
    return out;
  }

  EvaluationDataset select_rows(std::span<const std::size_t> rows) const {
    auto pick = [&](const std::vector<int>& src) {
      std::vector<int> out;
      out.reserve(rows.size());
      for (auto r : rows) out.push_back(src[r]);
      return out;
    };
    Metadata meta{pick(meta_.instructor), pick(meta_.course), pick(meta_.repetitions),
                  pick(meta_.attendance), pick(meta_.difficulty)};
    std::vector<DerivedColumn> derived;
    for (const auto& c : derived_) derived.push_back({c.name, pick(c.codes), c.levels});
    return EvaluationDataset(matrix_.select_rows(rows), std::move(meta), std::move(derived));
  }

  friend bool operator==(const EvaluationDataset&, const EvaluationDataset&) = default;

 private:
  void check_derived(const DerivedColumn& c) const {
    detail::require(c.codes.size() == matrix_.n(), ErrorKind::InvalidArgument,
                    "derived column " + c.name + " length differs from n");
    for (int code : c.codes)
      detail::require(code >= 0 && static_cast<std::size_t>(code) < c.levels.size(),
                      ErrorKind::InvalidArgument, "derived column " + c.name + " has an invalid code");
  }

  LikertMatrix matrix_;
  Metadata meta_;
  std::vector<DerivedColumn> derived_;
};

/// Predicate over one row of a dataset. Combine with && / ||.
struct RowFilter {
  std::function<bool(const EvaluationDataset&, std::size_t)> predicate;

  bool operator()(const EvaluationDataset& ds, std::size_t row) const { return predicate(ds, row); }

  friend RowFilter operator&&(RowFilter a, RowFilter b) {
    return {[a = std::move(a), b = std::move(b)](const EvaluationDataset& ds, std::size_t r) {
      return a(ds, r) && b(ds, r);
    }};
  }
  friend RowFilter operator||(RowFilter a, RowFilter b) {
    return {[a = std::move(a), b = std::move(b)](const EvaluationDataset& ds, std::size_t r) {
      return a(ds, r) || b(ds, r);
    }};
  }

  static RowFilter all() {
    return {[](const EvaluationDataset&, std::size_t) { return true; }};
  }
  static RowFilter none() {
    return {[](const EvaluationDataset&, std::size_t) { return false; }};
  }
  static RowFilter instructor(int id) {
    return {[id](const EvaluationDataset& ds, std::size_t r) { return ds.meta().instructor[r] == id; }};
  }
  static RowFilter course(int id) {
    return {[id](const EvaluationDataset& ds, std::size_t r) { return ds.meta().course[r] == id; }};
  }
  // Rows whose derived column `name` has level `level`.
  static RowFilter derived_is(std::string name, std::string level) {
    return {[name = std::move(name), level = std::move(level)](const EvaluationDataset& ds, std::size_t r) {
      const auto* col = ds.find_derived(name);
      if (!col) detail::fail(ErrorKind::UnknownAttribute, "no derived column " + name);
      return col->levels[col->codes[r]] == level;
    }};
  }
};

inline EvaluationDataset filter_rows(const EvaluationDataset& ds, const RowFilter& filter) {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < ds.n(); ++r)
    if (filter(ds, r)) keep.push_back(r);
  return ds.select_rows(keep);
}

inline std::vector<LikertScore> column(const EvaluationDataset& ds, std::string_view item_name) {
  const std::size_t j = ds.matrix().item_index(item_name);
  std::vector<LikertScore> out;
  out.reserve(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) out.emplace_back(ds.matrix()(i, j));
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

inline std::optional<int> parse_int(std::string_view cell) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Parses evaluation CSV text. Row order is preserved; every Q-cell must be an
/// integer in 1..5 and missing cells are errors (no imputation).
inline EvaluationDataset parse_csv(std::istream& in, const Schema& schema = {}) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line).empty())
    detail::fail(ErrorKind::EmptyFile, "no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::string header_line = line;
  const auto header = detail::split_csv_line(header_line);

  auto locate = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) detail::fail(ErrorKind::MissingColumn, "column " + name + " not in header");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_instr = locate(schema.instructor);
  const std::size_t c_course = locate(schema.course);
  const std::size_t c_rep = locate(schema.repetitions);
  const std::size_t c_att = locate(schema.attendance);
  const std::size_t c_diff = locate(schema.difficulty);

  std::vector<std::size_t> item_cols;
  std::vector<std::string> item_names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const bool is_meta = c == c_instr || c == c_course || c == c_rep || c == c_att || c == c_diff;
    if (!is_meta && header[c].starts_with(schema.item_prefix)) {
      item_cols.push_back(c);
      item_names.emplace_back(header[c]);
    }
  }
  if (item_cols.empty())
    detail::fail(ErrorKind::MissingColumn, "no item columns with prefix " + schema.item_prefix);

  Metadata meta;
  std::vector<std::uint8_t> scores;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size())
      detail::fail(ErrorKind::RaggedRow, "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                             " cells, header has " + std::to_string(header.size()));
    auto meta_value = [&](std::size_t c) {
      auto v = detail::parse_int(cells[c]);
      if (!v)
        detail::fail(ErrorKind::InvalidArgument, "row " + std::to_string(row) + ", column " +
                                                      std::string(header[c]) + ": not an integer");
      return *v;
    };
    meta.instructor.push_back(meta_value(c_instr));
    meta.course.push_back(meta_value(c_course));
    meta.repetitions.push_back(meta_value(c_rep));
    meta.attendance.push_back(meta_value(c_att));
    meta.difficulty.push_back(meta_value(c_diff));
    for (std::size_t k = 0; k < item_cols.size(); ++k) {
      const auto cell = cells[item_cols[k]];
      auto v = detail::parse_int(cell);
      if (!v || *v < kMinLevel || *v > kMaxLevel) throw OutOfRangeScore(row, item_names[k], std::string(cell));
      scores.push_back(static_cast<std::uint8_t>(*v));
    }
  }
  if (row == 0) detail::fail(ErrorKind::EmptyFile, "no data rows");
  Matrix<std::uint8_t> grid(row, item_cols.size(), std::move(scores));
  return EvaluationDataset(LikertMatrix(std::move(item_names), std::move(grid)), std::move(meta));
}

inline EvaluationDataset load_csv(const std::string& path, const Schema& schema = {}) {
  std::ifstream in(path);
  if (!in) detail::fail(ErrorKind::IoError, "cannot open " + path);
  return parse_csv(in, schema);
}

/// Writes the metadata and item columns in the canonical header order.
inline void write_csv(std::ostream& out, const EvaluationDataset& ds, const Schema& schema = {}) {
  out << schema.instructor << ',' << schema.course << ',' << schema.repetitions << ','
      << schema.attendance << ',' << schema.difficulty;
  for (const auto& name : ds.matrix().item_names()) out << ',' << name;
  out << '\n';
  const auto& m = ds.meta();
  for (std::size_t i = 0; i < ds.n(); ++i) {
    out << m.instructor[i] << ',' << m.course[i] << ',' << m.repetitions[i] << ',' << m.attendance[i] << ','
        << m.difficulty[i];
    for (std::size_t j = 0; j < ds.p(); ++j) out << ',' << ds.matrix()(i, j);
    out << '\n';
  }
}

}  // namespace likert
