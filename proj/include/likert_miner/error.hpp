#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace likert {

// Every failure raised by the library derives from Error so callers can catch
// one type; the concrete kind is kept for tests and CLI diagnostics.
enum class ErrorKind {
  InvalidArgument,
  MissingColumn,
  OutOfRangeScore,
  RaggedRow,
  EmptyFile,
  IoError,
  UnknownItem,
  UnknownAttribute,
  DegenerateVariance,
  ZeroExpectedCell,
  ZeroVariance,
  DegenerateTies,
  KTooLarge,
  NotThreeClusters,
  TieBetweenCenters,
  SingularCorrelation,
  EmptyNode,
  FeatureMismatch,
  NoOOBData,
  StageNotRun,
  ConfigError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::OutOfRangeScore: return "OutOfRangeScore";
    case ErrorKind::RaggedRow: return "RaggedRow";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::UnknownItem: return "UnknownItem";
    case ErrorKind::UnknownAttribute: return "UnknownAttribute";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::ZeroExpectedCell: return "ZeroExpectedCell";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::DegenerateTies: return "DegenerateTies";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::NotThreeClusters: return "NotThreeClusters";
    case ErrorKind::TieBetweenCenters: return "TieBetweenCenters";
    case ErrorKind::SingularCorrelation: return "SingularCorrelation";
    case ErrorKind::EmptyNode: return "EmptyNode";
    case ErrorKind::FeatureMismatch: return "FeatureMismatch";
    case ErrorKind::NoOOBData: return "NoOOBData";
    case ErrorKind::StageNotRun: return "StageNotRun";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised while loading a CSV when a Q-cell is not an integer in 1..5.
/// `row` is the 1-based data row (header excluded).
class OutOfRangeScore : public Error {
 public:
  OutOfRangeScore(std::size_t row, std::string column, const std::string& raw)
      : Error(ErrorKind::OutOfRangeScore,
              "row " + std::to_string(row) + ", column " + column + ": '" + raw + "'"),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

namespace detail {
[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}
inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}
}  // namespace detail

}  // namespace likert
