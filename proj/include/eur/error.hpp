#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eur {

enum class ErrorKind {
  InvalidArgument,
  ZeroNorm,
  NotNormalized,
  UnsupportedObservable,
  VanishingDensity,
  CutoffTooSmall,
  SingularInformation,
  UnstableStep,
  GridResolution,
  NotPrime,
  NotComplementary,
  BoxTooSmall,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::UnsupportedObservable: return "UnsupportedObservable";
    case ErrorKind::VanishingDensity: return "VanishingDensity";
    case ErrorKind::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorKind::SingularInformation: return "SingularInformation";
    case ErrorKind::UnstableStep: return "UnstableStep";
    case ErrorKind::GridResolution: return "GridResolution";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::NotComplementary: return "NotComplementary";
    case ErrorKind::BoxTooSmall: return "BoxTooSmall";
  }
  return "Unknown";
}

/// Every library failure carries a kind so the CLI can report the module
/// error name and map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

/// Malformed input text (state JSON, signal CSV). Line and column are 1-based;
/// column 0 means the whole line, line 0 a structural problem with no position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what), line_(0), column_(0) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace eur
