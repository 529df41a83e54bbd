// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cubekit {

enum class ErrorCode {
  NoMeasures,
  AggMismatch,
  UnknownAttribute,
  UnknownLevel,
  UnknownMember,
  NoChildLevel,
  AxisOrderError,
  DuplicateAxis,
  DuplicateMeasure,
  AmbiguousLabel,
  NothingToInfer,
  MissingTable,
  ConnectionFailed,
  SqlError,
  ParseError,
  TypeMismatch,
  HugeDefaultView,
  Internal,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NoMeasures: return "NoMeasures";
    case ErrorCode::AggMismatch: return "AggMismatch";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::UnknownLevel: return "UnknownLevel";
    case ErrorCode::UnknownMember: return "UnknownMember";
    case ErrorCode::NoChildLevel: return "NoChildLevel";
    case ErrorCode::AxisOrderError: return "AxisOrderError";
    case ErrorCode::DuplicateAxis: return "DuplicateAxis";
    case ErrorCode::DuplicateMeasure: return "DuplicateMeasure";
    case ErrorCode::AmbiguousLabel: return "AmbiguousLabel";
    case ErrorCode::NothingToInfer: return "NothingToInfer";
    case ErrorCode::MissingTable: return "MissingTable";
    case ErrorCode::ConnectionFailed: return "ConnectionFailed";
    case ErrorCode::SqlError: return "SqlError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::HugeDefaultView: return "HugeDefaultView";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// SQL failure carrying the statement that produced it.
class SqlError : public Error {
 public:
  SqlError(std::string message, std::string sql)
      : Error(ErrorCode::SqlError, message + "\n  in: " + sql), sql_(std::move(sql)) {}

  const std::string& sql() const { return sql_; }

 private:
  std::string sql_;
};

/// Parse failure with a source position.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column)
      : Error(ErrorCode::ParseError,
              message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace cubekit
