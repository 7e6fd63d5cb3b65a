#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace versa {

enum class Errc {
  DistanceUnavailable,
  UnknownName,
  DuplicateRule,
  MalformedTable,
  MalformedProfile,
  MalformedRecord,
  UnmappedAction,
  EmptyStream,
  LengthMismatch,
  ZeroVariance,
  PeriodMismatch,
  Io,
};

const char* to_string(Errc code);

/// Base for every error raised by the toolkit. Rejections during verification
/// are values (TriggerResult, ExceptionRecord) and never go through here.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class UnmappedActionError : public Error {
 public:
  explicit UnmappedActionError(std::vector<std::string> offenders);
  const std::vector<std::string>& offenders() const noexcept { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

class MalformedRecordError : public Error {
 public:
  MalformedRecordError(std::size_t line, const std::string& detail);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace versa
