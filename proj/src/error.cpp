#include "versa/error.hpp"

namespace versa {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::DistanceUnavailable: return "DistanceUnavailable";
    case Errc::UnknownName: return "UnknownName";
    case Errc::DuplicateRule: return "DuplicateRule";
    case Errc::MalformedTable: return "MalformedTable";
    case Errc::MalformedProfile: return "MalformedProfile";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::UnmappedAction: return "UnmappedAction";
    case Errc::EmptyStream: return "EmptyStream";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::PeriodMismatch: return "PeriodMismatch";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {

std::string join_offenders(const std::vector<std::string>& offenders) {
  std::string out;
  for (const auto& s : offenders) {
    if (!out.empty()) out += ", ";
    out += '"' + s + '"';
  }
  return out;
}

}  // namespace

UnmappedActionError::UnmappedActionError(std::vector<std::string> offenders)
    : Error(Errc::UnmappedAction, "unmapped provider actions: " + join_offenders(offenders)),
      offenders_(std::move(offenders)) {}

MalformedRecordError::MalformedRecordError(std::size_t line, const std::string& detail)
    : Error(Errc::MalformedRecord, "record " + std::to_string(line) + ": " + detail), line_(line) {}

}  // namespace versa
