#pragma once

#include <vector>

#include "versa/correction.hpp"
#include "versa/event.hpp"
#include "versa/state_machine.hpp"

namespace versa {

struct VerifyOptions {
  std::size_t window_radius = kDefaultWindowRadius;
  // An event rejected this many times goes straight to the fallback, which
  // bounds the loop even with custom handlers that keep rewriting the window.
  std::size_t max_rejections_per_event = 8;
};

struct VerificationResult {
  VersaStream stream;
  std::vector<ExceptionRecord> records;

  std::size_t unresolved_count() const;
};

/// One sequential pass over the stream. Each event is tried against the
/// machine; a rejection is booked as an ExceptionRecord and handed to the
/// first registry handler that can fix it. The fixed window is spliced back
/// and the machine resumes from the first changed position. When no handler
/// applies, the fallback forces the machine into the action's canonical source
/// state. The machine resets to KickOff at every period boundary.
///
/// The input must be canonically sorted. The result is deterministic.
VerificationResult verify_stream(const VersaStream& stream, const TransitionTable& table,
                                 const HandlerRegistry& handlers,
                                 const VerifyOptions& options = {});

VerificationResult verify_stream(const VersaStream& stream);

struct ReplayResult {
  std::size_t rejections = 0;
  std::vector<std::size_t> rejected_indices;
};

/// Walks the stream through trigger() only, no handlers. A rejected event is
/// forced through the same way the fallback does, so the walk continues.
ReplayResult replay(const VersaStream& stream, const TransitionTable& table,
                    std::size_t window_radius = kDefaultWindowRadius);

}  // namespace versa
