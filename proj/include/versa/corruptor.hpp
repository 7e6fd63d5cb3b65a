#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "versa/correction.hpp"
#include "versa/event.hpp"
#include "versa/state_machine.hpp"

namespace versa {

/// SplitMix64 (Steele, Lea and Flood). Fixed algorithm so corrupted fixtures
/// are reproducible from the seed in any language:
///   state += 0x9e3779b97f4a7c15
///   z = state; z = (z ^ z>>30) * 0xbf58476d1ce4e5b9
///   z = (z ^ z>>27) * 0x94d049bb133111eb; return z ^ z>>31
/// uniform() takes the top 53 bits of next() and scales by 2^-53.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

struct TimestampJitter {
  double fraction = 0.0;
  double max_seconds = 0.0;
};

/// Per-site probabilities for each error kind.
struct CorruptionPlan {
  std::uint64_t seed = 0;
  double drop_pass_received = 0.0;
  double swap_shot_block = 0.0;
  double drop_carry = 0.0;
  // A sub-threshold Carry right after a PassReceived, as a provider that
  // records every touch would. Legal under the model, so never scored.
  double insert_micro_carry = 0.0;
  TimestampJitter timestamp_jitter;

  /// Throws Errc::MalformedProfile when a fraction is outside [0, 1].
  void validate() const;
};

CorruptionPlan plan_from_json(std::string_view text);
std::string plan_to_json(const CorruptionPlan& plan);

enum class InjectionKind { DropPassReceived, SwapShotBlock, DropCarry, InsertMicroCarry, TimestampJitter };

std::string_view to_string(InjectionKind k);

struct Injection {
  InjectionKind kind = InjectionKind::DropPassReceived;
  // Index in the corrupted stream where the damage shows: the event that now
  // follows a dropped one, the Block of a swapped pair, an inserted Carry, or
  // a jittered event.
  std::size_t site = 0;
  std::string event_id;  // the dropped, swapped (Block), inserted or jittered event
  // Logical errors the verifier is expected to catch.
  bool scored = true;
};

struct CorruptionResult {
  VersaStream stream;
  std::vector<Injection> truth;
};

/// Eligible sites: every PassReceived and Carry, every Shot immediately
/// followed by an opposing Block, every event (jitter). Each site is corrupted
/// independently with its rate. Jitter never changes event order.
CorruptionResult corrupt(const VersaStream& stream, const CorruptionPlan& plan);

std::string truth_to_jsonl(const std::vector<Injection>& truth);

struct DetectionScore {
  double precision = 1.0;
  double recall = 1.0;
  std::size_t matched = 0;
  std::size_t records = 0;
  std::size_t injected = 0;
};

/// An injection is detected when a record's rejected event lies within
/// `window_radius` positions of its site in `corrupted` and the record's
/// repair fits the injection kind (PassReceived inserted, Block reordered,
/// Carry inserted). Matching is greedy in record order, one record per
/// injection. No records gives precision 1.0; no scored injections gives
/// recall 1.0.
DetectionScore score_detection(const std::vector<Injection>& truth,
                               const std::vector<ExceptionRecord>& records,
                               const VersaStream& corrupted,
                               std::size_t window_radius = kDefaultWindowRadius);

}  // namespace versa
