#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "versa/event.hpp"

namespace versa {

enum class SourceFormat { VersaJsonl, ProviderJson };
enum class CarryConvention { ExplicitMicro, ImplicitGapOnly };
enum class TimeUnit { Seconds, Milliseconds, Clock };  // Clock: "HH:MM:SS.fff"

// How provider coordinates relate to the direction of play.
enum class AttackDirection {
  ActingTeam,         // already oriented so the acting team attacks left to right
  HomeLeftFirstHalf,  // absolute frame; home attacks left to right in odd periods
};

struct PitchFrame {
  double length = kPitchLength;
  double width = kPitchWidth;
  bool flip_x = false;
  bool flip_y = false;
  AttackDirection direction = AttackDirection::ActingTeam;
};

struct FieldNames {
  std::string event_id = "id";
  std::string period = "period";
  std::string time = "time";
  std::string team = "team";
  std::string player = "player";
  std::string action = "type";
  std::string outcome = "outcome";
  std::string x = "x";
  std::string y = "y";
  std::string shot_result = "shot_result";
};

/// Describes one provider's file layout and vocabulary. Loaded from JSON so
/// new providers need no code changes.
struct ProviderProfile {
  std::string name;
  SourceFormat format = SourceFormat::ProviderJson;
  PitchFrame pitch;
  TimeUnit time_unit = TimeUnit::Seconds;
  FieldNames fields;
  // A mapped value of std::nullopt means the provider action is dropped.
  std::map<std::string, std::optional<ActionType>> action_map;
  std::map<std::string, Outcome> outcome_map;
  Outcome missing_outcome = Outcome::Unknown;
  std::map<std::string, ShotResult> shot_result_map;
  bool records_pass_received = true;
  CarryConvention carry_convention = CarryConvention::ImplicitGapOnly;
};

ProviderProfile profile_from_json(std::string_view text);

/// Built-in profile by name ("versa", "bepro", "statsbomb", "wyscout", or the
/// profile's own name such as "wyscout-like"), otherwise a path to a JSON file.
ProviderProfile load_profile(std::string_view name_or_path);

std::vector<std::string> builtin_profile_names();

/// Whether an event's provider coordinates must be rotated by 180 degrees so
/// that its team attacks left to right.
bool is_mirrored(const ProviderProfile& profile, std::string_view team_id, int period,
                 std::string_view home_team);

/// Provider units to canonical meters. Affine; exact inverse below.
Location to_canonical(const PitchFrame& frame, double px, double py, bool mirrored);
std::pair<double, double> to_provider(const PitchFrame& frame, const Location& loc,
                                      bool mirrored);

struct IngestOptions {
  // Only honoured for ExplicitMicro profiles: drop Carry events that move the
  // ball less than `micro_carry_threshold` meters from the carrier's previous
  // on-ball location.
  bool drop_micro_carries = false;
  double micro_carry_threshold = 3.0;
};

/// Maps every record, normalizes coordinates to the 105 x 68 m frame and
/// timestamps to seconds from period start, and sorts canonically. Throws
/// UnmappedActionError listing every unknown provider action,
/// MalformedRecordError, or Errc::EmptyStream.
VersaStream ingest(const std::filesystem::path& path, const ProviderProfile& profile,
                   const IngestOptions& options = {});

VersaStream ingest_text(std::string_view text, const ProviderProfile& profile,
                        const IngestOptions& options = {});

/// Writes canonical JSONL plus its metadata sidecar.
void export_stream(const VersaStream& stream, const std::filesystem::path& path);

/// Renders a stream in a provider's raw JSON layout (inverse of ingest). Throws
/// Errc::UnmappedAction when an action has no provider spelling.
std::string to_provider_json(const VersaStream& stream, const ProviderProfile& profile);

/// Merge/drop rules for the simplified variant. The constructor closes merge
/// chains so applying the map once is the same as applying it twice.
class SimplificationMap {
 public:
  SimplificationMap() = default;
  SimplificationMap(std::map<ActionType, ActionType> merges, std::set<ActionType> drops);

  /// std::nullopt when the action is dropped.
  std::optional<ActionType> apply(ActionType a) const;

  const std::map<ActionType, ActionType>& merges() const { return merges_; }
  const std::set<ActionType>& drops() const { return drops_; }
  bool empty() const { return merges_.empty() && drops_.empty(); }

  /// Same merges, no drops.
  SimplificationMap merges_only() const { return SimplificationMap(merges_, {}); }

 private:
  std::map<ActionType, ActionType> merges_;
  std::set<ActionType> drops_;
};

const SimplificationMap& default_simplification();
SimplificationMap simplification_from_json(std::string_view text);

VersaStream simplify(const VersaStream& stream, const SimplificationMap& map);

}  // namespace versa
