#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace versa {

inline constexpr double kPitchLength = 105.0;
inline constexpr double kPitchWidth = 68.0;

enum class ActionType {
  KickOff,
  Pass,
  Cross,
  PassReceived,
  Carry,
  Dribble,
  Shot,
  Goal,
  GoalMiss,
  GoalPost,
  OwnGoal,
  Block,
  Catch,
  Out,
  Interception,
  Tackle,
  Recovery,
  Clearance,
  Duel,
  Foul,
  Offside,
  Error,
  FreeKick,
  CornerKick,
  ThrowIn,
  GoalKick,
  PassCorner,
  ShotCorner,
  Corner,
};

inline constexpr std::size_t kActionCount = 29;

enum class Outcome { Success, Failure, Unknown };

enum class ShotResult { Goal, Catch, Block, Out, GoalMiss, GoalPost };

enum class Provenance { Recorded, Synthesized, Reordered };

enum class FormatVariant { Versa, SimplifiedVersa };

const std::array<ActionType, kActionCount>& all_actions();

std::string_view to_string(ActionType a);
std::string_view to_string(Outcome o);
std::string_view to_string(ShotResult r);
std::string_view to_string(Provenance p);
std::string_view to_string(FormatVariant f);

// Parsers throw versa::Error(Errc::UnknownName) on an unrecognised name.
ActionType parse_action(std::string_view name);
Outcome parse_outcome(std::string_view name);
ShotResult parse_shot_result(std::string_view name);
Provenance parse_provenance(std::string_view name);
FormatVariant parse_format_variant(std::string_view name);

std::optional<ActionType> try_parse_action(std::string_view name);

// Goal, GoalMiss, GoalPost and Out close a phase by definition of the model;
// they are never reported as data-quality exceptions.
bool is_model_outcome(ActionType a);

// Actions that put the ball in flight toward a teammate (regular and restart
// deliveries). A successful one is the antecedent of a PassReceived.
bool is_pass_like(ActionType a);

// Actions where a player touches the ball; they update the last on-ball
// location used by spatial continuity checks.
bool is_on_ball(ActionType a);

bool is_shot(ActionType a);

struct Location {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Location&, const Location&) = default;
};

struct Event {
  std::string event_id;
  int period = 1;
  double timestamp = 0.0;
  std::string team_id;
  std::string player_id;
  ActionType action = ActionType::Pass;
  Outcome outcome = Outcome::Unknown;
  std::optional<Location> location;
  std::optional<ShotResult> shot_result;
  Provenance provenance = Provenance::Recorded;

  friend bool operator==(const Event&, const Event&) = default;
};

bool within_pitch(const Location& loc);

/// Metadata carried alongside a stream; used to key Table-1 style reports.
struct MatchInfo {
  std::string provider;
  std::string league;
  std::string season;

  friend bool operator==(const MatchInfo&, const MatchInfo&) = default;
};

/// One match period: the ordered event dataset the verifier walks.
struct VersaStream {
  std::string match_id;
  int period = 1;
  std::vector<Event> events;
  std::pair<std::string, std::string> team_ids;
  FormatVariant format_variant = FormatVariant::Versa;
  MatchInfo info;

  friend bool operator==(const VersaStream&, const VersaStream&) = default;
};

/// Stable sort by timestamp; exact ties keep their input order.
VersaStream sort_canonical(VersaStream stream);

bool is_canonically_sorted(const VersaStream& stream);

/// Euclidean distance in meters. Throws Errc::DistanceUnavailable when either
/// event has no location.
double action_distance(const Event& a, const Event& b);

/// Teams in order of first appearance, padded with empty strings.
std::pair<std::string, std::string> infer_team_ids(const std::vector<Event>& events);

std::vector<ActionType> action_sequence(const VersaStream& stream);

}  // namespace versa
