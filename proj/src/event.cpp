#include "versa/event.hpp"

#include <algorithm>
#include <cmath>

#include "versa/error.hpp"

namespace versa {
namespace {

constexpr std::array<std::string_view, kActionCount> kActionNames = {
    "KickOff",   "Pass",       "Cross",      "PassReceived", "Carry",    "Dribble",
    "Shot",      "Goal",       "GoalMiss",   "GoalPost",     "OwnGoal",  "Block",
    "Catch",     "Out",        "Interception", "Tackle",     "Recovery", "Clearance",
    "Duel",      "Foul",       "Offside",    "Error",        "FreeKick", "CornerKick",
    "ThrowIn",   "GoalKick",   "PassCorner", "ShotCorner",   "Corner",
};

constexpr std::array<std::string_view, 3> kOutcomeNames = {"Success", "Failure", "Unknown"};
constexpr std::array<std::string_view, 6> kShotResultNames = {"Goal", "Catch",    "Block",
                                                              "Out",  "GoalMiss", "GoalPost"};
constexpr std::array<std::string_view, 3> kProvenanceNames = {"Recorded", "Synthesized",
                                                              "Reordered"};
constexpr std::array<std::string_view, 2> kVariantNames = {"Versa", "SimplifiedVersa"};

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<E>(it - names.begin());
}

template <typename E, std::size_t N>
E lookup_or_throw(const std::array<std::string_view, N>& names, std::string_view name,
                  const char* what) {
  if (auto v = lookup<E>(names, name)) return *v;
  throw Error(Errc::UnknownName, std::string(what) + " '" + std::string(name) + "'");
}

}  // namespace

const std::array<ActionType, kActionCount>& all_actions() {
  static const auto actions = [] {
    std::array<ActionType, kActionCount> a{};
    for (std::size_t i = 0; i < kActionCount; ++i) a[i] = static_cast<ActionType>(i);
    return a;
  }();
  return actions;
}

std::string_view to_string(ActionType a) { return kActionNames.at(static_cast<std::size_t>(a)); }
std::string_view to_string(Outcome o) { return kOutcomeNames.at(static_cast<std::size_t>(o)); }
std::string_view to_string(ShotResult r) {
  return kShotResultNames.at(static_cast<std::size_t>(r));
}
std::string_view to_string(Provenance p) {
  return kProvenanceNames.at(static_cast<std::size_t>(p));
}
std::string_view to_string(FormatVariant f) {
  return kVariantNames.at(static_cast<std::size_t>(f));
}

std::optional<ActionType> try_parse_action(std::string_view name) {
  return lookup<ActionType>(kActionNames, name);
}

ActionType parse_action(std::string_view name) {
  return lookup_or_throw<ActionType>(kActionNames, name, "action");
}
Outcome parse_outcome(std::string_view name) {
  return lookup_or_throw<Outcome>(kOutcomeNames, name, "outcome");
}
ShotResult parse_shot_result(std::string_view name) {
  return lookup_or_throw<ShotResult>(kShotResultNames, name, "shot result");
}
Provenance parse_provenance(std::string_view name) {
  return lookup_or_throw<Provenance>(kProvenanceNames, name, "provenance");
}
FormatVariant parse_format_variant(std::string_view name) {
  return lookup_or_throw<FormatVariant>(kVariantNames, name, "format variant");
}

bool is_model_outcome(ActionType a) {
  switch (a) {
    case ActionType::Goal:
    case ActionType::GoalMiss:
    case ActionType::GoalPost:
    case ActionType::Out:
      return true;
    default:
      return false;
  }
}

bool is_pass_like(ActionType a) {
  switch (a) {
    case ActionType::Pass:
    case ActionType::Cross:
    case ActionType::FreeKick:
    case ActionType::CornerKick:
    case ActionType::ThrowIn:
    case ActionType::GoalKick:
    case ActionType::PassCorner:
    case ActionType::Corner:
      return true;
    default:
      return false;
  }
}

bool is_on_ball(ActionType a) {
  switch (a) {
    case ActionType::Goal:
    case ActionType::GoalMiss:
    case ActionType::GoalPost:
    case ActionType::OwnGoal:
    case ActionType::Out:
    case ActionType::Duel:
    case ActionType::Foul:
    case ActionType::Offside:
      return false;
    default:
      return true;
  }
}

bool is_shot(ActionType a) { return a == ActionType::Shot || a == ActionType::ShotCorner; }

bool within_pitch(const Location& loc) {
  return loc.x >= 0.0 && loc.x <= kPitchLength && loc.y >= 0.0 && loc.y <= kPitchWidth;
}

VersaStream sort_canonical(VersaStream stream) {
  std::stable_sort(stream.events.begin(), stream.events.end(),
                   [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
  return stream;
}

bool is_canonically_sorted(const VersaStream& stream) {
  return std::is_sorted(stream.events.begin(), stream.events.end(),
                        [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
}

double action_distance(const Event& a, const Event& b) {
  if (!a.location || !b.location) {
    throw Error(Errc::DistanceUnavailable,
                "event '" + (a.location ? b.event_id : a.event_id) + "' has no location");
  }
  return std::hypot(a.location->x - b.location->x, a.location->y - b.location->y);
}

std::pair<std::string, std::string> infer_team_ids(const std::vector<Event>& events) {
  std::pair<std::string, std::string> teams;
  for (const auto& e : events) {
    if (e.team_id.empty()) continue;
    if (teams.first.empty()) {
      teams.first = e.team_id;
    } else if (e.team_id != teams.first) {
      teams.second = e.team_id;
      break;
    }
  }
  return teams;
}

std::vector<ActionType> action_sequence(const VersaStream& stream) {
  std::vector<ActionType> seq;
  seq.reserve(stream.events.size());
  for (const auto& e : stream.events) seq.push_back(e.action);
  return seq;
}

}  // namespace versa
