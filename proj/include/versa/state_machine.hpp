#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "versa/event.hpp"

namespace versa {

enum class MatchState { KickOff, InTransition, InPossession, BallNeutral, SetPiece, PostShot };

inline constexpr std::size_t kStateCount = 6;

const std::array<MatchState, kStateCount>& all_states();
std::string_view to_string(MatchState s);
MatchState parse_state(std::string_view name);

inline constexpr double kDefaultCarryThreshold = 3.0;
inline constexpr std::size_t kDefaultWindowRadius = 5;

// Guard conditions. Each is a pure predicate over the current event and the
// machine context; rules evaluate them in declaration order.
namespace cond {
struct PrevPassSuccessful {
  friend bool operator==(const PrevPassSuccessful&, const PrevPassSuccessful&) = default;
};
struct SameTeamAsLastPass {
  friend bool operator==(const SameTeamAsLastPass&, const SameTeamAsLastPass&) = default;
};
struct OpposingTeamOfLastPass {
  friend bool operator==(const OpposingTeamOfLastPass&, const OpposingTeamOfLastPass&) = default;
};
struct SamePlayerAsPrev {
  friend bool operator==(const SamePlayerAsPrev&, const SamePlayerAsPrev&) = default;
};
/// Fails only when the same player acts twice and the gap strictly exceeds max_gap.
struct SpatialContinuity {
  double max_gap = kDefaultCarryThreshold;
  friend bool operator==(const SpatialContinuity&, const SpatialContinuity&) = default;
};
/// Holds when the last shot carries no recorded result or the result matches.
struct ShotResultIs {
  ShotResult result = ShotResult::Goal;
  friend bool operator==(const ShotResultIs&, const ShotResultIs&) = default;
};
}  // namespace cond

using Condition = std::variant<cond::PrevPassSuccessful, cond::SameTeamAsLastPass,
                               cond::OpposingTeamOfLastPass, cond::SamePlayerAsPrev,
                               cond::SpatialContinuity, cond::ShotResultIs>;

std::string_view condition_name(const Condition& c);

struct TransitionRule {
  MatchState source = MatchState::KickOff;
  ActionType action = ActionType::Pass;
  MatchState target = MatchState::KickOff;
  std::vector<Condition> conditions;

  bool is_self_loop() const { return source == target; }
  friend bool operator==(const TransitionRule&, const TransitionRule&) = default;
};

/// An action that keeps the current state in each listed source state.
struct SelfLoop {
  ActionType action = ActionType::Duel;
  std::vector<MatchState> sources;
  friend bool operator==(const SelfLoop&, const SelfLoop&) = default;
};

/// An action accepted from every state except the excluded ones.
struct WildcardRule {
  ActionType action = ActionType::OwnGoal;
  MatchState target = MatchState::KickOff;
  std::vector<MatchState> excluded_sources;
  friend bool operator==(const WildcardRule&, const WildcardRule&) = default;
};

/// The rule set T. Explicit rules, self-loops and wildcards are expanded into
/// one (state, action) index at construction; any key defined twice throws
/// Errc::DuplicateRule.
class TransitionTable {
 public:
  TransitionTable(std::vector<TransitionRule> rules, std::vector<SelfLoop> self_loops,
                  std::vector<WildcardRule> wildcards, int version = 1);

  const TransitionRule* lookup(MatchState source, ActionType action) const;

  /// First state (in enumeration order) with a rule for `action`.
  std::optional<MatchState> canonical_source(ActionType action) const;

  bool has_rule_for(ActionType action) const { return canonical_source(action).has_value(); }

  /// Copy with every SpatialContinuity guard set to `max_gap` meters.
  TransitionTable with_continuity_threshold(double max_gap) const;

  const std::vector<TransitionRule>& rules() const { return rules_; }
  const std::vector<SelfLoop>& self_loops() const { return self_loops_; }
  const std::vector<WildcardRule>& wildcards() const { return wildcards_; }
  int version() const { return version_; }

  /// Every (state, action) entry after expansion, ordered by state then action.
  std::vector<TransitionRule> expanded_rules() const;

  friend bool operator==(const TransitionTable& a, const TransitionTable& b) {
    return a.version_ == b.version_ && a.rules_ == b.rules_ && a.self_loops_ == b.self_loops_ &&
           a.wildcards_ == b.wildcards_;
  }

 private:
  void insert(TransitionRule rule);

  int version_;
  std::vector<TransitionRule> rules_;
  std::vector<SelfLoop> self_loops_;
  std::vector<WildcardRule> wildcards_;
  std::array<std::array<std::optional<TransitionRule>, kActionCount>, kStateCount> index_;
};

const TransitionTable& default_table();
TransitionTable table_from_json(std::string_view text);
std::string table_to_json(const TransitionTable& table);
TransitionTable load_table(const std::filesystem::path& path);

// Bookkeeping the guards need; refreshed after every accepted event.
struct PassContext {
  std::string event_id;
  std::string team_id;
  std::string player_id;
  double timestamp = 0.0;
  Outcome outcome = Outcome::Unknown;
  friend bool operator==(const PassContext&, const PassContext&) = default;
};

struct OnBallContext {
  std::string event_id;
  std::string team_id;
  std::string player_id;
  std::optional<Location> location;
  friend bool operator==(const OnBallContext&, const OnBallContext&) = default;
};

struct MachineContext {
  std::optional<PassContext> last_pass;
  std::optional<OnBallContext> last_on_ball;
  std::optional<ShotResult> last_shot_result;
  friend bool operator==(const MachineContext&, const MachineContext&) = default;
};

/// The ±radius neighbourhood of one event, with absolute indices for splicing.
struct EventWindow {
  std::span<const Event> events;
  std::size_t begin = 0;  // absolute index of events[0]
  std::size_t focus = 0;  // absolute index of the event under test

  std::size_t end() const { return begin + events.size(); }
  std::size_t focus_offset() const { return focus - begin; }
  const Event& current() const { return events[focus_offset()]; }
};

/// 0-based `i`; the window spans [i - radius, i + radius] clipped to the stream.
EventWindow window(std::span<const Event> events, std::size_t i,
                   std::size_t radius = kDefaultWindowRadius);
EventWindow window(const VersaStream& stream, std::size_t i,
                   std::size_t radius = kDefaultWindowRadius);

bool holds(const Condition& c, const Event& event, const EventWindow& window,
           const MachineContext& context);

struct Rejection {
  std::optional<Condition> failed_condition;  // empty: no rule for (state, action)

  bool no_rule() const { return !failed_condition.has_value(); }
  /// "NoRule" or "ConditionFailed(<name>)"
  std::string describe() const;
  friend bool operator==(const Rejection&, const Rejection&) = default;
};

class TriggerResult {
 public:
  static TriggerResult accepted(MatchState s) { return TriggerResult(s); }
  static TriggerResult rejected(Rejection r) { return TriggerResult(std::move(r)); }

  bool is_accepted() const { return std::holds_alternative<MatchState>(value_); }
  MatchState new_state() const { return std::get<MatchState>(value_); }
  const Rejection& rejection() const { return std::get<Rejection>(value_); }

 private:
  explicit TriggerResult(std::variant<MatchState, Rejection> v) : value_(std::move(v)) {}
  std::variant<MatchState, Rejection> value_;
};

class VerifierMachine {
 public:
  explicit VerifierMachine(const TransitionTable& table) : table_(&table) {}

  MatchState state() const { return state_; }
  const MachineContext& context() const { return context_; }
  const TransitionTable& table() const { return *table_; }

  /// Back to KickOff with an empty context.
  void reset();

  /// Accepted iff a rule exists for (state, action) and all of its guards hold.
  /// A rejection leaves the machine untouched.
  TriggerResult trigger(const Event& event, const EventWindow& window);

  /// Moves to `state` without consuming an event.
  void force_state(MatchState state) { state_ = state; }

  /// Applies the rule for (state, action) ignoring its guards. Returns false
  /// (and changes nothing) when no such rule exists.
  bool accept_unchecked(const Event& event);

 private:
  void absorb(const Event& event);

  const TransitionTable* table_;
  MatchState state_ = MatchState::KickOff;
  MachineContext context_;
};

}  // namespace versa
