#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "versa/event.hpp"
#include "versa/state_machine.hpp"

namespace versa {

enum class HandlerKind { InsertBefore, Reorder, Relabel, ForceState };

std::string_view to_string(HandlerKind k);

/// What a handler sees when the machine rejects the focus event of `window`.
struct HandlerInput {
  MatchState state;
  const MachineContext& context;
  const Rejection& rejection;
  const EventWindow& window;
  const TransitionTable& table;
};

/// A handler's fix: `window` replaces the input window's events in place.
/// Every event of the input window must still be present.
struct Correction {
  ActionType corrected_action = ActionType::Pass;
  std::vector<Event> window;
  std::vector<std::string> inserted;
  std::vector<std::string> moved;
  // Action type the exception is booked under in reports: the synthesized or
  // moved action when there is one.
  ActionType attributed_action = ActionType::Pass;
};

/// Returns std::nullopt when its preconditions do not hold, which defers to
/// the next matching handler and finally to the fallback.
using HandlerLogic = std::function<std::optional<Correction>(const HandlerInput&)>;

struct Handler {
  std::string name;
  HandlerKind kind = HandlerKind::InsertBefore;
  std::vector<MatchState> states;          // empty matches any state
  std::optional<ActionType> action;        // empty matches any action
  HandlerLogic logic;

  bool matches(MatchState s, ActionType a) const;
};

/// Ordered handlers; lookup yields every match in order. The fallback is not
/// stored here: verify_stream always applies it last.
class HandlerRegistry {
 public:
  HandlerRegistry() = default;
  explicit HandlerRegistry(std::vector<Handler> handlers) : handlers_(std::move(handlers)) {}

  std::vector<const Handler*> candidates(MatchState s, ActionType a) const;
  const std::vector<Handler>& handlers() const { return handlers_; }

 private:
  std::vector<Handler> handlers_;
};

/// shot_block_reorder, missing_carry, missing_reception, missing_turnover.
const HandlerRegistry& default_registry();

// Missing PassReceived after a non-failed pass by the acting team. Inserts a
// synthesized reception right after that pass.
std::optional<Correction> handle_missing_reception(const HandlerInput& in);

// Opponent acts while the ball travels after a failed or unknown pass. Inserts
// a synthesized Interception for that player right before the event.
std::optional<Correction> handle_missing_turnover(const HandlerInput& in);

// Block recorded ahead of the opposing Shot it stopped. Moves it right after
// the nearest such Shot in the forward half of the window.
std::optional<Correction> handle_shot_block_reorder(const HandlerInput& in);

// Same player acts twice with a gap above the continuity threshold. Inserts a
// synthesized Carry ending at the current location.
std::optional<Correction> handle_missing_carry(const HandlerInput& in);

struct FallbackDecision {
  ActionType action = ActionType::Pass;
  std::optional<MatchState> forced_state;  // empty: the action has no rule anywhere
};

/// Forces the machine into the action's canonical source state so the event
/// can be accepted.
FallbackDecision handle_fallback(const HandlerInput& in);

enum class AppliedHandler { InsertBefore, Reorder, Relabel, UnresolvedForcedState, Unresolved };

std::string_view to_string(AppliedHandler h);
AppliedHandler parse_applied_handler(std::string_view name);

struct ExceptionRecord {
  std::size_t stream_index = 0;
  std::string event_id;
  MatchState state_at_failure = MatchState::KickOff;
  ActionType action = ActionType::Pass;
  Rejection reason;
  std::string handler;
  AppliedHandler handler_applied = AppliedHandler::Unresolved;
  ActionType attributed_action = ActionType::Pass;
  std::vector<std::string> events_inserted;
  std::vector<std::string> events_moved;

  bool resolved() const {
    return handler_applied != AppliedHandler::UnresolvedForcedState &&
           handler_applied != AppliedHandler::Unresolved;
  }
  friend bool operator==(const ExceptionRecord&, const ExceptionRecord&) = default;
};

std::string to_json_line(const ExceptionRecord& record);
ExceptionRecord record_from_json_line(std::string_view text);
std::string serialize_records(const std::vector<ExceptionRecord>& records);
std::vector<ExceptionRecord> parse_records(std::string_view text);

}  // namespace versa
