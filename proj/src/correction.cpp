#include "versa/correction.hpp"

#include <algorithm>

#include "json.hpp"
#include "json_detail.hpp"
#include "versa/error.hpp"

namespace versa {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

double midpoint(double a, double b) { return a + (b - a) / 2.0; }

// Timestamp for an event inserted at window offset `pos` (before the event
// currently there).
double insertion_time(const std::vector<Event>& w, std::size_t pos) {
  const double next = w[pos].timestamp;
  if (pos == 0) return next;
  return midpoint(w[pos - 1].timestamp, next);
}

Event synthesize(const Event& like, ActionType action, std::string id) {
  Event e;
  e.event_id = std::move(id);
  e.period = like.period;
  e.team_id = like.team_id;
  e.player_id = like.player_id;
  e.action = action;
  e.outcome = Outcome::Success;
  e.location = like.location;
  e.provenance = Provenance::Synthesized;
  return e;
}

std::vector<Event> copy_window(const EventWindow& w) { return {w.events.begin(), w.events.end()}; }

constexpr std::array<std::string_view, 4> kHandlerKindNames = {"InsertBefore", "Reorder",
                                                               "Relabel", "ForceState"};
constexpr std::array<std::string_view, 5> kAppliedNames = {
    "InsertBefore", "Reorder", "Relabel", "Unresolved-ForcedState", "Unresolved"};

}  // namespace

std::string_view to_string(HandlerKind k) {
  return kHandlerKindNames.at(static_cast<std::size_t>(k));
}

std::string_view to_string(AppliedHandler h) {
  return kAppliedNames.at(static_cast<std::size_t>(h));
}

AppliedHandler parse_applied_handler(std::string_view name) {
  auto it = std::find(kAppliedNames.begin(), kAppliedNames.end(), name);
  if (it == kAppliedNames.end()) {
    throw Error(Errc::UnknownName, "handler kind '" + std::string(name) + "'");
  }
  return static_cast<AppliedHandler>(it - kAppliedNames.begin());
}

bool Handler::matches(MatchState s, ActionType a) const {
  if (action && *action != a) return false;
  return states.empty() || std::find(states.begin(), states.end(), s) != states.end();
}

std::vector<const Handler*> HandlerRegistry::candidates(MatchState s, ActionType a) const {
  std::vector<const Handler*> out;
  for (const auto& h : handlers_) {
    if (h.matches(s, a)) out.push_back(&h);
  }
  return out;
}

const HandlerRegistry& default_registry() {
  static const HandlerRegistry registry({
      Handler{"shot_block_reorder", HandlerKind::Reorder, {}, ActionType::Block,
              handle_shot_block_reorder},
      Handler{"missing_carry", HandlerKind::InsertBefore, {MatchState::InPossession},
              std::nullopt, handle_missing_carry},
      Handler{"missing_reception", HandlerKind::InsertBefore, {MatchState::InTransition},
              std::nullopt, handle_missing_reception},
      Handler{"missing_turnover", HandlerKind::InsertBefore, {MatchState::InTransition},
              std::nullopt, handle_missing_turnover},
  });
  return registry;
}

// ---------------------------------------------------------------------------
// Handlers

std::optional<Correction> handle_missing_reception(const HandlerInput& in) {
  if (in.state != MatchState::InTransition) return std::nullopt;
  const Event& e = in.window.current();
  const auto& pass = in.context.last_pass;
  if (!pass || pass->outcome == Outcome::Failure) return std::nullopt;
  if (e.team_id.empty() || e.team_id != pass->team_id || e.player_id.empty()) return std::nullopt;
  if (e.action == ActionType::PassReceived) return std::nullopt;
  if (!in.table.lookup(MatchState::InPossession, e.action)) return std::nullopt;

  const std::size_t focus = in.window.focus_offset();
  std::optional<std::size_t> pass_pos;
  for (std::size_t k = 0; k < focus; ++k) {
    if (in.window.events[k].event_id == pass->event_id) pass_pos = k;
  }
  if (!pass_pos) return std::nullopt;  // antecedent pass outside the window

  auto w = copy_window(in.window);
  const std::size_t at = *pass_pos + 1;
  Event received = synthesize(e, ActionType::PassReceived, pass->event_id + "+PassReceived");
  received.timestamp = insertion_time(w, at);
  std::string id = received.event_id;
  w.insert(w.begin() + static_cast<std::ptrdiff_t>(at), std::move(received));
  return Correction{e.action, std::move(w), {std::move(id)}, {}, ActionType::PassReceived};
}

std::optional<Correction> handle_missing_turnover(const HandlerInput& in) {
  if (in.state != MatchState::InTransition) return std::nullopt;
  const Event& e = in.window.current();
  const auto& pass = in.context.last_pass;
  if (!pass || pass->outcome == Outcome::Success) return std::nullopt;
  if (e.team_id.empty() || e.team_id == pass->team_id || e.player_id.empty()) return std::nullopt;
  if (!in.table.lookup(MatchState::InPossession, e.action)) return std::nullopt;

  auto w = copy_window(in.window);
  const std::size_t at = in.window.focus_offset();
  Event interception = synthesize(e, ActionType::Interception, e.event_id + "-Interception");
  interception.timestamp = insertion_time(w, at);
  std::string id = interception.event_id;
  w.insert(w.begin() + static_cast<std::ptrdiff_t>(at), std::move(interception));
  return Correction{e.action, std::move(w), {std::move(id)}, {}, ActionType::Interception};
}

std::optional<Correction> handle_shot_block_reorder(const HandlerInput& in) {
  // Any state but PostShot: a corner shot is taken from SetPiece.
  if (in.state == MatchState::PostShot) return std::nullopt;
  const Event& block = in.window.current();
  if (block.action != ActionType::Block) return std::nullopt;

  const std::size_t focus = in.window.focus_offset();
  std::optional<std::size_t> shot_pos;
  for (std::size_t k = focus + 1; k < in.window.events.size(); ++k) {
    const Event& c = in.window.events[k];
    if (is_shot(c.action) && !c.team_id.empty() && c.team_id != block.team_id) {
      shot_pos = k;
      break;  // nearest forward match
    }
  }
  if (!shot_pos) return std::nullopt;

  auto w = copy_window(in.window);
  Event moved_block = w[focus];
  w.erase(w.begin() + static_cast<std::ptrdiff_t>(focus));
  const std::size_t shot_at = *shot_pos - 1;
  Event& shot = w[shot_at];

  std::vector<std::string> moved{moved_block.event_id};
  if (moved_block.timestamp < shot.timestamp) {
    if (shot_at == focus) {
      std::swap(moved_block.timestamp, shot.timestamp);
      shot.provenance = Provenance::Reordered;
      moved.push_back(shot.event_id);
    } else {
      // Swapping across intermediate events would break timestamp order.
      moved_block.timestamp = shot.timestamp;
    }
  }
  moved_block.provenance = Provenance::Reordered;
  w.insert(w.begin() + static_cast<std::ptrdiff_t>(shot_at + 1), std::move(moved_block));
  return Correction{ActionType::Block, std::move(w), {}, std::move(moved), ActionType::Block};
}

std::optional<Correction> handle_missing_carry(const HandlerInput& in) {
  if (in.state != MatchState::InPossession) return std::nullopt;
  if (in.rejection.no_rule() ||
      !std::holds_alternative<cond::SpatialContinuity>(*in.rejection.failed_condition)) {
    return std::nullopt;
  }
  const Event& e = in.window.current();
  const auto& prev = in.context.last_on_ball;
  if (!prev || prev->player_id != e.player_id || !e.location) return std::nullopt;

  auto w = copy_window(in.window);
  const std::size_t at = in.window.focus_offset();
  Event carry = synthesize(e, ActionType::Carry, e.event_id + "-Carry");
  carry.timestamp = insertion_time(w, at);
  std::string id = carry.event_id;
  w.insert(w.begin() + static_cast<std::ptrdiff_t>(at), std::move(carry));
  return Correction{e.action, std::move(w), {std::move(id)}, {}, ActionType::Carry};
}

FallbackDecision handle_fallback(const HandlerInput& in) {
  const ActionType a = in.window.current().action;
  return FallbackDecision{a, in.table.canonical_source(a)};
}

// ---------------------------------------------------------------------------
// Exception log

std::string to_json_line(const ExceptionRecord& r) {
  ordered_json j;
  j["stream_index"] = r.stream_index;
  j["event_id"] = r.event_id;
  j["state_at_failure"] = std::string(to_string(r.state_at_failure));
  j["action"] = std::string(to_string(r.action));
  j["reason"] = r.reason.describe();
  j["failed_condition"] =
      r.reason.failed_condition ? detail::condition_to_json(*r.reason.failed_condition)
                                : ordered_json(nullptr);
  j["handler"] = r.handler;
  j["handler_applied"] = std::string(to_string(r.handler_applied));
  j["attributed_action"] = std::string(to_string(r.attributed_action));
  j["events_inserted"] = r.events_inserted;
  j["events_moved"] = r.events_moved;
  return j.dump();
}

ExceptionRecord record_from_json_line(std::string_view text) {
  try {
    const auto j = json::parse(text);
    ExceptionRecord r;
    r.stream_index = j.at("stream_index").get<std::size_t>();
    r.event_id = j.at("event_id").get<std::string>();
    r.state_at_failure = parse_state(j.at("state_at_failure").get<std::string>());
    r.action = parse_action(j.at("action").get<std::string>());
    if (const auto& c = j.at("failed_condition"); !c.is_null()) {
      r.reason.failed_condition = detail::condition_from_json(c);
    }
    r.handler = j.at("handler").get<std::string>();
    r.handler_applied = parse_applied_handler(j.at("handler_applied").get<std::string>());
    r.attributed_action = parse_action(j.at("attributed_action").get<std::string>());
    r.events_inserted = j.at("events_inserted").get<std::vector<std::string>>();
    r.events_moved = j.at("events_moved").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedRecord, std::string("exception record: ") + e.what());
  }
}

std::string serialize_records(const std::vector<ExceptionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

std::vector<ExceptionRecord> parse_records(std::string_view text) {
  std::vector<ExceptionRecord> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto row = text.substr(pos, end - pos);
    if (row.find_first_not_of(" \t\r") != std::string_view::npos) {
      out.push_back(record_from_json_line(row));
    }
    pos = end + 1;
  }
  return out;
}

}  // namespace versa
