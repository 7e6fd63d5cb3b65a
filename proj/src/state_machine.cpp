#include "versa/state_machine.hpp"

#include <algorithm>
#include <cmath>

#include "embedded.hpp"
#include "json.hpp"
#include "json_detail.hpp"
#include "versa/error.hpp"
#include "versa/io.hpp"

namespace versa {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, kStateCount> kStateNames = {
    "KickOff", "InTransition", "InPossession", "BallNeutral", "SetPiece", "PostShot"};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t idx(MatchState s) { return static_cast<std::size_t>(s); }
std::size_t idx(ActionType a) { return static_cast<std::size_t>(a); }

std::vector<MatchState> parse_state_list(const json& j) {
  std::vector<MatchState> out;
  if (j.is_string() && j.get<std::string>() == "*") {
    const auto& all = all_states();
    return {all.begin(), all.end()};
  }
  for (const auto& s : j) out.push_back(parse_state(s.get<std::string>()));
  return out;
}

}  // namespace

namespace detail {

Condition condition_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "PrevPassSuccessful") return cond::PrevPassSuccessful{};
  if (type == "SameTeamAsLastPass") return cond::SameTeamAsLastPass{};
  if (type == "OpposingTeamOfLastPass") return cond::OpposingTeamOfLastPass{};
  if (type == "SamePlayerAsPrev") return cond::SamePlayerAsPrev{};
  if (type == "SpatialContinuity") {
    return cond::SpatialContinuity{j.value("max_gap", kDefaultCarryThreshold)};
  }
  if (type == "ShotResultIs") {
    return cond::ShotResultIs{parse_shot_result(j.at("result").get<std::string>())};
  }
  throw Error(Errc::MalformedTable, "unknown condition type '" + type + "'");
}

ordered_json condition_to_json(const Condition& c) {
  ordered_json j;
  j["type"] = std::string(condition_name(c));
  std::visit(overloaded{
                 [&](const cond::SpatialContinuity& s) { j["max_gap"] = s.max_gap; },
                 [&](const cond::ShotResultIs& s) {
                   j["result"] = std::string(to_string(s.result));
                 },
                 [](const auto&) {},
             },
             c);
  return j;
}

}  // namespace detail

const std::array<MatchState, kStateCount>& all_states() {
  static const std::array<MatchState, kStateCount> states = {
      MatchState::KickOff,     MatchState::InTransition, MatchState::InPossession,
      MatchState::BallNeutral, MatchState::SetPiece,     MatchState::PostShot};
  return states;
}

std::string_view to_string(MatchState s) { return kStateNames.at(idx(s)); }

MatchState parse_state(std::string_view name) {
  auto it = std::find(kStateNames.begin(), kStateNames.end(), name);
  if (it == kStateNames.end()) {
    throw Error(Errc::UnknownName, "state '" + std::string(name) + "'");
  }
  return static_cast<MatchState>(it - kStateNames.begin());
}

std::string_view condition_name(const Condition& c) {
  return std::visit(overloaded{
                        [](const cond::PrevPassSuccessful&) { return "PrevPassSuccessful"; },
                        [](const cond::SameTeamAsLastPass&) { return "SameTeamAsLastPass"; },
                        [](const cond::OpposingTeamOfLastPass&) {
                          return "OpposingTeamOfLastPass";
                        },
                        [](const cond::SamePlayerAsPrev&) { return "SamePlayerAsPrev"; },
                        [](const cond::SpatialContinuity&) { return "SpatialContinuity"; },
                        [](const cond::ShotResultIs&) { return "ShotResultIs"; },
                    },
                    c);
}

// ---------------------------------------------------------------------------
// TransitionTable

TransitionTable::TransitionTable(std::vector<TransitionRule> rules,
                                 std::vector<SelfLoop> self_loops,
                                 std::vector<WildcardRule> wildcards, int version)
    : version_(version),
      rules_(std::move(rules)),
      self_loops_(std::move(self_loops)),
      wildcards_(std::move(wildcards)) {
  for (const auto& r : rules_) insert(r);
  for (const auto& loop : self_loops_) {
    for (auto s : loop.sources) insert(TransitionRule{s, loop.action, s, {}});
  }
  for (const auto& w : wildcards_) {
    for (auto s : all_states()) {
      if (std::find(w.excluded_sources.begin(), w.excluded_sources.end(), s) !=
          w.excluded_sources.end()) {
        continue;
      }
      insert(TransitionRule{s, w.action, w.target, {}});
    }
  }
}

void TransitionTable::insert(TransitionRule rule) {
  auto& slot = index_[idx(rule.source)][idx(rule.action)];
  if (slot) {
    throw Error(Errc::DuplicateRule, "(" + std::string(to_string(rule.source)) + ", " +
                                         std::string(to_string(rule.action)) +
                                         ") is defined more than once");
  }
  slot = std::move(rule);
}

const TransitionRule* TransitionTable::lookup(MatchState source, ActionType action) const {
  const auto& slot = index_[idx(source)][idx(action)];
  return slot ? &*slot : nullptr;
}

std::optional<MatchState> TransitionTable::canonical_source(ActionType action) const {
  for (auto s : all_states()) {
    if (lookup(s, action)) return s;
  }
  return std::nullopt;
}

TransitionTable TransitionTable::with_continuity_threshold(double max_gap) const {
  auto rules = rules_;
  for (auto& r : rules) {
    for (auto& c : r.conditions) {
      if (auto* s = std::get_if<cond::SpatialContinuity>(&c)) s->max_gap = max_gap;
    }
  }
  return TransitionTable(std::move(rules), self_loops_, wildcards_, version_);
}

std::vector<TransitionRule> TransitionTable::expanded_rules() const {
  std::vector<TransitionRule> out;
  for (const auto& row : index_) {
    for (const auto& slot : row) {
      if (slot) out.push_back(*slot);
    }
  }
  return out;
}

const TransitionTable& default_table() {
  static const TransitionTable table = table_from_json(embedded::transition_table_json());
  return table;
}

TransitionTable table_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    if (j.value("format", "") != "versa-transition-table") {
      throw Error(Errc::MalformedTable, "format must be 'versa-transition-table'");
    }
    std::vector<TransitionRule> rules;
    for (const auto& r : j.at("rules")) {
      TransitionRule rule;
      rule.source = parse_state(r.at("source").get<std::string>());
      rule.action = parse_action(r.at("action").get<std::string>());
      rule.target = parse_state(r.at("target").get<std::string>());
      for (const auto& c : r.value("conditions", json::array())) {
        rule.conditions.push_back(detail::condition_from_json(c));
      }
      rules.push_back(std::move(rule));
    }
    std::vector<SelfLoop> loops;
    for (const auto& l : j.value("self_loops", json::array())) {
      loops.push_back(SelfLoop{parse_action(l.at("action").get<std::string>()),
                               parse_state_list(l.at("sources"))});
    }
    std::vector<WildcardRule> wildcards;
    for (const auto& w : j.value("wildcards", json::array())) {
      wildcards.push_back(WildcardRule{parse_action(w.at("action").get<std::string>()),
                                       parse_state(w.at("target").get<std::string>()),
                                       parse_state_list(w.value("excluded_sources",
                                                                json::array()))});
    }
    return TransitionTable(std::move(rules), std::move(loops), std::move(wildcards),
                           j.value("version", 1));
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedTable, e.what());
  }
}

std::string table_to_json(const TransitionTable& table) {
  ordered_json j;
  j["format"] = "versa-transition-table";
  j["version"] = table.version();
  j["rules"] = ordered_json::array();
  for (const auto& r : table.rules()) {
    ordered_json rule;
    rule["source"] = std::string(to_string(r.source));
    rule["action"] = std::string(to_string(r.action));
    rule["target"] = std::string(to_string(r.target));
    rule["conditions"] = ordered_json::array();
    for (const auto& c : r.conditions) rule["conditions"].push_back(detail::condition_to_json(c));
    j["rules"].push_back(std::move(rule));
  }
  j["self_loops"] = ordered_json::array();
  for (const auto& l : table.self_loops()) {
    ordered_json sources = ordered_json::array();
    for (auto s : l.sources) sources.push_back(std::string(to_string(s)));
    j["self_loops"].push_back({{"action", std::string(to_string(l.action))}, {"sources", sources}});
  }
  j["wildcards"] = ordered_json::array();
  for (const auto& w : table.wildcards()) {
    ordered_json excluded = ordered_json::array();
    for (auto s : w.excluded_sources) excluded.push_back(std::string(to_string(s)));
    j["wildcards"].push_back({{"action", std::string(to_string(w.action))},
                              {"target", std::string(to_string(w.target))},
                              {"excluded_sources", excluded}});
  }
  return j.dump(2) + "\n";
}

TransitionTable load_table(const std::filesystem::path& path) {
  return table_from_json(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Windows and guards

EventWindow window(std::span<const Event> events, std::size_t i, std::size_t radius) {
  const std::size_t begin = i > radius ? i - radius : 0;
  const std::size_t end = std::min(events.size(), i + radius + 1);
  return EventWindow{events.subspan(begin, end - begin), begin, i};
}

EventWindow window(const VersaStream& stream, std::size_t i, std::size_t radius) {
  return window(std::span<const Event>(stream.events), i, radius);
}

bool holds(const Condition& c, const Event& e, const EventWindow& /*window*/,
           const MachineContext& ctx) {
  return std::visit(
      overloaded{
          [&](const cond::PrevPassSuccessful&) {
            return ctx.last_pass && ctx.last_pass->outcome != Outcome::Failure;
          },
          [&](const cond::SameTeamAsLastPass&) {
            return ctx.last_pass && e.team_id == ctx.last_pass->team_id;
          },
          [&](const cond::OpposingTeamOfLastPass&) {
            return ctx.last_pass && !e.team_id.empty() && e.team_id != ctx.last_pass->team_id;
          },
          [&](const cond::SamePlayerAsPrev&) {
            return ctx.last_on_ball && !e.player_id.empty() &&
                   e.player_id == ctx.last_on_ball->player_id;
          },
          [&](const cond::SpatialContinuity& s) {
            if (!ctx.last_on_ball || e.player_id.empty() ||
                e.player_id != ctx.last_on_ball->player_id) {
              return true;
            }
            const auto& prev = ctx.last_on_ball->location;
            if (!prev || !e.location) return true;
            // "exceeding" the threshold: a gap exactly equal to it is fine.
            return std::hypot(prev->x - e.location->x, prev->y - e.location->y) <= s.max_gap;
          },
          [&](const cond::ShotResultIs& s) {
            return !ctx.last_shot_result || *ctx.last_shot_result == s.result;
          },
      },
      c);
}

std::string Rejection::describe() const {
  if (no_rule()) return "NoRule";
  return "ConditionFailed(" + std::string(condition_name(*failed_condition)) + ")";
}

// ---------------------------------------------------------------------------
// VerifierMachine

void VerifierMachine::reset() {
  state_ = MatchState::KickOff;
  context_ = MachineContext{};
}

TriggerResult VerifierMachine::trigger(const Event& event, const EventWindow& window) {
  const TransitionRule* rule = table_->lookup(state_, event.action);
  if (!rule) return TriggerResult::rejected(Rejection{});
  for (const auto& c : rule->conditions) {
    if (!holds(c, event, window, context_)) return TriggerResult::rejected(Rejection{c});
  }
  state_ = rule->target;
  absorb(event);
  return TriggerResult::accepted(state_);
}

bool VerifierMachine::accept_unchecked(const Event& event) {
  const TransitionRule* rule = table_->lookup(state_, event.action);
  if (!rule) return false;
  state_ = rule->target;
  absorb(event);
  return true;
}

void VerifierMachine::absorb(const Event& e) {
  if (is_pass_like(e.action)) {
    context_.last_pass = PassContext{e.event_id, e.team_id, e.player_id, e.timestamp, e.outcome};
  }
  if (is_on_ball(e.action)) {
    context_.last_on_ball = OnBallContext{e.event_id, e.team_id, e.player_id, e.location};
  }
  if (is_shot(e.action)) context_.last_shot_result = e.shot_result;
}

}  // namespace versa
