#include "versa/verifier.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace versa {
namespace {

bool starts_period(const std::vector<Event>& events, std::size_t i) {
  return i == 0 || events[i].period != events[i - 1].period;
}

// Every event of the input window must survive the handler.
bool keeps_all_events(const EventWindow& before, const std::vector<Event>& after) {
  std::unordered_multiset<std::string> ids;
  for (const auto& e : after) ids.insert(e.event_id);
  for (const auto& e : before.events) {
    auto it = ids.find(e.event_id);
    if (it == ids.end()) return false;
    ids.erase(it);
  }
  return true;
}

std::optional<std::size_t> first_difference(const EventWindow& before,
                                            const std::vector<Event>& after) {
  const std::size_t n = std::min(before.events.size(), after.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (!(before.events[k] == after[k])) return before.begin + k;
  }
  if (before.events.size() != after.size()) return before.begin + n;
  return std::nullopt;
}

std::string unique_id(const std::string& base, const std::unordered_set<std::string>& taken) {
  if (!taken.contains(base)) return base;
  for (int n = 2;; ++n) {
    auto candidate = base + "#" + std::to_string(n);
    if (!taken.contains(candidate)) return candidate;
  }
}

}  // namespace

std::size_t VerificationResult::unresolved_count() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.resolved(); }));
}

VerificationResult verify_stream(const VersaStream& input, const TransitionTable& table,
                                 const HandlerRegistry& handlers, const VerifyOptions& options) {
  VerificationResult result;
  result.stream = input;
  auto& events = result.stream.events;

  std::unordered_set<std::string> ids;
  for (const auto& e : events) ids.insert(e.event_id);

  VerifierMachine machine(table);
  std::vector<VerifierMachine> before;  // before[k]: machine prior to event k
  before.reserve(events.size() + 16);
  std::unordered_map<std::string, std::size_t> rejections;

  std::size_t i = 0;
  while (i < events.size()) {
    if (starts_period(events, i)) machine.reset();
    before.erase(before.begin() + static_cast<std::ptrdiff_t>(std::min(i, before.size())),
                 before.end());
    before.push_back(machine);

    const EventWindow w = window(std::span<const Event>(events), i, options.window_radius);
    const TriggerResult outcome = machine.trigger(events[i], w);
    if (outcome.is_accepted()) {
      ++i;
      continue;
    }

    const Event& e = events[i];
    ExceptionRecord record;
    record.stream_index = i;
    record.event_id = e.event_id;
    record.state_at_failure = machine.state();
    record.action = e.action;
    record.reason = outcome.rejection();
    record.attributed_action = e.action;

    const HandlerInput in{machine.state(), machine.context(), record.reason, w, table};
    std::optional<std::size_t> resume;
    if (++rejections[e.event_id] <= options.max_rejections_per_event) {
      for (const Handler* h : handlers.candidates(machine.state(), e.action)) {
        auto fix = h->logic(in);
        if (!fix || !keeps_all_events(w, fix->window)) continue;
        auto changed = first_difference(w, fix->window);
        if (!changed || *changed > i) continue;  // the rejected event would fail again

        for (auto& ev : fix->window) {
          auto id_it = std::find(fix->inserted.begin(), fix->inserted.end(), ev.event_id);
          if (id_it == fix->inserted.end()) continue;
          ev.event_id = unique_id(ev.event_id, ids);
          *id_it = ev.event_id;
          ids.insert(ev.event_id);
        }
        record.handler = h->name;
        record.handler_applied = h->kind == HandlerKind::Reorder   ? AppliedHandler::Reorder
                                 : h->kind == HandlerKind::Relabel ? AppliedHandler::Relabel
                                                                   : AppliedHandler::InsertBefore;
        record.attributed_action = fix->attributed_action;
        record.events_inserted = fix->inserted;
        record.events_moved = fix->moved;

        const auto first = events.begin() + static_cast<std::ptrdiff_t>(w.begin);
        events.erase(first, first + static_cast<std::ptrdiff_t>(w.events.size()));
        events.insert(events.begin() + static_cast<std::ptrdiff_t>(w.begin),
                      std::make_move_iterator(fix->window.begin()),
                      std::make_move_iterator(fix->window.end()));
        resume = changed;
        break;
      }
    }

    if (resume) {
      machine = before[*resume];
      i = *resume;
    } else {
      const FallbackDecision fallback = handle_fallback(in);
      record.handler = "fallback";
      if (fallback.forced_state) {
        machine.force_state(*fallback.forced_state);
        machine.accept_unchecked(events[i]);
        record.handler_applied = AppliedHandler::UnresolvedForcedState;
      } else {
        record.handler_applied = AppliedHandler::Unresolved;
      }
      ++i;
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

VerificationResult verify_stream(const VersaStream& stream) {
  return verify_stream(stream, default_table(), default_registry());
}

ReplayResult replay(const VersaStream& stream, const TransitionTable& table,
                    std::size_t window_radius) {
  ReplayResult result;
  VerifierMachine machine(table);
  const std::span<const Event> events(stream.events);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (starts_period(stream.events, i)) machine.reset();
    if (machine.trigger(events[i], window(events, i, window_radius)).is_accepted()) continue;
    ++result.rejections;
    result.rejected_indices.push_back(i);
    if (auto source = table.canonical_source(events[i].action)) {
      machine.force_state(*source);
      machine.accept_unchecked(events[i]);
    }
  }
  return result;
}

}  // namespace versa
