#include "versa/corruptor.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "json.hpp"
#include "versa/error.hpp"

namespace versa {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 5> kKindNames = {
    "DropPassReceived", "SwapShotBlock", "DropCarry", "InsertMicroCarry", "TimestampJitter"};

bool opposing_block_follows(const std::vector<Event>& ev, std::size_t i) {
  return i + 1 < ev.size() && is_shot(ev[i].action) && ev[i + 1].action == ActionType::Block &&
         ev[i + 1].team_id != ev[i].team_id && ev[i + 1].period == ev[i].period;
}

// Halfway between the reception and the receiver's next touch, so the inserted
// carry never breaks spatial continuity. Before a real Carry it stays put.
Event micro_carry(const std::vector<Event>& ev, std::size_t i) {
  const Event& received = ev[i];
  Event c = received;
  c.event_id = received.event_id + "-micro";
  c.action = ActionType::Carry;
  c.outcome = Outcome::Success;
  c.shot_result.reset();
  c.provenance = Provenance::Recorded;
  if (i + 1 < ev.size() && ev[i + 1].period == received.period) {
    const Event& next = ev[i + 1];
    c.timestamp = received.timestamp + (next.timestamp - received.timestamp) / 2.0;
    if (next.player_id == received.player_id && next.action != ActionType::Carry &&
        next.location && received.location) {
      c.location = Location{(received.location->x + next.location->x) / 2.0,
                            (received.location->y + next.location->y) / 2.0};
    }
  }
  return c;
}

bool compatible(InjectionKind kind, const ExceptionRecord& r) {
  switch (kind) {
    case InjectionKind::DropPassReceived:
      return r.handler_applied == AppliedHandler::InsertBefore &&
             r.attributed_action == ActionType::PassReceived;
    case InjectionKind::SwapShotBlock:
      return r.handler_applied == AppliedHandler::Reorder && r.action == ActionType::Block;
    case InjectionKind::DropCarry:
      return r.handler_applied == AppliedHandler::InsertBefore &&
             r.attributed_action == ActionType::Carry;
    default:
      return false;
  }
}

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

void CorruptionPlan::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(Errc::MalformedProfile, std::string(name) + " must be in [0, 1]");
    }
  };
  check(drop_pass_received, "drop_pass_received");
  check(swap_shot_block, "swap_shot_block");
  check(drop_carry, "drop_carry");
  check(insert_micro_carry, "insert_micro_carry");
  check(timestamp_jitter.fraction, "timestamp_jitter.fraction");
  if (!(timestamp_jitter.max_seconds >= 0.0)) {
    throw Error(Errc::MalformedProfile, "timestamp_jitter.max_seconds must be >= 0");
  }
}

CorruptionPlan plan_from_json(std::string_view text) {
  CorruptionPlan p;
  try {
    const auto j = json::parse(text);
    p.seed = j.value("seed", std::uint64_t{0});
    p.drop_pass_received = j.value("drop_pass_received", 0.0);
    p.swap_shot_block = j.value("swap_shot_block", 0.0);
    p.drop_carry = j.value("drop_carry", 0.0);
    p.insert_micro_carry = j.value("insert_micro_carry", 0.0);
    if (auto it = j.find("timestamp_jitter"); it != j.end()) {
      p.timestamp_jitter.fraction = it->value("fraction", 0.0);
      p.timestamp_jitter.max_seconds = it->value("max_seconds", 0.0);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedProfile, std::string("corruption plan: ") + e.what());
  }
  p.validate();
  return p;
}

std::string plan_to_json(const CorruptionPlan& p) {
  ordered_json j;
  j["seed"] = p.seed;
  j["drop_pass_received"] = p.drop_pass_received;
  j["swap_shot_block"] = p.swap_shot_block;
  j["drop_carry"] = p.drop_carry;
  j["insert_micro_carry"] = p.insert_micro_carry;
  j["timestamp_jitter"] = {{"fraction", p.timestamp_jitter.fraction},
                           {"max_seconds", p.timestamp_jitter.max_seconds}};
  return j.dump(2) + "\n";
}

std::string_view to_string(InjectionKind k) { return kKindNames.at(static_cast<std::size_t>(k)); }

CorruptionResult corrupt(const VersaStream& stream, const CorruptionPlan& plan) {
  plan.validate();
  SplitMix64 rng(plan.seed);
  const auto& in = stream.events;

  CorruptionResult result;
  result.stream = stream;
  auto& out = result.stream.events;
  out.clear();
  out.reserve(in.size() + in.size() / 8);
  auto& truth = result.truth;

  // Drops point at the next kept event; resolved once it is placed.
  std::vector<std::size_t> pending_drops;
  auto place = [&](Event e) {
    for (auto k : pending_drops) truth[k].site = out.size();
    pending_drops.clear();
    out.push_back(std::move(e));
  };

  for (std::size_t i = 0; i < in.size(); ++i) {
    const Event& e = in[i];
    if (opposing_block_follows(in, i) && rng.uniform() < plan.swap_shot_block) {
      Event block = in[i + 1];
      Event shot = e;
      std::swap(block.timestamp, shot.timestamp);
      place(block);
      truth.push_back({InjectionKind::SwapShotBlock, out.size() - 1, block.event_id, true});
      place(shot);
      ++i;
      continue;
    }
    if (e.action == ActionType::PassReceived && rng.uniform() < plan.drop_pass_received) {
      pending_drops.push_back(truth.size());
      truth.push_back({InjectionKind::DropPassReceived, 0, e.event_id, true});
      continue;
    }
    if (e.action == ActionType::Carry && rng.uniform() < plan.drop_carry) {
      pending_drops.push_back(truth.size());
      truth.push_back({InjectionKind::DropCarry, 0, e.event_id, true});
      continue;
    }
    place(e);
    if (e.action == ActionType::PassReceived && rng.uniform() < plan.insert_micro_carry) {
      place(micro_carry(in, i));
      truth.push_back({InjectionKind::InsertMicroCarry, out.size() - 1, out.back().event_id, false});
    }
  }
  for (auto k : pending_drops) truth[k].site = out.empty() ? 0 : out.size() - 1;

  const auto& jitter = plan.timestamp_jitter;
  if (jitter.fraction > 0.0 && jitter.max_seconds > 0.0) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (!(rng.uniform() < jitter.fraction)) continue;
      const double delta = rng.uniform(-jitter.max_seconds, jitter.max_seconds);
      const double lo = k > 0 && out[k - 1].period == out[k].period ? out[k - 1].timestamp : 0.0;
      const double hi = k + 1 < out.size() && out[k + 1].period == out[k].period
                            ? out[k + 1].timestamp
                            : out[k].timestamp + jitter.max_seconds;
      out[k].timestamp = std::clamp(out[k].timestamp + delta, lo, std::max(lo, hi));
      truth.push_back({InjectionKind::TimestampJitter, k, out[k].event_id, false});
    }
  }
  return result;
}

std::string truth_to_jsonl(const std::vector<Injection>& truth) {
  std::string out;
  for (const auto& t : truth) {
    ordered_json j;
    j["kind"] = std::string(to_string(t.kind));
    j["site"] = t.site;
    j["event_id"] = t.event_id;
    j["scored"] = t.scored;
    out += j.dump() + '\n';
  }
  return out;
}

DetectionScore score_detection(const std::vector<Injection>& truth,
                               const std::vector<ExceptionRecord>& records,
                               const VersaStream& corrupted, std::size_t window_radius) {
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t k = 0; k < corrupted.events.size(); ++k) {
    position.emplace(corrupted.events[k].event_id, k);
  }

  DetectionScore score;
  score.records = records.size();
  std::vector<bool> taken(truth.size(), false);
  for (const auto& r : records) {
    auto pos_it = position.find(r.event_id);
    const std::size_t pos = pos_it != position.end() ? pos_it->second : r.stream_index;
    for (std::size_t k = 0; k < truth.size(); ++k) {
      const auto& t = truth[k];
      if (taken[k] || !t.scored || !compatible(t.kind, r)) continue;
      const std::size_t gap = pos > t.site ? pos - t.site : t.site - pos;
      if (gap > window_radius) continue;
      taken[k] = true;
      ++score.matched;
      break;
    }
  }
  score.injected = static_cast<std::size_t>(
      std::count_if(truth.begin(), truth.end(), [](const auto& t) { return t.scored; }));
  if (score.records > 0) score.precision = static_cast<double>(score.matched) / score.records;
  if (score.injected > 0) score.recall = static_cast<double>(score.matched) / score.injected;
  return score;
}

}  // namespace versa
