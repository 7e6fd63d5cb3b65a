#include <algorithm>
#include <set>

#include "builders.hpp"
#include "doctest.h"
#include "generator.hpp"
#include "versa/corruptor.hpp"
#include "versa/error.hpp"
#include "versa/verifier.hpp"

using namespace versa;
using versa::test::ev;
using versa::test::stream_of;
using A = ActionType;

namespace {

std::size_t count_kind(const std::vector<Injection>& truth, InjectionKind k) {
  return static_cast<std::size_t>(
      std::count_if(truth.begin(), truth.end(), [&](const Injection& t) { return t.kind == k; }));
}

std::size_t count_action(const VersaStream& s, A a) {
  return static_cast<std::size_t>(
      std::count_if(s.events.begin(), s.events.end(), [&](const Event& e) { return e.action == a; }));
}

// Three shots, each blocked by the other side right away.
VersaStream three_blocked_shots() {
  std::vector<Event> es{ev("k", A::KickOff, "H", "H9", 0, Location{52.5, 34}),
                        ev("p", A::Pass, "H", "H9", 1, Location{52.5, 34})};
  double t = 2;
  for (int k = 0; k < 3; ++k) {
    const auto n = std::to_string(k);
    es.push_back(ev("r" + n, A::PassReceived, "H", "H7", t, Location{80, 30}));
    es.push_back(ev("s" + n, A::Shot, "H", "H7", t + 1, Location{80.5, 30}));
    es.push_back(ev("b" + n, A::Block, "A", "A5", t + 2, Location{83, 31}));
    es.push_back(ev("v" + n, A::Recovery, "H", "H8", t + 3, Location{75, 30}));
    es.push_back(ev("q" + n, A::Pass, "H", "H8", t + 4, Location{75.3, 30}));
    t += 5;
  }
  return stream_of(std::move(es));
}

}  // namespace

TEST_CASE("SplitMix64 reference values") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng.next() == 0x06c45d188009454fULL);
  SplitMix64 u(99);
  for (int k = 0; k < 1000; ++k) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("plans") {
  CorruptionPlan p;
  p.seed = 42;
  p.drop_pass_received = 0.25;
  p.timestamp_jitter = {0.1, 0.5};
  const auto back = plan_from_json(plan_to_json(p));
  CHECK(back.seed == 42);
  CHECK(back.drop_pass_received == 0.25);
  CHECK(back.timestamp_jitter.max_seconds == 0.5);
  CHECK_THROWS_AS(plan_from_json(R"({"drop_carry": 1.5})"), Error);
  CHECK_THROWS_AS(plan_from_json(R"({"timestamp_jitter": {"max_seconds": -1}})"), Error);
  CHECK_THROWS_AS(plan_from_json("[1"), Error);
}

TEST_CASE("zero rates are the identity") {
  const auto half = test::generate_half(3, "z", 1);
  CorruptionPlan plan;
  plan.seed = 1234;
  const auto r = corrupt(half, plan);
  CHECK(r.stream == half);
  CHECK(r.truth.empty());
}

TEST_CASE("swap every Shot-Block pair") {
  const auto s = three_blocked_shots();
  CHECK(verify_stream(s).records.empty());
  CorruptionPlan plan;
  plan.swap_shot_block = 1.0;
  const auto r = corrupt(s, plan);
  REQUIRE(r.truth.size() == 3);
  for (const auto& t : r.truth) {
    CHECK(t.kind == InjectionKind::SwapShotBlock);
    CHECK(t.scored);
    CHECK(r.stream.events[t.site].action == A::Block);
    CHECK(r.stream.events[t.site].event_id == t.event_id);
    CHECK(r.stream.events[t.site + 1].action == A::Shot);
  }
  CHECK(is_canonically_sorted(r.stream));

  const auto fixed = verify_stream(r.stream);
  CHECK(fixed.records.size() == 3);
  CHECK(action_sequence(fixed.stream) == action_sequence(s));
  const auto score = score_detection(r.truth, fixed.records, r.stream);
  CHECK(score.recall == 1.0);
  CHECK(score.precision == 1.0);
}

TEST_CASE("drops") {
  const auto half = test::generate_half(8, "d", 1);
  CorruptionPlan plan;
  plan.seed = 8;
  plan.drop_pass_received = 1.0;
  const auto r = corrupt(half, plan);
  CHECK(count_action(r.stream, A::PassReceived) == 0);
  CHECK(count_kind(r.truth, InjectionKind::DropPassReceived) == count_action(half, A::PassReceived));
  // The site is the event that followed the dropped one.
  for (const auto& t : r.truth) {
    auto it = std::find_if(half.events.begin(), half.events.end(),
                           [&](const Event& e) { return e.event_id == t.event_id; });
    REQUIRE(it != half.events.end());
    if (it + 1 == half.events.end()) {
      CHECK(t.site == r.stream.events.size() - 1);  // nothing follows: the last event
    } else {
      CHECK(r.stream.events[t.site].event_id == (it + 1)->event_id);
    }
  }

  plan.drop_pass_received = 0.0;
  plan.drop_carry = 1.0;
  const auto c = corrupt(half, plan);
  CHECK(count_action(c.stream, A::Carry) == 0);
  CHECK(count_kind(c.truth, InjectionKind::DropCarry) == count_action(half, A::Carry));
}

TEST_CASE("micro carries are legal and unscored") {
  const auto half = test::generate_half(5, "mc", 1);
  CorruptionPlan plan;
  plan.seed = 5;
  plan.insert_micro_carry = 1.0;
  const auto r = corrupt(half, plan);
  CHECK(r.stream.events.size() == half.events.size() + count_action(half, A::PassReceived));
  for (const auto& t : r.truth) {
    CHECK_FALSE(t.scored);
    CHECK(t.event_id.ends_with("-micro"));
    CHECK(r.stream.events[t.site].action == A::Carry);
    CHECK(r.stream.events[t.site - 1].action == A::PassReceived);
  }
  CHECK(is_canonically_sorted(r.stream));
  CHECK(verify_stream(r.stream).records.empty());
}

TEST_CASE("jitter keeps order") {
  const auto half = test::generate_half(6, "j", 2);
  CorruptionPlan plan;
  plan.seed = 6;
  plan.timestamp_jitter = {0.5, 2.0};
  const auto r = corrupt(half, plan);
  REQUIRE(r.stream.events.size() == half.events.size());
  std::size_t moved = 0;
  for (std::size_t k = 0; k < half.events.size(); ++k) {
    CHECK(r.stream.events[k].event_id == half.events[k].event_id);
    if (r.stream.events[k].timestamp != half.events[k].timestamp) ++moved;
  }
  CHECK(moved > 0);
  CHECK(moved <= count_kind(r.truth, InjectionKind::TimestampJitter));
  CHECK(is_canonically_sorted(r.stream));
  CHECK(sort_canonical(r.stream) == r.stream);
}

TEST_CASE("seeded determinism") {
  const auto half = test::generate_half(9, "s", 1);
  CorruptionPlan plan;
  plan.seed = 77;
  plan.drop_pass_received = 0.3;
  plan.swap_shot_block = 0.5;
  plan.drop_carry = 0.2;
  plan.insert_micro_carry = 0.2;
  plan.timestamp_jitter = {0.1, 0.3};
  const auto a = corrupt(half, plan);
  const auto b = corrupt(half, plan);
  CHECK(a.stream == b.stream);
  CHECK(truth_to_jsonl(a.truth) == truth_to_jsonl(b.truth));
  plan.seed = 78;
  CHECK_FALSE(corrupt(half, plan).stream == a.stream);
  CHECK(truth_to_jsonl(a.truth).find(R"({"kind":"DropPassReceived","site":)") != std::string::npos);
}

TEST_CASE("score_detection") {
  std::vector<Event> es;
  for (int k = 0; k < 120; ++k) es.push_back(ev("e" + std::to_string(k), A::Duel, "H", "H1", k));
  const auto corrupted = stream_of(es);
  auto record = [](int at, A attributed) {
    ExceptionRecord r;
    r.event_id = "e" + std::to_string(at);
    r.stream_index = static_cast<std::size_t>(at);
    r.handler_applied = AppliedHandler::InsertBefore;
    r.attributed_action = attributed;
    return r;
  };

  std::vector<Injection> truth;
  for (std::size_t k = 1; k <= 10; ++k) truth.push_back({InjectionKind::DropPassReceived, k * 10, "x", true});
  truth.push_back({InjectionKind::TimestampJitter, 50, "e50", false});

  SUBCASE("hand-scored") {
    std::vector<ExceptionRecord> recs;
    for (int site = 10; site <= 80; site += 10) recs.push_back(record(site + 3, A::PassReceived));
    recs.push_back(record(90, A::Carry));          // wrong repair
    recs.push_back(record(107, A::PassReceived));  // 7 positions away
    recs.push_back(record(12, A::PassReceived));   // site 10 already taken
    const auto s = score_detection(truth, recs, corrupted);
    CHECK(s.injected == 10);
    CHECK(s.records == 11);
    CHECK(s.matched == 8);
    CHECK(s.recall == doctest::Approx(0.8));
    CHECK(s.precision == doctest::Approx(8.0 / 11.0));
    CHECK(score_detection(truth, recs, corrupted, 7).matched == 9);
  }
  SUBCASE("perfect") {
    std::vector<ExceptionRecord> recs;
    for (int site = 10; site <= 100; site += 10) recs.push_back(record(site, A::PassReceived));
    const auto s = score_detection(truth, recs, corrupted);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
  }
  SUBCASE("empty") {
    const auto s = score_detection(truth, {}, corrupted);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 0.0);
    const auto none = score_detection({}, {record(3, A::Carry)}, corrupted);
    CHECK(none.recall == 1.0);
    CHECK(none.precision == 0.0);
  }
}

TEST_CASE("verifier finds injected errors") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CAPTURE(seed);
    const auto half = test::generate_half(seed, "v" + std::to_string(seed), 1);
    CorruptionPlan plan;
    plan.seed = seed;
    plan.drop_pass_received = 0.2;
    plan.swap_shot_block = 1.0;
    const auto r = corrupt(half, plan);
    const auto fixed = verify_stream(r.stream);
    const auto s = score_detection(r.truth, fixed.records, r.stream);
    CHECK(s.recall >= 0.95);
    CHECK(s.precision >= 0.9);
  }
}
