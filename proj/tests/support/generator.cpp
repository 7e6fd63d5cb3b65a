#include "generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "versa/corruptor.hpp"

namespace versa::test {
namespace {

constexpr const char* kHome = "H";
constexpr const char* kAway = "A";

class Generator {
 public:
  Generator(std::uint64_t seed, std::string match_id, int period, const GeneratorOptions& opt)
      : rng_(seed), opt_(opt) {
    s_.match_id = std::move(match_id);
    s_.period = period;
    s_.team_ids = {kHome, kAway};
    s_.info = {"synthetic", "test-league", "2024"};
  }

  VersaStream run() {
    const std::string first = s_.period % 2 == 1 ? kHome : kAway;
    kick_off(first);
    while (s_.events.size() < opt_.min_events) step();
    // Never stop on a reception or carry: a half cut off there hides a
    // dropped tail event from the verifier, since nothing follows it.
    while (s_.events.back().action == ActionType::PassReceived ||
           s_.events.back().action == ActionType::Carry) {
      step();
    }
    return std::move(s_);
  }

 private:
  enum class Phase { KickOff, Possession, Neutral, SetPiece };

  double u() { return rng_.uniform(); }
  int pick(int n) { return static_cast<int>(u() * n); }
  static std::string other(const std::string& team) { return team == kHome ? kAway : kHome; }
  std::string player(const std::string& team, int lo = 2) {
    return team + std::to_string(lo + pick(12 - lo));
  }

  static Location clamp(Location l) {
    return {std::clamp(l.x, 2.0, kPitchLength - 2.0), std::clamp(l.y, 2.0, kPitchWidth - 2.0)};
  }
  Location random_spot() { return {2.0 + u() * (kPitchLength - 4.0), 2.0 + u() * (kPitchWidth - 4.0)}; }
  Location offset(Location l, double lo, double hi) {
    const double r = lo + (hi - lo) * u();
    const double a = 2.0 * std::numbers::pi * u();
    return clamp({l.x + r * std::cos(a), l.y + r * std::sin(a)});
  }
  Location near(Location l) { return offset(l, 0.0, 1.0); }

  Event& emit(ActionType a, const std::string& team, const std::string& pl,
              std::optional<Location> loc, Outcome o = Outcome::Success) {
    Event e;
    e.event_id = s_.match_id + "-" + std::to_string(s_.period) + "-" + std::to_string(s_.events.size());
    e.period = s_.period;
    e.timestamp = t_;
    e.team_id = team;
    e.player_id = pl;
    e.action = a;
    e.outcome = o;
    e.location = loc;
    t_ = std::round((t_ + 0.5 + 2.5 * u()) * 10.0) / 10.0;
    s_.events.push_back(std::move(e));
    return s_.events.back();
  }

  void step() {
    switch (phase_) {
      case Phase::KickOff: kick_off(team_); break;
      case Phase::Possession: possession(); break;
      case Phase::Neutral: neutral(); break;
      case Phase::SetPiece: set_piece(); break;
    }
  }

  void kick_off(const std::string& team) {
    const Location centre{kPitchLength / 2, kPitchWidth / 2};
    const auto taker = team + "9";
    emit(ActionType::KickOff, team, taker, centre);
    deliver(ActionType::Pass, team, taker, centre, 1.0);
  }

  // A pass-like delivery and whatever follows it in transition.
  void deliver(ActionType a, const std::string& team, const std::string& passer, Location from,
               double success) {
    const bool ok = u() < success;
    emit(a, team, passer, from, ok ? Outcome::Success : Outcome::Failure);
    if (ok) {
      std::string receiver = player(team);
      while (receiver == passer) receiver = player(team);
      take(team, receiver, offset(from, 5.0, 30.0));
      emit(ActionType::PassReceived, team, holder_, ball_);
      just_received_ = true;
      return;
    }
    const double r = u();
    const std::string opp = other(team);
    if (r < 0.6) {
      take(opp, player(opp), offset(from, 5.0, 25.0));
      emit(ActionType::Interception, opp, holder_, ball_);
    } else if (r < 0.75) {
      take(opp, player(opp), offset(from, 5.0, 25.0));
      emit(ActionType::Tackle, opp, holder_, ball_);
    } else if (r < 0.9) {
      const Location out{from.x, u() < 0.5 ? 0.0 : kPitchWidth};
      emit(ActionType::Out, team, passer, out);
      restart(opp, ActionType::ThrowIn, {out.x, out.y == 0.0 ? 0.5 : kPitchWidth - 0.5});
    } else {
      emit(ActionType::Clearance, opp, player(opp), offset(from, 5.0, 20.0));
      phase_ = Phase::Neutral;
    }
  }

  void take(const std::string& team, const std::string& pl, Location at) {
    team_ = team;
    holder_ = pl;
    ball_ = at;
    phase_ = Phase::Possession;
    just_received_ = false;
    just_carried_ = false;
  }

  void possession() {
    const std::string opp = other(team_);
    if (!just_received_) {
      const double r = u();
      if (r < 0.06) {
        emit(ActionType::Duel, opp, player(opp), near(ball_));
        return;
      }
      if (r < 0.09) {
        emit(ActionType::Foul, opp, player(opp), ball_);
        restart(team_, ActionType::FreeKick, ball_);
        return;
      }
    }
    just_received_ = false;
    const double r = u() * (just_carried_ ? 0.8 : 1.0);
    const bool was_carry = just_carried_;
    just_carried_ = false;
    if (!was_carry && r >= 0.8) {
      const Location to = offset(ball_, 5.0, 20.0);
      if (std::hypot(to.x - ball_.x, to.y - ball_.y) < 4.0) return;  // squeezed by the touchline
      ball_ = to;
      emit(ActionType::Carry, team_, holder_, ball_);
      just_carried_ = true;
      return;
    }
    ball_ = near(ball_);
    if (r < 0.50) {
      deliver(ActionType::Pass, team_, holder_, ball_, 0.85);
    } else if (r < 0.56) {
      deliver(ActionType::Cross, team_, holder_, ball_, 0.5);
    } else if (r < 0.63) {
      emit(ActionType::Dribble, team_, holder_, ball_);
    } else if (r < 0.72) {
      shoot(ActionType::Shot);
    } else {
      emit(ActionType::Error, team_, holder_, ball_, Outcome::Failure);
      phase_ = Phase::Neutral;
    }
  }

  void shoot(ActionType a) {
    static constexpr ShotResult kResults[] = {ShotResult::Goal,     ShotResult::Catch,
                                              ShotResult::Catch,    ShotResult::Block,
                                              ShotResult::Block,    ShotResult::GoalMiss,
                                              ShotResult::GoalMiss, ShotResult::Out,
                                              ShotResult::GoalPost, ShotResult::Block};
    const ShotResult result = kResults[pick(10)];
    const std::string team = team_;
    const std::string shooter = holder_;
    const Location at = ball_;
    emit(a, team, shooter, at).shot_result = result;
    const std::string opp = other(team);
    switch (result) {
      case ShotResult::Goal:
        emit(ActionType::Goal, team, shooter, Location{kPitchLength, kPitchWidth / 2});
        phase_ = Phase::KickOff;
        team_ = opp;
        break;
      case ShotResult::Catch:
        take(opp, opp + "1", offset({kPitchLength - 3.0, kPitchWidth / 2}, 0.0, 3.0));
        emit(ActionType::Catch, opp, holder_, ball_);
        break;
      case ShotResult::Block:
        emit(ActionType::Block, opp, player(opp), offset(at, 1.0, 4.0));
        phase_ = Phase::Neutral;
        break;
      case ShotResult::GoalMiss:
        emit(ActionType::GoalMiss, team, shooter, Location{kPitchLength, kPitchWidth / 2 + 5.0});
        restart(opp, ActionType::GoalKick, {5.5, kPitchWidth / 2});
        break;
      case ShotResult::Out: {
        emit(ActionType::Out, team, shooter, Location{kPitchLength, 10.0});
        static constexpr ActionType kCorners[] = {ActionType::CornerKick, ActionType::CornerKick,
                                                  ActionType::PassCorner, ActionType::ShotCorner};
        restart(team, kCorners[pick(4)], {kPitchLength - 0.5, 0.5});
        break;
      }
      case ShotResult::GoalPost:
        emit(ActionType::GoalPost, team, shooter, Location{kPitchLength, kPitchWidth / 2 + 3.6});
        phase_ = Phase::Neutral;
        break;
    }
  }

  void neutral() {
    const double r = u();
    const std::string team = u() < 0.5 ? kHome : kAway;
    if (r < 0.8) {
      take(team, player(team), random_spot());
      emit(ActionType::Recovery, team, holder_, ball_);
    } else if (r < 0.9) {
      emit(ActionType::Clearance, team, player(team), random_spot());
    } else {
      const Location out{5.0 + u() * 95.0, 0.0};
      emit(ActionType::Out, team, player(team), out);
      restart(other(team), ActionType::ThrowIn, {out.x, 0.5});
    }
  }

  void restart(const std::string& team, ActionType kind, Location at) {
    phase_ = Phase::SetPiece;
    restart_team_ = team;
    restart_kind_ = kind;
    restart_at_ = at;
  }

  void set_piece() {
    const std::string& team = restart_team_;
    const std::string taker = restart_kind_ == ActionType::GoalKick ? team + "1" : player(team);
    if (restart_kind_ == ActionType::ShotCorner) {
      team_ = team;
      holder_ = taker;
      ball_ = restart_at_;
      shoot(ActionType::ShotCorner);
      return;
    }
    deliver(restart_kind_, team, taker, restart_at_, 0.8);
  }

  SplitMix64 rng_;
  GeneratorOptions opt_;
  VersaStream s_;
  double t_ = 0.0;

  Phase phase_ = Phase::KickOff;
  std::string team_ = kHome;
  std::string holder_;
  Location ball_;
  bool just_received_ = false;
  bool just_carried_ = false;
  std::string restart_team_;
  ActionType restart_kind_ = ActionType::FreeKick;
  Location restart_at_;
};

}  // namespace

VersaStream generate_half(std::uint64_t seed, const std::string& match_id, int period,
                          const GeneratorOptions& options) {
  return Generator(seed, match_id, period, options).run();
}

}  // namespace versa::test
