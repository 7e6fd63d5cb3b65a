#include "versa/adapters.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "embedded.hpp"
#include "json.hpp"
#include "versa/error.hpp"
#include "versa/io.hpp"

namespace versa {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_profile(const std::string& what) {
  throw Error(Errc::MalformedProfile, what);
}

template <typename Enum, std::size_t N>
Enum pick(const std::string& value, const std::array<std::pair<std::string_view, Enum>, N>& names,
          const char* field) {
  for (const auto& [name, e] : names) {
    if (name == value) return e;
  }
  bad_profile(std::string(field) + ": unknown value '" + value + "'");
}

constexpr std::array<std::pair<std::string_view, SourceFormat>, 2> kFormats{
    {{"versa-jsonl", SourceFormat::VersaJsonl}, {"provider-json", SourceFormat::ProviderJson}}};
constexpr std::array<std::pair<std::string_view, AttackDirection>, 2> kDirections{
    {{"acting-team", AttackDirection::ActingTeam},
     {"home-left-first-half", AttackDirection::HomeLeftFirstHalf}}};
constexpr std::array<std::pair<std::string_view, TimeUnit>, 3> kTimeUnits{
    {{"seconds", TimeUnit::Seconds},
     {"milliseconds", TimeUnit::Milliseconds},
     {"clock", TimeUnit::Clock}}};
constexpr std::array<std::pair<std::string_view, CarryConvention>, 2> kCarry{
    {{"ExplicitMicro", CarryConvention::ExplicitMicro},
     {"ImplicitGapOnly", CarryConvention::ImplicitGapOnly}}};

void read_field(const json& fields, const char* key, std::string& out) {
  if (auto it = fields.find(key); it != fields.end()) out = it->get<std::string>();
}

// Provider ids come as strings or integers.
std::optional<std::string> id_string(const json& rec, const std::string& key) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  return std::nullopt;
}

std::optional<double> parse_clock(std::string_view text) {
  double total = 0.0;
  std::size_t parts = 0;
  while (true) {
    const auto colon = text.find(':');
    const auto piece = text.substr(0, colon);
    if (piece.empty() || piece.front() == '-') return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc() || ptr != piece.data() + piece.size()) return std::nullopt;
    total = total * 60.0 + v;
    ++parts;
    if (colon == std::string_view::npos) break;
    text.remove_prefix(colon + 1);
  }
  if (parts < 2 || parts > 3) return std::nullopt;
  return total;
}

std::string format_clock(double seconds) {
  const auto ms = static_cast<long long>(std::llround(seconds * 1000.0));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%03lld", ms / 3600000, ms / 60000 % 60,
                ms / 1000 % 60, ms % 1000);
  return buf;
}

[[noreturn]] void bad_record(std::size_t index, const std::string& what) {
  throw MalformedRecordError(index, what);
}

double read_time(const json& rec, const ProviderProfile& p, std::size_t index) {
  auto it = rec.find(p.fields.time);
  if (it == rec.end()) bad_record(index, "missing field '" + p.fields.time + "'");
  double t = 0.0;
  switch (p.time_unit) {
    case TimeUnit::Seconds:
    case TimeUnit::Milliseconds:
      if (!it->is_number()) bad_record(index, "'" + p.fields.time + "' is not a number");
      t = it->get<double>();
      if (p.time_unit == TimeUnit::Milliseconds) t /= 1000.0;
      break;
    case TimeUnit::Clock: {
      if (!it->is_string()) bad_record(index, "'" + p.fields.time + "' is not a clock string");
      auto parsed = parse_clock(it->get<std::string>());
      if (!parsed) bad_record(index, "bad clock value '" + it->get<std::string>() + "'");
      t = *parsed;
      break;
    }
  }
  if (!std::isfinite(t) || t < 0.0) bad_record(index, "negative or non-finite timestamp");
  return t;
}

template <typename V>
std::map<V, std::string> invert(const std::map<std::string, V>& m) {
  std::map<V, std::string> out;
  for (const auto& [k, v] : m) out.emplace(v, k);  // first key in sort order wins
  return out;
}

std::string builtin_alias(std::string_view name) {
  std::string s(name);
  if (s.size() > 5 && s.ends_with("-like")) s.resize(s.size() - 5);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Profiles

ProviderProfile profile_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    ProviderProfile p;
    p.name = j.at("name").get<std::string>();
    p.format = pick(j.at("format").get<std::string>(), kFormats, "format");
    if (p.format == SourceFormat::VersaJsonl) return p;

    if (auto it = j.find("pitch"); it != j.end()) {
      p.pitch.length = it->value("length", p.pitch.length);
      p.pitch.width = it->value("width", p.pitch.width);
      p.pitch.flip_x = it->value("flip_x", false);
      p.pitch.flip_y = it->value("flip_y", false);
      p.pitch.direction =
          pick(it->value("direction", std::string("acting-team")), kDirections, "direction");
    }
    if (!(p.pitch.length > 0.0) || !(p.pitch.width > 0.0)) bad_profile("pitch size must be > 0");
    p.time_unit = pick(j.value("time_unit", std::string("seconds")), kTimeUnits, "time_unit");
    if (auto it = j.find("fields"); it != j.end()) {
      read_field(*it, "event_id", p.fields.event_id);
      read_field(*it, "period", p.fields.period);
      read_field(*it, "time", p.fields.time);
      read_field(*it, "team", p.fields.team);
      read_field(*it, "player", p.fields.player);
      read_field(*it, "action", p.fields.action);
      read_field(*it, "outcome", p.fields.outcome);
      read_field(*it, "x", p.fields.x);
      read_field(*it, "y", p.fields.y);
      read_field(*it, "shot_result", p.fields.shot_result);
    }
    for (const auto& [k, v] : j.at("action_map").items()) {
      p.action_map[k] = v.is_null() ? std::nullopt : std::optional(parse_action(v.get<std::string>()));
    }
    // Named locals: range-for does not extend the life of j.value()'s result.
    const json outcomes = j.value("outcome_map", json::object());
    for (const auto& [k, v] : outcomes.items()) {
      p.outcome_map[k] = parse_outcome(v.get<std::string>());
    }
    p.missing_outcome = parse_outcome(j.value("missing_outcome", std::string("Unknown")));
    const json results = j.value("shot_result_map", json::object());
    for (const auto& [k, v] : results.items()) {
      p.shot_result_map[k] = parse_shot_result(v.get<std::string>());
    }
    p.records_pass_received = j.value("records_pass_received", true);
    p.carry_convention =
        pick(j.value("carry_convention", std::string("ImplicitGapOnly")), kCarry, "carry_convention");
    return p;
  } catch (const json::exception& e) {
    bad_profile(std::string("profile: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::MalformedProfile) throw;
    bad_profile(std::string("profile: ") + e.what());
  }
}

std::vector<std::string> builtin_profile_names() { return embedded::profile_names(); }

ProviderProfile load_profile(std::string_view name_or_path) {
  if (auto body = embedded::profile_json(builtin_alias(name_or_path))) {
    return profile_from_json(*body);
  }
  std::filesystem::path path(name_or_path);
  if (!std::filesystem::exists(path)) {
    throw Error(Errc::UnknownName, "no built-in profile or file named '" +
                                       std::string(name_or_path) + "'");
  }
  return profile_from_json(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Coordinates

bool is_mirrored(const ProviderProfile& profile, std::string_view team_id, int period,
                 std::string_view home_team) {
  if (profile.pitch.direction != AttackDirection::HomeLeftFirstHalf || team_id.empty()) {
    return false;
  }
  const bool away = team_id != home_team;
  const bool second_half = period % 2 == 0;
  return away != second_half;
}

Location to_canonical(const PitchFrame& f, double px, double py, bool mirrored) {
  double x = px * kPitchLength / f.length;
  double y = py * kPitchWidth / f.width;
  if (f.flip_x) x = kPitchLength - x;
  if (f.flip_y) y = kPitchWidth - y;
  if (mirrored) {
    x = kPitchLength - x;
    y = kPitchWidth - y;
  }
  return {x, y};
}

std::pair<double, double> to_provider(const PitchFrame& f, const Location& loc, bool mirrored) {
  double x = loc.x;
  double y = loc.y;
  if (mirrored) {
    x = kPitchLength - x;
    y = kPitchWidth - y;
  }
  if (f.flip_x) x = kPitchLength - x;
  if (f.flip_y) y = kPitchWidth - y;
  return {x * f.length / kPitchLength, y * f.width / kPitchWidth};
}

// ---------------------------------------------------------------------------
// Ingest

namespace {

void drop_micro_carries(VersaStream& s, double threshold) {
  std::unordered_map<std::string, Location> last;  // player -> last on-ball location
  std::vector<Event> kept;
  kept.reserve(s.events.size());
  for (auto& e : s.events) {
    if (e.action == ActionType::Carry && e.location) {
      auto it = last.find(e.player_id);
      if (it != last.end() && std::hypot(e.location->x - it->second.x,
                                         e.location->y - it->second.y) < threshold) {
        continue;
      }
    }
    if (is_on_ball(e.action) && e.location) last[e.player_id] = *e.location;
    kept.push_back(std::move(e));
  }
  s.events = std::move(kept);
}

VersaStream ingest_provider(std::string_view text, const ProviderProfile& p,
                            const std::string& fallback_id) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw MalformedRecordError(0, std::string("document: ") + e.what());
  }
  const json* records = nullptr;
  if (doc.is_array()) {
    records = &doc;
  } else if (doc.is_object() && doc.contains("events") && doc["events"].is_array()) {
    records = &doc["events"];
  } else {
    throw MalformedRecordError(0, "document has no 'events' array");
  }
  const json meta = doc.is_object() ? doc : json::object();

  VersaStream s;
  s.match_id = meta.contains("match_id") ? *id_string(meta, "match_id") : fallback_id;
  s.info.provider = meta.value("provider", p.name);
  s.info.league = meta.value("league", std::string());
  s.info.season = meta.value("season", std::string());
  std::optional<int> doc_period;
  if (auto it = meta.find("period"); it != meta.end() && it->is_number_integer()) {
    doc_period = it->get<int>();
  }
  std::string home;
  if (auto it = meta.find("teams"); it != meta.end() && it->is_object()) {
    home = it->value("home", std::string());
    s.team_ids = {home, it->value("away", std::string())};
  }

  std::set<std::string> unmapped;
  std::optional<int> period;
  std::size_t index = 0;
  for (const auto& rec : *records) {
    ++index;
    if (!rec.is_object()) bad_record(index, "record is not an object");
    auto action_it = rec.find(p.fields.action);
    if (action_it == rec.end() || !action_it->is_string()) {
      bad_record(index, "missing action field '" + p.fields.action + "'");
    }
    const auto name = action_it->get<std::string>();
    auto mapped = p.action_map.find(name);
    if (mapped == p.action_map.end()) {
      unmapped.insert(name);
      continue;
    }
    if (!mapped->second) continue;  // deliberately dropped

    Event e;
    e.action = *mapped->second;
    auto id = id_string(rec, p.fields.event_id);
    if (!id) bad_record(index, "missing event id field '" + p.fields.event_id + "'");
    e.event_id = *id;
    if (auto it = rec.find(p.fields.period); it != rec.end() && it->is_number_integer()) {
      e.period = it->get<int>();
    } else if (doc_period) {
      e.period = *doc_period;
    } else {
      bad_record(index, "missing period");
    }
    if (e.period < 1) bad_record(index, "period must be >= 1");
    if (period && *period != e.period) {
      bad_record(index, "records span periods " + std::to_string(*period) + " and " +
                            std::to_string(e.period) + "; supply one period per file");
    }
    period = e.period;
    e.timestamp = read_time(rec, p, index);
    e.team_id = id_string(rec, p.fields.team).value_or("");
    e.player_id = id_string(rec, p.fields.player).value_or("");

    if (auto it = rec.find(p.fields.outcome); it != rec.end() && !it->is_null()) {
      auto o = p.outcome_map.find(it->is_string() ? it->get<std::string>() : it->dump());
      if (o == p.outcome_map.end()) bad_record(index, "unmapped outcome " + it->dump());
      e.outcome = o->second;
    } else {
      e.outcome = p.missing_outcome;
    }

    auto xi = rec.find(p.fields.x);
    auto yi = rec.find(p.fields.y);
    const bool has_x = xi != rec.end() && !xi->is_null();
    const bool has_y = yi != rec.end() && !yi->is_null();
    if (has_x != has_y) bad_record(index, "x and y must be given together");
    if (has_x) {
      if (!xi->is_number() || !yi->is_number()) bad_record(index, "coordinates must be numbers");
      if (home.empty() && !e.team_id.empty()) home = e.team_id;
      auto loc = to_canonical(p.pitch, xi->get<double>(), yi->get<double>(),
                              is_mirrored(p, e.team_id, e.period, home));
      loc.x = std::clamp(loc.x, 0.0, kPitchLength);
      loc.y = std::clamp(loc.y, 0.0, kPitchWidth);
      e.location = loc;
    }

    if (auto it = rec.find(p.fields.shot_result); it != rec.end() && !it->is_null()) {
      auto r = p.shot_result_map.find(it->is_string() ? it->get<std::string>() : it->dump());
      if (r == p.shot_result_map.end()) bad_record(index, "unmapped shot result " + it->dump());
      e.shot_result = r->second;
    }
    s.events.push_back(std::move(e));
  }

  if (!unmapped.empty()) {
    throw UnmappedActionError(std::vector<std::string>(unmapped.begin(), unmapped.end()));
  }
  if (s.events.empty()) throw Error(Errc::EmptyStream, "no events after mapping");
  s.period = *period;
  if (s.team_ids.first.empty()) s.team_ids = infer_team_ids(s.events);
  return s;
}

VersaStream finish(VersaStream s, const ProviderProfile& p, const IngestOptions& opt) {
  s = sort_canonical(std::move(s));
  if (opt.drop_micro_carries && p.carry_convention == CarryConvention::ExplicitMicro) {
    drop_micro_carries(s, opt.micro_carry_threshold);
    if (s.events.empty()) throw Error(Errc::EmptyStream, "no events after mapping");
  }
  return s;
}

}  // namespace

VersaStream ingest_text(std::string_view text, const ProviderProfile& profile,
                        const IngestOptions& options) {
  if (profile.format == SourceFormat::VersaJsonl) {
    VersaStream s;
    s.events = parse_events(text);
    if (s.events.empty()) throw Error(Errc::EmptyStream, "no events");
    s.match_id = "match";
    s.period = s.events.front().period;
    s.team_ids = infer_team_ids(s.events);
    return finish(std::move(s), profile, options);
  }
  return finish(ingest_provider(text, profile, "match"), profile, options);
}

VersaStream ingest(const std::filesystem::path& path, const ProviderProfile& profile,
                   const IngestOptions& options) {
  if (profile.format == SourceFormat::VersaJsonl) {
    return finish(read_stream(path), profile, options);
  }
  std::string stem = path.stem().string();
  return finish(ingest_provider(read_text_file(path), profile, stem), profile, options);
}

void export_stream(const VersaStream& stream, const std::filesystem::path& path) {
  write_stream(stream, path);
}

std::string to_provider_json(const VersaStream& s, const ProviderProfile& p) {
  if (p.format == SourceFormat::VersaJsonl) return serialize_events(s);

  std::map<ActionType, std::string> actions;
  for (const auto& [k, v] : p.action_map) {
    if (v) actions.emplace(*v, k);
  }
  const auto outcomes = invert(p.outcome_map);
  const auto results = invert(p.shot_result_map);

  std::set<std::string> missing;
  ordered_json events = ordered_json::array();
  for (const auto& e : s.events) {
    auto a = actions.find(e.action);
    if (a == actions.end()) {
      missing.insert(std::string(to_string(e.action)));
      continue;
    }
    ordered_json r;
    r[p.fields.event_id] = e.event_id;
    r[p.fields.period] = e.period;
    switch (p.time_unit) {
      case TimeUnit::Seconds: r[p.fields.time] = e.timestamp; break;
      case TimeUnit::Milliseconds: r[p.fields.time] = e.timestamp * 1000.0; break;
      case TimeUnit::Clock: r[p.fields.time] = format_clock(e.timestamp); break;
    }
    r[p.fields.team] = e.team_id;
    r[p.fields.player] = e.player_id;
    r[p.fields.action] = a->second;
    if (e.outcome != p.missing_outcome) {
      if (auto o = outcomes.find(e.outcome); o != outcomes.end()) r[p.fields.outcome] = o->second;
    }
    if (e.location) {
      auto [px, py] =
          to_provider(p.pitch, *e.location, is_mirrored(p, e.team_id, e.period, s.team_ids.first));
      r[p.fields.x] = px;
      r[p.fields.y] = py;
    }
    if (e.shot_result) {
      if (auto it = results.find(*e.shot_result); it != results.end()) {
        r[p.fields.shot_result] = it->second;
      }
    }
    events.push_back(std::move(r));
  }
  if (!missing.empty()) {
    throw UnmappedActionError(std::vector<std::string>(missing.begin(), missing.end()));
  }

  ordered_json doc;
  doc["match_id"] = s.match_id;
  doc["period"] = s.period;
  doc["provider"] = s.info.provider;
  doc["league"] = s.info.league;
  doc["season"] = s.info.season;
  doc["teams"] = {{"home", s.team_ids.first}, {"away", s.team_ids.second}};
  doc["events"] = std::move(events);
  return doc.dump(1) + "\n";
}

// ---------------------------------------------------------------------------
// Simplification

SimplificationMap::SimplificationMap(std::map<ActionType, ActionType> merges,
                                     std::set<ActionType> drops) {
  for (auto [from, to] : merges) {
    if (from == to) continue;
    std::set<ActionType> seen{from};
    ActionType target = to;
    for (auto it = merges.find(target); it != merges.end() && it->second != target;
         it = merges.find(target)) {
      if (!seen.insert(target).second) {
        throw Error(Errc::MalformedProfile,
                    "simplification merges form a cycle through " + std::string(to_string(from)));
      }
      target = it->second;
    }
    if (drops.contains(target)) {
      drops_.insert(from);
    } else {
      merges_[from] = target;
    }
  }
  for (auto a : drops) {
    drops_.insert(a);
    merges_.erase(a);
  }
}

std::optional<ActionType> SimplificationMap::apply(ActionType a) const {
  if (drops_.contains(a)) return std::nullopt;
  auto it = merges_.find(a);
  return it == merges_.end() ? a : it->second;
}

SimplificationMap simplification_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    std::map<ActionType, ActionType> merges;
    const json merge = j.value("merge", json::object());
    for (const auto& [k, v] : merge.items()) {
      merges[parse_action(k)] = parse_action(v.get<std::string>());
    }
    std::set<ActionType> drops;
    const json drop = j.value("drop", json::array());
    for (const auto& v : drop) drops.insert(parse_action(v.get<std::string>()));
    return SimplificationMap(std::move(merges), std::move(drops));
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedProfile, std::string("simplification map: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::MalformedProfile) throw;
    throw Error(Errc::MalformedProfile, std::string("simplification map: ") + e.what());
  }
}

const SimplificationMap& default_simplification() {
  static const SimplificationMap m = simplification_from_json(embedded::simplification_map_json());
  return m;
}

VersaStream simplify(const VersaStream& stream, const SimplificationMap& map) {
  VersaStream out = stream;
  out.events.clear();
  out.events.reserve(stream.events.size());
  for (const auto& e : stream.events) {
    auto a = map.apply(e.action);
    if (!a) continue;
    Event copy = e;
    copy.action = *a;
    out.events.push_back(std::move(copy));
  }
  out.format_variant = FormatVariant::SimplifiedVersa;
  return out;
}

}  // namespace versa
