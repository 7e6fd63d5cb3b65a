#include "versa/io.hpp"

#include <cerrno>
#include <fstream>
#include <system_error>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "versa/error.hpp"

namespace versa {
namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::string require_string(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw MalformedRecordError(line, std::string("missing or non-string '") + key + "'");
  }
  return it->get<std::string>();
}

std::string optional_string(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) throw MalformedRecordError(line, std::string("non-string '") + key + "'");
  return it->get<std::string>();
}

std::optional<double> optional_number(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw MalformedRecordError(line, std::string("non-numeric '") + key + "'");
  return it->get<double>();
}

template <typename F>
auto parse_name(F&& parse, const std::string& name, std::size_t line) {
  try {
    return parse(name);
  } catch (const Error& e) {
    throw MalformedRecordError(line, e.what());
  }
}

}  // namespace

std::string to_json_line(const Event& e) {
  ordered_json j;
  j["event_id"] = e.event_id;
  j["period"] = e.period;
  j["timestamp"] = e.timestamp;
  j["team_id"] = e.team_id;
  j["player_id"] = e.player_id;
  j["action"] = std::string(to_string(e.action));
  j["outcome"] = std::string(to_string(e.outcome));
  if (e.location) {
    j["x"] = e.location->x;
    j["y"] = e.location->y;
  } else {
    j["x"] = nullptr;
    j["y"] = nullptr;
  }
  j["provenance"] = std::string(to_string(e.provenance));
  if (e.shot_result) j["shot_result"] = std::string(to_string(*e.shot_result));
  return j.dump();
}

Event event_from_json_line(std::string_view text, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedRecordError(line, e.what());
  }
  if (!j.is_object()) throw MalformedRecordError(line, "not a JSON object");

  Event e;
  e.event_id = require_string(j, "event_id", line);
  auto period = j.find("period");
  if (period == j.end() || !period->is_number_integer()) {
    throw MalformedRecordError(line, "missing or non-integer 'period'");
  }
  e.period = period->get<int>();
  auto ts = optional_number(j, "timestamp", line);
  if (!ts || *ts < 0.0) throw MalformedRecordError(line, "missing or negative 'timestamp'");
  e.timestamp = *ts;
  e.team_id = optional_string(j, "team_id", line);
  e.player_id = optional_string(j, "player_id", line);
  e.action = parse_name(parse_action, require_string(j, "action", line), line);
  if (auto o = optional_string(j, "outcome", line); !o.empty()) {
    e.outcome = parse_name(parse_outcome, o, line);
  }
  auto x = optional_number(j, "x", line);
  auto y = optional_number(j, "y", line);
  if (x.has_value() != y.has_value()) throw MalformedRecordError(line, "x and y must both be set");
  if (x) {
    e.location = Location{*x, *y};
    if (!within_pitch(*e.location)) throw MalformedRecordError(line, "location outside pitch");
  }
  if (auto p = optional_string(j, "provenance", line); !p.empty()) {
    e.provenance = parse_name(parse_provenance, p, line);
  }
  if (auto r = optional_string(j, "shot_result", line); !r.empty()) {
    e.shot_result = parse_name(parse_shot_result, r, line);
  }
  return e;
}

std::string serialize_events(const VersaStream& stream) {
  std::string out;
  for (const auto& e : stream.events) {
    out += to_json_line(e);
    out += '\n';
  }
  return out;
}

std::vector<Event> parse_events(std::string_view text) {
  std::vector<Event> events;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    auto row = text.substr(pos, end - pos);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (row.find_first_not_of(" \t") != std::string_view::npos) {
      events.push_back(event_from_json_line(row, line));
    }
    pos = end + 1;
  }
  return events;
}

std::string serialize_meta(const VersaStream& s) {
  ordered_json j;
  j["match_id"] = s.match_id;
  j["period"] = s.period;
  j["team_ids"] = {s.team_ids.first, s.team_ids.second};
  j["format_variant"] = std::string(to_string(s.format_variant));
  j["provider"] = s.info.provider;
  j["league"] = s.info.league;
  j["season"] = s.info.season;
  return j.dump(2) + "\n";
}

std::string canonical_filename(const VersaStream& s) {
  return s.match_id + "_p" + std::to_string(s.period) + ".versa.jsonl";
}

std::string exceptions_filename(const VersaStream& s) {
  return s.match_id + "_p" + std::to_string(s.period) + ".exceptions.jsonl";
}

std::filesystem::path meta_path_for(const std::filesystem::path& stream_path) {
  std::string name = stream_path.filename().string();
  for (std::string_view suffix : {".versa.jsonl", ".jsonl"}) {
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      name.resize(name.size() - suffix.size());
      break;
    }
  }
  return stream_path.parent_path() / (name + ".meta.json");
}

VersaStream read_stream(const std::filesystem::path& path) {
  VersaStream s;
  s.events = parse_events(read_text_file(path));
  if (s.events.empty()) throw Error(Errc::EmptyStream, path.string() + " has no events");

  const auto meta = meta_path_for(path);
  if (std::filesystem::exists(meta)) {
    json j;
    try {
      j = json::parse(read_text_file(meta));
      s.match_id = j.at("match_id").get<std::string>();
      s.period = j.at("period").get<int>();
      const auto& teams = j.at("team_ids");
      s.team_ids = {teams.at(0).get<std::string>(), teams.at(1).get<std::string>()};
      s.format_variant = parse_format_variant(j.at("format_variant").get<std::string>());
      s.info.provider = j.value("provider", "");
      s.info.league = j.value("league", "");
      s.info.season = j.value("season", "");
    } catch (const json::exception& e) {
      throw Error(Errc::MalformedRecord, meta.string() + ": " + e.what());
    }
    return s;
  }

  static const std::regex kName(R"(^(.+)_p(\d+)(\.versa)?\.jsonl$)");
  const std::string name = path.filename().string();
  std::smatch m;
  if (std::regex_match(name, m, kName)) {
    s.match_id = m[1].str();
    s.period = std::stoi(m[2].str());
  } else {
    s.match_id = path.stem().string();
    s.period = s.events.front().period;
  }
  s.team_ids = infer_team_ids(s.events);
  return s;
}

void write_stream(const VersaStream& stream, const std::filesystem::path& path) {
  write_text_file(path, serialize_events(stream));
  write_text_file(meta_path_for(path), serialize_meta(stream));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::Io, path.string() + ": " + std::generic_category().message(errno));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;  // a failure here surfaces as Io from the open below
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::Io, path.string() + ": " + std::generic_category().message(errno));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

}  // namespace versa
