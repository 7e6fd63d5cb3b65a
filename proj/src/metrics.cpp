#include "versa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <tuple>

#include "json.hpp"
#include "versa/error.hpp"

namespace versa {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<ActionType> sequence_for_compare(const VersaStream& s, const CompareOptions& opt) {
  if (!opt.simplification) return action_sequence(s);
  const auto map = opt.apply_drops ? *opt.simplification : opt.simplification->merges_only();
  return action_sequence(simplify(s, map));
}

void finalize(ExceptionStats& st) {
  st.exception_ratio =
      st.total_events == 0 ? 0.0 : static_cast<double>(st.exception_count) / st.total_events;
  st.primary_exception.reset();
  for (auto& [action, share] : st.per_action) {
    share.fraction =
        st.total_events == 0 ? 0.0 : static_cast<double>(share.count) / st.total_events;
    // Ties go to the earlier action in enum order.
    if (!st.primary_exception || share.fraction > st.primary_exception->second) {
      st.primary_exception = std::make_pair(action, share.fraction);
    }
  }
}

void accumulate(ExceptionStats& st, const VersaStream& s, const std::vector<ExceptionRecord>& recs) {
  st.total_events += s.events.size();
  for (const auto& r : recs) {
    if (is_model_outcome(r.action)) continue;
    ++st.exception_count;
    ++st.per_action[r.attributed_action].count;
  }
}

void check_pairing(const std::vector<VersaStream>& streams,
                   const std::vector<std::vector<ExceptionRecord>>& records) {
  if (streams.size() != records.size()) {
    throw Error(Errc::LengthMismatch, "one record list per stream expected");
  }
}

}  // namespace

std::size_t edit_distance(std::span<const ActionType> x, std::span<const ActionType> y) {
  if (x.size() < y.size()) std::swap(x, y);
  std::vector<std::size_t> prev(y.size() + 1);
  std::vector<std::size_t> cur(y.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

double normalized_edit_similarity(std::span<const ActionType> x, std::span<const ActionType> y) {
  const std::size_t longest = std::max(x.size(), y.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(x, y)) / static_cast<double>(longest);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(xs.size()) + " vs " +
                                          std::to_string(ys.size()) + " values");
  }
  if (xs.size() < 2) throw Error(Errc::LengthMismatch, "need at least two values");
  double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double n = static_cast<double>(k + 1);
    const double dx = xs[k] - mx;
    const double dy = ys[k] - my;
    mx += dx / n;
    my += dy / n;
    sxx += dx * (xs[k] - mx);
    syy += dy * (ys[k] - my);
    sxy += dx * (ys[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(Errc::ZeroVariance, "constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<ExceptionStats> exception_report(
    const std::vector<VersaStream>& streams,
    const std::vector<std::vector<ExceptionRecord>>& records) {
  check_pairing(streams, records);
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, ExceptionStats> groups;
  std::map<Key, std::set<std::string>> match_ids;
  for (std::size_t k = 0; k < streams.size(); ++k) {
    const auto& info = streams[k].info;
    const Key key{info.provider, info.league, info.season};
    auto& st = groups[key];
    st.key = info;
    accumulate(st, streams[k], records[k]);
    match_ids[key].insert(streams[k].match_id);
  }
  std::vector<ExceptionStats> out;
  for (auto& [key, st] : groups) {
    st.matches = match_ids[key].size();
    finalize(st);
    out.push_back(std::move(st));
  }
  return out;
}

ExceptionStats exception_stats(const std::vector<VersaStream>& streams,
                               const std::vector<std::vector<ExceptionRecord>>& records) {
  check_pairing(streams, records);
  ExceptionStats st;
  std::set<std::string> match_ids;
  for (std::size_t k = 0; k < streams.size(); ++k) {
    accumulate(st, streams[k], records[k]);
    match_ids.insert(streams[k].match_id);
  }
  st.matches = match_ids.size();
  finalize(st);
  return st;
}

HalfConsistency compare_providers(const VersaStream& a, const VersaStream& b,
                                  const CompareOptions& options) {
  if (a.match_id != b.match_id || a.period != b.period) {
    throw Error(Errc::PeriodMismatch, a.match_id + " p" + std::to_string(a.period) + " vs " +
                                          b.match_id + " p" + std::to_string(b.period));
  }
  const auto xa = sequence_for_compare(a, options);
  const auto xb = sequence_for_compare(b, options);
  HalfConsistency h;
  h.match_id = a.match_id;
  h.period = a.period;
  h.length_a = xa.size();
  h.length_b = xb.size();
  h.edit_distance = edit_distance(xa, xb);
  const std::size_t longest = std::max(xa.size(), xb.size());
  h.edit_similarity =
      longest == 0 ? 1.0 : 1.0 - static_cast<double>(h.edit_distance) / static_cast<double>(longest);
  return h;
}

ConsistencyReport consistency_report(std::vector<HalfConsistency> halves,
                                     std::vector<double> value_sums_a,
                                     std::vector<double> value_sums_b) {
  ConsistencyReport r;
  r.halves = std::move(halves);
  r.value_sums_a = std::move(value_sums_a);
  r.value_sums_b = std::move(value_sums_b);
  if (r.value_sums_a.size() >= 2 || r.value_sums_b.size() >= 2) {
    r.pearson_r = pearson(r.value_sums_a, r.value_sums_b);
  }
  return r;
}

std::string exception_csv(const std::vector<ExceptionStats>& rows) {
  std::string out = "Provider,League,Season,Match,Total,Exception %,Primary Exception\n";
  for (const auto& st : rows) {
    std::string primary = "none";
    if (st.primary_exception) {
      primary = std::string(to_string(st.primary_exception->first)) + " (" +
                fixed(st.primary_exception->second * 100.0, 2) + "%)";
    }
    out += csv_field(st.key.provider) + ',' + csv_field(st.key.league) + ',' +
           csv_field(st.key.season) + ',' + std::to_string(st.matches) + ',' +
           std::to_string(st.total_events) + ',' + fixed(st.exception_ratio * 100.0, 2) + ',' +
           csv_field(primary) + '\n';
  }
  return out;
}

std::string exception_jsonl(const std::vector<ExceptionStats>& rows) {
  std::string out;
  for (const auto& st : rows) {
    ordered_json j;
    j["provider"] = st.key.provider;
    j["league"] = st.key.league;
    j["season"] = st.key.season;
    j["matches"] = st.matches;
    j["total_events"] = st.total_events;
    j["exception_count"] = st.exception_count;
    j["exception_ratio"] = st.exception_ratio;
    ordered_json per = ordered_json::object();
    for (const auto& [a, share] : st.per_action) {
      per[std::string(to_string(a))] = {{"count", share.count}, {"fraction", share.fraction}};
    }
    j["per_action"] = std::move(per);
    if (st.primary_exception) {
      j["primary_exception"] = {{"action", std::string(to_string(st.primary_exception->first))},
                                {"fraction", st.primary_exception->second}};
    } else {
      j["primary_exception"] = nullptr;
    }
    out += j.dump() + '\n';
  }
  return out;
}

std::string consistency_csv(const ConsistencyReport& report) {
  std::string out = "Match,Period,Length A,Length B,Edit Distance,S_edit\n";
  for (const auto& h : report.halves) {
    out += csv_field(h.match_id) + ',' + std::to_string(h.period) + ',' +
           std::to_string(h.length_a) + ',' + std::to_string(h.length_b) + ',' +
           std::to_string(h.edit_distance) + ',' + fixed(h.edit_similarity, 6) + '\n';
  }
  return out;
}

std::string consistency_jsonl(const ConsistencyReport& report) {
  std::string out;
  for (const auto& h : report.halves) {
    ordered_json j;
    j["match_id"] = h.match_id;
    j["period"] = h.period;
    j["length_a"] = h.length_a;
    j["length_b"] = h.length_b;
    j["edit_distance"] = h.edit_distance;
    j["edit_similarity"] = h.edit_similarity;
    out += j.dump() + '\n';
  }
  if (report.pearson_r) {
    ordered_json j;
    j["pearson_r"] = *report.pearson_r;
    out += j.dump() + '\n';
  }
  return out;
}

}  // namespace versa
