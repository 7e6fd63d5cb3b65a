#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "versa/adapters.hpp"
#include "versa/correction.hpp"
#include "versa/event.hpp"

namespace versa {

/// Levenshtein distance, unit costs, over action tokens.
std::size_t edit_distance(std::span<const ActionType> x, std::span<const ActionType> y);

/// 1 - d_edit / max(|x|, |y|); 1.0 when both are empty.
double normalized_edit_similarity(std::span<const ActionType> x, std::span<const ActionType> y);

/// Sample correlation coefficient, computed in one pass. Throws
/// Errc::LengthMismatch (sizes differ or fewer than two) or Errc::ZeroVariance.
double pearson(std::span<const double> xs, std::span<const double> ys);

// ---------------------------------------------------------------------------
// Exception statistics

struct ActionShare {
  std::size_t count = 0;
  double fraction = 0.0;  // of total_events
};

struct ExceptionStats {
  MatchInfo key;
  std::size_t matches = 0;  // distinct match ids
  std::size_t total_events = 0;
  std::size_t exception_count = 0;
  double exception_ratio = 0.0;
  std::map<ActionType, ActionShare> per_action;  // keyed by attributed action
  std::optional<std::pair<ActionType, double>> primary_exception;
};

/// Aggregates records per (provider, league, season). `records[k]` belongs to
/// `streams[k]`; totals count the events of the streams as given. Records on
/// model outcomes (Goal, GoalMiss, GoalPost, Out) are not exceptions.
std::vector<ExceptionStats> exception_report(const std::vector<VersaStream>& streams,
                                             const std::vector<std::vector<ExceptionRecord>>& records);

/// Same, ignoring the grouping key.
ExceptionStats exception_stats(const std::vector<VersaStream>& streams,
                               const std::vector<std::vector<ExceptionRecord>>& records);

// ---------------------------------------------------------------------------
// Cross-provider consistency

struct CompareOptions {
  // Compare on the simplified alphabet.
  std::optional<SimplificationMap> simplification;
  // With a simplification: false keeps the drop set in the sequences and only
  // merges action types.
  bool apply_drops = true;
};

struct HalfConsistency {
  std::string match_id;
  int period = 1;
  std::size_t length_a = 0;
  std::size_t length_b = 0;
  std::size_t edit_distance = 0;
  double edit_similarity = 1.0;
};

/// Throws Errc::PeriodMismatch unless both streams describe the same match
/// and period.
HalfConsistency compare_providers(const VersaStream& a, const VersaStream& b,
                                  const CompareOptions& options = {});

struct ConsistencyReport {
  std::vector<HalfConsistency> halves;
  // Optional per-half sums of an externally computed per-event value.
  std::vector<double> value_sums_a;
  std::vector<double> value_sums_b;
  std::optional<double> pearson_r;
};

/// Fills pearson_r when at least two value sums per side are given.
ConsistencyReport consistency_report(std::vector<HalfConsistency> halves,
                                     std::vector<double> value_sums_a = {},
                                     std::vector<double> value_sums_b = {});

// ---------------------------------------------------------------------------
// Report rendering

/// Provider,League,Season,Match,Total,Exception %,Primary Exception
std::string exception_csv(const std::vector<ExceptionStats>& rows);
std::string exception_jsonl(const std::vector<ExceptionStats>& rows);

/// Match,Period,Length A,Length B,Edit Distance,S_edit
std::string consistency_csv(const ConsistencyReport& report);
std::string consistency_jsonl(const ConsistencyReport& report);

}  // namespace versa
