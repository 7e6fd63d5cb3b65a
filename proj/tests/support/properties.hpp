#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "versa/event.hpp"

// Randomized property checks shared by the property suite and the acceptance
// binary. Each returns the number of cases tried and the first few failures.
namespace versa::test {

struct PropertyResult {
  std::size_t cases = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void fail(std::string what);
  std::string summary() const;
};

/// Non-negativity, identity of indiscernibles, symmetry and the triangle
/// inequality on random triples.
PropertyResult metric_axioms(std::uint64_t seed, std::size_t triples, std::size_t max_len = 30);

/// S_edit(x, y) == S_edit(y, x) and S_edit unchanged when one bijection of
/// the alphabet relabels both sequences.
PropertyResult similarity_symmetry_and_relabeling(std::uint64_t seed, std::size_t pairs);

/// Library S_edit against the quadratic DP oracle, exact equality.
PropertyResult similarity_matches_oracle(std::uint64_t seed, std::size_t pairs, std::size_t max_len);

/// Library pearson against the two-pass definition within `tolerance`.
PropertyResult pearson_matches_oracle(std::uint64_t seed, std::size_t vectors, double tolerance);

/// |r| unchanged under positive affine maps; the sign flips under negative scaling.
PropertyResult pearson_affine_invariance(std::uint64_t seed, std::size_t vectors);

/// simplify(simplify(s)) == simplify(s) for the default map and random acyclic maps.
PropertyResult simplify_idempotence(std::uint64_t seed, std::size_t halves);

/// Every built-in provider profile: ingest(export(s)) reproduces s.
PropertyResult ingest_round_trip(std::uint64_t seed, std::size_t halves);

/// Same plan and seed, same corrupted stream and ground truth.
PropertyResult corruption_determinism(std::uint64_t seed, std::size_t halves);

/// verify(verify(s)) returns its input unchanged and raises nothing beyond
/// the events the first pass left unresolved.
PropertyResult fixed_point(const VersaStream& s);

}  // namespace versa::test
