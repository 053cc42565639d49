#pragma once

#include <chrono>
#include <optional>

#include "tsprover/tableau.hpp"

namespace tsprover {

struct NotRefuted : Error {
  NotRefuted(const std::string& msg, bool saturated) : Error(msg), saturated(saturated) {}
  bool saturated;  // the application space was exhausted below the cap
};

struct SearchLimits {
  int max_apps = 64;
  bool use_cut = true;
  std::optional<std::chrono::milliseconds> budget;
};

struct SearchStats {
  std::vector<long long> states_per_level;
  long long pruned = 0;
  long long dedup_hits = 0;
};

struct SearchResult {
  std::vector<Proof> minimal_proofs;  // canonically sorted, deduplicated
  int minimal_size = 0;
  SearchStats stats;
};

/// Level-by-level construction of the n-application tableau sets. The first
/// clean closed proof sets the size upper bound; smaller finds reset the
/// output, equal-size finds are added; levels beyond the bound are useless
/// because a clean proof with n applications has deductive size >= n.
SearchResult minimal_proofs(const RuleSet& rs, const std::vector<SignedFormula>& sf_set,
                            const Theory& th, const SearchLimits& limits = {});

/// First clean closed proof found, without the minimality guarantee.
Proof prove_once(const RuleSet& rs, const std::vector<SignedFormula>& sf_set, const Theory& th,
                 const SearchLimits& limits = {});

}  // namespace tsprover
