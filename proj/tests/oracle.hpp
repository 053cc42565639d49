#pragma once

// Independent brute-force enumerator over rule-application sequences: no
// deduplication, no pruning, every application order, restricted to open
// branches. Used to cross-check the search's minimal sizes and proof sets.

#include <set>
#include <string>

#include "tsprover/tableau.hpp"

namespace testsupport {

struct OracleResult {
  int minimal_size = -1;
  std::set<std::string> proof_keys;  // canonical keys of all minimal clean proofs
};

inline void oracle_walk(const tsprover::RuleSet& rs, const tsprover::Tableau& t, int apps,
                        int cap, OracleResult& out) {
  using namespace tsprover;
  if (tableau_closed(t)) {
    Proof p = make_proof(t);
    if (!is_clean(p)) return;
    if (out.minimal_size < 0 || p.size < out.minimal_size) {
      out.minimal_size = p.size;
      out.proof_keys = {canonical_key(t)};
    } else if (p.size == out.minimal_size) {
      out.proof_keys.insert(canonical_key(t));
    }
    return;
  }
  if (apps >= cap) return;
  for (int leaf : t.leaves) {
    if (branch_closed(t, leaf)) continue;
    for (const auto& inst : applicable_linear_instances(t, leaf, rs))
      oracle_walk(rs, apply(t, inst, rs), apps + 1, cap, out);
    for (const auto& inst : applicable_cut_instances(t, leaf, rs))
      oracle_walk(rs, apply(t, inst), apps + 1, cap, out);
  }
}

inline OracleResult oracle_minimal(const tsprover::RuleSet& rs,
                                   const std::vector<tsprover::SignedFormula>& sfs,
                                   const tsprover::Theory& th, int cap) {
  OracleResult out;
  oracle_walk(rs, tsprover::init_tableau(sfs, th), 0, cap, out);
  return out;
}

}  // namespace testsupport
