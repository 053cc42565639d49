#pragma once

#include "tsprover/search.hpp"

namespace tsprover {

/// Branch-preserving correspondence: branches of equal node count whose
/// minimal justification DAGs are isomorphic as rooted DAGs, preserving node
/// kind, child multiplicity and sign-insensitive syntactic isomorphism of the
/// node formulas.
bool deductively_isomorphic(const Proof& a, const Proof& b);

/// One way rule2 can realize the shape of rule1: a premise correspondence
/// that is syntactically isomorphic premise-by-premise and on conclusions
/// under a single rule-wide pattern-variable bijection (signs ignored).
struct RuleShapeMatch {
  int rule2 = 0;
  std::vector<int> premise_map;  // premise i of rule1 -> premise_map[i] of rule2
};

std::vector<RuleShapeMatch> shape_isomorphic_rules(const RuleSet& rs, int rule1);

/// Symbols sitting at `pos` of the corresponding premise across every rule
/// shape-isomorphic to `rule` (always contains the original symbol).
std::set<Symbol> deductive_matching_symbols(const RuleSet& rs, int rule, int premise,
                                            const Position& pos);

struct OccRef {
  int node = 0;
  Position pos;
  auto operator<=>(const OccRef&) const = default;
};

/// Reflexive-transitive closure of the direct-descendant relation: an
/// occurrence carried from a premise node into a conclusion through the
/// rule's shared pattern variable.
std::vector<OccRef> descendant_occurrences(const Proof& p, const RuleSet& rs, int node,
                                           const Position& pos);

struct ChoiceEntry {
  int formula_index = 0;  // hypothesis index, 0-based
  Position pos;
  Symbol original;
  std::vector<Symbol> admissible;  // original first, then sorted
};

using ChoiceTable = std::vector<ChoiceEntry>;

/// Admissible replacement symbols per occurrence of the exercise formulas
/// (the proof's hypotheses), per the proof-isomorphic symbol definitions.
ChoiceTable symbol_choice_table(const Proof& p, const RuleSet& rs, const Theory& th);

struct Replacement {
  int formula_index = 0;
  Position pos;
  Symbol original;
  Symbol replacement;
};

struct Candidate {
  std::vector<SignedFormula> formulas;
  std::vector<Replacement> replacements;  // non-identity entries only
};

/// Cartesian product of the admissible sets, identity assignment first.
std::vector<Candidate> enumerate_candidates(const ChoiceTable& table,
                                            const std::vector<SignedFormula>& exercise);

/// Backtracking reconstruction of `source` over the candidate exercise;
/// returns a witness proof deductively isomorphic to `source`, if one can be
/// built by mirroring the source applications.
std::optional<Proof> guided_replay(const Proof& source,
                                   const std::vector<SignedFormula>& candidate,
                                   const RuleSet& rs, const Theory& th);

enum class GenerateMode { Fast, Strict };

struct CandidateSet {
  std::vector<SignedFormula> signed_formulas;
  std::vector<Replacement> replacements;
  Proof witness;
  bool strict_verified = false;
};

struct GenerateResult {
  std::vector<SignedFormula> input;  // deduplicated hypothesis order
  GenerateMode mode = GenerateMode::Fast;
  int minimal_size = 0;
  long long candidates_considered = 0;
  std::vector<CandidateSet> outputs;  // input exercise first, then canonical order
};

/// Two-step generation: minimal-proof search, then proof-isomorphic candidate
/// enumeration with guided replay. Strict mode re-runs the minimal search on
/// each surviving candidate and keeps those whose minimal size equals the
/// witness size with some minimal proof deductively isomorphic to the source.
GenerateResult generate(const std::vector<SignedFormula>& exercise, const RuleSet& rs,
                        const Theory& th, GenerateMode mode, const SearchLimits& limits = {});

}  // namespace tsprover
