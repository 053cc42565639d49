#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsprover/theory.hpp"

namespace tsprover {

struct Literal {
  bool positive = true;
  TSFormula atom;

  auto operator<=>(const Literal&) const = default;
};

/// Disjunction of literals over pattern variables (and skolem terms).
struct Clause {
  std::vector<Literal> literals;
};

/// One implication read off a clause: premises -> conclusion, or
/// premises -> falsum when `conclusion` is empty.
struct RinfImplication {
  std::vector<Literal> premises;
  std::optional<Literal> conclusion;
};

/// Extracted tableau rule. `conclusion` empty means the rule closes the
/// branch (the CLOSE marker).
struct Rule {
  std::string name;
  std::vector<SignedFormula> premises;
  std::optional<SignedFormula> conclusion;
  std::string source_axiom;
  std::vector<int> main_premises;  // indices into `premises`

  bool is_close() const { return !conclusion.has_value(); }
};

struct CutSeed {
  int rule = 0;          // index into RuleSet::rules
  int main_premise = 0;  // index into Rule::premises
  std::vector<int> minor_premises;
};

struct RuleSet {
  std::vector<Rule> rules;
  std::vector<Symbol> skolem_decls;
  std::vector<CutSeed> cut_seeds;
};

/// Prenex normal form: <-> is expanded, bound variables standardized apart,
/// quantifiers hoisted (existentials ahead of independent universals, which
/// keeps skolem arities minimal). The propositional structure is untouched.
FOPtr to_pnf(const FOPtr& f);

/// Replaces each existential of a prenex formula by a fresh skolem function
/// of the preceding universals; returns the quantifier-free matrix.
std::pair<FOPtr, std::vector<Symbol>> skolemize(const FOPtr& prenex,
                                                const std::string& axiom_name);

/// Distributive CNF of a quantifier-free matrix. Tautological clauses are
/// deleted, duplicate literals merged, duplicate clauses dropped.
std::vector<Clause> to_cnf(const FOPtr& matrix);

std::vector<RinfImplication> rinf_forms(const Clause& c);

/// Which of the three analytic restrictions the rule violates (empty = ok).
/// Restriction 2 applies when the predicates are not all equal, restriction 3
/// when they are; restriction 1 always.
std::vector<int> check_analytic(const Rule& r, const Theory& th);

RuleSet extract_rules(const Theory& th);

FOPtr correspondent_formula(const Rule& r);

std::vector<CutSeed> cut_seed_pairs(const RuleSet& rs);

/// Main premises of a candidate rule: premises containing every variable
/// that occurs in the premise set (meaningful for rules with >= 2 premises).
std::vector<int> compute_main_premises(const std::vector<SignedFormula>& premises);

}  // namespace tsprover
