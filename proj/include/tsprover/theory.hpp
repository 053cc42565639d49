#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tsprover/syntax.hpp"

namespace tsprover {

struct ParseError : Error {
  ParseError(int line, int col, const std::string& msg)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

struct Axiom {
  std::string name;
  FOPtr formula;
};

/// Definitional theory: signature, closed axioms and a strict partial order
/// on predicate symbols (declared pairs; the transitive closure is computed
/// on demand).
struct Theory {
  std::string name;
  std::vector<Symbol> functions;
  std::vector<Symbol> predicates;
  std::vector<Axiom> axioms;
  std::vector<std::pair<std::string, std::string>> precedence;

  const Symbol* find_function(std::string_view n) const;
  const Symbol* find_predicate(std::string_view n) const;
  const Axiom* find_axiom(std::string_view n) const;

  /// Whether p < q holds in the transitive closure of the declared pairs.
  bool precedes(const Symbol& p, const Symbol& q) const;
};

Theory parse_theory(std::string_view text);
Theory parse_theory_file(const std::string& path);

/// All invariant violations (empty means the theory is well formed).
std::vector<std::string> validate_theory(const Theory& th);

/// Renders a theory back into the input grammar (round-trip stable).
std::string render_theory(const Theory& th);

/// Exercise files: one signed formula per line, '+'/'-' prefix, '#' comments.
/// Undeclared nullary identifiers become object variables.
std::vector<SignedFormula> parse_exercise(std::string_view text, const Theory& th);
std::vector<SignedFormula> parse_exercise_file(const std::string& path, const Theory& th);

/// Parses a single formula in the term grammar. `skolems` supplies the
/// resolvable skolem symbols (used when reading serialized proofs).
TSFormula parse_ts_formula(std::string_view text, const Theory& th,
                           const std::vector<Symbol>& skolems = {});

}  // namespace tsprover
