#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsprover {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SymbolKind { Function, Predicate, ObjectVar, PatternVar, SkolemFunction };

struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::Function;
  int arity = 0;

  bool is_variable() const {
    return kind == SymbolKind::ObjectVar || kind == SymbolKind::PatternVar;
  }
  auto operator<=>(const Symbol&) const = default;
};

Symbol object_var(std::string name);
Symbol pattern_var(std::string name);

/// First-order term: a variable, or a (skolem) function symbol applied to
/// exactly `head.arity` arguments.
struct Term {
  Symbol head;
  std::vector<Term> args;

  Term() = default;
  Term(Symbol h, std::vector<Term> a = {});
  bool operator==(const Term&) const;
  std::strong_ordering operator<=>(const Term&) const;
};

/// Atomic formula over the signature; no connectives or quantifiers by
/// construction.
struct TSFormula {
  Symbol predicate;
  std::vector<Term> args;

  TSFormula() = default;
  TSFormula(Symbol p, std::vector<Term> a);
  bool operator==(const TSFormula&) const;
  std::strong_ordering operator<=>(const TSFormula&) const;
};

enum class Sign { Assert, Deny };

inline Sign flipped(Sign s) { return s == Sign::Assert ? Sign::Deny : Sign::Assert; }
inline char sign_char(Sign s) { return s == Sign::Assert ? '+' : '-'; }

struct SignedFormula {
  Sign sign = Sign::Assert;
  TSFormula formula;

  auto operator<=>(const SignedFormula&) const = default;
};

inline bool conjugate(const SignedFormula& a, const SignedFormula& b) {
  return a.sign != b.sign && a.formula == b.formula;
}

/// Path into the abstract representation of a formula, stored root-to-node
/// with 1-based child indices. The textual form lists the indices deepest
/// child first, joined by "·"; the root is "ε".
struct Position {
  std::vector<int> path;

  auto operator<=>(const Position&) const = default;
  bool is_root() const { return path.empty(); }
  std::string to_string() const;
  static Position parse(const std::string& text);
};

/// Mapping from pattern variables to object-level terms. Backed by a small
/// vector with mark/rollback so matching can backtrack without copies.
class Substitution {
public:
  const Term* lookup(const Symbol& var) const;
  // Returns false when `var` is already bound to a different term.
  bool bind(const Symbol& var, const Term& value);
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<Symbol, Term>>& entries() const { return entries_; }

  size_t mark() const { return entries_.size(); }
  void rollback(size_t m) { entries_.resize(m); }

private:
  std::vector<std::pair<Symbol, Term>> entries_;
};

// --- full first-order formulas (axioms) ------------------------------------

struct FOFormula;
using FOPtr = std::shared_ptr<const FOFormula>;

struct FOFormula {
  enum class Kind { Bottom, Top, Atom, Not, And, Or, Implies, Iff, ForAll, Exists };
  Kind kind;
  TSFormula atom;   // Atom
  FOPtr lhs, rhs;   // unary connectives and quantifier bodies use lhs
  Symbol var;       // ForAll / Exists
};

namespace fo {
FOPtr bottom();
FOPtr top();
FOPtr atom(TSFormula f);
FOPtr neg(FOPtr f);
FOPtr conj(FOPtr a, FOPtr b);
FOPtr disj(FOPtr a, FOPtr b);
FOPtr implies(FOPtr a, FOPtr b);
FOPtr iff(FOPtr a, FOPtr b);
FOPtr forall(Symbol v, FOPtr body);
FOPtr exists(Symbol v, FOPtr body);
}  // namespace fo

bool fo_equal(const FOPtr& a, const FOPtr& b);
std::string to_string(const FOPtr& f);

// --- rendering --------------------------------------------------------------

std::string to_string(const Term& t);
std::string to_string(const TSFormula& f);
std::string to_string(const SignedFormula& sf);

// --- measures and occurrence addressing -------------------------------------

/// Edges on the longest root-to-leaf path of the abstract representation.
int depth(const TSFormula& f);

/// Number of nodes of the abstract representation (predicate, function and
/// variable occurrences alike).
int node_count(const TSFormula& f);

struct Occurrence {
  Symbol symbol;
  Position position;
};

/// All symbol occurrences of `f` in pre-order (root predicate first, then the
/// arguments left to right, outermost before innermost).
std::vector<Occurrence> occurrences(const TSFormula& f);

/// Position of the n-th (1-based, pre-order) occurrence of `s` in `f`.
/// Throws when there are fewer than `n` occurrences.
Position position_of_occurrence(int n, const Symbol& s, const TSFormula& f);

/// Symbol found by walking `pos` from the root; throws on an invalid path.
Symbol symbol_at(const TSFormula& f, const Position& pos);

/// Symbol at `pos` if the path stays inside the formula.
std::optional<Symbol> try_symbol_at(const TSFormula& f, const Position& pos);

/// Set of object variables occurring in the formula.
std::set<Symbol> object_variables(const TSFormula& f);
std::set<Symbol> pattern_variables(const TSFormula& f);
void collect_pattern_variables(const TSFormula& f, std::vector<Symbol>& out);

// --- matching, substitution, isomorphism ------------------------------------

/// One-way match of a pattern against a ground signed formula: signs must be
/// equal, object symbols are rigid, pattern variables bind (non-linear
/// patterns require identical terms).
std::optional<Substitution> match_pattern(const SignedFormula& pattern,
                                          const SignedFormula& target);
bool match_term(const Term& pattern, const Term& target, Substitution& subst);
bool match_formula(const TSFormula& pattern, const TSFormula& target, Substitution& subst);

/// Replaces every pattern variable by its image; throws on unbound variables.
Term apply_substitution(const Term& t, const Substitution& subst);
TSFormula apply_substitution(const TSFormula& f, const Substitution& subst);
SignedFormula apply_substitution(const SignedFormula& sf, const Substitution& subst);

/// Abstract representations isomorphic as ordered trees (nodes match by kind
/// and arity) and equal object-variable sets. Signs are ignored for signed
/// formulas.
bool syntactically_isomorphic(const TSFormula& a, const TSFormula& b);
bool syntactically_isomorphic(const SignedFormula& a, const SignedFormula& b);

/// Variable correspondence accumulated while comparing rule patterns; must
/// stay a bijection across every premise and the conclusion of a rule pair.
class VarBijection {
public:
  bool bind(const Symbol& a, const Symbol& b);

private:
  std::map<Symbol, Symbol> fwd_, rev_;
};

/// Tree isomorphism for rule patterns: concrete symbols match by kind and
/// arity, pattern variables must correspond via the shared bijection.
bool isomorphic_under_bijection(const TSFormula& a, const TSFormula& b, VarBijection& bij);

}  // namespace tsprover
