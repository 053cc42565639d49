#include "tsprover/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace tsprover {

Symbol object_var(std::string name) {
  return Symbol{std::move(name), SymbolKind::ObjectVar, 0};
}

Symbol pattern_var(std::string name) {
  return Symbol{std::move(name), SymbolKind::PatternVar, 0};
}

Term::Term(Symbol h, std::vector<Term> a) : head(std::move(h)), args(std::move(a)) {
  if (static_cast<int>(args.size()) != head.arity)
    throw Error("term '" + head.name + "' expects " + std::to_string(head.arity) +
                " argument(s), got " + std::to_string(args.size()));
}

TSFormula::TSFormula(Symbol p, std::vector<Term> a)
    : predicate(std::move(p)), args(std::move(a)) {
  if (predicate.kind != SymbolKind::Predicate)
    throw Error("'" + predicate.name + "' is not a predicate symbol");
  if (static_cast<int>(args.size()) != predicate.arity)
    throw Error("predicate '" + predicate.name + "' expects " +
                std::to_string(predicate.arity) + " argument(s), got " +
                std::to_string(args.size()));
}

namespace {

std::strong_ordering compare_args(const std::vector<Term>& a, const std::vector<Term>& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end(),
                                                [](const Term& x, const Term& y) { return x <=> y; });
}

}  // namespace

bool Term::operator==(const Term& o) const { return (*this <=> o) == 0; }

std::strong_ordering Term::operator<=>(const Term& o) const {
  if (auto c = head <=> o.head; c != 0) return c;
  return compare_args(args, o.args);
}

bool TSFormula::operator==(const TSFormula& o) const { return (*this <=> o) == 0; }

std::strong_ordering TSFormula::operator<=>(const TSFormula& o) const {
  if (auto c = predicate <=> o.predicate; c != 0) return c;
  return compare_args(args, o.args);
}

// --- positions ---------------------------------------------------------------

std::string Position::to_string() const {
  if (path.empty()) return "ε";
  std::string out;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    if (!out.empty()) out += "·";
    out += std::to_string(*it);
  }
  return out;
}

Position Position::parse(const std::string& text) {
  if (text.empty() || text == "ε") return {};
  Position pos;
  size_t i = 0;
  while (i < text.size()) {
    size_t j = i;
    while (j < text.size() && text[j] >= '0' && text[j] <= '9') j++;
    if (j == i) throw Error("invalid position '" + text + "'");
    pos.path.push_back(std::stoi(text.substr(i, j - i)));
    i = j;
    if (i < text.size()) {
      // the separator is the UTF-8 middle dot
      if (text.compare(i, 2, "\xc2\xb7") == 0)
        i += 2;
      else if (text[i] == '.')
        i += 1;
      else
        throw Error("invalid position '" + text + "'");
    }
  }
  std::reverse(pos.path.begin(), pos.path.end());
  return pos;
}

// --- substitution ------------------------------------------------------------

const Term* Substitution::lookup(const Symbol& var) const {
  for (const auto& [v, t] : entries_)
    if (v == var) return &t;
  return nullptr;
}

bool Substitution::bind(const Symbol& var, const Term& value) {
  if (const Term* existing = lookup(var)) return *existing == value;
  entries_.emplace_back(var, value);
  return true;
}

// --- first-order formula builders ---------------------------------------------

namespace fo {

static FOPtr make(FOFormula f) { return std::make_shared<const FOFormula>(std::move(f)); }

FOPtr bottom() { return make({FOFormula::Kind::Bottom, {}, nullptr, nullptr, {}}); }
FOPtr top() { return make({FOFormula::Kind::Top, {}, nullptr, nullptr, {}}); }
FOPtr atom(TSFormula f) {
  return make({FOFormula::Kind::Atom, std::move(f), nullptr, nullptr, {}});
}
FOPtr neg(FOPtr f) {
  return make({FOFormula::Kind::Not, {}, std::move(f), nullptr, {}});
}
FOPtr conj(FOPtr a, FOPtr b) {
  return make({FOFormula::Kind::And, {}, std::move(a), std::move(b), {}});
}
FOPtr disj(FOPtr a, FOPtr b) {
  return make({FOFormula::Kind::Or, {}, std::move(a), std::move(b), {}});
}
FOPtr implies(FOPtr a, FOPtr b) {
  return make({FOFormula::Kind::Implies, {}, std::move(a), std::move(b), {}});
}
FOPtr iff(FOPtr a, FOPtr b) {
  return make({FOFormula::Kind::Iff, {}, std::move(a), std::move(b), {}});
}
FOPtr forall(Symbol v, FOPtr body) {
  return make({FOFormula::Kind::ForAll, {}, std::move(body), nullptr, std::move(v)});
}
FOPtr exists(Symbol v, FOPtr body) {
  return make({FOFormula::Kind::Exists, {}, std::move(body), nullptr, std::move(v)});
}

}  // namespace fo

bool fo_equal(const FOPtr& a, const FOPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case FOFormula::Kind::Bottom:
    case FOFormula::Kind::Top:
      return true;
    case FOFormula::Kind::Atom:
      return a->atom == b->atom;
    case FOFormula::Kind::Not:
      return fo_equal(a->lhs, b->lhs);
    case FOFormula::Kind::ForAll:
    case FOFormula::Kind::Exists:
      return a->var == b->var && fo_equal(a->lhs, b->lhs);
    default:
      return fo_equal(a->lhs, b->lhs) && fo_equal(a->rhs, b->rhs);
  }
}

std::string to_string(const FOPtr& f) {
  if (!f) return "<null>";
  switch (f->kind) {
    case FOFormula::Kind::Bottom: return "false";
    case FOFormula::Kind::Top: return "true";
    case FOFormula::Kind::Atom: return to_string(f->atom);
    case FOFormula::Kind::Not: return "not " + to_string(f->lhs);
    case FOFormula::Kind::And:
      return "(" + to_string(f->lhs) + " and " + to_string(f->rhs) + ")";
    case FOFormula::Kind::Or:
      return "(" + to_string(f->lhs) + " or " + to_string(f->rhs) + ")";
    case FOFormula::Kind::Implies:
      return "(" + to_string(f->lhs) + " -> " + to_string(f->rhs) + ")";
    case FOFormula::Kind::Iff:
      return "(" + to_string(f->lhs) + " <-> " + to_string(f->rhs) + ")";
    case FOFormula::Kind::ForAll:
      return "(forall " + f->var.name + " . " + to_string(f->lhs) + ")";
    case FOFormula::Kind::Exists:
      return "(exists " + f->var.name + " . " + to_string(f->lhs) + ")";
  }
  return "<?>";
}

// --- rendering ----------------------------------------------------------------

static void render_term(const Term& t, std::string& out) {
  out += t.head.name;
  if (!t.args.empty()) {
    out += "(";
    for (size_t i = 0; i < t.args.size(); i++) {
      if (i) out += ", ";
      render_term(t.args[i], out);
    }
    out += ")";
  }
}

std::string to_string(const Term& t) {
  std::string out;
  render_term(t, out);
  return out;
}

std::string to_string(const TSFormula& f) {
  std::string out = f.predicate.name;
  out += "(";
  for (size_t i = 0; i < f.args.size(); i++) {
    if (i) out += ", ";
    render_term(f.args[i], out);
  }
  out += ")";
  return out;
}

std::string to_string(const SignedFormula& sf) {
  return std::string(1, sign_char(sf.sign)) + " " + to_string(sf.formula);
}

// --- measures -----------------------------------------------------------------

static int term_depth(const Term& t) {
  int d = 0;
  for (const auto& a : t.args) d = std::max(d, 1 + term_depth(a));
  return d;
}

int depth(const TSFormula& f) {
  int d = 0;
  for (const auto& a : f.args) d = std::max(d, 1 + term_depth(a));
  return d;
}

static int term_nodes(const Term& t) {
  int n = 1;
  for (const auto& a : t.args) n += term_nodes(a);
  return n;
}

int node_count(const TSFormula& f) {
  int n = 1;
  for (const auto& a : f.args) n += term_nodes(a);
  return n;
}

// --- occurrences --------------------------------------------------------------

static void collect_term_occurrences(const Term& t, std::vector<int>& path,
                                     std::vector<Occurrence>& out) {
  out.push_back({t.head, Position{path}});
  for (size_t i = 0; i < t.args.size(); i++) {
    path.push_back(static_cast<int>(i + 1));
    collect_term_occurrences(t.args[i], path, out);
    path.pop_back();
  }
}

std::vector<Occurrence> occurrences(const TSFormula& f) {
  std::vector<Occurrence> out;
  out.push_back({f.predicate, Position{}});
  std::vector<int> path;
  for (size_t i = 0; i < f.args.size(); i++) {
    path.push_back(static_cast<int>(i + 1));
    collect_term_occurrences(f.args[i], path, out);
    path.pop_back();
  }
  return out;
}

Position position_of_occurrence(int n, const Symbol& s, const TSFormula& f) {
  int seen = 0;
  for (const auto& occ : occurrences(f)) {
    if (occ.symbol == s && ++seen == n) return occ.position;
  }
  throw Error("symbol '" + s.name + "' has fewer than " + std::to_string(n) +
              " occurrence(s) in " + to_string(f));
}

std::optional<Symbol> try_symbol_at(const TSFormula& f, const Position& pos) {
  if (pos.path.empty()) return f.predicate;
  size_t idx = static_cast<size_t>(pos.path[0]);
  if (idx < 1 || idx > f.args.size()) return std::nullopt;
  const Term* t = &f.args[idx - 1];
  for (size_t i = 1; i < pos.path.size(); i++) {
    size_t k = static_cast<size_t>(pos.path[i]);
    if (k < 1 || k > t->args.size()) return std::nullopt;
    t = &t->args[k - 1];
  }
  return t->head;
}

Symbol symbol_at(const TSFormula& f, const Position& pos) {
  auto s = try_symbol_at(f, pos);
  if (!s) throw Error("position " + pos.to_string() + " is not valid for " + to_string(f));
  return *s;
}

static void collect_vars(const Term& t, SymbolKind kind, std::set<Symbol>& out) {
  if (t.head.kind == kind) out.insert(t.head);
  for (const auto& a : t.args) collect_vars(a, kind, out);
}

std::set<Symbol> object_variables(const TSFormula& f) {
  std::set<Symbol> out;
  for (const auto& a : f.args) collect_vars(a, SymbolKind::ObjectVar, out);
  return out;
}

std::set<Symbol> pattern_variables(const TSFormula& f) {
  std::set<Symbol> out;
  for (const auto& a : f.args) collect_vars(a, SymbolKind::PatternVar, out);
  return out;
}

static void collect_pattern_vars_ordered(const Term& t, std::vector<Symbol>& out) {
  if (t.head.kind == SymbolKind::PatternVar) {
    if (std::find(out.begin(), out.end(), t.head) == out.end()) out.push_back(t.head);
  }
  for (const auto& a : t.args) collect_pattern_vars_ordered(a, out);
}

void collect_pattern_variables(const TSFormula& f, std::vector<Symbol>& out) {
  for (const auto& a : f.args) collect_pattern_vars_ordered(a, out);
}

// --- matching -----------------------------------------------------------------

bool match_term(const Term& pattern, const Term& target, Substitution& subst) {
  if (pattern.head.kind == SymbolKind::PatternVar) return subst.bind(pattern.head, target);
  if (pattern.head != target.head) return false;
  for (size_t i = 0; i < pattern.args.size(); i++)
    if (!match_term(pattern.args[i], target.args[i], subst)) return false;
  return true;
}

bool match_formula(const TSFormula& pattern, const TSFormula& target, Substitution& subst) {
  if (pattern.predicate != target.predicate) return false;
  for (size_t i = 0; i < pattern.args.size(); i++)
    if (!match_term(pattern.args[i], target.args[i], subst)) return false;
  return true;
}

std::optional<Substitution> match_pattern(const SignedFormula& pattern,
                                          const SignedFormula& target) {
  if (pattern.sign != target.sign) return std::nullopt;
  Substitution subst;
  if (!match_formula(pattern.formula, target.formula, subst)) return std::nullopt;
  return subst;
}

Term apply_substitution(const Term& t, const Substitution& subst) {
  if (t.head.kind == SymbolKind::PatternVar) {
    if (const Term* image = subst.lookup(t.head)) return *image;
    throw Error("unbound pattern variable '" + t.head.name + "'");
  }
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(apply_substitution(a, subst));
  return Term{t.head, std::move(args)};
}

TSFormula apply_substitution(const TSFormula& f, const Substitution& subst) {
  std::vector<Term> args;
  args.reserve(f.args.size());
  for (const auto& a : f.args) args.push_back(apply_substitution(a, subst));
  return TSFormula{f.predicate, std::move(args)};
}

SignedFormula apply_substitution(const SignedFormula& sf, const Substitution& subst) {
  return {sf.sign, apply_substitution(sf.formula, subst)};
}

// --- syntactic isomorphism ------------------------------------------------------

static bool symbols_shape_match(const Symbol& a, const Symbol& b) {
  if (a.is_variable() && b.is_variable()) return true;
  return a.kind == b.kind && a.arity == b.arity;
}

static bool terms_isomorphic(const Term& a, const Term& b) {
  if (!symbols_shape_match(a.head, b.head)) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); i++)
    if (!terms_isomorphic(a.args[i], b.args[i])) return false;
  return true;
}

bool syntactically_isomorphic(const TSFormula& a, const TSFormula& b) {
  if (!symbols_shape_match(a.predicate, b.predicate)) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); i++)
    if (!terms_isomorphic(a.args[i], b.args[i])) return false;
  return object_variables(a) == object_variables(b);
}

bool syntactically_isomorphic(const SignedFormula& a, const SignedFormula& b) {
  return syntactically_isomorphic(a.formula, b.formula);
}

bool VarBijection::bind(const Symbol& a, const Symbol& b) {
  auto [fit, finserted] = fwd_.emplace(a, b);
  if (!finserted) return fit->second == b;
  auto [rit, rinserted] = rev_.emplace(b, a);
  if (!rinserted) {
    fwd_.erase(a);
    return false;
  }
  return true;
}

static bool terms_isomorphic_bij(const Term& a, const Term& b, VarBijection& bij) {
  if (a.head.kind == SymbolKind::PatternVar || b.head.kind == SymbolKind::PatternVar) {
    if (a.head.kind != b.head.kind) return false;
    return bij.bind(a.head, b.head);
  }
  if (!symbols_shape_match(a.head, b.head)) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); i++)
    if (!terms_isomorphic_bij(a.args[i], b.args[i], bij)) return false;
  return true;
}

bool isomorphic_under_bijection(const TSFormula& a, const TSFormula& b, VarBijection& bij) {
  if (!symbols_shape_match(a.predicate, b.predicate)) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); i++)
    if (!terms_isomorphic_bij(a.args[i], b.args[i], bij)) return false;
  return true;
}

}  // namespace tsprover
