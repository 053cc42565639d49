#include "tsprover/extraction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace tsprover {

namespace {

// --- variable replacement in full first-order formulas ------------------------

Term subst_var_term(const Term& t, const Symbol& var, const Term& value) {
  if (t.head == var) return value;
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(subst_var_term(a, var, value));
  return Term{t.head, std::move(args)};
}

FOPtr subst_var(const FOPtr& f, const Symbol& var, const Term& value) {
  switch (f->kind) {
    case FOFormula::Kind::Bottom:
    case FOFormula::Kind::Top:
      return f;
    case FOFormula::Kind::Atom: {
      std::vector<Term> args;
      for (const auto& a : f->atom.args) args.push_back(subst_var_term(a, var, value));
      return fo::atom(TSFormula{f->atom.predicate, std::move(args)});
    }
    case FOFormula::Kind::Not:
      return fo::neg(subst_var(f->lhs, var, value));
    case FOFormula::Kind::ForAll:
    case FOFormula::Kind::Exists: {
      if (f->var == var) return f;  // shadowed
      FOPtr body = subst_var(f->lhs, var, value);
      return f->kind == FOFormula::Kind::ForAll ? fo::forall(f->var, body)
                                                : fo::exists(f->var, body);
    }
    case FOFormula::Kind::And:
      return fo::conj(subst_var(f->lhs, var, value), subst_var(f->rhs, var, value));
    case FOFormula::Kind::Or:
      return fo::disj(subst_var(f->lhs, var, value), subst_var(f->rhs, var, value));
    case FOFormula::Kind::Implies:
      return fo::implies(subst_var(f->lhs, var, value), subst_var(f->rhs, var, value));
    case FOFormula::Kind::Iff:
      return fo::iff(subst_var(f->lhs, var, value), subst_var(f->rhs, var, value));
  }
  throw Error("unreachable");
}

FOPtr elim_iff(const FOPtr& f) {
  switch (f->kind) {
    case FOFormula::Kind::Bottom:
    case FOFormula::Kind::Top:
    case FOFormula::Kind::Atom:
      return f;
    case FOFormula::Kind::Not:
      return fo::neg(elim_iff(f->lhs));
    case FOFormula::Kind::ForAll:
      return fo::forall(f->var, elim_iff(f->lhs));
    case FOFormula::Kind::Exists:
      return fo::exists(f->var, elim_iff(f->lhs));
    case FOFormula::Kind::And:
      return fo::conj(elim_iff(f->lhs), elim_iff(f->rhs));
    case FOFormula::Kind::Or:
      return fo::disj(elim_iff(f->lhs), elim_iff(f->rhs));
    case FOFormula::Kind::Implies:
      return fo::implies(elim_iff(f->lhs), elim_iff(f->rhs));
    case FOFormula::Kind::Iff: {
      FOPtr a = elim_iff(f->lhs), b = elim_iff(f->rhs);
      return fo::conj(fo::implies(a, b), fo::implies(b, a));
    }
  }
  throw Error("unreachable");
}

/// Renames bound variables so that each binder introduces a distinct name.
FOPtr standardize_apart(const FOPtr& f, std::set<std::string>& used) {
  switch (f->kind) {
    case FOFormula::Kind::Bottom:
    case FOFormula::Kind::Top:
    case FOFormula::Kind::Atom:
      return f;
    case FOFormula::Kind::Not:
      return fo::neg(standardize_apart(f->lhs, used));
    case FOFormula::Kind::And:
    case FOFormula::Kind::Or:
    case FOFormula::Kind::Implies:
    case FOFormula::Kind::Iff: {
      // left before right; both calls consume fresh names
      FOPtr l = standardize_apart(f->lhs, used);
      FOPtr r = standardize_apart(f->rhs, used);
      switch (f->kind) {
        case FOFormula::Kind::And: return fo::conj(l, r);
        case FOFormula::Kind::Or: return fo::disj(l, r);
        case FOFormula::Kind::Implies: return fo::implies(l, r);
        default: return fo::iff(l, r);
      }
    }
    case FOFormula::Kind::ForAll:
    case FOFormula::Kind::Exists: {
      Symbol var = f->var;
      FOPtr body = f->lhs;
      if (used.count(var.name)) {
        int k = 1;
        while (used.count(var.name + std::to_string(k))) k++;
        Symbol fresh = object_var(var.name + std::to_string(k));
        body = subst_var(body, var, Term{fresh});
        var = fresh;
      }
      used.insert(var.name);
      body = standardize_apart(body, used);
      return f->kind == FOFormula::Kind::ForAll ? fo::forall(var, body) : fo::exists(var, body);
    }
  }
  throw Error("unreachable");
}

struct Quant {
  bool universal;
  Symbol var;
};

/// Interleaves two independent prefixes, emitting existentials as early as
/// possible so later skolemization depends on fewer universals.
std::vector<Quant> merge_prefixes(const std::vector<Quant>& a, const std::vector<Quant>& b) {
  std::vector<Quant> out;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && !a[i].universal)
      out.push_back(a[i++]);
    else if (j < b.size() && !b[j].universal)
      out.push_back(b[j++]);
    else if (i < a.size())
      out.push_back(a[i++]);
    else
      out.push_back(b[j++]);
  }
  return out;
}

std::vector<Quant> flipped_prefix(std::vector<Quant> p) {
  for (auto& q : p) q.universal = !q.universal;
  return p;
}

std::pair<std::vector<Quant>, FOPtr> hoist(const FOPtr& f) {
  switch (f->kind) {
    case FOFormula::Kind::Bottom:
    case FOFormula::Kind::Top:
    case FOFormula::Kind::Atom:
      return {{}, f};
    case FOFormula::Kind::Not: {
      auto [p, m] = hoist(f->lhs);
      return {flipped_prefix(std::move(p)), fo::neg(m)};
    }
    case FOFormula::Kind::And: {
      auto [pl, ml] = hoist(f->lhs);
      auto [pr, mr] = hoist(f->rhs);
      return {merge_prefixes(pl, pr), fo::conj(ml, mr)};
    }
    case FOFormula::Kind::Or: {
      auto [pl, ml] = hoist(f->lhs);
      auto [pr, mr] = hoist(f->rhs);
      return {merge_prefixes(pl, pr), fo::disj(ml, mr)};
    }
    case FOFormula::Kind::Implies: {
      auto [pl, ml] = hoist(f->lhs);
      auto [pr, mr] = hoist(f->rhs);
      return {merge_prefixes(flipped_prefix(std::move(pl)), pr), fo::implies(ml, mr)};
    }
    case FOFormula::Kind::Iff:
      throw Error("to_pnf: biconditional should have been eliminated");
    case FOFormula::Kind::ForAll: {
      auto [p, m] = hoist(f->lhs);
      std::vector<Quant> prefix{{true, f->var}};
      prefix.insert(prefix.end(), p.begin(), p.end());
      return {std::move(prefix), m};
    }
    case FOFormula::Kind::Exists: {
      auto [p, m] = hoist(f->lhs);
      std::vector<Quant> prefix{{false, f->var}};
      prefix.insert(prefix.end(), p.begin(), p.end());
      return {std::move(prefix), m};
    }
  }
  throw Error("unreachable");
}

Term patternize_term(const Term& t) {
  if (t.head.kind == SymbolKind::ObjectVar) return Term{pattern_var(t.head.name)};
  std::vector<Term> args;
  for (const auto& a : t.args) args.push_back(patternize_term(a));
  return Term{t.head, std::move(args)};
}

TSFormula patternize(const TSFormula& f) {
  std::vector<Term> args;
  for (const auto& a : f.args) args.push_back(patternize_term(a));
  return TSFormula{f.predicate, std::move(args)};
}

FOPtr patternize(const FOPtr& f) {
  switch (f->kind) {
    case FOFormula::Kind::Atom:
      return fo::atom(patternize(f->atom));
    case FOFormula::Kind::Not:
      return fo::neg(patternize(f->lhs));
    case FOFormula::Kind::And:
      return fo::conj(patternize(f->lhs), patternize(f->rhs));
    case FOFormula::Kind::Or:
      return fo::disj(patternize(f->lhs), patternize(f->rhs));
    case FOFormula::Kind::Implies:
      return fo::implies(patternize(f->lhs), patternize(f->rhs));
    case FOFormula::Kind::Iff:
      return fo::iff(patternize(f->lhs), patternize(f->rhs));
    default:
      return f;
  }
}

// --- NNF and clause distribution ------------------------------------------------

FOPtr to_nnf(const FOPtr& f, bool negated) {
  switch (f->kind) {
    case FOFormula::Kind::Bottom:
    case FOFormula::Kind::Top:
      throw Error("to_cnf: matrices of definitional axioms contain neither bottom nor top");
    case FOFormula::Kind::Atom:
      return negated ? fo::neg(f) : f;
    case FOFormula::Kind::Not:
      return to_nnf(f->lhs, !negated);
    case FOFormula::Kind::And:
      return negated ? fo::disj(to_nnf(f->lhs, true), to_nnf(f->rhs, true))
                     : fo::conj(to_nnf(f->lhs, false), to_nnf(f->rhs, false));
    case FOFormula::Kind::Or:
      return negated ? fo::conj(to_nnf(f->lhs, true), to_nnf(f->rhs, true))
                     : fo::disj(to_nnf(f->lhs, false), to_nnf(f->rhs, false));
    case FOFormula::Kind::Implies:
      return negated ? fo::conj(to_nnf(f->lhs, false), to_nnf(f->rhs, true))
                     : fo::disj(to_nnf(f->lhs, true), to_nnf(f->rhs, false));
    case FOFormula::Kind::Iff: {
      FOPtr both = fo::conj(fo::implies(f->lhs, f->rhs), fo::implies(f->rhs, f->lhs));
      return to_nnf(both, negated);
    }
    case FOFormula::Kind::ForAll:
    case FOFormula::Kind::Exists:
      throw Error("to_cnf: matrix must be quantifier-free");
  }
  throw Error("unreachable");
}

std::vector<std::vector<Literal>> distribute(const FOPtr& nnf) {
  switch (nnf->kind) {
    case FOFormula::Kind::Atom:
      return {{Literal{true, nnf->atom}}};
    case FOFormula::Kind::Not:
      return {{Literal{false, nnf->lhs->atom}}};
    case FOFormula::Kind::And: {
      auto l = distribute(nnf->lhs);
      auto r = distribute(nnf->rhs);
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case FOFormula::Kind::Or: {
      auto l = distribute(nnf->lhs);
      auto r = distribute(nnf->rhs);
      std::vector<std::vector<Literal>> out;
      out.reserve(l.size() * r.size());
      for (const auto& cl : l)
        for (const auto& cr : r) {
          std::vector<Literal> merged = cl;
          merged.insert(merged.end(), cr.begin(), cr.end());
          out.push_back(std::move(merged));
        }
      return out;
    }
    default:
      throw Error("to_cnf: unexpected connective in negation normal form");
  }
}

std::string rule_key(const Rule& r) {
  std::ostringstream out;
  std::vector<std::string> prems;
  for (const auto& p : r.premises) prems.push_back(to_string(p));
  std::sort(prems.begin(), prems.end());
  for (const auto& p : prems) out << p << ";";
  out << "|" << (r.is_close() ? std::string("close") : to_string(*r.conclusion));
  return out.str();
}

const char* kVarPool[] = {"x", "y", "z", "w", "v", "u"};

void canonical_rename(Rule& r) {
  std::vector<Symbol> order;
  for (const auto& p : r.premises) collect_pattern_variables(p.formula, order);
  if (r.conclusion) collect_pattern_variables(r.conclusion->formula, order);
  Substitution subst;
  for (size_t i = 0; i < order.size(); i++) {
    std::string name = i < std::size(kVarPool) ? kVarPool[i] : "v" + std::to_string(i - 4);
    subst.bind(order[i], Term{pattern_var(name)});
  }
  for (auto& p : r.premises) p = apply_substitution(p, subst);
  if (r.conclusion) r.conclusion = apply_substitution(*r.conclusion, subst);
}

/// The symbol a rule is named after: the outermost non-variable symbol in the
/// arguments of the principal premise, or its predicate when the arguments
/// are plain variables.
Symbol naming_symbol(const SignedFormula& principal) {
  for (const auto& occ : occurrences(principal.formula)) {
    if (occ.position.is_root()) continue;
    if (!occ.symbol.is_variable()) return occ.symbol;
  }
  return principal.formula.predicate;
}

}  // namespace

// --- pipeline stages -------------------------------------------------------------

FOPtr to_pnf(const FOPtr& f) {
  std::set<std::string> used;
  FOPtr prepared = standardize_apart(elim_iff(f), used);
  auto [prefix, matrix] = hoist(prepared);
  FOPtr out = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = it->universal ? fo::forall(it->var, out) : fo::exists(it->var, out);
  return out;
}

std::pair<FOPtr, std::vector<Symbol>> skolemize(const FOPtr& prenex,
                                                const std::string& axiom_name) {
  std::vector<Symbol> universals;
  std::vector<Symbol> decls;
  FOPtr cur = prenex;
  int counter = 0;
  while (cur->kind == FOFormula::Kind::ForAll || cur->kind == FOFormula::Kind::Exists) {
    if (cur->kind == FOFormula::Kind::ForAll) {
      universals.push_back(cur->var);
      cur = cur->lhs;
    } else {
      Symbol sk{"sk_" + axiom_name + "_" + std::to_string(++counter),
                SymbolKind::SkolemFunction, static_cast<int>(universals.size())};
      decls.push_back(sk);
      std::vector<Term> args;
      for (const auto& u : universals) args.emplace_back(u);
      Term image{sk, std::move(args)};
      cur = subst_var(cur->lhs, cur->var, image);
    }
  }
  return {cur, decls};
}

std::vector<Clause> to_cnf(const FOPtr& matrix) {
  std::vector<Clause> out;
  std::vector<std::string> seen;
  for (auto& raw : distribute(to_nnf(matrix, false))) {
    Clause c;
    bool tautology = false;
    for (const auto& lit : raw) {
      if (std::find(c.literals.begin(), c.literals.end(), lit) != c.literals.end()) continue;
      Literal opposite{!lit.positive, lit.atom};
      if (std::find(c.literals.begin(), c.literals.end(), opposite) != c.literals.end()) {
        tautology = true;
        break;
      }
      c.literals.push_back(lit);
    }
    if (tautology) continue;
    std::vector<std::string> lits;
    for (const auto& l : c.literals) lits.push_back((l.positive ? "+" : "-") + to_string(l.atom));
    std::sort(lits.begin(), lits.end());
    std::string key;
    for (const auto& l : lits) key += l + ";";
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<RinfImplication> rinf_forms(const Clause& c) {
  const auto& lits = c.literals;
  if (lits.empty()) throw Error("rinf_forms: empty clause");
  std::vector<RinfImplication> out;
  if (lits.size() == 1) {
    // l -> falsum for a negative literal, not l -> falsum for a positive one;
    // the top -> l variant yields infinitely many instances and is dropped.
    out.push_back({{Literal{!lits[0].positive, lits[0].atom}}, std::nullopt});
    return out;
  }
  for (size_t i = 0; i < lits.size(); i++) {
    RinfImplication impl;
    for (size_t j = 0; j < lits.size(); j++) {
      if (j == i) continue;
      impl.premises.push_back(Literal{!lits[j].positive, lits[j].atom});
    }
    impl.conclusion = lits[i];
    out.push_back(std::move(impl));
  }
  return out;
}

std::vector<int> compute_main_premises(const std::vector<SignedFormula>& premises) {
  if (premises.size() < 2) return {};
  std::set<Symbol> all;
  for (const auto& p : premises) {
    auto vars = pattern_variables(p.formula);
    all.insert(vars.begin(), vars.end());
  }
  std::vector<int> out;
  for (size_t i = 0; i < premises.size(); i++)
    if (pattern_variables(premises[i].formula) == all) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> check_analytic(const Rule& r, const Theory& th) {
  std::vector<int> violations;
  if (r.is_close()) return violations;

  std::set<Symbol> premise_vars;
  for (const auto& p : r.premises) {
    auto vars = pattern_variables(p.formula);
    premise_vars.insert(vars.begin(), vars.end());
  }
  bool vars_ok = true;
  for (const auto& v : pattern_variables(r.conclusion->formula))
    if (!premise_vars.count(v)) vars_ok = false;
  if (!vars_ok) violations.push_back(1);

  const Symbol& cpred = r.conclusion->formula.predicate;
  bool all_equal = true;
  for (const auto& p : r.premises)
    if (p.formula.predicate != cpred) all_equal = false;

  if (all_equal) {
    // size of the abstract representation; a strict height comparison cannot
    // separate e.g. fst(x) in y from x in cross(y, z)
    bool smaller = false;
    for (const auto& p : r.premises)
      if (node_count(r.conclusion->formula) < node_count(p.formula)) smaller = true;
    if (!smaller) violations.push_back(3);
  } else {
    bool below = false;
    for (const auto& p : r.premises)
      if (th.precedes(cpred, p.formula.predicate)) below = true;
    if (!below) violations.push_back(2);
  }
  return violations;
}

RuleSet extract_rules(const Theory& th) {
  auto problems = validate_theory(th);
  if (!problems.empty()) throw Error("invalid theory: " + problems.front());

  RuleSet rs;
  std::map<std::string, int> name_counters;

  for (const auto& ax : th.axioms) {
    FOPtr prenex = to_pnf(ax.formula);
    auto [matrix, skolems] = skolemize(prenex, ax.name);
    rs.skolem_decls.insert(rs.skolem_decls.end(), skolems.begin(), skolems.end());

    std::set<std::string> seen_in_axiom;
    for (const auto& clause : to_cnf(patternize(matrix))) {
      for (const auto& impl : rinf_forms(clause)) {
        Rule r;
        r.source_axiom = ax.name;
        for (const auto& lit : impl.premises)
          r.premises.push_back({lit.positive ? Sign::Assert : Sign::Deny, lit.atom});
        if (impl.conclusion)
          r.conclusion =
              SignedFormula{impl.conclusion->positive ? Sign::Assert : Sign::Deny,
                            impl.conclusion->atom};

        if (!check_analytic(r, th).empty()) continue;

        // main premises first, in a stable order
        auto mains = compute_main_premises(r.premises);
        if (!mains.empty()) {
          std::vector<SignedFormula> reordered;
          std::set<int> main_set(mains.begin(), mains.end());
          for (int i : mains) reordered.push_back(r.premises[i]);
          for (size_t i = 0; i < r.premises.size(); i++)
            if (!main_set.count(static_cast<int>(i))) reordered.push_back(r.premises[i]);
          r.premises = std::move(reordered);
          r.main_premises.clear();
          for (size_t i = 0; i < mains.size(); i++) r.main_premises.push_back(static_cast<int>(i));
        }
        canonical_rename(r);

        std::string key = rule_key(r);
        if (!seen_in_axiom.insert(key).second) continue;

        std::string stem =
            std::string(1, sign_char(r.premises[0].sign)) + naming_symbol(r.premises[0]).name;
        r.name = stem + "E" + std::to_string(++name_counters[stem]);
        rs.rules.push_back(std::move(r));
      }
    }
  }
  rs.cut_seeds = cut_seed_pairs(rs);
  return rs;
}

FOPtr correspondent_formula(const Rule& r) {
  auto eq_fmla = [](const SignedFormula& sf) {
    FOPtr a = fo::atom(sf.formula);
    return sf.sign == Sign::Assert ? a : fo::neg(a);
  };
  FOPtr antecedent;
  for (const auto& p : r.premises) {
    FOPtr cur = eq_fmla(p);
    antecedent = antecedent ? fo::conj(antecedent, cur) : cur;
  }
  FOPtr consequent = r.is_close() ? fo::bottom() : eq_fmla(*r.conclusion);
  return fo::implies(antecedent, consequent);
}

std::vector<CutSeed> cut_seed_pairs(const RuleSet& rs) {
  std::vector<CutSeed> out;
  for (size_t i = 0; i < rs.rules.size(); i++) {
    const Rule& r = rs.rules[i];
    if (r.premises.size() < 2) continue;
    for (int m : r.main_premises) {
      CutSeed seed{static_cast<int>(i), m, {}};
      for (size_t j = 0; j < r.premises.size(); j++)
        if (static_cast<int>(j) != m) seed.minor_premises.push_back(static_cast<int>(j));
      out.push_back(std::move(seed));
    }
  }
  return out;
}

}  // namespace tsprover
