#include "tsprover/isogen.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace tsprover {

namespace {

// --- deductive isomorphism -----------------------------------------------------

std::vector<int> just_children(const Tableau& t, int id) {
  const Justification& j = t.node(id).just;
  if (j.kind == Justification::Kind::RuleApp) return j.premises;
  if (j.kind == Justification::Kind::CutIntro) return {j.license};
  return {};
}

using NodeMap = std::map<int, int>;

bool match_dag_nodes(const Tableau& ta, const Tableau& tb, int a, int b, NodeMap& fwd,
                     NodeMap& rev) {
  auto ita = fwd.find(a);
  auto itb = rev.find(b);
  if (ita != fwd.end() || itb != rev.end())
    return ita != fwd.end() && itb != rev.end() && ita->second == b && itb->second == a;

  const Node& na = ta.node(a);
  const Node& nb = tb.node(b);
  if (na.just.kind != nb.just.kind) return false;
  if (!syntactically_isomorphic(na.sf, nb.sf)) return false;

  std::vector<int> ca = just_children(ta, a);
  std::vector<int> cb = just_children(tb, b);
  if (ca.size() != cb.size()) return false;

  fwd[a] = b;
  rev[b] = a;
  if (ca.empty()) return true;

  std::vector<int> perm(cb.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end());
  do {
    NodeMap f2 = fwd, r2 = rev;
    bool ok = true;
    for (size_t i = 0; i < ca.size() && ok; i++)
      ok = match_dag_nodes(ta, tb, ca[i], cb[static_cast<size_t>(perm[i])], f2, r2);
    if (ok) {
      fwd = std::move(f2);
      rev = std::move(r2);
      return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  fwd.erase(a);
  rev.erase(b);
  return false;
}

bool dags_isomorphic(const Tableau& ta, const BranchDag& da, const Tableau& tb,
                     const BranchDag& db) {
  if (da.size() != db.size()) return false;
  if (da.closure.size() != db.closure.size()) return false;
  std::vector<int> perm(db.closure.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    NodeMap fwd, rev;
    bool ok = true;
    for (size_t i = 0; i < da.closure.size() && ok; i++)
      ok = match_dag_nodes(ta, tb, da.closure[i], db.closure[static_cast<size_t>(perm[i])], fwd,
                           rev);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

bool match_branches(const Proof& a, const Proof& b, size_t i, std::vector<bool>& used) {
  if (i == a.dags.size()) return true;
  size_t len_a = a.tableau.branch(a.dags[i].leaf).size();
  for (size_t j = 0; j < b.dags.size(); j++) {
    if (used[j]) continue;
    if (b.tableau.branch(b.dags[j].leaf).size() != len_a) continue;
    if (!dags_isomorphic(a.tableau, a.dags[i], b.tableau, b.dags[j])) continue;
    used[j] = true;
    if (match_branches(a, b, i + 1, used)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool deductively_isomorphic(const Proof& a, const Proof& b) {
  if (a.dags.size() != b.dags.size()) return false;
  std::vector<bool> used(b.dags.size(), false);
  return match_branches(a, b, 0, used);
}

// --- rule shape comparison -------------------------------------------------------

std::vector<RuleShapeMatch> shape_isomorphic_rules(const RuleSet& rs, int rule1) {
  const Rule& r1 = rs.rules[static_cast<size_t>(rule1)];
  std::vector<RuleShapeMatch> out;
  for (size_t r2i = 0; r2i < rs.rules.size(); r2i++) {
    const Rule& r2 = rs.rules[r2i];
    if (r1.premises.size() != r2.premises.size() || r1.is_close() != r2.is_close()) continue;
    std::vector<int> perm(r2.premises.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      VarBijection bij;
      bool ok = true;
      for (size_t i = 0; i < r1.premises.size() && ok; i++)
        ok = isomorphic_under_bijection(r1.premises[i].formula,
                                        r2.premises[static_cast<size_t>(perm[i])].formula, bij);
      if (ok && !r1.is_close())
        ok = isomorphic_under_bijection(r1.conclusion->formula, r2.conclusion->formula, bij);
      if (ok) out.push_back({static_cast<int>(r2i), perm});
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

std::set<Symbol> deductive_matching_symbols(const RuleSet& rs, int rule, int premise,
                                            const Position& pos) {
  std::set<Symbol> out;
  for (const auto& match : shape_isomorphic_rules(rs, rule)) {
    const Rule& r2 = rs.rules[static_cast<size_t>(match.rule2)];
    const auto& prem2 = r2.premises[static_cast<size_t>(match.premise_map[premise])];
    if (auto sym = try_symbol_at(prem2.formula, pos); sym && !sym->is_variable())
      out.insert(*sym);
  }
  return out;
}

// --- occurrence tracking -----------------------------------------------------------

namespace {

struct AppUse {
  int app_node = 0;
  int premise_slot = 0;
};

std::vector<AppUse> uses_of_node(const Tableau& t, int node) {
  std::vector<AppUse> out;
  for (const auto& nd : t.nodes) {
    if (nd->just.kind != Justification::Kind::RuleApp) continue;
    for (size_t s = 0; s < nd->just.premises.size(); s++)
      if (nd->just.premises[s] == node) out.push_back({nd->id, static_cast<int>(s)});
  }
  return out;
}

int rule_index_by_name(const RuleSet& rs, const std::string& name) {
  for (size_t i = 0; i < rs.rules.size(); i++)
    if (rs.rules[i].name == name) return static_cast<int>(i);
  throw Error("unknown rule '" + name + "'");
}

/// Splits `pos` at the pattern variable crossed by the path, if any: returns
/// the variable and the remaining path inside the substituted term.
std::optional<std::pair<Symbol, std::vector<int>>> variable_split(const TSFormula& pattern,
                                                                  const Position& pos) {
  if (pos.path.empty()) return std::nullopt;  // predicate position
  size_t idx = static_cast<size_t>(pos.path[0]);
  if (idx < 1 || idx > pattern.args.size()) return std::nullopt;
  const Term* t = &pattern.args[idx - 1];
  for (size_t i = 1;; i++) {
    if (t->head.kind == SymbolKind::PatternVar)
      return std::make_pair(t->head, std::vector<int>(pos.path.begin() + static_cast<long>(i),
                                                      pos.path.end()));
    if (i >= pos.path.size()) return std::nullopt;  // concrete symbol all the way
    size_t k = static_cast<size_t>(pos.path[i]);
    if (k < 1 || k > t->args.size()) return std::nullopt;
    t = &t->args[k - 1];
  }
}

void positions_of_var(const Term& t, const Symbol& var, std::vector<int>& path,
                      std::vector<Position>& out) {
  if (t.head == var) out.push_back(Position{path});
  for (size_t i = 0; i < t.args.size(); i++) {
    path.push_back(static_cast<int>(i + 1));
    positions_of_var(t.args[i], var, path, out);
    path.pop_back();
  }
}

std::vector<Position> positions_of_var(const TSFormula& f, const Symbol& var) {
  std::vector<Position> out;
  std::vector<int> path;
  for (size_t i = 0; i < f.args.size(); i++) {
    path.push_back(static_cast<int>(i + 1));
    positions_of_var(f.args[i], var, path, out);
    path.pop_back();
  }
  return out;
}

std::vector<OccRef> direct_descendants(const Proof& p, const RuleSet& rs, const OccRef& occ) {
  std::vector<OccRef> out;
  for (const auto& use : uses_of_node(p.tableau, occ.node)) {
    const Node& app = p.tableau.node(use.app_node);
    const Rule& rule = rs.rules[static_cast<size_t>(rule_index_by_name(rs, app.just.rule))];
    auto split = variable_split(rule.premises[static_cast<size_t>(use.premise_slot)].formula,
                                occ.pos);
    if (!split || rule.is_close()) continue;
    for (const auto& cpos : positions_of_var(rule.conclusion->formula, split->first)) {
      Position carried = cpos;
      carried.path.insert(carried.path.end(), split->second.begin(), split->second.end());
      out.push_back({app.id, std::move(carried)});
    }
  }
  return out;
}

}  // namespace

std::vector<OccRef> descendant_occurrences(const Proof& p, const RuleSet& rs, int node,
                                           const Position& pos) {
  std::set<OccRef> seen;
  std::vector<OccRef> queue{{node, pos}};
  while (!queue.empty()) {
    OccRef cur = queue.back();
    queue.pop_back();
    if (!seen.insert(cur).second) continue;
    for (auto& next : direct_descendants(p, rs, cur)) queue.push_back(std::move(next));
  }
  return {seen.begin(), seen.end()};
}

// --- choice table ---------------------------------------------------------------------

namespace {

std::vector<Symbol> ordered_admissible(const std::set<Symbol>& set, const Symbol& original) {
  std::vector<Symbol> out{original};
  for (const auto& s : set)
    if (s != original) out.push_back(s);
  return out;
}

std::set<Symbol> intersect_all(const std::vector<std::set<Symbol>>& sets) {
  std::set<Symbol> out = sets.front();
  for (size_t i = 1; i < sets.size(); i++) {
    std::set<Symbol> next;
    for (const auto& s : sets[i])
      if (out.count(s)) next.insert(s);
    out = std::move(next);
  }
  return out;
}

}  // namespace

ChoiceTable symbol_choice_table(const Proof& p, const RuleSet& rs, const Theory& th) {
  ChoiceTable table;
  const Tableau& t = p.tableau;
  int hyp_count = t.hypothesis_count();

  for (int id = 1; id <= hyp_count; id++) {
    const TSFormula& f = t.node(id).sf.formula;
    auto uses = uses_of_node(t, id);

    for (const auto& occ : occurrences(f)) {
      if (occ.symbol.is_variable()) continue;

      std::vector<std::set<Symbol>> sets;
      if (occ.position.is_root()) {
        for (const auto& use : uses) {
          int ridx = rule_index_by_name(rs, t.node(use.app_node).just.rule);
          sets.push_back(deductive_matching_symbols(rs, ridx, use.premise_slot, occ.position));
        }
      } else {
        for (const auto& d : descendant_occurrences(p, rs, id, occ.position)) {
          for (const auto& use : uses_of_node(t, d.node)) {
            int ridx = rule_index_by_name(rs, t.node(use.app_node).just.rule);
            const auto& pattern =
                rs.rules[static_cast<size_t>(ridx)].premises[static_cast<size_t>(use.premise_slot)];
            auto sym = try_symbol_at(pattern.formula, d.pos);
            if (sym && !sym->is_variable())
              sets.push_back(deductive_matching_symbols(rs, ridx, use.premise_slot, d.pos));
          }
        }
      }

      std::set<Symbol> admissible;
      if (sets.empty()) {
        const auto& pool = occ.position.is_root() ? th.predicates : th.functions;
        for (const auto& s : pool)
          if (s.arity == occ.symbol.arity) admissible.insert(s);
      } else {
        admissible = intersect_all(sets);
      }
      table.push_back(
          {id - 1, occ.position, occ.symbol, ordered_admissible(admissible, occ.symbol)});
    }
  }
  return table;
}

// --- candidate enumeration --------------------------------------------------------------

namespace {

Term replace_in_term(const Term& t, const std::vector<int>& path, size_t at, const Symbol& sym) {
  if (at == path.size()) return Term{sym, t.args};
  Term out = t;
  out.args[static_cast<size_t>(path[at] - 1)] =
      replace_in_term(t.args[static_cast<size_t>(path[at] - 1)], path, at + 1, sym);
  return out;
}

TSFormula replace_symbol_at(const TSFormula& f, const Position& pos, const Symbol& sym) {
  if (pos.is_root()) return TSFormula{sym, f.args};
  TSFormula out = f;
  size_t idx = static_cast<size_t>(pos.path[0] - 1);
  out.args[idx] = replace_in_term(f.args[idx], pos.path, 1, sym);
  return out;
}

}  // namespace

std::vector<Candidate> enumerate_candidates(const ChoiceTable& table,
                                            const std::vector<SignedFormula>& exercise) {
  std::vector<Candidate> out;
  std::vector<size_t> odometer(table.size(), 0);
  while (true) {
    Candidate cand;
    cand.formulas = exercise;
    for (size_t i = 0; i < table.size(); i++) {
      const ChoiceEntry& entry = table[i];
      const Symbol& chosen = entry.admissible[odometer[i]];
      if (chosen == entry.original) continue;
      auto& sf = cand.formulas[static_cast<size_t>(entry.formula_index)];
      sf.formula = replace_symbol_at(sf.formula, entry.pos, chosen);
      cand.replacements.push_back({entry.formula_index, entry.pos, entry.original, chosen});
    }
    out.push_back(std::move(cand));

    size_t i = table.size();
    while (i > 0) {
      i--;
      if (++odometer[i] < table[i].admissible.size()) break;
      odometer[i] = 0;
      if (i == 0) return out;
    }
    if (table.empty()) return out;
  }
}

// --- guided replay ------------------------------------------------------------------------

namespace {

class Replayer {
public:
  Replayer(const Proof& source, const RuleSet& rs) : source_(source), rs_(rs) {}

  std::optional<Proof> run(Tableau start) {
    if (start.hypothesis_count() != source_.tableau.hypothesis_count()) return std::nullopt;
    return step(std::move(start), source_.tableau.hypothesis_count() + 1);
  }

private:
  static bool same_multiset(std::vector<int> a, std::vector<int> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

  std::optional<Proof> step(Tableau t, int id) {
    const Tableau& st = source_.tableau;
    if (id > static_cast<int>(st.nodes.size())) return fire(std::move(t), st.firings.begin());

    const Node& ns = st.node(id);
    if (ns.just.kind == Justification::Kind::RuleApp) {
      for (const auto& opt : applicable_linear_instances(t, ns.parent, rs_)) {
        if (opt.is_close) continue;
        if (!same_multiset(opt.premise_nodes, ns.just.premises)) continue;
        if (!syntactically_isomorphic(opt.conclusion, ns.sf)) continue;
        if (auto res = step(apply(t, opt, rs_), id + 1)) return res;
      }
      return std::nullopt;
    }
    // cut pair: the Assert node first, its Deny sibling right behind
    for (const auto& opt : applicable_cut_instances(t, ns.parent, rs_)) {
      if (opt.license_node != ns.just.license) continue;
      if (!syntactically_isomorphic(opt.formula, ns.sf.formula)) continue;
      if (auto res = step(apply(t, opt), id + 2)) return res;
    }
    return std::nullopt;
  }

  std::optional<Proof> fire(Tableau t, std::map<int, CloseFiring>::const_iterator it) {
    if (it == source_.tableau.firings.end()) return finalize(std::move(t));
    for (const auto& opt : applicable_linear_instances(t, it->first, rs_)) {
      if (!opt.is_close) continue;
      if (!same_multiset(opt.premise_nodes, it->second.premises)) continue;
      if (auto res = fire(apply(t, opt, rs_), std::next(it))) return res;
    }
    return std::nullopt;
  }

  std::optional<Proof> finalize(Tableau t) {
    if (!tableau_closed(t)) return std::nullopt;
    Proof witness = make_proof(t);
    if (!deductively_isomorphic(source_, witness)) return std::nullopt;
    return witness;
  }

  const Proof& source_;
  const RuleSet& rs_;
};

}  // namespace

std::optional<Proof> guided_replay(const Proof& source,
                                   const std::vector<SignedFormula>& candidate,
                                   const RuleSet& rs, const Theory& th) {
  Tableau start;
  try {
    start = init_tableau(candidate, th);
  } catch (const InvalidExercise&) {
    return std::nullopt;
  }
  return Replayer(source, rs).run(std::move(start));
}

// --- generation ----------------------------------------------------------------------------

namespace {

std::string exercise_key(const std::vector<SignedFormula>& sfs) {
  std::vector<std::string> parts;
  for (const auto& sf : sfs) parts.push_back(to_string(sf));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + "\n";
  return out;
}

}  // namespace

GenerateResult generate(const std::vector<SignedFormula>& exercise, const RuleSet& rs,
                        const Theory& th, GenerateMode mode, const SearchLimits& limits) {
  SearchResult res = minimal_proofs(rs, exercise, th, limits);

  GenerateResult out;
  out.mode = mode;
  out.minimal_size = res.minimal_size;
  const Tableau& t0 = res.minimal_proofs.front().tableau;
  for (int id = 1; id <= t0.hypothesis_count(); id++) out.input.push_back(t0.node(id).sf);

  std::set<std::string> considered;
  std::map<std::string, size_t> index_by_key;
  std::vector<size_t> source_of;

  for (size_t pi = 0; pi < res.minimal_proofs.size(); pi++) {
    const Proof& proof = res.minimal_proofs[pi];
    ChoiceTable table = symbol_choice_table(proof, rs, th);
    for (const auto& cand : enumerate_candidates(table, out.input)) {
      std::string key = exercise_key(cand.formulas);
      considered.insert(key);
      if (index_by_key.count(key)) continue;
      if (auto witness = guided_replay(proof, cand.formulas, rs, th)) {
        index_by_key[key] = out.outputs.size();
        out.outputs.push_back({cand.formulas, cand.replacements, std::move(*witness), false});
        source_of.push_back(pi);
      }
    }
  }
  out.candidates_considered = static_cast<long long>(considered.size());

  if (mode == GenerateMode::Strict) {
    std::vector<CandidateSet> kept;
    for (size_t i = 0; i < out.outputs.size(); i++) {
      CandidateSet& cs = out.outputs[i];
      SearchLimits strict_limits = limits;
      strict_limits.max_apps = cs.witness.size;
      bool ok = false;
      try {
        SearchResult again = minimal_proofs(rs, cs.signed_formulas, th, strict_limits);
        if (again.minimal_size == cs.witness.size) {
          const Proof& source = res.minimal_proofs[source_of[i]];
          for (const auto& q : again.minimal_proofs)
            if (deductively_isomorphic(q, source)) {
              ok = true;
              break;
            }
        }
      } catch (const NotRefuted&) {
        ok = false;
      }
      if (ok) {
        cs.strict_verified = true;
        kept.push_back(std::move(cs));
      }
    }
    out.outputs = std::move(kept);
  }

  std::string input_key = exercise_key(out.input);
  std::stable_sort(out.outputs.begin(), out.outputs.end(),
                   [&](const CandidateSet& a, const CandidateSet& b) {
                     std::string ka = exercise_key(a.signed_formulas);
                     std::string kb = exercise_key(b.signed_formulas);
                     bool ia = ka == input_key, ib = kb == input_key;
                     if (ia != ib) return ia;
                     return ka < kb;
                   });
  return out;
}

}  // namespace tsprover
