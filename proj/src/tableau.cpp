#include "tsprover/tableau.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tsprover {

int Tableau::hypothesis_count() const {
  int n = 0;
  for (const auto& nd : nodes)
    if (nd->just.kind == Justification::Kind::Hypothesis) n++;
  return n;
}

std::vector<int> Tableau::branch(int leaf) const {
  std::vector<int> ids;
  for (int cur = leaf; cur != 0; cur = node(cur).parent) ids.push_back(cur);
  std::reverse(ids.begin(), ids.end());
  return ids;
}

std::vector<std::vector<int>> compute_children(const Tableau& t) {
  std::vector<std::vector<int>> children(t.nodes.size());
  for (const auto& nd : t.nodes)
    if (nd->parent != 0) children[static_cast<size_t>(nd->parent - 1)].push_back(nd->id);
  return children;
}

// --- initialization -----------------------------------------------------------

namespace {

void check_term_signature(const Term& t, const Theory& th) {
  switch (t.head.kind) {
    case SymbolKind::ObjectVar:
      return;
    case SymbolKind::Function: {
      const Symbol* fn = th.find_function(t.head.name);
      if (!fn || fn->arity != t.head.arity)
        throw InvalidExercise("undeclared function '" + t.head.name + "' in exercise");
      break;
    }
    case SymbolKind::SkolemFunction:
      throw InvalidExercise("skolem symbol '" + t.head.name +
                            "' may not appear in an exercise");
    default:
      throw InvalidExercise("exercise formulas must be over object-level symbols");
  }
  for (const auto& a : t.args) check_term_signature(a, th);
}

void push_node(Tableau& t, Node nd) {
  t.nodes.push_back(std::make_shared<const Node>(std::move(nd)));
}

}  // namespace

Tableau init_tableau(const std::vector<SignedFormula>& sf_set, const Theory& th) {
  if (sf_set.empty()) throw InvalidExercise("empty exercise");
  Tableau t;
  for (const auto& sf : sf_set) {
    const Symbol* pred = th.find_predicate(sf.formula.predicate.name);
    if (!pred || pred->arity != sf.formula.predicate.arity)
      throw InvalidExercise("undeclared predicate '" + sf.formula.predicate.name +
                            "' in exercise");
    for (const auto& a : sf.formula.args) check_term_signature(a, th);

    bool duplicate = false;
    for (const auto& nd : t.nodes) duplicate |= nd->sf == sf;
    if (duplicate) continue;

    Node nd;
    nd.id = static_cast<int>(t.nodes.size()) + 1;
    nd.sf = sf;
    nd.just.kind = Justification::Kind::Hypothesis;
    nd.parent = nd.id - 1;
    push_node(t, std::move(nd));
  }
  t.leaves = {static_cast<int>(t.nodes.size())};
  return t;
}

// --- closure ---------------------------------------------------------------------

bool branch_closed(const Tableau& t, int leaf) {
  if (t.firings.count(leaf)) return true;
  auto ids = t.branch(leaf);
  for (size_t i = 0; i < ids.size(); i++)
    for (size_t j = i + 1; j < ids.size(); j++)
      if (conjugate(t.node(ids[i]).sf, t.node(ids[j]).sf)) return true;
  return false;
}

bool tableau_closed(const Tableau& t) {
  for (int leaf : t.leaves)
    if (!branch_closed(t, leaf)) return false;
  return true;
}

// --- applicable instances ----------------------------------------------------------

namespace {

/// Extends `found` with every way of matching premises[idx..] against branch nodes.
void match_premises(const Tableau& t, const std::vector<int>& branch_ids, const Rule& rule,
                    size_t idx, Substitution& subst, std::vector<int>& picked,
                    std::vector<std::pair<std::vector<int>, Substitution>>& found) {
  if (idx == rule.premises.size()) {
    found.emplace_back(picked, subst);
    return;
  }
  for (int id : branch_ids) {
    const SignedFormula& sf = t.node(id).sf;
    if (sf.sign != rule.premises[idx].sign) continue;
    size_t m = subst.mark();
    if (match_formula(rule.premises[idx].formula, sf.formula, subst)) {
      picked.push_back(id);
      match_premises(t, branch_ids, rule, idx + 1, subst, picked, found);
      picked.pop_back();
    }
    subst.rollback(m);
  }
}

bool on_branch(const Tableau& t, const std::vector<int>& branch_ids, const SignedFormula& sf) {
  for (int id : branch_ids)
    if (t.node(id).sf == sf) return true;
  return false;
}

}  // namespace

std::vector<LinearInstance> applicable_linear_instances(const Tableau& t, int leaf,
                                                        const RuleSet& rs, bool close_only) {
  std::vector<LinearInstance> out;
  if (branch_closed(t, leaf)) return out;
  auto branch_ids = t.branch(leaf);

  for (size_t ri = 0; ri < rs.rules.size(); ri++) {
    const Rule& rule = rs.rules[ri];
    if (close_only && !rule.is_close()) continue;
    std::vector<std::pair<std::vector<int>, Substitution>> found;
    Substitution subst;
    std::vector<int> picked;
    match_premises(t, branch_ids, rule, 0, subst, picked, found);
    for (auto& [nodes, sigma] : found) {
      LinearInstance inst;
      inst.leaf = leaf;
      inst.rule = static_cast<int>(ri);
      inst.premise_nodes = std::move(nodes);
      inst.is_close = rule.is_close();
      if (!inst.is_close) {
        inst.conclusion = apply_substitution(*rule.conclusion, sigma);
        if (on_branch(t, branch_ids, inst.conclusion)) continue;  // regularity
      }
      out.push_back(std::move(inst));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const LinearInstance& a, const LinearInstance& b) {
    if (a.is_close != b.is_close) return a.is_close;
    if (a.rule != b.rule) return a.rule < b.rule;
    return a.premise_nodes < b.premise_nodes;
  });
  return out;
}

std::vector<CutInstance> applicable_cut_instances(const Tableau& t, int leaf,
                                                  const RuleSet& rs) {
  std::vector<CutInstance> out;
  if (branch_closed(t, leaf)) return out;
  auto branch_ids = t.branch(leaf);

  std::map<TSFormula, int> license_by_formula;
  for (int id : branch_ids) {
    const SignedFormula& sf = t.node(id).sf;
    for (const auto& seed : rs.cut_seeds) {
      const Rule& rule = rs.rules[static_cast<size_t>(seed.rule)];
      auto subst = match_pattern(rule.premises[static_cast<size_t>(seed.main_premise)], sf);
      if (!subst) continue;
      for (int minor : seed.minor_premises) {
        TSFormula cut =
            apply_substitution(rule.premises[static_cast<size_t>(minor)].formula, *subst);
        if (on_branch(t, branch_ids, {Sign::Assert, cut}) ||
            on_branch(t, branch_ids, {Sign::Deny, cut}))
          continue;
        auto [it, inserted] = license_by_formula.emplace(std::move(cut), id);
        if (!inserted) it->second = std::min(it->second, id);
      }
    }
  }
  for (const auto& [formula, license] : license_by_formula)
    out.push_back({leaf, formula, license});
  return out;
}

// --- application -------------------------------------------------------------------

namespace {

void require_on_branch(const Tableau& t, int leaf, const std::vector<int>& ids) {
  auto branch_ids = t.branch(leaf);
  for (int id : ids)
    if (std::find(branch_ids.begin(), branch_ids.end(), id) == branch_ids.end())
      throw Error("stale application: node " + std::to_string(id) +
                  " is not on the branch of leaf " + std::to_string(leaf));
}

void replace_leaf(Tableau& t, int leaf, const std::vector<int>& with) {
  auto it = std::find(t.leaves.begin(), t.leaves.end(), leaf);
  if (it == t.leaves.end()) throw Error("stale application: unknown leaf");
  it = t.leaves.erase(it);
  t.leaves.insert(it, with.begin(), with.end());
}

}  // namespace

Tableau apply(const Tableau& t, const LinearInstance& app, const RuleSet& rs) {
  if (branch_closed(t, app.leaf)) throw Error("stale application: branch already closed");
  require_on_branch(t, app.leaf, app.premise_nodes);
  const Rule& rule = rs.rules[static_cast<size_t>(app.rule)];

  Tableau out = t;
  if (app.is_close) {
    out.firings[app.leaf] = CloseFiring{rule.name, app.premise_nodes};
    return out;
  }
  if (on_branch(t, t.branch(app.leaf), app.conclusion))
    throw Error("stale application: conclusion already on the branch");
  Node nd;
  nd.id = static_cast<int>(out.nodes.size()) + 1;
  nd.sf = app.conclusion;
  nd.just = {Justification::Kind::RuleApp, rule.name, app.premise_nodes, 0, Sign::Assert};
  nd.parent = app.leaf;
  int id = nd.id;
  out.nodes.push_back(std::make_shared<const Node>(std::move(nd)));
  replace_leaf(out, app.leaf, {id});
  return out;
}

Tableau apply(const Tableau& t, const CutInstance& app) {
  if (branch_closed(t, app.leaf)) throw Error("stale application: branch already closed");
  require_on_branch(t, app.leaf, {app.license_node});

  Tableau out = t;
  int left = static_cast<int>(out.nodes.size()) + 1;
  for (Sign sign : {Sign::Assert, Sign::Deny}) {
    Node nd;
    nd.id = static_cast<int>(out.nodes.size()) + 1;
    nd.sf = {sign, app.formula};
    nd.just = {Justification::Kind::CutIntro, "", {}, app.license_node, sign};
    nd.parent = app.leaf;
    out.nodes.push_back(std::make_shared<const Node>(std::move(nd)));
  }
  replace_leaf(out, app.leaf, {left, left + 1});
  return out;
}

// --- justification DAGs --------------------------------------------------------------

namespace {

std::vector<int> reachable_from(const Tableau& t, const std::vector<int>& closure) {
  std::set<int> seen;
  std::vector<int> stack = closure;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    const Justification& j = t.node(id).just;
    if (j.kind == Justification::Kind::RuleApp)
      for (int p : j.premises) stack.push_back(p);
    else if (j.kind == Justification::Kind::CutIntro)
      stack.push_back(j.license);
  }
  return {seen.begin(), seen.end()};
}

BranchDag minimal_dag(const Tableau& t, int leaf) {
  auto ids = t.branch(leaf);
  std::vector<std::vector<int>> choices;
  if (auto it = t.firings.find(leaf); it != t.firings.end()) choices.push_back(it->second.premises);
  for (size_t i = 0; i < ids.size(); i++)
    for (size_t j = i + 1; j < ids.size(); j++)
      if (conjugate(t.node(ids[i]).sf, t.node(ids[j]).sf))
        choices.push_back({ids[i], ids[j]});
  if (choices.empty())
    throw Error("branch of leaf " + std::to_string(leaf) + " is not closed");

  BranchDag best;
  bool first = true;
  for (auto& closure : choices) {
    std::sort(closure.begin(), closure.end());
    BranchDag cand{leaf, closure, reachable_from(t, closure)};
    if (first || cand.size() < best.size() ||
        (cand.size() == best.size() && cand.closure < best.closure)) {
      best = std::move(cand);
      first = false;
    }
  }
  return best;
}

}  // namespace

Proof make_proof(const Tableau& t) {
  Proof p;
  p.tableau = t;
  for (int leaf : t.leaves) {
    p.dags.push_back(minimal_dag(t, leaf));
    p.size += p.dags.back().size();
  }
  return p;
}

int deductive_size(const Proof& p) { return p.size; }

bool is_clean(const Proof& p) {
  std::set<int> used;
  for (const auto& dag : p.dags) used.insert(dag.nodes.begin(), dag.nodes.end());
  for (const auto& nd : p.tableau.nodes)
    if (nd->just.kind != Justification::Kind::Hypothesis && !used.count(nd->id)) return false;
  return true;
}

// --- canonical keys --------------------------------------------------------------------

namespace {

struct Fnv2 {
  uint64_t a = 1469598103934665603ull, b = 14695981039346656037ull;
  void feed(const char* data, size_t len) {
    for (size_t i = 0; i < len; i++) {
      unsigned char c = static_cast<unsigned char>(data[i]);
      a = (a ^ c) * 1099511628211ull;
      b = (b ^ (c + 0x9e)) * 1099511628211ull;
    }
  }
  void feed(const std::string& s) { feed(s.data(), s.size()); }
  void feed(char c) { feed(&c, 1); }
  void feed(int v) {
    char buf[8];
    int n = 0;
    if (v == 0) buf[n++] = '0';
    while (v > 0) {
      buf[n++] = static_cast<char>('0' + v % 10);
      v /= 10;
    }
    feed(buf, static_cast<size_t>(n));
  }
};

void feed_term(Fnv2& h, const Term& t) {
  h.feed(t.head.name);
  if (!t.args.empty()) {
    h.feed('(');
    for (const auto& a : t.args) {
      feed_term(h, a);
      h.feed(',');
    }
    h.feed(')');
  }
}

void feed_branch(Fnv2& h, const Tableau& t, int leaf) {
  auto ids = t.branch(leaf);
  std::map<int, int> index_of;
  for (size_t i = 0; i < ids.size(); i++) index_of[ids[i]] = static_cast<int>(i);
  for (int id : ids) {
    const Node& nd = t.node(id);
    h.feed(sign_char(nd.sf.sign));
    h.feed(nd.sf.formula.predicate.name);
    h.feed('(');
    for (const auto& a : nd.sf.formula.args) {
      feed_term(h, a);
      h.feed(',');
    }
    h.feed(')');
    h.feed('#');
    switch (nd.just.kind) {
      case Justification::Kind::Hypothesis:
        h.feed('h');
        break;
      case Justification::Kind::RuleApp:
        h.feed('r');
        h.feed(nd.just.rule);
        for (int p : nd.just.premises) {
          h.feed(':');
          h.feed(index_of.at(p));
        }
        break;
      case Justification::Kind::CutIntro:
        h.feed('c');
        h.feed(index_of.at(nd.just.license));
        h.feed(sign_char(nd.just.polarity));
        break;
    }
    h.feed('|');
  }
  if (auto it = t.firings.find(leaf); it != t.firings.end()) {
    h.feed('F');
    h.feed(it->second.rule);
    for (int p : it->second.premises) {
      h.feed(':');
      h.feed(index_of.at(p));
    }
  }
}

}  // namespace

std::pair<uint64_t, uint64_t> canonical_digest(const Tableau& t) {
  std::vector<std::pair<uint64_t, uint64_t>> branch_hashes;
  for (int leaf : t.leaves) {
    Fnv2 h;
    feed_branch(h, t, leaf);
    branch_hashes.emplace_back(h.a, h.b);
  }
  std::sort(branch_hashes.begin(), branch_hashes.end());
  Fnv2 h;
  for (const auto& [a, b] : branch_hashes) {
    h.feed(reinterpret_cast<const char*>(&a), sizeof a);
    h.feed(reinterpret_cast<const char*>(&b), sizeof b);
  }
  return {h.a, h.b};
}

std::string canonical_key(const Tableau& t) {
  std::vector<std::string> branches;
  for (int leaf : t.leaves) {
    auto ids = t.branch(leaf);
    std::map<int, int> index_of;
    for (size_t i = 0; i < ids.size(); i++) index_of[ids[i]] = static_cast<int>(i);
    std::ostringstream b;
    for (int id : ids) {
      const Node& nd = t.node(id);
      b << sign_char(nd.sf.sign) << to_string(nd.sf.formula) << "#";
      switch (nd.just.kind) {
        case Justification::Kind::Hypothesis:
          b << "h";
          break;
        case Justification::Kind::RuleApp:
          b << "r:" << nd.just.rule;
          for (int p : nd.just.premises) b << ":" << index_of.at(p);
          break;
        case Justification::Kind::CutIntro:
          b << "c:" << index_of.at(nd.just.license) << ":" << sign_char(nd.just.polarity);
          break;
      }
      b << "|";
    }
    if (auto it = t.firings.find(leaf); it != t.firings.end()) {
      b << "F:" << it->second.rule;
      for (int p : it->second.premises) b << ":" << index_of.at(p);
    }
    branches.push_back(b.str());
  }
  std::sort(branches.begin(), branches.end());
  std::string out;
  for (const auto& b : branches) out += b + "\n";
  return out;
}

}  // namespace tsprover
