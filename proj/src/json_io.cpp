#include "tsprover/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace tsprover {

using nlohmann::json;

// --- writing -------------------------------------------------------------------

json proof_to_json(const Proof& p) {
  json nodes = json::array();
  for (const auto& ptr : p.tableau.nodes) {
    const Node& nd = *ptr;
    json just;
    switch (nd.just.kind) {
      case Justification::Kind::Hypothesis:
        just = {{"kind", "hyp"}};
        break;
      case Justification::Kind::RuleApp:
        just = {{"kind", "rule"}, {"rule", nd.just.rule}, {"premises", nd.just.premises}};
        break;
      case Justification::Kind::CutIntro:
        just = {{"kind", "cut"},
                {"license", nd.just.license},
                {"polarity", std::string(1, sign_char(nd.just.polarity))}};
        break;
    }
    nodes.push_back({{"id", nd.id},
                     {"sign", std::string(1, sign_char(nd.sf.sign))},
                     {"formula", to_string(nd.sf.formula)},
                     {"just", just}});
  }
  json branches = json::array();
  for (int leaf : p.tableau.leaves) branches.push_back(p.tableau.branch(leaf));
  json closures = json::array();
  for (const auto& dag : p.dags) closures.push_back(dag.closure);
  return {{"nodes", nodes}, {"branches", branches}, {"closures", closures}, {"size", p.size}};
}

// --- replay --------------------------------------------------------------------

namespace {

Sign parse_sign(const json& j, int node_id) {
  std::string s = j.get<std::string>();
  if (s == "+") return Sign::Assert;
  if (s == "-") return Sign::Deny;
  throw ReplayError("invalid sign '" + s + "'", node_id);
}

}  // namespace

Proof replay(const json& j, const RuleSet& rs, const Theory& th) {
  if (!j.contains("nodes") || !j.contains("branches"))
    throw ReplayError("proof object must contain 'nodes' and 'branches'");

  std::vector<Node> raw;
  for (const auto& jn : j.at("nodes")) {
    int id = jn.at("id").get<int>();
    if (id != static_cast<int>(raw.size()) + 1)
      throw ReplayError("node ids must be consecutive from 1", id);
    Node nd;
    nd.id = id;
    nd.sf.sign = parse_sign(jn.at("sign"), id);
    try {
      nd.sf.formula = parse_ts_formula(jn.at("formula").get<std::string>(), th, rs.skolem_decls);
    } catch (const Error& e) {
      throw ReplayError(e.what(), id);
    }
    const json& jj = jn.at("just");
    std::string kind = jj.at("kind").get<std::string>();
    if (kind == "hyp") {
      nd.just.kind = Justification::Kind::Hypothesis;
    } else if (kind == "rule") {
      nd.just.kind = Justification::Kind::RuleApp;
      nd.just.rule = jj.at("rule").get<std::string>();
      nd.just.premises = jj.at("premises").get<std::vector<int>>();
    } else if (kind == "cut") {
      nd.just.kind = Justification::Kind::CutIntro;
      nd.just.license = jj.at("license").get<int>();
      nd.just.polarity = parse_sign(jj.at("polarity"), id);
    } else {
      throw ReplayError("unknown justification kind '" + kind + "'", id);
    }
    raw.push_back(std::move(nd));
  }
  if (raw.empty()) throw ReplayError("proof has no nodes");

  // reconstruct the tree from the branch lists
  Tableau t;
  std::set<int> covered;
  for (const auto& jb : j.at("branches")) {
    auto ids = jb.get<std::vector<int>>();
    if (ids.empty() || ids.front() != 1)
      throw ReplayError("every branch must start at node 1");
    for (size_t i = 0; i < ids.size(); i++) {
      int id = ids[i];
      if (id < 1 || id > static_cast<int>(raw.size()))
        throw ReplayError("branch references unknown node " + std::to_string(id));
      covered.insert(id);
      if (i == 0) continue;
      Node& nd = raw[static_cast<size_t>(id - 1)];
      int parent = ids[i - 1];
      if (nd.parent != 0 && nd.parent != parent)
        throw ReplayError("branches disagree on the parent", id);
      nd.parent = parent;
    }
    t.leaves.push_back(ids.back());
  }
  if (covered.size() != raw.size())
    throw ReplayError("some nodes do not appear on any branch");
  for (auto& nd : raw) t.nodes.push_back(std::make_shared<const Node>(std::move(nd)));
  auto children = compute_children(t);
  for (size_t i = 0; i < t.nodes.size(); i++) {
    if (!children[i].empty() &&
        std::find(t.leaves.begin(), t.leaves.end(), static_cast<int>(i + 1)) != t.leaves.end())
      throw ReplayError("an interior node is listed as a branch leaf", static_cast<int>(i + 1));
  }

  // structural checks per node
  int hyp_seen = 0;
  bool derived_seen = false;
  for (const auto& ptr : t.nodes) {
    const Node& nd = *ptr;
    std::vector<int> ancestors;
    for (int cur = nd.parent; cur != 0; cur = t.node(cur).parent) ancestors.push_back(cur);
    auto is_ancestor = [&](int id) {
      return std::find(ancestors.begin(), ancestors.end(), id) != ancestors.end();
    };

    switch (nd.just.kind) {
      case Justification::Kind::Hypothesis:
        if (derived_seen)
          throw ReplayError("hypotheses must form the initial chain", nd.id);
        hyp_seen++;
        break;
      case Justification::Kind::RuleApp: {
        derived_seen = true;
        int ridx = -1;
        for (size_t i = 0; i < rs.rules.size(); i++)
          if (rs.rules[i].name == nd.just.rule) ridx = static_cast<int>(i);
        if (ridx < 0) throw ReplayError("unknown rule '" + nd.just.rule + "'", nd.id);
        const Rule& rule = rs.rules[static_cast<size_t>(ridx)];
        if (rule.is_close())
          throw ReplayError("CLOSE rules do not derive nodes", nd.id);
        if (rule.premises.size() != nd.just.premises.size())
          throw ReplayError("premise count mismatch for rule " + rule.name, nd.id);
        for (int pid : nd.just.premises)
          if (pid >= nd.id || !is_ancestor(pid))
            throw ReplayError("premise " + std::to_string(pid) +
                                  " is not an earlier node of the same branch",
                              nd.id);
        // the listed premises must instantiate the rule in some order
        std::vector<int> perm(rule.premises.size());
        for (size_t i = 0; i < perm.size(); i++) perm[i] = static_cast<int>(i);
        bool matched = false;
        do {
          Substitution s;
          bool ok = true;
          for (size_t i = 0; i < perm.size() && ok; i++) {
            const SignedFormula& have = t.node(nd.just.premises[static_cast<size_t>(perm[i])]).sf;
            ok = rule.premises[i].sign == have.sign &&
                 match_formula(rule.premises[i].formula, have.formula, s);
          }
          if (ok && apply_substitution(*rule.conclusion, s) == nd.sf) {
            matched = true;
            break;
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!matched)
          throw ReplayError("premises do not justify this node via rule " + rule.name, nd.id);
        break;
      }
      case Justification::Kind::CutIntro: {
        derived_seen = true;
        if (nd.just.license >= nd.id || !is_ancestor(nd.just.license))
          throw ReplayError("cut license is not an earlier node of the same branch", nd.id);
        if (nd.sf.sign != nd.just.polarity)
          throw ReplayError("cut polarity disagrees with the node sign", nd.id);
        bool licensed = false;
        for (const auto& seed : rs.cut_seeds) {
          const Rule& rule = rs.rules[static_cast<size_t>(seed.rule)];
          auto subst = match_pattern(rule.premises[static_cast<size_t>(seed.main_premise)],
                                     t.node(nd.just.license).sf);
          if (!subst) continue;
          for (int minor : seed.minor_premises)
            if (apply_substitution(rule.premises[static_cast<size_t>(minor)].formula, *subst) ==
                nd.sf.formula)
              licensed = true;
        }
        if (!licensed)
          throw ReplayError("cut formula is not a minor co-premise of the license node", nd.id);
        break;
      }
    }
  }
  if (hyp_seen == 0) throw ReplayError("proof has no hypotheses");

  // cut nodes must come in sibling pairs
  for (size_t i = 0; i < children.size(); i++) {
    const auto& ch = children[i];
    if (ch.size() > 2) throw ReplayError("node has more than two children", static_cast<int>(i + 1));
    if (ch.size() == 2) {
      const Node& l = t.node(ch[0]);
      const Node& r = t.node(ch[1]);
      bool pair = l.just.kind == Justification::Kind::CutIntro &&
                  r.just.kind == Justification::Kind::CutIntro &&
                  l.just.license == r.just.license && l.sf.formula == r.sf.formula &&
                  l.sf.sign == Sign::Assert && r.sf.sign == Sign::Deny;
      if (!pair) throw ReplayError("only cut applications may branch", static_cast<int>(i + 1));
    } else if (ch.size() == 1 && t.node(ch[0]).just.kind == Justification::Kind::CutIntro) {
      throw ReplayError("cut nodes must come in sibling pairs", ch[0]);
    }
  }

  // regularity
  for (int leaf : t.leaves) {
    auto ids = t.branch(leaf);
    for (size_t i = 0; i < ids.size(); i++)
      for (size_t k = i + 1; k < ids.size(); k++)
        if (t.node(ids[i]).sf == t.node(ids[k]).sf)
          throw ReplayError("branch repeats a signed formula", ids[k]);
  }

  // closures
  if (j.contains("closures")) {
    const json& jc = j.at("closures");
    if (jc.size() != t.leaves.size())
      throw ReplayError("closure list does not match the branch count");
    for (size_t b = 0; b < t.leaves.size(); b++) {
      auto ids = jc[b].get<std::vector<int>>();
      auto branch_ids = t.branch(t.leaves[b]);
      for (int id : ids)
        if (std::find(branch_ids.begin(), branch_ids.end(), id) == branch_ids.end())
          throw ReplayError("closure node is not on its branch", id);
      if (ids.size() == 2) {
        if (!conjugate(t.node(ids[0]).sf, t.node(ids[1]).sf))
          throw ReplayError("closure nodes are not conjugate", ids[0]);
      } else if (ids.size() == 1) {
        const SignedFormula& sf = t.node(ids[0]).sf;
        std::string close_rule;
        for (const auto& rule : rs.rules) {
          if (!rule.is_close()) continue;
          if (match_pattern(rule.premises[0], sf)) close_rule = rule.name;
        }
        if (close_rule.empty())
          throw ReplayError("no CLOSE rule fires on the closure node", ids[0]);
        t.firings[t.leaves[b]] = CloseFiring{close_rule, {ids[0]}};
      } else {
        throw ReplayError("closures must list one or two nodes per branch");
      }
    }
  }

  for (int leaf : t.leaves)
    if (!branch_closed(t, leaf)) throw ReplayError("branch of leaf " + std::to_string(leaf) +
                                                   " is not closed");

  Proof p = make_proof(t);
  if (j.contains("size") && j.at("size").get<int>() != p.size)
    throw ReplayError("stated size " + j.at("size").dump() + " differs from the recomputed size " +
                      std::to_string(p.size));
  return p;
}

Proof replay_file(const std::string& path, const RuleSet& rs, const Theory& th) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("invalid JSON in '" + path + "': " + e.what());
  }
  return replay(j, rs, th);
}

// --- rule sets -------------------------------------------------------------------

json rule_set_to_json(const RuleSet& rs) {
  json skolems = json::array();
  for (const auto& s : rs.skolem_decls) skolems.push_back({{"name", s.name}, {"arity", s.arity}});
  json rules = json::array();
  for (const auto& r : rs.rules) {
    json premises = json::array();
    for (const auto& p : r.premises)
      premises.push_back(
          {{"sign", std::string(1, sign_char(p.sign))}, {"formula", to_string(p.formula)}});
    json conclusion;
    if (r.is_close())
      conclusion = "close";
    else
      conclusion = {{"sign", std::string(1, sign_char(r.conclusion->sign))},
                    {"formula", to_string(r.conclusion->formula)}};
    rules.push_back({{"name", r.name},
                     {"premises", premises},
                     {"conclusion", conclusion},
                     {"source_axiom", r.source_axiom},
                     {"main_premises", r.main_premises}});
  }
  return {{"skolems", skolems}, {"rules", rules}};
}

namespace {

TSFormula pattern_formula(const std::string& text, const Theory& th,
                          const std::vector<Symbol>& skolems) {
  // rule formulas are written over pattern variables; the parser yields
  // object variables, so rebrand them
  TSFormula parsed = parse_ts_formula(text, th, skolems);
  struct {
    Term fix(const Term& t) {
      if (t.head.kind == SymbolKind::ObjectVar) return Term{pattern_var(t.head.name)};
      std::vector<Term> args;
      for (const auto& a : t.args) args.push_back(fix(a));
      return Term{t.head, std::move(args)};
    }
  } conv;
  std::vector<Term> args;
  for (const auto& a : parsed.args) args.push_back(conv.fix(a));
  return TSFormula{parsed.predicate, std::move(args)};
}

}  // namespace

RuleSet rule_set_from_json(const json& j, const Theory& th) {
  RuleSet rs;
  for (const auto& js : j.at("skolems"))
    rs.skolem_decls.push_back(Symbol{js.at("name").get<std::string>(),
                                     SymbolKind::SkolemFunction, js.at("arity").get<int>()});
  for (const auto& jr : j.at("rules")) {
    Rule r;
    r.name = jr.at("name").get<std::string>();
    r.source_axiom = jr.at("source_axiom").get<std::string>();
    for (const auto& jp : jr.at("premises")) {
      Sign sign = jp.at("sign").get<std::string>() == "+" ? Sign::Assert : Sign::Deny;
      r.premises.push_back(
          {sign, pattern_formula(jp.at("formula").get<std::string>(), th, rs.skolem_decls)});
    }
    const json& jc = jr.at("conclusion");
    if (!(jc.is_string() && jc.get<std::string>() == "close")) {
      Sign sign = jc.at("sign").get<std::string>() == "+" ? Sign::Assert : Sign::Deny;
      r.conclusion = SignedFormula{
          sign, pattern_formula(jc.at("formula").get<std::string>(), th, rs.skolem_decls)};
    }
    r.main_premises = jr.at("main_premises").get<std::vector<int>>();
    auto expected = compute_main_premises(r.premises);
    if (r.main_premises != expected)
      throw Error("rule " + r.name + ": stored main premises disagree with the premise contents");
    if (!check_analytic(r, th).empty())
      throw Error("rule " + r.name + " violates the analytic restrictions");
    rs.rules.push_back(std::move(r));
  }
  rs.cut_seeds = cut_seed_pairs(rs);
  return rs;
}

// --- results ----------------------------------------------------------------------

json generate_result_to_json(const GenerateResult& g, bool include_witnesses) {
  json input = json::array();
  for (const auto& sf : g.input) input.push_back(to_string(sf));
  json outputs = json::array();
  for (const auto& cs : g.outputs) {
    json sfs = json::array();
    for (const auto& sf : cs.signed_formulas) sfs.push_back(to_string(sf));
    json reps = json::array();
    for (const auto& r : cs.replacements)
      reps.push_back({{"formula", r.formula_index},
                      {"position", r.pos.to_string()},
                      {"original", r.original.name},
                      {"symbol", r.replacement.name}});
    json item = {{"signed_formulas", sfs},
                 {"replacements", reps},
                 {"witness_size", cs.witness.size},
                 {"strict_verified", cs.strict_verified}};
    if (include_witnesses) item["witness"] = proof_to_json(cs.witness);
    outputs.push_back(std::move(item));
  }
  return {{"input", input},
          {"mode", g.mode == GenerateMode::Fast ? "fast" : "strict"},
          {"minimal_size", g.minimal_size},
          {"candidates_considered", g.candidates_considered},
          {"outputs", outputs}};
}

json search_result_to_json(const SearchResult& r, bool all) {
  json out = {{"status", "proved"}, {"minimal_size", r.minimal_size}};
  json stats = {{"states_per_level", r.stats.states_per_level},
                {"pruned", r.stats.pruned},
                {"dedup_hits", r.stats.dedup_hits}};
  out["stats"] = std::move(stats);
  if (all) {
    json proofs = json::array();
    for (const auto& p : r.minimal_proofs) proofs.push_back(proof_to_json(p));
    out["proofs"] = std::move(proofs);
    out["count"] = r.minimal_proofs.size();
  } else {
    out["proof"] = proof_to_json(r.minimal_proofs.front());
  }
  return out;
}

}  // namespace tsprover
