// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria can be run individually by number: `acceptance 4`.

#include <chrono>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "gen.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "proplogic.hpp"
#include "support.hpp"

using namespace tsprover;
using namespace testsupport;

namespace {

struct Criterion {
  std::string number;
  std::string title;
  long long budget_ms;
  bool (*run)(std::ostream& log);
};

Proof fixture_proof(const std::string& name) {
  return replay_file(fixture(name), sets_rules(), sets_theory());
}

std::string shape_key(const Rule& r) {
  std::vector<std::string> prems;
  for (const auto& p : r.premises) prems.push_back(to_string(p));
  std::sort(prems.begin(), prems.end());
  std::string out;
  for (const auto& p : prems) out += p + " ; ";
  out += "=> " + (r.is_close() ? std::string("close") : to_string(*r.conclusion));
  return out;
}

std::string shape(const std::string& premises_semicolon, const std::string& conclusion) {
  std::vector<std::string> prems;
  std::istringstream in(premises_semicolon);
  std::string part;
  while (std::getline(in, part, ';')) {
    size_t a = part.find_first_not_of(' ');
    size_t b = part.find_last_not_of(' ');
    prems.push_back(part.substr(a, b - a + 1));
  }
  std::sort(prems.begin(), prems.end());
  std::string out;
  for (const auto& p : prems) out += p + " ; ";
  return out + "=> " + conclusion;
}

// --- criterion 1: rule extraction golden test ---------------------------------

bool criterion1(std::ostream& log) {
  const RuleSet& rs = extract_rules(sets_theory());
  bool ok = true;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) {
      log << "    FAILED: " << what << "\n";
      ok = false;
    }
  };

  expect(rs.rules.size() == 35, "expected 35 rules, got " + std::to_string(rs.rules.size()));

  std::map<std::string, int> by_axiom;
  for (const auto& r : rs.rules) by_axiom[r.source_axiom]++;
  const std::map<std::string, int> expected_counts = {
      {"ax_empty", 1}, {"ax_comp", 2},    {"ax_union", 4},    {"ax_inter", 4},
      {"ax_diff", 4},  {"ax_cross", 4},   {"ax_symdiff", 8},  {"ax_subseteq", 4},
      {"ax_disj", 4},
  };
  expect(by_axiom == expected_counts, "per-axiom rule counts do not match the published set");

  for (const auto& sk : rs.skolem_decls)
    expect(sk.arity == 2, "skolem " + sk.name + " should have arity 2");
  expect(rs.skolem_decls.size() == 2, "expected two skolem symbols");

  // the full published rule set, one shape per rule, up to naming
  const std::vector<std::string> expected_shapes = {
      shape("+ in(x, empty)", "close"),
      shape("+ in(x, comp(y))", "- in(x, y)"),
      shape("- in(x, comp(y))", "+ in(x, y)"),
      shape("+ in(x, union(y, z)) ; - in(x, z)", "+ in(x, y)"),
      shape("+ in(x, union(y, z)) ; - in(x, y)", "+ in(x, z)"),
      shape("- in(x, union(y, z))", "- in(x, y)"),
      shape("- in(x, union(y, z))", "- in(x, z)"),
      shape("+ in(x, inter(y, z))", "+ in(x, y)"),
      shape("+ in(x, inter(y, z))", "+ in(x, z)"),
      shape("- in(x, inter(y, z)) ; + in(x, z)", "- in(x, y)"),
      shape("- in(x, inter(y, z)) ; + in(x, y)", "- in(x, z)"),
      shape("+ in(x, diff(y, z))", "+ in(x, y)"),
      shape("+ in(x, diff(y, z))", "- in(x, z)"),
      shape("- in(x, diff(y, z)) ; - in(x, z)", "- in(x, y)"),
      shape("- in(x, diff(y, z)) ; + in(x, y)", "+ in(x, z)"),
      shape("+ in(x, cross(y, z))", "+ in(fst(x), y)"),
      shape("+ in(x, cross(y, z))", "+ in(snd(x), z)"),
      shape("- in(x, cross(y, z)) ; + in(snd(x), z)", "- in(fst(x), y)"),
      shape("- in(x, cross(y, z)) ; + in(fst(x), y)", "- in(snd(x), z)"),
      shape("+ in(x, symdiff(y, z)) ; - in(x, z)", "+ in(x, y)"),
      shape("+ in(x, symdiff(y, z)) ; - in(x, y)", "+ in(x, z)"),
      shape("+ in(x, symdiff(y, z)) ; + in(x, z)", "- in(x, y)"),
      shape("+ in(x, symdiff(y, z)) ; + in(x, y)", "- in(x, z)"),
      shape("- in(x, symdiff(y, z)) ; - in(x, z)", "- in(x, y)"),
      shape("- in(x, symdiff(y, z)) ; + in(x, y)", "+ in(x, z)"),
      shape("- in(x, symdiff(y, z)) ; - in(x, y)", "- in(x, z)"),
      shape("- in(x, symdiff(y, z)) ; + in(x, z)", "+ in(x, y)"),
      shape("+ subseteq(x, y) ; - in(z, y)", "- in(z, x)"),
      shape("+ subseteq(x, y) ; + in(z, x)", "+ in(z, y)"),
      shape("- subseteq(x, y)", "+ in(sk_ax_subseteq_1(x, y), x)"),
      shape("- subseteq(x, y)", "- in(sk_ax_subseteq_1(x, y), y)"),
      shape("+ disj(x, y) ; + in(z, y)", "- in(z, x)"),
      shape("+ disj(x, y) ; + in(z, x)", "- in(z, y)"),
      shape("- disj(x, y)", "+ in(sk_ax_disj_1(x, y), x)"),
      shape("- disj(x, y)", "+ in(sk_ax_disj_1(x, y), y)"),
  };
  std::multiset<std::string> got, want(expected_shapes.begin(), expected_shapes.end());
  for (const auto& r : rs.rules) got.insert(shape_key(r));
  if (got != want) {
    ok = false;
    for (const auto& s : got)
      if (!want.count(s)) log << "    unexpected rule: " << s << "\n";
    for (const auto& s : want)
      if (!got.count(s)) log << "    missing rule: " << s << "\n";
  }
  return ok;
}

// --- criterion 2: deductive size reproduction ----------------------------------

bool criterion2(std::ostream& log) {
  bool ok = true;
  const std::vector<std::pair<std::string, int>> cases = {
      {"fig3.json", 13}, {"fig4a.json", 4}, {"fig4b.json", 4}};
  for (const auto& [name, size] : cases) {
    Proof p = fixture_proof(name);
    if (p.size != size) {
      log << "    FAILED: " << name << " replayed with size " << p.size << ", expected " << size
          << "\n";
      ok = false;
    }
  }
  return ok;
}

// --- criterion 3: minimal-proof search -----------------------------------------

bool criterion3(std::ostream& log) {
  bool ok = true;
  SearchResult a = minimal_proofs(sets_rules(), exercise("+ in(x, inter(y, z))\n- in(x, y)\n"),
                                  sets_theory(), {});
  if (a.minimal_size != 4) {
    log << "    FAILED: expected minimal size 4, got " << a.minimal_size << "\n";
    ok = false;
  }
  Proof fig4a = fixture_proof("fig4a.json");
  bool iso = false;
  for (const auto& p : a.minimal_proofs) iso |= deductively_isomorphic(p, fig4a);
  if (!iso) {
    log << "    FAILED: no minimal proof is deductively isomorphic to Fig. 4(a)\n";
    ok = false;
  }

  SearchResult b =
      minimal_proofs(sets_rules(), exercise("+ in(x, y)\n- in(x, y)\n"), sets_theory(), {});
  if (b.minimal_size != 3) {
    log << "    FAILED: expected minimal size 3, got " << b.minimal_size << "\n";
    ok = false;
  }
  for (const auto& p : b.minimal_proofs)
    for (const auto& nd : p.tableau.nodes)
      if (nd->just.kind != Justification::Kind::Hypothesis) {
        log << "    FAILED: zero-application proof expected\n";
        ok = false;
      }
  return ok;
}

// --- criterion 4: generation reproduction ---------------------------------------

bool criterion4(std::ostream& log) {
  GenerateResult g = generate(exercise("+ in(x, inter(y, union(w, z)))\n"
                                       "- in(x, union(inter(y, w), z))\n"),
                              sets_rules(), sets_theory(), GenerateMode::Fast, {});
  bool ok = true;
  if (g.candidates_considered != 144) {
    log << "    FAILED: candidates_considered = " << g.candidates_considered << ", expected 144\n";
    ok = false;
  }

  auto key = [](const std::vector<SignedFormula>& sfs) {
    std::vector<std::string> parts;
    for (const auto& sf : sfs) parts.push_back(to_string(sf));
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& p : parts) out += p + ";";
    return out;
  };
  std::set<std::string> got;
  for (const auto& cs : g.outputs) got.insert(key(cs.signed_formulas));
  std::set<std::string> want;
  for (const char* ex : {
           "+ in(x, inter(y, union(w, z)))\n- in(x, union(inter(y, w), z))\n",
           "+ in(x, inter(y, symdiff(w, z)))\n- in(x, union(inter(y, w), z))\n",
           "+ in(x, diff(y, diff(w, z)))\n- in(x, union(diff(y, w), z))\n",
           "+ in(x, diff(y, symdiff(w, z)))\n- in(x, union(diff(y, w), z))\n",
           "+ in(x, diff(y, diff(w, z)))\n- in(x, union(symdiff(y, w), z))\n",
           "+ in(x, diff(y, symdiff(w, z)))\n- in(x, union(symdiff(y, w), z))\n",
       })
    want.insert(key(exercise(ex)));
  if (got != want) {
    log << "    FAILED: generated sets differ from the published six\n";
    for (const auto& s : got)
      if (!want.count(s)) log << "      unexpected: " << s << "\n";
    for (const auto& s : want)
      if (!got.count(s)) log << "      missing: " << s << "\n";
    ok = false;
  }
  if (g.outputs.empty() || !g.outputs.front().replacements.empty()) {
    log << "    FAILED: the input exercise must come first\n";
    ok = false;
  }
  return ok;
}

// --- criterion 5: matching-symbol reproduction -----------------------------------

bool criterion5(std::ostream& log) {
  const RuleSet& rs = sets_rules();
  bool ok = true;
  auto names = [](const std::set<Symbol>& syms) {
    std::set<std::string> out;
    for (const auto& s : syms) out.insert(s.name);
    return out;
  };
  auto check_set = [&](int rule, const std::set<std::string>& want, const std::string& what) {
    auto got = names(deductive_matching_symbols(rs, rule, 0, Position::parse("2")));
    if (got != want) {
      log << "    FAILED: " << what << ": {";
      for (const auto& s : got) log << " " << s;
      log << " }\n";
      ok = false;
    }
  };
  check_set(rule_index("+interE1"), {"inter", "union", "diff"},
            "matching symbols of inter in the one-premise shape");
  check_set(rule_index("-interE2"), {"inter", "union", "diff", "symdiff"},
            "matching symbols of inter in the two-premise shape");
  return ok;
}

// --- criterion 6: isomorphism suite -----------------------------------------------

bool criterion6(std::ostream& log) {
  bool ok = true;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) {
      log << "    FAILED: " << what << "\n";
      ok = false;
    }
  };
  expect(deductively_isomorphic(fixture_proof("fig5.json"), fixture_proof("fig8.json")),
         "Fig. 5 and Fig. 8 should be deductively isomorphic");
  expect(deductively_isomorphic(fixture_proof("fig4a.json"), fixture_proof("fig4b.json")),
         "Fig. 4(a) and Fig. 4(b) should be deductively isomorphic");
  expect(!deductively_isomorphic(fixture_proof("fig6a.json"), fixture_proof("fig6b.json")),
         "Fig. 6(a) and Fig. 6(b) should not be deductively isomorphic");
  expect(is_clean(fixture_proof("fig6a.json")), "Fig. 6(a) should be clean");
  expect(!is_clean(fixture_proof("fig6b.json")), "Fig. 6(b) should not be clean");
  return ok;
}

// --- criterion 7: property-based acceptance ----------------------------------------

bool criterion7a(std::ostream& log) {
  bool ok = true;
  // syntactic isomorphism over 1000 random samples
  FormulaGen gen(sets_theory(), 2026);
  std::vector<TSFormula> pool;
  for (int i = 0; i < 80; i++) pool.push_back(gen.formula(3, {"x", "y", "z"}));
  int samples = 0;
  for (int i = 0; i < 1000; i++) {
    const TSFormula& a = gen.pick(pool);
    const TSFormula& b = gen.pick(pool);
    const TSFormula& c = gen.pick(pool);
    samples++;
    if (!syntactically_isomorphic(a, a) ||
        syntactically_isomorphic(a, b) != syntactically_isomorphic(b, a) ||
        (syntactically_isomorphic(a, b) && syntactically_isomorphic(b, c) &&
         !syntactically_isomorphic(a, c))) {
      log << "    FAILED: syntactic isomorphism is not an equivalence relation\n";
      ok = false;
      break;
    }
  }

  // deductive isomorphism over 1000 random samples from a proof pool
  std::vector<Proof> proofs;
  for (const char* ex : {
           "+ in(x, inter(y, z))\n- in(x, y)\n",
           "+ in(x, diff(y, z))\n- in(x, y)\n",
           "+ in(x, inter(y, z))\n- in(x, z)\n",
           "+ in(x, y)\n- in(x, union(y, z))\n",
           "+ in(x, y)\n- in(x, y)\n",
           "+ subseteq(y, z)\n+ in(x, y)\n- in(x, z)\n",
           "+ disj(y, z)\n+ in(x, y)\n+ in(x, z)\n",
           "+ in(x, inter(y, inter(z, w)))\n- in(x, z)\n",
           "+ in(x, comp(y))\n+ in(x, y)\n",
       }) {
    SearchResult r = minimal_proofs(sets_rules(), exercise(ex), sets_theory(), {});
    for (const auto& p : r.minimal_proofs) proofs.push_back(p);
  }
  for (int i = 0; i < 1000; i++) {
    const Proof& a = proofs[static_cast<size_t>(gen.below(static_cast<int>(proofs.size())))];
    const Proof& b = proofs[static_cast<size_t>(gen.below(static_cast<int>(proofs.size())))];
    const Proof& c = proofs[static_cast<size_t>(gen.below(static_cast<int>(proofs.size())))];
    if (!deductively_isomorphic(a, a) ||
        deductively_isomorphic(a, b) != deductively_isomorphic(b, a) ||
        (deductively_isomorphic(a, b) && deductively_isomorphic(b, c) &&
         !deductively_isomorphic(a, c))) {
      log << "    FAILED: deductive isomorphism is not an equivalence relation\n";
      ok = false;
      break;
    }
  }
  (void)samples;
  return ok;
}

bool criterion7b(std::ostream& log) {
  for (const auto& r : sets_rules().rules) {
    if (!check_analytic(r, sets_theory()).empty()) {
      log << "    FAILED: rule " << r.name << " violates the analytic restrictions\n";
      return false;
    }
  }
  return true;
}

bool criterion7c(std::ostream& log) {
  for (const auto& ax : sets_theory().axioms) {
    auto [matrix, skolems] = skolemize(to_pnf(ax.formula), ax.name);
    for (const auto& clause : to_cnf(matrix)) {
      for (const auto& impl : rinf_forms(clause)) {
        bool fine;
        if (clause.literals.size() == 1) {
          // l -> falsum is equisatisfiable with the unit clause: both are
          // satisfied exactly when l is false
          FOPtr lit = fo::atom(clause.literals[0].atom);
          if (clause.literals[0].positive) lit = fo::neg(lit);
          fine = prop_equivalent(rinf_to_fo(impl), lit);
        } else {
          fine = prop_equivalent(rinf_to_fo(impl), clause_to_fo(clause));
        }
        if (!fine) {
          log << "    FAILED: RINF form of a clause from " << ax.name
              << " is not equisatisfiable with it\n";
          return false;
        }
      }
    }
  }
  return true;
}

bool criterion7d(std::ostream& log) {
  FormulaGen gen(sets_theory(), 42);
  int found = 0, attempts = 0;
  while (found < 50 && attempts < 20000) {
    attempts++;
    auto sfs = gen.exercise(2 + gen.below(2), 3, {"x", "y", "z"});
    SearchLimits limits;
    limits.max_apps = 6;
    try {
      SearchResult r = minimal_proofs(sets_rules(), sfs, sets_theory(), limits);
      if (r.minimal_size > 6) continue;
      OracleResult o = oracle_minimal(sets_rules(), sfs, sets_theory(), r.minimal_size);
      std::set<std::string> keys;
      for (const auto& p : r.minimal_proofs) keys.insert(canonical_key(p.tableau));
      if (o.minimal_size != r.minimal_size || o.proof_keys != keys) {
        log << "    FAILED: oracle disagrees on exercise starting " << to_string(sfs.front())
            << " (oracle " << o.minimal_size << ", search " << r.minimal_size << ")\n";
        return false;
      }
      found++;
    } catch (const NotRefuted&) {
    } catch (const InvalidExercise&) {
    }
  }
  if (found < 50) {
    log << "    FAILED: only " << found << " refutable exercises found in " << attempts
        << " attempts\n";
    return false;
  }
  return true;
}

bool criterion7e(std::ostream& log) {
  for (const char* ex : {
           "+ in(x, inter(y, union(w, z)))\n- in(x, union(inter(y, w), z))\n",
           "+ in(x, inter(y, z))\n- in(x, y)\n",
           "+ subseteq(y, z)\n+ in(x, y)\n- in(x, z)\n",
       }) {
    GenerateResult g =
        generate(exercise(ex), sets_rules(), sets_theory(), GenerateMode::Fast, {});
    for (const auto& cs : g.outputs) {
      try {
        Proof again = replay(proof_to_json(cs.witness), sets_rules(), sets_theory());
        if (again.size != cs.witness.size) {
          log << "    FAILED: witness size changed under replay\n";
          return false;
        }
      } catch (const Error& e) {
        log << "    FAILED: witness rejected by replay: " << e.what() << "\n";
        return false;
      }
    }
  }
  return true;
}

const std::vector<Criterion> kCriteria = {
    {"1", "rule extraction golden test (35 rules, Fig. 2 shapes)", 1000, criterion1},
    {"2", "deductive-size reproduction (Fig. 3 = 13, Fig. 4 = 4)", 10000, criterion2},
    {"3", "minimal-proof search (sizes 4 and 3)", 2000, criterion3},
    {"4", "generation reproduction (144 candidates, six sets)", 300000, criterion4},
    {"5", "matching-symbol reproduction", 10000, criterion5},
    {"6", "isomorphism suite (Figs. 4/5/6/8)", 10000, criterion6},
    {"7a", "properties: isomorphism equivalences (1000 samples)", 600000, criterion7a},
    {"7b", "properties: every extracted rule is analytic", 600000, criterion7b},
    {"7c", "properties: RINF forms equisatisfiable with their clauses", 600000, criterion7c},
    {"7d", "properties: search matches the brute-force oracle (50 exercises)", 600000,
     criterion7d},
    {"7e", "properties: every generated witness replays", 600000, criterion7e},
};

}  // namespace

int main(int argc, char** argv) {
  std::string chosen = argc > 1 ? argv[1] : "";
  bool all_ok = true;
  for (const auto& c : kCriteria) {
    if (!chosen.empty() && c.number != chosen) continue;
    std::ostringstream log;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(log);
    } catch (const std::exception& e) {
      log << "    exception: " << e.what() << "\n";
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    bool in_budget = ms <= c.budget_ms;
    std::cout << "criterion " << c.number << ": " << (ok && in_budget ? "PASS" : "FAIL") << " ("
              << ms << " ms) - " << c.title << "\n";
    std::cout << log.str();
    if (!in_budget)
      std::cout << "    exceeded the runtime budget of " << c.budget_ms << " ms\n";
    all_ok &= ok && in_budget;
  }
  return all_ok ? 0 : 1;
}
