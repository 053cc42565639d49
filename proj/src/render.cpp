#include "tsprover/render.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace tsprover {

std::string render_rules_text(const RuleSet& rs) {
  std::ostringstream out;
  out << rs.rules.size() << " rule(s)";
  if (!rs.skolem_decls.empty()) {
    out << ", skolem symbols:";
    for (const auto& s : rs.skolem_decls) out << " " << s.name << "/" << s.arity;
  }
  out << "\n";
  for (const auto& r : rs.rules) {
    out << "\n" << r.name << "  (from " << r.source_axiom << ")\n";
    size_t width = 0;
    std::vector<std::string> lines;
    for (size_t i = 0; i < r.premises.size(); i++) {
      std::string line = to_string(r.premises[i]);
      if (r.premises.size() > 1 &&
          std::find(r.main_premises.begin(), r.main_premises.end(), static_cast<int>(i)) !=
              r.main_premises.end())
        line += "   [main]";
      lines.push_back(line);
      width = std::max(width, line.size());
    }
    std::string conclusion = r.is_close() ? "\xe2\x8a\x97" : to_string(*r.conclusion);
    width = std::max(width, conclusion.size());
    for (const auto& l : lines) out << "    " << l << "\n";
    out << "  " << std::string(width + 4, '-') << "\n";
    out << "    " << conclusion << "\n";
  }
  return out.str();
}

std::string render_proof_text(const Proof& p) {
  const Tableau& t = p.tableau;
  auto children_of = compute_children(t);
  std::map<int, const BranchDag*> dag_of_leaf;
  for (const auto& dag : p.dags) dag_of_leaf[dag.leaf] = &dag;

  std::ostringstream out;
  // depth-first walk; indentation grows below each cut
  struct Frame {
    int id;
    int indent;
  };
  std::vector<Frame> stack{{1, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const Node& nd = t.node(f.id);
    int indent = f.indent + (nd.just.kind == Justification::Kind::CutIntro ? 1 : 0);
    out << std::string(static_cast<size_t>(indent) * 2, ' ');
    out << "(" << nd.id << ") " << to_string(nd.sf) << "   ";
    switch (nd.just.kind) {
      case Justification::Kind::Hypothesis:
        out << "[hyp]";
        break;
      case Justification::Kind::RuleApp: {
        out << "via " << nd.just.rule << " [";
        for (size_t i = 0; i < nd.just.premises.size(); i++)
          out << (i ? ", " : "") << nd.just.premises[i];
        out << "]";
        break;
      }
      case Justification::Kind::CutIntro:
        out << "via cut" << sign_char(nd.just.polarity) << " [" << nd.just.license << "]";
        break;
    }
    out << "\n";

    const auto& children = children_of[static_cast<size_t>(f.id - 1)];
    if (children.empty()) {
      const BranchDag* dag = dag_of_leaf.at(f.id);
      out << std::string(static_cast<size_t>(indent) * 2, ' ') << "\xe2\x8a\x97";
      for (int c : dag->closure) out << " (" << c << ")";
      out << "\n";
    } else {
      for (auto it = children.rbegin(); it != children.rend(); ++it)
        stack.push_back({*it, indent});
    }
  }
  return out.str();
}

std::string render_exercise_sentence(const std::vector<SignedFormula>& sfs) {
  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); i++) {
      if (i) out += i + 1 == parts.size() ? " and " : ", ";
      out += parts[i];
    }
    return out;
  };
  std::vector<std::string> givens, goals;
  for (const auto& sf : sfs)
    (sf.sign == Sign::Assert ? givens : goals).push_back(to_string(sf.formula));
  if (givens.empty()) return "Prove that " + join(goals) + ".";
  if (goals.empty()) return "Prove that " + join(givens) + " is contradictory.";
  return "Prove that " + join(givens) + " implies " + join(goals) + ".";
}

std::string render_generate_text(const GenerateResult& g, bool show_proofs) {
  std::ostringstream out;
  out << "input exercise:\n";
  for (const auto& sf : g.input) out << "  " << to_string(sf) << "\n";
  out << "minimal proof size: " << g.minimal_size << "\n";
  out << "candidates considered: " << g.candidates_considered << "\n";
  out << "generated " << g.outputs.size() << " exercise(s)"
      << (g.mode == GenerateMode::Strict ? " (strict)" : "") << ":\n";
  for (size_t i = 0; i < g.outputs.size(); i++) {
    const auto& cs = g.outputs[i];
    out << "\n" << (i + 1) << ". " << render_exercise_sentence(cs.signed_formulas) << "\n";
    for (const auto& sf : cs.signed_formulas) out << "   " << to_string(sf) << "\n";
    if (show_proofs) {
      out << "   witness proof (size " << cs.witness.size << "):\n";
      std::istringstream proof(render_proof_text(cs.witness));
      std::string line;
      while (std::getline(proof, line)) out << "   " << line << "\n";
    }
  }
  return out.str();
}

}  // namespace tsprover
