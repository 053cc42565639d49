#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsprover/extraction.hpp"

namespace tsprover {

struct InvalidExercise : Error {
  using Error::Error;
};

struct Justification {
  enum class Kind { Hypothesis, RuleApp, CutIntro };
  Kind kind = Kind::Hypothesis;
  std::string rule;           // RuleApp
  std::vector<int> premises;  // RuleApp: node ids, in rule premise order
  int license = 0;            // CutIntro
  Sign polarity = Sign::Assert;
};

struct Node {
  int id = 0;
  SignedFormula sf;
  Justification just;
  int parent = 0;  // 0 = first node
};

/// A branch closed by firing a CLOSE rule records which rule and premise did it.
struct CloseFiring {
  std::string rule;
  std::vector<int> premises;
};

/// Persistent tableau value: applying a rule returns a new tableau that
/// shares the existing (immutable) nodes. Only cut applications branch; each
/// node has at most two children.
struct Tableau {
  std::vector<std::shared_ptr<const Node>> nodes;  // ids are 1-based indices
  std::vector<int> leaves;                         // branch order, left to right
  std::map<int, CloseFiring> firings;              // leaf id -> firing

  const Node& node(int id) const { return *nodes[static_cast<size_t>(id - 1)]; }
  int hypothesis_count() const;
  /// Node ids from the root down to `leaf`.
  std::vector<int> branch(int leaf) const;
};

/// Child lists derived from the parent links (index 0 holds node 1's children).
std::vector<std::vector<int>> compute_children(const Tableau& t);

Tableau init_tableau(const std::vector<SignedFormula>& sf_set, const Theory& th);

struct LinearInstance {
  int leaf = 0;
  int rule = 0;  // index into RuleSet::rules
  std::vector<int> premise_nodes;
  SignedFormula conclusion;  // unused for CLOSE instances
  bool is_close = false;
};

struct CutInstance {
  int leaf = 0;
  TSFormula formula;
  int license_node = 0;
};

/// All rule instances applicable on the branch of `leaf`, CLOSE instances
/// first. Instances whose conclusion already occurs on the branch are
/// omitted (regularity). Empty when the branch is closed. `close_only`
/// restricts the scan to CLOSE rules.
std::vector<LinearInstance> applicable_linear_instances(const Tableau& t, int leaf,
                                                        const RuleSet& rs,
                                                        bool close_only = false);

/// Admissible cut formulas on the branch of `leaf`: instantiated minor
/// co-premises of nodes matching a main premise. Duplicate formulas are
/// collapsed onto the smallest license node; formulas already present with
/// either polarity are omitted.
std::vector<CutInstance> applicable_cut_instances(const Tableau& t, int leaf,
                                                  const RuleSet& rs);

Tableau apply(const Tableau& t, const LinearInstance& app, const RuleSet& rs);
Tableau apply(const Tableau& t, const CutInstance& app);

bool branch_closed(const Tableau& t, int leaf);
bool tableau_closed(const Tableau& t);

/// Minimal justification DAG of one closed branch: the chosen closure nodes
/// and every node reachable from them through justification edges. The
/// recorded size includes the closure marker.
struct BranchDag {
  int leaf = 0;
  std::vector<int> closure;  // two conjugate nodes, or one CLOSE premise
  std::vector<int> nodes;    // sorted, distinct; excludes the marker
  int size() const { return static_cast<int>(nodes.size()) + 1; }
};

struct Proof {
  Tableau tableau;
  std::vector<BranchDag> dags;  // one per leaf, in branch order
  int size = 0;
};

/// Chooses the minimum-size justification DAG per branch (ties broken by the
/// smallest closure node ids) and computes the deductive size.
Proof make_proof(const Tableau& t);

int deductive_size(const Proof& p);

/// Every rule-derived and cut node appears in some branch's minimal DAG;
/// hypotheses are exempt.
bool is_clean(const Proof& p);

/// Branch-content serialization: equal keys identify tableaux that differ
/// only in the interleaving order across branches.
std::string canonical_key(const Tableau& t);

/// 128-bit digest of the canonical key, computed without materializing it.
std::pair<uint64_t, uint64_t> canonical_digest(const Tableau& t);

}  // namespace tsprover
