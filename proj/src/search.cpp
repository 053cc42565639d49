#include "tsprover/search.hpp"

#include <algorithm>
#include <unordered_set>

namespace tsprover {

namespace {

struct PairHash {
  size_t operator()(const std::pair<uint64_t, uint64_t>& p) const {
    return static_cast<size_t>(p.first ^ (p.second * 0x9e3779b97f4a7c15ull));
  }
};

class Searcher {
public:
  Searcher(const RuleSet& rs, const std::vector<SignedFormula>& sf_set, const Theory& th,
           const SearchLimits& limits, bool first_only)
      : rs_(rs), limits_(limits), first_only_(first_only) {
    start_ = std::chrono::steady_clock::now();
    frontier_.push_back(init_tableau(sf_set, th));
    remember(frontier_.back());
    if (tableau_closed(frontier_.back())) {
      consider(frontier_.back());
      frontier_.clear();
    }
    stats_.states_per_level.push_back(1);
  }

  SearchResult run() {
    int level = 0;
    while (!frontier_.empty()) {
      level++;
      if (level > effective_cap()) break;
      check_budget();
      std::vector<Tableau> next;
      for (const Tableau& state : frontier_) expand(state, next);
      stats_.states_per_level.push_back(static_cast<long long>(next.size()));
      frontier_ = std::move(next);
      if (first_only_ && !proofs_.empty()) break;
    }
    if (proofs_.empty()) {
      bool saturated = frontier_.empty();
      throw NotRefuted(saturated ? "exercise not refuted: rule applications saturated "
                                   "without closing the tableau"
                                 : "exercise not refuted within the application cap of " +
                                       std::to_string(limits_.max_apps),
                       saturated);
    }
    std::sort(proofs_.begin(), proofs_.end(), [](const Proof& a, const Proof& b) {
      return canonical_key(a.tableau) < canonical_key(b.tableau);
    });
    return {std::move(proofs_), best_size_, std::move(stats_)};
  }

private:
  int effective_cap() const {
    if (best_size_ < 0) return limits_.max_apps;
    return std::min(limits_.max_apps, best_size_);
  }

  void check_budget() const {
    if (!limits_.budget) return;
    if (std::chrono::steady_clock::now() - start_ > *limits_.budget)
      throw NotRefuted("exercise not refuted within the wall-clock budget", false);
  }

  bool remember(const Tableau& t) { return visited_.insert(canonical_digest(t)).second; }

  void expand(const Tableau& state, std::vector<Tableau>& next) {
    // adding a node raises the bound, so once the state sits at the bound the
    // only useful children are CLOSE firings
    bool close_only = best_size_ >= 0 && lower_bound(state) + 1 > best_size_;
    for (int leaf : state.leaves) {
      if (branch_closed(state, leaf)) continue;
      for (const auto& inst : applicable_linear_instances(state, leaf, rs_, close_only))
        step(apply(state, inst, rs_), next);
      if (limits_.use_cut && !close_only)
        for (const auto& inst : applicable_cut_instances(state, leaf, rs_))
          step(apply(state, inst), next);
    }
  }

  void step(Tableau&& child, std::vector<Tableau>& next) {
    if (best_size_ >= 0 && lower_bound(child) > best_size_) {
      stats_.pruned++;
      return;
    }
    if (!remember(child)) {
      stats_.dedup_hits++;
      return;
    }
    if (tableau_closed(child)) {
      consider(child);
      return;
    }
    next.push_back(std::move(child));
  }

  // Any clean proof extending the state keeps every derived node in some
  // branch DAG, and each branch DAG holds its closure marker plus at least
  // one hypothesis.
  static int lower_bound(const Tableau& t) {
    int derived = static_cast<int>(t.nodes.size()) - t.hypothesis_count();
    return derived + 2 * static_cast<int>(t.leaves.size());
  }

  void consider(const Tableau& t) {
    Proof p = make_proof(t);
    if (!is_clean(p)) return;
    if (best_size_ < 0 || p.size < best_size_) {
      best_size_ = p.size;
      proofs_.clear();
      proofs_.push_back(std::move(p));
    } else if (p.size == best_size_) {
      proofs_.push_back(std::move(p));
    }
  }

  const RuleSet& rs_;
  SearchLimits limits_;
  bool first_only_;
  std::chrono::steady_clock::time_point start_;
  std::vector<Tableau> frontier_;
  std::unordered_set<std::pair<uint64_t, uint64_t>, PairHash> visited_;
  std::vector<Proof> proofs_;
  int best_size_ = -1;
  SearchStats stats_;
};

}  // namespace

SearchResult minimal_proofs(const RuleSet& rs, const std::vector<SignedFormula>& sf_set,
                            const Theory& th, const SearchLimits& limits) {
  return Searcher(rs, sf_set, th, limits, false).run();
}

Proof prove_once(const RuleSet& rs, const std::vector<SignedFormula>& sf_set, const Theory& th,
                 const SearchLimits& limits) {
  SearchResult res = Searcher(rs, sf_set, th, limits, true).run();
  return res.minimal_proofs.front();
}

}  // namespace tsprover
