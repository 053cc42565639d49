#pragma once

#include <json.hpp>

#include "tsprover/isogen.hpp"

namespace tsprover {

struct ReplayError : Error {
  ReplayError(const std::string& msg, int node_id = 0)
      : Error(node_id ? "node " + std::to_string(node_id) + ": " + msg : msg),
        node_id(node_id) {}
  int node_id;
};

nlohmann::json proof_to_json(const Proof& p);

/// Re-checks every justification of a serialized proof (rule matching, cut
/// licensing, branch structure, regularity, closures) and recomputes the
/// deductive size; throws ReplayError on the first offending node.
Proof replay(const nlohmann::json& j, const RuleSet& rs, const Theory& th);
Proof replay_file(const std::string& path, const RuleSet& rs, const Theory& th);

nlohmann::json rule_set_to_json(const RuleSet& rs);
RuleSet rule_set_from_json(const nlohmann::json& j, const Theory& th);

nlohmann::json generate_result_to_json(const GenerateResult& g, bool include_witnesses);
nlohmann::json search_result_to_json(const SearchResult& r, bool all);

}  // namespace tsprover
