#pragma once

#include <string>

#include "tsprover/isogen.hpp"

namespace tsprover {

/// Fig. 2-like listing: premises above a bar, conclusion below.
std::string render_rules_text(const RuleSet& rs);

/// Numbered-node style with "via RULE [ids]" annotations and a closure marker
/// under each closed branch.
std::string render_proof_text(const Proof& p);

/// "Prove that ... implies ..." sentence for an exercise.
std::string render_exercise_sentence(const std::vector<SignedFormula>& sfs);

std::string render_generate_text(const GenerateResult& g, bool show_proofs);

}  // namespace tsprover
