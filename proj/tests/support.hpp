#pragma once

#include <string>

#include "tsprover/isogen.hpp"
#include "tsprover/json_io.hpp"

namespace testsupport {

inline std::string source_dir() { return TSPROVER_SOURCE_DIR; }
inline std::string data(const std::string& rel) { return source_dir() + "/data/" + rel; }
inline std::string fixture(const std::string& rel) {
  return source_dir() + "/tests/data/" + rel;
}

inline const tsprover::Theory& sets_theory() {
  static tsprover::Theory th = tsprover::parse_theory_file(data("sets.thy"));
  return th;
}

inline const tsprover::RuleSet& sets_rules() {
  static tsprover::RuleSet rs = tsprover::extract_rules(sets_theory());
  return rs;
}

inline std::vector<tsprover::SignedFormula> exercise(const std::string& text) {
  return tsprover::parse_exercise(text, sets_theory());
}

inline const tsprover::Rule& rule_named(const std::string& name) {
  for (const auto& r : sets_rules().rules)
    if (r.name == name) return r;
  throw tsprover::Error("no rule named " + name);
}

inline int rule_index(const std::string& name) {
  const auto& rules = sets_rules().rules;
  for (size_t i = 0; i < rules.size(); i++)
    if (rules[i].name == name) return static_cast<int>(i);
  throw tsprover::Error("no rule named " + name);
}

}  // namespace testsupport
