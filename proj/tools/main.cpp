#include <CLI11.hpp>
#include <iostream>

#include "tsprover/json_io.hpp"
#include "tsprover/render.hpp"

using namespace tsprover;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitBudget = 2;

struct CommonOpts {
  std::string format = "text";
  int threads = 1;  // accepted for interface stability; output is identical
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--threads", opts.threads, "Worker threads (no effect on output bytes)");
}

void emit_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int run_extract(const std::string& theory_path, const CommonOpts& opts) {
  Theory th = parse_theory_file(theory_path);
  RuleSet rs = extract_rules(th);
  if (opts.format == "json")
    emit_json(rule_set_to_json(rs));
  else
    std::cout << render_rules_text(rs);
  return kExitOk;
}

int run_prove(const std::string& theory_path, const std::string& exercise_path, bool all_minimal,
              int max_apps, bool no_cut, const CommonOpts& opts) {
  Theory th = parse_theory_file(theory_path);
  RuleSet rs = extract_rules(th);
  auto exercise = parse_exercise_file(exercise_path, th);
  SearchLimits limits;
  limits.max_apps = max_apps;
  limits.use_cut = !no_cut;
  SearchResult res = minimal_proofs(rs, exercise, th, limits);
  if (opts.format == "json") {
    emit_json(search_result_to_json(res, all_minimal));
  } else {
    std::cout << "minimal size: " << res.minimal_size << "\n";
    size_t shown = all_minimal ? res.minimal_proofs.size() : 1;
    for (size_t i = 0; i < shown; i++) {
      std::cout << "proof " << (i + 1) << " of " << res.minimal_proofs.size() << ":\n"
                << render_proof_text(res.minimal_proofs[i]);
    }
  }
  return kExitOk;
}

int run_generate(const std::string& theory_path, const std::string& exercise_path,
                 const std::string& mode, int max_apps, bool show_proofs,
                 const CommonOpts& opts) {
  Theory th = parse_theory_file(theory_path);
  RuleSet rs = extract_rules(th);
  auto exercise = parse_exercise_file(exercise_path, th);
  SearchLimits limits;
  limits.max_apps = max_apps;
  GenerateMode gm = mode == "strict" ? GenerateMode::Strict : GenerateMode::Fast;
  GenerateResult res = generate(exercise, rs, th, gm, limits);
  if (opts.format == "json")
    emit_json(generate_result_to_json(res, show_proofs));
  else
    std::cout << render_generate_text(res, show_proofs);
  return kExitOk;
}

int run_replay(const std::string& theory_path, const std::string& proof_path,
               const CommonOpts& opts) {
  Theory th = parse_theory_file(theory_path);
  RuleSet rs = extract_rules(th);
  Proof p = replay_file(proof_path, rs, th);
  if (opts.format == "json") {
    emit_json({{"valid", true},
               {"size", p.size},
               {"branches", p.dags.size()},
               {"clean", is_clean(p)}});
  } else {
    std::cout << "valid proof: size " << p.size << ", " << p.dags.size() << " branch(es), "
              << (is_clean(p) ? "clean" : "not clean") << "\n"
              << render_proof_text(p);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Theory-specific tableau rule extraction, minimal-proof search and "
               "exercise generation"};
  app.require_subcommand(1);

  std::string theory_path, exercise_path, proof_path;
  CommonOpts opts;
  bool all_minimal = false, no_cut = false, show_proofs = false;
  int max_apps = 64;
  std::string mode = "fast";

  CLI::App* extract = app.add_subcommand("extract-rules", "Extract the theory-specific rules");
  extract->add_option("theory", theory_path, "Theory file")->required();
  add_common(extract, opts);

  CLI::App* prove = app.add_subcommand("prove", "Search for minimal proofs of an exercise");
  prove->add_option("theory", theory_path, "Theory file")->required();
  prove->add_option("exercise", exercise_path, "Exercise file")->required();
  prove->add_flag("--all-minimal", all_minimal, "Print every minimal proof");
  prove->add_option("--max-apps", max_apps, "Cap on rule applications");
  prove->add_flag("--no-cut", no_cut, "Disable the cut rule");
  add_common(prove, opts);

  CLI::App* gen = app.add_subcommand("generate", "Generate exercises of comparable complexity");
  gen->add_option("theory", theory_path, "Theory file")->required();
  gen->add_option("exercise", exercise_path, "Exercise file")->required();
  gen->add_option("--mode", mode, "fast: replay witnesses only; strict: re-verify minimality")
      ->check(CLI::IsMember({"fast", "strict"}));
  gen->add_option("--max-apps", max_apps, "Cap on rule applications");
  gen->add_flag("--show-proofs", show_proofs, "Include witness proofs in the output");
  add_common(gen, opts);

  CLI::App* rep = app.add_subcommand("replay", "Validate a serialized proof");
  rep->add_option("theory", theory_path, "Theory file")->required();
  rep->add_option("proof", proof_path, "Proof JSON file")->required();
  add_common(rep, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract->parsed()) return run_extract(theory_path, opts);
    if (prove->parsed())
      return run_prove(theory_path, exercise_path, all_minimal, max_apps, no_cut, opts);
    if (gen->parsed())
      return run_generate(theory_path, exercise_path, mode, max_apps, show_proofs, opts);
    if (rep->parsed()) return run_replay(theory_path, proof_path, opts);
  } catch (const NotRefuted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
