#include <doctest.h>

#include <array>
#include <cstdio>

#include "support.hpp"

using namespace tsprover;
using namespace testsupport;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(TSPROVER_BIN_DIR) + "/tsprover " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string thy() { return data("sets.thy"); }
std::string exc(const std::string& name) { return data("exercises/" + name); }

}  // namespace

TEST_CASE("extract-rules lists 35 rules and exits cleanly") {
  RunResult r = run_cli("extract-rules " + thy());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("35 rule(s)") != std::string::npos);
  CHECK(r.output.find("+interE1") != std::string::npos);

  RunResult j = run_cli("extract-rules " + thy() + " --format json");
  CHECK(j.exit_code == 0);
  auto parsed = nlohmann::json::parse(j.output);
  CHECK(parsed.at("rules").size() == 35);
}

TEST_CASE("extract-rules rejects broken theories with exit code 1") {
  std::string broken = std::string(TSPROVER_SOURCE_DIR) + "/build/broken_test.thy";
  {
    std::FILE* f = std::fopen(broken.c_str(), "w");
    std::fputs("theory broken\npredicate in 2\norder in < in\n", f);
    std::fclose(f);
  }
  RunResult r = run_cli("extract-rules " + broken);
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("cycle") != std::string::npos);
  std::remove(broken.c_str());
}

TEST_CASE("prove reports sizes and exit codes per contract") {
  RunResult fig4a = run_cli("prove " + thy() + " " + exc("fig4a.exc"));
  CHECK(fig4a.exit_code == 0);
  CHECK(fig4a.output.find("minimal size: 4") != std::string::npos);

  RunResult fig3 = run_cli("prove " + thy() + " " + exc("fig3.exc"));
  CHECK(fig3.exit_code == 0);
  CHECK(fig3.output.find("minimal size: 13") != std::string::npos);

  RunResult sat = run_cli("prove " + thy() + " " + exc("sat.exc") + " --max-apps 5");
  CHECK(sat.exit_code == 2);

  RunResult nocut = run_cli("prove " + thy() + " " + exc("fig3.exc") + " --no-cut --max-apps 6");
  CHECK(nocut.exit_code == 2);
}

TEST_CASE("non-STSNF exercises exit with code 1 and the scope message") {
  std::string bad = std::string(TSPROVER_SOURCE_DIR) + "/build/bad_test.exc";
  {
    std::FILE* f = std::fopen(bad.c_str(), "w");
    std::fputs("+ in(x, y) and in(y, z)\n", f);
    std::fclose(f);
  }
  RunResult r = run_cli("prove " + thy() + " " + bad);
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("outside the scope") != std::string::npos);
  std::remove(bad.c_str());
}

TEST_CASE("generate reproduces the Fig. 5 numbers through the CLI") {
  RunResult r = run_cli("generate " + thy() + " " + exc("fig5.exc") + " --format json");
  CHECK(r.exit_code == 0);
  auto parsed = nlohmann::json::parse(r.output);
  CHECK(parsed.at("candidates_considered") == 144);
  CHECK(parsed.at("outputs").size() == 6);
  CHECK(parsed.at("minimal_size") == 9);
}

TEST_CASE("replay validates the shipped fixtures") {
  RunResult r = run_cli("replay " + thy() + " " + std::string(TSPROVER_SOURCE_DIR) +
                        "/tests/data/fig3.json --format json");
  CHECK(r.exit_code == 0);
  auto parsed = nlohmann::json::parse(r.output);
  CHECK(parsed.at("valid") == true);
  CHECK(parsed.at("size") == 13);
}

TEST_CASE("output bytes are identical across runs and thread flags") {
  for (const std::string cmd : {
           "extract-rules " + thy() + " --format json",
           "prove " + thy() + " " + exc("fig5.exc") + " --all-minimal --format json",
           "generate " + thy() + " " + exc("fig5.exc") + " --format json",
           "generate " + thy() + " " + exc("fig4a.exc"),
       }) {
    RunResult a = run_cli(cmd);
    RunResult b = run_cli(cmd);
    RunResult c = run_cli(cmd + " --threads 4");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output == c.output);
  }
}

TEST_CASE("proof JSON emitted by prove feeds back through replay") {
  RunResult r = run_cli("prove " + thy() + " " + exc("fig4a.exc") + " --format json");
  REQUIRE(r.exit_code == 0);
  auto parsed = nlohmann::json::parse(r.output);
  Proof p = replay(parsed.at("proof"), sets_rules(), sets_theory());
  CHECK(p.size == 4);
}
