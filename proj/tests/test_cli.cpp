#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "../vendor/doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "bigframe/instances.hpp"
#include "bigframe/transforms.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string temp_path(const std::string& name) {
  return std::string("bigframe_cli_test_") + name;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string out_path = temp_path("stdout.txt");
  const std::string err_path = temp_path("stderr.txt");
  std::string cmd = env;
  if (!cmd.empty()) cmd += ' ';
  cmd += std::string(BIGFRAME_CLI_PATH) + " " + args + " >" + out_path +
         " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("example + analyze reproduce the expected machine block") {
  const std::string path = temp_path("ex34.bgf");
  RunResult w = run_cli("example 3.4 --out " + path);
  REQUIRE(w.exit_code == 0);

  RunResult a = run_cli("analyze " + path);
  CHECK(a.exit_code == 0);
  CHECK(contains(a.out, "classification=k_bi_g_frame\n"));
  CHECK(contains(a.out, "A_opt=1\n"));
  CHECK(contains(a.out, "B_opt=2\n"));
  CHECK(contains(a.out, "k_rank=1\n"));
  CHECK(contains(a.out, "degenerate_k=false\n"));

  // Determinism: identical invocation, identical bytes.
  RunResult b = run_cli("analyze " + path);
  CHECK(a.out == b.out);

  RunResult bounds = run_cli("bounds " + path);
  CHECK(bounds.exit_code == 0);
  CHECK(contains(bounds.out, "A_opt=1\n"));
  CHECK(contains(bounds.out, "B_opt=2\n"));
  CHECK_FALSE(contains(bounds.out, "classification="));
  std::remove(path.c_str());
}

TEST_CASE("analyze the Parseval fixture") {
  const std::string path = temp_path("ex36.bgf");
  REQUIRE(run_cli("example 3.6 --out " + path).exit_code == 0);
  RunResult a = run_cli("analyze " + path);
  CHECK(a.exit_code == 0);
  CHECK(contains(a.out, "classification=parseval_k_bi_g_frame\n"));
  std::remove(path.c_str());
}

TEST_CASE("generate writes a loadable, reproducible fixture") {
  const std::string path = temp_path("gen.bgf");
  RunResult g = run_cli("generate --dim 6 --members 3 --kind tight --seed 5 --out " +
                        path);
  REQUIRE(g.exit_code == 0);

  bigframe::GeneratorSpec spec;
  spec.ambient_dim = 6;
  spec.family_size = 3;
  spec.kind = bigframe::GeneratorSpec::Kind::tight;
  spec.seed = 5;
  CHECK(slurp(path) == bigframe::serialize(bigframe::random_system(spec)));

  RunResult a = run_cli("analyze " + path);
  CHECK(a.exit_code == 0);
  CHECK(contains(a.out, "classification=tight_k_bi_g_frame\n"));
  std::remove(path.c_str());
}

TEST_CASE("transform swap round-trips through files") {
  const std::string path = temp_path("swap_in.bgf");
  const std::string out = temp_path("swap_out.bgf");
  REQUIRE(run_cli("example 3.4 --out " + path).exit_code == 0);
  RunResult t = run_cli("transform " + path + " --op swap --out " + out);
  REQUIRE(t.exit_code == 0);
  CHECK(slurp(out) ==
        bigframe::serialize(bigframe::swap_families(bigframe::example_3_4())));
  std::remove(path.c_str());
  std::remove(out.c_str());
}

TEST_CASE("verify honors the exit-code contract") {
  RunResult ok = run_cli("verify 3.7 --instances 20 --seed 7");
  CHECK(ok.exit_code == 0);
  CHECK(contains(ok.out, "failed=0\n"));
  CHECK(contains(ok.out, "total=20\n"));

  RunResult bad_tag = run_cli("verify 9.9 --instances 5");
  CHECK(bad_tag.exit_code == 2);
  CHECK(contains(bad_tag.err, "error:"));

  RunResult bad_count = run_cli("verify 3.7 --instances 0");
  CHECK(bad_count.exit_code == 2);
}

TEST_CASE("parse failures exit with code 3 and a line-numbered message") {
  const std::string path = temp_path("trunc.bgf");
  {
    std::ofstream f(path, std::ios::binary);
    f << "bigframe v1\ndim 4\ncount 1\n";
  }
  RunResult a = run_cli("analyze " + path);
  CHECK(a.exit_code == 3);
  CHECK(contains(a.err, "error: parse: line"));
  std::remove(path.c_str());

  RunResult missing = run_cli("analyze does_not_exist.bgf");
  CHECK(missing.exit_code == 1);
  CHECK(contains(missing.err, "error:"));
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("analyze").exit_code == 2);
  CHECK(run_cli("example 7.7").exit_code == 2);
  CHECK(run_cli("frobnicate x").exit_code == 2);
}

TEST_CASE("BIGFRAME_TOL must be a positive decimal") {
  const std::string path = temp_path("tol.bgf");
  REQUIRE(run_cli("example 3.6 --out " + path).exit_code == 0);
  CHECK(run_cli("analyze " + path, "BIGFRAME_TOL=abc").exit_code == 2);
  CHECK(run_cli("analyze " + path, "BIGFRAME_TOL=1e-9").exit_code == 0);
  std::remove(path.c_str());
}
