#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

#include <sys/wait.h>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(BAP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("count subcommands") {
  auto r = run_cli("count bounded-affine --upto 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "1\n3\n13\n");

  r = run_cli("count bounded-affine --n 4");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "87\n");

  r = run_cli("count bounded-affine --n 0");
  CHECK(r.exit_code == 2);

  r = run_cli("count avoiders --n 3 --patterns 231 --universe bounded-affine");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "10\n");

  r = run_cli("count avoiders --n 4 --patterns 321 --universe ordinary");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "14\n");

  r = run_cli("count avoiders --n 3 --patterns 0x2");
  CHECK(r.exit_code == 2);

  r = run_cli("count bounded-affine --n 12 --method brute");
  CHECK(r.exit_code == 2);  // cap exceeded
}

TEST_CASE("decompose subcommand") {
  auto r = run_cli("decompose --window \"2,7,-2,-1,9,6\" --mode std");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "flat=214536 word=0,1,-1,-1,1,0\n");

  r = run_cli("decompose --window \"2,4,3,1,6,5\" --mode blocks");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "decomposable r=0 pi=243165\n");

  r = run_cli("decompose --window \"2,7,-2,-1,9,6\" --mode blocks");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("indecomposable") == 0);
  CHECK(r.out.find("osc_witness_size=") != std::string::npos);

  r = run_cli("--format json decompose --window \"2,4,3,1,6,5\" --mode blocks");
  CHECK(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("status") == "decomposable");
  CHECK(doc.at("pi") == "243165");

  r = run_cli("decompose --window \"3,3\"");
  CHECK(r.exit_code == 2);

  r = run_cli("decompose --window \"1,4\"");
  CHECK(r.exit_code == 2);

  r = run_cli("decompose --window \"2,1\" --size 3");
  CHECK(r.exit_code == 2);

  r = run_cli("decompose --window \"2,1\" --size 2 --mode std");
  CHECK(r.exit_code == 0);
}

TEST_CASE("series subcommands") {
  auto r = run_cli("series affine --class catalan --terms 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "1\n3\n10\n");

  r = run_cli("series affine --class layered --terms 4");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "1\n3\n7\n15\n");

  r = run_cli("series classify --class catalan --terms 64");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("subcritical tau=1/2") != std::string::npos);

  r = run_cli("series classify --class layered --terms 64");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("supercritical") != std::string::npos);
  CHECK(r.out.find("rho=1/2") != std::string::npos);

  r = run_cli("series classify --class nonsense --terms 64");
  CHECK(r.exit_code == 2);

  r = run_cli("series affine --class file:does_not_exist.json --terms 4");
  CHECK(r.exit_code == 2);

  r = run_cli("series diagnose --target enasym --terms 24");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("sqrt_m_q_m") != std::string::npos);
}

TEST_CASE("identical invocations give identical bytes") {
  const std::string cmd = "series classify --class separable --terms 48";
  const auto a = run_cli(cmd);
  const auto b = run_cli(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("csv and json outputs") {
  auto r = run_cli("--format csv count bounded-affine --upto 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "n,bounded_affine_count\n1,1\n2,3\n");

  r = run_cli("--format csv series classify --class catalan --terms 32");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("key,value\n") == 0);
  CHECK(r.out.find("tau,1/2") != std::string::npos);

  r = run_cli("--format csv series diagnose --target enasym --terms 16");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("sequence,n,value,target\n") == 0);

  r = run_cli("--format json count bounded-affine --upto 3");
  CHECK(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("sequence").size() == 3);
  CHECK(doc.at("sequence")[2].at("value") == "13");
  // round trip: parse(print(x)) reprints identically
  CHECK(nlohmann::json::parse(doc.dump()) == doc);

  r = run_cli("--format json series classify --class catalan --terms 32");
  CHECK(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(r.out);
  CHECK(rep.at("classification") == "subcritical");
  CHECK(rep.at("tau") == "1/2");
  CHECK(nlohmann::json::parse(rep.dump()) == rep);

  r = run_cli("--format json series diagnose --target subcritical --class catalan --terms 64");
  CHECK(r.exit_code == 0);
  const auto diag = nlohmann::json::parse(r.out);
  CHECK(diag.at("sequences").size() == 3);
  CHECK(nlohmann::json::parse(diag.dump()) == diag);
}
