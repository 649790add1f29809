#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#ifndef CUCKOO_RW_CLI
#error "CUCKOO_RW_CLI must point at the cuckoo-rw binary"
#endif

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CUCKOO_RW_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("thresholds prints a JSON object") {
  const auto r = run("thresholds --k 3 --format json");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"k", "xi_star", "c_star", "lambda_k", "walk_exponent"}) CHECK(j.contains(key));
  CHECK(j["c_star"].get<double>() > 0.917);
  CHECK(j["c_star"].get<double>() < 0.918);
}

TEST_CASE("configuration errors exit with status 2") {
  CHECK(run("thresholds --k 2").status == 2);
  CHECK(run("nonsense --k 3").status == 2);
  CHECK(run("scan --k 3 --n 100").status == 2);  // no load given
  CHECK(run("scan --k 3 --n 100 --c 0.5 --c-grid 0.1:0.2:0.1").status == 2);
  CHECK(run("scan --k 3 --n 100 --c 1.5").status == 2);
  CHECK(run("scan --k 3 --n 100 --c 0.5 --format xml").status == 2);
  CHECK(run("scan --config /nonexistent/config.json").status == 2);
  CHECK(run("audit --k 3 --n 100 --c 0.5 --delta 1.5").status == 2);
}

TEST_CASE("output file, config file and flag override") {
  {
    std::ofstream cfg("cli_test_config.json");
    cfg << R"({"k": 3, "n": 3000, "c_grid": "0.85:0.95:0.05", "trials": 4, "seed": 5})";
  }
  REQUIRE(run("scan --config cli_test_config.json --out cli_a.csv").status == 0);
  REQUIRE(run("scan --config cli_test_config.json --out cli_b.csv --threads 2").status == 0);
  const std::string a = slurp("cli_a.csv");
  CHECK(a.rfind("k,n,c,trials,", 0) == 0);
  CHECK(a == slurp("cli_b.csv"));
  // Flags override file values.
  const auto r = run("scan --config cli_test_config.json --n 1000 --trials 2 --out -");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("\n3,1000,0.85,2,") != std::string::npos);
}

TEST_CASE("fixtures replay through every hypergraph experiment") {
  {
    std::ofstream fx("cli_fixture.txt");
    fx << "8 3 3\n0 1 2\n2 3 4\n4 5 0\n";
  }
  for (const char* kind : {"scan", "core", "audit"}) {
    CAPTURE(kind);
    const auto r = run(std::string(kind) + " --fixture cli_fixture.txt --format json");
    REQUIRE(r.status == 0);
    CHECK(nlohmann::json::parse(r.out).size() == 1);
  }
}
