#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result ftgr(const std::string& args) {
  const std::string cmd = std::string(FTGR_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::size_t k = std::fread(buf, 1, sizeof buf, p))
    r.out.append(buf, k);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path golden(const std::string& name) { return fs::path(FTGR_GOLDEN_DIR) / name; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ftgr_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("realize exit statuses") {
  auto r = ftgr("realize 2 2 2");
  CHECK(r.status == 0);
  CHECK(r.out == "1-2 1-3 2-3\n");
  r = ftgr("realize 3 3 3 1");
  CHECK(r.status == 1);
  CHECK(r.out == "unrealizable\n");
  CHECK(ftgr("realize 2 x").status == 2);
  CHECK(ftgr("realize -- -1").status == 2);
  CHECK(ftgr("bogus").status == 2);
}

TEST_CASE("realize from a degree file") {
  const auto p = scratch("deg.txt");
  std::ofstream(p) << "2 2\n2 2\n";
  const auto r = ftgr("realize --degree-file " + p.string());
  CHECK(r.status == 0);
  CHECK(r.out == "1-2 1-3 2-4 3-4\n");
}

TEST_CASE("simulate fault-free summary") {
  const auto r = ftgr("simulate --n 4 --degrees 1,1,1,1");
  CHECK(r.status == 0);
  CHECK(r.out.find("rounds 3\n") != std::string::npos);
  CHECK(r.out.find("messages 27\n") != std::string::npos);
  CHECK(r.out.find("u4 exit  D'={1:1,2:1,3:1,4:1}  verdict=1-2 3-4\n") != std::string::npos);
}

TEST_CASE("scripted run matches the golden summary and trace") {
  const auto trace = scratch("handover.trace.jsonl");
  const auto r = ftgr("simulate --n 4 --degrees 1,1,1,1 --f 2 --seed 1 --plan-file " +
                      golden("handover.plan").string() + " --trace " + trace.string());
  CHECK(r.status == 0);
  CHECK(r.out == slurp(golden("handover.summary.txt")));
  CHECK(slurp(trace) == slurp(golden("handover.trace.jsonl")));
}

TEST_CASE("replay") {
  SUBCASE("a fresh trace replays identically") {
    const auto r = ftgr("replay " + golden("handover.trace.jsonl").string());
    CHECK(r.status == 0);
    CHECK(r.out == "identical\n");
  }
  SUBCASE("a corrupted round is reported") {
    auto text = slurp(golden("handover.trace.jsonl"));
    const auto at = text.find("\"round\":7");
    REQUIRE(at != std::string::npos);
    const auto s4 = text.find("S4", at);
    text.replace(s4, 2, "S3");
    const auto p = scratch("corrupt.jsonl");
    std::ofstream(p) << text;
    const auto r = ftgr("replay " + p.string());
    CHECK(r.status == 1);
    CHECK(r.out.rfind("divergence at round 7", 0) == 0);
  }
  SUBCASE("model mismatch") {
    const auto p = scratch("ncc.jsonl");
    REQUIRE(ftgr("simulate --n 8 --model ncc --trace " + p.string()).status == 0);
    CHECK(ftgr("replay " + p.string()).status == 0);
    const auto r = ftgr("replay --model cc " + p.string());
    CHECK(r.status == 2);
    CHECK(r.out.find("model") != std::string::npos);
  }
  SUBCASE("version mismatch") {
    auto text = slurp(golden("handover.trace.jsonl"));
    text.replace(text.find("\"version\":1"), 11, "\"version\":9");
    const auto p = scratch("v9.jsonl");
    std::ofstream(p) << text;
    CHECK(ftgr("replay " + p.string()).status == 2);
  }
  SUBCASE("missing file") { CHECK(ftgr("replay /nonexistent/trace.jsonl").status == 2); }
}

TEST_CASE("sweep writes the csv schema") {
  const auto p = scratch("sweep.csv");
  const auto r = ftgr("sweep --n 4,8 --f 0 --adversary none --seeds 2 --out " + p.string());
  CHECK(r.status == 0);
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "n,f,model,adversary,seed,rounds,messages,crashes,allokay_senders,max_active,max_send,"
        "max_receive,dropped,agreement_ok,validity_ok,monitors_ok,verdict");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    ++rows;
    CHECK(line.find(",cc,none,") != std::string::npos);
    std::stringstream ss(line);
    std::string cell;
    for (int i = 0; i < 6; ++i)
      std::getline(ss, cell, ',');
    CHECK(cell == "3");
  }
  CHECK(rows == 4);
  CHECK(ftgr("sweep --n 4 --adversary bogus --out " + p.string()).status == 2);
}

TEST_CASE("verify passes and catches a mutant") {
  auto r = ftgr("verify --n 3 --f 1");
  CHECK(r.status == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  r = ftgr("verify --n 4 --f 2 --mutant heard-once");
  CHECK(r.status == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
  CHECK(ftgr("verify --n 5 --f 1").status == 2);
}
