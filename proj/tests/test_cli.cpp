// End-to-end tests of the command-line tool, driven through popen. The
// binary path comes from the SPANNER_CLI environment variable set by CTest.

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

std::string cli_path() {
  const char* p = std::getenv("SPANNER_CLI");
  REQUIRE(p != nullptr);
  return p;
}

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/spanner_cli_test_" + name;
  std::ofstream f(path, std::ios::binary);
  f << content;
  return path;
}

}  // namespace

TEST_CASE("extract: the email fixture yields the two records") {
  std::string doc = write_temp("fixture", "a_a@b_b@c");
  CliResult r = run_cli("-e 'x{[^@_]+@[^@_]+}' -f " + doc);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "x:[2,5)\nx:[6,9)\n");

  CliResult c = run_cli("-e 'x{[^@_]+@[^@_]+}' -f " + doc + " --count-only");
  CHECK(c.exit_code == 0);
  CHECK(c.out == "2\n");

  CliResult p = run_cli("-e 'x{[^@_]+@[^@_]+}' -f " + doc + " --format pairs");
  CHECK(p.out == "open:x@2 close:x@5\nopen:x@6 close:x@9\n");

  CliResult j = run_cli("-e 'x{[^@_]+@[^@_]+}' -f " + doc + " --format jsonl");
  CHECK(j.out == "{\"x\":[2,5]}\n{\"x\":[6,9]}\n");
}

TEST_CASE("extract: all engines agree on the fixture") {
  std::string doc = write_temp("fixture2", "a_a@b_b@c");
  std::string base = "-e 'x{[^@_]+@[^@_]+}' -f " + doc + " --count-only --engine ";
  for (const char* engine : {"general", "extended", "oracle"}) {
    CliResult r = run_cli(base + engine);
    INFO(engine);
    CHECK(r.exit_code == 0);
    CHECK(r.out == "2\n");
  }
}

TEST_CASE("extract: empty input, zero results, exit 0") {
  std::string doc = write_temp("empty", "");
  CliResult r = run_cli("-e 'a' -f " + doc);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
}

TEST_CASE("limit stops the stream early") {
  std::string doc = write_temp("limit", std::string(64, 'a'));
  CliResult r = run_cli("-e 'a' -f " + doc + " --limit 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "x:[0,1)\n");
}

TEST_CASE("exit codes: pattern, I/O, and engine-constraint errors") {
  std::string doc = write_temp("codes", "abc");
  CHECK(run_cli("-e 'a{3,2}' -f " + doc).exit_code == 1);
  CHECK(run_cli("-e 'a' -f /does/not/exist").exit_code == 2);
  CHECK(run_cli("-e 'x{a}y{b}' --engine naive -f " + doc).exit_code == 3);
}

TEST_CASE("verify passes on a small document") {
  std::string doc = write_temp("verify", "a_a@b_b@c");
  CliResult r = run_cli("-e 'x{[^@_]+@[^@_]+}' -f " + doc + " --verify --count-only");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "2\n");
}

TEST_CASE("naive engine matches the general engine on synthetic input") {
  CliResult naive = run_cli("-e 'TTAC.{0,20}CACC' --synth 100000 --seed 5 --engine naive");
  CliResult general = run_cli("-e 'TTAC.{0,20}CACC' --synth 100000 --seed 5");
  CHECK(naive.exit_code == 0);
  CHECK_FALSE(naive.out.empty());
  // Same span set; the naive engine emits in (i, j) order, the indexed
  // engine in traversal order, so compare sorted lines.
  auto sort_lines = [](std::string s) {
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos < s.size()) {
      size_t nl = s.find('\n', pos);
      lines.push_back(s.substr(pos, nl - pos));
      pos = nl + 1;
    }
    std::sort(lines.begin(), lines.end());
    return lines;
  };
  CHECK(sort_lines(naive.out) == sort_lines(general.out));
}

TEST_CASE("two runs produce byte-identical output") {
  CliResult a = run_cli("-e 'TTAC.{0,20}CACC' --synth 200000 --seed 9");
  CliResult b = run_cli("-e 'TTAC.{0,20}CACC' --synth 200000 --seed 9");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK_FALSE(a.out.empty());
}

TEST_CASE("bench emits the CSV row and histogram file") {
  std::string hist = "/tmp/spanner_cli_test_hist.csv";
  CliResult r = run_cli("-e 'TTAC.{0,20}CACC' --synth 100000 --seed 5 --bench 3 --histogram " +
                        hist);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("doc_bytes,pattern,") == 0);
  CHECK(r.out.find("100000,\"TTAC.{0,20}CACC\",") != std::string::npos);
  std::ifstream h(hist);
  REQUIRE(h.good());
  std::string header;
  std::getline(h, header);
  CHECK(header == "bucket_lower_ns,count");
  uint64_t total = 0;
  std::string line;
  while (std::getline(h, line)) {
    total += std::stoull(line.substr(line.find(',') + 1));
  }
  // Counts sum to the reported result count.
  size_t p = r.out.find('\n') + 1;
  std::string row = r.out.substr(p);
  size_t after_pattern = row.find("\",") + 2;  // the quoted pattern field
  size_t at = row.find(',', after_pattern) + 1;  // skip preproc_ms
  uint64_t results = std::stoull(row.substr(at));
  CHECK(total == results);
}

TEST_CASE("stdin is the default input") {
  std::string doc = write_temp("stdin", "a_a@b_b@c");
  std::string cmd = "cat " + doc + " | " + cli_path() + " -e 'x{[^@_]+@[^@_]+}' --count-only";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[64] = {0};
  REQUIRE(fgets(buf, sizeof buf, pipe) != nullptr);
  pclose(pipe);
  CHECK(std::string(buf) == "2\n");
}
