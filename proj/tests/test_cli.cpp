#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const char* bin = std::getenv("SIEVEMOMENTS_CLI");
  if (!bin) bin = SIEVEMOMENTS_CLI;
  const std::string cmd = std::string("\"") + bin + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t lines(const std::string& s) {
  std::size_t c = 0;
  for (char ch : s) c += ch == '\n';
  return c;
}

}  // namespace

TEST_CASE("worked values") {
  auto r = run("cmk --m 2 --k 2");
  CHECK(r.code == 0);
  CHECK(r.out == "m,k,value,decimal\r\n2,2,90,90\r\n");
  r = run("moment-int --weight sharp --R 3 --k 1 --format json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["value"] == "1/6");
  CHECK(j[0]["k"] == 1);
  r = run("poly --q 2 --n 2 --m 1 --k 1 --algo brute");
  CHECK(r.code == 0);
  CHECK(r.out.find(",3/2,") != std::string::npos);
  r = run("perm --N 2 --m 1 --k 2");
  CHECK(r.code == 0);
  CHECK(r.out.find(",8,") != std::string::npos);
  r = run("support --R 4 --x 20");
  CHECK(r.code == 0);
  CHECK(r.out.find(",10") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("").code == 2);
  CHECK(run("bogus").code == 2);
  CHECK(run("cmk --m x --k 2").code == 2);
  CHECK(run("cmk --k 2").code == 2);
  CHECK(run("cmk --m 1 --k 2 --format xml").code == 2);
  CHECK(run("moment-int --weight flat --R 10 --k 1").code == 2);
  CHECK(run("poly --q 4 --n 2 --m 1 --k 1").code == 2);
  CHECK(run("char-moment --D -12 --R 10 --k 1").code == 2);
  CHECK(run("cmk --m 1 --k 4").code == 3);
  CHECK(run("perm --N 11 --m 1 --k 1").code == 3);
  CHECK(run("cmk --m 1 --k 2 --sweep q=1,2").code == 2);
  CHECK(run("verify --only 99").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("sweeps and formats") {
  auto r = run("cmk --k 2 --sweep m=1,2,3");
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 4);
  CHECK(r.out.find("3,2,331,331") != std::string::npos);
  r = run("cmk --k 2 --sweep m=1,2,3 --format json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 3);
  CHECK(j[2]["m"] == 3);
  CHECK(j[2]["value"] == "331");
  // the global options may also precede the subcommand
  CHECK(run("--format json cmk --m 2 --k 2").out == run("cmk --m 2 --k 2 --format json").out);
  // quoted CSV fields
  r = run("verify --only 1");
  CHECK(r.out.find("\"c(m,1)=2 and c(m,2) cubic\"") != std::string::npos);
}

TEST_CASE("output file and repeatability") {
  const auto path = std::filesystem::temp_directory_path() / "sievemoments_cli_test.csv";
  std::filesystem::remove(path);
  REQUIRE(run("vk-volume --k 2 --m 8 --samples 200000 --seed 5 --out \"" + path.string() + "\"").code == 0);
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == run("vk-volume --k 2 --m 8 --samples 200000 --seed 5").out);
  CHECK(run("vk-volume --k 2 --m 8 --samples 200000 --seed 5 --threads 1").out ==
        run("vk-volume --k 2 --m 8 --samples 200000 --seed 5 --threads 4").out);
  CHECK(run("moment-empirical --weight power --A 2 --R 20 --k 2 --x 100000 --threads 3").out ==
        run("moment-empirical --weight power --A 2 --R 20 --k 2 --x 100000 --threads 1").out);
  std::filesystem::remove(path);
}

TEST_CASE("verify subcommand") {
  auto r = run("verify --only 1,2,3,5,6");
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 6);
  CHECK(r.out.find("FAIL") == std::string::npos);
  r = run("verify --only 2,3 --mutate-kernel");
  CHECK(r.code == 1);
  CHECK(r.out.find("2,\"Perm") != std::string::npos);
  CHECK(r.out.find(",FAIL,") != std::string::npos);
}
