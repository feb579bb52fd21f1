#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "quermass/body_spec.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = QUERMASS_CLI_PATH;

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args, bool merge_stderr = false) {
  const std::string cmd =
      kCli + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  const int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() /
                 ("quermass_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f << text;
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("compute endpoints and the unit ball") {
  const std::string cube =
      write_file("cube.json", "{\"type\":\"cube\",\"dim\":3,\"side\":1}");
  auto r = run("compute --bodies " + cube + " -j 3");
  CHECK(r.status == 0);
  CHECK(r.out ==
        "{\"value\":1,\"std_error\":0,\"samples\":0,\"n\":3,\"j\":3,"
        "\"seed\":0}\n");

  const std::string ball =
      write_file("ball.json", "{\"type\":\"ball\",\"dim\":3,\"radius\":1}");
  auto b = run("compute --bodies " + ball + " -j 2 --samples 50");
  CHECK(b.status == 0);
  CHECK(b.out.find("\"value\":4.1887902047863914") != std::string::npos);
  CHECK(b.out.find("\"std_error\":0,") != std::string::npos);
}

TEST_CASE("compute is deterministic, also across thread counts") {
  auto gen = run("gen --out " + (scratch_dir() / "rand.json").string() +
                 " --random --dim 3 --vertices 9 --seed 4");
  REQUIRE(gen.status == 0);
  const std::string body = (scratch_dir() / "rand.json").string();
  const std::string flags = "compute --bodies " + body + " -j 2 --samples 600";
  auto a = run(flags);
  auto b = run(flags);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  auto t1 = run(flags + " --threads 1");
  auto t4 = run(flags + " --threads 4");
  CHECK(t1.out == a.out);
  CHECK(t4.out == a.out);
}

TEST_CASE("compute variants and csv") {
  const std::string body = (scratch_dir() / "rand.json").string();
  const std::string other = (scratch_dir() / "rand2.json").string();
  REQUIRE(run("gen --out " + other + " --random --dim 3 --vertices 8 --seed 5")
              .status == 0);

  auto mixed = run("compute --bodies " + body + "," + other + " --samples 200");
  CHECK(mixed.status == 0);
  CHECK(mixed.out.find("\"j\":2") != std::string::npos);

  auto pair =
      run("compute --bodies " + body + "," + other + " --pair -j 2 --samples 200");
  CHECK(pair.status == 0);

  auto ith = run("compute --bodies " + body + " --ith 1 -j 2 --samples 200 "
                 "--ball-points 32");
  CHECK(ith.status == 0);

  auto csv = run("compute --bodies " + body + " -j 2 --samples 100 --format csv");
  CHECK(csv.status == 0);
  CHECK(csv.out.rfind("value,std_error,samples,n,j,seed\n", 0) == 0);

  // -j disagreeing with the file count is a usage error
  auto bad = run("compute --bodies " + body + "," + other + " -j 3", true);
  CHECK(bad.status == 2);
}

TEST_CASE("verify suites") {
  auto ok = run("verify --suite minkowski --instances 2 --samples 300 --seed 7");
  CHECK(ok.status == 0);
  CHECK(std::count(ok.out.begin(), ok.out.end(), '\n') == 2);

  auto hom = run(
      "verify --suite minkowski --instances 1 --samples 300 --seed 7 "
      "--homothetic");
  CHECK(hom.status == 0);
  CHECK(hom.out.find("\"equality_expected\":true") != std::string::npos);
  CHECK(hom.out.find("\"satisfied\":true") != std::string::npos);

  auto csv = run(
      "verify --suite product --instances 2 --samples 300 --seed 3 "
      "--format csv");
  CHECK(csv.status == 0);
  CHECK(csv.out.rfind("suite,instance,lhs,rhs,margin,noise_bound,satisfied,"
                      "equality_expected,n,j,r,i,epsilon,samples,seed\n",
                      0) == 0);

  auto again = run(
      "verify --suite product --instances 2 --samples 300 --seed 3 "
      "--format csv");
  CHECK(again.out == csv.out);

  auto bad_eps = run("verify --suite bm --epsilon -1 --instances 1", true);
  CHECK(bad_eps.status == 2);
}

TEST_CASE("oracle checks") {
  auto mv = run("oracle --check mixedvol --samples 3");
  CHECK(mv.status == 0);
  CHECK(mv.out.find("\"pass\":true") != std::string::npos);

  auto haar = run("oracle --check haar --samples 20000");
  CHECK(haar.status == 0);

  auto p2 = run("oracle --check phi2d --samples 600");
  CHECK(p2.status == 0);

  auto unknown = run("oracle --check nope", true);
  CHECK(unknown.status == 2);
}

TEST_CASE("gen") {
  const std::string out = (scratch_dir() / "gen.json").string();
  auto a = run("gen --out " + out + " --random --dim 3 --vertices 10 --seed 1");
  CHECK(a.status == 0);
  const std::string bytes = read_file(out);
  CHECK(bytes.find("\"type\":\"vertices\"") != std::string::npos);
  CHECK_NOTHROW(quermass::load_body_file(out));

  auto b = run("gen --out " + out + " --random --dim 3 --vertices 10 --seed 1");
  CHECK(b.status == 0);
  CHECK(read_file(out) == bytes);

  auto zero = run("gen --out " + out + " --random --dim 0 --vertices 5 --seed 1",
                  true);
  CHECK(zero.status == 2);

  auto ball = run("gen --out " + out + " --ball --dim 2 --radius 1.5");
  CHECK(ball.status == 0);
  CHECK(read_file(out) ==
        "{\"type\":\"ball\",\"dim\":2,\"radius\":1.5}\n");
}

TEST_CASE("usage and validation errors") {
  auto r = run("compute", true);
  CHECK(r.status == 2);

  auto unknown_flag = run("compute --nope", true);
  CHECK(unknown_flag.status == 2);

  const std::string bad =
      write_file("bad.json", "{\"type\":\"dodecahedron\",\"dim\":3}");
  auto bad_type = run("compute --bodies " + bad + " -j 2", true);
  CHECK(bad_type.status == 2);
  CHECK(bad_type.out.find("dodecahedron") != std::string::npos);

  auto missing = run("compute --bodies /nonexistent.json -j 2", true);
  CHECK(missing.status == 2);

  auto no_j = run("compute --bodies " +
                      write_file("c2.json",
                                 "{\"type\":\"cube\",\"dim\":3,\"side\":1}") +
                      " ",
                  true);
  CHECK(no_j.status == 2);

  // degenerate body: computational error, distinct status
  const std::string flat = write_file(
      "flat.json",
      "{\"type\":\"vertices\",\"dim\":3,\"points\":[[0,0,0],[1,0,0],[0,1,0],"
      "[1,1,0]]}");
  auto degen = run("compute --bodies " + flat + " -j 2 --samples 50", true);
  CHECK(degen.status == 1);

  auto help = run("--help");
  CHECK(help.status == 0);
}
