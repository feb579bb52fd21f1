// Acceptance suite: runs every gate criterion at its pinned tolerance and
// prints one pass/fail line per criterion. Expects the CLI binary path as
// argv[1] for the determinism checks.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "quermass/mixed_volume.hpp"
#include "quermass/quermassintegrals.hpp"
#include "quermass/rng.hpp"
#include "quermass/verify.hpp"

using namespace quermass;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int num, const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %d. %s%s%s\n", ok ? "PASS" : "FAIL", num, name,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string run_cmd(const std::string& cmd, int* status) {
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) {
    *status = -1;
    return {};
  }
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
  const int rc = pclose(pipe);
  *status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

// 1. Endpoint and unit-ball identities hold exactly.
void criterion_1() {
  bool ok = true;
  const Body ball = Body::ball(3, 1.0);
  const double omega3 = unit_ball_volume(3);
  for (int j : {1, 2}) {
    const Estimate e = phi(ball, j, 100, 0);
    ok = ok && e.value == omega3 && e.std_error == 0.0;
  }
  const Body cube = Body::cube(3, 1.0);
  const Estimate e0 = phi(cube, 0, 100, 0);
  const Estimate e3 = phi(cube, 3, 100, 0);
  ok = ok && e0.value == omega3 && e0.std_error == 0.0;
  ok = ok && e3.value == 1.0 && e3.std_error == 0.0;
  report(1, "ball identity and endpoint conventions (exact)", ok,
         "phi(B3,j)=" + std::to_string(omega3) + ", phi(cube,3)=" +
             std::to_string(e3.value));
}

// 2. Degree-j homogeneity and multilinearity are exact per paired sample.
void criterion_2() {
  bool ok = true;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Body k = random_polytope({seed, 0}, 3, 8);
    for (int j : {1, 2}) {
      const Estimate base = phi(k, j, 128, seed);
      const Estimate scaled = phi(scale(k, 2.0), j, 128, seed);
      const double rel =
          std::abs(scaled.value - std::pow(2.0, j) * base.value) /
          (std::pow(2.0, j) * base.value);
      worst = std::max(worst, rel);
      ok = ok && rel <= 1e-10;
    }
    const Body l = random_polytope({seed, 1}, 3, 8);
    const Estimate mixed = phi_mixed({k, l}, 128, seed);
    const Estimate mixed2 = phi_mixed({scale(k, 2.0), l}, 128, seed);
    const double rel =
        std::abs(mixed2.value - 2.0 * mixed.value) / (2.0 * mixed.value);
    worst = std::max(worst, rel);
    ok = ok && rel <= 1e-10;
  }
  report(2, "homogeneity/multilinearity, paired seeds (rel <= 1e-10)", ok,
         "worst rel " + std::to_string(worst));
}

// 3. Mixed-volume diagonal and the hand-polarized instances.
void criterion_3() {
  bool ok = true;
  for (int j : {2, 3, 4}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Body k = random_polytope({seed, static_cast<std::uint64_t>(j)}, j,
                                     j + 5);
      const double v = volume(k);
      ok = ok && std::abs(mixed_volume(std::vector<Body>(j, k)) - v) <=
                     1e-8 * v;
    }
  }
  Eigen::MatrixXd r1(2, 4), r2(2, 4);
  r1 << 0, 1, 0, 1,
        0, 0, 2, 2;
  r2 << 0, 3, 0, 3,
        0, 0, 4, 4;
  const double rects = mixed_volume({convex_hull(r1, 2), convex_hull(r2, 2)});
  ok = ok && std::abs(rects - 5.0) <= 1e-9;
  Eigen::MatrixXd seg(2, 2);
  seg << 0, 1,
         0, 0;
  const double sq_seg =
      mixed_volume({Body::cube(2, 1.0), convex_hull(seg, 2)});
  ok = ok && std::abs(sq_seg - 0.5) <= 1e-12;
  report(3, "mixed-volume diagonal and hand oracles", ok,
         "rect=" + std::to_string(rects) + " sq/seg=" + std::to_string(sq_seg));
}

// 4. Independent oracles agree with the production paths.
void criterion_4() {
  bool ok = true;
  double worst_rel = 0.0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    std::vector<Body> bodies;
    for (int b = 0; b < 3; ++b)
      bodies.push_back(random_polytope({t, static_cast<std::uint64_t>(b)}, 3, 7));
    const double incl = mixed_volume(bodies);
    const double fit = mixed_volume_oracle(bodies, 4);
    const double rel = std::abs(incl - fit) / std::abs(incl);
    worst_rel = std::max(worst_rel, rel);
    ok = ok && rel <= 1e-6;
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Body poly = random_polytope({seed, 7}, 2, 7);
    const double exact = phi_exact_2d(poly, 2048);
    const Estimate mc = phi(poly, 1, 2000, seed);
    ok = ok && std::abs(mc.value - exact) <= 3.0 * mc.std_error;
  }
  report(4, "oracle agreement (polynomial fit 1e-6; quadrature 3 sigma)", ok,
         "worst mixed-volume rel " + std::to_string(worst_rel));
}

// 5. The Haar sampler has the Beta(1/2,1) first-coordinate moment.
void criterion_5() {
  const long draws = 100000;
  std::vector<double> xs(draws);
  rng::NeumaierSum sum;
  for (long m = 0; m < draws; ++m) {
    const Subspace s =
        haar_sample({2024, static_cast<std::uint64_t>(m) + 1}, 3, 1);
    xs[m] = s.basis(0, 0) * s.basis(0, 0);
    sum.add(xs[m]);
  }
  const double mean = sum.total() / draws;
  rng::NeumaierSum sq;
  for (double x : xs) sq.add((x - mean) * (x - mean));
  const double se = std::sqrt(sq.total() / (draws - 1) / draws);
  const bool ok = std::abs(mean - 1.0 / 3.0) <= 3.0 * se;
  report(5, "Haar sampler moment (1e5 draws, 3 standard errors)", ok,
         "mean=" + std::to_string(mean) + " se=" + std::to_string(se));
}

// 6. The inequality suites hold across the seeded corpus, with equality on
// homothetic instances.
void criterion_6() {
  bool ok = true;
  std::string detail;
  int checked = 0;

  const auto run_one = [&](SuiteConfig cfg) {
    const SuiteReport rep = run_suite(cfg);
    checked += static_cast<int>(rep.reports.size());
    if (rep.violated_count != 0) {
      ok = false;
      detail += cfg.suites[0] + ":" + std::to_string(rep.violated_count) +
                " violated ";
    }
    return rep;
  };

  SuiteConfig base;
  base.instances = 100;
  base.samples = 2000;
  base.master_seed = 2024;

  for (const char* s : {"minkowski", "af", "product"}) {
    SuiteConfig cfg = base;
    cfg.suites = {s};
    run_one(cfg);
  }
  for (double eps : {0.5, 1.0, 2.0}) {
    SuiteConfig cfg = base;
    cfg.suites = {"bm"};
    cfg.epsilon = eps;
    run_one(cfg);
  }
  for (const char* s : {"minkowski", "product"}) {
    SuiteConfig cfg = base;
    cfg.suites = {s};
    cfg.instances = 20;
    cfg.homothetic = true;
    const SuiteReport rep = run_one(cfg);
    for (const InequalityReport& r : rep.reports) {
      if (!r.equality_expected || std::abs(r.margin) > r.noise_bound) {
        ok = false;
        detail += std::string(s) + ":equality-case failure ";
      }
    }
  }
  report(6, "theorem suite, 3-sigma noise bounds (zero violations)", ok,
         std::to_string(checked) + " instances" +
             (detail.empty() ? "" : "; " + detail));
}

// 7. Unimodular invariance at independent seeds, one 3-sigma excursion
// allowed.
void criterion_7() {
  SuiteConfig cfg;
  cfg.suites = {"sl"};
  cfg.instances = 20;
  cfg.samples = 10000;
  cfg.master_seed = 2024;
  const SuiteReport rep = run_suite(cfg);
  const bool ok = rep.satisfied_count >= 19;
  report(7, "unimodular invariance (19 of 20 within 3 sigma)", ok,
         std::to_string(rep.satisfied_count) + "/20 within bound");
}

// 8. CLI output is byte-identical across reruns and thread counts.
void criterion_8(const std::string& cli) {
  const fs::path dir =
      fs::temp_directory_path() /
      ("quermass_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string body = (dir / "body.json").string();
  bool ok = true;
  int status = 0;

  run_cmd(cli + " gen --out " + body + " --random --dim 3 --vertices 9 --seed 3",
          &status);
  ok = ok && status == 0;
  const std::string gen_bytes_a = [&] {
    std::string out;
    FILE* f = std::fopen(body.c_str(), "rb");
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), f)) > 0) out.append(buf, got);
    std::fclose(f);
    return out;
  }();
  run_cmd(cli + " gen --out " + body + " --random --dim 3 --vertices 9 --seed 3",
          &status);
  ok = ok && status == 0;

  const std::string compute =
      cli + " compute --bodies " + body + " -j 2 --samples 400 --seed 9";
  const std::string a = run_cmd(compute, &status);
  ok = ok && status == 0;
  const std::string b = run_cmd(compute, &status);
  const std::string t1 = run_cmd(compute + " --threads 1", &status);
  const std::string t4 = run_cmd(compute + " --threads 4", &status);
  ok = ok && a == b && a == t1 && a == t4 && !a.empty();

  const std::string verify =
      cli + " verify --suite af --instances 2 --samples 300 --seed 5";
  const std::string va = run_cmd(verify, &status);
  ok = ok && status == 0;
  const std::string vb = run_cmd(verify + " --threads 3", &status);
  ok = ok && va == vb && !va.empty();

  std::error_code ec;
  fs::remove_all(dir, ec);
  report(8, "CLI determinism, including --threads variation", ok, "");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-quermass-cli>\n", argv[0]);
    return 64;
  }
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8(argv[1]);
  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
