#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quermass/body_spec.hpp"
#include "quermass/grassmann.hpp"
#include "quermass/mixed_volume.hpp"
#include "quermass/quermassintegrals.hpp"
#include "quermass/rng.hpp"
#include "quermass/text_format.hpp"
#include "quermass/verify.hpp"

namespace {

using namespace quermass;

// Exit status taxonomy: 0 ok, 1 computational error, 2 usage or validation
// error, 3 verification/oracle failure.
constexpr int kOk = 0;
constexpr int kComputeError = 1;
constexpr int kUsageError = 2;
constexpr int kVerifyFailure = 3;

std::vector<std::string> split_paths(const std::string& arg) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= arg.size()) {
    const std::size_t comma = arg.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(arg.substr(start));
      break;
    }
    out.push_back(arg.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

// --- compute -----------------------------------------------------------------

struct ComputeArgs {
  std::string bodies;
  int j = -1;
  bool pair = false;
  int ith = -1;
  long samples = 2000;
  std::uint64_t seed = 0;
  std::string format = "json";
  int ball_points = 200;
  int threads = 0;
};

int run_compute(const ComputeArgs& args) {
  set_max_threads(args.threads);
  const std::vector<std::string> files = split_paths(args.bodies);
  std::vector<Body> bodies;
  bodies.reserve(files.size());
  for (const std::string& f : files) bodies.push_back(load_body_file(f));

  Estimate est;
  if (args.pair) {
    if (bodies.size() != 2)
      throw std::invalid_argument("--pair needs exactly 2 body files");
    if (args.j < 1) throw std::invalid_argument("--pair needs -j");
    est = phi_pair(bodies[0], bodies[1], args.j, args.samples, args.seed);
  } else if (args.ith >= 0) {
    if (args.j < 1) throw std::invalid_argument("--ith needs -j");
    if (bodies.size() == 1) {
      est = phi_ith(bodies[0], args.ith, args.j, args.ball_points,
                    args.samples, args.seed);
    } else if (bodies.size() == 2) {
      est = phi_ith_mixed(bodies[0], bodies[1], args.ith, args.j,
                          args.ball_points, args.samples, args.seed);
    } else {
      throw std::invalid_argument("--ith needs 1 or 2 body files");
    }
  } else if (bodies.size() == 1) {
    if (args.j < 0)
      throw std::invalid_argument("a single body needs -j (0 <= j <= n)");
    est = phi(bodies[0], args.j, args.samples, args.seed);
  } else {
    const int j = static_cast<int>(bodies.size());
    if (args.j >= 0 && args.j != j)
      throw std::invalid_argument(
          "-j must match the number of body files for a mixed computation");
    est = phi_mixed(bodies, args.samples, args.seed);
  }

  std::string out;
  if (args.format == "csv") {
    out = "value,std_error,samples,n,j,seed\n" + format_double(est.value) +
          "," + format_double(est.std_error) + "," +
          std::to_string(est.samples) + "," + std::to_string(est.ambient) +
          "," + std::to_string(est.subspace_dim) + "," +
          format_u64(est.master_seed) + "\n";
  } else {
    out = "{\"value\":" + format_double(est.value) +
          ",\"std_error\":" + format_double(est.std_error) +
          ",\"samples\":" + std::to_string(est.samples) +
          ",\"n\":" + std::to_string(est.ambient) +
          ",\"j\":" + std::to_string(est.subspace_dim) +
          ",\"seed\":" + format_u64(est.master_seed) + "}\n";
  }
  std::cout << out;
  return kOk;
}

// --- verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  int instances = 100;
  int n = 3;
  int j = 2;
  long samples = 2000;
  std::uint64_t seed = 0;
  std::string format = "json";
  double epsilon = 1.0;
  int r = 2;
  bool homothetic = false;
  int threads = 0;
};

std::string opt_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "null";
}
std::string opt_double(const std::optional<double>& v) {
  return v ? format_double(*v) : "null";
}

int run_verify(const VerifyArgs& args) {
  set_max_threads(args.threads);
  SuiteConfig cfg;
  if (args.suite == "all")
    cfg.suites = {"minkowski", "af", "product", "bm", "sl"};
  else
    cfg.suites = {args.suite};
  cfg.instances = args.instances;
  cfg.ambient = args.n;
  cfg.subspace_dim = args.j;
  cfg.samples = args.samples;
  cfg.master_seed = args.seed;
  cfg.epsilon = args.epsilon;
  cfg.af_r = args.r;
  cfg.homothetic = args.homothetic;
  const SuiteReport report = run_suite(cfg);

  std::string out;
  if (args.format == "csv")
    out += "suite,instance,lhs,rhs,margin,noise_bound,satisfied,"
           "equality_expected,n,j,r,i,epsilon,samples,seed\n";
  std::string current;
  int instance = 0;
  for (const InequalityReport& rep : report.reports) {
    if (rep.name != current) {
      current = rep.name;
      instance = 0;
    }
    const CheckParams& p = rep.params;
    if (args.format == "csv") {
      out += rep.name + "," + std::to_string(instance) + "," +
             format_double(rep.lhs) + "," + format_double(rep.rhs) + "," +
             format_double(rep.margin) + "," + format_double(rep.noise_bound) +
             "," + bool_text(rep.satisfied) + "," +
             bool_text(rep.equality_expected) + "," +
             std::to_string(p.ambient) + "," + std::to_string(p.subspace_dim) +
             "," + (p.r ? std::to_string(*p.r) : "") + "," +
             (p.i ? std::to_string(*p.i) : "") + "," +
             (p.epsilon ? format_double(*p.epsilon) : "") + "," +
             std::to_string(p.samples) + "," + format_u64(p.master_seed) +
             "\n";
    } else {
      out += "{\"suite\":\"" + rep.name + "\",\"instance\":" +
             std::to_string(instance) + ",\"lhs\":" + format_double(rep.lhs) +
             ",\"rhs\":" + format_double(rep.rhs) +
             ",\"margin\":" + format_double(rep.margin) +
             ",\"noise_bound\":" + format_double(rep.noise_bound) +
             ",\"satisfied\":" + bool_text(rep.satisfied) +
             ",\"equality_expected\":" + bool_text(rep.equality_expected) +
             ",\"n\":" + std::to_string(p.ambient) +
             ",\"j\":" + std::to_string(p.subspace_dim) +
             ",\"r\":" + opt_int(p.r) + ",\"i\":" + opt_int(p.i) +
             ",\"epsilon\":" + opt_double(p.epsilon) +
             ",\"samples\":" + std::to_string(p.samples) +
             ",\"seed\":" + format_u64(p.master_seed) + "}\n";
    }
    ++instance;
  }
  std::cout << out;
  std::cerr << "suites: " << report.satisfied_count << " satisfied, "
            << report.violated_count << " violated\n";
  return report.violated_count == 0 ? kOk : kVerifyFailure;
}

// --- oracle --------------------------------------------------------------------

struct OracleArgs {
  std::string check;
  std::uint64_t seed = 0;
  long samples = 0;  // 0 = per-check default
  int threads = 0;
};

int run_oracle(const OracleArgs& args) {
  set_max_threads(args.threads);
  bool all_pass = true;
  std::string out;
  if (args.check == "mixedvol") {
    const long trials = args.samples > 0 ? args.samples : 20;
    for (long t = 0; t < trials; ++t) {
      std::vector<Body> bodies;
      for (int b = 0; b < 3; ++b)
        bodies.push_back(random_polytope(
            {args.seed, static_cast<std::uint64_t>(3 * t + b)}, 3, 8));
      const double incl = mixed_volume(bodies);
      const double fit = mixed_volume_oracle(bodies, 4);
      const double rel = std::abs(incl - fit) / std::max(std::abs(incl), 1e-300);
      const bool pass = rel <= 1e-6;
      all_pass = all_pass && pass;
      out += "{\"check\":\"mixedvol\",\"trial\":" + std::to_string(t) +
             ",\"inclusion_exclusion\":" + format_double(incl) +
             ",\"polynomial_fit\":" + format_double(fit) +
             ",\"rel_diff\":" + format_double(rel) +
             ",\"pass\":" + bool_text(pass) + "}\n";
    }
  } else if (args.check == "phi2d") {
    const long samples = args.samples > 0 ? args.samples : 2000;
    for (long t = 0; t < 5; ++t) {
      const Body poly =
          random_polytope({args.seed, static_cast<std::uint64_t>(t)}, 2, 7);
      const double exact = phi_exact_2d(poly, 4096);
      const Estimate mc = phi(poly, 1, samples, args.seed + t);
      const double diff = mc.value - exact;
      const double bound = 3.0 * mc.std_error;
      const bool pass = std::abs(diff) <= bound;
      all_pass = all_pass && pass;
      out += "{\"check\":\"phi2d\",\"trial\":" + std::to_string(t) +
             ",\"monte_carlo\":" + format_double(mc.value) +
             ",\"std_error\":" + format_double(mc.std_error) +
             ",\"quadrature\":" + format_double(exact) +
             ",\"diff\":" + format_double(diff) +
             ",\"bound\":" + format_double(bound) +
             ",\"pass\":" + bool_text(pass) + "}\n";
    }
  } else if (args.check == "haar") {
    const long draws = args.samples > 0 ? args.samples : 100000;
    rng::NeumaierSum sum, sq;
    for (long m = 0; m < draws; ++m) {
      const Subspace s =
          haar_sample({args.seed, static_cast<std::uint64_t>(m) + 1}, 3, 1);
      const double x = s.basis(0, 0) * s.basis(0, 0);
      sum.add(x);
    }
    const double mean = sum.total() / static_cast<double>(draws);
    for (long m = 0; m < draws; ++m) {
      const Subspace s =
          haar_sample({args.seed, static_cast<std::uint64_t>(m) + 1}, 3, 1);
      const double d = s.basis(0, 0) * s.basis(0, 0) - mean;
      sq.add(d * d);
    }
    const double se = std::sqrt(sq.total() / static_cast<double>(draws - 1) /
                                static_cast<double>(draws));
    const double expected = 1.0 / 3.0;
    const double z = (mean - expected) / se;
    const bool pass = std::abs(z) <= 3.0;
    all_pass = pass;
    out += "{\"check\":\"haar\",\"draws\":" + std::to_string(draws) +
           ",\"mean\":" + format_double(mean) +
           ",\"expected\":" + format_double(expected) +
           ",\"std_error\":" + format_double(se) +
           ",\"z\":" + format_double(z) + ",\"pass\":" + bool_text(pass) +
           "}\n";
  } else {
    throw std::invalid_argument("--check must be mixedvol, phi2d, or haar");
  }
  std::cout << out;
  return all_pass ? kOk : kVerifyFailure;
}

// --- gen -----------------------------------------------------------------------

struct GenArgs {
  std::string out;
  bool random = false, cube = false, simplex = false, ball = false,
       ball_approx_flag = false;
  int dim = 0;
  int vertices = 0;
  std::uint64_t seed = 0;
  double side = 1.0;
  double radius = 1.0;
  int points = 200;
};

int run_gen(const GenArgs& args) {
  const int kinds = int(args.random) + int(args.cube) + int(args.simplex) +
                    int(args.ball) + int(args.ball_approx_flag);
  if (kinds != 1)
    throw std::invalid_argument(
        "choose exactly one of --random, --cube, --simplex, --ball, "
        "--ball-approx");
  if (args.dim < 1 || args.dim > 8)
    throw std::invalid_argument("--dim must be in [1, 8]");
  std::string text;
  if (args.random) {
    if (args.vertices < args.dim + 1)
      throw std::invalid_argument("--vertices must be >= dim+1");
    const Body b = random_polytope({args.seed, 0}, args.dim, args.vertices);
    text = body_spec_vertices(b);
  } else if (args.cube) {
    if (args.side < 0.0) throw std::invalid_argument("--side must be >= 0");
    text = body_spec_cube(args.dim, args.side);
  } else if (args.simplex) {
    text = body_spec_simplex(args.dim);
  } else if (args.ball) {
    if (args.radius < 0.0) throw std::invalid_argument("--radius must be >= 0");
    text = body_spec_ball(args.dim, args.radius);
  } else {
    if (args.radius <= 0.0) throw std::invalid_argument("--radius must be > 0");
    if (args.points < args.dim + 1)
      throw std::invalid_argument("--points must be >= dim+1");
    text = body_spec_ball_approx(args.dim, args.radius, args.points, args.seed);
  }
  std::ofstream f(args.out, std::ios::binary | std::ios::trunc);
  if (!f) throw std::invalid_argument("cannot write \"" + args.out + "\"");
  f << text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "quermass: affine and mixed affine quermassintegrals of convex bodies\n"
      "by Monte Carlo integration over the Grassmannian, with numerical\n"
      "verification of their inequalities."};
  app.require_subcommand(1);

  ComputeArgs ca;
  CLI::App* compute = app.add_subcommand(
      "compute",
      "Estimate a quermassintegral. One body file computes phi(K, j); several "
      "compute the mixed functional of the listed bodies (j = file count); "
      "--pair and --ith select the two-body and i-th mixed variants.\n"
      "CSV columns: value,std_error,samples,n,j,seed");
  compute->add_option("--bodies", ca.bodies,
                      "comma-separated body spec files")->required();
  compute->add_option("-j", ca.j, "subspace dimension");
  compute->add_flag("--pair", ca.pair, "two files: K repeated j-1 times, L once");
  compute->add_option("--ith", ca.ith,
                      "i-th mixed functional: i unit-ball slots");
  compute->add_option("--samples", ca.samples, "Monte Carlo samples")
      ->default_val(2000);
  compute->add_option("--seed", ca.seed, "master seed")->default_val(0);
  compute->add_option("--format", ca.format, "json or csv")
      ->default_val("json")
      ->check(CLI::IsMember({"json", "csv"}));
  compute->add_option("--ball-points", ca.ball_points,
                      "sphere points for the internal ball approximant")
      ->default_val(200);
  compute->add_option("--threads", ca.threads,
                      "worker threads (never affects results)")
      ->default_val(0);

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "Check the quermassintegral inequalities on a seeded corpus; one record "
      "per instance, exit 3 when any instance is violated.\n"
      "CSV columns: suite,instance,lhs,rhs,margin,noise_bound,satisfied,"
      "equality_expected,n,j,r,i,epsilon,samples,seed");
  verify->add_option("--suite", va.suite, "minkowski|af|product|bm|sl|all")
      ->required()
      ->check(CLI::IsMember({"minkowski", "af", "product", "bm", "sl", "all"}));
  verify->add_option("--instances", va.instances, "instances per suite")
      ->default_val(100);
  verify->add_option("-n", va.n, "ambient dimension")->default_val(3);
  verify->add_option("-j", va.j, "subspace dimension")->default_val(2);
  verify->add_option("--samples", va.samples, "Monte Carlo samples")
      ->default_val(2000);
  verify->add_option("--seed", va.seed, "corpus master seed")->default_val(0);
  verify->add_option("--format", va.format, "json or csv")
      ->default_val("json")
      ->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--epsilon", va.epsilon, "bm only: epsilon > 0")
      ->default_val(1.0);
  verify->add_option("-r", va.r, "af only: product order")->default_val(2);
  verify->add_flag("--homothetic", va.homothetic,
                   "generate homothetic instances (equality cases)");
  verify->add_option("--threads", va.threads,
                     "worker threads (never affects results)")
      ->default_val(0);

  OracleArgs oa;
  CLI::App* oracle = app.add_subcommand(
      "oracle",
      "Cross-check independent implementations: polarization vs polynomial "
      "fit, Monte Carlo vs angular quadrature, or the Haar sampler moment "
      "test. Exit 3 on disagreement.");
  oracle->add_option("--check", oa.check, "mixedvol|phi2d|haar")
      ->required()
      ->check(CLI::IsMember({"mixedvol", "phi2d", "haar"}));
  oracle->add_option("--seed", oa.seed, "master seed")->default_val(0);
  oracle->add_option("--samples", oa.samples,
                     "trials/samples/draws (0 = per-check default)")
      ->default_val(0);
  oracle->add_option("--threads", oa.threads,
                     "worker threads (never affects results)")
      ->default_val(0);

  GenArgs ga;
  CLI::App* gen = app.add_subcommand(
      "gen", "Write a body spec file; replayable by seed.");
  gen->add_option("--out", ga.out, "output file")->required();
  gen->add_flag("--random", ga.random, "hull of seeded normal points");
  gen->add_flag("--cube", ga.cube, "axis-aligned cube [0, side]^dim");
  gen->add_flag("--simplex", ga.simplex, "standard simplex");
  gen->add_flag("--ball", ga.ball, "analytic ball");
  gen->add_flag("--ball-approx", ga.ball_approx_flag,
                "inscribed sphere-point polytope");
  gen->add_option("--dim", ga.dim, "ambient dimension");
  gen->add_option("--vertices", ga.vertices, "random: point count");
  gen->add_option("--seed", ga.seed, "random/ball-approx seed")->default_val(0);
  gen->add_option("--side", ga.side, "cube side")->default_val(1.0);
  gen->add_option("--radius", ga.radius, "ball radius")->default_val(1.0);
  gen->add_option("--points", ga.points, "ball-approx sphere points")
      ->default_val(200);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (app.got_subcommand(compute)) return run_compute(ca);
    if (app.got_subcommand(verify)) return run_verify(va);
    if (app.got_subcommand(oracle)) return run_oracle(oa);
    if (app.got_subcommand(gen)) return run_gen(ga);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kComputeError;
  }
  return kUsageError;
}
