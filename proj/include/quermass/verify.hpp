#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quermass/geometry.hpp"
#include "quermass/grassmann.hpp"
#include "quermass/quermassintegrals.hpp"

namespace quermass {

struct CheckParams {
  int ambient = 0;
  int subspace_dim = 0;
  long samples = 0;
  std::uint64_t master_seed = 0;
  std::optional<int> r;        // Aleksandrov-Fenchel order
  std::optional<int> i;        // reserved for the i-th mixed functionals
  std::optional<double> epsilon;  // Brunn-Minkowski scale
};

// One verified inequality instance. `satisfied` compares the margin against
// a 3-sigma noise bound propagated from the Monte Carlo standard errors;
// for the invariance check the comparison is two-sided.
struct InequalityReport {
  std::string name;  // minkowski | aleksandrov_fenchel | product |
                     // brunn_minkowski | sl_invariance
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;       // lhs - rhs
  double noise_bound = 0.0;  // 3 * propagated std error of the margin
  bool satisfied = false;
  bool equality_expected = false;
  CheckParams params;
};

// phi_pair(K,L)^j >= phi(K)^(j-1) phi(L); equality for homothetic K, L.
InequalityReport check_minkowski(const Body& k, const Body& l, int j,
                                 long samples, std::uint64_t master_seed);

// phi(K_1..K_j) >= prod_{i<=r} phi(K_i r times, K_{r+1}..K_j)^(1/r).
InequalityReport check_af(const std::vector<Body>& bodies, int r, long samples,
                          std::uint64_t master_seed);

// phi(K_1..K_j)^j >= prod_i phi(K_i); equality for mutual homothets.
InequalityReport check_product(const std::vector<Body>& bodies, long samples,
                               std::uint64_t master_seed);

// phi(K + eps L)^(1/j) >= phi(K)^(1/j) + eps phi(L)^(1/j), eps > 0.
InequalityReport check_bm(const Body& k, const Body& l, double epsilon, int j,
                          long samples, std::uint64_t master_seed);

// phi(gK_1..gK_j) == phi(K_1..K_j) for unimodular g. The two sides run on
// seeds derived from the body data, so identical inputs cancel bitwise and
// distinct inputs get independent streams.
InequalityReport check_sl_invariance(const std::vector<Body>& bodies,
                                     const LinearMap& g, long samples,
                                     std::uint64_t master_seed);

// L equals c*K + v for some c > 0, decided by centering, scale normalization
// and nearest-vertex pairing at the tolerance.
bool is_homothetic(const Body& a, const Body& b, double tol = 1e-9);

// Hull of seeded standard-normal points, redrawn (bounded retries) until
// full-dimensional. vertex_count >= dim+1.
Body random_polytope(SampleStream stream, int dim, int vertex_count);

// Seeded rotation times a unit-determinant diagonal and shear, renormalized
// so |det - 1| <= 1e-9.
LinearMap random_sl_matrix(SampleStream stream, int n);

struct SuiteConfig {
  // Subset of {"minkowski", "af", "product", "bm", "sl"}; empty runs nothing.
  std::vector<std::string> suites;
  int instances = 100;
  int ambient = 3;
  int subspace_dim = 2;
  long samples = 2000;
  std::uint64_t master_seed = 0;
  double epsilon = 1.0;  // bm
  int af_r = 2;          // af
  bool homothetic = false;
  int corpus_vertices = 8;
};

struct SuiteReport {
  std::vector<InequalityReport> reports;
  int satisfied_count = 0;
  int violated_count = 0;
  std::uint64_t corpus_seed = 0;
};

// Runs the selected checkers over a seeded corpus; deterministic and
// replayable for a given config.
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace quermass
