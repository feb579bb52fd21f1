#pragma once

#include <cstdint>
#include <vector>

#include "quermass/geometry.hpp"
#include "quermass/grassmann.hpp"

namespace quermass {

// Monte Carlo estimate of an affine quermassintegral.
struct Estimate {
  double value = 0.0;
  // Delta-method standard error of `value`; exactly 0 when the integrand was
  // constant across samples or an endpoint convention bypassed sampling.
  double std_error = 0.0;
  long samples = 0;  // 0 when sampling was bypassed
  int ambient = 0;
  int subspace_dim = 0;
  std::uint64_t master_seed = 0;
};

// Upper bound on worker threads for sample evaluation; 0 restores the
// hardware default. Thread count never changes any computed value.
void set_max_threads(int threads);
int max_threads();

// Mixed affine quermassintegral of j bodies in R^n:
//   value = omega_n * [ (1/N) sum_m (V(K_1|xi_m,...,K_j|xi_m)/omega_j)^-n ]^(-1/n)
// with xi_m the Haar sample at stream index m (m = 1..N). Bodies must be
// full-dimensional; analytic balls are accepted only when every argument is
// the same ball. samples >= 2.
Estimate phi_mixed(const std::vector<Body>& bodies, long samples,
                   std::uint64_t master_seed);

// Affine quermassintegral of a single body. The endpoints bypass sampling:
// j = 0 gives omega_n, j = n gives vol(K). In between, the integrand is the
// projection volume itself (no polarization).
Estimate phi(const Body& body, int j, long samples, std::uint64_t master_seed);

// K in the first j-1 slots, L in the last.
Estimate phi_pair(const Body& k, const Body& l, int j, long samples,
                  std::uint64_t master_seed);

// (j-i-1) copies of K, one L, and i copies of the inscribed unit-ball
// approximant ball_approx(n, 1, ball_points, master_seed). 0 <= i < j <= n.
Estimate phi_ith_mixed(const Body& k, const Body& l, int i, int j,
                       int ball_points, long samples,
                       std::uint64_t master_seed);

// (j-i) copies of K and i copies of the unit-ball approximant.
Estimate phi_ith(const Body& k, int i, int j, int ball_points, long samples,
                 std::uint64_t master_seed);

// Exact (quadrature) value of the n=2, j=1 functional for a polygon: the
// subspace circle is parameterized by angle and integrated by composite
// Simpson rules laid out between the support-width kink angles.
// quadrature_points >= 16 total subintervals.
double phi_exact_2d(const Body& polygon, int quadrature_points);

// Evaluates every tuple against the same subspace sequence xi_1..xi_N
// (common random numbers), so ratios and differences of the returned
// estimates cancel the shared sampling noise. Tuples must share the ambient
// dimension and all have length j.
std::vector<Estimate> paired_phi_batch(
    const std::vector<std::vector<Body>>& tuples, int j, long samples,
    std::uint64_t master_seed);

}  // namespace quermass
