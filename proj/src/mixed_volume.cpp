#include "quermass/mixed_volume.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "quermass/convex_hull.hpp"
#include "quermass/rng.hpp"

namespace quermass {
namespace {

constexpr int kMaxBodies = 12;  // 2^j subset sums; refuse past desk scale

void validate(const std::vector<Body>& bodies, const char* op) {
  if (bodies.empty())
    throw std::invalid_argument(std::string(op) + ": need at least one body");
  const int j = static_cast<int>(bodies.size());
  if (j > kMaxBodies)
    throw std::invalid_argument(std::string(op) + ": refusing " +
                                std::to_string(j) +
                                " bodies (2^j subset sums); max is 12");
  for (const Body& b : bodies) {
    if (b.is_ball())
      throw std::invalid_argument(std::string(op) +
                                  ": ball operands are unsupported; convert "
                                  "with ball_approx first");
    if (b.dim() != j)
      throw std::invalid_argument(
          std::string(op) + ": " + std::to_string(j) +
          " bodies must live in R^" + std::to_string(j) + ", got dimension " +
          std::to_string(b.dim()));
  }
}

// Candidate vertices of A + B (all pairwise sums).
Eigen::MatrixXd sum_candidates(const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b) {
  Eigen::MatrixXd cand(a.rows(), a.cols() * b.cols());
  int c = 0;
  for (int i = 0; i < a.cols(); ++i)
    for (int k = 0; k < b.cols(); ++k) cand.col(c++) = a.col(i) + b.col(k);
  return cand;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m,
                               const std::vector<int>& idx) {
  Eigen::MatrixXd out(m.rows(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(k) = m.col(idx[k]);
  return out;
}

}  // namespace

namespace detail {

MixedVolumeStats mixed_volume_raw(const std::vector<Eigen::MatrixXd>& bodies) {
  const int j = static_cast<int>(bodies.size());
  const std::uint32_t full = (1u << j) - 1u;
  // Subset sums share work: each mask extends the mask without its lowest
  // bit, and every intermediate stays hull-reduced.
  std::vector<Eigen::MatrixXd> reduced(full + 1);
  std::vector<double> vol(full + 1, 0.0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t low = mask & (~mask + 1u);
    const int low_bit = std::countr_zero(low);
    const std::uint32_t rest = mask ^ low;
    HullResult hr;
    if (rest == 0) {
      hr = convex_hull_of(bodies[low_bit]);
      reduced[mask] = select_columns(bodies[low_bit], hr.extreme);
    } else {
      const Eigen::MatrixXd cand =
          sum_candidates(reduced[rest], reduced[low]);
      hr = convex_hull_of(cand);
      reduced[mask] = select_columns(cand, hr.extreme);
    }
    vol[mask] = hr.volume;
  }
  double fact = 1.0;
  for (int k = 2; k <= j; ++k) fact *= static_cast<double>(k);
  rng::NeumaierSum signed_sum;
  rng::NeumaierSum abs_sum;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int sign = (j - std::popcount(mask)) % 2 == 0 ? 1 : -1;
    signed_sum.add(sign * vol[mask]);
    abs_sum.add(vol[mask]);
  }
  MixedVolumeStats stats;
  stats.value = signed_sum.total() / fact;
  stats.abs_sum = abs_sum.total() / fact;
  return stats;
}

}  // namespace detail

double mixed_volume(const std::vector<Body>& bodies) {
  return mixed_volume_stats(bodies).value;
}

MixedVolumeStats mixed_volume_stats(const std::vector<Body>& bodies) {
  validate(bodies, "mixed_volume");
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(bodies.size());
  for (const Body& b : bodies) mats.push_back(b.vertices());
  return detail::mixed_volume_raw(mats);
}

double mixed_volume_oracle(const std::vector<Body>& bodies, int grid_size) {
  validate(bodies, "mixed_volume_oracle");
  const int j = static_cast<int>(bodies.size());
  if (grid_size < j + 1)
    throw std::invalid_argument("mixed_volume_oracle: grid_size must be >= j+1");

  // Monomial exponents of total degree j in j variables.
  std::vector<std::vector<int>> monomials;
  std::vector<int> expo(j, 0);
  const auto enumerate = [&](auto&& self, int slot, int remaining) -> void {
    if (slot == j - 1) {
      expo[slot] = remaining;
      monomials.push_back(expo);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      expo[slot] = e;
      self(self, slot + 1, remaining - e);
    }
  };
  enumerate(enumerate, 0, j);

  // Positive evaluation grid {1..g}^j, deterministically strided down when
  // the full grid overshoots what the fit needs.
  std::vector<std::vector<double>> grid;
  {
    double total = 1.0;
    for (int k = 0; k < j; ++k) total *= grid_size;
    const std::size_t cap = std::max<std::size_t>(4 * monomials.size(), 256);
    std::size_t stride =
        total > static_cast<double>(cap)
            ? static_cast<std::size_t>(total / static_cast<double>(cap))
            : 1;
    // A stride sharing a factor with the grid period would freeze the last
    // coordinate; keep it coprime so every value still occurs.
    while (std::gcd(stride, static_cast<std::size_t>(grid_size)) != 1) ++stride;
    std::vector<int> lambda(j, 1);
    std::size_t counter = 0;
    bool done = false;
    while (!done) {
      if (counter % stride == 0) {
        std::vector<double> pt(j);
        for (int k = 0; k < j; ++k) pt[k] = static_cast<double>(lambda[k]);
        grid.push_back(std::move(pt));
      }
      ++counter;
      int slot = j - 1;
      while (slot >= 0) {
        if (++lambda[slot] <= grid_size) break;
        lambda[slot] = 1;
        --slot;
      }
      done = slot < 0;
    }
  }

  Eigen::MatrixXd a(grid.size(), monomials.size());
  Eigen::VectorXd b(grid.size());
  std::vector<Eigen::MatrixXd> scaled(j);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (std::size_t mi = 0; mi < monomials.size(); ++mi) {
      double v = 1.0;
      for (int k = 0; k < j; ++k)
        for (int e = 0; e < monomials[mi][k]; ++e) v *= grid[p][k];
      a(p, mi) = v;
    }
    for (int k = 0; k < j; ++k) scaled[k] = bodies[k].vertices() * grid[p][k];
    Eigen::MatrixXd acc = scaled[0];
    for (int k = 1; k < j; ++k) {
      const Eigen::MatrixXd cand = sum_candidates(acc, scaled[k]);
      const HullResult hr = convex_hull_of(cand);
      acc = select_columns(cand, hr.extreme);
    }
    b(p) = convex_hull_of(acc).volume;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < static_cast<int>(monomials.size()))
    throw std::runtime_error(
        "mixed_volume_oracle: singular fitting system (degenerate grid)");
  const Eigen::VectorXd coeff = qr.solve(b);

  std::size_t mixed_index = monomials.size();
  for (std::size_t mi = 0; mi < monomials.size(); ++mi) {
    bool all_ones = true;
    for (int k = 0; k < j; ++k) all_ones = all_ones && monomials[mi][k] == 1;
    if (all_ones) {
      mixed_index = mi;
      break;
    }
  }
  double fact = 1.0;
  for (int k = 2; k <= j; ++k) fact *= static_cast<double>(k);
  return coeff(mixed_index) / fact;
}

}  // namespace quermass
