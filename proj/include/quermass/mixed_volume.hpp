#pragma once

#include <Eigen/Dense>
#include <vector>

#include "quermass/geometry.hpp"

namespace quermass {

// V(K_1,...,K_j) by the polarization formula
//   (1/j!) * sum over nonempty S of (-1)^(j-|S|) vol(sum_{i in S} K_i),
// with compensated summation over a fixed lexicographic subset order.
// All bodies must be polytopes living in R^j; j <= 12.
double mixed_volume(const std::vector<Body>& bodies);

struct MixedVolumeStats {
  double value = 0.0;
  // Sum of the absolute values of the alternating terms; value/abs_sum far
  // below 1 signals heavy cancellation.
  double abs_sum = 0.0;
  double cancellation_ratio() const {
    return abs_sum > 0.0 ? value / abs_sum : 1.0;
  }
};

MixedVolumeStats mixed_volume_stats(const std::vector<Body>& bodies);

// Independent route: evaluates vol(l_1 K_1 + ... + l_j K_j) on a positive
// grid, fits the degree-j homogeneous volume polynomial, and reads off the
// coefficient of l_1 l_2 ... l_j divided by j!. grid_size >= j+1.
double mixed_volume_oracle(const std::vector<Body>& bodies, int grid_size);

namespace detail {
// Shared kernel over raw vertex matrices (columns = vertices, dim j). The
// matrices need not be hull-reduced.
MixedVolumeStats mixed_volume_raw(const std::vector<Eigen::MatrixXd>& bodies);
}  // namespace detail

}  // namespace quermass
