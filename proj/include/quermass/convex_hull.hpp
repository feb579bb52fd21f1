#pragma once

#include <Eigen/Dense>
#include <vector>

namespace quermass {

// Result of hulling a point set given as matrix columns.
struct HullResult {
  // Indices of the input columns that are extreme points, ascending.
  std::vector<int> extreme;
  // For dim == 2 additionally the extreme indices in counter-clockwise
  // boundary order; empty otherwise.
  std::vector<int> boundary;
  // Lebesgue volume of the hull in the ambient dimension; 0 whenever the
  // affine rank is below the ambient dimension.
  double volume = 0.0;
  int affine_rank = 0;
};

// Extreme points and volume of conv(points). Coplanarity is decided at
// 1e-10 of the bounding-box diameter; points closer than 1e-12 of the
// diameter count as duplicates (the earliest column wins).
HullResult convex_hull_of(const Eigen::MatrixXd& points);

// Rank of the affine hull of the columns at tolerance 1e-10 * bounding-box
// diameter.
int affine_rank_of(const Eigen::MatrixXd& points);

}  // namespace quermass
