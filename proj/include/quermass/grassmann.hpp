#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "quermass/geometry.hpp"

namespace quermass {

// Position in a replayable stream of draws: the draw at (master_seed, index)
// is a pure function of the pair, independent of evaluation order.
struct SampleStream {
  std::uint64_t master_seed = 0;
  std::uint64_t index = 0;
};

// A j-dimensional linear subspace of R^n, carried by an orthonormal basis.
struct Subspace {
  int ambient = 0;
  int dim = 0;
  Eigen::MatrixXd basis;  // ambient x dim, orthonormal columns
};

// Haar-distributed subspace: orthonormalization (sign-fixed to a positive
// triangular diagonal) of an n x j matrix of standard normal deviates drawn
// at the stream position. The measure is normalized to total mass 1.
Subspace haar_sample(SampleStream stream, int n, int j);

// Orthogonal projection onto the subspace, expressed in basis coordinates:
// polytopes project to the hull of the projected vertices, balls to a ball
// of the same radius around the projected center.
Body project(const Body& body, const Subspace& s);

}  // namespace quermass
