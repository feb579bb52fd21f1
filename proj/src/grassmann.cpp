#include "quermass/grassmann.hpp"

#include <stdexcept>
#include <string>

#include "quermass/rng.hpp"

namespace quermass {

Subspace haar_sample(SampleStream stream, int n, int j) {
  if (n < 1 || j < 1 || j > n)
    throw std::invalid_argument("haar_sample: need 1 <= j <= n, got j=" +
                                std::to_string(j) + ", n=" + std::to_string(n));
  rng::Stream g(stream.master_seed, rng::kHaar, stream.index);
  Eigen::MatrixXd a(n, j);
  for (int c = 0; c < j; ++c)
    for (int r = 0; r < n; ++r) a(r, c) = g.next_normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, j);
  // Positive triangular diagonal makes the factorization unique and the
  // column frame exactly Haar, not Haar-up-to-sign.
  for (int c = 0; c < j; ++c)
    if (qr.matrixQR()(c, c) < 0.0) q.col(c) = -q.col(c);
  return Subspace{n, j, std::move(q)};
}

Body project(const Body& body, const Subspace& s) {
  if (body.dim() != s.ambient)
    throw std::invalid_argument("project: body dimension " +
                                std::to_string(body.dim()) +
                                " does not match ambient " +
                                std::to_string(s.ambient));
  if (body.is_ball())
    return Body::ball(s.dim, body.radius(), s.basis.transpose() * body.center());
  return convex_hull(s.basis.transpose() * body.vertices(), s.dim);
}

}  // namespace quermass
