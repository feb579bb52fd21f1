#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace quermass {

// Computation failed because a body is lower-dimensional (or collapsed to
// one numerically). Distinct from std::invalid_argument so callers can tell
// bad usage from degenerate data.
class degenerate_body_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Volume of the d-dimensional unit ball.
double unit_ball_volume(int dim);

// A convex body: either a V-polytope (hull-reduced vertex list, stored as
// matrix columns in canonical lexicographic order) or an analytic ball.
class Body {
 public:
  enum class Kind { kPolytope, kBall };

  static Body ball(int dim, double radius);
  static Body ball(int dim, double radius, Eigen::VectorXd center);
  static Body cube(int dim, double side);
  static Body simplex(int dim);

  // Trusted constructor: the columns must already be the extreme points
  // (no duplicates). Used by hull producers; library users should build
  // polytopes through convex_hull().
  static Body from_hull_vertices(Eigen::MatrixXd vertices);

  Kind kind() const { return kind_; }
  bool is_polytope() const { return kind_ == Kind::kPolytope; }
  bool is_ball() const { return kind_ == Kind::kBall; }
  int dim() const { return dim_; }

  const Eigen::MatrixXd& vertices() const;  // polytope only
  int vertex_count() const;
  double radius() const;                    // ball only
  const Eigen::VectorXd& center() const;    // ball only

  // Exact value equality of the stored representation.
  bool operator==(const Body& other) const;

 private:
  Body() = default;
  Kind kind_ = Kind::kPolytope;
  int dim_ = 0;
  Eigen::MatrixXd vertices_;  // dim x m
  double radius_ = 0.0;
  Eigen::VectorXd center_;
};

// A linear map of R^n with its determinant cached at construction.
class LinearMap {
 public:
  explicit LinearMap(Eigen::MatrixXd matrix);
  static LinearMap identity(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  double determinant() const { return det_; }
  bool unimodular() const { return std::abs(det_ - 1.0) <= 1e-9; }

 private:
  Eigen::MatrixXd matrix_;
  double det_ = 0.0;
};

// Polytope whose vertex set is exactly the extreme points of the input
// columns. Idempotent.
Body convex_hull(const Eigen::MatrixXd& points, int dim);

// d-dimensional Lebesgue volume; 0 for lower-dimensional bodies.
double volume(const Body& body);

// Dimension of the affine hull, in [0, dim].
int affine_dim(const Body& body);

// Hull of all pairwise vertex sums. Polytopes only; use ball_approx to feed
// a ball into a sum.
Body minkowski_sum(const Body& a, const Body& b);

// Scalar Minkowski multiple, factor >= 0.
Body scale(const Body& body, double factor);

Body translate(const Body& body, const Eigen::VectorXd& v);

// Image under the map; polytopes, or balls when the map is a similarity.
Body linear_image(const Body& body, const LinearMap& map);

// Inscribed polytope: hull of point_count seeded quasi-uniform points on the
// radius-r sphere. Requires point_count >= dim+1 and radius > 0.
Body ball_approx(int dim, double radius, int point_count, std::uint64_t seed);

}  // namespace quermass
