#include "quermass/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "quermass/convex_hull.hpp"
#include "quermass/rng.hpp"

namespace quermass {
namespace {

bool lex_col_less(const Eigen::MatrixXd& m, int a, int b) {
  for (int r = 0; r < m.rows(); ++r) {
    if (m(r, a) < m(r, b)) return true;
    if (m(r, a) > m(r, b)) return false;
  }
  return false;
}

Eigen::MatrixXd sort_columns(const Eigen::MatrixXd& m) {
  std::vector<int> order(m.cols());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return lex_col_less(m, a, b); });
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < order.size(); ++i) out.col(i) = m.col(order[i]);
  return out;
}

void require_same_dim(const Body& a, const Body& b, const char* op) {
  if (a.dim() != b.dim())
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()) + ")");
}

}  // namespace

double unit_ball_volume(int dim) {
  if (dim < 0) throw std::invalid_argument("unit_ball_volume: dim must be >= 0");
  const double half = static_cast<double>(dim) / 2.0;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

// --- Body -------------------------------------------------------------------

Body Body::ball(int dim, double radius) {
  return ball(dim, radius, Eigen::VectorXd::Zero(dim));
}

Body Body::ball(int dim, double radius, Eigen::VectorXd center) {
  if (dim < 1) throw std::invalid_argument("ball: dim must be >= 1");
  if (radius < 0.0) throw std::invalid_argument("ball: radius must be >= 0");
  if (center.size() != dim)
    throw std::invalid_argument("ball: center has wrong dimension");
  Body b;
  b.kind_ = Kind::kBall;
  b.dim_ = dim;
  b.radius_ = radius;
  b.center_ = std::move(center);
  return b;
}

Body Body::cube(int dim, double side) {
  if (dim < 1) throw std::invalid_argument("cube: dim must be >= 1");
  if (side < 0.0) throw std::invalid_argument("cube: side must be >= 0");
  if (side == 0.0)
    return from_hull_vertices(Eigen::MatrixXd::Zero(dim, 1));
  Eigen::MatrixXd verts(dim, 1 << dim);
  for (int c = 0; c < (1 << dim); ++c)
    for (int r = 0; r < dim; ++r)
      verts(r, c) = (c >> r) & 1 ? side : 0.0;
  return from_hull_vertices(std::move(verts));
}

Body Body::simplex(int dim) {
  if (dim < 1) throw std::invalid_argument("simplex: dim must be >= 1");
  Eigen::MatrixXd verts = Eigen::MatrixXd::Zero(dim, dim + 1);
  verts.rightCols(dim) = Eigen::MatrixXd::Identity(dim, dim);
  return from_hull_vertices(std::move(verts));
}

Body Body::from_hull_vertices(Eigen::MatrixXd vertices) {
  if (vertices.cols() < 1)
    throw std::invalid_argument("polytope: vertex list must be nonempty");
  Body b;
  b.kind_ = Kind::kPolytope;
  b.dim_ = static_cast<int>(vertices.rows());
  b.vertices_ = sort_columns(vertices);
  return b;
}

const Eigen::MatrixXd& Body::vertices() const {
  if (!is_polytope())
    throw std::invalid_argument("vertices: body is not a polytope");
  return vertices_;
}

int Body::vertex_count() const {
  return is_polytope() ? static_cast<int>(vertices_.cols()) : 0;
}

double Body::radius() const {
  if (!is_ball()) throw std::invalid_argument("radius: body is not a ball");
  return radius_;
}

const Eigen::VectorXd& Body::center() const {
  if (!is_ball()) throw std::invalid_argument("center: body is not a ball");
  return center_;
}

bool Body::operator==(const Body& other) const {
  if (kind_ != other.kind_ || dim_ != other.dim_) return false;
  if (is_ball())
    return radius_ == other.radius_ && center_ == other.center_;
  return vertices_.rows() == other.vertices_.rows() &&
         vertices_.cols() == other.vertices_.cols() &&
         vertices_ == other.vertices_;
}

// --- LinearMap ---------------------------------------------------------------

LinearMap::LinearMap(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() < 1 || matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("LinearMap: matrix must be square");
  det_ = matrix_.partialPivLu().determinant();
}

LinearMap LinearMap::identity(int dim) {
  return LinearMap(Eigen::MatrixXd::Identity(dim, dim));
}

// --- operations ---------------------------------------------------------------

Body convex_hull(const Eigen::MatrixXd& points, int dim) {
  if (dim < 1) throw std::invalid_argument("convex_hull: dim must be >= 1");
  if (points.rows() != dim)
    throw std::invalid_argument("convex_hull: points are " +
                                std::to_string(points.rows()) +
                                "-dimensional, expected " + std::to_string(dim));
  if (points.cols() < 1)
    throw std::invalid_argument("convex_hull: need at least one point");
  const HullResult hr = convex_hull_of(points);
  Eigen::MatrixXd verts(dim, hr.extreme.size());
  for (std::size_t k = 0; k < hr.extreme.size(); ++k)
    verts.col(k) = points.col(hr.extreme[k]);
  return Body::from_hull_vertices(std::move(verts));
}

double volume(const Body& body) {
  if (body.is_ball())
    return unit_ball_volume(body.dim()) *
           std::pow(body.radius(), static_cast<double>(body.dim()));
  return convex_hull_of(body.vertices()).volume;
}

int affine_dim(const Body& body) {
  if (body.is_ball()) return body.radius() > 0.0 ? body.dim() : 0;
  return affine_rank_of(body.vertices());
}

Body minkowski_sum(const Body& a, const Body& b) {
  if (a.is_ball() || b.is_ball())
    throw std::invalid_argument(
        "minkowski_sum: balls are unsupported operands; use ball_approx");
  require_same_dim(a, b, "minkowski_sum");
  const Eigen::MatrixXd& va = a.vertices();
  const Eigen::MatrixXd& vb = b.vertices();
  Eigen::MatrixXd cand(a.dim(), va.cols() * vb.cols());
  int c = 0;
  for (int i = 0; i < va.cols(); ++i)
    for (int k = 0; k < vb.cols(); ++k) cand.col(c++) = va.col(i) + vb.col(k);
  return convex_hull(cand, a.dim());
}

Body scale(const Body& body, double factor) {
  if (factor < 0.0) throw std::invalid_argument("scale: factor must be >= 0");
  if (body.is_ball()) {
    return Body::ball(body.dim(), body.radius() * factor,
                      body.center() * factor);
  }
  if (factor == 0.0)
    return Body::from_hull_vertices(Eigen::MatrixXd::Zero(body.dim(), 1));
  return Body::from_hull_vertices(body.vertices() * factor);
}

Body translate(const Body& body, const Eigen::VectorXd& v) {
  if (v.size() != body.dim())
    throw std::invalid_argument("translate: vector has wrong dimension");
  if (body.is_ball())
    return Body::ball(body.dim(), body.radius(), body.center() + v);
  return Body::from_hull_vertices(body.vertices().colwise() + v);
}

Body linear_image(const Body& body, const LinearMap& map) {
  if (map.dim() != body.dim())
    throw std::invalid_argument("linear_image: dimension mismatch");
  if (body.is_ball()) {
    // Only similarities keep a ball a ball.
    const Eigen::MatrixXd gram = map.matrix().transpose() * map.matrix();
    const double s2 = gram.trace() / static_cast<double>(map.dim());
    const double dev =
        (gram - s2 * Eigen::MatrixXd::Identity(map.dim(), map.dim()))
            .cwiseAbs()
            .maxCoeff();
    if (s2 <= 0.0 || dev > 1e-9 * s2)
      throw std::invalid_argument(
          "linear_image: ball under a non-similarity map is unsupported; use "
          "ball_approx");
    return Body::ball(body.dim(), body.radius() * std::sqrt(s2),
                      map.matrix() * body.center());
  }
  return convex_hull(map.matrix() * body.vertices(), body.dim());
}

Body ball_approx(int dim, double radius, int point_count, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("ball_approx: dim must be >= 1");
  if (radius <= 0.0)
    throw std::invalid_argument("ball_approx: radius must be > 0");
  if (point_count < dim + 1)
    throw std::invalid_argument("ball_approx: need at least dim+1 points");
  for (std::uint64_t attempt = 0; attempt < 32; ++attempt) {
    rng::Stream stream(seed, rng::kSphere, attempt);
    Eigen::MatrixXd pts(dim, point_count);
    for (int c = 0; c < point_count; ++c) {
      Eigen::VectorXd g(dim);
      double norm = 0.0;
      do {
        for (int r = 0; r < dim; ++r) g(r) = stream.next_normal();
        norm = g.norm();
      } while (norm < 1e-12);
      pts.col(c) = g * (radius / norm);
    }
    Body b = convex_hull(pts, dim);
    if (affine_dim(b) == dim) return b;
  }
  throw degenerate_body_error(
      "ball_approx: could not draw a full-dimensional point set");
}

}  // namespace quermass
