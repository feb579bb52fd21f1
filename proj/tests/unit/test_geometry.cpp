#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quermass/convex_hull.hpp"
#include "quermass/geometry.hpp"
#include "quermass/rng.hpp"

using namespace quermass;

namespace {

Eigen::MatrixXd random_points(std::uint64_t seed, int dim, int count) {
  rng::Stream g(seed, rng::kCorpus, 0);
  Eigen::MatrixXd pts(dim, count);
  for (int c = 0; c < count; ++c)
    for (int r = 0; r < dim; ++r) pts(r, c) = g.next_normal();
  return pts;
}

// Independent 2D area oracle: shoelace over the ordered boundary.
double shoelace(const Eigen::MatrixXd& pts, const std::vector<int>& boundary) {
  double acc = 0.0;
  const std::size_t m = boundary.size();
  for (std::size_t k = 0; k < m; ++k) {
    const int a = boundary[k];
    const int b = boundary[(k + 1) % m];
    acc += pts(0, a) * pts(1, b) - pts(0, b) * pts(1, a);
  }
  return 0.5 * acc;
}

}  // namespace

TEST_CASE("convex_hull drops interior and boundary-interior points") {
  Eigen::MatrixXd sq(2, 5);
  sq << 0, 1, 0, 1, 0.5,
        0, 0, 1, 1, 0.5;
  const Body b = convex_hull(sq, 2);
  CHECK(b.vertex_count() == 4);

  Eigen::MatrixXd one(3, 1);
  one << 0.3, -1.0, 2.5;
  const Body p = convex_hull(one, 3);
  CHECK(p.vertex_count() == 1);
  CHECK(p.vertices().col(0) == one.col(0));

  // cube corners plus the six face centers
  Eigen::MatrixXd pts(3, 14);
  int k = 0;
  for (int c = 0; c < 8; ++c, ++k) {
    pts(0, k) = c & 1;
    pts(1, k) = (c >> 1) & 1;
    pts(2, k) = (c >> 2) & 1;
  }
  const double fc[6][3] = {{.5, .5, 0}, {.5, .5, 1}, {.5, 0, .5},
                           {.5, 1, .5}, {0, .5, .5}, {1, .5, .5}};
  for (const auto& f : fc) {
    pts(0, k) = f[0];
    pts(1, k) = f[1];
    pts(2, k) = f[2];
    ++k;
  }
  CHECK(convex_hull(pts, 3).vertex_count() == 8);
}

TEST_CASE("convex_hull is idempotent") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    for (int dim : {2, 3, 4}) {
      const Body b = convex_hull(random_points(seed, dim, 30), dim);
      const Body again = convex_hull(b.vertices(), dim);
      CHECK(again.vertices() == b.vertices());
    }
  }
}

TEST_CASE("convex_hull rejects bad input") {
  CHECK_THROWS_AS(convex_hull(Eigen::MatrixXd::Zero(2, 3), 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(convex_hull(Eigen::MatrixXd::Zero(3, 0), 3),
                  std::invalid_argument);
}

TEST_CASE("near-duplicate vertices merge") {
  Eigen::MatrixXd pts(2, 4);
  pts << 0, 1, 0, 1 + 1e-14,
         0, 0, 1, 1e-14;
  const Body b = convex_hull(pts, 2);
  CHECK(b.vertex_count() == 3);
}

TEST_CASE("volume of exact shapes") {
  CHECK(volume(Body::cube(3, 1.0)) == 1.0);
  CHECK(volume(Body::simplex(3)) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  Eigen::MatrixXd seg(2, 2);
  seg << 0, 1,
         0, 0;
  CHECK(volume(convex_hull(seg, 2)) == 0.0);
  CHECK(volume(Body::ball(2, 2.0)) ==
        doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("2d volume agrees with the shoelace oracle") {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const Eigen::MatrixXd pts = random_points(seed, 2, 25);
    const HullResult hr = convex_hull_of(pts);
    CHECK(hr.volume ==
          doctest::Approx(shoelace(pts, hr.boundary)).epsilon(1e-12));
  }
}

TEST_CASE("volume doubles 2^d under self-sum") {
  for (int dim : {2, 3}) {
    const Body p = convex_hull(random_points(5, dim, 12), dim);
    const Body pp = minkowski_sum(p, p);
    CHECK(volume(pp) ==
          doctest::Approx(std::pow(2.0, dim) * volume(p)).epsilon(1e-9));
  }
}

TEST_CASE("volume is monotone under vertex inclusion") {
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    const Eigen::MatrixXd pts = random_points(seed, 3, 20);
    const Body inner = convex_hull(pts.leftCols(10), 3);
    const Body outer = convex_hull(pts, 3);
    CHECK(volume(inner) <= volume(outer) + 1e-12);
  }
}

TEST_CASE("minkowski_sum basics") {
  const Body sq = Body::cube(2, 1.0);
  const Body sum = minkowski_sum(sq, sq);
  CHECK(sum == Body::cube(2, 2.0));

  Eigen::MatrixXd segpts(2, 2);
  segpts << 0, 0,
            0, 1;
  const Body rect = minkowski_sum(sq, convex_hull(segpts, 2));
  CHECK(volume(rect) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rect.vertex_count() == 4);

  Eigen::MatrixXd vpt(2, 1);
  vpt << 3, -2;
  const Body shifted = minkowski_sum(sq, convex_hull(vpt, 2));
  CHECK(shifted == translate(sq, vpt.col(0)));

  CHECK_THROWS_AS(minkowski_sum(sq, Body::ball(2, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(minkowski_sum(sq, Body::cube(3, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("scale") {
  CHECK(scale(Body::cube(3, 1.0), 2.0) == Body::cube(3, 2.0));
  const Body pt = scale(Body::simplex(3), 0.0);
  CHECK(pt.vertex_count() == 1);
  CHECK(pt.vertices().col(0).norm() == 0.0);
  CHECK(scale(Body::ball(2, 1.0), 3.0).radius() == 3.0);
  CHECK_THROWS_AS(scale(Body::cube(2, 1.0), -1.0), std::invalid_argument);
}

TEST_CASE("translate") {
  Eigen::VectorXd v(2);
  v << 1, 1;
  const Body moved = translate(Body::cube(2, 1.0), v);
  CHECK(moved.vertices().col(0) == v);
  CHECK(volume(moved) == volume(Body::cube(2, 1.0)));
  const Body p = convex_hull(random_points(8, 3, 9), 3);
  CHECK(translate(p, Eigen::VectorXd::Zero(3)) == p);
  CHECK(volume(translate(p, Eigen::VectorXd::Ones(3))) ==
        doctest::Approx(volume(p)).epsilon(1e-12));
}

TEST_CASE("linear_image") {
  const Body sq = Body::cube(2, 1.0);
  CHECK(linear_image(sq, LinearMap::identity(2)) == sq);

  Eigen::MatrixXd d(2, 2);
  d << 2, 0,
       0, 0.5;
  CHECK(volume(linear_image(sq, LinearMap(d))) ==
        doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd shear(2, 2);
  shear << 1, 1,
           0, 1;
  CHECK(volume(linear_image(sq, LinearMap(shear))) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // |det| multiplies the volume
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    rng::Stream g(seed, rng::kCorpus, 1);
    Eigen::MatrixXd mat(3, 3);
    for (int c = 0; c < 3; ++c)
      for (int r = 0; r < 3; ++r) mat(r, c) = g.next_normal();
    const LinearMap map(mat);
    const Body p = convex_hull(random_points(seed, 3, 10), 3);
    CHECK(volume(linear_image(p, map)) ==
          doctest::Approx(std::abs(map.determinant()) * volume(p))
              .epsilon(1e-9));
  }

  CHECK_THROWS_AS(linear_image(Body::ball(2, 1.0), LinearMap(shear)),
                  std::invalid_argument);
  // rotations and scalings keep balls analytic
  Eigen::MatrixXd rot(2, 2);
  rot << 0, -2,
         2, 0;
  const Body im = linear_image(Body::ball(2, 1.0), LinearMap(rot));
  CHECK(im.is_ball());
  CHECK(im.radius() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("LinearMap caches determinant and flags unimodularity") {
  Eigen::MatrixXd m(2, 2);
  m << 3, 1,
       0, 2;
  const LinearMap map(m);
  CHECK(map.determinant() == doctest::Approx(6.0).epsilon(1e-12));
  CHECK_FALSE(map.unimodular());
  CHECK(LinearMap::identity(4).unimodular());
}

TEST_CASE("affine_dim") {
  Eigen::MatrixXd seg(3, 2);
  seg << 0, 1,
         0, 0,
         0, 0;
  CHECK(affine_dim(convex_hull(seg, 3)) == 1);
  CHECK(affine_dim(Body::cube(3, 1.0)) == 3);
  CHECK(affine_dim(convex_hull(Eigen::MatrixXd::Zero(3, 1), 3)) == 0);
  CHECK(affine_dim(Body::ball(3, 1.0)) == 3);
  CHECK(affine_dim(Body::ball(3, 0.0)) == 0);
}

TEST_CASE("ball_approx") {
  const Body quad = ball_approx(2, 1.0, 4, 11);
  CHECK(quad.vertex_count() == 4);
  CHECK(volume(quad) <= std::numbers::pi);

  const Body b3 = ball_approx(3, 1.0, 500, 2);
  CHECK(std::abs(volume(b3) - unit_ball_volume(3)) <=
        0.05 * unit_ball_volume(3));

  const Body b = ball_approx(3, 2.5, 40, 5);
  for (int c = 0; c < b.vertex_count(); ++c)
    CHECK(b.vertices().col(c).norm() == doctest::Approx(2.5).epsilon(1e-12));

  CHECK_THROWS_AS(ball_approx(3, 1.0, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(ball_approx(2, 0.0, 5, 0), std::invalid_argument);
}
