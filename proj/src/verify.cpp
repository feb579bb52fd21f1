#include "quermass/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "quermass/rng.hpp"

namespace quermass {
namespace {

constexpr std::uint64_t kSuiteBase = 0x5355495445544147ull;

double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

// x^(1/r); r == 1 returns x itself so paired identical estimates still
// cancel bitwise.
double root(double x, int r) {
  return r == 1 ? x : std::pow(x, 1.0 / static_cast<double>(r));
}

std::uint64_t fingerprint(const std::vector<Body>& bodies) {
  std::uint64_t h = rng::mix64(0x626f6479ull ^ bodies.size());
  const auto add = [&h](std::uint64_t v) { h = rng::mix64(h ^ v); };
  for (const Body& b : bodies) {
    add(static_cast<std::uint64_t>(b.kind()));
    add(static_cast<std::uint64_t>(b.dim()));
    if (b.is_ball()) {
      add(std::bit_cast<std::uint64_t>(b.radius()));
      for (int r = 0; r < b.dim(); ++r)
        add(std::bit_cast<std::uint64_t>(b.center()(r)));
    } else {
      const Eigen::MatrixXd& v = b.vertices();
      add(static_cast<std::uint64_t>(v.cols()));
      for (int c = 0; c < v.cols(); ++c)
        for (int r = 0; r < v.rows(); ++r)
          add(std::bit_cast<std::uint64_t>(v(r, c)));
    }
  }
  return h;
}

CheckParams make_params(int n, int j, long samples, std::uint64_t seed) {
  CheckParams p;
  p.ambient = n;
  p.subspace_dim = j;
  p.samples = samples;
  p.master_seed = seed;
  return p;
}

InequalityReport finish(InequalityReport r, bool two_sided) {
  r.margin = r.lhs - r.rhs;
  r.satisfied = two_sided ? std::abs(r.margin) <= r.noise_bound
                          : r.margin >= -r.noise_bound;
  return r;
}

}  // namespace

bool is_homothetic(const Body& a, const Body& b, double tol) {
  if (a.dim() != b.dim()) return false;
  if (a.is_ball() && b.is_ball()) return true;
  if (a.is_ball() != b.is_ball()) return false;
  const Eigen::MatrixXd& va = a.vertices();
  const Eigen::MatrixXd& vb = b.vertices();
  if (va.cols() != vb.cols()) return false;
  const int m = static_cast<int>(va.cols());
  Eigen::MatrixXd ca = va.colwise() - Eigen::VectorXd(va.rowwise().mean());
  Eigen::MatrixXd cb = vb.colwise() - Eigen::VectorXd(vb.rowwise().mean());
  const double sa = ca.norm() / std::sqrt(static_cast<double>(m));
  const double sb = cb.norm() / std::sqrt(static_cast<double>(m));
  if (sa <= tol && sb <= tol) return true;  // both are points
  if (sa <= tol || sb <= tol) return false;
  ca /= sa;
  cb /= sb;
  std::vector<bool> used(m, false);
  for (int i = 0; i < m; ++i) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      if (used[k]) continue;
      const double d = (ca.col(i) - cb.col(k)).norm();
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    if (best < 0 || best_d > tol) return false;
    used[best] = true;
  }
  return true;
}

InequalityReport check_minkowski(const Body& k, const Body& l, int j,
                                 long samples, std::uint64_t master_seed) {
  std::vector<Body> pair(j - 1, k);
  pair.push_back(l);
  const auto est = paired_phi_batch(
      {pair, std::vector<Body>(j, k), std::vector<Body>(j, l)}, j, samples,
      master_seed);
  const Estimate& ekl = est[0];
  const Estimate& ek = est[1];
  const Estimate& el = est[2];

  InequalityReport r;
  r.name = "minkowski";
  r.lhs = ipow(ekl.value, j);
  r.rhs = ipow(ek.value, j - 1) * el.value;
  const double d_lhs = j * ipow(ekl.value, j - 1) * ekl.std_error;
  const double d_k =
      (j - 1) * ipow(ek.value, j - 2) * el.value * ek.std_error;
  const double d_l = ipow(ek.value, j - 1) * el.std_error;
  r.noise_bound = 3.0 * std::sqrt(d_lhs * d_lhs + d_k * d_k + d_l * d_l);
  r.equality_expected = is_homothetic(k, l);
  r.params = make_params(k.dim(), j, samples, master_seed);
  return finish(std::move(r), false);
}

InequalityReport check_af(const std::vector<Body>& bodies, int r, long samples,
                          std::uint64_t master_seed) {
  const int j = static_cast<int>(bodies.size());
  if (r < 1 || r > j)
    throw std::invalid_argument("check_af: need 0 < r <= j");
  std::vector<std::vector<Body>> tuples;
  tuples.push_back(bodies);
  for (int i = 0; i < r; ++i) {
    std::vector<Body> t(r, bodies[i]);
    for (int tail = r; tail < j; ++tail) t.push_back(bodies[tail]);
    tuples.push_back(std::move(t));
  }
  const auto est = paired_phi_batch(tuples, j, samples, master_seed);

  InequalityReport rep;
  rep.name = "aleksandrov_fenchel";
  rep.lhs = est[0].value;
  double rhs = 1.0;
  for (int i = 1; i <= r; ++i) rhs *= root(est[i].value, r);
  rep.rhs = rhs;
  double var = est[0].std_error * est[0].std_error;
  for (int i = 1; i <= r; ++i) {
    const double d = rhs * est[i].std_error / (r * est[i].value);
    var += d * d;
  }
  rep.noise_bound = 3.0 * std::sqrt(var);
  rep.equality_expected = false;  // equality conditions unknown
  rep.params = make_params(bodies[0].dim(), j, samples, master_seed);
  rep.params.r = r;
  return finish(std::move(rep), false);
}

InequalityReport check_product(const std::vector<Body>& bodies, long samples,
                               std::uint64_t master_seed) {
  const int j = static_cast<int>(bodies.size());
  std::vector<std::vector<Body>> tuples;
  tuples.push_back(bodies);
  for (int i = 0; i < j; ++i)
    tuples.emplace_back(std::vector<Body>(j, bodies[i]));
  const auto est = paired_phi_batch(tuples, j, samples, master_seed);

  InequalityReport rep;
  rep.name = "product";
  rep.lhs = ipow(est[0].value, j);
  double rhs = 1.0;
  for (int i = 1; i <= j; ++i) rhs *= est[i].value;
  rep.rhs = rhs;
  const double d_lhs = j * ipow(est[0].value, j - 1) * est[0].std_error;
  double var = d_lhs * d_lhs;
  for (int i = 1; i <= j; ++i) {
    const double d = rhs / est[i].value * est[i].std_error;
    var += d * d;
  }
  rep.noise_bound = 3.0 * std::sqrt(var);
  rep.equality_expected = true;
  for (int i = 1; i < j; ++i)
    rep.equality_expected =
        rep.equality_expected && is_homothetic(bodies[0], bodies[i]);
  rep.params = make_params(bodies[0].dim(), j, samples, master_seed);
  return finish(std::move(rep), false);
}

InequalityReport check_bm(const Body& k, const Body& l, double epsilon, int j,
                          long samples, std::uint64_t master_seed) {
  if (epsilon <= 0.0)
    throw std::invalid_argument("check_bm: epsilon must be > 0");
  const Body sum = minkowski_sum(k, scale(l, epsilon));
  const auto est = paired_phi_batch(
      {std::vector<Body>(j, sum), std::vector<Body>(j, k),
       std::vector<Body>(j, l)},
      j, samples, master_seed);

  InequalityReport rep;
  rep.name = "brunn_minkowski";
  rep.lhs = root(est[0].value, j);
  rep.rhs = root(est[1].value, j) + epsilon * root(est[2].value, j);
  const double inv_j = 1.0 / static_cast<double>(j);
  const auto d_root = [&](const Estimate& e) {
    return inv_j * std::pow(e.value, inv_j - 1.0) * e.std_error;
  };
  const double d_sum = d_root(est[0]);
  const double d_k = d_root(est[1]);
  const double d_l = epsilon * d_root(est[2]);
  rep.noise_bound = 3.0 * std::sqrt(d_sum * d_sum + d_k * d_k + d_l * d_l);
  rep.equality_expected = is_homothetic(k, l);
  rep.params = make_params(k.dim(), j, samples, master_seed);
  rep.params.epsilon = epsilon;
  return finish(std::move(rep), false);
}

InequalityReport check_sl_invariance(const std::vector<Body>& bodies,
                                     const LinearMap& g, long samples,
                                     std::uint64_t master_seed) {
  if (!g.unimodular())
    throw std::invalid_argument(
        "check_sl_invariance: map is not unimodular (|det-1| > 1e-9)");
  const int j = static_cast<int>(bodies.size());
  std::vector<Body> transformed;
  transformed.reserve(bodies.size());
  for (const Body& b : bodies) transformed.push_back(linear_image(b, g));

  // Input-derived seeds: equal inputs share a stream (so the margin cancels
  // bitwise), distinct inputs get independent streams (pairing cannot cancel
  // noise here anyway, since g changes the integrand per subspace).
  const std::uint64_t seed_lhs =
      rng::derive(master_seed, rng::kDerive, fingerprint(transformed));
  const std::uint64_t seed_rhs =
      rng::derive(master_seed, rng::kDerive, fingerprint(bodies));
  const Estimate lhs = phi_mixed(transformed, samples, seed_lhs);
  const Estimate rhs = phi_mixed(bodies, samples, seed_rhs);

  InequalityReport rep;
  rep.name = "sl_invariance";
  rep.lhs = lhs.value;
  rep.rhs = rhs.value;
  rep.noise_bound = 3.0 * std::hypot(lhs.std_error, rhs.std_error);
  rep.equality_expected = true;
  rep.params = make_params(bodies[0].dim(), j, samples, master_seed);
  return finish(std::move(rep), true);
}

Body random_polytope(SampleStream stream, int dim, int vertex_count) {
  if (dim < 1) throw std::invalid_argument("random_polytope: dim must be >= 1");
  if (vertex_count < dim + 1)
    throw std::invalid_argument("random_polytope: need at least dim+1 points");
  rng::Stream g(stream.master_seed, rng::kCorpus, stream.index);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::MatrixXd pts(dim, vertex_count);
    for (int c = 0; c < vertex_count; ++c)
      for (int r = 0; r < dim; ++r) pts(r, c) = g.next_normal();
    Body b = convex_hull(pts, dim);
    if (affine_dim(b) == dim) return b;
  }
  throw degenerate_body_error(
      "random_polytope: retries exhausted without a full-dimensional hull");
}

LinearMap random_sl_matrix(SampleStream stream, int n) {
  if (n < 1) throw std::invalid_argument("random_sl_matrix: n must be >= 1");
  if (n == 1) return LinearMap(Eigen::MatrixXd::Identity(1, 1));
  rng::Stream g(stream.master_seed, rng::kCorpus, stream.index);

  Eigen::MatrixXd a(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) a(r, c) = g.next_normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd rot = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  for (int c = 0; c < n; ++c)
    if (qr.matrixQR()(c, c) < 0.0) rot.col(c) = -rot.col(c);
  if (rot.partialPivLu().determinant() < 0.0) rot.col(n - 1) = -rot.col(n - 1);

  // Unit-product diagonal stretch.
  Eigen::VectorXd logs(n);
  double acc = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    logs(i) = (2.0 * g.next_double() - 1.0) * 0.4;
    acc += logs(i);
  }
  logs(n - 1) = -acc;
  Eigen::MatrixXd m = rot * logs.array().exp().matrix().asDiagonal();

  // One off-diagonal shear (determinant 1).
  const int p = static_cast<int>(g.next_u64() % n);
  const int q =
      static_cast<int>((p + 1 + g.next_u64() % (n - 1)) % static_cast<unsigned>(n));
  const double c = (2.0 * g.next_double() - 1.0) * 0.5;
  m.col(q) += c * m.col(p);

  // Push the determinant to 1 within rounding.
  for (int pass = 0; pass < 3; ++pass) {
    const double det = m.partialPivLu().determinant();
    if (std::abs(det - 1.0) <= 1e-12) break;
    m *= std::pow(det, -1.0 / static_cast<double>(n));
  }
  return LinearMap(std::move(m));
}

SuiteReport run_suite(const SuiteConfig& config) {
  SuiteReport report;
  report.corpus_seed = config.master_seed;
  const int n = config.ambient;
  const int j = config.subspace_dim;
  const int nv = config.corpus_vertices;

  for (const std::string& suite : config.suites) {
    std::uint64_t suite_id;
    if (suite == "minkowski") suite_id = 1;
    else if (suite == "af") suite_id = 2;
    else if (suite == "product") suite_id = 3;
    else if (suite == "bm") suite_id = 4;
    else if (suite == "sl") suite_id = 5;
    else
      throw std::invalid_argument("run_suite: unknown suite \"" + suite + "\"");

    for (int inst = 0; inst < config.instances; ++inst) {
      const std::uint64_t inst_seed = rng::derive(
          config.master_seed, kSuiteBase + suite_id,
          static_cast<std::uint64_t>(inst));
      InequalityReport rep;
      if (suite == "minkowski" || suite == "bm") {
        const Body k = random_polytope({inst_seed, 0}, n, nv);
        Body l = random_polytope({inst_seed, 1}, n, nv);
        if (config.homothetic) {
          rng::Stream h(inst_seed, rng::kDerive, 1);
          const double c = 0.5 + 1.5 * h.next_double();
          Eigen::VectorXd t(n);
          for (int r = 0; r < n; ++r) t(r) = h.next_normal();
          l = translate(scale(k, c), t);
        }
        rep = suite == "minkowski"
                  ? check_minkowski(k, l, j, config.samples, inst_seed)
                  : check_bm(k, l, config.epsilon, j, config.samples,
                             inst_seed);
      } else {
        std::vector<Body> bodies;
        bodies.reserve(j);
        for (int b = 0; b < j; ++b)
          bodies.push_back(
              random_polytope({inst_seed, static_cast<std::uint64_t>(b)}, n, nv));
        if (config.homothetic && suite == "product") {
          rng::Stream h(inst_seed, rng::kDerive, 1);
          for (int b = 1; b < j; ++b) {
            const double c = 0.5 + 1.5 * h.next_double();
            Eigen::VectorXd t(n);
            for (int r = 0; r < n; ++r) t(r) = h.next_normal();
            bodies[b] = translate(scale(bodies[0], c), t);
          }
        }
        if (suite == "af") {
          rep = check_af(bodies, config.af_r, config.samples, inst_seed);
        } else if (suite == "product") {
          rep = check_product(bodies, config.samples, inst_seed);
        } else {
          const LinearMap g = random_sl_matrix({inst_seed, 100}, n);
          rep = check_sl_invariance(bodies, g, config.samples, inst_seed);
        }
      }
      if (rep.satisfied)
        ++report.satisfied_count;
      else
        ++report.violated_count;
      report.reports.push_back(std::move(rep));
    }
  }
  return report;
}

}  // namespace quermass
