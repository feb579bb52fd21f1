#include "quermass/quermassintegrals.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "quermass/convex_hull.hpp"
#include "quermass/mixed_volume.hpp"
#include "quermass/rng.hpp"

namespace quermass {
namespace {

std::atomic<int> g_max_threads{0};  // 0 = hardware default

int effective_threads(long samples) {
  int limit = g_max_threads.load(std::memory_order_relaxed);
  if (limit <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    limit = hw == 0 ? 1 : static_cast<int>(hw);
  }
  // Below ~4 chunks of work threads cost more than they pay.
  const long chunks = (samples + 255) / 256;
  return static_cast<int>(std::clamp<long>(chunks, 1, limit));
}

enum class TupleMode {
  kConstant,  // all arguments are one analytic ball: constant integrand
  kDirect,    // all arguments equal: integrand is the projection volume
  kMixed,     // general: polarization of the projected bodies
};

struct TuplePlan {
  TupleMode mode = TupleMode::kMixed;
  std::vector<int> members;   // indices into the unique-body table
  double constant_integrand = 0.0;
};

struct BatchPlan {
  int ambient = 0;
  int j = 0;
  std::vector<Body> unique;        // distinct polytopes used by sampling
  std::vector<char> needs_mixed;   // unique body used by a kMixed tuple
  std::vector<TuplePlan> tuples;
};

BatchPlan plan_batch(const std::vector<std::vector<Body>>& tuples, int j) {
  BatchPlan plan;
  plan.j = j;
  if (tuples.empty()) return plan;
  plan.ambient = tuples[0].empty() ? 0 : tuples[0][0].dim();
  const int n = plan.ambient;
  if (j < 1 || j > n)
    throw std::invalid_argument("phi: need 1 <= j <= n, got j=" +
                                std::to_string(j) + ", n=" + std::to_string(n));
  for (const auto& tuple : tuples) {
    if (static_cast<int>(tuple.size()) != j)
      throw std::invalid_argument("phi: tuple has " +
                                  std::to_string(tuple.size()) +
                                  " bodies, expected j=" + std::to_string(j));
    for (const Body& b : tuple)
      if (b.dim() != n)
        throw std::invalid_argument("phi: all bodies must live in R^" +
                                    std::to_string(n));

    TuplePlan tp;
    bool all_equal = true;
    for (const Body& b : tuple) all_equal = all_equal && b == tuple[0];
    const bool any_ball =
        std::any_of(tuple.begin(), tuple.end(),
                    [](const Body& b) { return b.is_ball(); });
    if (any_ball && !all_equal)
      throw std::invalid_argument(
          "phi: analytic balls may appear only when every argument is the "
          "same ball; apply ball_approx first");
    if (any_ball) {
      // Projections of a ball are balls of the same radius, so the integrand
      // is the constant (r^j)^-n.
      const double r = tuple[0].radius();
      if (r <= 0.0)
        throw degenerate_body_error("phi: ball with zero radius is degenerate");
      tp.mode = TupleMode::kConstant;
      tp.constant_integrand =
          std::pow(std::pow(r, static_cast<double>(j)),
                   -static_cast<double>(n));
      plan.tuples.push_back(std::move(tp));
      continue;
    }
    for (const Body& b : tuple) {
      if (affine_dim(b) < n)
        throw degenerate_body_error(
            "phi: lower-dimensional body (affine dimension " +
            std::to_string(affine_dim(b)) + " < " + std::to_string(n) +
            "); the integrand would be unbounded");
      int idx = -1;
      for (std::size_t u = 0; u < plan.unique.size(); ++u)
        if (plan.unique[u] == b) {
          idx = static_cast<int>(u);
          break;
        }
      if (idx < 0) {
        idx = static_cast<int>(plan.unique.size());
        plan.unique.push_back(b);
      }
      tp.members.push_back(idx);
    }
    tp.mode = all_equal ? TupleMode::kDirect : TupleMode::kMixed;
    plan.tuples.push_back(std::move(tp));
  }
  plan.needs_mixed.assign(plan.unique.size(), 0);
  for (const TuplePlan& tp : plan.tuples)
    if (tp.mode == TupleMode::kMixed)
      for (int u : tp.members) plan.needs_mixed[u] = 1;
  return plan;
}

// One evaluation of every tuple against the subspace drawn at stream index
// `index`. Returns false (and the offending tuple) when a projected mixed
// volume came out nonpositive.
bool evaluate_sample(const BatchPlan& plan, std::uint64_t master_seed,
                     std::uint64_t index, double* y_out) {
  const int n = plan.ambient;
  const int j = plan.j;
  const Subspace xi = haar_sample({master_seed, index}, n, j);
  const Eigen::MatrixXd basis_t = xi.basis.transpose();

  // Project and hull-reduce each needed body once.
  std::vector<Eigen::MatrixXd> proj(plan.unique.size());
  std::vector<double> proj_vol(plan.unique.size(), 0.0);
  for (std::size_t u = 0; u < plan.unique.size(); ++u) {
    const Eigen::MatrixXd raw = basis_t * plan.unique[u].vertices();
    const HullResult hr = convex_hull_of(raw);
    proj_vol[u] = hr.volume;
    if (plan.needs_mixed[u]) {
      Eigen::MatrixXd red(j, hr.extreme.size());
      for (std::size_t k = 0; k < hr.extreme.size(); ++k)
        red.col(k) = raw.col(hr.extreme[k]);
      proj[u] = std::move(red);
    }
  }

  const double omega_j = unit_ball_volume(j);
  bool ok = true;
  for (std::size_t t = 0; t < plan.tuples.size(); ++t) {
    const TuplePlan& tp = plan.tuples[t];
    double integrand = 0.0;
    switch (tp.mode) {
      case TupleMode::kConstant:
        integrand = tp.constant_integrand;
        break;
      case TupleMode::kDirect: {
        const double v = proj_vol[tp.members[0]];
        if (v <= 0.0) {
          ok = false;
          break;
        }
        integrand = std::pow(v / omega_j, -static_cast<double>(n));
        break;
      }
      case TupleMode::kMixed: {
        std::vector<Eigen::MatrixXd> mats;
        mats.reserve(tp.members.size());
        for (int u : tp.members) mats.push_back(proj[u]);
        const double mv = detail::mixed_volume_raw(mats).value;
        if (mv <= 0.0) {
          ok = false;
          break;
        }
        integrand = std::pow(mv / omega_j, -static_cast<double>(n));
        break;
      }
    }
    if (!ok) break;
    y_out[t] = integrand;
  }
  return ok;
}

Estimate reduce_tuple(const double* y, long n_samples, int ambient, int j,
                      std::uint64_t master_seed) {
  const double omega_n = unit_ball_volume(ambient);
  double lo = y[0], hi = y[0];
  for (long m = 1; m < n_samples; ++m) {
    lo = std::min(lo, y[m]);
    hi = std::max(hi, y[m]);
  }
  Estimate e;
  e.samples = n_samples;
  e.ambient = ambient;
  e.subspace_dim = j;
  e.master_seed = master_seed;
  const double inv_n = 1.0 / static_cast<double>(ambient);
  if (lo == hi) {
    // Constant integrand: the mean is the common value, exactly.
    e.value = omega_n * std::pow(lo, -inv_n);
    e.std_error = 0.0;
    return e;
  }
  rng::NeumaierSum sum;
  for (long m = 0; m < n_samples; ++m) sum.add(y[m]);
  const double mean = sum.total() / static_cast<double>(n_samples);
  rng::NeumaierSum sq;
  for (long m = 0; m < n_samples; ++m) {
    const double d = y[m] - mean;
    sq.add(d * d);
  }
  const double var = sq.total() / static_cast<double>(n_samples - 1);
  const double sem = std::sqrt(var / static_cast<double>(n_samples));
  e.value = omega_n * std::pow(mean, -inv_n);
  // Delta method through the -1/n power of the sample mean.
  e.std_error = omega_n * inv_n * std::pow(mean, -inv_n - 1.0) * sem;
  return e;
}

}  // namespace

void set_max_threads(int threads) {
  g_max_threads.store(threads < 0 ? 0 : threads, std::memory_order_relaxed);
}

int max_threads() { return g_max_threads.load(std::memory_order_relaxed); }

std::vector<Estimate> paired_phi_batch(
    const std::vector<std::vector<Body>>& tuples, int j, long samples,
    std::uint64_t master_seed) {
  if (tuples.empty()) return {};
  if (samples < 2)
    throw std::invalid_argument("phi: need samples >= 2 for a standard error");
  const BatchPlan plan = plan_batch(tuples, j);
  const std::size_t t_count = plan.tuples.size();
  const long n_samples = samples;

  std::vector<double> y(t_count * static_cast<std::size_t>(n_samples));
  std::vector<char> bad(static_cast<std::size_t>(n_samples), 0);

  const int workers = effective_threads(n_samples);
  std::atomic<long> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto work = [&]() {
    std::vector<double> row(t_count);
    try {
      for (;;) {
        const long start = next.fetch_add(256, std::memory_order_relaxed);
        if (start >= n_samples) break;
        const long stop = std::min(n_samples, start + 256);
        for (long m = start; m < stop; ++m) {
          // Sample m uses stream index m+1; index is the pairing key.
          if (!evaluate_sample(plan, master_seed,
                               static_cast<std::uint64_t>(m) + 1, row.data())) {
            bad[m] = 1;
            continue;
          }
          for (std::size_t t = 0; t < t_count; ++t)
            y[t * n_samples + m] = row[t];
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  if (workers > 1) {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
  } else {
    work();
  }
  if (first_error) std::rethrow_exception(first_error);
  for (long m = 0; m < n_samples; ++m)
    if (bad[m])
      throw degenerate_body_error(
          "phi: nonpositive projected mixed volume at sample " +
          std::to_string(m + 1) + " (lower-dimensional input?)");

  std::vector<Estimate> out;
  out.reserve(t_count);
  for (std::size_t t = 0; t < t_count; ++t)
    out.push_back(reduce_tuple(y.data() + t * n_samples, n_samples,
                               plan.ambient, j, master_seed));
  return out;
}

Estimate phi_mixed(const std::vector<Body>& bodies, long samples,
                   std::uint64_t master_seed) {
  if (bodies.empty())
    throw std::invalid_argument("phi_mixed: need at least one body");
  return paired_phi_batch({bodies}, static_cast<int>(bodies.size()), samples,
                          master_seed)[0];
}

Estimate phi(const Body& body, int j, long samples,
             std::uint64_t master_seed) {
  const int n = body.dim();
  if (j < 0 || j > n)
    throw std::invalid_argument("phi: need 0 <= j <= n, got j=" +
                                std::to_string(j) + ", n=" + std::to_string(n));
  if (j == 0) {
    return Estimate{unit_ball_volume(n), 0.0, 0, n, 0, master_seed};
  }
  if (j == n) {
    return Estimate{volume(body), 0.0, 0, n, n, master_seed};
  }
  return phi_mixed(std::vector<Body>(j, body), samples, master_seed);
}

Estimate phi_pair(const Body& k, const Body& l, int j, long samples,
                  std::uint64_t master_seed) {
  if (j < 1) throw std::invalid_argument("phi_pair: need j >= 1");
  std::vector<Body> bodies(j - 1, k);
  bodies.push_back(l);
  return phi_mixed(bodies, samples, master_seed);
}

Estimate phi_ith_mixed(const Body& k, const Body& l, int i, int j,
                       int ball_points, long samples,
                       std::uint64_t master_seed) {
  const int n = k.dim();
  if (i < 0 || i >= j || j > n)
    throw std::invalid_argument("phi_ith_mixed: need 0 <= i < j <= n");
  std::vector<Body> bodies(j - i - 1, k);
  bodies.push_back(l);
  if (i > 0) {
    const Body b = ball_approx(n, 1.0, ball_points, master_seed);
    for (int c = 0; c < i; ++c) bodies.push_back(b);
  }
  return phi_mixed(bodies, samples, master_seed);
}

Estimate phi_ith(const Body& k, int i, int j, int ball_points, long samples,
                 std::uint64_t master_seed) {
  const int n = k.dim();
  if (i < 0 || i >= j || j > n)
    throw std::invalid_argument("phi_ith: need 0 <= i < j <= n");
  std::vector<Body> bodies(j - i, k);
  if (i > 0) {
    const Body b = ball_approx(n, 1.0, ball_points, master_seed);
    for (int c = 0; c < i; ++c) bodies.push_back(b);
  }
  return phi_mixed(bodies, samples, master_seed);
}

double phi_exact_2d(const Body& polygon, int quadrature_points) {
  if (!polygon.is_polytope() || polygon.dim() != 2)
    throw std::invalid_argument("phi_exact_2d: need a polygon in R^2");
  if (quadrature_points < 16)
    throw std::invalid_argument("phi_exact_2d: need at least 16 subintervals");
  const HullResult hr = convex_hull_of(polygon.vertices());
  if (hr.affine_rank < 2)
    throw degenerate_body_error("phi_exact_2d: polygon is degenerate");
  const Eigen::MatrixXd& v = polygon.vertices();
  const std::vector<int>& ccw = hr.boundary;

  // Support width w(theta) = max<v,u> - min<v,u> is smooth except where the
  // maximizing vertex switches, which happens at the edge-normal angles.
  // Splitting the quadrature there restores the Simpson convergence order.
  std::vector<double> breaks;
  const double pi = std::numbers::pi;
  for (std::size_t e = 0; e < ccw.size(); ++e) {
    const int a = ccw[e];
    const int b = ccw[(e + 1) % ccw.size()];
    const double ex = v(0, b) - v(0, a);
    const double ey = v(1, b) - v(1, a);
    double ang = std::atan2(-ex, ey);  // outward normal of a CCW edge
    ang = std::fmod(ang, pi);
    if (ang < 0.0) ang += pi;
    breaks.push_back(ang);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return b - a < 1e-12; }),
               breaks.end());

  const auto width = [&](double theta) {
    const double ux = std::cos(theta), uy = std::sin(theta);
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (int c = 0; c < v.cols(); ++c) {
      const double s = ux * v(0, c) + uy * v(1, c);
      hi = std::max(hi, s);
      lo = std::min(lo, s);
    }
    return hi - lo;
  };
  const auto integrand = [&](double theta) {
    const double w = width(theta) / 2.0;  // omega_1 = 2
    return 1.0 / (w * w);
  };

  struct Segment {
    double a, b;
  };
  std::vector<Segment> segs;
  if (breaks.empty()) {
    segs.push_back({0.0, pi});
  } else {
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
      segs.push_back({breaks[k], breaks[k + 1]});
    segs.push_back({breaks.back(), breaks.front() + pi});
  }

  rng::NeumaierSum total;
  for (const Segment& s : segs) {
    const double len = s.b - s.a;
    if (len <= 0.0) continue;
    int n_int = static_cast<int>(
        std::lround(static_cast<double>(quadrature_points) * len / pi));
    n_int = std::max(2, n_int + (n_int & 1));
    const double h = len / n_int;
    rng::NeumaierSum simpson;
    simpson.add(integrand(s.a));
    simpson.add(integrand(s.b));
    for (int k = 1; k < n_int; ++k)
      simpson.add((k & 1 ? 4.0 : 2.0) * integrand(s.a + h * k));
    total.add(simpson.total() * h / 3.0);
  }
  const double mean = total.total() / pi;
  return unit_ball_volume(2) * std::pow(mean, -0.5);
}

}  // namespace quermass
