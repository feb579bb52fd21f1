#include "quermass/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "quermass/rng.hpp"

namespace quermass {
namespace {

constexpr double kCoplanarFactor = 1e-10;
constexpr double kDuplicateFactor = 1e-12;

double bbox_diameter(const Eigen::MatrixXd& pts) {
  if (pts.cols() == 0) return 0.0;
  const Eigen::VectorXd lo = pts.rowwise().minCoeff();
  const Eigen::VectorXd hi = pts.rowwise().maxCoeff();
  return (hi - lo).norm();
}

bool lex_less(const Eigen::MatrixXd& pts, int a, int b) {
  for (int r = 0; r < pts.rows(); ++r) {
    if (pts(r, a) < pts(r, b)) return true;
    if (pts(r, a) > pts(r, b)) return false;
  }
  return false;
}

// Representative column indices after merging near-duplicates; the earliest
// column of each cluster survives. Sorted scan over the first coordinate.
std::vector<int> dedup_columns(const Eigen::MatrixXd& pts, double tol) {
  const int m = static_cast<int>(pts.cols());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return pts(0, a) < pts(0, b); });
  std::vector<int> rep(m);
  std::iota(rep.begin(), rep.end(), 0);
  std::size_t win = 0;
  for (std::size_t k = 1; k < order.size(); ++k) {
    while (pts(0, order[k]) - pts(0, order[win]) > tol) ++win;
    for (std::size_t p = win; p < k; ++p) {
      const int a = order[p];
      const int b = order[k];
      if ((pts.col(a) - pts.col(b)).norm() <= tol) {
        const int ra = std::min(rep[a], rep[b]);
        rep[a] = ra;
        rep[b] = ra;
      }
    }
  }
  // Path-compress: clusters can chain through several merges.
  for (int i = 0; i < m; ++i) {
    int r = i;
    while (rep[r] != r) r = rep[r];
    rep[i] = r;
  }
  std::vector<int> keep;
  keep.reserve(m);
  for (int i = 0; i < m; ++i)
    if (rep[i] == i) keep.push_back(i);
  return keep;
}

// ---------------------------------------------------------------------------
// 1D hull

void hull_1d(const Eigen::MatrixXd& pts, const std::vector<int>& active,
             HullResult& out) {
  int lo = active[0], hi = active[0];
  for (int idx : active) {
    if (pts(0, idx) < pts(0, lo)) lo = idx;
    if (pts(0, idx) > pts(0, hi)) hi = idx;
  }
  if (lo == hi) {
    out.extreme = {lo};
    out.affine_rank = 0;
    out.volume = 0.0;
    return;
  }
  out.extreme = {std::min(lo, hi), std::max(lo, hi)};
  out.affine_rank = 1;
  out.volume = pts(0, hi) - pts(0, lo);
}

// ---------------------------------------------------------------------------
// 2D hull: Andrew's monotone chain with collinearity tolerance; volume by a
// fan of triangles from the vertex centroid.

double cross2(const Eigen::MatrixXd& p, int o, int a, int b) {
  const double ox = p(0, o), oy = p(1, o);
  return (p(0, a) - ox) * (p(1, b) - oy) - (p(1, a) - oy) * (p(0, b) - ox);
}

void hull_2d(const Eigen::MatrixXd& pts, const std::vector<int>& active,
             double tol, HullResult& out) {
  std::vector<int> order = active;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts(0, a) != pts(0, b)) return pts(0, a) < pts(0, b);
    return pts(1, a) < pts(1, b);
  });
  const int m = static_cast<int>(order.size());
  auto build = [&](std::vector<int>& chain, auto begin, auto end) {
    for (auto it = begin; it != end; ++it) {
      const int q = *it;
      while (chain.size() >= 2) {
        const int o = chain[chain.size() - 2];
        const int a = chain[chain.size() - 1];
        const double c = cross2(pts, o, a, q);
        const double edge = (pts.col(a) - pts.col(o)).norm();
        // Right turn or collinear within tolerance: middle point not extreme.
        if (c <= tol * std::max(edge, 1e-300)) {
          chain.pop_back();
        } else {
          break;
        }
      }
      chain.push_back(q);
    }
  };
  std::vector<int> lower, upper;
  lower.reserve(m);
  upper.reserve(m);
  build(lower, order.begin(), order.end());
  build(upper, order.rbegin(), order.rend());
  // Concatenate, dropping duplicated endpoints.
  std::vector<int> ccw = lower;
  for (std::size_t k = 1; k + 1 < upper.size(); ++k) ccw.push_back(upper[k]);
  if (ccw.size() < 3) {
    // Collinear within tolerance after all: treat as a segment.
    const int lo = order.front();
    const int hi = order.back();
    out.extreme = {std::min(lo, hi), std::max(lo, hi)};
    out.boundary = {lo, hi};
    out.affine_rank = lo == hi ? 0 : 1;
    out.volume = 0.0;
    return;
  }
  out.boundary = ccw;
  out.extreme = ccw;
  std::sort(out.extreme.begin(), out.extreme.end());
  out.affine_rank = 2;
  // Fan from the vertex centroid; counter-clockwise boundary keeps every
  // triangle positively oriented.
  double cx = 0.0, cy = 0.0;
  for (int idx : ccw) {
    cx += pts(0, idx);
    cy += pts(1, idx);
  }
  cx /= static_cast<double>(ccw.size());
  cy /= static_cast<double>(ccw.size());
  rng::NeumaierSum area;
  for (std::size_t k = 0; k < ccw.size(); ++k) {
    const int a = ccw[k];
    const int b = ccw[(k + 1) % ccw.size()];
    const double det = (pts(0, a) - cx) * (pts(1, b) - cy) -
                       (pts(1, a) - cy) * (pts(0, b) - cx);
    area.add(det);
  }
  out.volume = 0.5 * area.total();
}

// ---------------------------------------------------------------------------
// General-dimension incremental hull (quickhull / beneath-beyond).

struct Facet {
  std::vector<int> verts;    // d point indices
  std::vector<int> neigh;    // neigh[k] faces the ridge verts \ {verts[k]}
  Eigen::VectorXd normal;    // unit outward
  double offset = 0.0;       // <normal, x> == offset on the plane
  std::vector<int> outside;  // unassigned points strictly above
  int furthest = -1;
  double furthest_dist = 0.0;
  bool alive = true;
  std::uint32_t visit_epoch = 0;
  bool visible = false;
};

class QuickHull {
 public:
  QuickHull(const Eigen::MatrixXd& pts, std::vector<int> active, double tol)
      : pts_(pts), active_(std::move(active)), tol_(tol),
        dim_(static_cast<int>(pts.rows())) {}

  // Returns false when the active set is affinely dependent at tolerance.
  bool build() {
    if (!initial_simplex()) return false;
    assign_initial();
    process();
    return true;
  }

  std::vector<int> extreme_points() const {
    std::vector<int> v;
    for (const Facet& f : facets_)
      if (f.alive) v.insert(v.end(), f.verts.begin(), f.verts.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  double volume() const {
    const std::vector<int> verts = extreme_points();
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim_);
    for (int idx : verts) centroid += pts_.col(idx);
    centroid /= static_cast<double>(verts.size());
    rng::NeumaierSum s;
    double fact = 1.0;
    for (int k = 2; k <= dim_; ++k) fact *= static_cast<double>(k);
    const double inv_fact = 1.0 / fact;
    Eigen::MatrixXd edges(dim_, dim_);
    for (const Facet& f : facets_) {
      if (!f.alive) continue;
      for (int k = 0; k < dim_; ++k)
        edges.col(k) = pts_.col(f.verts[k]) - centroid;
      s.add(std::abs(edges.partialPivLu().determinant()) * inv_fact);
    }
    return s.total();
  }

 private:
  double dist_to(const Facet& f, int p) const {
    return f.normal.dot(pts_.col(p)) - f.offset;
  }

  // Hyperplane through the facet's vertices, oriented away from `inside`.
  void set_plane(Facet& f, const Eigen::VectorXd& inside) {
    Eigen::MatrixXd e(dim_, dim_ - 1);
    for (int k = 1; k < dim_; ++k)
      e.col(k - 1) = pts_.col(f.verts[k]) - pts_.col(f.verts[0]);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(e);
    Eigen::MatrixXd q = qr.householderQ();
    f.normal = q.col(dim_ - 1);
    f.offset = f.normal.dot(pts_.col(f.verts[0]));
    if (f.normal.dot(inside) - f.offset > 0.0) {
      f.normal = -f.normal;
      f.offset = -f.offset;
    }
  }

  bool initial_simplex() {
    // Start from the most distant bounding-box extreme pair, then greedily
    // add the point farthest from the current affine flat.
    std::vector<int> cand;
    for (int r = 0; r < dim_; ++r) {
      int lo = active_[0], hi = active_[0];
      for (int idx : active_) {
        if (pts_(r, idx) < pts_(r, lo)) lo = idx;
        if (pts_(r, idx) > pts_(r, hi)) hi = idx;
      }
      cand.push_back(lo);
      cand.push_back(hi);
    }
    int a = cand[0], b = cand[1];
    double best = -1.0;
    for (std::size_t i = 0; i < cand.size(); ++i)
      for (std::size_t k = i + 1; k < cand.size(); ++k) {
        const double d = (pts_.col(cand[i]) - pts_.col(cand[k])).norm();
        if (d > best) {
          best = d;
          a = cand[i];
          b = cand[k];
        }
      }
    if (best <= tol_) return false;
    std::vector<int> simplex = {a, b};
    Eigen::MatrixXd basis(dim_, dim_);
    basis.col(0) = (pts_.col(b) - pts_.col(a)).normalized();
    int nbasis = 1;
    while (static_cast<int>(simplex.size()) < dim_ + 1) {
      int pick = -1;
      double pick_dist = tol_;
      Eigen::VectorXd r(dim_), best_r(dim_);
      for (int idx : active_) {
        r = pts_.col(idx) - pts_.col(a);
        r -= basis.leftCols(nbasis) * (basis.leftCols(nbasis).transpose() * r);
        const double d = r.norm();
        if (d > pick_dist) {
          pick_dist = d;
          pick = idx;
          best_r = r;
        }
      }
      if (pick < 0) return false;
      simplex.push_back(pick);
      // One re-orthogonalization pass keeps the flat numerically tight.
      best_r -= basis.leftCols(nbasis) *
                (basis.leftCols(nbasis).transpose() * best_r);
      basis.col(nbasis) = best_r.normalized();
      ++nbasis;
    }
    interior_ = Eigen::VectorXd::Zero(dim_);
    for (int idx : simplex) interior_ += pts_.col(idx);
    interior_ /= static_cast<double>(dim_ + 1);
    facets_.resize(dim_ + 1);
    for (int i = 0; i <= dim_; ++i) {
      Facet& f = facets_[i];
      f.verts.reserve(dim_);
      f.neigh.assign(dim_, -1);
      for (int k = 0; k <= dim_; ++k)
        if (k != i) f.verts.push_back(simplex[k]);
      set_plane(f, interior_);
    }
    // facet i omits simplex[i]; the neighbor across the ridge that drops
    // vertex simplex[j] from facet i is facet j.
    for (int i = 0; i <= dim_; ++i) {
      Facet& f = facets_[i];
      for (int slot = 0; slot < dim_; ++slot) {
        const int v = f.verts[slot];
        for (int k = 0; k <= dim_; ++k)
          if (simplex[k] == v) {
            f.neigh[slot] = k;
            break;
          }
      }
    }
    in_simplex_ = simplex;
    return true;
  }

  void assign_point(int p) {
    for (std::size_t fi = 0; fi < facets_.size(); ++fi) {
      Facet& f = facets_[fi];
      if (!f.alive) continue;
      const double d = dist_to(f, p);
      if (d > tol_) {
        f.outside.push_back(p);
        if (d > f.furthest_dist) {
          f.furthest_dist = d;
          f.furthest = p;
        }
        return;
      }
    }
  }

  void assign_initial() {
    for (int idx : active_) {
      bool used = false;
      for (int s : in_simplex_)
        if (s == idx) {
          used = true;
          break;
        }
      if (!used) assign_point(idx);
    }
    for (std::size_t fi = 0; fi < facets_.size(); ++fi)
      if (!facets_[fi].outside.empty()) stack_.push_back(static_cast<int>(fi));
  }

  void process() {
    std::uint32_t epoch = 0;
    while (!stack_.empty()) {
      const int fid = stack_.back();
      stack_.pop_back();
      Facet& start = facets_[fid];
      if (!start.alive || start.outside.empty()) continue;
      const int apex = start.furthest;
      ++epoch;

      // Breadth-first search of the facets visible from the apex; ridges to
      // hidden neighbors form the horizon.
      std::vector<int> visible = {fid};
      start.visit_epoch = epoch;
      start.visible = true;
      struct Horizon {
        int facet;  // visible facet
        int slot;   // ridge = facet.verts \ {facet.verts[slot]}
        int hidden; // neighbor beyond the ridge
      };
      std::vector<Horizon> horizon;
      for (std::size_t qi = 0; qi < visible.size(); ++qi) {
        const int gid = visible[qi];
        for (int slot = 0; slot < dim_; ++slot) {
          const int hid = facets_[gid].neigh[slot];
          Facet& h = facets_[hid];
          if (h.visit_epoch != epoch) {
            h.visit_epoch = epoch;
            h.visible = dist_to(h, apex) > tol_;
            if (h.visible) visible.push_back(hid);
          }
          if (!h.visible) horizon.push_back({gid, slot, hid});
        }
      }

      // Cone the apex over every horizon ridge.
      std::map<std::vector<int>, std::pair<int, int>> open_ridges;
      std::vector<int> fresh;
      for (const Horizon& hz : horizon) {
        const Facet& g = facets_[hz.facet];
        Facet nf;
        nf.verts.reserve(dim_);
        for (int k = 0; k < dim_; ++k)
          if (k != hz.slot) nf.verts.push_back(g.verts[k]);
        nf.verts.push_back(apex);
        nf.neigh.assign(dim_, -1);
        set_plane(nf, interior_);
        const int nid = static_cast<int>(facets_.size());
        // The ridge shared with the hidden facet drops the apex slot.
        nf.neigh[dim_ - 1] = hz.hidden;
        Facet& hiddenf = facets_[hz.hidden];
        for (int s = 0; s < dim_; ++s)
          if (hiddenf.neigh[s] == hz.facet) hiddenf.neigh[s] = nid;
        facets_.push_back(std::move(nf));
        fresh.push_back(nid);
        // Match side ridges (those containing the apex) pairwise.
        for (int s = 0; s < dim_ - 1; ++s) {
          std::vector<int> key;
          key.reserve(dim_ - 1);
          for (int k = 0; k < dim_; ++k)
            if (k != s) key.push_back(facets_[nid].verts[k]);
          std::sort(key.begin(), key.end());
          auto it = open_ridges.find(key);
          if (it == open_ridges.end()) {
            open_ridges.emplace(std::move(key), std::make_pair(nid, s));
          } else {
            facets_[nid].neigh[s] = it->second.first;
            facets_[it->second.first].neigh[it->second.second] = nid;
            open_ridges.erase(it);
          }
        }
      }

      // Re-home the orphaned outside points, dropping any that fell inside.
      for (int gid : visible) {
        Facet& g = facets_[gid];
        g.alive = false;
        for (int p : g.outside) {
          if (p == apex) continue;
          for (int nid : fresh) {
            Facet& nf = facets_[nid];
            const double d = dist_to(nf, p);
            if (d > tol_) {
              nf.outside.push_back(p);
              if (d > nf.furthest_dist) {
                nf.furthest_dist = d;
                nf.furthest = p;
              }
              break;
            }
          }
        }
        g.outside.clear();
      }
      for (int nid : fresh)
        if (!facets_[nid].outside.empty()) stack_.push_back(nid);
    }
  }

  const Eigen::MatrixXd& pts_;
  std::vector<int> active_;
  double tol_;
  int dim_;
  Eigen::VectorXd interior_;
  std::vector<int> in_simplex_;
  std::vector<Facet> facets_;
  std::vector<int> stack_;
};

void hull_nd(const Eigen::MatrixXd& pts, const std::vector<int>& active,
             double tol, HullResult& out);

// Rank-deficient set: hull in the coordinates of its affine basis; volume in
// the ambient dimension is zero.
void hull_degenerate(const Eigen::MatrixXd& pts, const std::vector<int>& active,
                     int rank, HullResult& out) {
  const int m = static_cast<int>(active.size());
  Eigen::MatrixXd sub(pts.rows(), m);
  for (int k = 0; k < m; ++k) sub.col(k) = pts.col(active[k]);
  const Eigen::VectorXd mean = sub.rowwise().mean();
  Eigen::MatrixXd centered = sub.colwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU);
  Eigen::MatrixXd coords =
      svd.matrixU().leftCols(rank).transpose() * centered;  // rank x m
  HullResult inner = convex_hull_of(coords);
  out.extreme.clear();
  for (int idx : inner.extreme) out.extreme.push_back(active[idx]);
  std::sort(out.extreme.begin(), out.extreme.end());
  out.volume = 0.0;
  out.affine_rank = inner.affine_rank;
}

void hull_nd(const Eigen::MatrixXd& pts, const std::vector<int>& active,
             double tol, HullResult& out) {
  QuickHull qh(pts, active, tol);
  if (!qh.build()) {
    // Tolerance said full rank but the simplex search disagreed; fall back to
    // the rank-deficient path one dimension down.
    hull_degenerate(pts, active, static_cast<int>(pts.rows()) - 1, out);
    return;
  }
  out.extreme = qh.extreme_points();
  out.volume = qh.volume();
  out.affine_rank = static_cast<int>(pts.rows());
}

}  // namespace

int affine_rank_of(const Eigen::MatrixXd& points) {
  const int m = static_cast<int>(points.cols());
  if (m <= 1) return 0;
  const double diam = bbox_diameter(points);
  if (diam <= 0.0) return 0;
  const Eigen::VectorXd mean = points.rowwise().mean();
  const Eigen::MatrixXd centered = points.colwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  const auto& sv = svd.singularValues();
  const double tol = kCoplanarFactor * diam;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return std::min<int>(rank, static_cast<int>(points.rows()));
}

HullResult convex_hull_of(const Eigen::MatrixXd& points) {
  const int d = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  if (d < 1) throw std::invalid_argument("convex hull: dimension must be >= 1");
  if (m < 1) throw std::invalid_argument("convex hull: need at least one point");
  HullResult out;
  const double diam = bbox_diameter(points);
  if (diam <= 0.0) {
    out.extreme = {0};
    out.affine_rank = 0;
    out.volume = 0.0;
    return out;
  }
  std::vector<int> active = dedup_columns(points, kDuplicateFactor * diam);
  if (active.size() == 1) {
    out.extreme = active;
    out.affine_rank = 0;
    return out;
  }
  const double tol = kCoplanarFactor * diam;
  if (d == 1) {
    hull_1d(points, active, out);
    return out;
  }
  const int rank = affine_rank_of(points);
  if (rank < d) {
    hull_degenerate(points, active, std::max(rank, 1), out);
    return out;
  }
  if (d == 2) {
    hull_2d(points, active, tol, out);
    return out;
  }
  hull_nd(points, active, tol, out);
  return out;
}

}  // namespace quermass
