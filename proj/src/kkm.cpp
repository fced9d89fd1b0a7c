#include "hadeq/kkm.hpp"

#include "hadeq/errors.hpp"
#include "hadeq/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hadeq {

FinitePointSet::FinitePointSet(Space s, std::vector<Point> pts) : space(std::move(s)), points(std::move(pts)) {
  if (points.empty()) throw InvalidInput("point set: needs at least one point");
  for (const auto& p : points) space.validate(p);
}

FinitePointSet FinitePointSet::subset(const std::vector<int>& indices) const {
  if (indices.empty()) throw InvalidInput("point set: empty index set");
  std::vector<Point> pts;
  for (int i : indices) {
    if (i < 0 || i >= size()) throw InvalidInput("point set: index out of range");
    pts.push_back(points[i]);
  }
  return {space, std::move(pts)};
}

void validate_coord(const SimplexCoord& s, int m) {
  if (static_cast<int>(s.size()) != m - 1) throw InvalidInput("simplex coordinate: expected m-1 entries");
  for (double v : s)
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("simplex coordinate: entries must lie in [0,1]");
}

Point T_map(const FinitePointSet& d, const SimplexCoord& s) {
  validate_coord(s, d.size());
  Point cur = d.points[0];
  for (int j = 1; j < d.size(); ++j) cur = geodesic(d.space, d.points[j], cur, s[j - 1]);
  return cur;
}

Point hull_layer(const FinitePointSet& d, int j, const SimplexCoord& s) {
  if (j < 1 || j > d.size()) throw InvalidInput("hull_layer: layer index out of range");
  std::vector<int> prefix(j);
  for (int i = 0; i < j; ++i) prefix[i] = i;
  return T_map(d.subset(prefix), s);
}

SimplexCoord vertex_coord(int m, int j) {
  if (m < 1 || j < 1 || j > m) throw InvalidInput("vertex_coord: index out of range");
  SimplexCoord s(m - 1, 1.0);
  if (j > 1) s[j - 2] = 0.0;
  return s;
}

namespace {

SimplexCoord random_coord(Rng& rng, int m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SimplexCoord s(m - 1);
  for (auto& v : s) v = u(rng);
  return s;
}

}  // namespace

double hull_diameter_estimate(const FinitePointSet& d, int samples, std::uint64_t seed) {
  if (samples < 0) throw InvalidInput("hull_diameter_estimate: negative sample count");
  std::vector<Point> pts = d.points;
  if (d.size() > 1) {
    Rng rng = make_rng(seed, 0xD1A3);
    for (int i = 0; i < samples; ++i) pts.push_back(T_map(d, random_coord(rng, d.size())));
  }
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, dist(d.space, pts[i], pts[j]));
  return best;
}

double lipschitz_gap(const FinitePointSet& d, const SimplexCoord& s, const SimplexCoord& t, double diam) {
  validate_coord(s, d.size());
  validate_coord(t, d.size());
  double l1 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) l1 += std::abs(s[i] - t[i]);
  return l1 * diam - dist(d.space, T_map(d, s), T_map(d, t));
}

double lipschitz_sweep(const FinitePointSet& d, int pairs, double diam, std::uint64_t seed) {
  if (pairs < 1 || d.size() < 2) return 0.0;
  Rng rng = make_rng(seed, 0x11B5);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pairs; ++i) {
    const SimplexCoord s = random_coord(rng, d.size());
    const SimplexCoord t = random_coord(rng, d.size());
    worst = std::min(worst, lipschitz_gap(d, s, t, diam));
  }
  return worst;
}

double vertex_recovery_residual(const FinitePointSet& d) {
  double worst = 0.0;
  for (int j = 1; j <= d.size(); ++j)
    worst = std::max(worst, dist(d.space, T_map(d, vertex_coord(d.size(), j)), d.points[j - 1]));
  return worst;
}

std::vector<std::vector<int>> all_subsets(int m) {
  if (m < 1 || m > 16) throw InvalidInput("all_subsets: m must lie in [1, 16]");
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    out.push_back(std::move(idx));
  }
  return out;
}

CoverReport kkm_cover_check(const Bifunction& f, const FinitePointSet& d, const std::vector<std::vector<int>>& subsets,
                            int samples_per_subset, std::uint64_t seed) {
  if (!(f.space() == d.space)) throw InvalidInput("kkm_cover_check: bifunction and point set live in different spaces");
  if (samples_per_subset < 1) throw InvalidInput("kkm_cover_check: samples per subset must be >= 1");
  CoverReport rep;
  rep.subsets = subsets;
  for (std::size_t n = 0; n < subsets.size(); ++n) {
    const FinitePointSet sub = d.subset(subsets[n]);
    std::vector<Point> xs;
    if (sub.size() == 1) {
      xs.push_back(sub.points[0]);
    } else {
      HaltonSequence h(sub.size() - 1, mix_seed(seed, n));
      for (int i = 0; i < samples_per_subset; ++i) xs.push_back(T_map(sub, h(static_cast<std::uint64_t>(i))));
    }
    int count = 0;
    for (const auto& x : xs) {
      const bool uncovered =
          std::all_of(sub.points.begin(), sub.points.end(), [&](const Point& xi) { return f(x, xi) < -1e-9; });
      if (uncovered) {
        ++count;
        if (!rep.witness) rep.witness = x;
      }
    }
    rep.violations.push_back(count);
    rep.sampled.push_back(static_cast<int>(xs.size()));
    rep.max_violations = std::max(rep.max_violations, count);
  }
  return rep;
}

IntersectionCertificate finite_intersection_certify(const Bifunction& f, const FinitePointSet& d, int lattice) {
  if (!(f.space() == d.space)) throw InvalidInput("finite_intersection_certify: spaces differ");
  if (lattice < 2) throw InvalidInput("finite_intersection_certify: lattice must have at least 2 points");
  const int dims = d.size() - 1;
  IntersectionCertificate cert;
  cert.best_value = -std::numeric_limits<double>::infinity();

  // Odometer over the lattice indices.
  std::vector<int> idx(dims, 0);
  SimplexCoord s(dims);
  while (true) {
    for (int i = 0; i < dims; ++i) s[i] = static_cast<double>(idx[i]) / (lattice - 1);
    const Point x = T_map(d, s);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& xi : d.points) worst = std::min(worst, f(x, xi));
    ++cert.lattice_points;
    if (worst > cert.best_value) {
      cert.best_value = worst;
      cert.best = x;
      cert.best_coord = s;
    }
    int i = 0;
    while (i < dims && ++idx[i] == lattice) idx[i++] = 0;
    if (i == dims) break;
  }
  if (cert.best_value >= -1e-6) cert.witness = cert.best;
  return cert;
}

}  // namespace hadeq
