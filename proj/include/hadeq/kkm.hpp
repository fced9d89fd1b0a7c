#pragma once

// Constructive pieces of the KKM principle on a finite set D = {x_1..x_m}:
// the hull layers D_j explored through the simplex map T, its Lipschitz
// estimate, KKM covering checks and finite-intersection certificates.

#include "hadeq/bifunction.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hadeq {

/// x_1..x_m in one space; duplicates are allowed.
struct FinitePointSet {
  FinitePointSet(Space space, std::vector<Point> points);

  Space space;
  std::vector<Point> points;

  int size() const { return static_cast<int>(points.size()); }
  FinitePointSet subset(const std::vector<int>& indices) const;
};

/// s_1..s_{m-1} in [0,1].
using SimplexCoord = std::vector<double>;

void validate_coord(const SimplexCoord& s, int m);

/// T(s): T(1) = x_1, T(j) = gamma_{x_j, T(j-1)}(s_{j-1}).
Point T_map(const FinitePointSet& d, const SimplexCoord& s);

/// A point of D_j: T on the prefix x_1..x_j with coordinates s (size j-1).
/// j is one-based.
Point hull_layer(const FinitePointSet& d, int j, const SimplexCoord& s);

/// A coordinate with T(s) = x_j exactly: s_{j-1} = 0 and every other entry 1.
SimplexCoord vertex_coord(int m, int j);

/// Max pairwise distance over `samples` random T-images plus the vertices.
double hull_diameter_estimate(const FinitePointSet& d, int samples = 10000, std::uint64_t seed = 0);

/// sum_i |s_i - t_i| diam - d(T(s), T(t)).
double lipschitz_gap(const FinitePointSet& d, const SimplexCoord& s, const SimplexCoord& t, double diam);

/// min of lipschitz_gap over `pairs` random coordinate pairs.
double lipschitz_sweep(const FinitePointSet& d, int pairs, double diam, std::uint64_t seed = 0);

/// max_j d(T(vertex_coord(m, j)), x_j); zero when vertex recovery is exact.
double vertex_recovery_residual(const FinitePointSet& d);

/// Every nonempty index set of {0..m-1}, by increasing bitmask; m <= 16.
std::vector<std::vector<int>> all_subsets(int m);

struct CoverReport {
  std::vector<std::vector<int>> subsets;
  std::vector<int> violations;  // per subset
  std::vector<int> sampled;     // points examined per subset
  int max_violations = 0;
  /// First violating point found, if any.
  std::optional<Point> witness;
};

/// For each index set I (zero-based), samples co({x_i : i in I}) through T
/// and counts points x with F(x, x_i) < -1e-9 for every i in I. Singletons
/// are checked at the vertex itself.
CoverReport kkm_cover_check(const Bifunction& f, const FinitePointSet& d, const std::vector<std::vector<int>>& subsets,
                            int samples_per_subset, std::uint64_t seed = 0);

struct IntersectionCertificate {
  /// The lattice point with F(x, x_i) >= -1e-6 for all i, if one exists.
  std::optional<Point> witness;
  /// The lattice point maximizing min_i F(x, x_i), and that value.
  Point best;
  SimplexCoord best_coord;
  double best_value = 0.0;
  int lattice_points = 0;
};

/// Sweeps T over the lattice {0, 1/(n-1), ..., 1}^{m-1}.
IntersectionCertificate finite_intersection_certify(const Bifunction& f, const FinitePointSet& d, int lattice = 21);

}  // namespace hadeq
