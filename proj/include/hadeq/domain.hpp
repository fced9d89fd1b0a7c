#pragma once

#include "hadeq/geometry.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace hadeq {

enum class DomainKind { whole, ball, box };

/// The closed convex feasible set K: the whole space, a closed geodesic
/// ball, or (Euclidean only) an axis-aligned box.
class DomainK {
 public:
  static DomainK whole(Space space);
  static DomainK ball(Space space, Point center, double radius);
  static DomainK box(Space space, Eigen::VectorXd lo, Eigen::VectorXd hi);

  const Space& space() const { return space_; }
  DomainKind kind() const { return kind_; }
  bool bounded() const { return kind_ != DomainKind::whole; }

  const Point& center() const;
  double radius() const;
  const Eigen::VectorXd& lo() const;
  const Eigen::VectorXd& hi() const;

  bool contains(const Point& x, double tol = 1e-12) const;
  /// Metric projection onto K (identity on the whole space).
  Point project(const Point& x) const;

  /// Exact diameter; throws InvalidInput for the whole space.
  double diameter() const;
  /// An upper bound on sup_{y in K} d(x, y) that is exact for Euclidean
  /// balls and boxes; throws InvalidInput for the whole space.
  double sup_dist(const Point& x) const;

  /// Box corners (for at most 10 coordinates) or nothing for other kinds.
  std::vector<Point> corners() const;

  /// `count` low-discrepancy points of K. The whole space is sampled inside
  /// the declared ball (bound_center, bound_radius).
  std::vector<Point> sample(int count, std::uint64_t seed, const std::optional<Point>& bound_center = std::nullopt,
                            double bound_radius = 0.0) const;

 private:
  DomainK(Space space, DomainKind kind) : space_(std::move(space)), kind_(kind) {}

  Space space_;
  DomainKind kind_;
  Point center_;
  double radius_ = 0.0;
  Eigen::VectorXd lo_;
  Eigen::VectorXd hi_;
};

}  // namespace hadeq
