#pragma once

// Concrete Hadamard model spaces: Euclidean space, the hyperboloid model of
// hyperbolic space, spiders (rays glued at a hub) and l2-products of these.
// Every space supplies its metric and normalized geodesics; the
// quasilinearization and the CAT(0) gap checks are built on top of them.

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace hadeq {

class Point;

/// Position on a spider: which ray and how far from the hub.
struct SpiderCoord {
  int ray = 0;
  double radius = 0.0;

  friend bool operator==(const SpiderCoord&, const SpiderCoord&) = default;
};

/// A point of some model space. The payload shape depends on the space:
/// a coordinate vector (Euclidean, or the ambient (dim+1)-vector of the
/// hyperboloid), a spider coordinate, or a pair of points for products.
/// Points are immutable values; copies share product payloads.
class Point {
 public:
  using Vector = Eigen::VectorXd;

  Point() = default;

  static Point from_coords(Vector coords);
  /// Radius 0 is canonicalized to ray 0 so the hub has a single representation.
  static Point spider(int ray, double radius);
  static Point product(Point left, Point right);

  bool has_coords() const { return std::holds_alternative<Vector>(payload_); }
  bool is_spider() const { return std::holds_alternative<SpiderCoord>(payload_); }
  bool is_product() const { return std::holds_alternative<std::shared_ptr<const Pair>>(payload_); }

  const Vector& coords() const;
  const SpiderCoord& spider_coord() const;
  const Point& left() const;
  const Point& right() const;

  friend bool operator==(const Point& a, const Point& b);

 private:
  struct Pair;
  std::variant<Vector, SpiderCoord, std::shared_ptr<const Pair>> payload_;
};

struct Point::Pair {
  Point left;
  Point right;
};

enum class SpaceKind { euclidean, hyperboloid, spider, product };

/// Descriptor of a model space. Immutable and cheap to copy.
class Space {
 public:
  static Space euclidean(int dim);
  static Space hyperboloid(int dim);
  static Space spider(int rays);
  static Space product(Space left, Space right);

  SpaceKind kind() const { return kind_; }
  /// Intrinsic dimension for Euclidean and hyperboloid spaces.
  int dim() const;
  int rays() const;
  const Space& left() const;
  const Space& right() const;

  /// Throws InvalidInput if the point's payload does not belong to this space.
  void validate(const Point& p) const;
  bool contains(const Point& p) const noexcept;

  /// Short human-readable form, e.g. "product(euclidean(2), spider(3))".
  std::string describe() const;

  friend bool operator==(const Space& a, const Space& b);

 private:
  Space() = default;
  SpaceKind kind_ = SpaceKind::euclidean;
  int param_ = 1;
  std::shared_ptr<const Space> left_;
  std::shared_ptr<const Space> right_;
};

/// Minkowski bilinear form -a0 b0 + sum_i ai bi used by the hyperboloid model.
double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Lifts spatial coordinates onto the upper sheet: (sqrt(1+|s|^2), s).
Point hyperboloid_point(const Eigen::VectorXd& spatial);

/// Canonical base point: the origin, the hyperboloid apex, the hub, or the
/// pair of component base points.
Point base_point(const Space& space);

double dist(const Space& space, const Point& x, const Point& y);
/// Squared distance without the round trip through sqrt where the space
/// allows it.
double dist2(const Space& space, const Point& x, const Point& y);

/// gamma_{x,y}(t), with gamma(0) = x and gamma(1) = y returned exactly.
Point geodesic(const Space& space, const Point& x, const Point& y, double t);

/// The directed pair ->xy.
struct PointPair {
  Point from;
  Point to;
};

/// The tangent-cone element scale * ->(base target).
struct TangentVec {
  double scale = 0.0;
  Point base;
  Point target;

  bool is_zero() const { return scale == 0.0 || base == target; }
};

/// <->uv, ->xy> = 1/2 [d^2(u,y) + d^2(v,x) - d^2(u,x) - d^2(v,y)].
double quasilin(const Space& space, const PointPair& uv, const PointPair& xy);

/// <tv, ->pq> for a tangent vector based at p.
double pair_tangent(const Space& space, const TangentVec& tv, const PointPair& pq);

/// Right-hand side minus left-hand side of the CN inequality
/// d^2(x, gamma_{u,v}(l)) <= (1-l) d^2(x,u) + l d^2(x,v) - l(1-l) d^2(u,v).
double cn_gap(const Space& space, const Point& x, const Point& u, const Point& v, double lambda);

/// Right-hand side minus left-hand side of
/// d^2(x,v) + d^2(y,u) <= d^2(x,u) + d^2(y,v) + 2 d(x,y) d(u,v).
double cs_gap(const Space& space, const Point& x, const Point& y, const Point& u, const Point& v);

// Local charts used by direct search and by samplers.

/// Number of real parameters in the space's canonical chart
/// (spiders use one radial parameter plus a discrete ray choice).
int chart_dim(const Space& space);

/// Points one step away from `base` along each chart direction, both signs.
/// Spider moves toward the hub that overshoot it continue onto every other
/// ray. Product neighbors move one factor at a time.
std::vector<Point> poll_neighbors(const Space& space, const Point& base, double step);

/// Orthonormal basis of the tangent plane at a hyperboloid point
/// (Minkowski-orthonormal ambient vectors).
std::vector<Eigen::VectorXd> hyperboloid_tangent_basis(const Point& base);

/// Exponential map of the hyperboloid at `base` applied to an ambient
/// tangent vector.
Point hyperboloid_exp(const Point& base, const Eigen::VectorXd& tangent);

/// Maps a point of the unit cube [0,1]^sampler_dim(space) to a point within
/// distance `radius` of `center`.
int sampler_dim(const Space& space);
Point sample_ball(const Space& space, const Point& center, double radius, const std::vector<double>& unit);

}  // namespace hadeq
