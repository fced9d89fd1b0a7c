#pragma once

// Bifunctions F(x, y) built from convex functionals (F_g(x,y) = g(y) - g(x)),
// from single-valued vector fields (F_A(x,y) = <A(x), ->xy>) or supplied by
// the caller, together with sample-based structural checks and residuals.

#include "hadeq/geometry.hpp"

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hadeq {

enum class FunctionalKind { half_sq_dist, dist_to, abs_value, quadratic };

/// A convex functional g on a model space.
class ConvexFunctional {
 public:
  /// g = (weight/2) d^2(., p)
  static ConvexFunctional half_sq_dist(Space space, Point p, double weight = 1.0);
  /// g = d(., p)
  static ConvexFunctional dist_to(Space space, Point p);
  /// g = |.| on the real line.
  static ConvexFunctional abs_value();
  /// g = 1/2 x'Qx + b'x on a Euclidean space; Q must be symmetric PSD.
  static ConvexFunctional quadratic(Eigen::MatrixXd q, Eigen::VectorXd b);

  FunctionalKind kind() const { return kind_; }
  const Space& space() const { return space_; }
  const Point& anchor() const;  // p of half_sq_dist / dist_to
  double weight() const { return weight_; }
  const Eigen::MatrixXd& q() const { return q_; }
  const Eigen::VectorXd& b() const { return b_; }

  double operator()(const Point& x) const;

 private:
  ConvexFunctional(Space space, FunctionalKind kind) : space_(std::move(space)), kind_(kind) {}

  Space space_;
  FunctionalKind kind_;
  Point anchor_;
  double weight_ = 1.0;
  Eigen::MatrixXd q_;
  Eigen::VectorXd b_;
};

enum class FieldKind { euclidean_affine, geodesic };

/// Single-valued vector field x -> A(x) in the tangent cone at x.
class VectorField {
 public:
  using Map = std::function<TangentVec(const Point&)>;

  /// A(x) = Mx + b, represented as the tangent vector 1 * ->(x, x + Mx + b).
  /// Monotonicity (M + M' PSD within 1e-10) is certified here and exposed
  /// through monotone(); non-monotone fields are constructible for testing.
  static VectorField euclidean_affine(Eigen::MatrixXd m, Eigen::VectorXd b);
  /// Arbitrary field on any space; `map(x)` must return a vector based at x.
  static VectorField geodesic(Space space, Map map, std::string name, bool monotone);

  FieldKind kind() const { return kind_; }
  const Space& space() const { return space_; }
  const Eigen::MatrixXd& m() const { return m_; }
  const Eigen::VectorXd& b() const { return b_; }
  const std::string& name() const { return name_; }
  bool monotone() const { return monotone_; }

  TangentVec operator()(const Point& x) const;

 private:
  VectorField(Space space, FieldKind kind) : space_(std::move(space)), kind_(kind) {}

  Space space_;
  FieldKind kind_;
  Eigen::MatrixXd m_;
  Eigen::VectorXd b_;
  Map map_;
  std::string name_;
  bool monotone_ = false;
};

enum class BifunctionKind { functional, field, custom };

class Bifunction {
 public:
  using Evaluator = std::function<double(const Point&, const Point&)>;

  static Bifunction from_functional(ConvexFunctional g);
  static Bifunction from_field(VectorField a);
  /// `monotone` is the caller's claim; it is not verified.
  static Bifunction custom(Space space, Evaluator f, std::string name, bool monotone = false);

  BifunctionKind kind() const { return kind_; }
  const Space& space() const { return space_; }
  const ConvexFunctional& functional() const;
  const VectorField& field() const;
  const std::string& name() const { return name_; }
  /// True for functional-derived bifunctions, for certified monotone fields
  /// and for custom bifunctions declared monotone.
  bool monotone() const;

  /// eval_F: validates both points, then evaluates F(x, y).
  double operator()(const Point& x, const Point& y) const;

 private:
  Bifunction(Space space, BifunctionKind kind) : space_(std::move(space)), kind_(kind) {}

  Space space_;
  BifunctionKind kind_;
  std::shared_ptr<const ConvexFunctional> g_;
  std::shared_ptr<const VectorField> a_;
  Evaluator custom_;
  std::string name_;
  bool monotone_ = false;
};

inline double eval_F(const Bifunction& f, const Point& x, const Point& y) { return f(x, y); }

/// max(0, max over pairs of F(x,y) + F(y,x)).
double monotonicity_violation(const Bifunction& f, const std::vector<std::pair<Point, Point>>& samples);

struct ConvexitySample {
  Point y0;
  Point y1;
  double t = 0.5;
};

/// max(0, max over samples of F(x, gamma_{y0,y1}(t)) - (1-t) F(x,y0) - t F(x,y1)).
double convexity_in_y_violation(const Bifunction& f, const Point& x, const std::vector<ConvexitySample>& samples);

/// min over the grid of F(xbar, y). Nonnegative certifies xbar on the grid.
double equilibrium_residual(const Bifunction& f, const Point& xbar, const std::vector<Point>& grid);

/// max over the grid of F(y, xbar). Nonpositive certifies the dual problem on the grid.
double dual_residual(const Bifunction& f, const Point& xbar, const std::vector<Point>& grid);

}  // namespace hadeq
