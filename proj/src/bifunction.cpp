#include "hadeq/bifunction.hpp"

#include "hadeq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hadeq {

namespace {

constexpr double kMatrixTolerance = 1e-10;

double min_eigenvalue_sym(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

// ---------------------------------------------------------------- ConvexFunctional

ConvexFunctional ConvexFunctional::half_sq_dist(Space space, Point p, double weight) {
  space.validate(p);
  if (!(weight > 0.0) || !std::isfinite(weight)) throw InvalidInput("half_sq_dist: weight must be > 0");
  ConvexFunctional g(std::move(space), FunctionalKind::half_sq_dist);
  g.anchor_ = std::move(p);
  g.weight_ = weight;
  return g;
}

ConvexFunctional ConvexFunctional::dist_to(Space space, Point p) {
  space.validate(p);
  ConvexFunctional g(std::move(space), FunctionalKind::dist_to);
  g.anchor_ = std::move(p);
  return g;
}

ConvexFunctional ConvexFunctional::abs_value() { return ConvexFunctional(Space::euclidean(1), FunctionalKind::abs_value); }

ConvexFunctional ConvexFunctional::quadratic(Eigen::MatrixXd q, Eigen::VectorXd b) {
  if (q.rows() != q.cols() || q.rows() != b.size() || b.size() < 1) throw InvalidInput("quadratic: Q must be n x n and b of length n");
  if (!q.allFinite() || !b.allFinite()) throw InvalidInput("quadratic: non-finite entries");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > kMatrixTolerance) throw InvalidInput("quadratic: Q must be symmetric");
  if (min_eigenvalue_sym(q) < -kMatrixTolerance) throw InvalidInput("quadratic: Q must be positive semidefinite");
  ConvexFunctional g(Space::euclidean(static_cast<int>(b.size())), FunctionalKind::quadratic);
  g.q_ = std::move(q);
  g.b_ = std::move(b);
  return g;
}

const Point& ConvexFunctional::anchor() const {
  if (kind_ != FunctionalKind::half_sq_dist && kind_ != FunctionalKind::dist_to)
    throw InvalidInput("functional has no anchor point");
  return anchor_;
}

double ConvexFunctional::operator()(const Point& x) const {
  switch (kind_) {
    case FunctionalKind::half_sq_dist: return 0.5 * weight_ * dist2(space_, x, anchor_);
    case FunctionalKind::dist_to: return dist(space_, x, anchor_);
    case FunctionalKind::abs_value:
      space_.validate(x);
      return std::abs(x.coords()[0]);
    case FunctionalKind::quadratic: {
      space_.validate(x);
      const auto& v = x.coords();
      return 0.5 * v.dot(q_ * v) + b_.dot(v);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------- VectorField

VectorField VectorField::euclidean_affine(Eigen::MatrixXd m, Eigen::VectorXd b) {
  if (m.rows() != m.cols() || m.rows() != b.size() || b.size() < 1) throw InvalidInput("euclidean_affine: M must be n x n and b of length n");
  if (!m.allFinite() || !b.allFinite()) throw InvalidInput("euclidean_affine: non-finite entries");
  VectorField a(Space::euclidean(static_cast<int>(b.size())), FieldKind::euclidean_affine);
  a.monotone_ = min_eigenvalue_sym(m + m.transpose()) >= -kMatrixTolerance;
  a.m_ = std::move(m);
  a.b_ = std::move(b);
  a.name_ = "euclidean_affine";
  return a;
}

VectorField VectorField::geodesic(Space space, Map map, std::string name, bool monotone) {
  if (!map) throw InvalidInput("geodesic field: empty map");
  VectorField a(std::move(space), FieldKind::geodesic);
  a.map_ = std::move(map);
  a.name_ = std::move(name);
  a.monotone_ = monotone;
  return a;
}

TangentVec VectorField::operator()(const Point& x) const {
  space_.validate(x);
  if (kind_ == FieldKind::euclidean_affine) {
    const auto& v = x.coords();
    return TangentVec{1.0, x, Point::from_coords(v + m_ * v + b_)};
  }
  TangentVec tv = map_(x);
  if (!(tv.base == x)) throw InvalidInput("vector field '" + name_ + "' returned a vector not based at x");
  return tv;
}

// ---------------------------------------------------------------- Bifunction

Bifunction Bifunction::from_functional(ConvexFunctional g) {
  Bifunction f(g.space(), BifunctionKind::functional);
  f.name_ = "functional";
  f.g_ = std::make_shared<const ConvexFunctional>(std::move(g));
  return f;
}

Bifunction Bifunction::from_field(VectorField a) {
  Bifunction f(a.space(), BifunctionKind::field);
  f.name_ = "field:" + a.name();
  f.a_ = std::make_shared<const VectorField>(std::move(a));
  return f;
}

Bifunction Bifunction::custom(Space space, Evaluator eval, std::string name, bool monotone) {
  if (!eval) throw InvalidInput("custom bifunction: empty evaluator");
  Bifunction f(std::move(space), BifunctionKind::custom);
  f.custom_ = std::move(eval);
  f.name_ = std::move(name);
  f.monotone_ = monotone;
  return f;
}

const ConvexFunctional& Bifunction::functional() const {
  if (!g_) throw InvalidInput("bifunction is not built from a functional");
  return *g_;
}

const VectorField& Bifunction::field() const {
  if (!a_) throw InvalidInput("bifunction is not built from a vector field");
  return *a_;
}

bool Bifunction::monotone() const {
  switch (kind_) {
    case BifunctionKind::functional: return true;
    case BifunctionKind::field: return a_->monotone();
    case BifunctionKind::custom: return monotone_;
  }
  return false;
}

double Bifunction::operator()(const Point& x, const Point& y) const {
  space_.validate(x);
  space_.validate(y);
  switch (kind_) {
    case BifunctionKind::functional: return (*g_)(y) - (*g_)(x);
    case BifunctionKind::field: return pair_tangent(space_, (*a_)(x), PointPair{x, y});
    case BifunctionKind::custom: return custom_(x, y);
  }
  return 0.0;
}

// ---------------------------------------------------------------- checks

double monotonicity_violation(const Bifunction& f, const std::vector<std::pair<Point, Point>>& samples) {
  if (samples.empty()) throw InvalidInput("monotonicity_violation: empty sample list");
  double worst = 0.0;
  for (const auto& [x, y] : samples) worst = std::max(worst, f(x, y) + f(y, x));
  return worst;
}

double convexity_in_y_violation(const Bifunction& f, const Point& x, const std::vector<ConvexitySample>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    if (!(s.t >= 0.0 && s.t <= 1.0)) throw InvalidInput("convexity_in_y_violation: t must lie in [0,1]");
    const Point yt = geodesic(f.space(), s.y0, s.y1, s.t);
    const double chord = (1.0 - s.t) * f(x, s.y0) + s.t * f(x, s.y1);
    worst = std::max(worst, f(x, yt) - chord);
  }
  return worst;
}

double equilibrium_residual(const Bifunction& f, const Point& xbar, const std::vector<Point>& grid) {
  if (grid.empty()) throw InvalidInput("equilibrium_residual: empty grid");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : grid) best = std::min(best, f(xbar, y));
  return best;
}

double dual_residual(const Bifunction& f, const Point& xbar, const std::vector<Point>& grid) {
  if (grid.empty()) throw InvalidInput("dual_residual: empty grid");
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& y : grid) worst = std::max(worst, f(y, xbar));
  return worst;
}

}  // namespace hadeq
