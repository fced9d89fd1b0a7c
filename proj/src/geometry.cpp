#include "hadeq/geometry.hpp"

#include "hadeq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hadeq {

namespace {

constexpr double kSheetTolerance = 1e-9;

const Point::Vector& expect_coords(const Point& p, const char* what) {
  if (!p.has_coords()) throw InvalidInput(std::string(what) + ": expected a coordinate point");
  return p.coords();
}

}  // namespace

// ---------------------------------------------------------------- Point

Point Point::from_coords(Vector coords) {
  Point p;
  p.payload_ = std::move(coords);
  return p;
}

Point Point::spider(int ray, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidInput("spider point: radius must be finite and >= 0");
  if (ray < 0) throw InvalidInput("spider point: ray index must be >= 0");
  Point p;
  p.payload_ = radius == 0.0 ? SpiderCoord{0, 0.0} : SpiderCoord{ray, radius};
  return p;
}

Point Point::product(Point left, Point right) {
  Point p;
  p.payload_ = std::make_shared<const Pair>(Pair{std::move(left), std::move(right)});
  return p;
}

const Point::Vector& Point::coords() const {
  if (const auto* v = std::get_if<Vector>(&payload_)) return *v;
  throw InvalidInput("point has no coordinate payload");
}

const SpiderCoord& Point::spider_coord() const {
  if (const auto* s = std::get_if<SpiderCoord>(&payload_)) return *s;
  throw InvalidInput("point is not a spider point");
}

const Point& Point::left() const {
  if (const auto* pr = std::get_if<std::shared_ptr<const Pair>>(&payload_)) return (*pr)->left;
  throw InvalidInput("point is not a product point");
}

const Point& Point::right() const {
  if (const auto* pr = std::get_if<std::shared_ptr<const Pair>>(&payload_)) return (*pr)->right;
  throw InvalidInput("point is not a product point");
}

bool operator==(const Point& a, const Point& b) {
  if (a.payload_.index() != b.payload_.index()) return false;
  if (a.has_coords()) {
    const auto& u = a.coords();
    const auto& v = b.coords();
    return u.size() == v.size() && (u.array() == v.array()).all();
  }
  if (a.is_spider()) return a.spider_coord() == b.spider_coord();
  return a.left() == b.left() && a.right() == b.right();
}

// ---------------------------------------------------------------- Space

Space Space::euclidean(int dim) {
  if (dim < 1) throw InvalidInput("euclidean space: dim must be >= 1");
  Space s;
  s.kind_ = SpaceKind::euclidean;
  s.param_ = dim;
  return s;
}

Space Space::hyperboloid(int dim) {
  if (dim < 1) throw InvalidInput("hyperboloid space: dim must be >= 1");
  Space s;
  s.kind_ = SpaceKind::hyperboloid;
  s.param_ = dim;
  return s;
}

Space Space::spider(int rays) {
  if (rays < 2) throw InvalidInput("spider space: rays must be >= 2");
  Space s;
  s.kind_ = SpaceKind::spider;
  s.param_ = rays;
  return s;
}

Space Space::product(Space left, Space right) {
  Space s;
  s.kind_ = SpaceKind::product;
  s.param_ = 0;
  s.left_ = std::make_shared<const Space>(std::move(left));
  s.right_ = std::make_shared<const Space>(std::move(right));
  return s;
}

int Space::dim() const {
  if (kind_ != SpaceKind::euclidean && kind_ != SpaceKind::hyperboloid)
    throw InvalidInput("dim() is only defined for euclidean and hyperboloid spaces");
  return param_;
}

int Space::rays() const {
  if (kind_ != SpaceKind::spider) throw InvalidInput("rays() is only defined for spider spaces");
  return param_;
}

const Space& Space::left() const {
  if (kind_ != SpaceKind::product) throw InvalidInput("left() is only defined for product spaces");
  return *left_;
}

const Space& Space::right() const {
  if (kind_ != SpaceKind::product) throw InvalidInput("right() is only defined for product spaces");
  return *right_;
}

void Space::validate(const Point& p) const {
  switch (kind_) {
    case SpaceKind::euclidean: {
      const auto& v = expect_coords(p, "euclidean space");
      if (v.size() != param_) throw InvalidInput("euclidean space: point has wrong dimension");
      if (!v.allFinite()) throw InvalidInput("euclidean space: non-finite coordinate");
      return;
    }
    case SpaceKind::hyperboloid: {
      const auto& v = expect_coords(p, "hyperboloid space");
      if (v.size() != param_ + 1) throw InvalidInput("hyperboloid space: point needs dim+1 ambient coordinates");
      if (!v.allFinite()) throw InvalidInput("hyperboloid space: non-finite coordinate");
      if (!(v[0] > 0.0)) throw InvalidInput("hyperboloid space: point is not on the upper sheet");
      // Relative to x0^2: the two terms of the Minkowski norm are of that size.
      const double scale = std::max(1.0, v[0] * v[0]);
      if (std::abs(minkowski(v, v) + 1.0) > kSheetTolerance * scale)
        throw InvalidInput("hyperboloid space: point violates <x,x> = -1");
      return;
    }
    case SpaceKind::spider: {
      if (!p.is_spider()) throw InvalidInput("spider space: expected a spider point");
      const auto& s = p.spider_coord();
      if (s.ray < 0 || s.ray >= param_) throw InvalidInput("spider space: ray index out of range");
      if (!(s.radius >= 0.0) || !std::isfinite(s.radius)) throw InvalidInput("spider space: bad radius");
      if (s.radius == 0.0 && s.ray != 0) throw InvalidInput("spider space: hub must be stored on ray 0");
      return;
    }
    case SpaceKind::product:
      if (!p.is_product()) throw InvalidInput("product space: expected a product point");
      left_->validate(p.left());
      right_->validate(p.right());
      return;
  }
}

bool Space::contains(const Point& p) const noexcept {
  try {
    validate(p);
    return true;
  } catch (const InvalidInput&) {
    return false;
  }
}

std::string Space::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case SpaceKind::euclidean: os << "euclidean(" << param_ << ")"; break;
    case SpaceKind::hyperboloid: os << "hyperboloid(" << param_ << ")"; break;
    case SpaceKind::spider: os << "spider(" << param_ << ")"; break;
    case SpaceKind::product: os << "product(" << left_->describe() << ", " << right_->describe() << ")"; break;
  }
  return os.str();
}

bool operator==(const Space& a, const Space& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == SpaceKind::product) return *a.left_ == *b.left_ && *a.right_ == *b.right_;
  return a.param_ == b.param_;
}

// ---------------------------------------------------------------- metric

double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return -a[0] * b[0] + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

Point hyperboloid_point(const Eigen::VectorXd& spatial) {
  Eigen::VectorXd v(spatial.size() + 1);
  v[0] = std::sqrt(1.0 + spatial.squaredNorm());
  v.tail(spatial.size()) = spatial;
  return Point::from_coords(std::move(v));
}

Point base_point(const Space& space) {
  switch (space.kind()) {
    case SpaceKind::euclidean: return Point::from_coords(Eigen::VectorXd::Zero(space.dim()));
    case SpaceKind::hyperboloid: return hyperboloid_point(Eigen::VectorXd::Zero(space.dim()));
    case SpaceKind::spider: return Point::spider(0, 0.0);
    case SpaceKind::product: return Point::product(base_point(space.left()), base_point(space.right()));
  }
  return {};
}

namespace {

// Unchecked kernels; callers validate once at the public entry points.

double hyperboloid_dist(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  // d = 2 asinh(|x - y|_M / 2) equals arccosh(-<x,y>) on the sheet and stays
  // accurate for nearby points where arccosh loses half the digits.
  const Eigen::VectorXd diff = x - y;
  const double chord2 = std::max(0.0, minkowski(diff, diff));
  return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

double spider_dist(const SpiderCoord& a, const SpiderCoord& b) {
  if (a.ray == b.ray) return std::abs(a.radius - b.radius);
  return a.radius + b.radius;
}

double dist2_raw(const Space& space, const Point& x, const Point& y) {
  switch (space.kind()) {
    case SpaceKind::euclidean: return (x.coords() - y.coords()).squaredNorm();
    case SpaceKind::hyperboloid: {
      const double d = hyperboloid_dist(x.coords(), y.coords());
      return d * d;
    }
    case SpaceKind::spider: {
      const double d = spider_dist(x.spider_coord(), y.spider_coord());
      return d * d;
    }
    case SpaceKind::product:
      return dist2_raw(space.left(), x.left(), y.left()) + dist2_raw(space.right(), x.right(), y.right());
  }
  return 0.0;
}

double dist_raw(const Space& space, const Point& x, const Point& y) {
  switch (space.kind()) {
    case SpaceKind::euclidean: return (x.coords() - y.coords()).norm();
    case SpaceKind::hyperboloid: return hyperboloid_dist(x.coords(), y.coords());
    case SpaceKind::spider: return spider_dist(x.spider_coord(), y.spider_coord());
    case SpaceKind::product: return std::sqrt(dist2_raw(space, x, y));
  }
  return 0.0;
}

Eigen::VectorXd renormalize_sheet(Eigen::VectorXd v) {
  const double n2 = -minkowski(v, v);
  if (n2 > 0.0) v /= std::sqrt(n2);
  return v;
}

Point geodesic_raw(const Space& space, const Point& x, const Point& y, double t) {
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  switch (space.kind()) {
    case SpaceKind::euclidean: return Point::from_coords((1.0 - t) * x.coords() + t * y.coords());
    case SpaceKind::hyperboloid: {
      const auto& a = x.coords();
      const auto& b = y.coords();
      const double d = hyperboloid_dist(a, b);
      if (d == 0.0) return x;
      Eigen::VectorXd g;
      if (d < 1e-8) {
        g = (1.0 - t) * a + t * b;
      } else {
        const double s = std::sinh(d);
        g = (std::sinh((1.0 - t) * d) / s) * a + (std::sinh(t * d) / s) * b;
      }
      return Point::from_coords(renormalize_sheet(std::move(g)));
    }
    case SpaceKind::spider: {
      const auto& a = x.spider_coord();
      const auto& b = y.spider_coord();
      if (a.ray == b.ray) return Point::spider(a.ray, (1.0 - t) * a.radius + t * b.radius);
      const double arc = t * (a.radius + b.radius);
      if (arc <= a.radius) return Point::spider(a.ray, a.radius - arc);
      return Point::spider(b.ray, arc - a.radius);
    }
    case SpaceKind::product:
      return Point::product(geodesic_raw(space.left(), x.left(), y.left(), t),
                            geodesic_raw(space.right(), x.right(), y.right(), t));
  }
  return x;
}

void validate_all(const Space& space, std::initializer_list<const Point*> pts) {
  for (const Point* p : pts) space.validate(*p);
}

}  // namespace

double dist(const Space& space, const Point& x, const Point& y) {
  validate_all(space, {&x, &y});
  return dist_raw(space, x, y);
}

double dist2(const Space& space, const Point& x, const Point& y) {
  validate_all(space, {&x, &y});
  return dist2_raw(space, x, y);
}

Point geodesic(const Space& space, const Point& x, const Point& y, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("geodesic: t must lie in [0,1]");
  validate_all(space, {&x, &y});
  return geodesic_raw(space, x, y, t);
}

double quasilin(const Space& space, const PointPair& uv, const PointPair& xy) {
  validate_all(space, {&uv.from, &uv.to, &xy.from, &xy.to});
  const Point& u = uv.from;
  const Point& v = uv.to;
  const Point& x = xy.from;
  const Point& y = xy.to;
  return 0.5 * (dist2_raw(space, u, y) + dist2_raw(space, v, x) - dist2_raw(space, u, x) - dist2_raw(space, v, y));
}

double pair_tangent(const Space& space, const TangentVec& tv, const PointPair& pq) {
  if (!(tv.scale >= 0.0)) throw InvalidInput("pair_tangent: tangent scale must be >= 0");
  validate_all(space, {&tv.base, &tv.target});
  if (!(tv.base == pq.from)) throw InvalidInput("pair_tangent: tangent base differs from pair origin");
  if (tv.is_zero()) {
    space.validate(pq.to);
    return 0.0;
  }
  return tv.scale * quasilin(space, {tv.base, tv.target}, pq);
}

double cn_gap(const Space& space, const Point& x, const Point& u, const Point& v, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidInput("cn_gap: lambda must lie in [0,1]");
  validate_all(space, {&x, &u, &v});
  const Point m = geodesic_raw(space, u, v, lambda);
  const double rhs = (1.0 - lambda) * dist2_raw(space, x, u) + lambda * dist2_raw(space, x, v) -
                     lambda * (1.0 - lambda) * dist2_raw(space, u, v);
  return rhs - dist2_raw(space, x, m);
}

double cs_gap(const Space& space, const Point& x, const Point& y, const Point& u, const Point& v) {
  validate_all(space, {&x, &y, &u, &v});
  const double lhs = dist2_raw(space, x, v) + dist2_raw(space, y, u);
  const double rhs = dist2_raw(space, x, u) + dist2_raw(space, y, v) + 2.0 * dist_raw(space, x, y) * dist_raw(space, u, v);
  return rhs - lhs;
}

// ---------------------------------------------------------------- charts

int chart_dim(const Space& space) {
  switch (space.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::hyperboloid: return space.dim();
    case SpaceKind::spider: return 1;
    case SpaceKind::product: return chart_dim(space.left()) + chart_dim(space.right());
  }
  return 0;
}

std::vector<Eigen::VectorXd> hyperboloid_tangent_basis(const Point& base) {
  const auto& c = base.coords();
  const int n = static_cast<int>(c.size());
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(n - 1);
  for (int i = 1; i < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, i);
    v += minkowski(v, c) * c;  // project onto c^perp
    for (const auto& e : basis) v -= minkowski(v, e) * e;
    v /= std::sqrt(minkowski(v, v));
    basis.push_back(std::move(v));
  }
  return basis;
}

Point hyperboloid_exp(const Point& base, const Eigen::VectorXd& tangent) {
  const double len = std::sqrt(std::max(0.0, minkowski(tangent, tangent)));
  if (len == 0.0) return base;
  Eigen::VectorXd p = std::cosh(len) * base.coords() + (std::sinh(len) / len) * tangent;
  return Point::from_coords(renormalize_sheet(std::move(p)));
}

std::vector<Point> poll_neighbors(const Space& space, const Point& base, double step) {
  std::vector<Point> out;
  switch (space.kind()) {
    case SpaceKind::euclidean: {
      const auto& c = base.coords();
      for (int i = 0; i < c.size(); ++i) {
        for (double sign : {1.0, -1.0}) {
          Eigen::VectorXd v = c;
          v[i] += sign * step;
          out.push_back(Point::from_coords(std::move(v)));
        }
      }
      break;
    }
    case SpaceKind::hyperboloid: {
      for (const auto& e : hyperboloid_tangent_basis(base)) {
        out.push_back(hyperboloid_exp(base, step * e));
        out.push_back(hyperboloid_exp(base, -step * e));
      }
      break;
    }
    case SpaceKind::spider: {
      const auto s = base.spider_coord();
      if (s.radius == 0.0) {
        for (int r = 0; r < space.rays(); ++r) out.push_back(Point::spider(r, step));
        break;
      }
      out.push_back(Point::spider(s.ray, s.radius + step));
      if (step <= s.radius) {
        out.push_back(Point::spider(s.ray, s.radius - step));
      } else {
        for (int r = 0; r < space.rays(); ++r)
          if (r != s.ray) out.push_back(Point::spider(r, step - s.radius));
      }
      break;
    }
    case SpaceKind::product: {
      for (auto& l : poll_neighbors(space.left(), base.left(), step)) out.push_back(Point::product(std::move(l), base.right()));
      for (auto& r : poll_neighbors(space.right(), base.right(), step)) out.push_back(Point::product(base.left(), std::move(r)));
      break;
    }
  }
  return out;
}

int sampler_dim(const Space& space) {
  switch (space.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::hyperboloid: return space.dim();
    case SpaceKind::spider: return 2;
    case SpaceKind::product: return sampler_dim(space.left()) + sampler_dim(space.right());
  }
  return 0;
}

namespace {

Point clip_to_ball(const Space& space, const Point& center, const Point& p, double radius) {
  const double d = dist_raw(space, center, p);
  if (d <= radius) return p;
  return geodesic_raw(space, center, p, radius / d);
}

Point sample_ball_raw(const Space& space, const Point& center, double radius, const double* u) {
  switch (space.kind()) {
    case SpaceKind::euclidean: {
      const auto& c = center.coords();
      Eigen::VectorXd v(c.size());
      for (int i = 0; i < c.size(); ++i) v[i] = c[i] + radius * (2.0 * u[i] - 1.0);
      return clip_to_ball(space, center, Point::from_coords(std::move(v)), radius);
    }
    case SpaceKind::hyperboloid: {
      const auto basis = hyperboloid_tangent_basis(center);
      Eigen::VectorXd w = Eigen::VectorXd::Zero(center.coords().size());
      double len2 = 0.0;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const double a = radius * (2.0 * u[i] - 1.0);
        w += a * basis[i];
        len2 += a * a;
      }
      if (len2 > radius * radius) w *= radius / std::sqrt(len2);
      return hyperboloid_exp(center, w);
    }
    case SpaceKind::spider: {
      const int ray = std::min(space.rays() - 1, static_cast<int>(u[0] * space.rays()));
      const double reach = center.spider_coord().radius + radius;
      return clip_to_ball(space, center, Point::spider(ray, u[1] * reach), radius);
    }
    case SpaceKind::product: {
      const Point l = sample_ball_raw(space.left(), center.left(), radius, u);
      const Point r = sample_ball_raw(space.right(), center.right(), radius, u + sampler_dim(space.left()));
      return clip_to_ball(space, center, Point::product(l, r), radius);
    }
  }
  return center;
}

}  // namespace

Point sample_ball(const Space& space, const Point& center, double radius, const std::vector<double>& unit) {
  space.validate(center);
  if (!(radius > 0.0)) throw InvalidInput("sample_ball: radius must be > 0");
  if (static_cast<int>(unit.size()) != sampler_dim(space)) throw InvalidInput("sample_ball: wrong number of unit coordinates");
  return sample_ball_raw(space, center, radius, unit.data());
}

}  // namespace hadeq
