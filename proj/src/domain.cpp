#include "hadeq/domain.hpp"

#include "hadeq/errors.hpp"
#include "hadeq/sampling.hpp"

#include <cmath>

namespace hadeq {

DomainK DomainK::whole(Space space) { return DomainK(std::move(space), DomainKind::whole); }

DomainK DomainK::ball(Space space, Point center, double radius) {
  space.validate(center);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball domain: radius must be > 0");
  DomainK k(std::move(space), DomainKind::ball);
  k.center_ = std::move(center);
  k.radius_ = radius;
  return k;
}

DomainK DomainK::box(Space space, Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (space.kind() != SpaceKind::euclidean) throw InvalidInput("box domain: only defined on euclidean spaces");
  if (lo.size() != space.dim() || hi.size() != space.dim()) throw InvalidInput("box domain: bounds have wrong dimension");
  if (!lo.allFinite() || !hi.allFinite()) throw InvalidInput("box domain: bounds must be finite");
  if ((lo.array() > hi.array()).any()) throw InvalidInput("box domain: lo must not exceed hi");
  DomainK k(std::move(space), DomainKind::box);
  k.lo_ = std::move(lo);
  k.hi_ = std::move(hi);
  return k;
}

const Point& DomainK::center() const {
  if (kind_ != DomainKind::ball) throw InvalidInput("domain is not a ball");
  return center_;
}

double DomainK::radius() const {
  if (kind_ != DomainKind::ball) throw InvalidInput("domain is not a ball");
  return radius_;
}

const Eigen::VectorXd& DomainK::lo() const {
  if (kind_ != DomainKind::box) throw InvalidInput("domain is not a box");
  return lo_;
}

const Eigen::VectorXd& DomainK::hi() const {
  if (kind_ != DomainKind::box) throw InvalidInput("domain is not a box");
  return hi_;
}

bool DomainK::contains(const Point& x, double tol) const {
  if (!space_.contains(x)) return false;
  switch (kind_) {
    case DomainKind::whole: return true;
    case DomainKind::ball: return dist(space_, center_, x) <= radius_ + tol * (1.0 + radius_);
    case DomainKind::box: {
      const auto& v = x.coords();
      return ((v.array() >= lo_.array() - tol) && (v.array() <= hi_.array() + tol)).all();
    }
  }
  return false;
}

Point DomainK::project(const Point& x) const {
  space_.validate(x);
  switch (kind_) {
    case DomainKind::whole: return x;
    case DomainKind::ball: {
      const double d = dist(space_, center_, x);
      if (d <= radius_) return x;
      // In a CAT(0) space the nearest point of a ball lies on the geodesic to its center.
      return geodesic(space_, center_, x, radius_ / d);
    }
    case DomainKind::box: return Point::from_coords(x.coords().cwiseMax(lo_).cwiseMin(hi_));
  }
  return x;
}

double DomainK::diameter() const {
  switch (kind_) {
    case DomainKind::whole: throw InvalidInput("diameter: the whole space is unbounded");
    case DomainKind::ball: return 2.0 * radius_;
    case DomainKind::box: return (hi_ - lo_).norm();
  }
  return 0.0;
}

double DomainK::sup_dist(const Point& x) const {
  switch (kind_) {
    case DomainKind::whole: throw InvalidInput("sup_dist: the whole space is unbounded");
    case DomainKind::ball: return dist(space_, center_, x) + radius_;
    case DomainKind::box: {
      space_.validate(x);
      const auto& v = x.coords();
      return (v - lo_).cwiseAbs().cwiseMax((v - hi_).cwiseAbs()).norm();
    }
  }
  return 0.0;
}

std::vector<Point> DomainK::corners() const {
  std::vector<Point> out;
  if (kind_ != DomainKind::box || lo_.size() > 10) return out;
  const int n = static_cast<int>(lo_.size());
  for (int mask = 0; mask < (1 << n); ++mask) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? hi_[i] : lo_[i];
    out.push_back(Point::from_coords(std::move(v)));
  }
  return out;
}

std::vector<Point> DomainK::sample(int count, std::uint64_t seed, const std::optional<Point>& bound_center,
                                   double bound_radius) const {
  if (count < 0) throw InvalidInput("domain sample: count must be >= 0");
  switch (kind_) {
    case DomainKind::whole: {
      if (!(bound_radius > 0.0)) throw InvalidInput("domain sample: the whole space needs a bounding radius");
      return halton_ball(space_, bound_center ? *bound_center : base_point(space_), bound_radius, count, seed);
    }
    case DomainKind::ball: return halton_ball(space_, center_, radius_, count, seed);
    case DomainKind::box: {
      HaltonSequence seq(static_cast<int>(lo_.size()), seed);
      std::vector<Point> out;
      out.reserve(count);
      for (int i = 0; i < count; ++i) {
        const auto u = seq(static_cast<std::uint64_t>(i));
        Eigen::VectorXd v(lo_.size());
        for (int j = 0; j < v.size(); ++j) v[j] = lo_[j] + u[j] * (hi_[j] - lo_[j]);
        out.push_back(Point::from_coords(std::move(v)));
      }
      return out;
    }
  }
  return {};
}

}  // namespace hadeq
