#include "hadeq/battery.hpp"

#include "hadeq/errors.hpp"
#include "hadeq/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hadeq {

bool GeometryReport::ok() const {
  return cn_violation <= 1e-10 && cs_violation <= 1e-10 && split_residual <= 1e-10 && scaling_violation <= 1e-10 &&
         reparam_residual <= 1e-9 && flat_residual <= 1e-9;
}

GeometryReport geometry_battery(const Space& space, int samples, std::uint64_t seed, double radius) {
  if (samples < 1) throw InvalidInput("geometry_battery: samples must be >= 1");
  if (!(radius > 0.0)) throw InvalidInput("geometry_battery: radius must be > 0");
  Rng rng = make_rng(seed, 0xC47);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  GeometryReport r;
  r.samples = samples;
  r.flat = space.kind() == SpaceKind::euclidean;
  r.cn_gap_min = std::numeric_limits<double>::infinity();

  for (int n = 0; n < samples; ++n) {
    const Point x = random_point(space, rng, radius);
    const Point y = random_point(space, rng, radius);
    const Point u = random_point(space, rng, radius);
    const Point v = random_point(space, rng, radius);
    const double l = unit(rng);
    const double s = unit(rng);

    const double cn = cn_gap(space, x, u, v, l);
    r.cn_violation = std::max(r.cn_violation, -cn);
    if (l > 0.0 && l < 1.0 && !(u == v)) r.cn_gap_min = std::min(r.cn_gap_min, cn);
    r.cs_violation = std::max(r.cs_violation, -cs_gap(space, x, y, u, v));

    // Splitting identity with z = x.
    const double lhs = quasilin(space, {u, v}, {u, x}) + quasilin(space, {v, u}, {v, x});
    r.split_residual = std::max(r.split_residual, std::abs(lhs - dist2(space, u, v)));

    // Scaling along the geodesic from y to u.
    const Point g = geodesic(space, y, u, l);
    const double scaled = l * quasilin(space, {y, u}, {y, v});
    const double at_g = quasilin(space, {y, g}, {y, v});
    r.scaling_violation = std::max(r.scaling_violation, scaled - at_g);

    const double d = dist(space, x, y);
    const double along = dist(space, geodesic(space, x, y, l), geodesic(space, x, y, s));
    r.reparam_residual = std::max(r.reparam_residual, std::abs(along - std::abs(l - s) * d));

    if (r.flat) {
      double flat = std::abs(cn);
      flat = std::max(flat, std::abs(scaled - at_g));
      // Affinity of w -> <->yw, ->yv> along gamma_{x,u}.
      const Point w = geodesic(space, x, u, s);
      const double mixed = (1.0 - s) * quasilin(space, {y, x}, {y, v}) + s * quasilin(space, {y, u}, {y, v});
      flat = std::max(flat, std::abs(quasilin(space, {y, w}, {y, v}) - mixed));
      const double dot = (v.coords() - u.coords()).dot(y.coords() - x.coords());
      flat = std::max(flat, std::abs(quasilin(space, {u, v}, {x, y}) - dot));
      r.flat_residual = std::max(r.flat_residual, flat);
    }
  }
  if (!std::isfinite(r.cn_gap_min)) r.cn_gap_min = 0.0;
  return r;
}

}  // namespace hadeq
