#include "hadeq/resolvent.hpp"

#include "hadeq/errors.hpp"
#include "hadeq/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hadeq {

std::string to_string(ResolventMethod m) { return m == ResolventMethod::closed_form ? "closed_form" : "generic"; }

Bifunction regularized_F(const Bifunction& f, const Point& xbar) {
  f.space().validate(xbar);
  const Space space = f.space();
  return Bifunction::custom(
      space,
      [f, xbar, space](const Point& x, const Point& y) { return f(x, y) - quasilin(space, {x, xbar}, {x, y}); },
      "regularized(" + f.name() + ")", f.monotone());
}

Point prox(const ConvexFunctional& g, double lambda, const Point& x) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("prox: lambda must be > 0");
  const Space& space = g.space();
  space.validate(x);
  switch (g.kind()) {
    case FunctionalKind::half_sq_dist: {
      const double lc = lambda * g.weight();
      return geodesic(space, x, g.anchor(), lc / (1.0 + lc));
    }
    case FunctionalKind::dist_to: {
      const double d = dist(space, x, g.anchor());
      if (d <= lambda) return g.anchor();
      return geodesic(space, x, g.anchor(), lambda / d);
    }
    case FunctionalKind::abs_value: {
      const double v = x.coords()[0];
      const double shrunk = std::max(std::abs(v) - lambda, 0.0);
      return Point::from_coords(Eigen::VectorXd::Constant(1, std::copysign(shrunk, v)));
    }
    case FunctionalKind::quadratic: {
      const auto n = g.b().size();
      const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) + lambda * g.q();
      return Point::from_coords(a.ldlt().solve(x.coords() - lambda * g.b()));
    }
  }
  return x;
}

std::optional<Point> closed_form_resolvent(const Bifunction& f, double lambda, const Point& x, const DomainK& k) {
  if (k.kind() != DomainKind::whole) return std::nullopt;
  switch (f.kind()) {
    case BifunctionKind::functional: return prox(f.functional(), lambda, x);
    case BifunctionKind::field: {
      const auto& a = f.field();
      if (a.kind() != FieldKind::euclidean_affine || !a.monotone()) return std::nullopt;
      f.space().validate(x);
      const auto n = a.b().size();
      // z solves x - z = lambda (M z + b), i.e. ->zx = lambda A(z).
      const Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(n, n) + lambda * a.m();
      return Point::from_coords(sys.partialPivLu().solve(x.coords() - lambda * a.b()));
    }
    case BifunctionKind::custom: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

void check_query(const ResolventQuery& q) {
  if (!(q.lambda > 0.0) || !std::isfinite(q.lambda)) throw InvalidInput("resolvent: lambda must be > 0");
  if (!(q.inner_tol > 0.0)) throw InvalidInput("resolvent: inner_tol must be > 0");
  if (q.inner_max_iters < 1) throw InvalidInput("resolvent: inner_max_iters must be >= 1");
  if (!(q.F.space() == q.K.space())) throw InvalidInput("resolvent: bifunction and domain live in different spaces");
  q.F.space().validate(q.x);
}

// One term of the defining inequality; positive values are violations.
double violation(const ResolventQuery& q, const Point& z, const Point& y) {
  return quasilin(q.F.space(), {z, q.x}, {z, y}) - q.lambda * q.F(z, y);
}

}  // namespace

double verify_resolvent(const Point& z, const ResolventQuery& q, const std::vector<Point>& grid) {
  if (grid.empty()) throw InvalidInput("verify_resolvent: empty grid");
  double worst = 0.0;
  for (const auto& y : grid) worst = std::max(worst, violation(q, z, y));
  return worst;
}

std::vector<Point> verification_grid(const ResolventQuery& q, const Point& z) {
  const Space& space = q.F.space();
  std::vector<Point> grid;
  if (q.K.bounded()) {
    grid = q.K.sample(q.verify_grid_size, mix_seed(q.seed, 0x5E41));
    for (auto& c : q.K.corners()) grid.push_back(std::move(c));
    if (q.K.kind() == DomainKind::ball) grid.push_back(q.K.center());
  } else {
    const double radius = q.verify_radius > 0.0 ? q.verify_radius : std::max(1.0, 2.0 * dist(space, q.x, z));
    grid = halton_ball(space, z, radius, q.verify_grid_size, mix_seed(q.seed, 0x5E41));
  }
  grid.push_back(q.K.project(q.x));
  return grid;
}

namespace {

// Direct search on the squared-hinge merit
//   phi_Y(z) = sum_{y in Y} max(0, <->zx, ->zy> - lambda F(z, y))^2
// over a stencil Y refreshed around the incumbent with shrinking radius.
class GenericSolver {
 public:
  explicit GenericSolver(const ResolventQuery& q) : q_(q), space_(q.F.space()) {}

  ResolventResult run() {
    Point z = q_.K.project(q_.x);
    const double scale = 1.0 + dist(space_, q_.x, z);
    double rho = scale;
    const double rho_floor = 1e-13 * scale;
    const double polish_radius = 1e-7 * scale;

    double gap = std::numeric_limits<double>::infinity();
    while (true) {
      const auto stencil = make_stencil(z, rho, scale);
      const Point next = pattern_search(stencil, z, rho, 1e-2 * rho);
      const double moved = dist(space_, z, next);
      z = next;
      rho = std::clamp(2.0 * moved, rho / 8.0, 4.0 * rho);

      if (iters_ > q_.inner_max_iters) break;
      if (rho <= polish_radius || rho < rho_floor) {
        gap = verify_resolvent(z, q_, verification_grid(q_, z));
        if (gap <= 1e-3 * q_.inner_tol || rho < rho_floor) break;
      }
    }
    if (!std::isfinite(gap)) gap = verify_resolvent(z, q_, verification_grid(q_, z));
    if (gap > q_.inner_tol || iters_ > q_.inner_max_iters) {
      throw ResolventFailure("resolvent: generic solver did not reach inner_tol (gap " + std::to_string(gap) + ")", z, gap,
                             iters_);
    }
    return ResolventResult{z, gap, ResolventMethod::generic, iters_};
  }

 private:
  // Near rings resolve the quadratic growth of F(z, .), the fixed outer ring
  // resolves linear growth, where violations scale with the distance to y.
  std::vector<Point> make_stencil(const Point& c, double rho, double scale) const {
    std::vector<Point> ys;
    for (double r : {rho, rho / 3.0, scale}) {
      for (auto& p : poll_neighbors(space_, c, r)) ys.push_back(q_.K.project(p));
    }
    for (auto& p : halton_ball(space_, c, rho, 8, mix_seed(q_.seed, 0x57E1))) ys.push_back(q_.K.project(p));
    for (auto& p : q_.K.corners()) ys.push_back(std::move(p));
    return ys;
  }

  double merit(const std::vector<Point>& ys, const Point& z) const {
    double total = 0.0;
    for (const auto& y : ys) {
      const double v = violation(q_, z, y);
      if (v > 0.0) total += v * v;
    }
    return total;
  }

  Point pattern_search(const std::vector<Point>& ys, Point z, double step, double step_min) {
    double best = merit(ys, z);
    while (step >= step_min && best > 0.0) {
      ++iters_;
      if (iters_ > q_.inner_max_iters) break;
      bool improved = false;
      for (const auto& cand : poll_neighbors(space_, z, step)) {
        const Point p = q_.K.project(cand);
        const double v = merit(ys, p);
        // Strict decrease only: flat regions keep the incumbent.
        if (v < best) {
          best = v;
          z = p;
          improved = true;
          break;
        }
      }
      if (!improved) step *= 0.5;
    }
    return z;
  }

  const ResolventQuery& q_;
  const Space& space_;
  int iters_ = 0;
};

}  // namespace

ResolventResult resolve_generic(const ResolventQuery& q) {
  check_query(q);
  if (!q.K.contains(q.K.project(q.x))) throw InvalidInput("resolvent: projection onto K failed");
  return GenericSolver(q).run();
}

ResolventResult resolve(const ResolventQuery& q) {
  check_query(q);
  if (q.allow_closed_form) {
    if (auto z = closed_form_resolvent(q.F, q.lambda, q.x, q.K)) {
      const double gap = verify_resolvent(*z, q, verification_grid(q, *z));
      return ResolventResult{std::move(*z), gap, ResolventMethod::closed_form, 0};
    }
  }
  return resolve_generic(q);
}

ResolventQuery make_query(const Bifunction& f, double lambda, const Point& x, const DomainK& k, const ResolverSettings& s) {
  ResolventQuery q{f, lambda, x, k};
  q.inner_tol = s.inner_tol;
  q.inner_max_iters = s.inner_max_iters;
  q.seed = s.seed;
  q.verify_grid_size = s.verify_grid_size;
  q.allow_closed_form = s.allow_closed_form;
  return q;
}

double nonexpansivity_gap(const Bifunction& f, double lambda, const std::vector<std::pair<Point, Point>>& pairs,
                          const DomainK& k, const ResolverSettings& s) {
  if (pairs.empty()) throw InvalidInput("nonexpansivity_gap: empty pair list");
  const Space& space = f.space();
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : pairs) {
    const Point jx = resolve(make_query(f, lambda, x, k, s)).z;
    const Point jy = resolve(make_query(f, lambda, y, k, s)).z;
    worst = std::max(worst, dist(space, jx, jy) - dist(space, x, y));
  }
  return worst;
}

double firm_nonexpansivity_gap(const Bifunction& f, double lambda, const std::vector<std::pair<Point, Point>>& pairs,
                               const DomainK& k, const ResolverSettings& s) {
  if (pairs.empty()) throw InvalidInput("firm_nonexpansivity_gap: empty pair list");
  const Space& space = f.space();
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : pairs) {
    const Point jx = resolve(make_query(f, lambda, x, k, s)).z;
    const Point jy = resolve(make_query(f, lambda, y, k, s)).z;
    const double bound =
        0.5 * (dist2(space, x, jy) + dist2(space, y, jx) - dist2(space, x, jx) - dist2(space, y, jy));
    worst = std::max(worst, dist2(space, jx, jy) - bound);
  }
  return worst;
}

}  // namespace hadeq
