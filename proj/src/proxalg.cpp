#include "hadeq/proxalg.hpp"

#include "hadeq/errors.hpp"
#include "hadeq/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hadeq {

// ---------------------------------------------------------------- schedules

StepSchedule StepSchedule::constant(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("schedule.lambda: must be > 0");
  StepSchedule s(ScheduleKind::constant);
  s.values_ = {lambda};
  return s;
}

StepSchedule StepSchedule::sequence(std::vector<double> lambdas) {
  if (lambdas.empty()) throw InvalidInput("schedule.lambdas: must be nonempty");
  for (double l : lambdas)
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidInput("schedule.lambdas: every step must be > 0");
  StepSchedule s(ScheduleKind::sequence);
  s.values_ = std::move(lambdas);
  return s;
}

StepSchedule StepSchedule::geometric(double lambda0, double ratio) {
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) throw InvalidInput("schedule.lambda0: must be > 0");
  if (!(ratio >= 1.0) || !std::isfinite(ratio)) throw InvalidInput("schedule.ratio: must be >= 1");
  StepSchedule s(ScheduleKind::geometric);
  s.values_ = {lambda0};
  s.ratio_ = ratio;
  return s;
}

double StepSchedule::at(int k) const {
  if (k < 0) throw InvalidInput("schedule: negative step index");
  switch (kind_) {
    case ScheduleKind::constant: return values_[0];
    case ScheduleKind::sequence: return values_[std::min<std::size_t>(k, values_.size() - 1)];
    case ScheduleKind::geometric: return values_[0] * std::pow(ratio_, k);
  }
  return values_[0];
}

double StepSchedule::lambda_min(int steps) const {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < std::max(steps, 1); ++k) m = std::min(m, at(k));
  return m;
}

StopRule StopRule::successive_dist(double eps) {
  if (!(eps > 0.0)) throw InvalidInput("stop.eps: must be > 0");
  return {StopKind::successive_dist, eps};
}

StopRule StopRule::residual_bound(double eps) {
  if (!(eps > 0.0)) throw InvalidInput("stop.eps: must be > 0");
  return {StopKind::residual_bound, eps};
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iters: return "max_iters";
    case RunStatus::resolvent_failure: return "resolvent_failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------- bounds

double sup_dist_over(const DomainK& k, const Point& p, const std::vector<Point>& grid) {
  if (k.bounded()) return k.sup_dist(p);
  if (grid.empty()) throw InvalidInput("sup_dist_over: unbounded K needs a nonempty grid");
  double s = 0.0;
  for (const auto& y : grid) s = std::max(s, dist(k.space(), p, y));
  return s;
}

namespace {

void check_step_index(const Trace& trace, int k) {
  if (k < 0 || k >= trace.num_steps()) throw InvalidInput("trace: step index out of range");
}

}  // namespace

ResidualBounds residual_lower_bound(const Trace& trace, int k, const DomainK& k_set) {
  check_step_index(trace, k);
  const Point& next = trace.iterates[k + 1];
  ResidualBounds b;
  b.successive = -trace.successive[k] * sup_dist_over(k_set, next, trace.residual_grid) / trace.steps[k];
  if (k_set.bounded()) b.diameter = diameter_bound(trace, k, k_set);
  return b;
}

double diameter_bound(const Trace& trace, int k, const DomainK& k_set) {
  check_step_index(trace, k);
  const double diam = k_set.diameter();
  return -diam * diam / trace.steps[k];
}

// ---------------------------------------------------------------- run

Trace run_prox(const RunConfig& cfg) {
  const Space& space = cfg.F.space();
  if (!(cfg.K.space() == space)) throw InvalidInput("run: bifunction and domain live in different spaces");
  if (cfg.max_iters < 1) throw InvalidInput("max_iters: must be >= 1");
  if (cfg.residual_grid_size < 1) throw InvalidInput("residual_grid_size: must be >= 1");
  space.validate(cfg.x0);
  if (!cfg.K.contains(cfg.x0)) throw InvalidInput("x0: initial point must lie in K");
  if (cfg.reference_solution) space.validate(*cfg.reference_solution);

  Trace t(space);
  t.seed = cfg.seed;
  t.lambda_min = cfg.schedule.lambda_min(cfg.max_iters);

  const Point center = cfg.bound_center ? *cfg.bound_center : cfg.reference_solution ? *cfg.reference_solution : cfg.x0;
  const double radius = cfg.bound_radius > 0.0 ? cfg.bound_radius : std::max(1.0, 2.0 * dist(space, cfg.x0, center));
  t.residual_grid = cfg.K.sample(cfg.residual_grid_size, mix_seed(cfg.seed, 0x6E1D), center, radius);
  for (auto& c : cfg.K.corners()) t.residual_grid.push_back(std::move(c));
  if (cfg.K.kind() == DomainKind::ball) t.residual_grid.push_back(cfg.K.center());
  t.residual_grid.push_back(cfg.x0);
  if (cfg.reference_solution && cfg.K.contains(*cfg.reference_solution)) t.residual_grid.push_back(*cfg.reference_solution);

  t.iterates.push_back(cfg.x0);
  if (cfg.reference_solution) t.fejer = std::vector<double>{dist(space, cfg.x0, *cfg.reference_solution)};

  t.status = RunStatus::max_iters;
  for (int k = 0; k < cfg.max_iters; ++k) {
    const double lambda = cfg.schedule.at(k);
    ResolverSettings inner = cfg.inner;
    inner.seed = mix_seed(cfg.seed, 0x1000 + static_cast<std::uint64_t>(k));
    ResolventResult res;
    try {
      res = resolve(make_query(cfg.F, lambda, t.iterates.back(), cfg.K, inner));
    } catch (const ResolventFailure& e) {
      t.status = RunStatus::resolvent_failure;
      t.failure_message = "step " + std::to_string(k) + ": " + e.what();
      break;
    }
    const Point& prev = t.iterates.back();
    const double succ = dist(space, prev, res.z);
    t.steps.push_back(lambda);
    t.successive.push_back(succ);
    t.certified_gaps.push_back(res.certified_gap);
    if (t.fejer) t.fejer->push_back(dist(space, res.z, *cfg.reference_solution));
    t.iterates.push_back(res.z);

    const auto bounds = residual_lower_bound(t, k, cfg.K);
    t.bound_successive.push_back(bounds.successive);
    t.bound_diameter.push_back(bounds.diameter.value_or(std::numeric_limits<double>::quiet_NaN()));
    t.equilibrium_residuals.push_back(equilibrium_residual(cfg.F, res.z, t.residual_grid));

    if (cfg.stop.kind == StopKind::successive_dist && succ < cfg.stop.eps) {
      t.status = RunStatus::converged;
      break;
    }
    if (cfg.stop.kind == StopKind::residual_bound && bounds.successive >= -cfg.stop.eps) {
      t.status = RunStatus::converged;
      break;
    }
  }
  return t;
}

// ---------------------------------------------------------------- diagnostics

double fejer_check(const Trace& trace, const Point& xstar) {
  double worst = trace.iterates.size() < 2 ? 0.0 : -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < trace.iterates.size(); ++k) {
    worst = std::max(worst, dist(trace.space, trace.iterates[k + 1], xstar) - dist(trace.space, trace.iterates[k], xstar));
  }
  return worst;
}

double obtuse_angle_check(const Bifunction& f, double lambda, const DomainK& k, const Point& xbar, const Point& xstar,
                          const ResolverSettings& s) {
  const Point xt = resolve(make_query(f, lambda, xbar, k, s)).z;
  return quasilin(f.space(), {xt, xbar}, {xt, xstar});
}

RegularityReport asymptotic_regularity(const Trace& trace, double eps, const std::optional<Point>& xstar) {
  if (trace.iterates.size() < 10) throw InvalidInput("asymptotic_regularity: needs at least 10 iterates");
  const auto& s = trace.successive;
  RegularityReport r;

  int non_increasing = 0;
  std::vector<double> ratios;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    if (s[k + 1] <= s[k]) ++non_increasing;
    if (s[k] > 0.0) ratios.push_back(s[k + 1] / s[k]);
  }
  const auto pairs = static_cast<int>(s.size()) - 1;
  r.regular = s.back() < eps && 2 * non_increasing >= pairs;
  if (!ratios.empty()) {
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
    r.rate = ratios[ratios.size() / 2];
  }

  if (xstar) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double before = dist2(trace.space, trace.iterates[k], *xstar);
      const double after = dist2(trace.space, trace.iterates[k + 1], *xstar);
      worst = std::max(worst, s[k] * s[k] - (before - after));
    }
    r.telescoping_violation = worst;
  }
  return r;
}

}  // namespace hadeq
