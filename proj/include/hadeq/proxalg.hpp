#pragma once

// The proximal algorithm x^{k+1} = J_{lambda_k F}(x^k) with the a-posteriori
// residual bounds it admits and Fejer-type diagnostics.
//
// Indexing: steps[k] is the lambda used to map iterates[k] to iterates[k+1],
// so every per-step series (successive, bounds, residuals) has one entry per
// step and refers to the new iterate iterates[k+1].

#include "hadeq/bifunction.hpp"
#include "hadeq/domain.hpp"
#include "hadeq/resolvent.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hadeq {

enum class ScheduleKind { constant, sequence, geometric };

class StepSchedule {
 public:
  static StepSchedule constant(double lambda);
  /// Steps past the end of the list repeat its last entry.
  static StepSchedule sequence(std::vector<double> lambdas);
  /// lambda_k = lambda0 * ratio^k, ratio >= 1.
  static StepSchedule geometric(double lambda0, double ratio);

  ScheduleKind kind() const { return kind_; }
  double at(int k) const;
  /// min_{k < steps} lambda_k, the "bounded away from zero" certificate.
  double lambda_min(int steps) const;

  const std::vector<double>& values() const { return values_; }
  double ratio() const { return ratio_; }

 private:
  StepSchedule(ScheduleKind kind) : kind_(kind) {}
  ScheduleKind kind_;
  std::vector<double> values_;  // constant / lambda0 / the sequence
  double ratio_ = 1.0;
};

enum class StopKind { successive_dist, residual_bound, max_iters };

struct StopRule {
  StopKind kind = StopKind::max_iters;
  double eps = 0.0;

  static StopRule successive_dist(double eps);
  static StopRule residual_bound(double eps);
  static StopRule max_iterations() { return {}; }
};

struct RunConfig {
  RunConfig(Bifunction f, DomainK k, Point x, StepSchedule s)
      : F(std::move(f)), K(std::move(k)), x0(std::move(x)), schedule(std::move(s)) {}

  Bifunction F;
  DomainK K;
  Point x0;
  StepSchedule schedule;
  int max_iters = 100;
  StopRule stop;
  std::optional<Point> reference_solution;
  int residual_grid_size = 256;
  std::uint64_t seed = 0;
  ResolverSettings inner;
  /// Ball that stands in for K when K is the whole space: residual grids
  /// and the sup in the successive-distance bound are taken over it.
  /// Radius 0 picks max(1, 2 d(x0, center)); the center defaults to the
  /// reference solution, else x0.
  std::optional<Point> bound_center;
  double bound_radius = 0.0;
};

enum class RunStatus { converged, max_iters, resolvent_failure };

std::string to_string(RunStatus s);

struct Trace {
  explicit Trace(Space s) : space(std::move(s)) {}

  Space space;
  std::vector<Point> iterates;
  std::vector<double> steps;
  std::vector<double> successive;
  /// d(iterates[k], x*) for every iterate, when a reference solution is set.
  std::optional<std::vector<double>> fejer;
  /// -(1/lambda_k) d(x^{k+1}, x^k) sup_{y in K} d(x^{k+1}, y).
  std::vector<double> bound_successive;
  /// -diam(K)^2 / lambda_k; NaN for unbounded K.
  std::vector<double> bound_diameter;
  /// min over the residual grid of F(x^{k+1}, y).
  std::vector<double> equilibrium_residuals;
  std::vector<double> certified_gaps;
  std::vector<Point> residual_grid;
  RunStatus status = RunStatus::max_iters;
  std::string failure_message;
  double lambda_min = 0.0;
  std::uint64_t seed = 0;

  int num_steps() const { return static_cast<int>(steps.size()); }
};

/// Runs the proximal algorithm. Resolvent failures end the run with status
/// resolvent_failure, keeping every step completed before the failure.
Trace run_prox(const RunConfig& cfg);

/// sup_{y in K} d(p, y): exact for balls and boxes, grid sup for the whole space.
double sup_dist_over(const DomainK& k, const Point& p, const std::vector<Point>& grid);

struct ResidualBounds {
  double successive = 0.0;             // the d(x^{k+1}, x^k) form
  std::optional<double> diameter;      // the diam(K)^2 form, bounded K only
};

/// Lower bounds on inf_{y in K} F(x^{k+1}, y) after step k.
ResidualBounds residual_lower_bound(const Trace& trace, int k, const DomainK& k_set);

/// The diam(K)^2 form alone; throws InvalidInput for unbounded K.
double diameter_bound(const Trace& trace, int k, const DomainK& k_set);

/// max_k d(x^{k+1}, x*) - d(x^k, x*); zero for traces with a single iterate.
double fejer_check(const Trace& trace, const Point& xstar);

/// <->x~ xbar, ->x~ x*> with x~ = J_{lambda F}(xbar).
double obtuse_angle_check(const Bifunction& f, double lambda, const DomainK& k, const Point& xbar, const Point& xstar,
                          const ResolverSettings& s = {});

struct RegularityReport {
  bool regular = false;
  /// Median ratio of consecutive successive distances.
  double rate = 0.0;
  /// max_k d^2(x^{k+1},x^k) - [d^2(x^k,x*) - d^2(x^{k+1},x*)], when x* is given.
  std::optional<double> telescoping_violation;
};

/// Diagnostic only: true when the last successive distance is below eps
/// and at least half of the successive distances do not increase.
RegularityReport asymptotic_regularity(const Trace& trace, double eps = 1e-6,
                                       const std::optional<Point>& xstar = std::nullopt);

}  // namespace hadeq
