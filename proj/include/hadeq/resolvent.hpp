#pragma once

// Resolvents J_{lambda F}(x): the unique z in K with
//   lambda F(z, y) - <->zx, ->zy> >= 0   for all y in K,
// computed from closed forms where the bifunction family allows it and by a
// derivative-free inner solver otherwise.

#include "hadeq/bifunction.hpp"
#include "hadeq/domain.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadeq {

enum class ResolventMethod { closed_form, generic };

std::string to_string(ResolventMethod m);

struct ResolventQuery {
  Bifunction F;
  double lambda = 1.0;
  Point x;
  DomainK K;
  double inner_tol = 1e-6;
  int inner_max_iters = 20000;

  /// Seeds the verification grid.
  std::uint64_t seed = 0;
  int verify_grid_size = 256;
  /// Radius of the verification ball for unbounded K; 0 picks
  /// max(1, 2 d(x, z)) around the computed z.
  double verify_radius = 0.0;
  /// When false the closed-form registry is skipped.
  bool allow_closed_form = true;
};

struct ResolventResult {
  Point z;
  double certified_gap = 0.0;
  ResolventMethod method = ResolventMethod::closed_form;
  int inner_iters = 0;
};

/// The inner solver did not certify its answer within budget.
class ResolventFailure : public std::runtime_error {
 public:
  ResolventFailure(const std::string& what, Point best, double gap, int iters)
      : std::runtime_error(what), best_(std::move(best)), gap_(gap), iters_(iters) {}

  const Point& best() const { return best_; }
  double gap() const { return gap_; }
  int iters() const { return iters_; }

 private:
  Point best_;
  double gap_;
  int iters_;
};

/// F~_xbar(x, y) = F(x, y) - <->x xbar, ->xy>.
Bifunction regularized_F(const Bifunction& f, const Point& xbar);

/// prox_{lambda g}(x) = argmin_y [lambda g(y) + 1/2 d^2(y, x)] in closed form.
Point prox(const ConvexFunctional& g, double lambda, const Point& x);

/// Closed-form J_{lambda F}(x) when one is registered for (F, K), else nullopt.
std::optional<Point> closed_form_resolvent(const Bifunction& f, double lambda, const Point& x, const DomainK& k);

/// max(0, max over grid of <->z q.x, ->zy> - q.lambda F(z, y)).
double verify_resolvent(const Point& z, const ResolventQuery& q, const std::vector<Point>& grid);

/// The grid `resolve` certifies against for a candidate z.
std::vector<Point> verification_grid(const ResolventQuery& q, const Point& z);

/// Closed form first, generic solver second. Throws ResolventFailure when
/// the generic solver cannot certify gap <= inner_tol.
ResolventResult resolve(const ResolventQuery& q);

/// The generic direct-search solver alone.
ResolventResult resolve_generic(const ResolventQuery& q);

/// Settings shared by the batch helpers below; F, lambda, x and K are
/// filled in per call.
struct ResolverSettings {
  double inner_tol = 1e-6;
  int inner_max_iters = 20000;
  std::uint64_t seed = 0;
  int verify_grid_size = 256;
  bool allow_closed_form = true;
};

ResolventQuery make_query(const Bifunction& f, double lambda, const Point& x, const DomainK& k, const ResolverSettings& s = {});

/// max over pairs of d(J x, J y) - d(x, y) for J = J_{lambda F}.
double nonexpansivity_gap(const Bifunction& f, double lambda, const std::vector<std::pair<Point, Point>>& pairs,
                          const DomainK& k, const ResolverSettings& s = {});

/// max over pairs of d^2(Jx,Jy) - 1/2 [d^2(x,Jy) + d^2(y,Jx) - d^2(x,Jx) - d^2(y,Jy)].
double firm_nonexpansivity_gap(const Bifunction& f, double lambda, const std::vector<std::pair<Point, Point>>& pairs,
                               const DomainK& k, const ResolverSettings& s = {});

}  // namespace hadeq
