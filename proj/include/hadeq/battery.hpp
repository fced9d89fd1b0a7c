#pragma once

// Seeded sweep of the CAT(0) inequality battery over random samples.

#include "hadeq/geometry.hpp"

#include <cstdint>

namespace hadeq {

struct GeometryReport {
  int samples = 0;
  /// max(0, -cn_gap) and max(0, -cs_gap).
  double cn_violation = 0.0;
  double cs_violation = 0.0;
  /// min cn_gap over non-degenerate samples (lambda in (0,1), u != v).
  double cn_gap_min = 0.0;
  /// |<->uv,->uz> + <->vu,->vz> - d^2(u,v)|.
  double split_residual = 0.0;
  /// max(0, l <->zu,->zv> - <->zx,->zv>) with x = gamma_{z,u}(l).
  double scaling_violation = 0.0;
  /// |d(gamma(s), gamma(t)) - |s-t| d(x,y)|.
  double reparam_residual = 0.0;
  /// Euclidean only: CN equality, equality in the scaling bound, affinity of
  /// u -> <->zu,->zv> along geodesics and agreement with the dot product.
  double flat_residual = 0.0;
  bool flat = false;

  /// Tolerances: 1e-10 for the inequalities and the
  /// splitting identity, 1e-9 for the flat and reparametrization residuals.
  bool ok() const;
};

/// `samples` random configurations with points within `radius` of the base point.
GeometryReport geometry_battery(const Space& space, int samples, std::uint64_t seed, double radius = 2.0);

}  // namespace hadeq
