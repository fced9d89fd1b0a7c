#pragma once

// Deterministic sampling: seeded sub-streams and scrambled Halton sequences.

#include "hadeq/geometry.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace hadeq {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent sub-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) { return Rng(mix_seed(seed, stream)); }

/// Halton point `index` in [0,1)^dim, shifted modulo 1 by a seed-derived
/// offset (Cranley-Patterson rotation).
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed);
  std::vector<double> operator()(std::uint64_t index) const;
  int dim() const { return static_cast<int>(shift_.size()); }

 private:
  std::vector<double> shift_;
};

/// `count` low-discrepancy points in the geodesic ball of `radius` about `center`.
std::vector<Point> halton_ball(const Space& space, const Point& center, double radius, int count, std::uint64_t seed);

/// A point drawn at random within `radius` of the base point (i.i.d., not low-discrepancy).
Point random_point(const Space& space, Rng& rng, double radius);

}  // namespace hadeq
