#include "hadeq/sampling.hpp"

#include "hadeq/errors.hpp"

#include <array>
#include <cmath>

namespace hadeq {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

constexpr std::array<int, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t n, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (n > 0) {
    r += f * static_cast<double>(n % base);
    n /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed) {
  if (dim < 1 || dim > static_cast<int>(kPrimes.size())) throw InvalidInput("halton: unsupported dimension");
  Rng rng(mix_seed(seed, 0x4A17));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  shift_.resize(dim);
  for (auto& s : shift_) s = unif(rng);
}

std::vector<double> HaltonSequence::operator()(std::uint64_t index) const {
  std::vector<double> u(shift_.size());
  for (std::size_t i = 0; i < shift_.size(); ++i) {
    double v = radical_inverse(index + 1, kPrimes[i]) + shift_[i];
    u[i] = v - std::floor(v);
  }
  return u;
}

std::vector<Point> halton_ball(const Space& space, const Point& center, double radius, int count, std::uint64_t seed) {
  HaltonSequence seq(sampler_dim(space), seed);
  std::vector<Point> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sample_ball(space, center, radius, seq(static_cast<std::uint64_t>(i))));
  return out;
}

Point random_point(const Space& space, Rng& rng, double radius) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> u(sampler_dim(space));
  for (auto& v : u) v = unif(rng);
  return sample_ball(space, base_point(space), radius, u);
}

}  // namespace hadeq
