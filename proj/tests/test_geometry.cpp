#include <doctest.h>

#include "hadeq/battery.hpp"
#include "hadeq/errors.hpp"
#include "hadeq/geometry.hpp"
#include "hadeq/sampling.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace hadeq;

namespace {

Point e(std::initializer_list<double> xs) {
  Eigen::VectorXd v(xs.size());
  int i = 0;
  for (double x : xs) v[i++] = x;
  return Point::from_coords(v);
}

std::vector<Space> all_spaces() {
  return {Space::euclidean(1),   Space::euclidean(2), Space::euclidean(3),
          Space::hyperboloid(1), Space::hyperboloid(2), Space::spider(3),
          Space::spider(5),      Space::product(Space::euclidean(2), Space::spider(3))};
}

}  // namespace

TEST_CASE("dist examples") {
  CHECK(dist(Space::euclidean(2), e({0, 0}), e({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(dist(Space::spider(3), Point::spider(0, 2), Point::spider(1, 3)) == 5.0);
  CHECK(dist(Space::spider(3), Point::spider(1, 2), Point::spider(1, 3.5)) == 1.5);

  const Eigen::VectorXd y{{std::cosh(1.0), std::sinh(1.0)}};
  CHECK(std::abs(dist(Space::hyperboloid(1), e({1, 0}), Point::from_coords(y)) - 1.0) < 1e-14);
}

TEST_CASE("hyperboloid distance agrees with a long-double oracle") {
  const Space h = Space::hyperboloid(2);
  Rng rng = make_rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const Point x = random_point(h, rng, 3.0);
    const Point y = random_point(h, rng, 3.0);
    const double ref = oracle::hyperboloid_dist(x.coords(), y.coords());
    // arccosh loses about sqrt(eps) near the diagonal, so compare away from it.
    if (ref > 1e-3) CHECK(std::abs(dist(h, x, y) - ref) <= 1e-12 * (1.0 + ref));
  }
}

TEST_CASE("spider distance agrees with the tree metric") {
  const Space s = Space::spider(5);
  Rng rng = make_rng(2, 0);
  for (int i = 0; i < 1000; ++i) {
    const Point x = random_point(s, rng, 3.0);
    const Point y = random_point(s, rng, 3.0);
    const auto a = x.spider_coord(), b = y.spider_coord();
    CHECK(dist(s, x, y) == doctest::Approx(oracle::spider_dist(a.ray, a.radius, b.ray, b.radius)).epsilon(1e-15));
  }
}

TEST_CASE("metric axioms on every space") {
  for (const auto& s : all_spaces()) {
    Rng rng = make_rng(3, 0);
    for (int i = 0; i < 300; ++i) {
      const Point x = random_point(s, rng, 2.0), y = random_point(s, rng, 2.0), z = random_point(s, rng, 2.0);
      CHECK(dist(s, x, y) == doctest::Approx(dist(s, y, x)).epsilon(1e-14));
      CHECK(dist(s, x, x) == 0.0);
      CHECK(dist(s, x, z) <= dist(s, x, y) + dist(s, y, z) + 1e-12);
    }
  }
}

TEST_CASE("mismatched payloads are rejected") {
  CHECK_THROWS_AS(dist(Space::euclidean(2), e({0, 0}), e({1, 2, 3})), InvalidInput);
  CHECK_THROWS_AS(dist(Space::euclidean(1), e({0}), Point::spider(0, 1)), InvalidInput);
  CHECK_THROWS_AS(Space::hyperboloid(1).validate(e({2, 0})), InvalidInput);
  CHECK_THROWS_AS(Space::hyperboloid(1).validate(e({-1, 0})), InvalidInput);
  CHECK_THROWS_AS(Space::spider(3).validate(Point::spider(3, 1.0)), InvalidInput);
  CHECK_THROWS_AS(Point::spider(0, -1.0), InvalidInput);
  CHECK_THROWS_AS(Space::spider(1), InvalidInput);
  CHECK_THROWS_AS(Space::euclidean(0), InvalidInput);
}

TEST_CASE("spider hub is canonical") {
  CHECK(Point::spider(2, 0.0) == Point::spider(0, 0.0));
  CHECK(Point::spider(2, 0.0).spider_coord().ray == 0);
}

TEST_CASE("geodesic examples") {
  const Point g = geodesic(Space::euclidean(2), e({0, 0}), e({2, 0}), 0.25);
  CHECK(g.coords()[0] == doctest::Approx(0.5));
  CHECK(g.coords()[1] == 0.0);

  const Point hub = geodesic(Space::spider(3), Point::spider(0, 2), Point::spider(1, 2), 0.5);
  CHECK(hub == Point::spider(0, 0.0));

  CHECK_THROWS_AS(geodesic(Space::euclidean(1), e({0}), e({1}), 1.5), InvalidInput);
  CHECK_THROWS_AS(geodesic(Space::euclidean(1), e({0}), e({1}), -0.1), InvalidInput);
}

TEST_CASE("hyperboloid geodesic matches the sinh formula") {
  const Space h = Space::hyperboloid(2);
  const Point x = hyperboloid_point(Eigen::Vector2d(0.3, -1.0));
  const Point y = hyperboloid_point(Eigen::Vector2d(-2.0, 0.5));
  const double d = oracle::hyperboloid_dist(x.coords(), y.coords());
  for (double t : {0.0, 0.3, 1.0}) {
    const Eigen::VectorXd ref = (std::sinh((1 - t) * d) * x.coords() + std::sinh(t * d) * y.coords()) / std::sinh(d);
    CHECK((geodesic(h, x, y, t).coords() - ref).norm() < 1e-12 * ref.norm());
  }
  CHECK(geodesic(h, x, y, 0.0) == x);
  CHECK(geodesic(h, x, y, 1.0) == y);
}

TEST_CASE("geodesics have constant speed") {
  for (const auto& s : all_spaces()) {
    Rng rng = make_rng(4, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
      const Point x = random_point(s, rng, 2.0), y = random_point(s, rng, 2.0);
      const double a = u(rng), b = u(rng);
      const double got = dist(s, geodesic(s, x, y, a), geodesic(s, x, y, b));
      CHECK(std::abs(got - std::abs(a - b) * dist(s, x, y)) < 1e-9);
    }
  }
}

TEST_CASE("degenerate geodesic stays put") {
  for (const auto& s : all_spaces()) {
    Rng rng = make_rng(5, 0);
    const Point x = random_point(s, rng, 2.0);
    CHECK(dist(s, geodesic(s, x, x, 0.37), x) < 1e-12);
  }
}

TEST_CASE("quasilinearization examples") {
  const Space e2 = Space::euclidean(2);
  CHECK(quasilin(e2, {e({0, 0}), e({1, 0})}, {e({0, 0}), e({0, 1})}) == doctest::Approx(0.0));
  CHECK(quasilin(Space::euclidean(1), {e({0}), e({2})}, {e({1}), e({4})}) == doctest::Approx(6.0));

  const Space sp = Space::spider(3);
  const Point u = Point::spider(1, 0.7);
  CHECK(quasilin(sp, {u, u}, {Point::spider(0, 1), Point::spider(2, 3)}) == 0.0);
}

TEST_CASE("quasilinearization symmetries") {
  for (const auto& s : all_spaces()) {
    Rng rng = make_rng(6, 0);
    for (int i = 0; i < 200; ++i) {
      const Point u = random_point(s, rng, 2), v = random_point(s, rng, 2), x = random_point(s, rng, 2),
                  y = random_point(s, rng, 2);
      const double q = quasilin(s, {u, v}, {x, y});
      CHECK(q == doctest::Approx(quasilin(s, {x, y}, {u, v})).epsilon(1e-12));
      CHECK(q == doctest::Approx(-quasilin(s, {v, u}, {x, y})).epsilon(1e-12));
    }
  }
}

TEST_CASE("pair_tangent") {
  const Space e2 = Space::euclidean(2);
  CHECK(pair_tangent(e2, {2.0, e({0, 0}), e({1, 0})}, {e({0, 0}), e({1, 1})}) == doctest::Approx(2.0));
  CHECK(pair_tangent(e2, {0.0, e({0, 0}), e({1, 0})}, {e({0, 0}), e({1, 1})}) == 0.0);
  CHECK(pair_tangent(e2, {3.0, e({1, 1}), e({1, 1})}, {e({1, 1}), e({0, 5})}) == 0.0);
  CHECK_THROWS_AS(pair_tangent(e2, {1.0, e({0, 0}), e({1, 0})}, {e({1, 0}), e({1, 1})}), InvalidInput);
}

TEST_CASE("cn_gap examples") {
  Rng rng = make_rng(7, 0);
  const Space e3 = Space::euclidean(3);
  for (int i = 0; i < 100; ++i) {
    const Point x = random_point(e3, rng, 3), u = random_point(e3, rng, 3), v = random_point(e3, rng, 3);
    CHECK(std::abs(cn_gap(e3, x, u, v, 0.3)) < 1e-9);
    CHECK(cn_gap(e3, x, u, v, 0.0) == 0.0);
    CHECK(cn_gap(e3, x, u, v, 1.0) == 0.0);
  }
  CHECK(cn_gap(Space::spider(3), Point::spider(2, 1), Point::spider(0, 1), Point::spider(1, 1), 0.5) > 0.0);
}

TEST_CASE("cs_gap examples") {
  const Space e2 = Space::euclidean(2);
  const Point x = e({0.5, 1}), u = e({2, -1}), v = e({-1, 3});
  CHECK(cs_gap(e2, x, x, u, v) == doctest::Approx(0.0));

  Rng rng = make_rng(8, 0);
  for (int i = 0; i < 100; ++i) {
    const Point a = random_point(e2, rng, 3), b = random_point(e2, rng, 3), c = random_point(e2, rng, 3),
                d = random_point(e2, rng, 3);
    const double dot = (b.coords() - a.coords()).dot(d.coords() - c.coords());
    CHECK(cs_gap(e2, a, b, c, d) == doctest::Approx(2.0 * (dist(e2, a, b) * dist(e2, c, d) - dot)).epsilon(1e-9));
  }
  const Space s4 = Space::spider(4);
  CHECK(cs_gap(s4, Point::spider(0, 1), Point::spider(1, 2), Point::spider(2, 0.5), Point::spider(3, 3)) >= 0.0);
}

TEST_CASE("inequality battery passes on every space at moderate sample size") {
  for (const auto& s : all_spaces()) {
    const GeometryReport r = geometry_battery(s, 2000, 42);
    INFO(s.describe());
    CHECK(r.ok());
  }
}

TEST_CASE("hyperbolic CN gaps are strictly positive on non-degenerate triples") {
  const GeometryReport r = geometry_battery(Space::hyperboloid(2), 2000, 9);
  CHECK(r.cn_gap_min > 0.0);
}

TEST_CASE("poll neighbors stay in the space and at the step distance") {
  for (const auto& s : all_spaces()) {
    Rng rng = make_rng(10, 0);
    const Point c = random_point(s, rng, 1.5);
    for (const auto& p : poll_neighbors(s, c, 0.25)) {
      CHECK(s.contains(p));
      CHECK(dist(s, c, p) <= 0.25 + 1e-12);
    }
  }
}

TEST_CASE("sample_ball respects the radius") {
  for (const auto& s : all_spaces()) {
    const auto pts = halton_ball(s, base_point(s), 0.8, 200, 3);
    for (const auto& p : pts) CHECK(dist(s, base_point(s), p) <= 0.8 + 1e-12);
  }
}

TEST_CASE("seeded sampling is reproducible") {
  const Space s = Space::product(Space::hyperboloid(2), Space::spider(4));
  Rng a = make_rng(99, 1), b = make_rng(99, 1);
  for (int i = 0; i < 50; ++i) CHECK(random_point(s, a, 2.0) == random_point(s, b, 2.0));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}
