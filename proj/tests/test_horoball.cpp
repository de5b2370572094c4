#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "reldom/gallery.hpp"
#include "reldom/horoball.hpp"

using namespace reldom::geom;

TEST_CASE("closed form distance matches BFS over a path") {
  const int width = 40, depth = 5;
  const Horoball h(path_graph(width), depth);
  for (int i = 0; i <= depth; ++i) {
    const auto d = h.bfs(h.index({0, i}));
    for (int x = 0; x < width; ++x)
      for (int j = 0; j <= depth; ++j) CHECK(horoball_distance(x, i, j, depth) == d[h.index({x, j})]);
  }
}

TEST_CASE("closed form distance matches BFS over Z^2 with the L1 base distance") {
  const int w = 13, depth = 4;
  const Horoball h(grid_graph(w, w), depth);
  const int centre = 6 * w + 6;
  for (int i = 0; i <= depth; ++i) {
    const auto d = h.bfs(h.index({centre, i}));
    for (int v = 0; v < w * w; ++v) {
      const long n = std::abs(v % w - 6) + std::abs(v / w - 6);
      for (int j = 0; j <= depth; ++j) CHECK(horoball_distance(n, i, j, depth) == d[h.index({v, j})]);
    }
  }
}

TEST_CASE("path horoball agrees with the test oracle graph") {
  const Horoball h(path_graph(20), 4);
  const auto ref = oracle::path_horoball(20, 4);
  for (int k = 0; k <= 4; ++k) {
    const auto a = h.bfs(h.index({3, k}));
    const auto b = ref.bfs(ref.id(3, k));
    for (int x = 0; x < 20; ++x)
      for (int j = 0; j <= 4; ++j) CHECK(a[h.index({x, j})] == b[ref.id(x, j)]);
  }
}

TEST_CASE("graph distance against the upper half-plane") {
  // (0,0) to (8,0): graph distance 6, hyperbolic distance 2 asinh 4
  CHECK(horoball_distance(8, 0, 0) == 6);
  const double hyp = reldom::gallery::upper_half_space_distance({0.0}, 1.0, {8.0}, 1.0);
  CHECK(hyp == doctest::Approx(2.0 * std::asinh(4.0)).epsilon(1e-14));
  CHECK(hyp == doctest::Approx(oracle::hyperbolic_distance({0.0}, 1.0, {8.0}, 1.0)).epsilon(1e-12));
}

TEST_CASE("preferred shapes") {
  for (long n = 0; n <= 300; ++n)
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j) {
        const HoroballShape s = preferred_shape(n, i, j);
        CHECK(s.length == horoball_distance(n, i, j));
        CHECK(s.horizontal <= 3);
        CHECK(s.level >= std::max(i, j));
      }
  const HoroballShape capped = preferred_shape(100, 0, 0, 2);
  CHECK(capped.level == 2);
  CHECK(capped.length == 2 + 2 + 25);
}

TEST_CASE("preferred geodesic vertices are adjacent") {
  const Horoball h(path_graph(64), 6);
  const auto p = h.preferred_geodesic({0, 0}, {63, 0});
  REQUIRE(p.size() >= 2);
  for (std::size_t s = 0; s + 1 < p.size(); ++s) CHECK(h.adjacent(h.index(p[s]), h.index(p[s + 1])));
  CHECK(static_cast<long>(p.size()) - 1 == horoball_distance(63, 0, 0, 6));
}
