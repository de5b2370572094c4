#include <doctest.h>

#include <random>
#include <sstream>

#include "reldom/cusped.hpp"
#include "reldom/group_file.hpp"

using namespace reldom::geom;

namespace {

std::unique_ptr<FreeProductGroup> f2_with_cusp() {
  std::istringstream in("generators = a A b B\ninverses = A a B b\nperipherals = [a A]\n");
  return make_group(parse_group_description(in));
}

// Cost of a^L inside one horoball, written directly as a minimum over levels.
long cusp_cost(long L, int cap) {
  long best = L;
  for (int k = 1; k <= cap; ++k) best = std::min(best, 2L * k + (L + (1L << k) - 1) / (1L << k));
  return best;
}

// The cusped length of a reduced word in F2 with P = <a> is additive over
// syllables: each a-syllable costs its horoball distance, each b letter 1.
long syllable_length(const Word& w, int a, int A, int cap) {
  long total = 0, run = 0;
  for (std::size_t i = 0; i <= w.size(); ++i) {
    if (i < w.size() && (w[i] == a || w[i] == A)) {
      ++run;
      continue;
    }
    if (run > 0) total += cusp_cost(run, cap);
    run = 0;
    if (i < w.size()) ++total;
  }
  return total;
}

}  // namespace

TEST_CASE("automatic depth") {
  CHECK(auto_depth(1) == 1);
  CHECK(auto_depth(8) == 4);
  CHECK(auto_depth(20) == 9);
}

TEST_CASE("cusped lengths are additive over syllables") {
  const auto g = f2_with_cusp();
  CuspedBuildOptions opt;
  opt.radius = 7;
  const CuspedGraph graph(*g, opt);
  const int a = g->symbol_index("a"), A = g->symbol_index("A");
  std::size_t checked = 0;
  for (VertexId v : graph.level_zero_vertices()) {
    const auto len = graph.cusped_length(graph.element(v));
    REQUIRE(len);
    if (!len->certified) continue;
    ++checked;
    CHECK(len->value == syllable_length(graph.element(v), a, A, graph.depth_limit()));
  }
  CHECK(checked > 1000);
}

TEST_CASE("peripheral powers within the radius") {
  const auto g = f2_with_cusp();
  CuspedBuildOptions opt;
  opt.radius = 9;
  const CuspedGraph graph(*g, opt);
  for (long L = 1; L <= 40; ++L) {
    const auto len = graph.cusped_length(g->peripheral_element(0, {L}));
    if (!len || !len->certified) continue;
    CHECK(len->value == cusp_cost(L, graph.depth_limit()));
    const auto [lo, hi] = peripheral_cusped_length_bounds(L);
    CHECK(len->value <= hi);
    (void)lo;
  }
}

TEST_CASE("coset extension reaches long peripheral powers") {
  const auto g = f2_with_cusp();
  CuspedBuildOptions opt;
  opt.radius = 3;
  opt.coset_extent = 100;
  const CuspedGraph graph(*g, opt);
  const auto v = graph.find(g->peripheral_element(0, {100}));
  REQUIRE(v);
  CHECK(graph.depth_from_identity(*v) == cusp_cost(100, 10));
  CHECK_FALSE(graph.cusped_length(g->peripheral_element(0, {100}))->certified);
}

TEST_CASE("distances are symmetric and vertices well formed") {
  const auto g = f2_with_cusp();
  CuspedBuildOptions opt;
  opt.radius = 5;
  const CuspedGraph graph(*g, opt);
  CHECK(graph.vertex_count() > graph.level_zero_count());
  CHECK(graph.horoball_count() > 0);
  const auto u = graph.find(g->parse_word("b a a"));
  const auto w = graph.find(g->parse_word("B"));
  REQUIRE(u);
  REQUIRE(w);
  CHECK(graph.distance(*u, *w).value == graph.distance(*w, *u).value);
  CHECK(graph.distance(*u, *w).value == 1 + 1 + 2);
  const auto x = graph.vertex(*u);
  CHECK_FALSE(x.in_horoball());
  for (VertexId n : graph.neighbors(*u))
    if (graph.level(n) > 0) CHECK(graph.vertex(n).coset == g->coset_id(x.element, graph.peripheral(n)));
  CHECK_FALSE(graph.find(g->parse_word("b b b b b b b b")));
}

TEST_CASE("peripheral bound helper") {
  const auto [lo, hi] = peripheral_cusped_length_bounds(8);
  CHECK(lo == doctest::Approx(6.0));
  CHECK(hi == doctest::Approx(7.0));
  CHECK_THROWS(peripheral_cusped_length_bounds(0));
}
