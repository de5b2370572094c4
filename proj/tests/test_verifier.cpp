#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "reldom/gallery.hpp"
#include "reldom/paths.hpp"
#include "reldom/verifier.hpp"

using namespace reldom;
using namespace reldom::dom;

TEST_CASE("derived EC constants on unit inputs") {
  const DominationConstants c{1.0, 1.0, 1.0, 1.0};
  const EcConstants e = derived_EC_constants(c, 1.0, 1.0, 1.0);
  CHECK(e.C2 == doctest::Approx(std::exp(7.0)));
  CHECK(e.C3 == doctest::Approx(4.0 * std::exp(1.0)));
  CHECK(e.C == doctest::Approx(std::exp(7.0)));
  CHECK(e.mu == doctest::Approx(std::log(2.0) / 2.0));
  CHECK_THROWS(derived_EC_constants(c, 1.0, 1.0, 0.0));
}

TEST_CASE("l0 and word-sum constants") {
  const DominationConstants c{0.5, 0.7, 3.0, 2.0};
  const long l0 = ell_zero(c);
  CHECK(std::exp(-std::log(c.C_lower) - c.mu_lower * l0) < 1.0);
  if (l0 > 0) CHECK(std::exp(-std::log(c.C_lower) - c.mu_lower * (l0 - 1)) >= 1.0);
  const auto w = wordsum_constants(c);
  CHECK(w.nu == doctest::Approx(0.7 / 4.0));
  CHECK(w.c1 == doctest::Approx(0.5));
  CHECK(w.c0 == doctest::Approx((std::log(3.0) - std::log(0.5)) / 2.0));
}

TEST_CASE("matrix sequence along a path") {
  const auto f = gallery::punctured_torus_fixture();
  const auto& g = *f.group;
  const geom::RelativePath p = geom::cayley_path(g, {}, g.parse_word("a b b A c"));
  const auto seq = word_to_matrix_sequence(*f.rep, p);
  CHECK(seq.length() == p.size() - 1);
  // A(0, n) = rho(path(n))^{-1}
  for (long n = 1; n <= static_cast<long>(seq.length()); ++n) {
    const Matrix prod = split::partial_product(seq, 0, n);
    const Matrix ref = f.rep->evaluate(p.at(n).element).inverse();
    CHECK((prod - ref).norm() <= 1e-9 * ref.norm());
  }
}

TEST_CASE("Schottky ball and fits") {
  const auto f = gallery::schottky_fixture();
  const Ball b = scan_plain_ball(*f.rep, 4);
  CHECK(b.points.size() == 1 + 4 * (81 - 1) / 2);  // 1 + 4(3^r - 1)/2
  for (std::size_t i = 1; i < b.points.size(); ++i) CHECK(b.points[i - 1].length <= b.points[i].length);
  for (const auto& p : b.points) {
    const auto [s1, s2] = oracle::singular_values_2x2(f.rep->evaluate(p.element));
    CHECK(p.log_s1 == doctest::Approx(std::log(s1)).epsilon(1e-9));
    CHECK(p.log_s2 == doctest::Approx(std::log(s2)).epsilon(1e-9));
    CHECK(static_cast<std::size_t>(p.length) == p.element.size());
  }
  const LowerFit lo = check_lower_domination(b);
  CHECK(lo.ok);
  CHECK(lo.mu > 0);
  CHECK(lo.violations == 0);
  const UpperFit up = check_upper_domination(b, *f.rep);
  CHECK(up.ok);
  // log(s1/sd) grows at most by 2 log max ||rho(s)|| per letter
  CHECK(up.mu <= 2.0 * up.a_priori_mu + 1e-12);
}

TEST_CASE("verifier passes a small Schottky run and reports JSON") {
  const auto f = gallery::schottky_fixture();
  geom::CuspedBuildOptions opt;
  opt.radius = 5;
  const geom::CuspedGraph graph(*f.group, opt);
  VerifierOptions o;
  o.radius = 5;
  o.sample_budget = 200;
  o.pipeline_samples = 5;
  std::mt19937_64 rng(51);
  const auto r = verify_dominated(*f.rep, graph, o, rng);
  CHECK(r.passed());
  const auto j = to_json(r);
  CHECK(j.contains("fits"));
  CHECK(j.contains("pipeline"));
  CHECK(j["passed"].get<bool>());
}

TEST_CASE("a non-dominated representation is caught") {
  auto f = gallery::schottky_fixture();
  std::map<std::string, Matrix> images;
  images["a"] = oracle::rotation(0.5);
  images["b"] = oracle::rotation(1.1);
  const Representation rot(*f.group, images);
  const LowerFit lo = check_lower_domination(scan_plain_ball(rot, 4));
  CHECK_FALSE(lo.ok);
}
