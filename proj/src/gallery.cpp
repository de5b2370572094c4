#include "reldom/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "reldom/matrix_lemmas.hpp"
#include "reldom/cusped.hpp"
#include "reldom/group_file.hpp"
#include "reldom/matrix_io.hpp"
#include "reldom/parallel.hpp"

namespace reldom::gallery {

const char* const kPuncturedTorusGroup =
    "# once-punctured torus: F2 with the commutator as cusp\n"
    "generators  = a A b B c C\n"
    "inverses    = A a B b C c\n"
    "derived     = c : a b A B\n"
    "peripherals = [c C]\n"
    "normal_form = \"free\"\n";

const char* const kPuncturedTorusRep =
    "# hyperbolic holonomy, tr [a,b] = -2\n"
    "d=2 gen=a\n"
    "1 1\n"
    "1 2\n"
    "d=2 gen=b\n"
    "1 -1\n"
    "-1 2\n";

const char* const kSchottkyGroup =
    "generators  = a A b B\n"
    "inverses    = A a B b\n"
    "normal_form = \"free\"\n";

const char* const kSchottkyRep =
    "# diag(4, 1/4) and its conjugate by the rotation through pi/4\n"
    "d=2 gen=a\n"
    "4 0\n"
    "0 0.25\n"
    "d=2 gen=b\n"
    "2.125 1.875\n"
    "1.875 2.125\n";

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::map<std::string, Matrix> images_of(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  return io::read_images(in, name);
}

}  // namespace

ExampleFixture load_fixture(const std::string& name, const std::string& group_text, const std::string& rep_text) {
  ExampleFixture f;
  f.name = name;
  std::istringstream g(group_text);
  f.group = geom::make_group(geom::parse_group_description(g, name + ".group"));
  f.rep = std::make_unique<dom::Representation>(*f.group, images_of(rep_text, name + ".rep"));
  return f;
}

double commutator_trace(const Matrix& a, const Matrix& b) { return (a * b * a.inverse() * b.inverse()).trace(); }

Matrix sym2_lift(const Matrix& g) {
  if (g.rows() != 2 || g.cols() != 2) throw std::invalid_argument("symmetric square lift needs a 2x2 matrix");
  const double p = g(0, 0), q = g(0, 1), r = g(1, 0), s = g(1, 1);
  const double t = std::numbers::sqrt2;
  Matrix m(3, 3);
  m << p * p, t * p * q, q * q,  //
      t * p * r, p * s + q * r, t * q * s,  //
      r * r, t * r * s, s * s;
  return m;
}

ExampleFixture punctured_torus_fixture() {
  ExampleFixture f = load_fixture("punctured_torus", kPuncturedTorusGroup, kPuncturedTorusRep);
  const auto& grp = *f.group;
  const double tr = commutator_trace(f.rep->image(grp.symbol_index("a")), f.rep->image(grp.symbol_index("b")));
  if (std::fabs(tr + 2.0) > 1e-12) throw FixtureError("commutator is not parabolic: trace " + std::to_string(tr));
  f.checks = {"trace", "verifier", "parabolic_gap"};
  return f;
}

ExampleFixture punctured_torus_sym2_fixture() {
  ExampleFixture base = punctured_torus_fixture();
  ExampleFixture f;
  f.name = "punctured_torus_sym2";
  std::istringstream g(kPuncturedTorusGroup);
  f.group = geom::make_group(geom::parse_group_description(g, "punctured_torus.group"));
  std::map<std::string, Matrix> lifted;
  for (const char* s : {"a", "b"}) lifted[s] = sym2_lift(base.rep->image(base.group->symbol_index(s)));
  f.rep = std::make_unique<dom::Representation>(*f.group, lifted);
  f.checks = {"verifier"};
  return f;
}

ExampleFixture schottky_fixture() {
  ExampleFixture f = load_fixture("schottky", kSchottkyGroup, kSchottkyRep);
  f.checks = {"verifier", "degeneration"};
  return f;
}

double upper_half_space_distance(const std::vector<double>& x, double s, const std::vector<double>& y, double t) {
  if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("heights must be positive");
  if (x.size() != y.size()) throw std::invalid_argument("dimension mismatch");
  double e2 = (s - t) * (s - t);
  for (std::size_t i = 0; i < x.size(); ++i) e2 += (x[i] - y[i]) * (x[i] - y[i]);
  // arccosh(1 + e2/(2st)) written with asinh to keep small distances accurate
  return 2.0 * std::asinh(std::sqrt(e2 / (4.0 * s * t)));
}

CannonCooperReport cannon_cooper_qi_check(const MapSamples& samples, double epsilon, double L,
                                          const std::function<double(double)>& r_of_R) {
  if (samples.source.empty() || samples.coverage.empty()) throw std::invalid_argument("empty samples");
  if (samples.source.size() != samples.target.size()) throw std::invalid_argument("pair sample size mismatch");
  CannonCooperReport r;
  r.pairs = samples.source.size();
  for (double c : samples.coverage) r.worst_coverage = std::max(r.worst_coverage, c);
  r.quasi_onto = linalg::upper_check("quasi-onto", r.worst_coverage, epsilon).holds();
  r.lipschitz = true;
  for (std::size_t i = 0; i < samples.source.size(); ++i) {
    const double dx = samples.source[i], dy = samples.target[i];
    if (dx > 0.0) r.worst_lipschitz = std::max(r.worst_lipschitz, dy / dx);
    if (!linalg::upper_check("lipschitz", dy, L * dx).holds()) r.lipschitz = false;
    if (!linalg::lower_check("non-collapsing", dy, r_of_R(dx)).holds()) ++r.collapsing_pairs;
  }
  r.non_collapsing = r.collapsing_pairs == 0;
  return r;
}

namespace {

struct HoroPoint {
  std::vector<long> base;
  int level = 0;
};

int horoball_depth(int d, int radius) {
  int k = 0;
  while ((1L << k) < 2L * d * radius) ++k;
  return k + 1;
}

long l1(const std::vector<long>& a, const std::vector<long>& b) {
  long n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += std::labs(a[i] - b[i]);
  return n;
}

std::vector<double> as_real(const std::vector<long>& v, std::size_t keep) {
  std::vector<double> out;
  for (std::size_t i = 0; i < keep; ++i) out.push_back(static_cast<double>(v[i]));
  return out;
}

// Horoball pair samples: random pairs plus axis and vertical families.
std::vector<std::pair<HoroPoint, HoroPoint>> horoball_pairs(int d, int radius, int depth, std::size_t budget,
                                                            std::mt19937_64& rng, int axis) {
  std::vector<std::pair<HoroPoint, HoroPoint>> pairs;
  const std::vector<long> origin(d, 0);
  for (long n = 1; n <= 2L * radius; ++n) {
    HoroPoint a{origin, 0}, b{origin, 0};
    a.base[axis] = -radius;
    b.base[axis] = -radius + n;
    pairs.push_back({a, b});
  }
  for (int n = 1; n <= depth; ++n) pairs.push_back({HoroPoint{origin, 0}, HoroPoint{origin, n}});
  std::uniform_int_distribution<long> coord(-radius, radius);
  std::uniform_int_distribution<int> lev(0, depth);
  for (std::size_t i = 0; i < budget; ++i) {
    HoroPoint a{std::vector<long>(d), 0}, b{std::vector<long>(d), 0};
    for (int k = 0; k < d; ++k) a.base[k] = coord(rng);
    a.level = lev(rng);
    for (int k = 0; k < d; ++k) b.base[k] = coord(rng);
    b.level = lev(rng);
    pairs.push_back({a, b});
  }
  return pairs;
}

// Distance from random points of the target region to the image lattice
// (integer base points at heights 2^n), `dims` base coordinates.
std::vector<double> coverage_samples(std::size_t dims, int radius, int depth, std::size_t budget,
                                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-radius, radius);
  std::uniform_real_distribution<double> lev(0.0, depth);
  std::vector<double> out;
  for (std::size_t i = 0; i < budget; ++i) {
    std::vector<double> y(dims);
    for (auto& c : y) c = coord(rng);
    const double u = lev(rng);
    const double h = std::exp2(u);
    std::vector<double> near(dims);
    for (std::size_t k = 0; k < dims; ++k) near[k] = std::round(y[k]);
    double best = kInf;
    for (int n : {static_cast<int>(std::floor(u)), static_cast<int>(std::ceil(u))})
      best = std::min(best, upper_half_space_distance(y, h, near, std::exp2(n)));
    out.push_back(best);
  }
  return out;
}

}  // namespace

HoroballQiReport zd_horoball_qi(int d, std::size_t sample_budget, int radius, std::mt19937_64& rng) {
  if (sample_budget == 0) throw std::invalid_argument("sample budget must be positive");
  if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  if (radius < 1) throw std::invalid_argument("radius must be at least 1");
  HoroballQiReport r;
  r.d = d;
  r.radius = radius;
  r.depth = horoball_depth(d, radius);
  const auto pairs = horoball_pairs(d, radius, r.depth, sample_budget, rng, 0);
  r.pairs = pairs.size();
  for (const auto& [a, b] : pairs) {
    const double dg = static_cast<double>(geom::horoball_distance(l1(a.base, b.base), a.level, b.level, r.depth));
    const double dh = upper_half_space_distance(as_real(a.base, d), std::exp2(a.level), as_real(b.base, d),
                                                std::exp2(b.level));
    r.samples.source.push_back(dg);
    r.samples.target.push_back(dh);
    if (dg > 0.0) r.lambda = std::max({r.lambda, (dh - r.epsilon) / dg, dg / (dh + r.epsilon)});
  }
  r.samples.coverage = coverage_samples(d, radius, r.depth, sample_budget, rng);
  return r;
}

MapSamples collapsing_projection_samples(std::size_t sample_budget, int radius, std::mt19937_64& rng) {
  if (sample_budget == 0) throw std::invalid_argument("sample budget must be positive");
  MapSamples s;
  const int depth = horoball_depth(2, radius);
  // the collapsed direction is the second coordinate
  for (const auto& [a, b] : horoball_pairs(2, radius, depth, sample_budget, rng, 1)) {
    s.source.push_back(static_cast<double>(geom::horoball_distance(l1(a.base, b.base), a.level, b.level, depth)));
    s.target.push_back(
        upper_half_space_distance(as_real(a.base, 1), std::exp2(a.level), as_real(b.base, 1), std::exp2(b.level)));
  }
  s.coverage = coverage_samples(1, radius, depth, sample_budget, rng);
  return s;
}

double ParabolicGapReport::sup_abs(long n_max) const {
  double s = 0.0;
  const long n = std::min<long>(n_max, static_cast<long>(deviation.size()));
  for (long i = 0; i < n; ++i) s = std::max(s, std::fabs(deviation[i]));
  return s;
}

ParabolicGapReport parabolic_quadratic_gap(const Matrix& eta, long n_max) {
  if (eta.rows() != eta.cols() || eta.rows() < 2) throw std::invalid_argument("square matrix of size >= 2 required");
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  const int d = static_cast<int>(eta.rows());
  const double scale = std::max(1.0, eta.norm());
  const Matrix I = Matrix::Identity(d, d);
  if ((eta - I).norm() <= 1e-9 * scale || (eta + I).norm() <= 1e-9 * scale)
    throw std::domain_error("matrix is central, not parabolic");
  if (d == 2) {
    if (std::fabs(std::fabs(eta.trace()) - 2.0) > 1e-9 * scale || std::fabs(eta.determinant() - 1.0) > 1e-9 * scale)
      throw std::domain_error("matrix is not parabolic: |trace| != 2");
  } else {
    const Eigen::VectorXcd ev = eta.eigenvalues();
    for (int i = 0; i < d; ++i)
      if (std::fabs(std::abs(ev(i)) - 1.0) > 1e-6) throw std::domain_error("matrix is not unipotent up to sign");
  }
  ParabolicGapReport r;
  r.deviation.reserve(n_max);
  const Matrix inv = eta.inverse();
  const Matrix w2 = linalg::exterior_power(eta, 2);
  linalg::TrackedProduct acc = linalg::TrackedProduct::identity(d);
  for (long n = 1; n <= n_max; ++n) {
    acc = acc.times(eta, inv, w2);
    r.deviation.push_back(linalg::top_spectrum(acc).log_gap() - 2.0 * std::log(static_cast<double>(n)));
  }
  return r;
}

DegenerationReport empty_peripheral_degeneration(const ExampleFixture& fixture, int radius, std::mt19937_64& rng) {
  const geom::GroupSpec& group = *fixture.group;
  if (group.peripheral_count() != 0) throw std::invalid_argument("fixture has peripheral subgroups");
  DegenerationReport r;
  geom::CuspedBuildOptions opt;
  opt.radius = radius;
  const geom::CuspedGraph graph(group, opt);
  const dom::Ball cusped = dom::scan_ball(*fixture.rep, graph, radius);
  const dom::Ball plain = dom::scan_plain_ball(*fixture.rep, radius);
  r.ball_size = cusped.points.size();
  if (cusped.points.size() != plain.points.size()) r.metric_mismatches += 1;
  for (const auto& p : cusped.points) {
    const auto l = plain.length(p.element);
    if (!l || *l != p.length) ++r.metric_mismatches;
  }
  std::uniform_int_distribution<int> len(0, radius);
  std::uniform_int_distribution<int> letter(0, group.generator_count() - 1);
  for (int i = 0; i < 100; ++i) {
    geom::Word w(len(rng));
    for (auto& x : w) x = letter(rng);
    const geom::Word nf = group.normal_form(w);
    const auto c = graph.cusped_length(nf);
    ++r.random_words;
    if (!c || c->value != static_cast<long>(nf.size())) ++r.random_mismatches;
  }
  r.cusped = dom::check_lower_domination(cusped);
  r.plain = dom::check_lower_domination(plain);
  r.fits_identical = r.cusped.C == r.plain.C && r.cusped.mu == r.plain.mu && r.cusped.minima == r.plain.minima &&
                     r.cusped.violations == r.plain.violations;
  return r;
}

std::vector<std::string> example_names() {
  return {"punctured_torus", "punctured_torus_sym2", "schottky", "zd_horoball", "parabolic"};
}

namespace {

using report::Json;

Json check_entry(const std::string& name, const std::string& ref, bool passed) {
  Json j;
  j["name"] = name;
  j["ref"] = ref;
  j["passed"] = passed;
  return j;
}

Json verifier_check(const ExampleFixture& f, const ExampleOptions& o, std::mt19937_64& rng, bool& inconclusive) {
  geom::CuspedBuildOptions bo;
  bo.radius = o.radius;
  const geom::CuspedGraph graph(*f.group, bo);
  dom::VerifierOptions vo;
  vo.radius = o.radius;
  vo.sample_budget = o.sample_budget;
  const dom::VerifierReport vr = dom::verify_dominated(*f.rep, graph, vo, rng);
  if (vr.inconclusive()) inconclusive = true;
  Json j = check_entry("verifier", "relative domination checks on the cusped ball", vr.passed());
  j["report"] = dom::to_json(vr);
  return j;
}

Json parabolic_check(const std::string& name, const Matrix& eta) {
  const ParabolicGapReport p = parabolic_quadratic_gap(eta, 1000);
  const double s2 = p.sup_abs(100), s3 = p.sup_abs(1000);
  Json j = check_entry(name, "parabolic powers: |log(s1/s2)(eta^n) - 2 log n| bounded", s3 <= s2 + 0.1);
  j["sup_n_le_100"] = s2;
  j["sup_n_le_1000"] = s3;
  j["deviation_at_1000"] = p.deviation.back();
  return j;
}

Json qi_json(const HoroballQiReport& q) {
  return {{"d", q.d}, {"radius", q.radius}, {"depth", q.depth}, {"pairs", q.pairs},
          {"epsilon", q.epsilon}, {"lambda", q.lambda}};
}

Json cc_json(const CannonCooperReport& c) {
  return {{"quasi_onto", c.quasi_onto},         {"lipschitz", c.lipschitz},
          {"non_collapsing", c.non_collapsing}, {"worst_coverage", c.worst_coverage},
          {"worst_lipschitz", c.worst_lipschitz}, {"collapsing_pairs", c.collapsing_pairs}};
}

}  // namespace

report::Json run_example(const std::string& name, const ExampleOptions& o) {
  std::mt19937_64 rng(o.seed);
  Json checks = Json::array();
  bool inconclusive = false;
  if (name == "punctured_torus") {
    const ExampleFixture f = punctured_torus_fixture();
    const auto& g = *f.group;
    const Matrix& a = f.rep->image(g.symbol_index("a"));
    const Matrix& b = f.rep->image(g.symbol_index("b"));
    Json t = check_entry("trace", "parabolic commutator", std::fabs(commutator_trace(a, b) + 2.0) <= 1e-12);
    t["trace"] = commutator_trace(a, b);
    checks.push_back(t);
    checks.push_back(verifier_check(f, o, rng, inconclusive));
    checks.push_back(parabolic_check("parabolic_gap", f.rep->image(g.symbol_index("c"))));
  } else if (name == "punctured_torus_sym2") {
    const ExampleFixture f = punctured_torus_sym2_fixture();
    checks.push_back(verifier_check(f, o, rng, inconclusive));
  } else if (name == "schottky") {
    const ExampleFixture f = schottky_fixture();
    checks.push_back(verifier_check(f, o, rng, inconclusive));
    const DegenerationReport d = empty_peripheral_degeneration(f, o.radius, rng);
    Json j = check_entry("degeneration", "empty peripheral structure: cusped metric equals word metric",
                         d.metric_mismatches == 0 && d.random_mismatches == 0 && d.fits_identical);
    j["ball_size"] = d.ball_size;
    j["metric_mismatches"] = d.metric_mismatches;
    j["random_mismatches"] = d.random_mismatches;
    j["fits_identical"] = d.fits_identical;
    checks.push_back(j);
  } else if (name == "zd_horoball") {
    for (int d : {1, 2}) {
      const HoroballQiReport a = zd_horoball_qi(d, o.sample_budget, 16, rng);
      const HoroballQiReport b = zd_horoball_qi(d, o.sample_budget, 32, rng);
      const double drift = std::fabs(b.lambda - a.lambda) / a.lambda;
      Json j = check_entry("qi_drift_d" + std::to_string(d), "horoball over Z^d quasi-isometric to a horoball",
                           drift <= 0.1);
      j["small"] = qi_json(a);
      j["large"] = qi_json(b);
      j["drift"] = drift;
      checks.push_back(j);
      const double lam = b.lambda, eps = b.epsilon;
      const CannonCooperReport c =
          cannon_cooper_qi_check(b.samples, eps, lam + eps, [&](double R) { return R / lam - eps; });
      Json k = check_entry("cannon_cooper_d" + std::to_string(d), "quasi-onto, Lipschitz, non-collapsing", c.passed());
      k["report"] = cc_json(c);
      checks.push_back(k);
    }
    const HoroballQiReport ref = zd_horoball_qi(2, o.sample_budget, 16, rng);
    const MapSamples s = collapsing_projection_samples(o.sample_budget, 16, rng);
    const CannonCooperReport c = cannon_cooper_qi_check(s, ref.epsilon, ref.lambda + ref.epsilon,
                                                        [&](double R) { return R / ref.lambda - ref.epsilon; });
    Json k = check_entry("collapsing_counterexample", "projection of the Z^2 horoball must collapse",
                         !c.non_collapsing);
    k["report"] = cc_json(c);
    checks.push_back(k);
  } else if (name == "parabolic") {
    Matrix u(2, 2);
    u << 1, 1, 0, 1;
    checks.push_back(parabolic_check("unipotent", u));
    const Matrix h = (Matrix(2, 2) << 2, 1, 1, 1).finished();
    checks.push_back(parabolic_check("conjugated", h * u * h.inverse()));
  } else {
    throw std::invalid_argument("unknown example: " + name);
  }
  bool passed = true;
  for (const auto& c : checks) passed = passed && c["passed"].get<bool>();
  Json j;
  j["example"] = name;
  j["radius"] = o.radius;
  j["seed"] = o.seed;
  j["checks"] = checks;
  j["status"] = !passed ? "violation" : (inconclusive ? "inconclusive" : "pass");
  return j;
}

}  // namespace reldom::gallery
