#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "reldom/matrix_lemmas.hpp"
#include "reldom/cusped.hpp"
#include "reldom/gallery.hpp"
#include "reldom/group_file.hpp"
#include "reldom/matrix_io.hpp"
#include "reldom/paths.hpp"
#include "reldom/report.hpp"
#include "reldom/splitting.hpp"
#include "reldom/verifier.hpp"

namespace {

using reldom::report::Json;

constexpr const char* kVersion = "0.1.0";

enum Exit : int { kPass = 0, kViolation = 1, kInconclusive = 2, kInputError = 3 };

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string group_file;
  std::string rep_file;
  std::string seq_file;
  std::string example;
  std::string word;
  std::string from;
  std::string json = "-";
  int radius = 8;
  int depth = -1;
  long k = 0;
  double target_error = -1.0;
  double tolerance = reldom::linalg::kGapTolerance;
  std::size_t budget = 2000;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  bool timing = false;
};

Json config_json(const Config& c, const std::string& command) {
  Json j;
  j["command"] = command;
  if (!c.group_file.empty()) j["group"] = c.group_file;
  if (!c.rep_file.empty()) j["rep"] = c.rep_file;
  if (!c.seq_file.empty()) j["sequence"] = c.seq_file;
  if (!c.example.empty()) j["example"] = c.example;
  if (!c.word.empty()) j["word"] = c.word;
  j["radius"] = c.radius;
  j["depth"] = c.depth;
  j["tolerance"] = c.tolerance;
  j["sample_budget"] = c.budget;
  j["seed"] = c.seed;
  j["rng"] = "mt19937_64, one stream per run";
  return j;
}

std::unique_ptr<reldom::geom::FreeProductGroup> load_group(const Config& c) {
  if (c.group_file.empty()) throw InputError("--group is required");
  return reldom::geom::make_group(reldom::geom::read_group_file(c.group_file));
}

reldom::geom::CuspedBuildOptions build_options(const Config& c) {
  reldom::geom::CuspedBuildOptions o;
  o.radius = c.radius;
  const int automatic = reldom::geom::auto_depth(c.radius);
  if (c.depth >= 0) {
    if (c.depth != automatic)
      std::cerr << "warning: explicit --depth " << c.depth << " overrides automatic depth " << automatic << "\n";
    o.depth_limit = c.depth;
  } else {
    o.depth_limit = automatic;
  }
  return o;
}

Json path_json(const reldom::geom::GroupSpec& g, const reldom::geom::RelativePath& p) {
  Json v = Json::array();
  for (const auto& x : p.vertices) {
    Json e;
    e["element"] = g.format_word(x.element);
    e["level"] = x.level;
    e["peripheral"] = x.peripheral;
    v.push_back(e);
  }
  Json ex = Json::array();
  for (const auto& e : p.excursions)
    ex.push_back({{"begin", e.begin}, {"end", e.end}, {"peripheral", e.peripheral}});
  return {{"origin", p.origin}, {"vertices", v}, {"excursions", ex}};
}

int cmd_cusped_build(const Config& c, Json& out) {
  const auto group = load_group(c);
  const reldom::geom::CuspedGraph graph(*group, build_options(c));
  out["radius"] = graph.radius();
  out["depth"] = graph.depth_limit();
  out["vertices"] = graph.vertex_count();
  out["edges"] = graph.edge_count();
  out["level_zero"] = graph.level_zero_count();
  out["horoballs"] = graph.horoball_count();
  Json sphere = Json::array();
  std::vector<std::size_t> counts(graph.radius() + 1, 0);
  for (auto v : graph.level_zero_vertices()) {
    const long d = graph.depth_from_identity(v);
    if (d >= 0 && d <= graph.radius()) ++counts[d];
  }
  for (auto n : counts) sphere.push_back(n);
  out["level_zero_spheres"] = sphere;
  return kPass;
}

int cmd_cusped_dist(const Config& c, Json& out) {
  const auto group = load_group(c);
  const reldom::geom::CuspedGraph graph(*group, build_options(c));
  if (c.word.empty()) throw InputError("--word is required");
  const auto to = group->parse_word(c.word);
  const auto from = group->parse_word(c.from);
  const auto g = group->multiply(group->inverse(from), to);
  out["element"] = group->format_word(group->normal_form(g));
  out["word_length"] = group->length(g);
  const auto d = graph.cusped_length(g);
  if (!d) {
    out["cusped_length"] = nullptr;
    out["note"] = "element outside the truncation";
    return kInconclusive;
  }
  out["cusped_length"] = d->value;
  out["certified"] = d->certified;
  return d->certified ? kPass : kInconclusive;
}

int cmd_cusped_geodesic(const Config& c, Json& out) {
  const auto group = load_group(c);
  const reldom::geom::CuspedGraph graph(*group, build_options(c));
  if (c.word.empty()) throw InputError("--word is required");
  const auto target = group->normal_form(group->parse_word(c.word));
  const auto v = graph.find(target);
  if (!v || graph.depth_from_identity(*v) > graph.radius()) {
    out["note"] = "target outside the truncation";
    return kInconclusive;
  }
  std::mt19937_64 rng(c.seed);
  const auto s = reldom::geom::sample_geodesic_to(graph, *v, rng);
  out["cusped_length"] = graph.depth_from_identity(*v);
  out["cusped"] = path_json(*group, s.cusped);
  out["projected"] = path_json(*group, s.projected);
  Json depth = Json::array();
  for (int x : reldom::geom::depth_profile(*group, s.projected)) depth.push_back(x);
  out["depth_profile"] = depth;
  bool peripheral = false;
  for (int p = 0; p < group->peripheral_count() && !peripheral; ++p)
    peripheral = group->coset_id(target, p).empty();
  if (peripheral) {
    out["note"] = "target lies in a peripheral subgroup; no reparametrization";
    return kPass;
  }
  const auto rep = reldom::geom::reparametrize(*group, s.projected);
  out["reparametrized"] = path_json(*group, rep);
  const auto q =
      reldom::geom::verify_metric_quasigeodesic(rep, reldom::geom::QuasigeodesicBounds::sharpened(), graph);
  out["quasigeodesic"] = {{"ref", "metric quasigeodesic, sharpened (6,20) bounds"},
                          {"pairs", q.pairs_checked},
                          {"steps", q.steps_checked},
                          {"violations", q.violations.size()},
                          {"inconclusive", q.inconclusive}};
  if (!q.violations.empty()) return kViolation;
  return q.inconclusive ? kInconclusive : kPass;
}

int cmd_check_dominated(const Config& c, Json& out) {
  const auto group = load_group(c);
  if (c.rep_file.empty()) throw InputError("--rep is required");
  const reldom::dom::Representation rep(*group, reldom::io::read_images_file(c.rep_file));
  const reldom::geom::CuspedGraph graph(*group, build_options(c));
  reldom::dom::VerifierOptions o;
  o.radius = c.radius;
  o.sample_budget = c.budget;
  std::mt19937_64 rng(c.seed);
  const auto r = reldom::dom::verify_dominated(rep, graph, o, rng);
  out = reldom::dom::to_json(r);
  if (!r.passed()) return kViolation;
  return r.inconclusive() ? kInconclusive : kPass;
}

Json subspace_json(const reldom::linalg::Subspace& s) { return reldom::report::to_json(s.basis()); }

int cmd_split_analyze(const Config& c, Json& out) {
  if (c.seq_file.empty()) throw InputError("sequence file is required");
  const auto seq = reldom::io::read_sequence_file(c.seq_file);
  out["window"] = {{"k_min", seq.k_min()}, {"k_max", seq.k_max()}, {"dim", seq.dim()}};
  if (!seq.covers(c.k - 1, 1) || !seq.covers(c.k, 1)) throw InputError("k must have a neighbour on each side");
  const reldom::split::ProductTable table(seq);
  reldom::split::AxiomConstants k;
  try {
    k = reldom::split::fit_constants(table);
  } catch (const reldom::split::NotDominated& e) {
    out["note"] = e.what();
    return kViolation;
  }
  const auto axioms = reldom::split::check_axioms(table, k);
  const auto N = reldom::split::choose_N(k);
  out["constants"] = {{"C", k.C}, {"mu", k.mu}, {"mu_prime", k.mu_prime}, {"side_condition", k.side_condition()}};
  out["s_min"] = reldom::split::s_min(k);
  out["block_length"] = {{"N", N.N}, {"ceiling", N.ceiling}, {"within_ceiling", N.within_ceiling}};
  Json viol = Json::array();
  for (std::size_t i = 0; i < axioms.violations.size() && i < 20; ++i) {
    const auto& v = axioms.violations[i];
    viol.push_back({{"axiom", v.axiom}, {"k", v.k}, {"n", v.n}, {"m", v.m}, {"margin", v.margin}});
  }
  out["axioms"] = {{"svg_checked", axioms.svg_checked},
                   {"ec_checked", axioms.ec_checked},
                   {"fi_checked", axioms.fi_checked},
                   {"violation_count", axioms.violations.size()},
                   {"violations", viol}};
  reldom::split::SplittingCertificate cert;
  if (c.target_error > 0.0) {
    try {
      cert = reldom::split::compute_splitting(seq, c.k, c.target_error, k);
    } catch (const std::runtime_error& e) {
      out["note"] = e.what();
      return kInconclusive;
    }
  } else {
    const long n = std::min(c.k - seq.k_min(), seq.k_max() - c.k + 1);
    cert = reldom::split::splitting_at_depth(seq, c.k, n, k);
  }
  const bool gap_ok =
      reldom::linalg::lower_check("gap", cert.gap, cert.s_min_bound - 2.0 * cert.error_radius).holds();
  out["certificate"] = {{"ref", "dominated splitting from singular subspaces"},
                        {"k", cert.k},
                        {"depth", cert.n_used},
                        {"Eu", subspace_json(cert.Eu)},
                        {"Es", subspace_json(cert.Es)},
                        {"gap", cert.gap},
                        {"error_radius", cert.error_radius},
                        {"s_min", cert.s_min_bound},
                        {"gap_bound_holds", gap_ok},
                        {"equivariance_u", cert.equivariance_u},
                        {"equivariance_s", cert.equivariance_s}};
  return axioms.holds() && gap_ok ? kPass : kViolation;
}

int cmd_examples_run(const Config& c, Json& out) {
  reldom::gallery::ExampleOptions o;
  o.radius = c.radius;
  o.seed = c.seed;
  o.sample_budget = c.budget;
  try {
    out = reldom::gallery::run_example(c.example, o);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const std::string status = out["status"].get<std::string>();
  return status == "pass" ? kPass : status == "inconclusive" ? kInconclusive : kViolation;
}

int cmd_linalg_selftest(const Config& c, Json& out) {
  std::mt19937_64 rng(c.seed);
  std::size_t wedge_fail = 0, a45_fail = 0, a7_fail = 0, runs = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < c.samples; ++i) {
    for (int d : {3, 4}) {
      const auto g = reldom::linalg::random_gaussian(d, d, rng);
      const auto s = reldom::linalg::singular_values(g);
      const auto w = reldom::linalg::singular_values(reldom::linalg::exterior_power(g, 2));
      const double e1 = std::fabs(w(0) - s(0) * s(1)) / (s(0) * s(1));
      const double e2 = std::fabs(w(1) - s(0) * s(2)) / (s(0) * s(2));
      worst = std::max({worst, e1, e2});
      if (e1 > 1e-9 || e2 > 1e-9) ++wedge_fail;
    }
    const int d = 2 + static_cast<int>(i % 5);
    const auto a = reldom::linalg::random_gaussian(d, d, rng);
    const auto b = reldom::linalg::random_gaussian(d, d, rng);
    if (!reldom::linalg::check_A4A5(a, b, 1).holds()) ++a45_fail;
    if (!reldom::linalg::check_A7(a, b, 1).holds()) ++a7_fail;
    ++runs;
  }
  out["samples"] = runs;
  out["exterior_power"] = {{"ref", "singular values of the second exterior power"},
                           {"violations", wedge_fail},
                           {"worst_relative_error", worst}};
  out["A4A5"] = {{"ref", "perturbation of U_p under products"}, {"violations", a45_fail}};
  out["A7"] = {{"ref", "singular value gaps of products"}, {"violations", a7_fail}};
  return wedge_fail + a45_fail + a7_fail == 0 ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reldom: relative domination and dominated splitting checks"};
  app.set_version_flag("--version", kVersion);
  if (argc <= 1) {
    std::cout << app.help();
    std::cout << "\nSubcommands: cusped {build,dist,geodesic}, check dominated, split analyze, examples run, "
                 "linalg selftest\n";
    return kInputError;
  }
  Config cfg;
  auto common = [&](CLI::App* s) {
    s->add_option("--json", cfg.json, "output path, - for stdout");
    s->add_option("--seed", cfg.seed, "random seed");
    s->add_flag("--timing", cfg.timing, "include wall-clock timing in the report");
  };
  auto geometry = [&](CLI::App* s) {
    s->add_option("--group", cfg.group_file, "group description file");
    s->add_option("--radius", cfg.radius, "cusped ball radius")->check(CLI::PositiveNumber);
    s->add_option("--depth", cfg.depth, "horoball depth (default: automatic)")->check(CLI::NonNegativeNumber);
  };
  app.require_subcommand(1);

  auto* cusped = app.add_subcommand("cusped", "cusped space tools");
  cusped->require_subcommand(1);
  auto* c_build = cusped->add_subcommand("build", "build a truncated cusped space");
  auto* c_dist = cusped->add_subcommand("dist", "cusped distance");
  auto* c_geo = cusped->add_subcommand("geodesic", "sample a geodesic and reparametrize it");
  for (auto* s : {c_build, c_dist, c_geo}) {
    common(s);
    geometry(s);
  }
  for (auto* s : {c_dist, c_geo}) s->add_option("--word", cfg.word, "target word")->required();
  c_dist->add_option("--from", cfg.from, "source word (default identity)");

  auto* check = app.add_subcommand("check", "representation checks");
  check->require_subcommand(1);
  auto* dominated = check->add_subcommand("dominated", "relative domination on a cusped ball");
  common(dominated);
  geometry(dominated);
  dominated->add_option("--rep", cfg.rep_file, "generator images")->required();
  dominated->add_option("--budget", cfg.budget, "sample budget per check");

  auto* split = app.add_subcommand("split", "matrix sequence tools");
  split->require_subcommand(1);
  auto* analyze = split->add_subcommand("analyze", "fit constants and certify a splitting");
  common(analyze);
  analyze->add_option("sequence", cfg.seq_file, "sequence file")->required();
  analyze->add_option("--k", cfg.k, "index of the splitting");
  analyze->add_option("--target-error", cfg.target_error, "error radius target (default: deepest window)");

  auto* examples = app.add_subcommand("examples", "shipped examples");
  examples->require_subcommand(1);
  auto* run = examples->add_subcommand("run", "run an example's declared checks");
  common(run);
  run->add_option("name", cfg.example, "example name")->required()->check(CLI::IsMember(reldom::gallery::example_names()));
  run->add_option("--radius", cfg.radius, "ball radius")->check(CLI::PositiveNumber);
  run->add_option("--budget", cfg.budget, "sample budget");

  auto* lin = app.add_subcommand("linalg", "linear algebra tools");
  lin->require_subcommand(1);
  auto* self = lin->add_subcommand("selftest", "randomized identity checks");
  common(self);
  self->add_option("--samples", cfg.samples, "number of random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  std::string command;
  std::function<int(const Config&, Json&)> fn;
  if (*c_build) command = "cusped build", fn = cmd_cusped_build;
  else if (*c_dist) command = "cusped dist", fn = cmd_cusped_dist;
  else if (*c_geo) command = "cusped geodesic", fn = cmd_cusped_geodesic;
  else if (*dominated) command = "check dominated", fn = cmd_check_dominated;
  else if (*analyze) command = "split analyze", fn = cmd_split_analyze;
  else if (*run) command = "examples run", fn = cmd_examples_run;
  else command = "linalg selftest", fn = cmd_linalg_selftest;

  Json report;
  report["schema_version"] = reldom::report::kSchemaVersion;
  report["tool"] = "reldom";
  report["version"] = kVersion;
  report["config"] = config_json(cfg, command);
  int code = kPass;
  const auto start = std::chrono::steady_clock::now();
  try {
    Json result;
    code = fn(cfg, result);
    report["result"] = result;
  } catch (const reldom::geom::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const reldom::geom::TruncationError& e) {
    report["error"] = std::string(command) + ": " + e.what();
    code = kInconclusive;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return kInputError;
  }
  if (cfg.timing) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report["timing_ms"] = ms;
  }
  report["exit_code"] = code;
  report["status"] = code == kPass ? "pass" : code == kViolation ? "violation" : "inconclusive";
  try {
    reldom::report::emit(report, cfg.json);
  } catch (const std::exception& e) {
    std::cerr << "write error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}
