#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "reldom/cusped.hpp"
#include "reldom/paths.hpp"
#include "reldom/report.hpp"
#include "reldom/representation.hpp"
#include "reldom/splitting.hpp"

namespace reldom::dom {

// One ball element with the spectral data the checks need.
struct BallPoint {
  geom::Word element;
  long length = 0;  // |g|_c, or |g| for the plain pipeline
  double log_s1 = 0.0;
  double log_s2 = 0.0;
  double log_sd = 0.0;
  double cartan_norm = 0.0;  // sqrt(sum log^2 s_i)
  Vector u1;                 // Xi = U_1
  Vector ud;                 // Xi* = ud^perp = U_{d-1}
  double log_gap() const { return log_s1 - log_s2; }
};

// Certified length of an element, nullopt when it lies beyond the scan.
using LengthOracle = std::function<std::optional<long>(const geom::Word&)>;

struct Ball {
  std::vector<BallPoint> points;  // sorted by (length, element)
  int radius = 0;
  LengthOracle length;
  const geom::GroupSpec* group = nullptr;
};

BallPoint make_point(const Representation& rep, const geom::Word& element, long length);
// Level-0 vertices of the cusped space with |g|_c <= radius.
Ball scan_ball(const Representation& rep, const geom::CuspedGraph& graph, int radius);
// Word-metric ball from a breadth-first search of the Cayley graph.
Ball scan_plain_ball(const Representation& rep, int radius);

struct Witness {
  std::string element;
  long length = 0;
  double value = 0.0;
};

// (D-): log(s1/s2) >= log C_lower + mu_lower * |g|_c, so C_lower <= 1 is allowed.
// (D+): log(s1/sd) <= log C_upper + mu_upper * |g|_c.
struct DominationConstants {
  double C_lower = 1.0;
  double mu_lower = 0.0;
  double C_upper = 1.0;
  double mu_upper = 0.0;
};

struct LowerFit {
  bool ok = false;
  double C = 0.0;
  double mu = 0.0;
  std::vector<double> minima;  // per length
  std::size_t violations = 0;  // pointwise recheck of the fitted line
  std::vector<Witness> witnesses;
  std::string warning;
};
LowerFit check_lower_domination(const Ball& ball);

struct UpperFit {
  bool ok = false;
  double C = 0.0;
  double mu = 0.0;
  double a_priori_mu = 0.0;  // log max_s ||rho(s)||
  std::size_t violations = 0;
  std::vector<double> maxima;
  std::string warning;
};
UpperFit check_upper_domination(const Ball& ball, const Representation& rep);

struct QiReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_upper_margin = 0.0;
  double worst_lower_margin = 0.0;
};
QiReport check_orbit_qi(const Ball& ball, const DominationConstants& c, int dim);

// C_lower^{-1} e^{-mu_lower l0} < 1.
long ell_zero(const DominationConstants& c);

struct LimitPoint {
  Vector line;
  Vector hyperplane_normal;
  long length = 0;
};
struct LimitSample {
  long ell0 = 0;
  long sphere = 0;
  std::vector<LimitPoint> points;
  std::size_t invariance_checked = 0;
  std::size_t invariance_violations = 0;
  double worst_invariance_margin = 0.0;
};
LimitSample sample_limit_set(const Ball& ball, const Representation& rep, const DominationConstants& c);

struct PairReport {
  std::size_t eligible = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;
  std::string note;
};

struct WordSumConstants {
  double nu = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
};
WordSumConstants wordsum_constants(const DominationConstants& c);
PairReport check_wordsum_inequality(const Ball& ball, const DominationConstants& c, std::size_t budget,
                                    std::mt19937_64& rng);

struct NorthSouthReport : PairReport {
  double epsilon = 0.0;
  double epsilon_prime = 0.0;
  double sin_delta = 0.0;
  long ell = 0;
  bool inconclusive = false;
};
NorthSouthReport check_north_south(const Ball& ball, const Representation& rep, const DominationConstants& c,
                                   const LimitSample& limits, double epsilon, double epsilon_prime,
                                   std::size_t budget, std::mt19937_64& rng);

struct PeripheralRecord {
  int peripheral = 0;
  double C1 = 0.0;
  double mu1 = 0.0;
  Vector xi;
  Vector xi_star_normal;
  long probe_length = 0;
  double head_deviation = 0.0;  // lengths in [L/4, L/2)
  double tail_deviation = 0.0;  // lengths in [L/2, L]
  bool unique_limits = false;
  double log_C_prime = 0.0;  // min over samples of log(s1/s2)(g eta) - 2 log|eta|
  std::size_t quadratic_samples = 0;
};
struct PeripheralReport {
  std::vector<PeripheralRecord> records;
  double delta0 = 0.0;
  std::size_t transversality_samples = 0;
};
PeripheralReport check_peripheral_conditions(const Representation& rep, const geom::CuspedGraph& graph,
                                             const Ball& ball, std::size_t sample_budget, std::mt19937_64& rng,
                                             long probe_length = 1024);

// Constants of the EC lemma from domination and quasigeodesic constants.
struct EcConstants {
  double C2 = 0.0;
  double C3 = 0.0;
  double mu0 = 0.0;
  double mu2 = 0.0;
  double C = 0.0;
  double mu = 0.0;
};
EcConstants derived_EC_constants(const DominationConstants& c, double upsilon_lower, double upsilon_upper,
                                 double C_prime);

// A_k = rho(path(k+1)^{-1} path(k)); the path must pass through id at 0.
split::MatrixSequence word_to_matrix_sequence(const Representation& rep, const geom::RelativePath& path);

struct PipelineSample {
  bool certified = false;
  std::string reason;
  double gap = 0.0;
  double s_min = 0.0;
  double error_radius = 0.0;
  long depth = 0;
};
struct PipelineReport {
  std::vector<PipelineSample> samples;
  std::size_t certified = 0;
  std::size_t violations = 0;
};
// Bi-infinite paths glued from two sampled geodesics at id.
PipelineReport run_pipeline(const Representation& rep, const geom::CuspedGraph& graph, std::size_t count,
                            std::mt19937_64& rng);

struct VerifierOptions {
  int radius = 8;
  std::size_t sample_budget = 2000;
  std::size_t pipeline_samples = 20;
  double epsilon = 0.5;
  double epsilon_prime = 0.5;
  long probe_length = 1024;
};

struct VerifierReport {
  std::size_t ball_size = 0;
  LowerFit lower;
  UpperFit upper;
  DominationConstants constants;
  QiReport qi;
  LimitSample limits;
  PairReport wordsum;
  NorthSouthReport north_south;
  PeripheralReport peripheral;
  PipelineReport pipeline;
  bool limits_available = false;
  std::vector<std::string> notes;
  bool passed() const;
  bool inconclusive() const;
};

VerifierReport verify_dominated(const Representation& rep, const geom::CuspedGraph& graph,
                                const VerifierOptions& options, std::mt19937_64& rng);

report::Json to_json(const VerifierReport& r);

}  // namespace reldom::dom
