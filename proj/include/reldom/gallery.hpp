#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "reldom/group.hpp"
#include "reldom/report.hpp"
#include "reldom/representation.hpp"
#include "reldom/verifier.hpp"

namespace reldom::gallery {

using linalg::Matrix;

class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Group and representation texts shipped with the library; the same
// contents live under data/.
extern const char* const kPuncturedTorusGroup;
extern const char* const kPuncturedTorusRep;
extern const char* const kSchottkyGroup;
extern const char* const kSchottkyRep;

struct ExampleFixture {
  std::string name;
  std::unique_ptr<geom::FreeProductGroup> group;
  std::unique_ptr<dom::Representation> rep;
  int radius = 8;
  std::vector<std::string> checks;  // declared check list
};

ExampleFixture load_fixture(const std::string& name, const std::string& group_text, const std::string& rep_text);

// F2 = <a,b>, P = {<[a,b]>}, rho(a) = [[1,1],[1,2]], rho(b) = [[1,-1],[-1,2]].
// Throws FixtureError unless tr rho([a,b]) = -2 to 1e-12.
ExampleFixture punctured_torus_fixture();
// Same group through the symmetric-square lift to GL(3).
ExampleFixture punctured_torus_sym2_fixture();
// rho(a) = diag(4, 1/4), rho(b) = R diag(4, 1/4) R^{-1} with R the rotation by pi/4; no peripherals.
ExampleFixture schottky_fixture();

double commutator_trace(const Matrix& a, const Matrix& b);
Matrix sym2_lift(const Matrix& g);

// Upper half-space distance between (x, s) and (y, t), s, t > 0.
double upper_half_space_distance(const std::vector<double>& x, double s, const std::vector<double>& y, double t);

struct CannonCooperReport {
  bool quasi_onto = false;
  bool lipschitz = false;
  bool non_collapsing = false;
  double worst_coverage = 0.0;   // max distance from a target sample to the image
  double worst_lipschitz = 0.0;  // max d_Y / d_X
  std::size_t collapsing_pairs = 0;
  std::size_t pairs = 0;
  bool passed() const { return quasi_onto && lipschitz && non_collapsing; }
};

// Pair samples (d_X, d_Y) of a map and distances from target samples to the image.
struct MapSamples {
  std::vector<double> source;
  std::vector<double> target;
  std::vector<double> coverage;
};

CannonCooperReport cannon_cooper_qi_check(const MapSamples& samples, double epsilon, double L,
                                          const std::function<double(double)>& r_of_R);

struct HoroballQiReport {
  int d = 1;
  int radius = 0;
  int depth = 0;
  std::size_t pairs = 0;
  double epsilon = 1.0;
  double lambda = 0.0;  // d_G / lambda - eps <= d_H <= lambda d_G + eps on samples
  MapSamples samples;
};

// Horoball over Z^d, base box [-R, R]^d, vertex (v, n) sent to (v, 2^n).
HoroballQiReport zd_horoball_qi(int d, std::size_t sample_budget, int radius, std::mt19937_64& rng);
// Horoball over Z^2 sent to the upper half-plane by dropping the second coordinate.
MapSamples collapsing_projection_samples(std::size_t sample_budget, int radius, std::mt19937_64& rng);

struct ParabolicGapReport {
  std::vector<double> deviation;  // index n - 1: log(s1/s2)(eta^n) - 2 log n
  double sup_abs(long n_max) const;
};
ParabolicGapReport parabolic_quadratic_gap(const Matrix& eta, long n_max);

struct DegenerationReport {
  std::size_t ball_size = 0;
  std::size_t metric_mismatches = 0;
  std::size_t random_words = 0;
  std::size_t random_mismatches = 0;
  bool fits_identical = false;
  dom::LowerFit cusped;
  dom::LowerFit plain;
};
DegenerationReport empty_peripheral_degeneration(const ExampleFixture& fixture, int radius, std::mt19937_64& rng);

struct ExampleOptions {
  int radius = 8;
  std::uint64_t seed = 0;
  std::size_t sample_budget = 2000;
};

std::vector<std::string> example_names();
// Runs the declared checks of a shipped example. "status" is "pass",
// "violation" or "inconclusive".
report::Json run_example(const std::string& name, const ExampleOptions& options);

}  // namespace reldom::gallery
