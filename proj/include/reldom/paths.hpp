#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "reldom/cusped.hpp"

namespace reldom::geom {

// Maximal subpath [begin, end] (vertex indices) inside one closed horoball
// over a coset of peripheral `peripheral`.
struct Excursion {
  std::size_t begin = 0;
  std::size_t end = 0;
  int peripheral = -1;
};

// Vertex i sits at integer parameter origin + i.
struct RelativePath {
  std::vector<CuspedVertex> vertices;
  std::vector<Excursion> excursions;
  long origin = 0;

  std::size_t size() const { return vertices.size(); }
  long first_parameter() const { return origin; }
  long last_parameter() const { return origin + static_cast<long>(vertices.size()) - 1; }
  const CuspedVertex& at(long parameter) const;
  std::size_t index(long parameter) const;
  // Excursion containing the step index -> index + 1, if any.
  const Excursion* step_excursion(std::size_t step) const;
};

RelativePath cayley_path(const GroupSpec& group, const Word& start, const Word& letters);

// Preferred geodesic between two vertices of the horoball over one coset.
RelativePath preferred_geodesic(const GroupSpec& group, const CuspedVertex& x, const CuspedVertex& y,
                                int depth_cap = -1);

// Replaces every excursion by the level-0 word with the same endpoints.
// parameter_map (optional) receives, per input vertex, the index of the
// output vertex it is sent to.
RelativePath project(const GroupSpec& group, const RelativePath& path,
                     std::vector<std::size_t>* parameter_map = nullptr);

// Depth at parameter n of a level-0 path.
int depth(const GroupSpec& group, const RelativePath& path, long n);
std::vector<int> depth_profile(const GroupSpec& group, const RelativePath& path);

std::vector<long> ordered_partition(long n);

RelativePath reparametrize(const GroupSpec& group, const RelativePath& projected);

// Peripheral length of the step starting at vertex index i (0 if the step
// is not peripheral).
long peripheral_step_length(const GroupSpec& group, const RelativePath& path, std::size_t i);

struct QuasigeodesicBounds {
  double lower_mult = 1.0;  // |m-n| * lower_mult - lower_add
  double lower_add = 0.0;
  double upper_mult = 1.0;  // upper_mult * (|m-n| + min depth) + upper_add
  double upper_add = 0.0;
  static QuasigeodesicBounds standard(double lower, double upper);
  // |.|_c >= |m-n|/6 and <= 8(|m-n| + min depth) + 20.
  static QuasigeodesicBounds sharpened();
};

struct QuasigeodesicViolation {
  std::string condition;  // "i", "ii" or "iii"
  long m = 0;
  long n = 0;
  double measured = 0.0;
  double bound = 0.0;
};

struct QuasigeodesicReport {
  std::vector<QuasigeodesicViolation> violations;
  std::size_t pairs_checked = 0;
  std::size_t steps_checked = 0;
  std::size_t inconclusive = 0;  // distances outside the truncation
  bool passed() const { return violations.empty() && inconclusive == 0; }
};

QuasigeodesicReport verify_metric_quasigeodesic(const RelativePath& path, const QuasigeodesicBounds& bounds,
                                                const CuspedGraph& graph);

struct RatioReport {
  bool skipped = false;
  std::string reason;
  double cusped_distance = 0.0;
  double relative_length = 0.0;
  double ratio = 0.0;
  bool within = false;
};

inline constexpr double kRatioLower = 1.0 / 3.0;
double ratio_upper();

RatioReport relative_length_check(const RelativePath& projected, long a, long b, const CuspedGraph& graph);

// A cusped geodesic from the identity to a level-0 vertex together with its
// projection.
struct SampledGeodesic {
  RelativePath cusped;
  RelativePath projected;
};

// Random geodesic from the identity to `target` using the identity BFS
// layers of the graph; consecutive excursions in one coset are merged.
SampledGeodesic sample_geodesic_to(const CuspedGraph& graph, VertexId target, std::mt19937_64& rng);
// Targets drawn with uniform distance in [1, R], then uniformly in that sphere.
std::vector<SampledGeodesic> sample_geodesics(const CuspedGraph& graph, std::size_t count, std::mt19937_64& rng);

}  // namespace reldom::geom
