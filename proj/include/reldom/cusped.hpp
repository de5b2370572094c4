#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "reldom/group.hpp"
#include "reldom/horoball.hpp"

namespace reldom::geom {

using VertexId = int;

// Level 0 vertices are group elements; horoball vertices carry the
// peripheral index and the canonical coset representative.
struct CuspedVertex {
  Word element;
  int level = 0;
  int peripheral = -1;
  Word coset;
  bool in_horoball() const { return peripheral >= 0; }
};

struct CuspedBuildOptions {
  int radius = 8;
  int depth_limit = -1;  // negative: automatic
  // Extend the horoballs over the peripheral subgroups themselves (the cosets
  // through the identity) to coordinates of sup-norm <= coset_extent,
  // regardless of the radius. Distances there are upper bounds only.
  long coset_extent = 0;
};

// Automatic depth: enough levels for every level-0 geodesic of length <= R.
int auto_depth(int radius);

class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, int radius, int depth);
  int radius;
  int depth;
};

struct Distance {
  long value = -1;
  bool certified = false;
};

class CuspedGraph {
 public:
  CuspedGraph(const GroupSpec& group, const CuspedBuildOptions& options);

  const GroupSpec& group() const { return *group_; }
  int radius() const { return radius_; }
  int depth_limit() const { return depth_; }
  long coset_extent() const { return extent_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return arcs_.size() / 2; }
  std::size_t level_zero_count() const { return level_zero_; }
  std::size_t horoball_count() const { return cosets_.size(); }
  CuspedVertex vertex(VertexId v) const;
  int level(VertexId v) const { return vertices_[v].level; }
  int peripheral(VertexId v) const { return vertices_[v].peripheral; }
  const Word& element(VertexId v) const { return words_[vertices_[v].element]; }
  // Horoball identifier (index into the coset table) or -1 at level 0.
  int horoball_id(VertexId v) const;

  std::span<const VertexId> neighbors(VertexId v) const;
  bool arc_is_vertical(VertexId v, std::size_t k) const { return vertical_[offsets_[v] + k] != 0; }

  std::optional<VertexId> find(const Word& element, int level = 0, int peripheral = -1) const;
  std::optional<VertexId> find(const CuspedVertex& v) const { return find(v.element, v.level, v.peripheral); }
  VertexId identity() const { return 0; }

  // Distance from the identity found while building.
  long depth_from_identity(VertexId v) const { return dist_[v]; }
  // |g|_c for an element; nullopt if g lies outside the truncation.
  std::optional<Distance> cusped_length(const Word& g) const;
  std::vector<int> bfs(VertexId source) const;
  // Exact in the truncation; certified when d(id,u) + d(u,v) <= R.
  Distance distance(VertexId u, VertexId v) const;

  std::vector<VertexId> level_zero_vertices() const;

  // Coordinates of g in its P-coset and the coset id (-1 if never built).
  CosetDecomposition decomposition(const Word& g, int p) const { return group_->decompose(g, p); }

 private:
  struct VertexRec {
    int element;
    int16_t level;
    int16_t peripheral;
  };
  struct CoordHash {
    std::size_t operator()(const std::vector<long>& c) const noexcept;
  };
  struct Coset {
    int peripheral;
    int representative;
    std::unordered_map<std::vector<long>, int, CoordHash> members;
  };
  struct Membership {
    int coset;
    std::vector<long> coords;
  };

  static std::uint64_t key(int element, int level, int peripheral);
  int intern(const Word& w);
  const Membership& membership(int element, int p);
  int member_element(int coset, const std::vector<long>& coords, bool create);
  bool in_extension(int element, int p, int level);

  const GroupSpec* group_;
  int radius_;
  int depth_;
  long extent_;
  int extent_depth_;
  std::size_t level_zero_ = 0;

  std::vector<Word> words_;
  std::unordered_map<Word, int, WordHash> word_index_;
  std::vector<VertexRec> vertices_;
  std::unordered_map<std::uint64_t, VertexId> vertex_index_;
  std::vector<int> dist_;
  std::vector<std::uint32_t> offsets_;
  std::vector<VertexId> arcs_;
  std::vector<std::uint8_t> vertical_;

  std::vector<Coset> cosets_;
  std::unordered_map<std::uint64_t, int> coset_index_;
  std::unordered_map<std::uint64_t, Membership> membership_;
  std::vector<int> identity_coset_;
};

CuspedGraph build_cusped_space(const GroupSpec& group, const CuspedBuildOptions& options);

// (2/log 2) log L and that plus one.
std::pair<double, double> peripheral_cusped_length_bounds(long length);

}  // namespace reldom::geom
