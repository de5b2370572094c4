#pragma once

#include <cstdint>
#include <vector>

namespace reldom::geom {

// Simple undirected graph used as a horoball base.
struct BaseGraph {
  std::vector<std::vector<int>> adj;
  int size() const { return static_cast<int>(adj.size()); }
};

BaseGraph path_graph(int n);
BaseGraph grid_graph(int width, int height);

// Geodesic shape inside a horoball: up to `level`, `horizontal` jumps, down.
struct HoroballShape {
  int level = 0;
  long horizontal = 0;
  long length = 0;
};

// Distance in the horoball over a connected base between (u,i) and (v,j)
// with d_base(u,v) = n, levels capped at depth_cap (negative = no cap).
long horoball_distance(long n, int i, int j, int depth_cap = -1);
// Preferred shape: minimal level among optimal shapes with at most three
// horizontal jumps, else minimal optimal level.
HoroballShape preferred_shape(long n, int i, int j, int depth_cap = -1);

struct HoroballVertex {
  int base = 0;
  int level = 0;
  bool operator==(const HoroballVertex& o) const { return base == o.base && level == o.level; }
};

// Finite combinatorial horoball over a base graph, levels 0..depth_limit.
class Horoball {
 public:
  Horoball(BaseGraph base, int depth_limit);

  int depth_limit() const { return depth_; }
  int base_size() const { return base_.size(); }
  int vertex_count() const { return base_.size() * (depth_ + 1); }
  int index(HoroballVertex v) const { return v.level * base_.size() + v.base; }
  HoroballVertex vertex(int idx) const { return {idx % base_.size(), idx / base_.size()}; }
  int base_distance(int a, int b) const { return dist_[static_cast<std::size_t>(a) * base_.size() + b]; }

  // Neighbours as vertex indices; vertical flags parallel to them.
  std::vector<int> neighbors(int idx) const;
  bool adjacent(int a, int b) const;
  std::size_t edge_count() const;
  std::vector<int> bfs(int source) const;

  // Vertex sequence of the preferred geodesic.
  std::vector<HoroballVertex> preferred_geodesic(HoroballVertex x, HoroballVertex y) const;

 private:
  std::vector<int> base_geodesic(int from, int to) const;

  BaseGraph base_;
  int depth_;
  std::vector<int> dist_;
  std::vector<std::uint32_t> offsets_;
  std::vector<int> targets_;
};

Horoball build_horoball(const BaseGraph& base, int depth_limit);

}  // namespace reldom::geom
