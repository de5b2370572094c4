#include "reldom/horoball.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "reldom/group.hpp"

namespace reldom::geom {

BaseGraph path_graph(int n) {
  BaseGraph g;
  g.adj.resize(n);
  for (int i = 0; i + 1 < n; ++i) {
    g.adj[i].push_back(i + 1);
    g.adj[i + 1].push_back(i);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

BaseGraph grid_graph(int width, int height) {
  BaseGraph g;
  g.adj.resize(static_cast<std::size_t>(width) * height);
  auto id = [&](int x, int y) { return y * width + x; };
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      if (x + 1 < width) {
        g.adj[id(x, y)].push_back(id(x + 1, y));
        g.adj[id(x + 1, y)].push_back(id(x, y));
      }
      if (y + 1 < height) {
        g.adj[id(x, y)].push_back(id(x, y + 1));
        g.adj[id(x, y + 1)].push_back(id(x, y));
      }
    }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

namespace {
long ceil_shift(long n, int m) {
  if (m >= 62) return n > 0 ? 1 : 0;
  const long span = 1L << m;
  return (n + span - 1) / span;
}

int level_bound(long n, int i, int j, int depth_cap) {
  int top = std::max(i, j);
  while (top < 62 && (1L << top) < n) ++top;
  top = std::max(top, std::max(i, j));
  if (depth_cap >= 0) top = std::min(top + 2, depth_cap);
  else top += 2;
  return std::max(top, std::max(i, j));
}
}  // namespace

long horoball_distance(long n, int i, int j, int depth_cap) {
  return preferred_shape(n, i, j, depth_cap).length;
}

HoroballShape preferred_shape(long n, int i, int j, int depth_cap) {
  if (n < 0 || i < 0 || j < 0) throw std::invalid_argument("horoball shape: negative input");
  if (depth_cap >= 0 && (i > depth_cap || j > depth_cap)) throw std::invalid_argument("horoball shape: level above cap");
  const int lo = std::max(i, j);
  const int hi = level_bound(n, i, j, depth_cap);
  long best = std::numeric_limits<long>::max();
  for (int m = lo; m <= hi; ++m) best = std::min(best, 2L * m - i - j + ceil_shift(n, m));
  HoroballShape fallback{-1, 0, best};
  for (int m = lo; m <= hi; ++m) {
    const long h = ceil_shift(n, m);
    if (2L * m - i - j + h != best) continue;
    if (h <= 3) return HoroballShape{m, h, best};
    if (fallback.level < 0) fallback = HoroballShape{m, h, best};
  }
  return fallback;
}

Horoball::Horoball(BaseGraph base, int depth_limit) : base_(std::move(base)), depth_(depth_limit) {
  if (base_.size() == 0) throw GroupError("empty horoball base");
  if (depth_ < 0) throw GroupError("negative horoball depth");
  const int n = base_.size();
  dist_.assign(static_cast<std::size_t>(n) * n, -1);
  for (int s = 0; s < n; ++s) {
    int* d = &dist_[static_cast<std::size_t>(s) * n];
    std::deque<int> q{s};
    d[s] = 0;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (int v : base_.adj[u])
        if (d[v] < 0) {
          d[v] = d[u] + 1;
          q.push_back(v);
        }
    }
    for (int t = 0; t < n; ++t)
      if (d[t] < 0) throw GroupError("horoball base is not connected");
  }
  offsets_.assign(1, 0);
  for (int idx = 0; idx < vertex_count(); ++idx) {
    const HoroballVertex v = vertex(idx);
    if (v.level > 0) targets_.push_back(index({v.base, v.level - 1}));
    const long span = v.level >= 31 ? std::numeric_limits<long>::max() : (1L << v.level);
    for (int w = 0; w < n; ++w) {
      const int dw = base_distance(v.base, w);
      if (dw > 0 && dw <= span) targets_.push_back(index({w, v.level}));
    }
    if (v.level < depth_) targets_.push_back(index({v.base, v.level + 1}));
    offsets_.push_back(static_cast<std::uint32_t>(targets_.size()));
  }
}

std::vector<int> Horoball::neighbors(int idx) const {
  return std::vector<int>(targets_.begin() + offsets_[idx], targets_.begin() + offsets_[idx + 1]);
}

bool Horoball::adjacent(int a, int b) const {
  for (auto i = offsets_[a]; i < offsets_[a + 1]; ++i)
    if (targets_[i] == b) return true;
  return false;
}

std::size_t Horoball::edge_count() const { return targets_.size() / 2; }

std::vector<int> Horoball::bfs(int source) const {
  std::vector<int> d(vertex_count(), -1);
  std::vector<int> q{source};
  d[source] = 0;
  for (std::size_t h = 0; h < q.size(); ++h) {
    const int u = q[h];
    for (auto i = offsets_[u]; i < offsets_[u + 1]; ++i) {
      const int v = targets_[i];
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
    }
  }
  return d;
}

std::vector<int> Horoball::base_geodesic(int from, int to) const {
  std::vector<int> path{from};
  int cur = from;
  while (cur != to) {
    int next = -1;
    for (int v : base_.adj[cur])
      if (base_distance(v, to) == base_distance(cur, to) - 1) {
        next = v;
        break;
      }
    cur = next;
    path.push_back(cur);
  }
  return path;
}

std::vector<HoroballVertex> Horoball::preferred_geodesic(HoroballVertex x, HoroballVertex y) const {
  if (x.base < 0 || x.base >= base_size() || y.base < 0 || y.base >= base_size() || x.level < 0 ||
      y.level < 0 || x.level > depth_ || y.level > depth_)
    throw GroupError("preferred geodesic: vertex outside the horoball");
  const long n = base_distance(x.base, y.base);
  const HoroballShape s = preferred_shape(n, x.level, y.level, depth_);
  std::vector<HoroballVertex> out{x};
  for (int l = x.level + 1; l <= s.level; ++l) out.push_back({x.base, l});
  const auto g = base_geodesic(x.base, y.base);
  const long span = 1L << s.level;
  std::size_t pos = 0;
  while (pos + 1 < g.size()) {
    pos = std::min(g.size() - 1, pos + static_cast<std::size_t>(span));
    out.push_back({g[pos], s.level});
  }
  for (int l = s.level - 1; l >= y.level; --l) out.push_back({y.base, l});
  return out;
}

Horoball build_horoball(const BaseGraph& base, int depth_limit) { return Horoball(base, depth_limit); }

}  // namespace reldom::geom
