#include <algorithm>
#include <map>
#include <stdexcept>

#include "reldom/paths.hpp"

namespace reldom::geom {

namespace {

struct Segment {
  bool excursion = false;
  int letter = -1;
  int peripheral = -1;
  std::vector<long> delta;
};

void l1_ball(int rank, long radius, std::vector<long>& cur, std::vector<std::vector<long>>& out) {
  if (static_cast<int>(cur.size()) == rank) {
    long n = 0;
    for (long x : cur) n += std::labs(x);
    if (n > 0) out.push_back(cur);
    return;
  }
  long used = 0;
  for (long x : cur) used += std::labs(x);
  for (long x = -(radius - used); x <= radius - used; ++x) {
    cur.push_back(x);
    l1_ball(rank, radius, cur, out);
    cur.pop_back();
  }
}

long norm1(const std::vector<long>& v) {
  long n = 0;
  for (long x : v) n += std::labs(x);
  return n;
}

}  // namespace

SampledGeodesic sample_geodesic_to(const CuspedGraph& graph, VertexId target, std::mt19937_64& rng) {
  const GroupSpec& group = graph.group();
  if (graph.level(target) != 0) throw GroupError("sample target must be a level-0 vertex");
  const int cap = graph.depth_limit();
  Word cur = graph.element(target);
  long dist = graph.depth_from_identity(target);
  if (dist < 0) throw TruncationError("sample target unreachable", graph.radius(), cap);

  std::map<std::pair<int, long>, std::vector<std::vector<long>>> shells;
  auto shell = [&](int p, long radius) -> const std::vector<std::vector<long>>& {
    auto key = std::make_pair(p, radius);
    auto it = shells.find(key);
    if (it != shells.end()) return it->second;
    std::vector<std::vector<long>> out;
    std::vector<long> c;
    l1_ball(group.peripheral_rank(p), radius, c, out);
    return shells.emplace(key, std::move(out)).first->second;
  };

  std::vector<Segment> back;
  while (dist > 0) {
    std::vector<std::pair<Segment, Word>> options;
    for (int s = 0; s < group.generator_count(); ++s) {
      if (group.is_peripheral_letter(s)) continue;
      const Word y = group.multiply(cur, Word{group.inverse_of(s)});
      const auto v = graph.find(y);
      if (v && graph.depth_from_identity(*v) == dist - 1) options.push_back({Segment{false, s, -1, {}}, y});
    }
    for (int p = 0; p < group.peripheral_count(); ++p) {
      long nmax = 0;
      while (horoball_distance(nmax + 1, 0, 0, cap) <= dist) ++nmax;
      for (const auto& delta : shell(p, nmax)) {
        const long h = horoball_distance(norm1(delta), 0, 0, cap);
        if (h > dist) continue;
        std::vector<long> neg(delta.size());
        for (std::size_t i = 0; i < delta.size(); ++i) neg[i] = -delta[i];
        const Word y = group.multiply(cur, group.peripheral_letters(p, neg));
        const auto v = graph.find(y);
        if (v && graph.depth_from_identity(*v) + h == dist) options.push_back({Segment{true, -1, p, delta}, y});
      }
    }
    if (options.empty()) throw TruncationError("no geodesic predecessor found", graph.radius(), cap);
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    auto& chosen = options[pick(rng)];
    back.push_back(chosen.first);
    cur = chosen.second;
    dist = graph.depth_from_identity(*graph.find(cur));
  }
  std::reverse(back.begin(), back.end());
  std::vector<Segment> segs;
  for (auto& s : back) {
    if (s.excursion && !segs.empty() && segs.back().excursion && segs.back().peripheral == s.peripheral) {
      for (std::size_t i = 0; i < s.delta.size(); ++i) segs.back().delta[i] += s.delta[i];
      if (norm1(segs.back().delta) == 0) segs.pop_back();
      continue;
    }
    segs.push_back(s);
  }

  SampledGeodesic out;
  CuspedVertex here;
  out.cusped.vertices.push_back(here);
  for (const auto& s : segs) {
    if (!s.excursion) {
      here = CuspedVertex{};
      here.element = group.multiply(out.cusped.vertices.back().element, Word{s.letter});
      out.cusped.vertices.push_back(here);
      continue;
    }
    CuspedVertex x = out.cusped.vertices.back();
    x.peripheral = s.peripheral;
    CuspedVertex y;
    y.element = group.multiply(x.element, group.peripheral_letters(s.peripheral, s.delta));
    y.peripheral = s.peripheral;
    const RelativePath piece = preferred_geodesic(group, x, y, cap);
    const std::size_t begin = out.cusped.vertices.size() - 1;
    out.cusped.vertices.back() = piece.vertices.front();
    for (std::size_t i = 1; i < piece.vertices.size(); ++i) out.cusped.vertices.push_back(piece.vertices[i]);
    out.cusped.excursions.push_back(Excursion{begin, out.cusped.vertices.size() - 1, s.peripheral});
  }
  out.projected = project(group, out.cusped);
  return out;
}

std::vector<SampledGeodesic> sample_geodesics(const CuspedGraph& graph, std::size_t count, std::mt19937_64& rng) {
  const GroupSpec& group = graph.group();
  std::vector<std::vector<VertexId>> spheres(graph.radius() + 1);
  for (VertexId v : graph.level_zero_vertices()) {
    const long d = graph.depth_from_identity(v);
    if (d < 1 || d > graph.radius()) continue;
    // Targets inside a peripheral subgroup give wholly peripheral paths.
    bool peripheral = false;
    for (int p = 0; p < group.peripheral_count() && !peripheral; ++p)
      peripheral = group.coset_id(graph.element(v), p).empty();
    if (!peripheral) spheres[d].push_back(v);
  }
  std::vector<int> radii;
  for (int d = 1; d <= graph.radius(); ++d)
    if (!spheres[d].empty()) radii.push_back(d);
  if (radii.empty()) throw GroupError("no sample targets in the truncation");
  std::vector<SampledGeodesic> out;
  out.reserve(count);
  std::uniform_int_distribution<std::size_t> pick_r(0, radii.size() - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& sphere = spheres[radii[pick_r(rng)]];
    std::uniform_int_distribution<std::size_t> pick_v(0, sphere.size() - 1);
    out.push_back(sample_geodesic_to(graph, sphere[pick_v(rng)], rng));
  }
  return out;
}

}  // namespace reldom::geom
