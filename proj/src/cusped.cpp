#include "reldom/cusped.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>

namespace reldom::geom {

int auto_depth(int radius) {
  int d = 0;
  while ((1L << d) < 2L * radius) ++d;
  // An excursion of cost 2m + h <= R never needs a level above (R - 1) / 2.
  return std::max(d, (radius - 1) / 2);
}

TruncationError::TruncationError(const std::string& what, int r, int d)
    : std::runtime_error(what + " (truncation radius " + std::to_string(r) + ", depth " + std::to_string(d) + ")"),
      radius(r),
      depth(d) {}

std::size_t CuspedGraph::CoordHash::operator()(const std::vector<long>& c) const noexcept {
  std::size_t h = 0x12345;
  for (long x : c) h ^= std::hash<long>()(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t CuspedGraph::key(int element, int level, int peripheral) {
  return (static_cast<std::uint64_t>(element) << 24) | (static_cast<std::uint64_t>(level) << 12) |
         static_cast<std::uint64_t>(peripheral + 1);
}

int CuspedGraph::intern(const Word& w) {
  auto it = word_index_.find(w);
  if (it != word_index_.end()) return it->second;
  const int id = static_cast<int>(words_.size());
  words_.push_back(w);
  word_index_.emplace(w, id);
  return id;
}

const CuspedGraph::Membership& CuspedGraph::membership(int element, int p) {
  const std::uint64_t k = (static_cast<std::uint64_t>(element) << 8) | static_cast<std::uint64_t>(p);
  auto it = membership_.find(k);
  if (it != membership_.end()) return it->second;
  CosetDecomposition dec;
  try {
    dec = group_->decompose(words_[element], p);
  } catch (const std::exception& e) {
    throw GroupError(std::string("coset oracle failed on '") + group_->format_word(words_[element]) + "': " + e.what());
  }
  const int rep = intern(dec.representative);
  const std::uint64_t ck = (static_cast<std::uint64_t>(rep) << 8) | static_cast<std::uint64_t>(p);
  auto cit = coset_index_.find(ck);
  int coset;
  if (cit == coset_index_.end()) {
    coset = static_cast<int>(cosets_.size());
    cosets_.push_back(Coset{p, rep, {}});
    coset_index_.emplace(ck, coset);
  } else {
    coset = cit->second;
  }
  cosets_[coset].members.emplace(dec.coordinates, element);
  return membership_.emplace(k, Membership{coset, dec.coordinates}).first->second;
}

int CuspedGraph::member_element(int coset, const std::vector<long>& coords, bool create) {
  auto& c = cosets_[coset];
  auto it = c.members.find(coords);
  if (it != c.members.end()) return it->second;
  if (!create) return -1;
  const Word w = group_->multiply(words_[c.representative], group_->peripheral_letters(c.peripheral, coords));
  const int id = intern(w);
  cosets_[coset].members.emplace(coords, id);
  const std::uint64_t k = (static_cast<std::uint64_t>(id) << 8) | static_cast<std::uint64_t>(cosets_[coset].peripheral);
  membership_.emplace(k, Membership{coset, coords});
  return id;
}

bool CuspedGraph::in_extension(int element, int p, int level) {
  if (extent_ <= 0 || level > extent_depth_) return false;
  const Membership& m = membership(element, p);
  if (m.coset != identity_coset_[p]) return false;
  for (long x : m.coords)
    if (std::labs(x) > extent_) return false;
  return true;
}

namespace {
void offsets_l1(int rank, long span, std::vector<long>& cur, std::vector<std::vector<long>>& out) {
  if (static_cast<int>(cur.size()) == rank) {
    long n = 0;
    for (long x : cur) n += std::labs(x);
    if (n > 0) out.push_back(cur);
    return;
  }
  long used = 0;
  for (long x : cur) used += std::labs(x);
  for (long x = -(span - used); x <= span - used; ++x) {
    cur.push_back(x);
    offsets_l1(rank, span, cur, out);
    cur.pop_back();
  }
}
}  // namespace

CuspedGraph::CuspedGraph(const GroupSpec& group, const CuspedBuildOptions& options)
    : group_(&group), radius_(options.radius), extent_(options.coset_extent) {
  if (radius_ < 1) throw GroupError("cusped space radius must be at least 1");
  depth_ = options.depth_limit >= 0 ? options.depth_limit : auto_depth(radius_);
  if (depth_ < 1 && group.peripheral_count() > 0) throw GroupError("cusped space depth must be at least 1");
  extent_depth_ = depth_;
  if (extent_ > 0) {
    int d = 0;
    while ((1L << d) < 2 * extent_) ++d;
    extent_depth_ = std::max(depth_, d);
  }
  if (std::max(depth_, extent_depth_) >= 4095) throw GroupError("horoball depth too large");
  if (group.peripheral_count() >= 255) throw GroupError("too many peripheral subgroups");

  const int n_gen = group.generator_count();
  const int n_per = group.peripheral_count();
  std::vector<std::vector<std::vector<std::vector<long>>>> offset_table(n_per);
  for (int p = 0; p < n_per; ++p) {
    for (int k = 0; k <= extent_depth_; ++k) {
      std::vector<std::vector<long>> out;
      std::vector<long> cur;
      const long span = k >= 40 ? (1L << 40) : (1L << k);
      if (group.peripheral_rank(p) == 1) {
        for (long x = -span; x <= span; ++x)
          if (x) out.push_back({x});
      } else {
        offsets_l1(group.peripheral_rank(p), span, cur, out);
      }
      offset_table[p].push_back(std::move(out));
    }
  }

  const int id_elem = intern(Word{});
  identity_coset_.assign(n_per, -1);
  for (int p = 0; p < n_per; ++p) identity_coset_[p] = membership(id_elem, p).coset;

  std::vector<std::tuple<VertexId, VertexId, std::uint8_t>> edges;
  auto create = [&](int element, int level, int p, int dist) {
    const VertexId v = static_cast<VertexId>(vertices_.size());
    vertices_.push_back(VertexRec{element, static_cast<int16_t>(level), static_cast<int16_t>(p)});
    vertex_index_.emplace(key(element, level, p), v);
    dist_.push_back(dist);
    if (level > 0) membership(element, p);
    return v;
  };
  create(id_elem, 0, -1, 0);

  for (std::size_t head = 0; head < vertices_.size(); ++head) {
    const VertexId u = static_cast<VertexId>(head);
    const VertexRec rec = vertices_[u];
    const int du = dist_[u];
    const bool inside = du + 1 <= radius_;
    auto link = [&](int element, int level, int p, bool vertical, bool allowed) {
      auto it = vertex_index_.find(key(element, level, p));
      VertexId v;
      if (it != vertex_index_.end()) {
        v = it->second;
      } else if (allowed) {
        v = create(element, level, p, du + 1);
      } else {
        return;
      }
      edges.emplace_back(std::min(u, v), std::max(u, v), vertical ? 1 : 0);
    };
    const Word g = words_[rec.element];
    if (rec.level == 0) {
      for (int s = 0; s < n_gen; ++s) {
        const Word w = group.multiply(g, Word{s});
        bool allowed = inside;
        int element = -1;
        auto wit = word_index_.find(w);
        if (wit != word_index_.end()) element = wit->second;
        if (!allowed && extent_ > 0) {
          const int p = group.peripheral_of_letter(s);
          if (p >= 0 && in_extension(rec.element, p, 0)) {
            if (element < 0) element = intern(w);
            allowed = in_extension(element, p, 0);
          }
        }
        if (element < 0) {
          if (!allowed) continue;
          element = intern(w);
        }
        link(element, 0, -1, false, allowed);
      }
      for (int p = 0; p < n_per; ++p) {
        if (depth_ < 1 && extent_depth_ < 1) continue;
        const bool allowed = (inside && depth_ >= 1) || in_extension(rec.element, p, 1);
        link(rec.element, 1, p, true, allowed);
      }
      continue;
    }
    const int p = rec.peripheral;
    const int k = rec.level;
    // vertical
    {
      const int down = k - 1;
      link(rec.element, down, down == 0 ? -1 : p, true, inside || in_extension(rec.element, p, down));
      if (k + 1 <= extent_depth_) {
        const bool allowed = (inside && k + 1 <= depth_) || in_extension(rec.element, p, k + 1);
        link(rec.element, k + 1, p, true, allowed);
      }
    }
    // horizontal
    const Membership mem = membership(rec.element, p);
    const bool ext_coset = extent_ > 0 && mem.coset == identity_coset_[p] && k <= extent_depth_;
    for (const auto& off : offset_table[p][k]) {
      std::vector<long> c = mem.coords;
      bool within = ext_coset;
      for (std::size_t j = 0; j < c.size(); ++j) {
        c[j] += off[j];
        if (std::labs(c[j]) > extent_) within = false;
      }
      const bool allowed = (inside && k <= depth_) || within;
      const int element = member_element(mem.coset, c, allowed);
      if (element < 0) continue;
      link(element, k, p, false, allowed);
    }
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const auto& a, const auto& b) {
                            return std::get<0>(a) == std::get<0>(b) && std::get<1>(a) == std::get<1>(b);
                          }),
              edges.end());
  const std::size_t nv = vertices_.size();
  std::vector<std::uint32_t> deg(nv + 1, 0);
  for (const auto& e : edges) {
    ++deg[std::get<0>(e)];
    ++deg[std::get<1>(e)];
  }
  offsets_.assign(nv + 1, 0);
  for (std::size_t i = 0; i < nv; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  arcs_.assign(offsets_[nv], 0);
  vertical_.assign(offsets_[nv], 0);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [a, b, vert] : edges) {
    arcs_[fill[a]] = b;
    vertical_[fill[a]++] = vert;
    arcs_[fill[b]] = a;
    vertical_[fill[b]++] = vert;
  }
  dist_ = bfs(0);
  for (const auto& r : vertices_)
    if (r.level == 0) ++level_zero_;
}

CuspedVertex CuspedGraph::vertex(VertexId v) const {
  const auto& r = vertices_.at(v);
  CuspedVertex out;
  out.element = words_[r.element];
  out.level = r.level;
  out.peripheral = r.peripheral;
  if (r.peripheral >= 0) out.coset = group_->coset_id(out.element, r.peripheral);
  return out;
}

int CuspedGraph::horoball_id(VertexId v) const {
  const auto& r = vertices_.at(v);
  if (r.peripheral < 0) return -1;
  const std::uint64_t k = (static_cast<std::uint64_t>(r.element) << 8) | static_cast<std::uint64_t>(r.peripheral);
  auto it = membership_.find(k);
  return it == membership_.end() ? -1 : it->second.coset;
}

std::span<const VertexId> CuspedGraph::neighbors(VertexId v) const {
  return std::span<const VertexId>(arcs_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::optional<VertexId> CuspedGraph::find(const Word& element, int level, int peripheral) const {
  const Word w = group_->normal_form(element);
  auto it = word_index_.find(w);
  if (it == word_index_.end()) return std::nullopt;
  if (level == 0) peripheral = -1;
  auto vit = vertex_index_.find(key(it->second, level, peripheral));
  if (vit == vertex_index_.end()) return std::nullopt;
  return vit->second;
}

std::optional<Distance> CuspedGraph::cusped_length(const Word& g) const {
  auto v = find(g);
  if (!v) return std::nullopt;
  const int d = dist_[*v];
  return Distance{d, d <= radius_};
}

std::vector<int> CuspedGraph::bfs(VertexId source) const {
  std::vector<int> d(vertices_.size(), -1);
  std::vector<VertexId> q;
  q.reserve(vertices_.size());
  q.push_back(source);
  d[source] = 0;
  for (std::size_t h = 0; h < q.size(); ++h) {
    const VertexId u = q[h];
    for (auto i = offsets_[u]; i < offsets_[u + 1]; ++i) {
      const VertexId v = arcs_[i];
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
    }
  }
  return d;
}

Distance CuspedGraph::distance(VertexId u, VertexId v) const {
  if (u == v) return Distance{0, dist_[u] <= radius_};
  const auto d = bfs(u);
  if (d[v] < 0) throw TruncationError("vertices disconnected within truncation", radius_, depth_);
  return Distance{d[v], dist_[u] + d[v] <= radius_};
}

std::vector<VertexId> CuspedGraph::level_zero_vertices() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].level == 0) out.push_back(static_cast<VertexId>(i));
  return out;
}

CuspedGraph build_cusped_space(const GroupSpec& group, const CuspedBuildOptions& options) {
  return CuspedGraph(group, options);
}

std::pair<double, double> peripheral_cusped_length_bounds(long length) {
  if (length <= 0) throw std::domain_error("peripheral length must be positive");
  const double lo = 2.0 / std::log(2.0) * std::log(static_cast<double>(length));
  return {lo, lo + 1.0};
}

}  // namespace reldom::geom
