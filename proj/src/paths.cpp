#include "reldom/paths.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace reldom::geom {

std::size_t RelativePath::index(long parameter) const {
  if (parameter < first_parameter() || parameter > last_parameter())
    throw std::domain_error("parameter " + std::to_string(parameter) + " outside the path");
  return static_cast<std::size_t>(parameter - origin);
}

const CuspedVertex& RelativePath::at(long parameter) const { return vertices[index(parameter)]; }

const Excursion* RelativePath::step_excursion(std::size_t step) const {
  for (const auto& e : excursions)
    if (e.begin <= step && step < e.end) return &e;
  return nullptr;
}

RelativePath cayley_path(const GroupSpec& group, const Word& start, const Word& letters) {
  RelativePath p;
  CuspedVertex v;
  v.element = group.normal_form(start);
  p.vertices.push_back(v);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    v.element = group.multiply(v.element, Word{letters[i]});
    p.vertices.push_back(v);
  }
  std::size_t i = 0;
  while (i < letters.size()) {
    const int per = group.peripheral_of_letter(letters[i]);
    if (per < 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < letters.size() && group.peripheral_of_letter(letters[j]) == per) ++j;
    p.excursions.push_back(Excursion{i, j, per});
    i = j;
  }
  return p;
}

namespace {

long l1(const std::vector<long>& a, const std::vector<long>& b) {
  long n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += std::labs(a[i] - b[i]);
  return n;
}

// Lattice point at L1 distance t along the coordinate-ordered path a -> b.
std::vector<long> along(const std::vector<long>& a, const std::vector<long>& b, long t) {
  std::vector<long> c = a;
  for (std::size_t i = 0; i < a.size() && t > 0; ++i) {
    const long need = std::labs(b[i] - a[i]);
    const long step = std::min(need, t);
    c[i] += (b[i] >= a[i] ? step : -step);
    t -= step;
  }
  return c;
}

Word letters_between(const GroupSpec& group, int p, const std::vector<long>& a, const std::vector<long>& b) {
  std::vector<long> delta(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) delta[i] = b[i] - a[i];
  return group.peripheral_letters(p, delta);
}

}  // namespace

RelativePath preferred_geodesic(const GroupSpec& group, const CuspedVertex& x, const CuspedVertex& y, int depth_cap) {
  if (x.peripheral < 0 || x.peripheral != y.peripheral)
    throw GroupError("preferred geodesic: vertices are not in one horoball");
  const int p = x.peripheral;
  const auto dx = group.decompose(x.element, p);
  const auto dy = group.decompose(y.element, p);
  if (dx.representative != dy.representative) throw GroupError("preferred geodesic: vertices are not in one horoball");
  const long n = l1(dx.coordinates, dy.coordinates);
  const HoroballShape s = preferred_shape(n, x.level, y.level, depth_cap);
  RelativePath out;
  auto vert = [&](const Word& e, int level) {
    CuspedVertex v;
    v.element = e;
    v.level = level;
    v.peripheral = p;
    v.coset = dx.representative;
    return v;
  };
  const Word xe = group.normal_form(x.element), ye = group.normal_form(y.element);
  out.vertices.push_back(vert(xe, x.level));
  for (int l = x.level + 1; l <= s.level; ++l) out.vertices.push_back(vert(xe, l));
  const long span = 1L << s.level;
  long t = 0;
  while (t < n) {
    t = std::min(n, t + span);
    const auto c = along(dx.coordinates, dy.coordinates, t);
    out.vertices.push_back(vert(group.multiply(dx.representative, group.peripheral_letters(p, c)), s.level));
  }
  for (int l = s.level - 1; l >= y.level; --l) out.vertices.push_back(vert(ye, l));
  if (out.vertices.size() > 1) out.excursions.push_back(Excursion{0, out.vertices.size() - 1, p});
  return out;
}

RelativePath project(const GroupSpec& group, const RelativePath& path, std::vector<std::size_t>* parameter_map) {
  if (path.vertices.empty()) return path;
  if (path.vertices.front().level != 0 || path.vertices.back().level != 0)
    throw GroupError("project: endpoints must be at level 0");
  RelativePath out;
  out.origin = path.origin;
  if (parameter_map) parameter_map->assign(path.size(), 0);
  auto level0 = [](const Word& e) {
    CuspedVertex v;
    v.element = e;
    return v;
  };
  std::vector<Excursion> ex = path.excursions;
  std::sort(ex.begin(), ex.end(), [](const Excursion& a, const Excursion& b) { return a.begin < b.begin; });
  std::size_t i = 0, k = 0;
  std::size_t last_pushed = static_cast<std::size_t>(-1);
  while (i < path.size()) {
    if (k < ex.size() && ex[k].begin <= i && ex[k].end > i) {
      const Excursion& e = ex[k++];
      const auto& a = path.vertices[e.begin];
      const auto& b = path.vertices[e.end];
      if (a.level != 0 || b.level != 0) throw GroupError("project: excursion must start and end at level 0");
      // Shape check: up, at most three horizontal jumps, down.
      std::size_t j = e.begin;
      int top = 0;
      while (j < e.end && path.vertices[j + 1].level == path.vertices[j].level + 1) ++j;
      top = path.vertices[j].level;
      long horizontal = 0;
      while (j < e.end && path.vertices[j + 1].level == top) {
        ++j;
        ++horizontal;
      }
      while (j < e.end && path.vertices[j + 1].level == path.vertices[j].level - 1) ++j;
      const int p = e.peripheral;
      const auto da = group.decompose(a.element, p);
      const auto db = group.decompose(b.element, p);
      const long n = l1(da.coordinates, db.coordinates);
      if (j != e.end || horizontal > 3 || da.representative != db.representative ||
          static_cast<long>(e.end - e.begin) != horoball_distance(n, 0, 0))
        throw GroupError("normalize excursions first");
      if (last_pushed != e.begin) out.vertices.push_back(level0(group.normal_form(a.element)));
      const std::size_t start_index = out.vertices.size() - 1;
      const Word letters = letters_between(group, p, da.coordinates, db.coordinates);
      Word cur = out.vertices.back().element;
      for (int l : letters) {
        cur = group.multiply(cur, Word{l});
        out.vertices.push_back(level0(cur));
      }
      const std::size_t end_index = out.vertices.size() - 1;
      if (!letters.empty()) out.excursions.push_back(Excursion{start_index, end_index, p});
      if (parameter_map) {
        for (std::size_t q = e.begin; q <= e.end; ++q) {
          const auto& v = path.vertices[q];
          std::size_t target;
          if (q == e.begin) target = start_index;
          else if (q == e.end) target = end_index;
          else if (v.level == top && q > e.begin + static_cast<std::size_t>(top)) {
            const auto dv = group.decompose(v.element, p);
            target = start_index + static_cast<std::size_t>(std::min(l1(da.coordinates, dv.coordinates), n));
          } else if (q - e.begin <= static_cast<std::size_t>(top)) target = start_index;
          else target = end_index;
          (*parameter_map)[q] = target;
        }
      }
      last_pushed = e.end;
      i = e.end + 1;
      continue;
    }
    const auto& v = path.vertices[i];
    if (v.level != 0) throw GroupError("project: horoball vertex outside any excursion");
    out.vertices.push_back(level0(group.normal_form(v.element)));
    last_pushed = i;
    if (parameter_map) (*parameter_map)[i] = out.vertices.size() - 1;
    ++i;
  }
  return out;
}

namespace {

class DepthOracle {
 public:
  DepthOracle(const GroupSpec& g, const RelativePath& p) : group_(g), path_(p) {}

  const Word& rep(std::size_t i, int per) {
    auto key = std::make_pair(i, per);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, group_.coset_id(path_.vertices[i].element, per)).first->second;
  }

  int at(std::size_t idx) {
    const long n = static_cast<long>(path_.size());
    std::vector<int> pers;
    if (idx > 0)
      if (auto e = path_.step_excursion(idx - 1)) pers.push_back(e->peripheral);
    if (idx + 1 < path_.size())
      if (auto e = path_.step_excursion(idx)) pers.push_back(e->peripheral);
    if (pers.empty()) return 0;
    int best = -1;
    for (int per : pers) {
      const Word own = rep(idx, per);
      int found = -1;
      for (long d = 1; d < n; ++d) {
        const long l = static_cast<long>(idx) - d, r = static_cast<long>(idx) + d;
        const bool lv = l >= 0, rv = r < n;
        if (!lv && !rv) break;
        if ((lv && rep(static_cast<std::size_t>(l), per) != own) || (rv && rep(static_cast<std::size_t>(r), per) != own)) {
          found = static_cast<int>(d);
          break;
        }
      }
      if (found < 0) found = static_cast<int>(std::min<long>(n - 1 - static_cast<long>(idx), static_cast<long>(idx)));
      best = best < 0 ? found : std::min(best, found);
    }
    return best;
  }

 private:
  const GroupSpec& group_;
  const RelativePath& path_;
  std::map<std::pair<std::size_t, int>, Word> cache_;
};

void require_level_zero(const RelativePath& path) {
  for (const auto& v : path.vertices)
    if (v.level != 0) throw GroupError("expected a level-0 path");
}

}  // namespace

int depth(const GroupSpec& group, const RelativePath& path, long n) {
  const std::size_t idx = path.index(n);
  require_level_zero(path);
  DepthOracle o(group, path);
  return o.at(idx);
}

std::vector<int> depth_profile(const GroupSpec& group, const RelativePath& path) {
  require_level_zero(path);
  DepthOracle o(group, path);
  std::vector<int> out(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) out[i] = o.at(i);
  return out;
}

std::vector<long> ordered_partition(long n) {
  if (n <= 0) throw std::domain_error("ordered partition needs n >= 1");
  int k = 0;
  while (3L * (1L << (k + 1)) - 2 <= n) ++k;
  const long nk = 3L * (1L << k) - 2;
  std::vector<long> out;
  for (int i = 0; i < k; ++i) out.push_back(1L << i);
  out.push_back((1L << k) + (n - nk));
  for (int i = k - 1; i >= 0; --i) out.push_back(1L << i);
  return out;
}

namespace {
std::vector<long> doubling_blocks(long n) {
  std::vector<long> out;
  long sum = 0, next = 1;
  while (sum + next <= n) {
    out.push_back(next);
    sum += next;
    next *= 2;
  }
  if (sum < n) out.back() += n - sum;
  return out;
}
}  // namespace

RelativePath reparametrize(const GroupSpec& group, const RelativePath& projected) {
  (void)group;
  require_level_zero(projected);
  const std::size_t n = projected.size();
  std::vector<Excursion> ex = projected.excursions;
  std::sort(ex.begin(), ex.end(), [](const Excursion& a, const Excursion& b) { return a.begin < b.begin; });
  std::vector<std::size_t> keep;
  std::vector<Excursion> new_ex;
  std::size_t i = 0, k = 0;
  while (i < n) {
    if (k < ex.size() && ex[k].begin == i && ex[k].end > ex[k].begin) {
      const Excursion& e = ex[k++];
      const long len = static_cast<long>(e.end - e.begin);
      const bool at_start = e.begin == 0, at_end = e.end + 1 == n;
      if (at_start && at_end) throw GroupError("wholly peripheral path");
      std::vector<long> blocks;
      if (at_end) {
        blocks = doubling_blocks(len);
      } else if (at_start) {
        blocks = doubling_blocks(len);
        std::reverse(blocks.begin(), blocks.end());
      } else {
        blocks = ordered_partition(len);
      }
      if (keep.empty() || keep.back() != e.begin) keep.push_back(e.begin);
      const std::size_t nb = keep.size() - 1;
      std::size_t pos = e.begin;
      for (long b : blocks) {
        pos += static_cast<std::size_t>(b);
        keep.push_back(pos);
      }
      new_ex.push_back(Excursion{nb, keep.size() - 1, e.peripheral});
      i = e.end + 1;
      continue;
    }
    if (keep.empty() || keep.back() != i) keep.push_back(i);
    ++i;
  }
  RelativePath out;
  for (std::size_t q : keep) out.vertices.push_back(projected.vertices[q]);
  out.excursions = new_ex;
  out.origin = projected.origin;
  if (projected.origin <= 0 && projected.last_parameter() >= 0) {
    const std::size_t zero = static_cast<std::size_t>(-projected.origin);
    auto it = std::find(keep.begin(), keep.end(), zero);
    if (it != keep.end()) out.origin = -static_cast<long>(it - keep.begin());
  }
  return out;
}

long peripheral_step_length(const GroupSpec& group, const RelativePath& path, std::size_t i) {
  const Excursion* e = path.step_excursion(i);
  if (!e) return 0;
  const auto a = group.decompose(path.vertices[i].element, e->peripheral);
  const auto b = group.decompose(path.vertices[i + 1].element, e->peripheral);
  return l1(a.coordinates, b.coordinates);
}

QuasigeodesicBounds QuasigeodesicBounds::standard(double lower, double upper) {
  return QuasigeodesicBounds{1.0 / lower, lower, upper, upper};
}

QuasigeodesicBounds QuasigeodesicBounds::sharpened() { return QuasigeodesicBounds{1.0 / 6.0, 0.0, 8.0, 20.0}; }

QuasigeodesicReport verify_metric_quasigeodesic(const RelativePath& path, const QuasigeodesicBounds& bounds,
                                                const CuspedGraph& graph) {
  const GroupSpec& group = graph.group();
  QuasigeodesicReport r;
  const auto depths = depth_profile(group, path);
  const std::size_t n = path.size();
  std::vector<Word> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = group.inverse(path.vertices[i].element);
  constexpr double eps = 1e-9;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto len = graph.cusped_length(group.multiply(inv[i], path.vertices[j].element));
      if (!len || !len->certified) {
        ++r.inconclusive;
        continue;
      }
      ++r.pairs_checked;
      const double gap = static_cast<double>(j - i);
      const double measured = static_cast<double>(len->value);
      const long pi = path.origin + static_cast<long>(i), pj = path.origin + static_cast<long>(j);
      const double lower = gap * bounds.lower_mult - bounds.lower_add;
      if (measured < lower - eps) r.violations.push_back({"i", pi, pj, measured, lower});
      const double upper = bounds.upper_mult * (gap + std::min(depths[i], depths[j])) + bounds.upper_add;
      if (measured > upper + eps) r.violations.push_back({"ii", pi, pj, measured, upper});
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!path.step_excursion(i)) continue;
    ++r.steps_checked;
    const long len = peripheral_step_length(group, path, i);
    const int d = std::min(depths[i], depths[i + 1]);
    const double lo = std::ldexp(1.0, d - 1), hi = std::ldexp(1.0, d + 1);
    const long pi = path.origin + static_cast<long>(i);
    if (len < lo) r.violations.push_back({"iii", pi, pi + 1, static_cast<double>(len), lo});
    if (len > hi) r.violations.push_back({"iii", pi, pi + 1, static_cast<double>(len), hi});
  }
  return r;
}

double ratio_upper() { return 2.0 / std::log(2.0) + 1.0; }

RatioReport relative_length_check(const RelativePath& projected, long a, long b, const CuspedGraph& graph) {
  RatioReport r;
  if (a > b) std::swap(a, b);
  const std::size_t ia = projected.index(a), ib = projected.index(b);
  if (ia == ib) {
    r.skipped = true;
    r.reason = "degenerate subpath";
    return r;
  }
  const GroupSpec& group = graph.group();
  const auto len = graph.cusped_length(group.multiply(group.inverse(projected.vertices[ia].element),
                                                      projected.vertices[ib].element));
  if (!len || !len->certified) {
    r.skipped = true;
    r.reason = "distance outside the truncation";
    return r;
  }
  double length = static_cast<double>(ib - ia);
  for (const auto& e : projected.excursions) {
    const std::size_t lo = std::max(e.begin, ia), hi = std::min(e.end, ib);
    if (hi <= lo) continue;
    // Non-monotone excursions are measured by their endpoints.
    const auto da = group.decompose(projected.vertices[lo].element, e.peripheral);
    const auto db = group.decompose(projected.vertices[hi].element, e.peripheral);
    const long ell_end = l1(da.coordinates, db.coordinates);
    length -= static_cast<double>(hi - lo);
    length += std::max(std::log(static_cast<double>(std::max(ell_end, 1L))), 1.0);
  }
  r.cusped_distance = static_cast<double>(len->value);
  r.relative_length = length;
  r.ratio = r.cusped_distance / length;
  r.within = r.ratio >= kRatioLower * (1 - 1e-12) && r.ratio <= ratio_upper() * (1 + 1e-12);
  return r;
}

}  // namespace reldom::geom
