#include "reldom/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <unordered_map>

#include "reldom/matrix_lemmas.hpp"
#include "reldom/parallel.hpp"

namespace reldom::dom {

namespace {

using geom::Word;

const double kLogSlack = std::log(linalg::kSlack);
const double kNaN = std::numeric_limits<double>::quiet_NaN();

struct HullPoint {
  double x;
  double y;
};

double cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Points sorted by x. Lower hull keeps right turns out, upper keeps left turns out.
std::vector<HullPoint> hull(const std::vector<HullPoint>& pts, bool lower) {
  std::vector<HullPoint> h;
  for (const auto& p : pts) {
    while (h.size() >= 2) {
      const double c = cross(h[h.size() - 2], h.back(), p);
      if (lower ? c <= 0 : c >= 0)
        h.pop_back();
      else
        break;
    }
    h.push_back(p);
  }
  return h;
}

// Slope and intercept of the last hull edge.
bool last_edge(const std::vector<HullPoint>& h, double& slope, double& intercept) {
  if (h.size() < 2) return false;
  const auto& a = h[h.size() - 2];
  const auto& b = h.back();
  slope = (b.y - a.y) / (b.x - a.x);
  intercept = a.y - slope * a.x;
  return true;
}

std::unordered_map<Word, std::size_t, geom::WordHash> index_of(const Ball& ball) {
  std::unordered_map<Word, std::size_t, geom::WordHash> m;
  m.reserve(ball.points.size() * 2);
  for (std::size_t i = 0; i < ball.points.size(); ++i) m.emplace(ball.points[i].element, i);
  return m;
}

double line_dist(const Vector& a, const Vector& b) { return split::line_distance(a.normalized(), b.normalized()); }

void sort_points(std::vector<BallPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const BallPoint& a, const BallPoint& b) {
    return a.length != b.length ? a.length < b.length : a.element < b.element;
  });
}

Ball finish_ball(const Representation& rep, std::vector<std::pair<Word, long>> elems, int radius,
                 LengthOracle oracle) {
  std::sort(elems.begin(), elems.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  Ball ball;
  ball.radius = radius;
  ball.length = std::move(oracle);
  ball.points.resize(elems.size());
  parallel_for(elems.size(), [&](std::size_t i) { ball.points[i] = make_point(rep, elems[i].first, elems[i].second); });
  sort_points(ball.points);
  return ball;
}

long norm1(const std::vector<long>& v) {
  long n = 0;
  for (long x : v) n += std::labs(x);
  return n;
}

}  // namespace

BallPoint make_point(const Representation& rep, const Word& element, long length) {
  BallPoint p;
  p.element = element;
  p.length = length;
  const int d = rep.dim();
  const linalg::TopSpectrum t = linalg::top_spectrum(rep.tracked(element));
  p.log_s1 = t.log_s1;
  p.log_s2 = t.log_s2;
  p.log_sd = t.log_sd;
  p.u1 = t.u1;
  p.ud = t.ud;
  if (d == 2) {
    p.cartan_norm = std::hypot(t.log_s1, t.log_sd);
  } else if (d == 3) {
    p.cartan_norm = std::sqrt(t.log_s1 * t.log_s1 + t.log_s2 * t.log_s2 + t.log_sd * t.log_sd);
  } else {
    p.cartan_norm = linalg::symmetric_distance(rep.evaluate(element));
  }
  return p;
}

Ball scan_ball(const Representation& rep, const geom::CuspedGraph& graph, int radius) {
  if (radius > graph.radius()) throw std::invalid_argument("scan radius exceeds the built cusped space");
  if (&rep.group() != &graph.group()) throw std::invalid_argument("representation and cusped space use different groups");
  std::vector<std::pair<Word, long>> elems;
  for (geom::VertexId v : graph.level_zero_vertices()) {
    const long d = graph.depth_from_identity(v);
    if (d >= 0 && d <= radius) elems.emplace_back(graph.element(v), d);
  }
  const geom::CuspedGraph* g = &graph;
  Ball b = finish_ball(rep, std::move(elems), radius, [g](const Word& w) -> std::optional<long> {
    const auto d = g->cusped_length(w);
    if (d && d->certified) return d->value;
    return std::nullopt;
  });
  b.group = &graph.group();
  return b;
}

Ball scan_plain_ball(const Representation& rep, int radius) {
  const geom::GroupSpec& group = rep.group();
  auto dist = std::make_shared<std::unordered_map<Word, long, geom::WordHash>>();
  std::deque<Word> queue{Word{}};
  (*dist)[Word{}] = 0;
  std::vector<std::pair<Word, long>> elems;
  while (!queue.empty()) {
    Word w = std::move(queue.front());
    queue.pop_front();
    const long d = dist->at(w);
    elems.emplace_back(w, d);
    if (d == radius) continue;
    for (int s = 0; s < group.generator_count(); ++s) {
      Word y = group.multiply(w, Word{s});
      if (dist->emplace(y, d + 1).second) queue.push_back(std::move(y));
    }
  }
  const geom::GroupSpec* gp = &group;
  Ball b = finish_ball(rep, std::move(elems), radius, [dist, gp](const Word& w) -> std::optional<long> {
    auto it = dist->find(gp->normal_form(w));
    if (it == dist->end()) return std::nullopt;
    return it->second;
  });
  b.group = gp;
  return b;
}

LowerFit check_lower_domination(const Ball& ball) {
  LowerFit fit;
  if (ball.points.size() < 20) fit.warning = "statistically meaningless: fewer than 20 ball elements";
  long lmax = 0;
  for (const auto& p : ball.points) lmax = std::max(lmax, p.length);
  fit.minima.assign(lmax + 1, kNaN);
  std::vector<std::size_t> argmin(lmax + 1, 0);
  for (std::size_t i = 0; i < ball.points.size(); ++i) {
    const auto& p = ball.points[i];
    double& m = fit.minima[p.length];
    if (std::isnan(m) || p.log_gap() < m) {
      m = p.log_gap();
      argmin[p.length] = i;
    }
  }
  std::vector<HullPoint> pts;
  for (long l = 0; l <= lmax; ++l)
    if (!std::isnan(fit.minima[l])) pts.push_back({static_cast<double>(l), fit.minima[l]});
  double slope = 0.0, intercept = 0.0;
  if (!last_edge(hull(pts, true), slope, intercept)) {
    fit.warning = "ball too small to fit";
    return fit;
  }
  fit.mu = slope;
  fit.C = std::exp(intercept);
  fit.ok = slope > 0.0;
  for (const auto& p : ball.points)
    if (p.log_gap() + kLogSlack < intercept + slope * static_cast<double>(p.length)) ++fit.violations;
  if (!fit.ok) {
    for (long l = 1; l <= lmax; ++l) {
      if (std::isnan(fit.minima[l])) continue;
      const auto& p = ball.points[argmin[l]];
      fit.witnesses.push_back({ball.group ? ball.group->format_word(p.element) : "", p.length, p.log_gap()});
    }
  }
  return fit;
}

UpperFit check_upper_domination(const Ball& ball, const Representation& rep) {
  UpperFit fit;
  if (ball.points.size() < 20) fit.warning = "statistically meaningless: fewer than 20 ball elements";
  double norm_max = 0.0;
  for (int s = 0; s < rep.group().generator_count(); ++s)
    norm_max = std::max(norm_max, linalg::singular_values(rep.image(s))(0));
  fit.a_priori_mu = std::log(norm_max);
  long lmax = 0;
  for (const auto& p : ball.points) lmax = std::max(lmax, p.length);
  fit.maxima.assign(lmax + 1, kNaN);
  for (const auto& p : ball.points) {
    // 2 log s1(g) and 2 log s1(g^{-1}) both bounded gives s1/sd <= C e^{mu l}.
    const double y = std::max(2.0 * p.log_s1, -2.0 * p.log_sd);
    double& m = fit.maxima[p.length];
    if (std::isnan(m) || y > m) m = y;
  }
  std::vector<HullPoint> pts;
  for (long l = 0; l <= lmax; ++l)
    if (!std::isnan(fit.maxima[l])) pts.push_back({static_cast<double>(l), fit.maxima[l]});
  double slope = 0.0, intercept = 0.0;
  if (!last_edge(hull(pts, false), slope, intercept)) {
    fit.warning = "ball too small to fit";
    return fit;
  }
  fit.mu = slope;
  fit.C = std::exp(intercept);
  fit.ok = slope > 0.0;
  for (const auto& p : ball.points)
    if (p.log_s1 - p.log_sd > intercept + slope * static_cast<double>(p.length) + kLogSlack) ++fit.violations;
  return fit;
}

QiReport check_orbit_qi(const Ball& ball, const DominationConstants& c, int dim) {
  QiReport r;
  r.worst_upper_margin = std::numeric_limits<double>::infinity();
  r.worst_lower_margin = std::numeric_limits<double>::infinity();
  const double root = std::sqrt(static_cast<double>(dim)) / 2.0;
  for (const auto& p : ball.points) {
    const double l = static_cast<double>(p.length);
    const double upper = root * (std::log(c.C_upper) + c.mu_upper * l);
    const double lower = 0.5 * std::log(c.C_lower) + 0.5 * c.mu_lower * l;
    const auto u = linalg::upper_check("qi-upper", p.cartan_norm, upper);
    const auto w = linalg::lower_check("qi-lower", p.cartan_norm, lower);
    r.worst_upper_margin = std::min(r.worst_upper_margin, u.margin);
    r.worst_lower_margin = std::min(r.worst_lower_margin, w.margin);
    if (!u.holds() || !w.holds()) ++r.violations;
    ++r.checked;
  }
  return r;
}

long ell_zero(const DominationConstants& c) {
  if (!(c.mu_lower > 0.0) || !(c.C_lower > 0.0)) throw std::domain_error("domination constants unfitted");
  const double x = -std::log(c.C_lower) / c.mu_lower;
  if (x < 0.0) return 0;
  return static_cast<long>(std::floor(x)) + 1;
}

LimitSample sample_limit_set(const Ball& ball, const Representation& rep, const DominationConstants& c) {
  LimitSample s;
  s.ell0 = ell_zero(c);
  s.sphere = ball.radius - 1;
  if (s.sphere < s.ell0 || s.sphere < 1)
    throw std::runtime_error("radius too small for l0 = " + std::to_string(s.ell0));
  const auto idx = index_of(ball);
  const geom::GroupSpec& group = rep.group();
  s.worst_invariance_margin = std::numeric_limits<double>::infinity();
  std::vector<double> eta_ratio(group.generator_count());
  for (int e = 0; e < group.generator_count(); ++e) {
    const Vector sv = linalg::singular_values(rep.image(e));
    eta_ratio[e] = sv(0) / sv(sv.size() - 1);
  }
  for (const auto& p : ball.points) {
    if (p.length != s.sphere) continue;
    s.points.push_back({p.u1, p.ud, p.length});
    for (int e = 0; e < group.generator_count(); ++e) {
      const auto it = idx.find(group.multiply(Word{e}, p.element));
      if (it == idx.end()) continue;
      const Vector moved = rep.image(e) * p.u1;
      const double measured = line_dist(moved, ball.points[it->second].u1);
      const double bound =
          eta_ratio[e] * std::exp(-std::log(c.C_lower) - c.mu_lower * static_cast<double>(p.length));
      const auto chk = linalg::upper_check("invariance", measured, bound);
      s.worst_invariance_margin = std::min(s.worst_invariance_margin, chk.margin);
      ++s.invariance_checked;
      if (!chk.holds()) ++s.invariance_violations;
    }
  }
  return s;
}

WordSumConstants wordsum_constants(const DominationConstants& c) {
  if (!(c.mu_upper > 0.0)) throw std::domain_error("upper domination constants unfitted");
  WordSumConstants w;
  w.nu = c.mu_lower / (2.0 * c.mu_upper);
  w.c0 = (std::log(c.C_upper) - std::log(c.C_lower)) / c.mu_upper;
  w.c1 = 1.0 / c.mu_upper;
  return w;
}

PairReport check_wordsum_inequality(const Ball& ball, const DominationConstants& c, std::size_t budget,
                                    std::mt19937_64& rng) {
  if (ball.group == nullptr) throw std::invalid_argument("ball has no group attached");
  PairReport r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  const WordSumConstants w = wordsum_constants(c);
  const long l0 = ell_zero(c);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < ball.points.size(); ++i)
    if (ball.points[i].length >= l0) pool.push_back(i);
  if (pool.size() < 2) {
    r.note = "fewer than two ball elements beyond l0";
    return r;
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs(budget);
  for (auto& pr : pairs) {
    pr.first = pool[pick(rng)];
    pr.second = pool[pick(rng)];
  }
  std::vector<double> margin(budget);
  const geom::GroupSpec& group = *ball.group;
  parallel_for(budget, [&](std::size_t i) {
    const auto& g = ball.points[pairs[i].first];
    const auto& h = ball.points[pairs[i].second];
    const auto len = ball.length(group.multiply(group.inverse(g.element), h.element));
    // beyond the scan we only know d_c > R
    const double dc = len ? static_cast<double>(*len) : static_cast<double>(ball.radius + 1);
    const double dist = line_dist(g.u1, h.u1);
    const double rhs = dist > 0.0 ? w.nu * static_cast<double>(g.length + h.length) - w.c0 - w.c1 * std::fabs(std::log(dist))
                                  : -std::numeric_limits<double>::infinity();
    margin[i] = linalg::lower_check("wordsum", dc, rhs).margin;
  });
  for (double m : margin) {
    ++r.eligible;
    r.worst_margin = std::min(r.worst_margin, m);
    if (m < 0.0) ++r.violations;
  }
  return r;
}

NorthSouthReport check_north_south(const Ball& ball, const Representation& rep, const DominationConstants& c,
                                   const LimitSample& limits, double epsilon, double epsilon_prime,
                                   std::size_t budget, std::mt19937_64& rng) {
  if (!(epsilon > 0.0) || !(epsilon_prime > 0.0)) throw std::domain_error("epsilon and epsilon' must be positive");
  NorthSouthReport r;
  r.epsilon = epsilon;
  r.epsilon_prime = epsilon_prime;
  r.sin_delta = std::min(epsilon, 1.0);
  r.worst_margin = std::numeric_limits<double>::infinity();
  const long l0 = ell_zero(c);
  const double x = (-std::log(c.C_lower) - std::log(epsilon_prime * r.sin_delta)) / c.mu_lower;
  r.ell = std::max(l0, x < 0.0 ? 0L : static_cast<long>(std::floor(x)) + 1);
  const auto idx = index_of(ball);
  const geom::GroupSpec& group = rep.group();
  std::vector<std::size_t> etas;
  for (std::size_t i = 0; i < ball.points.size(); ++i)
    if (ball.points[i].length > r.ell) etas.push_back(i);
  if (etas.empty() || limits.points.empty()) {
    r.inconclusive = true;
    r.note = "no element with |eta|_c > " + std::to_string(r.ell) + " in the ball; need radius >= " +
             std::to_string(r.ell + 1);
    return r;
  }
  std::uniform_int_distribution<std::size_t> pick_eta(0, etas.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_xi(0, limits.points.size() - 1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs(budget);
  for (auto& pr : pairs) {
    pr.first = etas[pick_eta(rng)];
    pr.second = pick_xi(rng);
  }
  std::vector<double> margin(budget, std::numeric_limits<double>::quiet_NaN());
  parallel_for(budget, [&](std::size_t i) {
    const auto& eta = ball.points[pairs[i].first];
    const Vector& xi = limits.points[pairs[i].second].line;
    const auto inv = idx.find(group.inverse(eta.element));
    if (inv == idx.end()) return;
    if (line_dist(xi, ball.points[inv->second].u1) <= epsilon) return;
    const Vector moved = rep.tracked(eta.element).g.m * xi;
    margin[i] = linalg::upper_check("north-south", line_dist(moved, eta.u1), epsilon_prime).margin;
  });
  for (double m : margin) {
    if (std::isnan(m)) continue;
    ++r.eligible;
    r.worst_margin = std::min(r.worst_margin, m);
    if (m < 0.0) ++r.violations;
  }
  if (r.eligible == 0) r.note = "no sampled pair met the hypotheses";
  return r;
}

PeripheralReport check_peripheral_conditions(const Representation& rep, const geom::CuspedGraph& graph,
                                             const Ball& ball, std::size_t sample_budget, std::mt19937_64& rng,
                                             long probe_length) {
  const geom::GroupSpec& group = rep.group();
  if (probe_length < 4) throw std::invalid_argument("probe length must be at least 4");
  const int d = rep.dim();
  PeripheralReport out;
  out.delta0 = kNaN;
  for (int p = 0; p < group.peripheral_count(); ++p) {
    PeripheralRecord rec;
    rec.peripheral = p;
    rec.probe_length = probe_length;
    rec.log_C_prime = kNaN;

    // (a) upper fit of log s1 over peripheral elements
    std::map<long, double> best{{0, 0.0}};
    for (const auto& pt : ball.points) {
      if (pt.element.empty() || !group.coset_id(pt.element, p).empty()) continue;
      auto it = best.find(pt.length);
      if (it == best.end())
        best.emplace(pt.length, pt.log_s1);
      else
        it->second = std::max(it->second, pt.log_s1);
    }
    if (best.size() < 2) throw std::runtime_error("peripheral too small");
    std::vector<HullPoint> pts;
    for (const auto& [l, y] : best) pts.push_back({static_cast<double>(l), y});
    double slope = 0.0, intercept = 0.0;
    last_edge(hull(pts, false), slope, intercept);
    rec.mu1 = slope;
    rec.C1 = std::exp(intercept);

    // (b) U_1 and U_{d-1} along rays of P
    const int rank = group.peripheral_rank(p);
    std::vector<std::vector<long>> dirs;
    for (int i = 0; i < rank; ++i)
      for (int s : {1, -1}) {
        std::vector<long> e(rank, 0);
        e[i] = s;
        dirs.push_back(e);
        for (int j = i + 1; j < rank; ++j)
          for (int t : {1, -1}) {
            auto f = e;
            f[j] = t;
            dirs.push_back(f);
          }
      }
    std::vector<std::vector<linalg::TopSpectrum>> rays;
    for (const auto& e : dirs) {
      const linalg::TrackedProduct step = rep.tracked(group.peripheral_letters(p, e));
      linalg::TrackedProduct acc = linalg::TrackedProduct::identity(d);
      std::vector<linalg::TopSpectrum> ray;
      ray.reserve(probe_length);
      for (long n = 1; n <= probe_length; ++n) {
        acc = acc.times(step);
        ray.push_back(linalg::top_spectrum(acc));
      }
      rays.push_back(std::move(ray));
    }
    rec.xi = rays.front().back().u1;
    rec.xi_star_normal = rays.front().back().ud;
    for (const auto& ray : rays)
      for (long n = probe_length / 4; n <= probe_length; ++n) {
        const auto& t = ray[n - 1];
        const double dev = std::max(line_dist(t.u1, rec.xi), line_dist(t.ud, rec.xi_star_normal));
        double& slot = n < probe_length / 2 ? rec.head_deviation : rec.tail_deviation;
        slot = std::max(slot, dev);
      }
    rec.unique_limits = rec.tail_deviation <= rec.head_deviation * linalg::kSlack + linalg::kGapTolerance &&
                        rec.tail_deviation < 0.1;
    out.records.push_back(std::move(rec));
  }
  if (out.records.empty()) return out;

  // (c) quadratic gaps along excursions of sampled projected geodesics
  const std::size_t paths = std::min<std::size_t>(sample_budget, 200);
  const auto samples = geom::sample_geodesics(graph, paths, rng);
  for (const auto& s : samples) {
    const auto& v = s.projected.vertices;
    if (v.empty()) continue;
    const Word& last = v.back().element;
    for (const auto& ex : s.projected.excursions) {
      auto& rec = out.records[ex.peripheral];
      auto consider = [&](const Word& eta, const Word& element) {
        const long l = norm1(group.decompose(eta, ex.peripheral).coordinates);
        if (l == 0) return;
        const auto t = linalg::top_spectrum(rep.tracked(element));
        const double val = t.log_gap() - 2.0 * std::log(static_cast<double>(l));
        if (std::isnan(rec.log_C_prime) || val < rec.log_C_prime) rec.log_C_prime = val;
        ++rec.quadratic_samples;
      };
      const Word start_inv = group.inverse(v[ex.begin].element);
      for (std::size_t j = ex.begin + 1; j <= ex.end; ++j)
        consider(group.multiply(start_inv, v[j].element), v[j].element);
      for (std::size_t j = ex.begin; j < ex.end; ++j) {
        const Word inv = group.inverse(v[j].element);
        consider(group.multiply(inv, v[ex.end].element), group.multiply(inv, last));
      }
    }
  }

  // (d) transversality floor over geodesic concatenations g h
  // points are sorted by length: upto[l] = number of points of length <= l
  std::vector<std::size_t> upto(ball.radius + 1, 0);
  for (const auto& pt : ball.points)
    if (pt.length <= ball.radius) ++upto[pt.length];
  for (int l = 1; l <= ball.radius; ++l) upto[l] += upto[l - 1];
  const std::size_t first = upto[0];  // skip the identity
  if (ball.radius < 2 || upto[ball.radius - 1] <= first) return out;
  std::uniform_int_distribution<std::size_t> pick_g(first, upto[ball.radius - 1] - 1);
  for (std::size_t n = 0; n < sample_budget; ++n) {
    const auto& g = ball.points[pick_g(rng)];
    std::uniform_int_distribution<std::size_t> pick_h(first, upto[ball.radius - g.length] - 1);
    const auto& h = ball.points[pick_h(rng)];
    const Word gh = group.multiply(g.element, h.element);
    const auto len = ball.length(gh);
    if (!len || *len != g.length + h.length) continue;
    const linalg::TrackedProduct tg = rep.tracked(g.element);
    const linalg::TrackedProduct th = rep.tracked(h.element);
    for (const auto& P : out.records)
      for (const auto& Q : out.records) {
        if (P.peripheral == Q.peripheral && group.coset_id(gh, P.peripheral).empty()) continue;
        const Vector line = (tg.inv.m * P.xi).normalized();
        const Vector normal = (th.inv.m.transpose() * Q.xi_star_normal).normalized();
        const double sine = std::fabs(line.dot(normal));
        if (std::isnan(out.delta0) || sine < out.delta0) out.delta0 = sine;
        ++out.transversality_samples;
      }
  }
  return out;
}

EcConstants derived_EC_constants(const DominationConstants& c, double upsilon_lower, double upsilon_upper,
                                 double C_prime) {
  if (!(C_prime > 0.0)) throw std::domain_error("C' must be positive");
  if (!(c.C_lower > 0.0) || !(c.C_upper > 0.0) || !(c.mu_lower > 0.0) || !(c.mu_upper > 0.0) ||
      !(upsilon_lower > 0.0) || !(upsilon_upper > 0.0))
    throw std::domain_error("EC constants need positive inputs");
  EcConstants e;
  e.C2 = c.C_upper / c.C_lower * std::exp(6.0 * c.mu_upper * upsilon_upper + c.mu_lower * upsilon_lower);
  e.mu2 = c.mu_upper * upsilon_upper;
  e.mu0 = c.mu_lower * upsilon_lower;
  e.C3 = std::pow(2.0, 1.0 + upsilon_lower) * c.C_upper * std::exp(c.mu_upper) / C_prime;
  e.C = std::max(e.C2, e.C3);
  e.mu = e.mu0 / 2.0 * std::min(1.0, std::log(2.0) / (upsilon_lower * e.mu2));
  return e;
}

split::MatrixSequence word_to_matrix_sequence(const Representation& rep, const geom::RelativePath& path) {
  const geom::GroupSpec& group = rep.group();
  if (path.first_parameter() > 0 || path.last_parameter() < 0) throw std::invalid_argument("path does not contain 0");
  if (!group.normal_form(path.at(0).element).empty()) throw std::invalid_argument("path not based at id");
  if (path.size() < 2) throw std::invalid_argument("path needs at least two vertices");
  std::vector<Matrix> mats;
  mats.reserve(path.size() - 1);
  for (long k = path.first_parameter(); k < path.last_parameter(); ++k)
    mats.push_back(rep.evaluate(group.multiply(group.inverse(path.at(k + 1).element), path.at(k).element)));
  return split::MatrixSequence(path.first_parameter(), std::move(mats));
}

PipelineReport run_pipeline(const Representation& rep, const geom::CuspedGraph& graph, std::size_t count,
                            std::mt19937_64& rng) {
  const geom::GroupSpec& group = rep.group();
  PipelineReport out;
  const auto geos = geom::sample_geodesics(graph, 2 * count, rng);
  out.samples.resize(count);
  parallel_for(count, [&](std::size_t i) {
    PipelineSample& s = out.samples[i];
    const geom::RelativePath back = geom::reparametrize(group, geos[2 * i].projected);
    const geom::RelativePath fwd = geom::reparametrize(group, geos[2 * i + 1].projected);
    if (!back.vertices.front().element.empty() || !fwd.vertices.front().element.empty()) {
      s.reason = "reparametrized path drops the identity";
      return;
    }
    geom::RelativePath alpha;
    for (std::size_t j = back.size(); j-- > 1;) alpha.vertices.push_back(back.vertices[j]);
    for (const auto& v : fwd.vertices) alpha.vertices.push_back(v);
    alpha.origin = -static_cast<long>(back.size() - 1);
    if (back.size() < 2 || fwd.size() < 2) {
      s.reason = "path too short";
      return;
    }
    const split::MatrixSequence seq = word_to_matrix_sequence(rep, alpha);
    split::AxiomConstants c;
    try {
      c = split::fit_constants(seq);
    } catch (const split::NotDominated& e) {
      s.reason = e.what();
      return;
    }
    const long n = std::min(-seq.k_min(), seq.k_max() + 1);
    const auto cert = split::splitting_at_depth(seq, 0, n, c);
    s.certified = true;
    s.depth = n;
    s.gap = cert.gap;
    s.s_min = cert.s_min_bound;
    s.error_radius = cert.error_radius;
  });
  for (const auto& s : out.samples) {
    if (!s.certified) continue;
    ++out.certified;
    if (!linalg::lower_check("pipeline", s.gap, s.s_min - 2.0 * s.error_radius).holds()) ++out.violations;
  }
  return out;
}

bool VerifierReport::passed() const {
  if (!lower.ok || !upper.ok || lower.violations || upper.violations || qi.violations) return false;
  if (limits.invariance_violations || wordsum.violations || north_south.violations || pipeline.violations)
    return false;
  for (const auto& r : peripheral.records)
    if (!r.unique_limits) return false;
  return true;
}

bool VerifierReport::inconclusive() const { return !limits_available || north_south.inconclusive; }

VerifierReport verify_dominated(const Representation& rep, const geom::CuspedGraph& graph,
                                const VerifierOptions& options, std::mt19937_64& rng) {
  VerifierReport r;
  const Ball ball = scan_ball(rep, graph, options.radius);
  r.ball_size = ball.points.size();
  r.lower = check_lower_domination(ball);
  r.upper = check_upper_domination(ball, rep);
  r.constants = {r.lower.C, r.lower.mu, r.upper.C, r.upper.mu};
  if (!r.lower.ok || !r.upper.ok) {
    r.notes.push_back("domination fit failed; dependent checks skipped");
    return r;
  }
  r.qi = check_orbit_qi(ball, r.constants, rep.dim());
  try {
    r.limits = sample_limit_set(ball, rep, r.constants);
    r.limits_available = true;
  } catch (const std::runtime_error& e) {
    r.notes.push_back(e.what());
  }
  r.wordsum = check_wordsum_inequality(ball, r.constants, options.sample_budget, rng);
  if (rep.group().peripheral_count() > 0)
    r.peripheral = check_peripheral_conditions(rep, graph, ball, options.sample_budget, rng, options.probe_length);
  if (r.limits_available)
    r.north_south = check_north_south(ball, rep, r.constants, r.limits, options.epsilon, options.epsilon_prime,
                                      options.sample_budget, rng);
  r.pipeline = run_pipeline(rep, graph, options.pipeline_samples, rng);
  return r;
}

namespace {

report::Json nullable(double x) { return std::isfinite(x) ? report::Json(x) : report::Json(nullptr); }

report::Json series(const std::vector<double>& v) {
  report::Json a = report::Json::array();
  for (double x : v) a.push_back(nullable(x));
  return a;
}

}  // namespace

report::Json to_json(const VerifierReport& r) {
  using report::Json;
  Json j;
  j["ball_size"] = r.ball_size;
  Json lower;
  lower["ref"] = "lower domination (D-): s1/s2 >= C_lower exp(mu_lower |g|_c)";
  lower["ok"] = r.lower.ok;
  lower["C_lower"] = nullable(r.lower.C);
  lower["mu_lower"] = nullable(r.lower.mu);
  lower["minima"] = series(r.lower.minima);
  lower["warning"] = r.lower.warning;
  Json upper;
  upper["ref"] = "upper domination (D+): s1/sd <= C_upper exp(mu_upper |g|_c)";
  upper["ok"] = r.upper.ok;
  upper["C_upper"] = nullable(r.upper.C);
  upper["mu_upper"] = nullable(r.upper.mu);
  upper["a_priori_mu"] = nullable(r.upper.a_priori_mu);
  upper["maxima"] = series(r.upper.maxima);
  upper["warning"] = r.upper.warning;
  j["fits"] = {{"lower", lower}, {"upper", upper}};

  Json violations = Json::array();
  auto add = [&](const char* check, std::size_t n) {
    if (n) violations.push_back({{"check", check}, {"count", n}});
  };
  add("lower-domination", r.lower.violations);
  add("upper-domination", r.upper.violations);
  add("orbit-qi", r.qi.violations);
  add("limit-invariance", r.limits.invariance_violations);
  add("wordsum", r.wordsum.violations);
  add("north-south", r.north_south.violations);
  add("pipeline", r.pipeline.violations);
  for (const auto& w : r.lower.witnesses)
    violations.push_back({{"check", "lower-domination-witness"}, {"element", w.element}, {"length", w.length},
                          {"log_gap", nullable(w.value)}});
  j["violations"] = violations;

  j["qi"] = {{"ref", "orbit map quasi-isometric embedding"},
             {"checked", r.qi.checked},
             {"violations", r.qi.violations},
             {"worst_upper_margin", nullable(r.qi.worst_upper_margin)},
             {"worst_lower_margin", nullable(r.qi.worst_lower_margin)}};

  Json per = Json::array();
  for (const auto& p : r.peripheral.records)
    per.push_back({{"peripheral", p.peripheral},
                   {"C1", nullable(p.C1)},
                   {"mu1", nullable(p.mu1)},
                   {"xi", report::to_json(p.xi)},
                   {"xi_star_normal", report::to_json(p.xi_star_normal)},
                   {"probe_length", p.probe_length},
                   {"head_deviation", nullable(p.head_deviation)},
                   {"tail_deviation", nullable(p.tail_deviation)},
                   {"unique_limits", p.unique_limits},
                   {"log_C_prime", nullable(p.log_C_prime)},
                   {"quadratic_samples", p.quadratic_samples}});
  j["peripheral"] = {{"ref", "well-behaved peripheral images"},
                     {"records", per},
                     {"delta0", nullable(r.peripheral.delta0)},
                     {"transversality_samples", r.peripheral.transversality_samples}};

  j["limit_sample_size"] = r.limits.points.size();
  j["limits"] = {{"ref", "relative limit set sample and invariance"},
                 {"available", r.limits_available},
                 {"ell0", r.limits.ell0},
                 {"sphere", r.limits.sphere},
                 {"invariance_checked", r.limits.invariance_checked},
                 {"invariance_violations", r.limits.invariance_violations},
                 {"worst_invariance_margin", nullable(r.limits.worst_invariance_margin)}};
  j["wordsum"] = {{"ref", "word-sum comparison inequality"},
                  {"eligible", r.wordsum.eligible},
                  {"violations", r.wordsum.violations},
                  {"worst_margin", nullable(r.wordsum.worst_margin)},
                  {"note", r.wordsum.note}};
  j["north_south"] = {{"ref", "north-south dynamics"},
                      {"epsilon", r.north_south.epsilon},
                      {"epsilon_prime", r.north_south.epsilon_prime},
                      {"sin_delta", r.north_south.sin_delta},
                      {"ell", r.north_south.ell},
                      {"eligible", r.north_south.eligible},
                      {"violations", r.north_south.violations},
                      {"worst_margin", nullable(r.north_south.worst_margin)},
                      {"inconclusive", r.north_south.inconclusive},
                      {"note", r.north_south.note}};
  Json samples = Json::array();
  for (const auto& s : r.pipeline.samples)
    samples.push_back({{"certified", s.certified},
                       {"reason", s.reason},
                       {"depth", s.depth},
                       {"gap", nullable(s.gap)},
                       {"s_min", nullable(s.s_min)},
                       {"error_radius", nullable(s.error_radius)}});
  j["pipeline"] = {{"ref", "matrix sequences of quasigeodesics through id"},
                   {"certified", r.pipeline.certified},
                   {"violations", r.pipeline.violations},
                   {"samples", samples}};
  j["notes"] = r.notes;
  j["passed"] = r.passed();
  j["inconclusive"] = r.inconclusive();
  return j;
}

}  // namespace reldom::dom
