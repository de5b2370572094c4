#include "reldom/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace reldom::split {

using linalg::LinalgError;
using linalg::TrackedProduct;

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string at_kn(long k, long n) { return " at (k, n) = (" + std::to_string(k) + ", " + std::to_string(n) + ")"; }
}  // namespace

MatrixSequence::MatrixSequence(long k_min, std::vector<Matrix> matrices) : k_min_(k_min), mats_(std::move(matrices)) {
  if (mats_.empty()) throw std::invalid_argument("matrix sequence window is empty");
  dim_ = static_cast<int>(mats_.front().rows());
  if (dim_ < 2) throw std::invalid_argument("matrix sequence needs dimension at least 2");
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    const Matrix& a = mats_[i];
    if (a.rows() != dim_ || a.cols() != dim_)
      throw std::invalid_argument("matrix " + std::to_string(k_min_ + static_cast<long>(i)) + " has the wrong shape");
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible())
      throw std::invalid_argument("matrix " + std::to_string(k_min_ + static_cast<long>(i)) + " is not invertible");
    inv_.push_back(lu.inverse());
    wedge_.push_back(linalg::exterior_power(a, 2));
  }
}

MatrixSequence MatrixSequence::constant(const Matrix& a, long k_min, long k_max) {
  if (k_max < k_min) throw std::invalid_argument("matrix sequence window is empty");
  return MatrixSequence(k_min, std::vector<Matrix>(static_cast<std::size_t>(k_max - k_min + 1), a));
}

const Matrix& MatrixSequence::at(long k) const {
  if (k < k_min() || k > k_max()) throw std::domain_error("index " + std::to_string(k) + " outside the window");
  return mats_[static_cast<std::size_t>(k - k_min_)];
}

const Matrix& MatrixSequence::inverse(long k) const {
  at(k);
  return inv_[static_cast<std::size_t>(k - k_min_)];
}

const Matrix& MatrixSequence::wedge2(long k) const {
  at(k);
  return wedge_[static_cast<std::size_t>(k - k_min_)];
}

bool MatrixSequence::covers(long k, long n) const {
  if (n < 0) return false;
  if (n == 0) return k >= k_min() && k <= k_max() + 1;
  return k >= k_min() && k + n - 1 <= k_max();
}

Matrix partial_product(const MatrixSequence& seq, long k, long n) {
  if (!seq.covers(k, n)) throw std::domain_error("product" + at_kn(k, n) + " leaves the window");
  Matrix p = Matrix::Identity(seq.dim(), seq.dim());
  for (long j = k; j < k + n; ++j) p = seq.at(j) * p;
  return p;
}

TrackedProduct tracked_product(const MatrixSequence& seq, long k, long n) {
  if (!seq.covers(k, n)) throw std::domain_error("product" + at_kn(k, n) + " leaves the window");
  // Right multiplication: start from the last factor.
  TrackedProduct p = TrackedProduct::identity(seq.dim());
  for (long j = k + n - 1; j >= k; --j) p = p.times(seq.at(j), seq.inverse(j), seq.wedge2(j));
  return p;
}

ProductTable::ProductTable(const MatrixSequence& seq) : seq_(&seq) {
  const long w = static_cast<long>(seq.length());
  const int d = seq.dim();
  rows_.resize(static_cast<std::size_t>(w));
  for (long i = 0; i < w; ++i) {
    rows_[i].resize(static_cast<std::size_t>(w - i + 1));
    Entry& e = rows_[i][0];
    e.u1 = Vector::Unit(d, 0);
    e.v1 = Vector::Unit(d, 0);
    e.product = linalg::ScaledMatrix::identity(d);
  }
  for (long end = 0; end < w; ++end) {
    TrackedProduct p = TrackedProduct::identity(d);
    for (long i = end; i >= 0; --i) {
      const long k = seq.k_min() + i;
      p = p.times(seq.at(k), seq.inverse(k), seq.wedge2(k));
      const auto t = linalg::top_spectrum(p);
      Entry& e = rows_[i][static_cast<std::size_t>(end - i + 1)];
      e.log_s1 = t.log_s1;
      e.log_s2 = t.log_s2;
      e.log_sd = t.log_sd;
      e.u1 = t.u1;
      e.v1 = t.v1;
      e.product = p.g;
      e.gap_defined = t.log_gap() > std::log1p(linalg::kGapTolerance);
    }
  }
}

bool ProductTable::has(long k, long n) const {
  return k >= seq_->k_min() && k <= seq_->k_max() && n >= 0 && k + n - 1 <= seq_->k_max();
}

const ProductTable::Entry& ProductTable::at(long k, long n) const {
  if (!has(k, n)) throw std::domain_error("product" + at_kn(k, n) + " leaves the window");
  return rows_[static_cast<std::size_t>(k - seq_->k_min())][static_cast<std::size_t>(n)];
}

double line_distance(const Vector& a, const Vector& b) {
  const Vector an = a.normalized(), bn = b.normalized();
  return std::min(1.0, (an - an.dot(bn) * bn).norm());
}

ApproxSpaces approx_spaces(const MatrixSequence& seq, long k, long n) {
  if (n < 1) throw std::domain_error("approximate spaces need n >= 1");
  const auto back = linalg::top_spectrum(tracked_product(seq, k - n, n));
  const auto fwd = linalg::top_spectrum(tracked_product(seq, k, n));
  const double tol = std::log1p(linalg::kGapTolerance);
  if (back.log_gap() <= tol) throw LinalgError("U_1 ill-defined" + at_kn(k - n, n));
  if (fwd.log_gap() <= tol) throw LinalgError("S_{d-1} ill-defined" + at_kn(k, n));
  return ApproxSpaces{back.U1(), fwd.S_dm1()};
}

bool AxiomConstants::side_condition() const { return mu > 0 && std::log(3.0 * C) / mu > 1.0; }

namespace {

// Raw data shared by the checker and the fitter.
struct AxiomData {
  std::vector<double> svg;  // max_k log(s2/s1)(k, n), index n
  std::vector<double> ec;   // max log EC distance at n
  std::vector<double> fi;   // min FI-back log ratio at m
};

template <typename SvgFn, typename EcFn, typename FiFn>
void scan_axioms(const ProductTable& t, SvgFn svg, EcFn ec, FiFn fi) {
  const MatrixSequence& s = t.sequence();
  const long lo = s.k_min(), hi = s.k_max();
  for (long k = lo; k <= hi; ++k)
    for (long n = 1; k + n - 1 <= hi; ++n) {
      const auto& e = t.at(k, n);
      svg(k, n, e.log_s2 - e.log_s1);
    }
  // EC, S_{d-1} part: products starting at k of lengths n and n + 1.
  for (long k = lo; k <= hi; ++k)
    for (long n = 1; k + n <= hi; ++n) {
      const auto& a = t.at(k, n);
      const auto& b = t.at(k, n + 1);
      const double d = (a.gap_defined && b.gap_defined) ? line_distance(a.v1, b.v1) : 1.0;
      ec("EC-s", k, n, d);
    }
  // EC, U_1 part: products ending at k - 1 of lengths n and n + 1.
  for (long end = lo; end <= hi; ++end)
    for (long n = 1; end - n >= lo; ++n) {
      const auto& a = t.at(end - n + 1, n);
      const auto& b = t.at(end - n, n + 1);
      const double d = (a.gap_defined && b.gap_defined) ? line_distance(a.u1, b.u1) : 1.0;
      ec("EC-u", end + 1, n, d);
    }
  for (long k = lo; k <= std::min(0L, hi); ++k)
    for (long n = 1; k + n - 1 <= hi; ++n)
      for (long m = 1; k - m >= lo; ++m) {
        const double v = t.at(k - m, n + m).log_s1 - t.at(k, n).log_s1 - t.at(k - m, m).log_s1;
        fi(k, n, m, v);
      }
}

AxiomData collect(const ProductTable& t) {
  AxiomData a;
  const std::size_t w = t.sequence().length();
  a.svg.assign(w + 1, kNegInf);
  a.ec.assign(w + 1, kNegInf);
  a.fi.assign(w + 1, std::numeric_limits<double>::infinity());
  scan_axioms(
      t, [&](long, long n, double v) { a.svg[n] = std::max(a.svg[n], v); },
      [&](const char*, long, long n, double d) { a.ec[n] = std::max(a.ec[n], d > 0 ? std::log(d) : kNegInf); },
      [&](long, long, long m, double v) { a.fi[m] = std::min(a.fi[m], v); });
  return a;
}

}  // namespace

AxiomReport check_axioms(const ProductTable& table, const AxiomConstants& c) {
  AxiomReport r;
  const double log_c = std::log(c.C);
  const double tol = std::log(linalg::kSlack);
  scan_axioms(
      table,
      [&](long k, long n, double v) {
        ++r.svg_checked;
        const double bound = log_c - n * c.mu;
        if (v > bound + tol) r.violations.push_back({"SVG-BG", k, n, 0, v, bound, bound + tol - v});
      },
      [&](const char* name, long k, long n, double d) {
        ++r.ec_checked;
        const double bound = c.C * std::exp(-n * c.mu);
        if (d > bound * linalg::kSlack) r.violations.push_back({name, k, n, 0, d, bound, bound * linalg::kSlack - d});
      },
      [&](long k, long n, long m, double v) {
        ++r.fi_checked;
        const double bound = -log_c - m * c.mu_prime;
        if (v < bound - tol) r.violations.push_back({"FI-back", k, n, m, v, bound, v - bound + tol});
      });
  return r;
}

AxiomReport check_axioms(const MatrixSequence& seq, const AxiomConstants& c) {
  return check_axioms(ProductTable(seq), c);
}

AxiomConstants fit_constants(const ProductTable& table) {
  const AxiomData a = collect(table);
  const std::size_t w = a.svg.size();
  double mu_hi = kNegInf;
  for (std::size_t n = 1; n < w; ++n)
    if (std::isfinite(a.svg[n])) mu_hi = std::max(mu_hi, -a.svg[n] / static_cast<double>(n));
  if (!(mu_hi > 1e-12)) throw NotDominated("not dominated on window");

  auto log_c_of = [&](double mu) {
    double v = 0.0;
    for (std::size_t n = 1; n < w; ++n) {
      const double m = std::max(a.svg[n], a.ec[n]);
      if (std::isfinite(m)) v = std::max(v, m + static_cast<double>(n) * mu);
    }
    return v;
  };
  auto mu_prime_of = [&](double log_c) {
    double v = 0.0;
    for (std::size_t m = 1; m < w; ++m)
      if (std::isfinite(a.fi[m])) v = std::max(v, (-a.fi[m] - log_c) / static_cast<double>(m));
    return v;
  };
  auto objective = [&](double mu) {
    const double lc = log_c_of(mu);
    const double mp = mu_prime_of(lc);
    const double r = mp / mu;
    return std::log(2.0 / 3.0) - 2.0 * r * std::log(3.0 * std::exp(1.0)) + 1.5 / std::expm1(-mu) -
           (1.0 + 2.0 * r) * lc;
  };

  constexpr int kGrid = 400;
  int best_i = kGrid;
  double best = objective(mu_hi);
  for (int i = 1; i < kGrid; ++i) {
    const double v = objective(mu_hi * i / kGrid);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  double best_mu = mu_hi * best_i / kGrid;
  // Golden-section refinement on the neighbouring grid cells.
  double lo = mu_hi * std::max(best_i - 1, 1) / kGrid * (best_i == 1 ? 0.5 : 1.0);
  double hi = mu_hi * std::min(best_i + 1, kGrid) / kGrid;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = objective(x1);
    }
  }
  if (f1 > best) {
    best = f1;
    best_mu = x1;
  }
  if (f2 > best) best_mu = x2;

  AxiomConstants c;
  c.mu = best_mu;
  const double lc = log_c_of(best_mu);
  c.C = std::exp(lc);
  c.mu_prime = mu_prime_of(lc);
  return c;
}

AxiomConstants fit_constants(const MatrixSequence& seq) { return fit_constants(ProductTable(seq)); }

double s_min(const AxiomConstants& c) {
  if (!(c.mu > 0)) throw std::domain_error("s_min needs mu > 0");
  if (c.C < 1.0) throw std::domain_error("s_min needs C >= 1");
  const double r = c.r();
  return 2.0 / 3.0 * std::pow(3.0 * std::exp(1.0), -2.0 * r) * std::exp(1.5 / std::expm1(-c.mu)) *
         std::pow(c.C, -(1.0 + 2.0 * r));
}

BlockLength choose_N(const AxiomConstants& c) {
  if (!(c.mu > 0)) throw std::domain_error("block length needs mu > 0");
  const double target = -std::log(3.0 * c.C);
  const double tail = -std::log(-std::expm1(-c.mu));
  auto ok = [&](long n) { return -static_cast<double>(n) * c.mu + tail <= target; };
  long n = std::max(1L, static_cast<long>(std::floor((tail - target) / c.mu)) - 1);
  while (n > 1 && ok(n - 1)) --n;
  while (!ok(n)) ++n;
  BlockLength b;
  b.N = n;
  b.ceiling = static_cast<long>(std::ceil(2.0 / c.mu * std::log(3.0 * c.C)));
  b.within_ceiling = n <= b.ceiling;
  return b;
}

double error_radius(const AxiomConstants& c, long n) {
  return c.C * std::exp(-static_cast<double>(n) * c.mu) / -std::expm1(-c.mu);
}

SplittingCertificate splitting_at_depth(const MatrixSequence& seq, long k, long n, const AxiomConstants& c) {
  if (n < 1) throw std::domain_error("splitting depth must be at least 1");
  if (!seq.covers(k - n, n) || !seq.covers(k, n))
    throw std::domain_error("window too short: depth " + std::to_string(n) + " around k = " + std::to_string(k));
  const ApproxSpaces sp = approx_spaces(seq, k, n);
  SplittingCertificate cert;
  cert.k = k;
  cert.Eu = sp.u_tilde;
  cert.Es = sp.v;
  cert.n_used = n;
  cert.error_radius = error_radius(c, n);
  cert.gap = linalg::minimal_gap(cert.Eu, cert.Es);
  cert.s_min_bound = s_min(c);
  cert.constants = c;
  if (seq.covers(k + 1 - n, n) && seq.covers(k + 1, n)) {
    try {
      const ApproxSpaces next = approx_spaces(seq, k + 1, n);
      const Matrix& a = seq.at(k);
      cert.equivariance_u = linalg::grassmann_distance(cert.Eu.image(a), next.u_tilde);
      cert.equivariance_s = linalg::grassmann_distance(cert.Es.image(a), next.v);
    } catch (const LinalgError&) {
    }
  }
  return cert;
}

SplittingCertificate compute_splitting(const MatrixSequence& seq, long k, double target_error,
                                       const AxiomConstants& c) {
  if (!(target_error > 0)) throw std::domain_error("target error must be positive");
  if (!(c.mu > 0)) throw std::domain_error("splitting needs mu > 0");
  long n = 1;
  while (error_radius(c, n) > target_error) {
    ++n;
    if (n > 1000000) break;
  }
  if (!seq.covers(k - n, n) || !seq.covers(k, n))
    throw std::domain_error("window too short for target error: need depth " + std::to_string(n) +
                            " on both sides of k = " + std::to_string(k));
  return splitting_at_depth(seq, k, n, c);
}

MatrixSequence reversed_dual(const MatrixSequence& seq) {
  std::vector<Matrix> out;
  for (long k = -seq.k_max() - 1; k <= -seq.k_min() - 1; ++k) out.push_back(seq.at(-k - 1).transpose());
  return MatrixSequence(-seq.k_max() - 1, std::move(out));
}

MatrixSequence reversed_inverse_dual(const MatrixSequence& seq) {
  std::vector<Matrix> out;
  for (long k = -seq.k_max() - 1; k <= -seq.k_min() - 1; ++k) out.push_back(seq.inverse(-k - 1).transpose());
  return MatrixSequence(-seq.k_max() - 1, std::move(out));
}

namespace {

struct Spectral {
  linalg::TopSpectrum top;
  Matrix product;  // normalized; scale dropped
  bool gap = false;
};

Spectral spectral(const MatrixSequence& seq, long k, long n) {
  const TrackedProduct p = tracked_product(seq, k, n);
  Spectral s;
  s.top = linalg::top_spectrum(p);
  s.product = p.g.m;
  s.gap = s.top.log_gap() > std::log1p(linalg::kGapTolerance);
  return s;
}

std::string tag(const char* name, long a, long b = -1) {
  std::string s = std::string(name) + " n=" + std::to_string(a);
  if (b >= 0) s += " m=" + std::to_string(b);
  return s;
}

}  // namespace

linalg::BoundReport verify_block_bounds(const MatrixSequence& seq, const AxiomConstants& c, long N, long n_range,
                                        long k) {
  using linalg::lower_check;
  using linalg::skipped_check;
  using linalg::upper_check;
  linalg::BoundReport rep;
  if (N < 1 || n_range < 1) throw std::domain_error("block bounds need N >= 1 and n_range >= 1");

  // Limit slow spaces approximated by the deepest forward product.
  auto slow = [&](long kk) -> std::optional<Subspace> {
    const long depth = seq.k_max() - kk + 1;
    if (kk < seq.k_min() || depth < 1) return std::nullopt;
    const Spectral s = spectral(seq, kk, depth);
    if (!s.gap) return std::nullopt;
    return s.top.S_dm1();
  };
  const double sigma_ratio_tol = 1e-10;

  // Expansion on U(k, m).
  for (long n = N; n <= N + n_range; ++n)
    for (long m = N; m <= N + n_range; ++m) {
      const std::string name = tag("expansion", n, m);
      if (!seq.covers(k, std::max(n, m))) {
        rep.checks.push_back(skipped_check(name, "outside window"));
        continue;
      }
      const Spectral sm = spectral(seq, k, m);
      const Spectral sn = spectral(seq, k, n);
      if (!sm.gap) {
        rep.checks.push_back(skipped_check(name, "U(k,m) ill-defined"));
        continue;
      }
      const double s1 = linalg::singular_values(sn.product)(0);
      rep.checks.push_back(lower_check(name, (sn.product * sm.top.v1).norm() / s1, 2.0 / 3.0));
    }

  const auto es_k = slow(k);
  const double fi_floor = 2.0 / 3.0 / c.C * std::exp(-static_cast<double>(N) * c.mu_prime);
  // Gap between A(k-N,N) U(k-N,m) and E^s(k).
  for (long m = N; m <= N + n_range; ++m) {
    const std::string name = tag("fast-slow gap", m);
    if (k > 0 || !es_k || !seq.covers(k - N, std::max(m, N))) {
      rep.checks.push_back(skipped_check(name, k > 0 ? "needs k <= 0" : "outside window"));
      continue;
    }
    const Spectral sm = spectral(seq, k - N, m);
    if (!sm.gap) {
      rep.checks.push_back(skipped_check(name, "U(k-N,m) ill-defined"));
      continue;
    }
    const Matrix aN = partial_product(seq, k - N, N);
    const Subspace w = Subspace::line(aN * sm.top.v1);
    rep.checks.push_back(lower_check(name, linalg::minimal_gap(w, *es_k), fi_floor));
  }

  // Contraction on E^s(k).
  for (long n = N; n <= N + n_range; ++n) {
    const std::string name = tag("slow contraction", n);
    if (k > 0 || !es_k || !seq.covers(k, n)) {
      rep.checks.push_back(skipped_check(name, k > 0 ? "needs k <= 0" : "outside window"));
      continue;
    }
    const Spectral sn = spectral(seq, k, n);
    const double s1 = linalg::singular_values(sn.product)(0);
    // operator norm on E^s(k); the restricted map is d x (d-1)
    const double restricted = Eigen::JacobiSVD<Matrix>(sn.product * es_k->basis()).singularValues()(0);
    rep.checks.push_back(
        upper_check(name, restricted / s1, 2.0 / 3.0 * std::exp(-static_cast<double>(n - N) * c.mu)));
  }

  // Graph operators Gamma_{-n} and the projection q_{-n}.
  const double gamma_bound = 9.0 / 4.0 * c.C * std::exp(static_cast<double>(N) * c.mu_prime);
  for (long n = 1; n <= n_range; ++n) {
    const std::string gname = tag("graph operator", n), qname = tag("slow projection", n);
    const long base = k - n * N;
    const long outer = k - (n + 1) * N;
    if (!seq.covers(outer, (n + 1) * N)) {
      rep.checks.push_back(skipped_check(gname, "outside window"));
      rep.checks.push_back(skipped_check(qname, "outside window"));
      continue;
    }
    const auto es = slow(base);
    const Spectral inner = spectral(seq, base, n * N);
    const Spectral deep = spectral(seq, outer, (n + 1) * N);
    if (!es || !inner.gap || !deep.gap) {
      rep.checks.push_back(skipped_check(gname, "subspace ill-defined"));
      rep.checks.push_back(skipped_check(qname, "subspace ill-defined"));
      continue;
    }
    const Subspace u = Subspace::line(inner.top.v1);
    const double sep = linalg::minimal_gap(u, *es);
    if (sep < sigma_ratio_tol) {
      rep.checks.push_back(skipped_check(gname, "decomposition ill-conditioned"));
      rep.checks.push_back(skipped_check(qname, "decomposition ill-conditioned"));
      continue;
    }
    const Vector w = partial_product(seq, outer, N) * deep.top.v1;
    Matrix frame(seq.dim(), seq.dim());
    frame.col(0) = u.basis().col(0);
    frame.rightCols(seq.dim() - 1) = es->basis();
    const Vector coeff = frame.fullPivLu().solve(w);
    if (std::abs(coeff(0)) < sigma_ratio_tol * w.norm()) {
      rep.checks.push_back(skipped_check(gname, "graph is vertical"));
    } else {
      const Vector tail = es->basis() * coeff.tail(seq.dim() - 1);
      rep.checks.push_back(upper_check(gname, tail.norm() / std::abs(coeff(0)), gamma_bound));
    }
    rep.checks.push_back(upper_check(qname, 1.0 / sep, 1.5));
  }

  // Gap of U~(k, nN) against E^s(k): iterated product bound and s_min.
  const double smin = s_min(c);
  double product = 1.0;
  for (long n = 1; n <= n_range; ++n) {
    if (n >= 2)
      product /= 1.0 + 1.5 * c.C * std::exp(static_cast<double>(N) * (c.mu_prime - (n - 2) * c.mu));
    const std::string pname = tag("block product", n), sname = tag("s_min floor", n);
    if (!es_k || !seq.covers(k - n * N, n * N)) {
      rep.checks.push_back(skipped_check(pname, "outside window"));
      rep.checks.push_back(skipped_check(sname, "outside window"));
      continue;
    }
    const Spectral back = spectral(seq, k - n * N, n * N);
    if (!back.gap) {
      rep.checks.push_back(skipped_check(pname, "U~(k,nN) ill-defined"));
      rep.checks.push_back(skipped_check(sname, "U~(k,nN) ill-defined"));
      continue;
    }
    const double gap = linalg::minimal_gap(back.top.U1(), *es_k);
    rep.checks.push_back(lower_check(pname, gap, fi_floor * product));
    rep.checks.push_back(lower_check(sname, gap, smin));
  }

  // Infinite product against its exponential bound (log scale).
  {
    double log_prod = 0.0;
    for (long j = 0; j < 100000; ++j) {
      const double a = 1.5 * c.C * std::exp(static_cast<double>(N) * (c.mu_prime - j * c.mu));
      log_prod += std::log1p(a);
      if (a < 1e-18) break;
    }
    const double log_bound = 1.5 * c.C * std::exp(static_cast<double>(N) * c.mu_prime) /
                             -std::expm1(-static_cast<double>(N) * c.mu);
    rep.checks.push_back(upper_check("infinite product", log_prod, log_bound));
  }
  return rep;
}

}  // namespace reldom::split
