#include "reldom/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

namespace reldom::linalg {

namespace {

void require_square(const Matrix& g) {
  if (g.rows() != g.cols() || g.rows() == 0) throw LinalgError("matrix must be square and nonempty");
}

std::vector<std::vector<int>> subsets(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == d - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

Subspace::Subspace(const Matrix& spanning) {
  if (spanning.cols() == 0 || spanning.rows() == 0) throw LinalgError("zero-dimensional subspace");
  Eigen::JacobiSVD<Matrix> s(spanning, Eigen::ComputeThinU);
  const auto& sv = s.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * sv(0)) throw LinalgError("spanning set is rank deficient");
  basis_ = s.matrixU().leftCols(spanning.cols());
}

Subspace Subspace::line(const Vector& v) {
  Matrix m = v;
  return Subspace(m);
}

Subspace Subspace::coordinate(int d, std::vector<int> axes) {
  Matrix m = Matrix::Zero(d, static_cast<int>(axes.size()));
  for (std::size_t j = 0; j < axes.size(); ++j) m(axes[j], static_cast<int>(j)) = 1.0;
  return Subspace(m);
}

Subspace Subspace::orthogonal_complement() const {
  const int d = ambient(), p = dim();
  if (p >= d) throw LinalgError("orthogonal complement of the whole space is zero-dimensional");
  Eigen::JacobiSVD<Matrix> s(basis_, Eigen::ComputeFullU);
  Subspace out;
  out.basis_ = s.matrixU().rightCols(d - p);
  return out;
}

Subspace Subspace::image(const Matrix& g) const { return Subspace(Matrix(g * basis_)); }

SvdData svd(const Matrix& g) {
  require_square(g);
  Eigen::JacobiSVD<Matrix> s(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = s.singularValues();
  if (!(sv(sv.size() - 1) > 1e-300) || sv(sv.size() - 1) < 1e-15 * sv(0) || !std::isfinite(sv(0))) {
    throw LinalgError("not invertible");
  }
  return SvdData{s.matrixU(), sv, s.matrixV().transpose()};
}

Vector singular_values(const Matrix& g) {
  require_square(g);
  return Eigen::JacobiSVD<Matrix>(g).singularValues();
}

double singular_gap(const Matrix& g, int i) {
  const Vector s = svd(g).sigmas;
  if (i < 1 || i >= s.size()) throw LinalgError("gap index out of range");
  return s(i - 1) / s(i);
}

namespace {
void require_gap(const Vector& s, int i) {
  if (i < 1 || i >= s.size()) throw LinalgError("subspace index out of range");
  const double ratio = s(i - 1) / s(i);
  if (ratio < 1.0 + kGapTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "subspace ill-defined: s_" << i << "/s_" << i + 1 << " = " << ratio;
    throw LinalgError(os.str());
  }
}
}  // namespace

Subspace unstable_space(const SvdData& s, int i) {
  require_gap(s.sigmas, i);
  return Subspace(Matrix(s.K.leftCols(i)));
}

Subspace stable_space(const SvdData& s, int i) {
  // S_i(g) = U_i(g^{-1}); g^{-1} = L^T A^{-1} K^T, whose top axes are the last rows of L.
  require_gap(s.sigmas, static_cast<int>(s.sigmas.size()) - i);
  const int d = static_cast<int>(s.sigmas.size());
  Matrix cols(d, i);
  for (int j = 0; j < i; ++j) cols.col(j) = s.L.row(d - 1 - j).transpose();
  return Subspace(cols);
}

Subspace unstable_space(const Matrix& g, int i) { return unstable_space(svd(g), i); }
Subspace stable_space(const Matrix& g, int i) { return stable_space(svd(g), i); }

Vector cartan_vector(const Matrix& g) { return svd(g).sigmas.array().log().matrix(); }

double symmetric_distance(const Matrix& g) { return cartan_vector(g).norm(); }

double grassmann_distance(const Subspace& a, const Subspace& b) {
  if (a.dim() == 0 || b.dim() == 0) throw LinalgError("zero-dimensional subspace");
  if (a.dim() != b.dim() || a.ambient() != b.ambient()) throw LinalgError("grassmann distance needs equal dimensions");
  Matrix r = a.basis() - b.basis() * (b.basis().transpose() * a.basis());
  if (r.cols() == 1) return std::min(1.0, r.norm());
  return std::min(1.0, Eigen::JacobiSVD<Matrix>(r).singularValues()(0));
}

double minimal_gap(const Subspace& u, const Subspace& v) {
  if (u.dim() == 0 || v.dim() == 0) throw LinalgError("zero-dimensional subspace");
  if (u.ambient() != v.ambient()) throw LinalgError("ambient dimensions differ");
  Matrix r = u.basis() - v.basis() * (v.basis().transpose() * u.basis());
  if (r.cols() == 1) return std::min(1.0, r.norm());
  const Vector s = Eigen::JacobiSVD<Matrix>(r).singularValues();
  return std::min(1.0, s(s.size() - 1));
}

Matrix dual(const Matrix& g) {
  require_square(g);
  return g.inverse().transpose();
}

Matrix exterior_power(const Matrix& g, int k) {
  require_square(g);
  const int d = static_cast<int>(g.rows());
  if (k < 1 || k > d) throw LinalgError("exterior power degree out of range");
  if (k == 1) return g;
  const auto idx = subsets(d, k);
  const int n = static_cast<int>(idx.size());
  Matrix out(n, n);
  Matrix minor(k, k);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) minor(i, j) = g(idx[r][i], idx[c][j]);
      out(r, c) = minor.determinant();
    }
  }
  return out;
}

ScaledMatrix ScaledMatrix::identity(int d) { return ScaledMatrix{Matrix::Identity(d, d), 0.0}; }

void ScaledMatrix::normalize() {
  const double n = m.cwiseAbs().maxCoeff();
  if (!(n > 0.0) || !std::isfinite(n)) throw LinalgError("product degenerated during renormalization");
  m /= n;
  log_scale += std::log(n);
}

ScaledMatrix ScaledMatrix::times(const Matrix& right) const {
  ScaledMatrix out{m * right, log_scale};
  out.normalize();
  return out;
}

ScaledMatrix ScaledMatrix::left_times(const Matrix& left) const {
  ScaledMatrix out{left * m, log_scale};
  out.normalize();
  return out;
}

ScaledMatrix ScaledMatrix::times(const ScaledMatrix& right) const {
  ScaledMatrix out{m * right.m, log_scale + right.log_scale};
  out.normalize();
  return out;
}

LogSvd log_svd(const ScaledMatrix& g) {
  Eigen::JacobiSVD<Matrix> s(g.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  LogSvd out;
  out.K = s.matrixU();
  out.L = s.matrixV().transpose();
  out.log_sigmas = s.singularValues().array().log().matrix();
  out.log_sigmas.array() += g.log_scale;
  return out;
}

TrackedProduct TrackedProduct::identity(int d) {
  const int w = d * (d - 1) / 2;
  return TrackedProduct{ScaledMatrix::identity(d), ScaledMatrix::identity(d), ScaledMatrix::identity(std::max(w, 1))};
}

TrackedProduct TrackedProduct::times(const Matrix& a, const Matrix& a_inv, const Matrix& a_wedge2) const {
  TrackedProduct out;
  out.g = g.times(a);
  out.inv = inv.left_times(a_inv);
  out.wedge2 = a_wedge2.size() ? wedge2.times(a_wedge2) : wedge2;
  return out;
}

TrackedProduct TrackedProduct::times(const TrackedProduct& right) const {
  return TrackedProduct{g.times(right.g), right.inv.times(inv), wedge2.times(right.wedge2)};
}

namespace {
// Top singular value and vectors of a scaled matrix.
double top_singular(const ScaledMatrix& s, Vector* left, Vector* right) {
  Eigen::JacobiSVD<Matrix> j(s.m, (left ? Eigen::ComputeFullU : 0) | (right ? Eigen::ComputeFullV : 0));
  if (left) *left = j.matrixU().col(0);
  if (right) *right = j.matrixV().col(0);
  return std::log(j.singularValues()(0)) + s.log_scale;
}
}  // namespace

TopSpectrum top_spectrum(const TrackedProduct& p) {
  const int d = static_cast<int>(p.g.m.rows());
  if (d < 2) throw LinalgError("top spectrum needs dimension at least 2");
  TopSpectrum t;
  t.log_s1 = top_singular(p.g, &t.u1, &t.v1);
  t.log_s2 = top_singular(p.wedge2, nullptr, nullptr) - t.log_s1;
  // g^{-1} = L^T A^{-1} K^T: its top right singular vector is the last column of K.
  Vector r;
  t.log_sd = -top_singular(p.inv, nullptr, &r);
  t.ud = r;
  return t;
}

double log_gap_of_power(const Matrix& g, int n) {
  require_square(g);
  if (n < 1) throw LinalgError("power must be positive");
  const int d = static_cast<int>(g.rows());
  ScaledMatrix base{g, 0.0}, base2{exterior_power(g, 2), 0.0};
  base.normalize();
  base2.normalize();
  ScaledMatrix acc = ScaledMatrix::identity(d), acc2 = ScaledMatrix::identity(static_cast<int>(base2.m.rows()));
  int e = n;
  while (e > 0) {
    if (e & 1) {
      acc = acc.times(base);
      acc2 = acc2.times(base2);
    }
    e >>= 1;
    if (e) {
      base = base.times(base);
      base2 = base2.times(base2);
    }
  }
  const double l1 = top_singular(acc, nullptr, nullptr);
  const double l12 = top_singular(acc2, nullptr, nullptr);
  return l1 - (l12 - l1);
}

ProximalityReport proximality(const Matrix& g, int n_max) {
  require_square(g);
  if (g.rows() < 2) throw LinalgError("proximality needs dimension at least 2");
  if (n_max < 2) throw LinalgError("n_max must be at least 2");
  svd(g);  // invertibility
  Eigen::EigenSolver<Matrix> es(g, false);
  std::vector<double> mod;
  for (int i = 0; i < es.eigenvalues().size(); ++i) mod.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(mod.rbegin(), mod.rend());
  ProximalityReport r;
  r.n = n_max;
  r.eigen_gap = std::log(mod[0] / mod[1]);
  const double gn = log_gap_of_power(g, n_max);
  r.sigma_gap = gn / n_max;
  r.sigma_increment = gn - log_gap_of_power(g, n_max - 1);
  r.agreement = std::abs(r.eigen_gap - r.sigma_gap);
  r.proximal = mod[0] / mod[1] >= 1.0 + kGapTolerance;
  return r;
}

Matrix rotation2(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

Matrix random_orthogonal(int d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_gaussian(d, d, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int i = 0; i < d; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

}  // namespace reldom::linalg
