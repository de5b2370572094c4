#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace oracle {

std::vector<int> PathHoroball::bfs(int source) const {
  std::vector<int> d(adj.size(), -1);
  std::deque<int> q{source};
  d[source] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int v : adj[u])
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
  }
  return d;
}

PathHoroball path_horoball(int width, int depth) {
  PathHoroball h;
  h.width = width;
  h.depth = depth;
  h.adj.resize(static_cast<std::size_t>(width) * (depth + 1));
  for (int k = 0; k <= depth; ++k) {
    const long span = 1L << k;
    for (int x = 0; x < width; ++x) {
      for (int y = x + 1; y < width && y - x <= span; ++y) {
        h.adj[h.id(x, k)].push_back(h.id(y, k));
        h.adj[h.id(y, k)].push_back(h.id(x, k));
      }
      if (k < depth) {
        h.adj[h.id(x, k)].push_back(h.id(x, k + 1));
        h.adj[h.id(x, k + 1)].push_back(h.id(x, k));
      }
    }
  }
  return h;
}

Vector singular_values(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.transpose() * g);
  Vector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<double>());
  return ev;
}

std::pair<double, double> singular_values_2x2(const Matrix& g) {
  const double f = g.squaredNorm();
  const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * det * det));
  const double s1 = std::sqrt((f + disc) / 2.0);
  // s1 * s2 = |det| keeps s2 accurate when s1 >> s2
  return {s1, std::fabs(det) / s1};
}

Matrix top_space(const Matrix& g, int i) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g * g.transpose());
  // eigenvalues ascend, so the top space is spanned by the last i columns
  return es.eigenvectors().rightCols(i);
}

Matrix bottom_space(const Matrix& g, int i) { return top_space(g.inverse(), i); }

Matrix orthonormal(const Matrix& spanning) {
  Eigen::HouseholderQR<Matrix> qr(spanning);
  return qr.householderQ() * Matrix::Identity(spanning.rows(), spanning.cols());
}

double subspace_distance(const Matrix& a, const Matrix& b) {
  const Matrix qa = orthonormal(a), qb = orthonormal(b);
  const Matrix diff = qa * qa.transpose() - qb * qb.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff);
  return std::min(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
}

double minimal_gap(const Matrix& u, const Matrix& v) {
  const Matrix qu = orthonormal(u), qv = orthonormal(v);
  // sup over unit u of |P_V u| is the largest cosine of the principal angles
  const double c = singular_values(qv.transpose() * qu)(0);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

Matrix second_compound(const Matrix& g) {
  const int d = static_cast<int>(g.rows());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) pairs.push_back({i, j});
  const int n = static_cast<int>(pairs.size());
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const auto [i, j] = pairs[r];
      const auto [k, l] = pairs[c];
      m(r, c) = g(i, k) * g(j, l) - g(i, l) * g(j, k);
    }
  return m;
}

double s_min(double C, double mu, double mu_prime) {
  const long double r = static_cast<long double>(mu_prime) / mu;
  const long double three_e = 3.0L * std::exp(1.0L);
  return static_cast<double>(2.0L / 3.0L * std::pow(three_e, -2.0L * r) *
                             std::exp(-1.5L / (1.0L - std::exp(-static_cast<long double>(mu)))) *
                             std::pow(static_cast<long double>(C), -(1.0L + 2.0L * r)));
}

std::vector<int> free_reduce(const std::vector<int>& word, const std::vector<int>& inverse_of) {
  std::vector<int> st;
  for (int x : word) {
    if (!st.empty() && inverse_of.at(st.back()) == x)
      st.pop_back();
    else
      st.push_back(x);
  }
  return st;
}

double hyperbolic_distance(const std::vector<double>& x, double s, const std::vector<double>& y, double t) {
  double e2 = (s - t) * (s - t);
  for (std::size_t i = 0; i < x.size(); ++i) e2 += (x[i] - y[i]) * (x[i] - y[i]);
  return std::acosh(1.0 + e2 / (2.0 * s * t));
}

Matrix rotation(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

Matrix gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

}  // namespace oracle
