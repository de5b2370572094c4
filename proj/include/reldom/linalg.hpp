#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace reldom::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative gap floor below which U_i / S_i are treated as undefined.
inline constexpr double kGapTolerance = 1e-8;

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// g = K * diag(sigmas) * L with sigmas nonincreasing.
struct SvdData {
  Matrix K;
  Vector sigmas;
  Matrix L;
  Matrix A() const { return sigmas.asDiagonal(); }
};

// Orthonormal column basis of a subspace of R^d.
class Subspace {
 public:
  Subspace() = default;
  // Orthonormalizes the columns; throws if they are rank deficient.
  explicit Subspace(const Matrix& spanning);
  static Subspace line(const Vector& v);
  static Subspace coordinate(int d, std::vector<int> axes);

  const Matrix& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  int ambient() const { return static_cast<int>(basis_.rows()); }
  Matrix projector() const { return basis_ * basis_.transpose(); }
  Subspace orthogonal_complement() const;
  // Image under an invertible linear map.
  Subspace image(const Matrix& g) const;

 private:
  Matrix basis_;
};

SvdData svd(const Matrix& g);
// Singular values only, descending.
Vector singular_values(const Matrix& g);

double singular_gap(const Matrix& g, int i);
Subspace unstable_space(const Matrix& g, int i);
Subspace stable_space(const Matrix& g, int i);
// Same spaces from a precomputed decomposition.
Subspace unstable_space(const SvdData& s, int i);
Subspace stable_space(const SvdData& s, int i);

Vector cartan_vector(const Matrix& g);
double symmetric_distance(const Matrix& g);

double grassmann_distance(const Subspace& a, const Subspace& b);
double minimal_gap(const Subspace& u, const Subspace& v);

Matrix dual(const Matrix& g);
Matrix exterior_power(const Matrix& g, int k);

struct ProximalityReport {
  double eigen_gap = 0.0;        // log |lambda_1 / lambda_2|
  double sigma_gap = 0.0;        // (1/n) log (s1/s2)(g^n)
  double sigma_increment = 0.0;  // log ratio(g^n) - log ratio(g^(n-1))
  double agreement = 0.0;        // |eigen_gap - sigma_gap|
  int n = 0;
  bool proximal = false;
};
ProximalityReport proximality(const Matrix& g, int n_max);

// log(s1/s2)(g^n) with staged renormalization.
double log_gap_of_power(const Matrix& g, int n);

// A product kept as normalized matrix times exp(log_scale).
struct ScaledMatrix {
  Matrix m;
  double log_scale = 0.0;
  static ScaledMatrix identity(int d);
  ScaledMatrix times(const Matrix& right) const;       // this * right
  ScaledMatrix left_times(const Matrix& left) const;   // left * this
  ScaledMatrix times(const ScaledMatrix& right) const;
  void normalize();
  Matrix value() const { return m * std::exp(log_scale); }
};

// SVD of a scaled product; log singular values are absolute.
struct LogSvd {
  Matrix K;
  Vector log_sigmas;
  Matrix L;
};
LogSvd log_svd(const ScaledMatrix& g);

// Long products tracked together with their inverse and second exterior
// power so that s1, s2 and s_d keep full relative accuracy.
struct TrackedProduct {
  ScaledMatrix g;
  ScaledMatrix inv;
  ScaledMatrix wedge2;
  static TrackedProduct identity(int d);
  // this * A, given A^{-1} and wedge^2 A.
  TrackedProduct times(const Matrix& a, const Matrix& a_inv, const Matrix& a_wedge2) const;
  TrackedProduct times(const TrackedProduct& right) const;
};

struct TopSpectrum {
  double log_s1 = 0.0;
  double log_s2 = 0.0;
  double log_sd = 0.0;
  Vector u1;        // top left singular vector
  Vector v1;        // top right singular vector
  Vector ud;        // bottom left singular vector
  Subspace U1() const { return Subspace::line(u1); }
  Subspace S_dm1() const { return Subspace::line(v1).orthogonal_complement(); }
  Subspace U_dm1() const { return Subspace::line(ud).orthogonal_complement(); }
  double log_gap() const { return log_s1 - log_s2; }
};
TopSpectrum top_spectrum(const TrackedProduct& p);

Matrix rotation2(double theta);
Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng);
Matrix random_orthogonal(int d, std::mt19937_64& rng);

}  // namespace reldom::linalg
