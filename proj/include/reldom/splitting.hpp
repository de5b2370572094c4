#pragma once

#include <string>
#include <vector>

#include "reldom/matrix_lemmas.hpp"
#include "reldom/linalg.hpp"

namespace reldom::split {

using linalg::Matrix;
using linalg::Subspace;
using linalg::Vector;

// Finite window A_k, k in [k_min, k_max], of invertible d x d matrices.
class MatrixSequence {
 public:
  MatrixSequence(long k_min, std::vector<Matrix> matrices);
  static MatrixSequence constant(const Matrix& a, long k_min, long k_max);

  long k_min() const { return k_min_; }
  long k_max() const { return k_min_ + static_cast<long>(mats_.size()) - 1; }
  int dim() const { return dim_; }
  std::size_t length() const { return mats_.size(); }
  const Matrix& at(long k) const;
  const Matrix& inverse(long k) const;
  const Matrix& wedge2(long k) const;
  // [k, k + n - 1] lies in the window (n = 0 always does when k is in range
  // or just past it).
  bool covers(long k, long n) const;

 private:
  long k_min_;
  int dim_;
  std::vector<Matrix> mats_;
  std::vector<Matrix> inv_;
  std::vector<Matrix> wedge_;
};

// A(k, n) = A_{k+n-1} ... A_k.
Matrix partial_product(const MatrixSequence& seq, long k, long n);
linalg::TrackedProduct tracked_product(const MatrixSequence& seq, long k, long n);

// Spectral data of every A(k, n) inside the window.
class ProductTable {
 public:
  struct Entry {
    double log_s1 = 0.0;
    double log_s2 = 0.0;
    double log_sd = 0.0;
    Vector u1;  // top left singular vector
    Vector v1;  // top right singular vector; S_{d-1} = v1^perp
    linalg::ScaledMatrix product;
    bool gap_defined = false;
  };
  explicit ProductTable(const MatrixSequence& seq);
  const Entry& at(long k, long n) const;
  bool has(long k, long n) const;
  const MatrixSequence& sequence() const { return *seq_; }

 private:
  const MatrixSequence* seq_;
  std::vector<std::vector<Entry>> rows_;  // rows_[k - k_min][n]
};

// sin of the angle between unit vectors, accurate for small angles.
double line_distance(const Vector& a, const Vector& b);

struct ApproxSpaces {
  Subspace u_tilde;  // U_1(A(k-n, n))
  Subspace v;        // S_{d-1}(A(k, n))
};
ApproxSpaces approx_spaces(const MatrixSequence& seq, long k, long n);

struct AxiomConstants {
  double C = 1.0;
  double mu = 0.0;
  double mu_prime = 0.0;
  double r() const { return mu_prime / mu; }
  // (1/mu) log 3C > 1
  bool side_condition() const;
};

struct AxiomViolation {
  std::string axiom;  // "SVG-BG", "EC-s", "EC-u", "FI-back"
  long k = 0;
  long n = 0;
  long m = 0;
  double measured = 0.0;  // log scale for SVG-BG and FI-back
  double bound = 0.0;
  double margin = 0.0;
};

struct AxiomReport {
  std::vector<AxiomViolation> violations;
  std::size_t svg_checked = 0;
  std::size_t ec_checked = 0;
  std::size_t fi_checked = 0;
  bool holds() const { return violations.empty(); }
};

AxiomReport check_axioms(const ProductTable& table, const AxiomConstants& c);
AxiomReport check_axioms(const MatrixSequence& seq, const AxiomConstants& c);

class NotDominated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constants maximizing s_min among those the window certifies.
AxiomConstants fit_constants(const ProductTable& table);
AxiomConstants fit_constants(const MatrixSequence& seq);

double s_min(const AxiomConstants& c);

struct BlockLength {
  long N = 0;
  long ceiling = 0;          // ceil((2/mu) log 3C)
  bool within_ceiling = false;
};
// Smallest N >= 1 with e^{-N mu}/(1 - e^{-mu}) <= 1/(3C).
BlockLength choose_N(const AxiomConstants& c);

double error_radius(const AxiomConstants& c, long n);

struct SplittingCertificate {
  long k = 0;
  Subspace Eu;
  Subspace Es;
  long n_used = 0;
  double error_radius = 0.0;
  double gap = 0.0;
  double s_min_bound = 0.0;
  AxiomConstants constants;
  // d(A_k E(k), E(k+1)) when the window allows; negative otherwise.
  double equivariance_u = -1.0;
  double equivariance_s = -1.0;
};

SplittingCertificate splitting_at_depth(const MatrixSequence& seq, long k, long n, const AxiomConstants& c);
// Smallest depth whose error radius is <= target_error.
SplittingCertificate compute_splitting(const MatrixSequence& seq, long k, double target_error,
                                       const AxiomConstants& c);

// B_k = A_{-k-1}^T.
MatrixSequence reversed_dual(const MatrixSequence& seq);
// B_k = (A_{-k-1}^{-1})^T; kept for comparison.
MatrixSequence reversed_inverse_dual(const MatrixSequence& seq);

linalg::BoundReport verify_block_bounds(const MatrixSequence& seq, const AxiomConstants& c, long N, long n_range,
                                        long k = 0);

}  // namespace reldom::split
