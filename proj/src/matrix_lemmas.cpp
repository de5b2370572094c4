#include "reldom/matrix_lemmas.hpp"

#include <cmath>

namespace reldom::linalg {

bool BoundReport::holds() const {
  for (const auto& c : checks)
    if (!c.holds()) return false;
  return true;
}

bool BoundReport::skipped() const {
  for (const auto& c : checks)
    if (c.skipped) return true;
  return false;
}

BoundCheck upper_check(std::string name, double measured, double bound) {
  BoundCheck c;
  c.name = std::move(name);
  c.measured = measured;
  c.bound = bound;
  c.margin = bound * kSlack - measured;
  if (std::isinf(bound) && bound > 0) c.margin = INFINITY;
  return c;
}

BoundCheck lower_check(std::string name, double measured, double bound) {
  BoundCheck c;
  c.name = std::move(name);
  c.measured = measured;
  c.bound = bound;
  c.margin = measured * kSlack - bound;
  return c;
}

BoundCheck skipped_check(std::string name, std::string reason) {
  BoundCheck c;
  c.name = std::move(name);
  c.skipped = true;
  c.reason = std::move(reason);
  return c;
}

bool is_proximal(const Matrix& g, int p) {
  const Vector s = singular_values(g);
  return p >= 1 && p < s.size() && s(p - 1) >= (1.0 + kGapTolerance) * s(p);
}

BoundReport check_A4A5(const Matrix& a, const Matrix& b, int p) {
  BoundReport r;
  const Matrix ab = a * b, ba = b * a;
  if (!is_proximal(a, p) || !is_proximal(ab, p) || !is_proximal(ba, p)) {
    r.checks.push_back(skipped_check("A4", "proximality precondition unmet"));
    r.checks.push_back(skipped_check("A5", "proximality precondition unmet"));
    return r;
  }
  const SvdData sa = svd(a), sb = svd(b);
  const int d = static_cast<int>(a.rows());
  const double bound = (sb.sigmas(0) / sb.sigmas(d - 1)) * (sa.sigmas(p) / sa.sigmas(p - 1));
  const Subspace up_a = unstable_space(sa, p);
  r.checks.push_back(upper_check("A4", grassmann_distance(up_a, unstable_space(ab, p)), bound));
  r.checks.push_back(upper_check("A5", grassmann_distance(up_a.image(b), unstable_space(ba, p)), bound));
  return r;
}

BoundReport check_A6(const Matrix& a, const Subspace& plane, int p) {
  BoundReport r;
  if (plane.dim() != p) throw LinalgError("A6: subspace dimension must equal p");
  if (!is_proximal(a, p)) {
    r.checks.push_back(skipped_check("A6", "proximality precondition unmet"));
    return r;
  }
  const SvdData sa = svd(a);
  const int d = static_cast<int>(a.rows());
  const double s = minimal_gap(plane, stable_space(sa, d - p));
  if (s <= 1e-12) {
    r.checks.push_back(skipped_check("A6", "subspace meets the stable space"));
    return r;
  }
  const double bound = (sa.sigmas(p) / sa.sigmas(p - 1)) / s;
  r.checks.push_back(upper_check("A6", grassmann_distance(plane.image(a), unstable_space(sa, p)), bound));
  return r;
}

BoundReport check_A7(const Matrix& a, const Matrix& b, int p) {
  BoundReport r;
  const Matrix ab = a * b;
  if (!is_proximal(a, p) || !is_proximal(ab, p) || !is_proximal(b, p)) {
    r.checks.push_back(skipped_check("A7.lower", "proximality precondition unmet"));
    r.checks.push_back(skipped_check("A7.upper", "proximality precondition unmet"));
    return r;
  }
  const SvdData sa = svd(a), sb = svd(b), sab = svd(ab);
  const int d = static_cast<int>(a.rows());
  const double sin_alpha = minimal_gap(unstable_space(sb, p), stable_space(sa, d - p));
  if (sin_alpha <= 1e-12) {
    r.checks.push_back(skipped_check("A7.lower", "angle vanishes"));
    r.checks.push_back(skipped_check("A7.upper", "angle vanishes"));
    return r;
  }
  r.checks.push_back(lower_check("A7.lower", sab.sigmas(p - 1), sin_alpha * sa.sigmas(p - 1) * sb.sigmas(p - 1)));
  r.checks.push_back(upper_check("A7.upper", sab.sigmas(p), sa.sigmas(p) * sb.sigmas(p) / sin_alpha));
  return r;
}

double graph_operator_norm(const Subspace& u0, const Matrix& theta) {
  const Matrix m = u0.basis() + theta;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

BoundReport check_graph_gap(const Subspace& u0, const Subspace& v0, const Matrix& theta) {
  const int d = u0.ambient();
  if (u0.dim() + v0.dim() != d || v0.ambient() != d) throw LinalgError("graph gap: subspaces are not complementary");
  const double s0 = minimal_gap(u0, v0);
  if (s0 <= 1e-12) throw LinalgError("graph gap: subspaces are not complementary");
  if (theta.rows() != d || theta.cols() != u0.dim()) throw LinalgError("graph gap: operator has wrong shape");
  // Theta must take values in v0.
  if ((theta - v0.projector() * theta).norm() > 1e-9 * std::max(1.0, theta.norm()))
    throw LinalgError("graph gap: operator does not map into the complement");
  const Subspace u(Matrix(u0.basis() + theta));
  const double norm = graph_operator_norm(u0, theta);
  const double s = minimal_gap(u, v0);
  BoundReport r;
  r.checks.push_back(lower_check("graph_gap.lower", s, s0 / norm));
  r.checks.push_back(upper_check("graph_gap.upper", s, 1.0 / norm));
  return r;
}

DualIdentityReport dual_subspace_identities(const Matrix& g) {
  DualIdentityReport r;
  const int d = static_cast<int>(g.rows());
  const SvdData s = svd(g);
  if (s.sigmas(0) < (1.0 + kGapTolerance) * s.sigmas(1) || s.sigmas(d - 2) < (1.0 + kGapTolerance) * s.sigmas(d - 1)) {
    r.skipped = true;
    r.reason = "gap failure";
    return r;
  }
  const SvdData sd = svd(dual(g));
  r.unstable_residual = grassmann_distance(unstable_space(sd, 1), unstable_space(s, d - 1).orthogonal_complement());
  r.stable_residual = grassmann_distance(unstable_space(sd, d - 1), unstable_space(s, 1).orthogonal_complement());
  return r;
}

}  // namespace reldom::linalg
