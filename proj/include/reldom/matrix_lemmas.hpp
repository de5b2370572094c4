#pragma once

#include <string>
#include <vector>

#include "reldom/linalg.hpp"

namespace reldom::linalg {

// Multiplicative slack applied to every inequality check.
inline constexpr double kSlack = 1.0 + 1e-6;

// One measured inequality. For "measured <= bound" checks margin is
// bound*slack - measured; for lower bounds it is measured*slack - bound.
struct BoundCheck {
  std::string name;
  double bound = 0.0;
  double measured = 0.0;
  double margin = 0.0;
  bool skipped = false;
  std::string reason;
  bool holds() const { return skipped || margin >= 0.0; }
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  bool holds() const;
  bool skipped() const;
};

BoundCheck upper_check(std::string name, double measured, double bound);
BoundCheck lower_check(std::string name, double measured, double bound);
BoundCheck skipped_check(std::string name, std::string reason);

// P_p-proximal: s_p > s_{p+1} beyond the gap tolerance.
bool is_proximal(const Matrix& g, int p);

BoundReport check_A4A5(const Matrix& a, const Matrix& b, int p);
BoundReport check_A6(const Matrix& a, const Subspace& plane, int p);
BoundReport check_A7(const Matrix& a, const Matrix& b, int p);
// theta is a d x p matrix: coordinates of Theta(u0_j) for the basis of u0.
BoundReport check_graph_gap(const Subspace& u0, const Subspace& v0, const Matrix& theta);
// Norm of u0-coordinates -> u + Theta u.
double graph_operator_norm(const Subspace& u0, const Matrix& theta);

struct DualIdentityReport {
  bool skipped = false;
  std::string reason;
  double unstable_residual = 0.0;  // d(U_1(g*), U_{d-1}(g)^perp)
  double stable_residual = 0.0;    // d(U_{d-1}(g*), U_1(g)^perp)
};
DualIdentityReport dual_subspace_identities(const Matrix& g);

}  // namespace reldom::linalg
