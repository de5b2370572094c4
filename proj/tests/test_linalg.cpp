#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "reldom/matrix_lemmas.hpp"
#include "reldom/linalg.hpp"

using namespace reldom::linalg;

TEST_CASE("svd reconstructs the matrix and matches eigenvalue singular values") {
  std::mt19937_64 rng(1);
  for (int d = 2; d <= 6; ++d) {
    const Matrix g = oracle::gaussian(d, d, rng);
    const SvdData s = svd(g);
    CHECK((s.K * s.A() * s.L - g).norm() <= 1e-12 * g.norm());
    const Vector ref = oracle::singular_values(g);
    for (int i = 0; i < d; ++i) CHECK(s.sigmas(i) == doctest::Approx(ref(i)).epsilon(1e-7));
    for (int i = 0; i + 1 < d; ++i) CHECK(s.sigmas(i) >= s.sigmas(i + 1));
  }
}

TEST_CASE("unstable and stable spaces agree with the g g^T eigenvectors") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 5;
    const Matrix g = oracle::gaussian(d, d, rng);
    for (int p = 1; p < d; ++p) {
      const Vector s = oracle::singular_values(g);
      if (s(p - 1) < 1.01 * s(p)) continue;
      CHECK(oracle::subspace_distance(unstable_space(g, p).basis(), oracle::top_space(g, p)) < 1e-7);
      CHECK(oracle::subspace_distance(stable_space(g, p).basis(), oracle::bottom_space(g, p)) < 1e-7);
    }
  }
}

TEST_CASE("subspace distances match projector norms and principal angles") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 5;
    const int p = 1 + trial % (d - 1);
    const Matrix a = oracle::gaussian(d, p, rng), b = oracle::gaussian(d, p, rng), c = oracle::gaussian(d, d - p, rng);
    CHECK(grassmann_distance(Subspace(a), Subspace(b)) == doctest::Approx(oracle::subspace_distance(a, b)).epsilon(1e-9));
    CHECK(minimal_gap(Subspace(a), Subspace(c)) == doctest::Approx(oracle::minimal_gap(a, c)).epsilon(1e-7));
  }
  const Subspace e1 = Subspace::coordinate(2, {0});
  CHECK(grassmann_distance(e1, e1) == 0.0);
  CHECK(minimal_gap(e1, Subspace::coordinate(2, {1})) == doctest::Approx(1.0));
  CHECK(grassmann_distance(e1, Subspace::line((Vector(2) << 1, 1).finished())) ==
        doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("orthogonal complement and image") {
  std::mt19937_64 rng(4);
  const Subspace u(oracle::gaussian(5, 2, rng));
  const Subspace w = u.orthogonal_complement();
  CHECK(w.dim() == 3);
  CHECK((u.basis().transpose() * w.basis()).norm() < 1e-12);
  const Matrix g = oracle::gaussian(5, 5, rng);
  CHECK(oracle::subspace_distance(u.image(g).basis(), g * u.basis()) < 1e-10);
  CHECK_THROWS_AS(Subspace(Matrix::Zero(3, 1)), LinalgError);
}

TEST_CASE("second exterior power has singular values s_i s_j") {
  std::mt19937_64 rng(5);
  for (int d = 2; d <= 5; ++d) {
    const Matrix g = oracle::gaussian(d, d, rng);
    const Matrix w = exterior_power(g, 2);
    const Matrix ref = oracle::second_compound(g);
    CHECK((Eigen::JacobiSVD<Matrix>(w).singularValues() - Eigen::JacobiSVD<Matrix>(ref).singularValues()).norm() <
          1e-10 * ref.norm());
    if (d >= 3) {
      const Vector s = Eigen::JacobiSVD<Matrix>(g).singularValues();
      const Vector sw = Eigen::JacobiSVD<Matrix>(w).singularValues();
      CHECK(sw(0) == doctest::Approx(s(0) * s(1)).epsilon(1e-10));
      CHECK(sw(1) == doctest::Approx(s(0) * s(2)).epsilon(1e-10));
    }
    CHECK(exterior_power(g, d)(0, 0) == doctest::Approx(g.determinant()).epsilon(1e-10));
  }
  CHECK_THROWS_AS(exterior_power(Matrix::Identity(3, 3), 4), LinalgError);
}

TEST_CASE("dual is the inverse transpose and swaps the extreme spaces") {
  std::mt19937_64 rng(6);
  for (int d = 2; d <= 5; ++d) {
    const Matrix g = oracle::gaussian(d, d, rng);
    CHECK((dual(g) * g.transpose() - Matrix::Identity(d, d)).norm() < 1e-10);
    const auto r = dual_subspace_identities(g);
    REQUIRE_FALSE(r.skipped);
    CHECK(r.unstable_residual < 1e-8);
    CHECK(r.stable_residual < 1e-8);
  }
}

TEST_CASE("powers of a diagonal matrix") {
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 2;
  g(1, 1) = 0.5;
  for (int n : {1, 10, 100, 1000}) CHECK(log_gap_of_power(g, n) == doctest::Approx(n * std::log(4.0)).epsilon(1e-12));
  const auto p = proximality(g, 50);
  CHECK(p.proximal);
  CHECK(p.eigen_gap == doctest::Approx(std::log(4.0)));
  CHECK_FALSE(proximality(oracle::rotation(0.3), 50).proximal);
}

TEST_CASE("tracked products keep s1, s2 and s_d of long products") {
  std::mt19937_64 rng(7);
  const int d = 3;
  TrackedProduct t = TrackedProduct::identity(d);
  Matrix direct = Matrix::Identity(d, d), inverse = Matrix::Identity(d, d);
  for (int i = 0; i < 12; ++i) {
    const Matrix a = oracle::gaussian(d, d, rng);
    t = t.times(a, a.inverse(), exterior_power(a, 2));
    direct = direct * a;
    inverse = a.inverse() * inverse;
  }
  const TopSpectrum s = top_spectrum(t);
  const Vector ref = Eigen::JacobiSVD<Matrix>(direct).singularValues();
  CHECK(s.log_s1 == doctest::Approx(std::log(ref(0))).epsilon(1e-9));
  CHECK(s.log_s2 == doctest::Approx(std::log(ref(1))).epsilon(1e-9));
  // s_d is read off the inverse product, where it is the top value
  CHECK(s.log_sd == doctest::Approx(-std::log(Eigen::JacobiSVD<Matrix>(inverse).singularValues()(0))).epsilon(1e-9));
  CHECK(oracle::subspace_distance(s.U1().basis(), oracle::top_space(direct, 1)) < 1e-8);
}

TEST_CASE("scaled matrices multiply without overflow") {
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 1e10;
  g(1, 1) = 1e-10;
  ScaledMatrix s = ScaledMatrix::identity(2);
  for (int i = 0; i < 100; ++i) s = s.times(g);
  const LogSvd l = log_svd(s);
  CHECK(l.log_sigmas(0) == doctest::Approx(1000 * std::log(10.0)).epsilon(1e-12));
  CHECK(std::isfinite(s.log_scale));
}

TEST_CASE("random orthogonal matrices are orthogonal") {
  std::mt19937_64 rng(8);
  const Matrix q = random_orthogonal(4, rng);
  CHECK((q.transpose() * q - Matrix::Identity(4, 4)).norm() < 1e-12);
  CHECK((rotation2(0.7) - oracle::rotation(0.7)).norm() < 1e-15);
}
