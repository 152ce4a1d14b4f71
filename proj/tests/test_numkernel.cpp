#include "pruefer/numkernel.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace pruefer;
using testutil::random_hermitian;
using testutil::random_matrix;
using testutil::random_spd;
using testutil::random_unitary;

TEST_CASE("herm_eig basic spectra") {
  CHECK(herm_eig(Matrix::Identity(2, 2)).values.isApproxToConstant(1.0));

  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const HermEig eig = herm_eig(sx);
  CHECK(eig.values(0) == doctest::Approx(-1.0));
  CHECK(eig.values(1) == doctest::Approx(1.0));
}

TEST_CASE("herm_eig reconstructs a planted decomposition") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 20; ++iter) {
    const Eigen::Index n = 2 + iter % 5;
    const Matrix q = random_unitary(rng, n);
    Eigen::VectorXd d(n);
    std::normal_distribution<double> g;
    for (Eigen::Index k = 0; k < n; ++k) d(k) = 3.0 * g(rng);
    const Matrix a = q * d.asDiagonal() * q.adjoint();
    const HermEig eig = herm_eig((a + a.adjoint()) / 2.0);
    const Matrix back =
        eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
    CHECK((back - a).norm() <= 1e-12 * std::max(1.0, a.norm()));
    // invariants: trace and eigenvector unitarity
    CHECK(std::abs(eig.values.sum() - a.trace().real()) <=
          1e-10 * std::max(1.0, a.norm()));
    CHECK((eig.vectors.adjoint() * eig.vectors - Matrix::Identity(n, n)).norm() <=
          1e-10);
  }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  CHECK_THROWS_AS(herm_eig(a), NonHermitianError);
}

TEST_CASE("unitary_eig principal branch and ordering") {
  Matrix m1(1, 1);
  m1 << -1.0;
  CHECK(unitary_eig(m1).phases(0) == doctest::Approx(M_PI));

  Matrix d(2, 2);
  d << Complex(0, 1), 0, 0, Complex(0, -1);
  const UnitaryEig eig = unitary_eig(d);
  CHECK(eig.phases(0) == doctest::Approx(-M_PI / 2));
  CHECK(eig.phases(1) == doctest::Approx(M_PI / 2));
}

TEST_CASE("unitary_eig matches the Hermitian generator") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 20; ++iter) {
    const Eigen::Index n = 2 + iter % 4;
    Matrix k = random_hermitian(rng, n);
    const double nk = herm_eig(k).values.cwiseAbs().maxCoeff();
    k *= (0.9 * M_PI / std::max(1.0, nk));  // keep phases inside (-pi, pi)
    const Matrix u = expm(Complex(0, 1) * k);
    const UnitaryEig ue = unitary_eig(u);
    Eigen::VectorXd kv = herm_eig(k).values;
    for (Eigen::Index j = 0; j < n; ++j)
      CHECK(ue.phases(j) == doctest::Approx(kv(j)).epsilon(1e-9));
    // eigenvector residual and unitarity
    for (Eigen::Index j = 0; j < n; ++j)
      CHECK((u * ue.vectors.col(j) -
             std::polar(1.0, ue.phases(j)) * ue.vectors.col(j))
                .norm() <= 1e-9);
    CHECK((ue.vectors.adjoint() * ue.vectors - Matrix::Identity(n, n)).norm() <=
          1e-9);
    // product of eigenvalues = det(U)
    Complex prod(1.0, 0.0);
    for (Eigen::Index j = 0; j < n; ++j) prod *= std::polar(1.0, ue.phases(j));
    CHECK(std::abs(prod - u.determinant()) <= 1e-10);
  }
}

TEST_CASE("unitary_eig keeps degenerate clusters orthonormal") {
  std::mt19937_64 rng(23);
  const Matrix q = random_unitary(rng, 3);
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = std::polar(1.0, 0.7);
  d(1, 1) = std::polar(1.0, 0.7);
  d(2, 2) = std::polar(1.0, -0.7);
  const Matrix u = q * d * q.adjoint();
  const UnitaryEig ue = unitary_eig(u);
  CHECK((ue.vectors.adjoint() * ue.vectors - Matrix::Identity(3, 3)).norm() <= 1e-9);
  for (Eigen::Index j = 0; j < 3; ++j)
    CHECK((u * ue.vectors.col(j) -
           std::polar(1.0, ue.phases(j)) * ue.vectors.col(j))
              .norm() <= 1e-9);
}

TEST_CASE("unitary_eig rejects non-unitary input") {
  CHECK_THROWS_AS(unitary_eig(2.0 * Matrix::Identity(2, 2)), NonUnitaryError);
}

TEST_CASE("polar_unitary") {
  std::mt19937_64 rng(31);
  const Matrix pd = random_spd(rng, 3, 1.0);
  CHECK((polar_unitary(pd) - Matrix::Identity(3, 3)).norm() <= 1e-10);

  Matrix m1(1, 1);
  m1 << -1.0;
  CHECK((polar_unitary(m1) + Matrix::Identity(1, 1)).norm() <= 1e-12);

  Matrix t(2, 2);
  t << 0, 2, -3, 0;
  Matrix g_ref(2, 2);
  g_ref << 0, 1, -1, 0;
  CHECK((polar_unitary(t) - g_ref).norm() <= 1e-12);

  for (int iter = 0; iter < 10; ++iter) {
    const Matrix m = random_matrix(rng, 3, 3) + 2.0 * Matrix::Identity(3, 3);
    const Matrix g = polar_unitary(m);
    CHECK((g * sqrt_psd(m.adjoint() * m) - m).norm() <= 1e-10 * m.norm());
    CHECK((g.adjoint() * g - Matrix::Identity(3, 3)).norm() <= 1e-10);
  }

  CHECK_THROWS_AS(polar_unitary(Matrix::Zero(2, 2)), SingularError);
}

TEST_CASE("expm special values") {
  CHECK((expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);

  Matrix rot(2, 2);
  rot << 0, M_PI / 2, -M_PI / 2, 0;
  Matrix rot_ref(2, 2);
  rot_ref << 0, 1, -1, 0;
  CHECK((expm(rot) - rot_ref).norm() <= 1e-14);

  // parabolic transfer identities
  Matrix jneg(2, 2);
  jneg << Complex(1, M_PI), 1, -1, Complex(-1, M_PI);
  Matrix nref(2, 2);
  nref << -2, -1, 1, 0;
  CHECK((expm(jneg) - nref).norm() <= 1e-12);

  Matrix jpos(2, 2);
  jpos << 1, -1, 1, -1;
  Matrix pref(2, 2);
  pref << 2, -1, 1, 0;
  CHECK((expm(jpos) - pref).norm() <= 1e-12);
}

TEST_CASE("expm inverse identity") {
  std::mt19937_64 rng(37);
  for (int iter = 0; iter < 10; ++iter) {
    Matrix a = random_matrix(rng, 4, 4);
    a *= 10.0 / std::max(1.0, a.norm());
    CHECK((expm(a) * expm(-a) - Matrix::Identity(4, 4)).norm() <= 1e-10);
  }
}

TEST_CASE("expm overflow guard") {
  CHECK_THROWS_AS(expm(1e3 * Matrix::Identity(2, 2)), OverflowError);
}

TEST_CASE("sqrt_psd") {
  Matrix d(2, 2);
  d << 4, 0, 0, 9;
  Matrix d_ref(2, 2);
  d_ref << 2, 0, 0, 3;
  CHECK((sqrt_psd(d) - d_ref).norm() <= 1e-12);
  CHECK((sqrt_psd(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() <= 1e-14);

  std::mt19937_64 rng(41);
  for (int iter = 0; iter < 10; ++iter) {
    const Matrix a = random_spd(rng, 4, 0.3);
    const Matrix r = sqrt_psd(a);
    CHECK((r * r - a).norm() <= 1e-12 * std::max(1.0, a.norm()));
    CHECK((r - r.adjoint()).norm() <= 1e-12);
  }

  Matrix neg(1, 1);
  neg << -1.0;
  CHECK_THROWS_AS(sqrt_psd(neg), NotPositiveError);
}
