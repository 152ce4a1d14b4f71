#include "pruefer/symplectic.hpp"

#include "pruefer/jacobi.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace pruefer;
using testutil::random_frame;
using testutil::random_hermitian;
using testutil::random_matrix;
using testutil::random_unitary;

TEST_CASE("symplectic form invariants") {
  const Matrix j = symplectic_form(3);
  CHECK((j.adjoint() + j).norm() == 0.0);
  CHECK((j * j + Matrix::Identity(6, 6)).norm() == 0.0);
}

TEST_CASE("stereo on reference frames") {
  CHECK((stereo(LagrangianFrame::neumann(2)) - Matrix::Identity(2, 2)).norm() <=
        1e-14);
  CHECK((stereo(LagrangianFrame::dirichlet(2)) + Matrix::Identity(2, 2)).norm() <=
        1e-14);

  for (double alpha : {0.0, 0.3, 1.2, -0.7}) {
    Matrix phi(2, 1);
    phi << std::cos(alpha), std::sin(alpha);
    const Matrix u = stereo(LagrangianFrame(phi));
    CHECK(std::abs(u(0, 0) - std::polar(1.0, -2.0 * alpha)) <= 1e-14);
  }
}

TEST_CASE("stereo is invariant under the frame equivalence") {
  std::mt19937_64 rng(71);
  for (int iter = 0; iter < 20; ++iter) {
    const Eigen::Index l = 1 + iter % 4;
    const LagrangianFrame phi = random_frame(rng, l);
    Matrix c = random_matrix(rng, l, l) + 2.0 * Matrix::Identity(l, l);
    const LagrangianFrame scaled(phi.matrix() * c, false);
    CHECK((stereo(phi) - stereo(scaled)).norm() <= 1e-10);
    const Matrix u = stereo(phi);
    CHECK((u.adjoint() * u - Matrix::Identity(l, l)).norm() <= 1e-10);
  }
}

TEST_CASE("stereo unitary on (A;B) frames with A*B Hermitian") {
  std::mt19937_64 rng(73);
  for (int iter = 0; iter < 20; ++iter) {
    const Eigen::Index l = 2 + iter % 3;
    const Matrix a = random_matrix(rng, l, l) + 3.0 * Matrix::Identity(l, l);
    const Matrix h = random_hermitian(rng, l);
    const Matrix b = a.adjoint().inverse() * h;  // A*B = H Hermitian
    Matrix phi(2 * l, l);
    phi.topRows(l) = a;
    phi.bottomRows(l) = b;
    const Matrix u = stereo(LagrangianFrame(phi));
    CHECK((u.adjoint() * u - Matrix::Identity(l, l)).norm() <= 1e-10);
  }
}

TEST_CASE("frame validation rejects non-Lagrangian input") {
  Matrix phi(2, 1);
  phi << 1.0, Complex(0.0, 1.0);
  CHECK_THROWS_AS(LagrangianFrame{phi}, NotLagrangianError);
}

TEST_CASE("intersection multiplicities") {
  std::mt19937_64 rng(79);
  const Matrix u = random_unitary(rng, 3);
  CHECK(intersection_multiplicity(u, u, 1) == 3);
  CHECK(intersection_multiplicity(-Matrix::Identity(3, 3), Matrix::Identity(3, 3),
                                  -1) == 3);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = std::polar(1.0, 0.1);
  d(1, 1) = -1.0;
  CHECK(intersection_multiplicity(d, Matrix::Identity(2, 2), -1, 1e-6) == 1);
}

TEST_CASE("intersection multiplicity equals kernel dimension") {
  std::mt19937_64 rng(83);
  for (int iter = 0; iter < 20; ++iter) {
    const Eigen::Index l = 3;
    const Matrix w = random_unitary(rng, l);
    const Matrix q = random_unitary(rng, l);
    Matrix d = Matrix::Zero(l, l);
    const int planted = 1 + static_cast<int>(rng() % 2);
    for (Eigen::Index k = 0; k < l; ++k)
      d(k, k) = (k < planted) ? Complex(1.0, 0.0) : std::polar(1.0, 0.5 + 0.4 * k);
    const Matrix u = w * q * d * q.adjoint();
    // rank route: singular values of W*U - 1
    Eigen::JacobiSVD<Matrix> svd(w.adjoint() * u - Matrix::Identity(l, l));
    int kernel = 0;
    for (Eigen::Index k = 0; k < l; ++k)
      if (svd.singularValues()(k) < 1e-8) ++kernel;
    CHECK(intersection_multiplicity(u, w, 1) == kernel);
    CHECK(kernel == planted);
  }
}

TEST_CASE("check_group") {
  CHECK(check_group(Matrix::Identity(4, 4)) == 0.0);

  std::mt19937_64 rng(89);
  const Matrix v = random_hermitian(rng, 2);
  const Matrix t = testutil::random_spd(rng, 2, 0.5);
  CHECK(check_group(transfer_matrix(v, t, 0.7).mat) <= 1e-12);

  const Matrix bad = random_matrix(rng, 4, 4) + 2.0 * Matrix::Identity(4, 4);
  CHECK(check_group(bad) > 0.1);
}

TEST_CASE("act on frames") {
  const LagrangianFrame base = LagrangianFrame::neumann(2);
  const GroupElement id(Matrix::Identity(4, 4));
  CHECK((stereo(act(id, base)) - stereo(base)).norm() <= 1e-12);

  const GroupElement j(symplectic_form(2));
  const LagrangianFrame flipped = act(j, base);
  CHECK((stereo(flipped) + Matrix::Identity(2, 2)).norm() <= 1e-12);

  // free Jacobi site at E = 1/2 pushes (1;0) to (E; 1)
  const GroupElement site =
      transfer_matrix(Matrix::Zero(1, 1), Matrix::Identity(1, 1), 0.5);
  const LagrangianFrame raw = act(site, LagrangianFrame::neumann(1), false);
  CHECK(std::abs(raw.upper()(0, 0) - Complex(0.5, 0.0)) <= 1e-15);
  CHECK(std::abs(raw.lower()(0, 0) - Complex(1.0, 0.0)) <= 1e-15);
}

TEST_CASE("act preserves the Lagrangian residual after renormalization") {
  std::mt19937_64 rng(97);
  for (int iter = 0; iter < 20; ++iter) {
    const Eigen::Index l = 1 + iter % 3;
    Matrix h = random_hermitian(rng, 2 * l);
    h /= std::max(1.0, h.norm());
    const GroupElement g(expm(symplectic_form(l) * h));
    const LagrangianFrame out = act(g, random_frame(rng, l));
    CHECK(out.lagrangian_residual() <= tol::lag);
    CHECK(std::abs(out.smallest_singular_value() - 1.0) <= 1e-10);
  }
}

TEST_CASE("act reports rank loss for singular maps") {
  Matrix sing = Matrix::Zero(2, 2);
  sing(1, 1) = 1.0;  // annihilates the (1; 0) frame
  CHECK_THROWS_AS(act(GroupElement(sing), LagrangianFrame::neumann(1)),
                  RankLossError);
}
