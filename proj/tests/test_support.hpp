#ifndef PRUEFER_TEST_SUPPORT_HPP
#define PRUEFER_TEST_SUPPORT_HPP

#include "pruefer/jacobi.hpp"
#include "pruefer/numkernel.hpp"
#include "pruefer/symplectic.hpp"

#include <random>

namespace testutil {

using pruefer::Complex;
using pruefer::Matrix;

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const Matrix a = random_matrix(rng, n, n);
  return (a + a.adjoint()) / 2.0;
}

inline Matrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n, double shift = 0.5) {
  const Matrix a = random_matrix(rng, n, n);
  return a * a.adjoint() / static_cast<double>(n) +
         shift * Matrix::Identity(n, n);
}

// frame obtained by pushing (1;0) with a random group element
inline pruefer::LagrangianFrame random_frame(std::mt19937_64& rng, Eigen::Index l) {
  Matrix h = random_hermitian(rng, 2 * l);
  h /= std::max(1.0, h.norm());
  const Matrix g = pruefer::expm(pruefer::symplectic_form(l) * h);
  return act(pruefer::GroupElement(g), pruefer::LagrangianFrame::neumann(l));
}

inline pruefer::BlockJacobiOperator random_jacobi(std::mt19937_64& rng,
                                                  Eigen::Index l, int n,
                                                  bool positive_hopping = true) {
  std::vector<Matrix> v, t;
  for (int k = 0; k < n; ++k) v.push_back(random_hermitian(rng, l));
  for (int k = 0; k + 1 < n; ++k)
    t.push_back(positive_hopping ? random_spd(rng, l, 0.4)
                                 : random_matrix(rng, l, l) +
                                       2.0 * Matrix::Identity(l, l));
  return pruefer::BlockJacobiOperator(std::move(v), std::move(t));
}

}  // namespace testutil

#endif
