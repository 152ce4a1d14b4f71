#include "pruefer/numkernel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

namespace pruefer {

namespace {

double frob(const Matrix& a) { return a.norm(); }

}  // namespace

double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

Eigen::VectorXcd UnitaryEig::eigenvalues() const {
  Eigen::VectorXcd lambda(phases.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    lambda(k) = std::polar(1.0, phases(k));
  return lambda;
}

HermEig herm_eig(const Matrix& a, double tol_sym) {
  const double scale = std::max(1.0, frob(a));
  if (frob(a - a.adjoint()) > tol_sym * scale)
    throw NonHermitianError("herm_eig: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0);
  if (es.info() != Eigen::Success)
    throw Error("herm_eig: eigensolver failed to converge");
  return HermEig{es.eigenvalues(), es.eigenvectors()};
}

UnitaryEig unitary_eig(const Matrix& u, double tol_unit) {
  const Eigen::Index n = u.rows();
  const Matrix gram = u.adjoint() * u;
  if (frob(gram - Matrix::Identity(n, n)) > tol_unit * std::max<double>(1.0, n))
    throw NonUnitaryError("unitary_eig: matrix is not unitary within tolerance");

  // U = H + iK with commuting Hermitian H, K; diagonalize H, then resolve
  // clusters of H-eigenvalues by diagonalizing the compression of K.
  const Matrix h = (u + u.adjoint()) / 2.0;
  const Matrix k = (u - u.adjoint()) / Complex(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw Error("unitary_eig: eigensolver failed to converge");
  Matrix vecs = es.eigenvectors();
  const RealVector hval = es.eigenvalues();

  const double cluster_gap = 1e-7;
  Eigen::Index lo = 0;
  while (lo < n) {
    Eigen::Index hi = lo + 1;
    while (hi < n && hval(hi) - hval(hi - 1) < cluster_gap) ++hi;
    if (hi - lo > 1) {
      const Matrix sub = vecs.middleCols(lo, hi - lo);
      Eigen::SelfAdjointEigenSolver<Matrix> ces(
          ((sub.adjoint() * k * sub) + (sub.adjoint() * k * sub).adjoint()) / 2.0);
      vecs.middleCols(lo, hi - lo) = sub * ces.eigenvectors();
    }
    lo = hi;
  }

  RealVector phases(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex lambda = vecs.col(j).dot(u * vecs.col(j));
    phases(j) = wrap_phase(std::arg(lambda));
  }

  // ascending by phase
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index j = 0; j < n; ++j) order[j] = j;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return phases(a) < phases(b); });
  UnitaryEig out;
  out.phases.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.phases(j) = phases(order[j]);
    out.vectors.col(j) = vecs.col(order[j]);
  }
  return out;
}

Matrix polar_unitary(const Matrix& t, double tol_inv) {
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin <= tol_inv * std::max(1.0, smax))
    throw SingularError("polar_unitary: matrix is numerically singular");
  return svd.matrixU() * svd.matrixV().adjoint();
}

Matrix expm(const Matrix& a) {
  if (!a.allFinite()) throw Error("expm: non-finite entries");
  // exp(||A||) beyond double range cannot be represented
  if (a.cwiseAbs().rowwise().sum().maxCoeff() > 700.0)
    throw OverflowError("expm: norm too large, result would overflow");
  return a.exp();
}

Matrix sqrt_psd(const Matrix& a) {
  HermEig eig = herm_eig(a);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values.minCoeff() <= tol::psd * scale)
    throw NotPositiveError("sqrt_psd: matrix is not positive definite");
  return eig.vectors * eig.values.cwiseSqrt().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace pruefer
