#include "pruefer/symplectic.hpp"

#include <cmath>

namespace pruefer {

Matrix symplectic_form(Eigen::Index l) {
  Matrix j = Matrix::Zero(2 * l, 2 * l);
  j.topRightCorner(l, l) = -Matrix::Identity(l, l);
  j.bottomLeftCorner(l, l) = Matrix::Identity(l, l);
  return j;
}

LagrangianFrame::LagrangianFrame(Matrix phi, bool validate) : phi_(std::move(phi)) {
  if (phi_.rows() != 2 * phi_.cols() || phi_.cols() < 1)
    throw NotLagrangianError("LagrangianFrame: expected a 2L x L matrix");
  if (validate) {
    const double scale = std::max(1.0, phi_.squaredNorm());
    if (lagrangian_residual() > tol::lag * scale)
      throw NotLagrangianError("LagrangianFrame: Phi*J Phi does not vanish");
    Eigen::JacobiSVD<Matrix> svd(phi_);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= tol::rank * std::max(1.0, s(0)))
      throw NotLagrangianError("LagrangianFrame: rank deficient");
  }
}

double LagrangianFrame::lagrangian_residual() const {
  const Matrix j = symplectic_form(fiber());
  return (phi_.adjoint() * j * phi_).norm();
}

double LagrangianFrame::smallest_singular_value() const {
  Eigen::JacobiSVD<Matrix> svd(phi_);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

LagrangianFrame LagrangianFrame::orthonormalized() const {
  Eigen::HouseholderQR<Matrix> qr(phi_);
  Matrix q = qr.householderQ() * Matrix::Identity(2 * fiber(), fiber());
  return LagrangianFrame(std::move(q), false);
}

LagrangianFrame LagrangianFrame::dirichlet(Eigen::Index l) {
  Matrix phi = Matrix::Zero(2 * l, l);
  phi.bottomRows(l) = Matrix::Identity(l, l);
  return LagrangianFrame(std::move(phi), false);
}

LagrangianFrame LagrangianFrame::neumann(Eigen::Index l) {
  Matrix phi = Matrix::Zero(2 * l, l);
  phi.topRows(l) = Matrix::Identity(l, l);
  return LagrangianFrame(std::move(phi), false);
}

double check_group(const Matrix& t) {
  const Matrix j = symplectic_form(t.rows() / 2);
  return (t.adjoint() * j * t - j).norm();
}

Matrix stereo(const LagrangianFrame& phi) {
  const Complex i(0.0, 1.0);
  const Matrix num = phi.upper() - i * phi.lower();
  const Matrix den = phi.upper() + i * phi.lower();
  // den is unitary for orthonormal Lagrangian representatives, so a sharp
  // singularity here means the input was not a frame
  Eigen::PartialPivLU<Matrix> lu(den.transpose());
  if (!(lu.rcond() > 1e-14))
    throw SingularDenominatorError("stereo: denominator numerically singular");
  return lu.solve(num.transpose()).transpose();  // num * den^{-1}
}

int intersection_multiplicity(const Matrix& u, const Matrix& w, int target,
                              double tol_phase) {
  if (target != 1 && target != -1)
    throw Error("intersection_multiplicity: target must be +1 or -1");
  const UnitaryEig eig = unitary_eig(w.adjoint() * u);
  const double theta = (target == 1) ? 0.0 : M_PI;
  int count = 0;
  for (Eigen::Index k = 0; k < eig.phases.size(); ++k)
    if (std::abs(wrap_phase(eig.phases(k) - theta)) <= tol_phase) ++count;
  return count;
}

LagrangianFrame act(const GroupElement& t, const LagrangianFrame& phi,
                    bool renormalize) {
  Matrix prod = t.mat * phi.matrix();
  Eigen::JacobiSVD<Matrix> svd(prod);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= tol::rank * std::max(1.0, s(0)))
    throw RankLossError("act: frame lost rank under the group action");
  LagrangianFrame out(std::move(prod), false);
  return renormalize ? out.orthonormalized() : out;
}

}  // namespace pruefer
