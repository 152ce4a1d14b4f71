#include "pruefer/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace pruefer {

namespace {

constexpr int kMaxDenseDim = 4096;

std::vector<double> hermitian_spectrum(const Matrix& a) {
  // real-symmetric fast path
  if (a.imag().cwiseAbs().maxCoeff() < 1e-14 * std::max(1.0, a.norm())) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.real());
    if (es.info() != Eigen::Success) throw Error("oracle: eigensolver failed");
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
  }
  const HermEig eig = herm_eig(a, 1e-8);
  return {eig.values.data(), eig.values.data() + eig.values.size()};
}

bool is_dirichlet(const LagrangianFrame& psi) {
  return (stereo(psi) + Matrix::Identity(psi.fiber(), psi.fiber())).norm() <= 1e-8;
}

}  // namespace

ReferenceSpectrum dense_jacobi_spectrum(const BlockJacobiOperator& h) {
  if (h.length() * h.fiber() > kMaxDenseDim)
    throw TooLargeError("dense_jacobi_spectrum: N*L exceeds the dense limit");
  ReferenceSpectrum out;
  out.method = "dense";
  out.eigenvalues = hermitian_spectrum(h.assemble_dense(h.length()));
  return out;
}

ReferenceSpectrum fd_sl_spectrum(const ContinuumProblem& problem, int mesh) {
  if (problem.kind != ProblemKind::SturmLiouville)
    throw UnsupportedBoundaryError("fd_sl_spectrum: requires Sturm-Liouville data");
  if (!is_dirichlet(problem.psi0) || !is_dirichlet(problem.psi1))
    throw UnsupportedBoundaryError(
        "fd_sl_spectrum: only Dirichlet-Dirichlet boundary conditions");
  const Eigen::Index l = problem.fiber;
  if (mesh < 2 || mesh * l > kMaxDenseDim)
    throw TooLargeError("fd_sl_spectrum: mesh out of range");

  const double h = 1.0 / (mesh + 1);
  Matrix a = Matrix::Zero(mesh * l, mesh * l);
  for (int jn = 1; jn <= mesh; ++jn) {
    const double x = jn * h;
    const Matrix p_lo = problem.p(x - h / 2.0);
    const Matrix p_hi = problem.p(x + h / 2.0);
    const Matrix q_here = problem.q(x);
    const Eigen::Index r = (jn - 1) * l;
    a.block(r, r, l, l) = (p_lo + p_hi) / (h * h) + problem.v(x);
    if (jn < mesh) {
      const Matrix q_next = problem.q(x + h);
      a.block(r, r + l, l, l) =
          -p_hi / (h * h) - q_next / (2.0 * h) + q_here.adjoint() / (2.0 * h);
    }
    if (jn > 1) {
      const Matrix q_prev = problem.q(x - h);
      a.block(r, r - l, l, l) =
          -p_lo / (h * h) + q_prev / (2.0 * h) - q_here.adjoint() / (2.0 * h);
    }
  }

  ReferenceSpectrum out;
  out.method = "finite-difference";
  out.parameter = mesh;
  out.eigenvalues = hermitian_spectrum((a + a.adjoint()) / 2.0);
  return out;
}

int count_below(const ReferenceSpectrum& spectrum, double energy) {
  const double cut = energy + 1e-9;
  return static_cast<int>(std::upper_bound(spectrum.eigenvalues.begin(),
                                           spectrum.eigenvalues.end(), cut) -
                          spectrum.eigenvalues.begin());
}

void write_spectrum_csv(const ReferenceSpectrum& spectrum, std::ostream& os) {
  os << "index,eigenvalue\n";
  char buf[64];
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.15g", spectrum.eigenvalues[k]);
    os << k << ',' << buf << "\n";
  }
}

}  // namespace pruefer
