#ifndef PRUEFER_NUMKERNEL_HPP
#define PRUEFER_NUMKERNEL_HPP

// Dense numeric kernels at fiber sizes L and 2L: Hermitian and unitary
// eigendecomposition, matrix exponential, polar decomposition, psd square
// root.  All functions are pure and safe for concurrent use.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace pruefer {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonHermitianError : Error { using Error::Error; };
struct NonUnitaryError : Error { using Error::Error; };
struct SingularError : Error { using Error::Error; };
struct NotPositiveError : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };

// Default tolerances; every kernel takes an explicit override.
namespace tol {
inline constexpr double sym = 1e-12;    // Hermiticity, relative to ||A||
inline constexpr double unit = 1e-10;   // unitarity residual
inline constexpr double inv = 1e-12;    // singular-value cutoff, relative
inline constexpr double psd = 0.0;      // strict positivity for sqrt_psd
}  // namespace tol

// Eigenpairs of a Hermitian matrix, values ascending, vectors orthonormal.
struct HermEig {
  RealVector values;
  Matrix vectors;
};

// Eigenphases of a unitary matrix in (-pi, pi], ascending by phase.
struct UnitaryEig {
  RealVector phases;
  Matrix vectors;
  Eigen::VectorXcd eigenvalues() const;
};

// Map an angle to the principal interval (-pi, pi].
double wrap_phase(double phi);

HermEig herm_eig(const Matrix& a, double tol_sym = tol::sym);

// Degeneracy-safe eigendecomposition of a unitary matrix via the commuting
// Hermitian pair (U+U*)/2 and (U-U*)/(2i); vectors are orthonormal even
// inside clustered eigenphases.
UnitaryEig unitary_eig(const Matrix& u, double tol_unit = tol::unit);

// Unitary factor G of the polar decomposition T = G (T*T)^{1/2}.
Matrix polar_unitary(const Matrix& t, double tol_inv = tol::inv);

// Scaling-and-squaring Pade exponential (overflow-guarded).
Matrix expm(const Matrix& a);

// Hermitian positive square root; requires min eigenvalue > 0.
Matrix sqrt_psd(const Matrix& a);

}  // namespace pruefer

#endif
