#ifndef PRUEFER_ORACLE_HPP
#define PRUEFER_ORACLE_HPP

// Independent reference spectra: dense diagonalization for Jacobi
// operators and finite-difference discretization for Sturm-Liouville
// problems with Dirichlet-Dirichlet boundary conditions.

#include "pruefer/contsys.hpp"
#include "pruefer/jacobi.hpp"
#include "pruefer/numkernel.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pruefer {

struct TooLargeError : Error { using Error::Error; };
struct UnsupportedBoundaryError : Error { using Error::Error; };

struct ReferenceSpectrum {
  std::vector<double> eigenvalues;  // ascending
  std::string method;
  int parameter = 0;  // mesh size, or 0 for exact/dense
};

// Dense eigensolve of the assembled NL x NL Hermitian matrix.
ReferenceSpectrum dense_jacobi_spectrum(const BlockJacobiOperator& h);

// Second-order central differences on `mesh` interior nodes; eigenvalue
// error O(mesh^-2).  Dirichlet frames required on both ends.
ReferenceSpectrum fd_sl_spectrum(const ContinuumProblem& problem, int mesh);

// # eigenvalues <= energy, with 1e-9 slack on the closed right endpoint.
int count_below(const ReferenceSpectrum& spectrum, double energy);

void write_spectrum_csv(const ReferenceSpectrum& spectrum, std::ostream& os);

}  // namespace pruefer

#endif
