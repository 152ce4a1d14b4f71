#ifndef PRUEFER_TRANSLOG_HPP
#define PRUEFER_TRANSLOG_HPP

// Spectral classification of transfer matrices, selfadjoint logarithms with
// a sign-definite lower-right block, critical energies, and the resulting
// piecewise-constant interpolation of the discrete Pruefer phases.

#include "pruefer/jacobi.hpp"
#include "pruefer/numkernel.hpp"
#include "pruefer/specflow.hpp"

#include <string>
#include <vector>

namespace pruefer {

struct BranchViolationError : Error { using Error::Error; };
struct AboveCriticalError : Error { using Error::Error; };
struct BelowCriticalError : Error { using Error::Error; };

// Negative: valid while sigma(T^E) in (-inf,0) u (S^1 \ {1}), i.e. E < E_c.
// Positive: the mirror regime sigma(T^E) in (0,inf) u (S^1 \ {-1}).
enum class LogBranch { Negative, Positive };

namespace tol {
inline constexpr double par = 1e-9;   // parabolic window |d -+ 2|
inline constexpr double log_residual = 1e-8;
}

// Diagonalization data of T^{-1/2}(E - V)T^{-1/2} with entries partitioned
// into hyperbolic / parabolic / elliptic groups (ascending d groups them in
// exactly that order).
struct BlockClassification {
  Matrix diagonalizer;  // unitary M
  RealVector d;         // ascending real diagonal
  LogBranch branch = LogBranch::Negative;
  int n_hyp_minus = 0, n_par_minus = 0, n_ell = 0, n_par_plus = 0, n_hyp_plus = 0;
  RealVector kappa_minus;  // entries of d < -2
  RealVector kappa_plus;   // entries of d > +2
  RealVector theta;        // elliptic entries; (-pi,0) neg branch, (0,pi) pos
};

struct BlockLog {
  Matrix hamiltonian;  // Hermitian 2L x 2L with exp(J H) = T^E
  LogBranch branch = LogBranch::Negative;
  BlockClassification classification;
  double exp_residual = 0.0;  // ||expm(J H) - T^E|| / ||T^E||
};

struct CriticalEnergies {
  double e_c = 0.0;        // min_n lambda_min(V_n + 2 T_n)
  double e_c_prime = 0.0;  // max_n lambda_max(V_n - 2 T_n)
};

struct SpectrumCheck {
  Eigen::VectorXcd eigenvalues;
  double max_dist_real_or_circle = 0.0;
  double pairing_residual = 0.0;  // closure under lambda -> 1/conj(lambda)
};

BlockClassification classify(const Matrix& v, const Matrix& t, double energy,
                             LogBranch branch);

// Diagnostic eigenvalue scan of the transfer matrix itself.
SpectrumCheck spectrum_check(const Matrix& v, const Matrix& t, double energy);

CriticalEnergies critical_energies(const BlockJacobiOperator& h);

BlockLog log_transfer(const Matrix& v, const Matrix& t, double energy,
                      LogBranch branch);

// Negative-branch logs for the artificial site 0 (V = 0, T = 1) and sites
// 1..N; every piece has a negative-definite lower-right block.  The free
// site caps the admissible window at E < min(E_c, 2).
std::vector<BlockLog> interpolating_hamiltonian(const BlockJacobiOperator& h,
                                                double energy);

struct TranslogPathResult {
  int count = 0;
  UnitaryPhasePath path;                  // over x in [-1, N]
  std::vector<double> endpoint_mismatch;  // ||U(n) - U^E_n|| for n = 0..N
};

// Spectral flow through -1 of the piecewise path x in [-1, N] -> U^E(x)
// starting from the Dirichlet frame; equals the energy-flow count.
TranslogPathResult count_by_space_translog_report(const BlockJacobiOperator& h,
                                                  double energy);
int count_by_space_translog(const BlockJacobiOperator& h, double energy);

// Positive-branch variant for E > max(E_c', -2); experimental (the
// homotopy argument above the upper critical energy is only sketched).
TranslogPathResult count_by_space_translog_positive_report(
    const BlockJacobiOperator& h, double energy);
int count_by_space_translog_positive(const BlockJacobiOperator& h, double energy);

// JSON record of a block classification (diagnostic dump).
std::string classification_json(const BlockClassification& cls);

}  // namespace pruefer

#endif
