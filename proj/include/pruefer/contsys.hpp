#ifndef PRUEFER_CONTSYS_HPP
#define PRUEFER_CONTSYS_HPP

// Continuum Hamiltonian systems on [0,1]: classical Hamiltonians built from
// Sturm-Liouville data (p, q, v) or general (V(x), P(x)) data, fundamental
// solutions, matrix Pruefer phase paths, and eigenvalue counting by energy
// flow and space flow.

#include "pruefer/numkernel.hpp"
#include "pruefer/specflow.hpp"
#include "pruefer/symplectic.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace pruefer {

struct CoefficientSingularError : Error { using Error::Error; };
struct AccuracyExhaustedError : Error { using Error::Error; };
struct NotDirichletRightError : Error { using Error::Error; };
struct PositivityViolatedError : Error { using Error::Error; };
struct NegativeCrossingDetectedError : Error { using Error::Error; };

namespace tol {
inline constexpr double fd = 1e-4;  // finite-difference positivity slack
}

using MatrixFn = std::function<Matrix(double)>;

enum class ProblemKind { SturmLiouville, GeneralHamiltonian };

struct ContinuumProblem {
  ProblemKind kind = ProblemKind::SturmLiouville;
  Eigen::Index fiber = 0;  // L

  // Sturm-Liouville coefficients (L x L): p Hermitian > 0, v Hermitian,
  // q arbitrary, each evaluable at any x in [0,1].
  MatrixFn p, q, v;

  // General Hamiltonian data (2L x 2L): V(x) Hermitian, P(x) Hermitian >= 0.
  MatrixFn potential, weight;

  LagrangianFrame psi0 = LagrangianFrame::dirichlet(1);
  LagrangianFrame psi1 = LagrangianFrame::dirichlet(1);

  static ContinuumProblem sturm_liouville(Eigen::Index l, MatrixFn p, MatrixFn q,
                                          MatrixFn v, LagrangianFrame psi0,
                                          LagrangianFrame psi1);
  static ContinuumProblem general(Eigen::Index l, MatrixFn potential,
                                  MatrixFn weight, LagrangianFrame psi0,
                                  LagrangianFrame psi1);

  // p = 1, q = 0, v = 0, Dirichlet-Dirichlet; spectrum n^2 pi^2.
  static ContinuumProblem free_scalar();
  // The built-in two-channel problem with trigonometric coefficients and
  // left boundary frame (M; 1), M = [[2,1],[1,-3]], Dirichlet on the right.
  static ContinuumProblem paper_example_sec7();
};

// x -> H^E(x) = V(x) - E P(x), Hermitian 2L x 2L.
struct ClassicalHamiltonian {
  Eigen::Index fiber = 0;
  MatrixFn eval;
};

// Fundamental solution T^E sampled on a grid of [0, x_end], T(0) = 1.
struct FundamentalPath {
  std::vector<double> xs;
  std::vector<Matrix> transfers;
  std::vector<double> j_residuals;  // relative, per stored node
  double max_j_residual = 0.0;
  int steps = 0;  // step count actually used after restarts
};

ClassicalHamiltonian build_hamiltonian(const ContinuumProblem& problem, double energy);

// Classical RK4 with fixed step; the J-residual is monitored at every step
// and the integration restarts with twice the steps when it exceeds
// tol::grp (up to 6 doublings).
FundamentalPath integrate_fundamental(const ContinuumProblem& problem, double energy,
                                      int steps = 2048, double x_end = 1.0);

// U^E(x_k) = stereo(T^E(x_k) Psi0) with frame renormalization.
UnitaryPhasePath pruefer_path(const ContinuumProblem& problem, double energy,
                              int steps = 2048, double x_end = 1.0);

// Spectral flow of e -> Pi(Psi1)* U^e(1) through +1 over (e0, e1], closed
// right.  Building block for counting and localization.
FlowReport energy_flow_window(const ContinuumProblem& problem, double e0, double e1,
                              int steps = 2048);

// Heuristic lower spectral bound: descend by doubling until a window adds
// zero flow and the phases cluster near -1 (Sturm-Liouville kind only).
double auto_lower_bound(const ContinuumProblem& problem, int steps = 2048);

// # eigenvalues in (e_min, E]; with e_min below the spectrum this is the
// number of eigenvalues <= E.
int count_by_energy(const ContinuumProblem& problem, double energy,
                    std::optional<double> e_min = std::nullopt, int steps = 2048);

struct SpaceCountResult {
  int count = 0;
  FlowReport report;
  UnitaryPhasePath path;
};

// Spectral flow of x -> U^E(x) through -1 over [0,1]; requires the right
// boundary condition to be Dirichlet.
SpaceCountResult count_by_space_report(const ContinuumProblem& problem, double energy,
                                       int steps = 2048);
int count_by_space(const ContinuumProblem& problem, double energy, int steps = 2048);

struct LocatedEigenvalue {
  double value = 0.0;
  int multiplicity = 0;
};

// Bisection on the energy-flow count until each eigenvalue is bracketed
// within tol_e; multiplicity is the count jump across the bracket.
std::vector<LocatedEigenvalue> locate_eigenvalues(const ContinuumProblem& problem,
                                                  double a, double b, double tol_e,
                                                  int steps = 2048);

// Finite-difference min eigenvalue of (1/i) U* dU/dE at (E, x); expected
// >= -tol::fd.
double check_energy_monotonicity(const ContinuumProblem& problem, double energy,
                                 double x, double d_energy = 1e-5, int steps = 2048);

// Directions of all recorded crossings through -1; throws if any is
// negative (signals integration inaccuracy).
std::vector<int> check_space_positivity_at_minus_one(const ContinuumProblem& problem,
                                                     double energy,
                                                     const FlowReport& report);

// ||U^E(x) + 1|| (spectral norm) for each energy in the list.
std::vector<double> check_low_energy_asymptotics(const ContinuumProblem& problem,
                                                 double x,
                                                 const std::vector<double>& energies,
                                                 int steps = 2048);

}  // namespace pruefer

#endif
