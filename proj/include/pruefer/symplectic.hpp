#ifndef PRUEFER_SYMPLECTIC_HPP
#define PRUEFER_SYMPLECTIC_HPP

// J-Lagrangian frames, the group G(L) = {T : T*JT = J}, the stereographic
// projection onto U(L) and intersection multiplicities.

#include "pruefer/numkernel.hpp"

namespace pruefer {

struct NotLagrangianError : Error { using Error::Error; };
struct SingularDenominatorError : Error { using Error::Error; };
struct RankLossError : Error { using Error::Error; };

namespace tol {
inline constexpr double lag = 1e-10;    // Lagrangian residual, rel. ||Phi||^2
inline constexpr double rank = 1e-12;   // frame rank cutoff, relative
inline constexpr double grp = 1e-8;     // group residual, rel. ||T||^2
inline constexpr double phase = 1e-6;   // intersection phase window (rad)
}  // namespace tol

// J = [[0, -1],[1, 0]] in L x L blocks.
Matrix symplectic_form(Eigen::Index l);

// Full-rank 2L x L matrix with Phi* J Phi = 0.  Two frames with the same
// column span describe the same Lagrangian plane.
class LagrangianFrame {
 public:
  explicit LagrangianFrame(Matrix phi, bool validate = true);

  Eigen::Index fiber() const { return phi_.cols(); }
  const Matrix& matrix() const { return phi_; }
  Matrix upper() const { return phi_.topRows(fiber()); }
  Matrix lower() const { return phi_.bottomRows(fiber()); }

  double lagrangian_residual() const;
  double smallest_singular_value() const;

  // Replace the representative by the thin-QR orthonormal factor.
  LagrangianFrame orthonormalized() const;

  static LagrangianFrame dirichlet(Eigen::Index l);  // (0; 1)
  static LagrangianFrame neumann(Eigen::Index l);    // (1; 0)

 private:
  Matrix phi_;
};

// Element of G(L); validation is opt-in as for frames.
struct GroupElement {
  Matrix mat;
  explicit GroupElement(Matrix t) : mat(std::move(t)) {}
};

// Raw residual ||T* J T - J||_F.
double check_group(const Matrix& t);

// Pi(Phi) = (upper - i lower)(upper + i lower)^{-1}, a unitary independent
// of the representative.
Matrix stereo(const LagrangianFrame& phi);

// Number of eigenphases of W*U within tol_phase of the target point
// (+1 -> phase 0, -1 -> phase pi).
int intersection_multiplicity(const Matrix& u, const Matrix& w, int target,
                              double tol_phase = tol::phase);

// T . Phi with optional re-orthonormalization of the representative.
LagrangianFrame act(const GroupElement& t, const LagrangianFrame& phi,
                    bool renormalize = true);

}  // namespace pruefer

#endif
