#ifndef PRUEFER_JACOBI_HPP
#define PRUEFER_JACOBI_HPP

// Block Jacobi operators H_N: gauge normalization, transfer-matrix Pruefer
// recursion, energy-flow eigenvalue counting, S-matrices with Morse-index
// Sturm counts, and the explicit loop-insertion interpolation path.

#include "pruefer/numkernel.hpp"
#include "pruefer/specflow.hpp"
#include "pruefer/symplectic.hpp"

#include <optional>
#include <vector>

namespace pruefer {

struct SingularEnergyError : Error {
  SingularEnergyError(const std::string& what, double dist)
      : Error(what), distance(dist) {}
  double distance;
};
struct BranchCutError : Error { using Error::Error; };

// Hermitian diagonal blocks V_1..V_N and invertible off-diagonal blocks
// T_2..T_N; normalized means all T_n are Hermitian positive definite.
class BlockJacobiOperator {
 public:
  BlockJacobiOperator(std::vector<Matrix> v, std::vector<Matrix> t);

  Eigen::Index fiber() const { return fiber_; }
  int length() const { return static_cast<int>(v_.size()); }
  bool normalized() const { return normalized_; }

  const Matrix& site_potential(int n) const;  // V_n, 1-based
  // T_n for n = 1..N+1 with the conventions T_1 = T_{N+1} = 1.
  Matrix hopping(int n) const;

  // Dense Hermitian matrix of the leading principal block H_n (n <= N).
  Matrix assemble_dense(int upto) const;

  static BlockJacobiOperator free_chain(int n);

 private:
  Eigen::Index fiber_;
  std::vector<Matrix> v_;  // N
  std::vector<Matrix> t_;  // N-1, t_[k] = T_{k+2}
  bool normalized_;
};

struct GaugeResult {
  BlockJacobiOperator op;
  std::vector<Matrix> gauges;  // G_1..G_N, G_1 = 1
};

// Site-wise unitary conjugation making every off-diagonal block positive
// definite; the spectrum is unchanged.
GaugeResult gauge_normalize(const BlockJacobiOperator& h);

// [[(E - V) T^{-1}, -T], [T^{-1}, 0]]; requires T Hermitian > 0.
GroupElement transfer_matrix(const Matrix& v, const Matrix& t, double energy);

// Frames, Pruefer unitaries, and the scaled solution blocks phi_0..phi_{N+1}
// of the three-term recursion.  phi_true[n] = phi[n] * exp(log_scale[n]).
struct PrueferSequence {
  std::vector<LagrangianFrame> frames;  // indices 0..N
  std::vector<Matrix> unitaries;        // U_0..U_N
  std::vector<Matrix> phi;              // scaled, indices 0..N+1
  std::vector<double> log_scale;        // indices 0..N+1
};

PrueferSequence pruefer_sequence(const BlockJacobiOperator& h, double energy);

// S_n = phi_n^* T_{n+1} phi_{n+1} in scaled form (true S_n = s[n] *
// exp(log_scale[n])); Morse indices are scale-invariant.
struct SMatrixSequence {
  std::vector<Matrix> s;            // indices 1..N stored at [0..N-1]
  std::vector<double> log_scale;
  std::vector<int> morse;             // i(S_n)
  std::vector<int> morse_complement;  // i_C(S_n) = L - i(S_n)
};

SMatrixSequence s_matrices(const BlockJacobiOperator& h, double energy);

// Max relative defect of S_n = phi_n^*(E - V_n)phi_n - S_{n-1}.
double s_recurrence_residual(const BlockJacobiOperator& h, double energy,
                             const PrueferSequence& seq, const SMatrixSequence& sm);

double gershgorin_lower_bound(const BlockJacobiOperator& h);
double gershgorin_upper_bound(const BlockJacobiOperator& h);

// Spectral flow of e -> U^e_N through -1 over (e_min, E], closed right.
int count_by_energy_jacobi(const BlockJacobiOperator& h, double energy,
                           std::optional<double> e_min = std::nullopt);

// Union of the spectra of the leading truncations H_1..H_{N-1}, sorted.
std::vector<double> singular_set(const BlockJacobiOperator& h);

// Sum of i_C(S^E_n); defined away from the singular set.
int morse_count(const BlockJacobiOperator& h, double energy);

// Three-segment unitary interpolation over x in [0, N] whose flow through
// -1 reproduces the Morse count; requires E off the singular set and all
// U^E_n away from the -1 branch cut.
UnitaryPhasePath interpolation_path_A(const BlockJacobiOperator& h, double energy);

int interpolation_count_A(const BlockJacobiOperator& h, double energy);

}  // namespace pruefer

#endif
