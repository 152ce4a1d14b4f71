#ifndef PRUEFER_SPECFLOW_HPP
#define PRUEFER_SPECFLOW_HPP

// Eigenphase tracking along sampled paths of unitaries and the signed count
// of passages through a marked point of the circle (spectral flow).
//
// Endpoint convention: closed on the right, open on the left.  A track
// ending on the target (within tol::phase) counts as having arrived; a
// track starting there contributes nothing until it reaches the next
// lifted copy.

#include "pruefer/numkernel.hpp"
#include "pruefer/symplectic.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace pruefer {

struct StepTooCoarseError : Error {
  explicit StepTooCoarseError(std::size_t k)
      : Error("track_phases: phase jump exceeds dtheta_max at step " +
              std::to_string(k)),
        index(k) {}
  std::size_t index;
};

struct RefinementExhaustedError : Error { using Error::Error; };

namespace tol {
inline constexpr double dtheta_max = 0.5;  // max matched jump per step (rad)
}

// Sampled path of unitaries with L continuously unwrapped phase tracks.
struct UnitaryPhasePath {
  std::vector<double> params;       // ascending
  std::vector<Matrix> unitaries;    // one L x L unitary per sample
  Eigen::MatrixXd tracks;           // samples x L, unwrapped radians

  Eigen::Index fiber() const { return tracks.cols(); }
  std::size_t samples() const { return params.size(); }
};

struct Crossing {
  double param;
  int track;
  int direction;  // +1 upward, -1 downward
};

struct FlowReport {
  long net_flow = 0;
  std::vector<Crossing> crossings;
  int endpoint_hits_begin = 0;
  int endpoint_hits_end = 0;
  // parameters of crossings closer together than 10 * tol_phase in phase
  // travel; multiplicities there are cluster counts, not resolved tracks
  std::vector<double> tight_clusters;
};

// Match the eigenphase multiset `fresh` against reference phases `base`
// (both as points on the circle).  Returns the wrapped delta assigned to
// each base slot.  Optimal assignment for L <= 8, greedy above.
std::vector<double> assign_phases(const std::vector<double>& base,
                                  const std::vector<double>& fresh);

UnitaryPhasePath track_phases(const std::vector<Matrix>& unitaries,
                              const std::vector<double>& params,
                              double dtheta_max = tol::dtheta_max);

FlowReport spectral_flow(const UnitaryPhasePath& path, double target_phase,
                         double tol_phase = tol::phase);

using UnitaryGenerator = std::function<Matrix(double)>;

// Sample generator over [a, b], bisecting until every matched step stays
// below dtheta_max; `initial` seeds extra interior sample points.
UnitaryPhasePath refine_adaptively(const UnitaryGenerator& gen, double a,
                                   double b,
                                   double dtheta_max = tol::dtheta_max,
                                   int max_depth = 24,
                                   std::vector<double> initial = {});

// CSV dump: param, track_0 ... track_{L-1} (radians).
void write_path_csv(const UnitaryPhasePath& path, std::ostream& os);

}  // namespace pruefer

#endif
