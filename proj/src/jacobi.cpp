#include "pruefer/jacobi.hpp"

#include <algorithm>
#include <cmath>

namespace pruefer {

namespace {

constexpr double kTolZeroRel = 1e-10;   // inertia zero threshold, relative
constexpr double kTolSingRel = 1e-8;    // singular-set exclusion, relative

Matrix hermitize(const Matrix& a) { return (a + a.adjoint()) / 2.0; }

Matrix inverse_spd(const Matrix& t) {
  Eigen::LLT<Matrix> llt(hermitize(t));
  if (llt.info() != Eigen::Success)
    throw SingularError("hopping block is not Hermitian positive definite");
  return llt.solve(Matrix::Identity(t.rows(), t.cols()));
}

int negative_inertia(const Matrix& s_hermitian) {
  const HermEig eig = herm_eig(hermitize(s_hermitian), 1e-8);
  const double zero = kTolZeroRel * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  int neg = 0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k)
    if (eig.values(k) < -zero) ++neg;
  return neg;
}

}  // namespace

BlockJacobiOperator::BlockJacobiOperator(std::vector<Matrix> v, std::vector<Matrix> t)
    : v_(std::move(v)), t_(std::move(t)) {
  if (v_.size() < 2 || t_.size() + 1 != v_.size())
    throw Error("BlockJacobiOperator: need N >= 2 potentials and N-1 hoppings");
  fiber_ = v_.front().rows();
  for (const Matrix& m : v_) {
    if (m.rows() != fiber_ || m.cols() != fiber_)
      throw Error("BlockJacobiOperator: inconsistent block sizes");
    if ((m - m.adjoint()).norm() > 1e-10 * std::max(1.0, m.norm()))
      throw Error("BlockJacobiOperator: diagonal blocks must be Hermitian");
  }
  normalized_ = true;
  for (const Matrix& m : t_) {
    if (m.rows() != fiber_ || m.cols() != fiber_)
      throw Error("BlockJacobiOperator: inconsistent block sizes");
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= tol::inv * std::max(1.0, s(0)))
      throw SingularError("BlockJacobiOperator: hopping block is singular");
    if ((m - m.adjoint()).norm() > 1e-10 * std::max(1.0, m.norm()))
      normalized_ = false;
    else if (herm_eig(hermitize(m), 1e-8).values.minCoeff() <= 0.0)
      normalized_ = false;
  }
}

const Matrix& BlockJacobiOperator::site_potential(int n) const {
  return v_.at(static_cast<std::size_t>(n) - 1);
}

Matrix BlockJacobiOperator::hopping(int n) const {
  if (n == 1 || n == length() + 1) return Matrix::Identity(fiber_, fiber_);
  return t_.at(static_cast<std::size_t>(n) - 2);
}

Matrix BlockJacobiOperator::assemble_dense(int upto) const {
  if (upto < 1 || upto > length()) throw Error("assemble_dense: bad truncation");
  const Eigen::Index l = fiber_;
  Matrix h = Matrix::Zero(upto * l, upto * l);
  for (int n = 1; n <= upto; ++n) {
    h.block((n - 1) * l, (n - 1) * l, l, l) = site_potential(n);
    if (n >= 2) {
      h.block((n - 2) * l, (n - 1) * l, l, l) = hopping(n);
      h.block((n - 1) * l, (n - 2) * l, l, l) = hopping(n).adjoint();
    }
  }
  return h;
}

BlockJacobiOperator BlockJacobiOperator::free_chain(int n) {
  std::vector<Matrix> v(static_cast<std::size_t>(n), Matrix::Zero(1, 1));
  std::vector<Matrix> t(static_cast<std::size_t>(n) - 1, Matrix::Identity(1, 1));
  return BlockJacobiOperator(std::move(v), std::move(t));
}

GaugeResult gauge_normalize(const BlockJacobiOperator& h) {
  const int n = h.length();
  const Eigen::Index l = h.fiber();
  std::vector<Matrix> gauges(static_cast<std::size_t>(n));
  gauges[0] = Matrix::Identity(l, l);
  for (int k = 2; k <= n; ++k)
    gauges[k - 1] = polar_unitary(gauges[k - 2] * h.hopping(k));
  // G_{n-1} T_n = G_n |G_{n-1} T_n|, so G_{n-1} T_n G_n^* > 0
  std::vector<Matrix> v(static_cast<std::size_t>(n)), t(static_cast<std::size_t>(n) - 1);
  for (int k = 1; k <= n; ++k)
    v[k - 1] = hermitize(gauges[k - 1] * h.site_potential(k) * gauges[k - 1].adjoint());
  for (int k = 2; k <= n; ++k)
    t[k - 2] = hermitize(gauges[k - 2] * h.hopping(k) * gauges[k - 1].adjoint());
  return GaugeResult{BlockJacobiOperator(std::move(v), std::move(t)),
                     std::move(gauges)};
}

GroupElement transfer_matrix(const Matrix& v, const Matrix& t, double energy) {
  const Eigen::Index l = v.rows();
  const Matrix tinv = inverse_spd(t);
  Matrix out(2 * l, 2 * l);
  out.topLeftCorner(l, l) = (energy * Matrix::Identity(l, l) - v) * tinv;
  out.topRightCorner(l, l) = -t;
  out.bottomLeftCorner(l, l) = tinv;
  out.bottomRightCorner(l, l).setZero();
  return GroupElement(std::move(out));
}

PrueferSequence pruefer_sequence(const BlockJacobiOperator& h, double energy) {
  if (!h.normalized())
    throw Error("pruefer_sequence: operator must be gauge-normalized (T_n > 0)");
  const int n = h.length();
  const Eigen::Index l = h.fiber();

  PrueferSequence seq;
  seq.frames.reserve(static_cast<std::size_t>(n) + 1);
  seq.unitaries.reserve(static_cast<std::size_t>(n) + 1);
  seq.frames.push_back(LagrangianFrame::neumann(l));  // (1; 0)
  seq.unitaries.push_back(stereo(seq.frames.back()));
  for (int k = 1; k <= n; ++k) {
    const GroupElement tk = transfer_matrix(h.site_potential(k), h.hopping(k), energy);
    seq.frames.push_back(act(tk, seq.frames.back()));
    seq.unitaries.push_back(stereo(seq.frames.back()));
  }

  // scaled three-term recursion T_{n+1} phi_{n+1} = (E - V_n) phi_n - T_n phi_{n-1}
  seq.phi.assign(static_cast<std::size_t>(n) + 2, Matrix::Zero(l, l));
  seq.log_scale.assign(static_cast<std::size_t>(n) + 2, 0.0);
  Matrix prev = Matrix::Zero(l, l);
  Matrix cur = Matrix::Identity(l, l);
  double sigma = 0.0;
  seq.phi[0] = prev;
  seq.phi[1] = cur;
  for (int k = 1; k <= n; ++k) {
    const Matrix rhs =
        (energy * Matrix::Identity(l, l) - h.site_potential(k)) * cur -
        h.hopping(k) * prev;
    Matrix next = inverse_spd(h.hopping(k + 1)) * rhs;
    seq.phi[static_cast<std::size_t>(k) + 1] = next;
    seq.log_scale[static_cast<std::size_t>(k) + 1] = sigma;
    const double mag = std::max(cur.norm(), next.norm());
    prev = cur;
    cur = next;
    if (mag > 2.0 || (mag > 0.0 && mag < 0.5)) {
      prev /= mag;
      cur /= mag;
      sigma += std::log(mag);
    }
  }
  return seq;
}

SMatrixSequence s_matrices(const BlockJacobiOperator& h, double energy) {
  const PrueferSequence seq = pruefer_sequence(h, energy);
  const int n = h.length();
  SMatrixSequence sm;
  sm.s.reserve(static_cast<std::size_t>(n));
  sm.log_scale.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const Matrix s = seq.phi[static_cast<std::size_t>(k)].adjoint() *
                     h.hopping(k + 1) * seq.phi[static_cast<std::size_t>(k) + 1];
    sm.s.push_back(s);
    sm.log_scale.push_back(seq.log_scale[static_cast<std::size_t>(k)] +
                           seq.log_scale[static_cast<std::size_t>(k) + 1]);
    const int neg = negative_inertia(s);
    sm.morse.push_back(neg);
    sm.morse_complement.push_back(static_cast<int>(h.fiber()) - neg);
  }
  return sm;
}

double s_recurrence_residual(const BlockJacobiOperator& h, double energy,
                             const PrueferSequence& seq, const SMatrixSequence& sm) {
  const Eigen::Index l = h.fiber();
  double worst = 0.0;
  for (int k = 2; k <= h.length(); ++k) {
    const double e_k = sm.log_scale[static_cast<std::size_t>(k) - 1];
    const double e_prev = sm.log_scale[static_cast<std::size_t>(k) - 2];
    const double e_phi = 2.0 * seq.log_scale[static_cast<std::size_t>(k)];
    if (std::max({e_k, e_prev, e_phi}) > 300.0) continue;  // not representable
    const Matrix s_k = std::exp(e_k) * sm.s[static_cast<std::size_t>(k) - 1];
    const Matrix s_prev = std::exp(e_prev) * sm.s[static_cast<std::size_t>(k) - 2];
    const Matrix phi_k =
        std::exp(seq.log_scale[static_cast<std::size_t>(k)]) *
        seq.phi[static_cast<std::size_t>(k)];
    const Matrix mid =
        phi_k.adjoint() *
        (energy * Matrix::Identity(l, l) - h.site_potential(k)) * phi_k;
    const double scale = std::max({1.0, s_k.norm(), mid.norm()});
    worst = std::max(worst, (s_k - (mid - s_prev)).norm() / scale);
  }
  return worst;
}

double gershgorin_lower_bound(const BlockJacobiOperator& h) {
  double lo = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= h.length(); ++n) {
    double b = herm_eig(hermitize(h.site_potential(n)), 1e-8).values.minCoeff();
    if (n >= 2) b -= h.hopping(n).operatorNorm();
    if (n < h.length()) b -= h.hopping(n + 1).operatorNorm();
    lo = std::min(lo, b);
  }
  return lo;
}

double gershgorin_upper_bound(const BlockJacobiOperator& h) {
  double hi = -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= h.length(); ++n) {
    double b = herm_eig(hermitize(h.site_potential(n)), 1e-8).values.maxCoeff();
    if (n >= 2) b += h.hopping(n).operatorNorm();
    if (n < h.length()) b += h.hopping(n + 1).operatorNorm();
    hi = std::max(hi, b);
  }
  return hi;
}

int count_by_energy_jacobi(const BlockJacobiOperator& h, double energy,
                           std::optional<double> e_min) {
  const double lo = e_min ? *e_min : gershgorin_lower_bound(h) - 1.0;
  if (!(lo < energy))
    throw Error("count_by_energy_jacobi: e_min must lie below E");
  const UnitaryGenerator gen = [&h](double e) {
    return pruefer_sequence(h, e).unitaries.back();
  };
  std::vector<double> seed;
  const int cells = std::max(8, static_cast<int>(std::ceil((energy - lo) / 0.25)));
  for (int k = 1; k < cells; ++k)
    seed.push_back(lo + (energy - lo) * k / cells);
  const UnitaryPhasePath path =
      refine_adaptively(gen, lo, energy, tol::dtheta_max, 24, seed);
  return static_cast<int>(spectral_flow(path, M_PI).net_flow);
}

std::vector<double> singular_set(const BlockJacobiOperator& h) {
  std::vector<double> out;
  for (int n = 1; n < h.length(); ++n) {
    const HermEig eig = herm_eig(h.assemble_dense(n), 1e-8);
    out.insert(out.end(), eig.values.data(), eig.values.data() + eig.values.size());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void reject_singular(const BlockJacobiOperator& h, double energy) {
  const double diameter =
      std::max(1e-12, gershgorin_upper_bound(h) - gershgorin_lower_bound(h));
  double dist = std::numeric_limits<double>::infinity();
  for (double s : singular_set(h)) dist = std::min(dist, std::abs(energy - s));
  if (dist <= kTolSingRel * diameter)
    throw SingularEnergyError(
        "energy lies on the singular set (distance " + std::to_string(dist) + ")",
        dist);
}

}  // namespace

int morse_count(const BlockJacobiOperator& h, double energy) {
  reject_singular(h, energy);
  const SMatrixSequence sm = s_matrices(h, energy);
  int total = 0;
  for (int c : sm.morse_complement) total += c;
  return total;
}

UnitaryPhasePath interpolation_path_A(const BlockJacobiOperator& h, double energy) {
  reject_singular(h, energy);
  const int n = h.length();
  const Eigen::Index l = h.fiber();
  const PrueferSequence seq = pruefer_sequence(h, energy);
  const SMatrixSequence sm = s_matrices(h, energy);

  // principal-branch logs Q_n = -i Log(U_n); undefined on the -1 cut
  std::vector<UnitaryEig> q(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    q[static_cast<std::size_t>(k)] = unitary_eig(seq.unitaries[static_cast<std::size_t>(k)]);
    for (Eigen::Index j = 0; j < l; ++j)
      if (std::abs(wrap_phase(q[static_cast<std::size_t>(k)].phases(j) - M_PI)) <=
          tol::phase)
        throw BranchCutError(
            "interpolation_path_A: an eigenphase of U_n sits on the branch cut");
  }
  // projectors onto the S_n >= 0 eigenspaces
  std::vector<Matrix> proj(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const Matrix s = hermitize(sm.s[static_cast<std::size_t>(k) - 1]);
    const HermEig eig = herm_eig(s, 1e-8);
    const double zero = kTolZeroRel * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    Matrix basis(l, l);
    Eigen::Index cols = 0;
    for (Eigen::Index j = 0; j < l; ++j)
      if (eig.values(j) >= -zero) basis.col(cols++) = eig.vectors.col(j);
    proj[static_cast<std::size_t>(k) - 1] =
        basis.leftCols(cols) * basis.leftCols(cols).adjoint();
  }

  const auto exp_scaled = [l](const UnitaryEig& eig, double tau) {
    Matrix d = Matrix::Zero(l, l);
    for (Eigen::Index j = 0; j < l; ++j)
      d(j, j) = std::polar(1.0, tau * eig.phases(j));
    return Matrix(eig.vectors * d * eig.vectors.adjoint());
  };

  const UnitaryGenerator gen = [&](double x) -> Matrix {
    int piece = std::min(n, static_cast<int>(std::floor(x)) + 1);
    const double local = x - (piece - 1);
    if (local <= 1.0 / 3.0) {
      const double tau = 3.0 * local - 1.0;  // in [-1, 0]
      return exp_scaled(q[static_cast<std::size_t>(piece) - 1], -tau);
    }
    if (local <= 2.0 / 3.0) {
      const double tau = 3.0 * local - 1.0;  // in [0, 1]
      const Complex w = std::polar(1.0, 2.0 * M_PI * tau) - Complex(1.0, 0.0);
      return Matrix(Matrix::Identity(l, l) +
                    w * proj[static_cast<std::size_t>(piece) - 1]);
    }
    const double tau = 3.0 * local - 2.0;  // in [0, 1]
    return exp_scaled(q[static_cast<std::size_t>(piece)], tau);
  };

  std::vector<double> seed;
  for (int piece = 1; piece <= n; ++piece)
    for (int k = 0; k < 42; ++k)
      seed.push_back(piece - 1 + (k + 0.5) / 42.0);
  return refine_adaptively(gen, 0.0, static_cast<double>(n), tol::dtheta_max, 24,
                           std::move(seed));
}

int interpolation_count_A(const BlockJacobiOperator& h, double energy) {
  return static_cast<int>(
      spectral_flow(interpolation_path_A(h, energy), M_PI).net_flow);
}

}  // namespace pruefer
