#include "pruefer/translog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pruefer {

namespace {

Matrix hermitize(const Matrix& a) { return (a + a.adjoint()) / 2.0; }

// x / sinh(x) and x coth(x) with series fallback near the removable point
double x_over_sinh(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
  }
  return x / std::sinh(x);
}

double x_coth(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x * std::cosh(x) / std::sinh(x);
}

double x_over_sin(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
  }
  return x / std::sin(x);
}

double x_cot(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x * std::cos(x) / std::sin(x);
}

Matrix inv_sqrt_spd(const Matrix& t) {
  const HermEig eig = herm_eig(hermitize(t), 1e-8);
  if (eig.values.minCoeff() <= 0.0)
    throw NotPositiveError("translog: hopping block must be positive definite");
  return eig.vectors * eig.values.cwiseInverse().cwiseSqrt().asDiagonal() *
         eig.vectors.adjoint();
}

}  // namespace

BlockClassification classify(const Matrix& v, const Matrix& t, double energy,
                             LogBranch branch) {
  const Eigen::Index l = v.rows();
  const Matrix w = inv_sqrt_spd(t);
  const Matrix a = hermitize(w * (energy * Matrix::Identity(l, l) - v) * w);
  const HermEig eig = herm_eig(a, 1e-8);

  BlockClassification cls;
  cls.diagonalizer = eig.vectors;
  cls.d = eig.values;
  cls.branch = branch;

  std::vector<double> km, kp, th;
  for (Eigen::Index j = 0; j < l; ++j) {
    const double d = cls.d(j);
    if (std::abs(d + 2.0) <= tol::par) {
      ++cls.n_par_minus;
    } else if (std::abs(d - 2.0) <= tol::par) {
      ++cls.n_par_plus;
    } else if (d < -2.0) {
      ++cls.n_hyp_minus;
      km.push_back(std::acosh(-d / 2.0));
    } else if (d > 2.0) {
      ++cls.n_hyp_plus;
      kp.push_back(std::acosh(d / 2.0));
    } else {
      ++cls.n_ell;
      th.push_back(branch == LogBranch::Negative ? -std::acos(-d / 2.0)
                                                 : std::acos(d / 2.0));
    }
  }
  const auto to_vec = [](const std::vector<double>& src) {
    RealVector out(static_cast<Eigen::Index>(src.size()));
    for (std::size_t k = 0; k < src.size(); ++k)
      out(static_cast<Eigen::Index>(k)) = src[k];
    return out;
  };
  cls.kappa_minus = to_vec(km);
  cls.kappa_plus = to_vec(kp);
  cls.theta = to_vec(th);
  return cls;
}

SpectrumCheck spectrum_check(const Matrix& v, const Matrix& t, double energy) {
  const Matrix te = transfer_matrix(v, t, energy).mat;
  Eigen::ComplexEigenSolver<Matrix> es(te);
  SpectrumCheck out;
  out.eigenvalues = es.eigenvalues();

  for (Eigen::Index j = 0; j < out.eigenvalues.size(); ++j) {
    const Complex z = out.eigenvalues(j);
    const double dist =
        std::min(std::abs(z.imag()), std::abs(std::abs(z) - 1.0));
    out.max_dist_real_or_circle = std::max(out.max_dist_real_or_circle, dist);
    // nearest partner to 1/conj(z)
    const Complex target = 1.0 / std::conj(z);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < out.eigenvalues.size(); ++k)
      best = std::min(best, std::abs(out.eigenvalues(k) - target));
    out.pairing_residual =
        std::max(out.pairing_residual, best / std::max(1.0, std::abs(target)));
  }
  return out;
}

CriticalEnergies critical_energies(const BlockJacobiOperator& h) {
  CriticalEnergies ce;
  ce.e_c = std::numeric_limits<double>::infinity();
  ce.e_c_prime = -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= h.length(); ++n) {
    const Matrix t = h.hopping(n);
    const Matrix v = h.site_potential(n);
    ce.e_c = std::min(ce.e_c, herm_eig(hermitize(v + 2.0 * t), 1e-8).values.minCoeff());
    ce.e_c_prime =
        std::max(ce.e_c_prime, herm_eig(hermitize(v - 2.0 * t), 1e-8).values.maxCoeff());
  }
  return ce;
}

BlockLog log_transfer(const Matrix& v, const Matrix& t, double energy,
                      LogBranch branch) {
  const Eigen::Index l = v.rows();
  BlockLog out;
  out.branch = branch;
  out.classification = classify(v, t, energy, branch);
  const BlockClassification& cls = out.classification;

  if (branch == LogBranch::Negative && cls.n_par_plus + cls.n_hyp_plus > 0)
    throw BranchViolationError(
        "log_transfer: spectrum reaches (0,inf)/{1}; largest d = " +
        std::to_string(cls.d(cls.d.size() - 1)));
  if (branch == LogBranch::Positive && cls.n_par_minus + cls.n_hyp_minus > 0)
    throw BranchViolationError(
        "log_transfer: spectrum reaches (-inf,0)/{-1}; smallest d = " +
        std::to_string(cls.d(0)));

  // per-entry 2x2 blocks in the diagonalized coordinates, entry j paired
  // with entry j + L
  Matrix check = Matrix::Zero(2 * l, 2 * l);
  const Complex ipi(0.0, M_PI);
  Eigen::Index ikm = 0, ikp = 0, ith = 0;
  for (Eigen::Index j = 0; j < l; ++j) {
    const double d = cls.d(j);
    double a, b;
    bool add_ipi;
    if (std::abs(d + 2.0) <= tol::par) {
      a = -1.0;
      b = -1.0;
      add_ipi = true;
    } else if (std::abs(d - 2.0) <= tol::par) {
      a = 1.0;
      b = -1.0;
      add_ipi = false;
    } else if (d < -2.0) {
      const double k = cls.kappa_minus(ikm++);
      a = -x_over_sinh(k);
      b = -x_coth(k);
      add_ipi = true;
    } else if (d > 2.0) {
      const double k = cls.kappa_plus(ikp++);
      a = x_over_sinh(k);
      b = -x_coth(k);
      add_ipi = false;
    } else if (branch == LogBranch::Negative) {
      const double th = cls.theta(ith++);  // in (-pi, 0)
      a = -x_over_sin(th);
      b = -x_cot(th);
      add_ipi = true;
    } else {
      const double th = cls.theta(ith++);  // in (0, pi)
      a = x_over_sin(th);
      b = -x_cot(th);
      add_ipi = false;
    }
    check(j, j) = a;
    check(j + l, j + l) = a;
    check(j, j + l) = b + (add_ipi ? ipi : Complex(0.0, 0.0));
    check(j + l, j) = b - (add_ipi ? ipi : Complex(0.0, 0.0));
  }

  const Matrix w = inv_sqrt_spd(t);          // T^{-1/2}
  const Matrix winv = w.inverse();           // T^{1/2}
  Matrix c = Matrix::Zero(2 * l, 2 * l);
  c.topLeftCorner(l, l) = w * cls.diagonalizer;
  c.bottomRightCorner(l, l) = winv * cls.diagonalizer;
  out.hamiltonian = hermitize(c.adjoint() * check * c);

  const Matrix te = transfer_matrix(v, t, energy).mat;
  out.exp_residual =
      (expm(symplectic_form(l) * out.hamiltonian) - te).norm() / te.norm();
  return out;
}

std::vector<BlockLog> interpolating_hamiltonian(const BlockJacobiOperator& h,
                                                double energy) {
  if (!h.normalized())
    throw Error("interpolating_hamiltonian: operator must be gauge-normalized");
  const double e_cap = std::min(critical_energies(h).e_c, 2.0);
  if (!(energy < e_cap))
    throw AboveCriticalError(
        "interpolating_hamiltonian: E must lie below the critical energy " +
        std::to_string(e_cap));
  const Eigen::Index l = h.fiber();
  std::vector<BlockLog> logs;
  logs.reserve(static_cast<std::size_t>(h.length()) + 1);
  logs.push_back(log_transfer(Matrix::Zero(l, l), Matrix::Identity(l, l), energy,
                              LogBranch::Negative));
  for (int n = 1; n <= h.length(); ++n)
    logs.push_back(log_transfer(h.site_potential(n), h.hopping(n), energy,
                                LogBranch::Negative));
  return logs;
}

namespace {

TranslogPathResult piecewise_flow(const BlockJacobiOperator& h, double energy,
                                  const std::vector<BlockLog>& logs) {
  const Eigen::Index l = h.fiber();
  const int n = h.length();
  const Matrix j = symplectic_form(l);

  std::vector<Matrix> steps;  // exp(J H_n), n = 0..N
  steps.reserve(logs.size());
  for (const BlockLog& lg : logs) steps.push_back(expm(j * lg.hamiltonian));

  std::vector<LagrangianFrame> nodes;  // frame at x = -1, 0, .., N
  nodes.push_back(LagrangianFrame::dirichlet(l));
  for (const Matrix& s : steps)
    nodes.push_back(act(GroupElement(s), nodes.back()));

  TranslogPathResult res;
  const PrueferSequence seq = pruefer_sequence(h, energy);
  for (int k = 0; k <= n; ++k)
    res.endpoint_mismatch.push_back(
        (stereo(nodes[static_cast<std::size_t>(k) + 1]) -
         seq.unitaries[static_cast<std::size_t>(k)])
            .norm());

  const UnitaryGenerator gen = [&](double x) -> Matrix {
    const int piece = std::min(n, static_cast<int>(std::floor(x)) + 1);  // 0..N
    const double local = x - (piece - 1);  // in [0, 1]
    const Matrix part = expm(local * j * logs[static_cast<std::size_t>(piece)].hamiltonian);
    return stereo(act(GroupElement(part), nodes[static_cast<std::size_t>(piece)]));
  };

  std::vector<double> seed;
  for (int piece = 0; piece <= n; ++piece) {
    if (piece > 0) seed.push_back(static_cast<double>(piece - 1));
    for (int k = 1; k < 16; ++k)
      seed.push_back(piece - 1 + k / 16.0);
  }
  res.path = refine_adaptively(gen, -1.0, static_cast<double>(n), tol::dtheta_max,
                               24, std::move(seed));
  res.count = static_cast<int>(spectral_flow(res.path, M_PI).net_flow);
  return res;
}

}  // namespace

TranslogPathResult count_by_space_translog_report(const BlockJacobiOperator& h,
                                                  double energy) {
  return piecewise_flow(h, energy, interpolating_hamiltonian(h, energy));
}

int count_by_space_translog(const BlockJacobiOperator& h, double energy) {
  return count_by_space_translog_report(h, energy).count;
}

TranslogPathResult count_by_space_translog_positive_report(
    const BlockJacobiOperator& h, double energy) {
  if (!h.normalized())
    throw Error("count_by_space_translog_positive: operator must be gauge-normalized");
  const double e_floor = std::max(critical_energies(h).e_c_prime, -2.0);
  if (!(energy > e_floor))
    throw BelowCriticalError(
        "count_by_space_translog_positive: E must lie above the critical energy " +
        std::to_string(e_floor));
  const Eigen::Index l = h.fiber();
  std::vector<BlockLog> logs;
  logs.reserve(static_cast<std::size_t>(h.length()) + 1);
  logs.push_back(log_transfer(Matrix::Zero(l, l), Matrix::Identity(l, l), energy,
                              LogBranch::Positive));
  for (int n = 1; n <= h.length(); ++n)
    logs.push_back(log_transfer(h.site_potential(n), h.hopping(n), energy,
                                LogBranch::Positive));
  return piecewise_flow(h, energy, logs);
}

int count_by_space_translog_positive(const BlockJacobiOperator& h, double energy) {
  return count_by_space_translog_positive_report(h, energy).count;
}

std::string classification_json(const BlockClassification& cls) {
  std::ostringstream os;
  os.precision(15);
  os << "{\"branch\":\"" << (cls.branch == LogBranch::Negative ? "negative" : "positive")
     << "\",\"d\":[";
  for (Eigen::Index j = 0; j < cls.d.size(); ++j)
    os << (j ? "," : "") << cls.d(j);
  os << "],\"sizes\":{\"hyp_minus\":" << cls.n_hyp_minus
     << ",\"par_minus\":" << cls.n_par_minus << ",\"elliptic\":" << cls.n_ell
     << ",\"par_plus\":" << cls.n_par_plus << ",\"hyp_plus\":" << cls.n_hyp_plus
     << "},\"kappa_minus\":[";
  for (Eigen::Index j = 0; j < cls.kappa_minus.size(); ++j)
    os << (j ? "," : "") << cls.kappa_minus(j);
  os << "],\"kappa_plus\":[";
  for (Eigen::Index j = 0; j < cls.kappa_plus.size(); ++j)
    os << (j ? "," : "") << cls.kappa_plus(j);
  os << "],\"theta\":[";
  for (Eigen::Index j = 0; j < cls.theta.size(); ++j)
    os << (j ? "," : "") << cls.theta(j);
  os << "]}";
  return os.str();
}

}  // namespace pruefer
