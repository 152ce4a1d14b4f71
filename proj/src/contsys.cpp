#include "pruefer/contsys.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace pruefer {

namespace {

constexpr int kValidationGrid = 33;
constexpr int kMaxDoublings = 6;
constexpr int kMaxStoredNodes = 1025;

Matrix hermitize(const Matrix& a) { return (a + a.adjoint()) / 2.0; }

double lambda_min(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(hermitian));
  return es.eigenvalues().minCoeff();
}

// max_k |e^{i phi_k} + 1|, the spectral norm of U + 1 for unitary U
double distance_to_minus_one(const Matrix& u) {
  const UnitaryEig eig = unitary_eig(u);
  double d = 0.0;
  for (Eigen::Index k = 0; k < eig.phases.size(); ++k)
    d = std::max(d, std::abs(std::polar(1.0, eig.phases(k)) + Complex(1.0, 0.0)));
  return d;
}

void validate_problem(const ContinuumProblem& pr) {
  for (int g = 0; g < kValidationGrid; ++g) {
    const double x = static_cast<double>(g) / (kValidationGrid - 1);
    if (pr.kind == ProblemKind::SturmLiouville) {
      const Matrix pm = pr.p(x);
      if ((pm - pm.adjoint()).norm() > tol::sym * std::max(1.0, pm.norm()) ||
          lambda_min(pm) <= 0.0)
        throw CoefficientSingularError(
            "ContinuumProblem: p(x) must be Hermitian positive definite");
      const Matrix vm = pr.v(x);
      if ((vm - vm.adjoint()).norm() > 1e-10 * std::max(1.0, vm.norm()))
        throw Error("ContinuumProblem: v(x) must be Hermitian");
    } else {
      const Matrix vv = pr.potential(x);
      if ((vv - vv.adjoint()).norm() > 1e-10 * std::max(1.0, vv.norm()))
        throw Error("ContinuumProblem: V(x) must be Hermitian");
      const Matrix pp = pr.weight(x);
      if ((pp - pp.adjoint()).norm() > 1e-10 * std::max(1.0, pp.norm()) ||
          lambda_min(pp) < -1e-10 * std::max(1.0, pp.norm()))
        throw Error("ContinuumProblem: P(x) must be Hermitian psd");
    }
  }
}

}  // namespace

ContinuumProblem ContinuumProblem::sturm_liouville(Eigen::Index l, MatrixFn p,
                                                   MatrixFn q, MatrixFn v,
                                                   LagrangianFrame psi0,
                                                   LagrangianFrame psi1) {
  ContinuumProblem pr;
  pr.kind = ProblemKind::SturmLiouville;
  pr.fiber = l;
  pr.p = std::move(p);
  pr.q = std::move(q);
  pr.v = std::move(v);
  pr.psi0 = std::move(psi0);
  pr.psi1 = std::move(psi1);
  validate_problem(pr);
  return pr;
}

ContinuumProblem ContinuumProblem::general(Eigen::Index l, MatrixFn potential,
                                           MatrixFn weight, LagrangianFrame psi0,
                                           LagrangianFrame psi1) {
  ContinuumProblem pr;
  pr.kind = ProblemKind::GeneralHamiltonian;
  pr.fiber = l;
  pr.potential = std::move(potential);
  pr.weight = std::move(weight);
  pr.psi0 = std::move(psi0);
  pr.psi1 = std::move(psi1);
  validate_problem(pr);
  return pr;
}

ContinuumProblem ContinuumProblem::free_scalar() {
  const auto one = [](double) { return Matrix::Identity(1, 1); };
  const auto zero = [](double) { return Matrix::Zero(1, 1); };
  return sturm_liouville(1, one, zero, zero, LagrangianFrame::dirichlet(1),
                         LagrangianFrame::dirichlet(1));
}

ContinuumProblem ContinuumProblem::paper_example_sec7() {
  const auto p = [](double x) {
    Matrix m(2, 2);
    m << 2.0 + std::cos(12.0 * x), std::sin(11.5 * x),
         std::sin(11.5 * x), 3.0 - std::sin(16.0 * x);
    return m;
  };
  const auto q = [](double x) {
    Matrix m(2, 2);
    m << 3.0, std::cos(10.0 * x),
         0.0, 3.0 * std::sin(20.0 * x);
    return m;
  };
  const auto v = [](double x) {
    Matrix m(2, 2);
    m << std::cos(5.0 * x), 7.0 * std::sin(61.5 * x),
         7.0 * std::sin(61.5 * x), -2.0 + std::sin(27.5 * x);
    return m;
  };
  Matrix phi0(4, 2);
  phi0 << 2.0, 1.0,
          1.0, -3.0,
          1.0, 0.0,
          0.0, 1.0;
  return sturm_liouville(2, p, q, v, LagrangianFrame(phi0),
                         LagrangianFrame::dirichlet(2));
}

ClassicalHamiltonian build_hamiltonian(const ContinuumProblem& problem, double energy) {
  ClassicalHamiltonian h;
  h.fiber = problem.fiber;
  if (problem.kind == ProblemKind::GeneralHamiltonian) {
    const MatrixFn pot = problem.potential;
    const MatrixFn wgt = problem.weight;
    h.eval = [pot, wgt, energy](double x) {
      return hermitize(pot(x) - energy * wgt(x));
    };
    return h;
  }

  const Eigen::Index l = problem.fiber;
  const MatrixFn pf = problem.p, qf = problem.q, vf = problem.v;
  h.eval = [pf, qf, vf, energy, l](double x) {
    const Matrix pm = hermitize(pf(x));
    Eigen::LLT<Matrix> llt(pm);
    if (llt.info() != Eigen::Success)
      throw CoefficientSingularError("build_hamiltonian: p(x) not invertible");
    const Matrix qm = qf(x);
    const Matrix pinv = llt.solve(Matrix::Identity(l, l));
    const Matrix pinv_q = llt.solve(qm);
    Matrix out(2 * l, 2 * l);
    out.topLeftCorner(l, l) =
        vf(x) - qm.adjoint() * pinv_q - energy * Matrix::Identity(l, l);
    out.topRightCorner(l, l) = pinv_q.adjoint();
    out.bottomLeftCorner(l, l) = pinv_q;
    out.bottomRightCorner(l, l) = -pinv;
    return hermitize(out).eval();
  };
  return h;
}

FundamentalPath integrate_fundamental(const ContinuumProblem& problem, double energy,
                                      int steps, double x_end) {
  if (steps < 16) throw Error("integrate_fundamental: need steps >= 16");
  const ClassicalHamiltonian ham = build_hamiltonian(problem, energy);
  const Eigen::Index n = 2 * problem.fiber;
  const Matrix j = symplectic_form(problem.fiber);

  for (int attempt = 0; attempt <= kMaxDoublings; ++attempt, steps *= 2) {
    FundamentalPath path;
    path.steps = steps;
    const int stride = std::max(1, steps / (kMaxStoredNodes - 1));
    const double hstep = x_end / steps;

    Matrix t = Matrix::Identity(n, n);
    path.xs.push_back(0.0);
    path.transfers.push_back(t);
    path.j_residuals.push_back(0.0);

    bool ok = true;
    for (int k = 0; k < steps; ++k) {
      const double x = k * hstep;
      const Matrix jh0 = j * ham.eval(x);
      const Matrix jhm = j * ham.eval(x + hstep / 2.0);
      const Matrix jh1 = j * ham.eval(x + hstep);
      const Matrix k1 = jh0 * t;
      const Matrix k2 = jhm * (t + (hstep / 2.0) * k1);
      const Matrix k3 = jhm * (t + (hstep / 2.0) * k2);
      const Matrix k4 = jh1 * (t + hstep * k3);
      t += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

      const double res = check_group(t) / std::max(1.0, t.squaredNorm());
      path.max_j_residual = std::max(path.max_j_residual, res);
      if (res > tol::grp) {
        ok = false;
        break;
      }
      if ((k + 1) % stride == 0 || k + 1 == steps) {
        path.xs.push_back((k + 1) * hstep);
        path.transfers.push_back(t);
        path.j_residuals.push_back(res);
      }
    }
    if (ok) return path;
  }
  throw AccuracyExhaustedError(
      "integrate_fundamental: J-residual exceeds tolerance after 6 doublings");
}

UnitaryPhasePath pruefer_path(const ContinuumProblem& problem, double energy,
                              int steps, double x_end) {
  for (int attempt = 0;; ++attempt) {
    const FundamentalPath fp = integrate_fundamental(problem, energy, steps, x_end);
    std::vector<Matrix> units;
    units.reserve(fp.transfers.size());
    for (const Matrix& t : fp.transfers)
      units.push_back(stereo(act(GroupElement(t), problem.psi0)));
    try {
      return track_phases(units, fp.xs);
    } catch (const StepTooCoarseError&) {
      if (attempt >= kMaxDoublings)
        throw AccuracyExhaustedError("pruefer_path: phase steps remain too coarse");
      steps = fp.steps * 2;
    }
  }
}

FlowReport energy_flow_window(const ContinuumProblem& problem, double e0, double e1,
                              int steps) {
  const Matrix w = stereo(problem.psi1);
  const UnitaryGenerator gen = [&problem, &w, steps](double e) {
    const FundamentalPath fp = integrate_fundamental(problem, e, steps);
    return Matrix(w.adjoint() *
                  stereo(act(GroupElement(fp.transfers.back()), problem.psi0)));
  };
  // seed the grid densely enough that a whole turn cannot hide in one cell
  std::vector<double> seed;
  const int cells = std::max(8, static_cast<int>(std::ceil((e1 - e0) / 0.25)));
  for (int k = 1; k < cells; ++k)
    seed.push_back(e0 + (e1 - e0) * k / cells);
  const UnitaryPhasePath path = refine_adaptively(gen, e0, e1, tol::dtheta_max, 24, seed);
  return spectral_flow(path, 0.0);
}

double auto_lower_bound(const ContinuumProblem& problem, int steps) {
  if (problem.kind != ProblemKind::SturmLiouville)
    throw Error("auto_lower_bound: supply e_min explicitly for general Hamiltonian data");
  double base = std::numeric_limits<double>::infinity();
  for (int g = 0; g < kValidationGrid; ++g) {
    const double x = static_cast<double>(g) / (kValidationGrid - 1);
    base = std::min(base, lambda_min(problem.v(x)));
  }
  double hi = base - 1.0;
  double step = std::max(2.0, std::abs(hi));
  for (int round = 0; round < 12; ++round) {
    const double lo = hi - step;
    const FlowReport fr = energy_flow_window(problem, lo, hi, steps);
    const FundamentalPath fp = integrate_fundamental(problem, lo, steps);
    const double dist = distance_to_minus_one(
        stereo(act(GroupElement(fp.transfers.back()), problem.psi0)));
    if (fr.net_flow == 0 && fr.endpoint_hits_end == 0 && dist < 0.5) return lo;
    hi = lo;
    step *= 2.0;
  }
  throw Error("auto_lower_bound: could not verify a bound below the spectrum");
}

int count_by_energy(const ContinuumProblem& problem, double energy,
                    std::optional<double> e_min, int steps) {
  const double lo = e_min ? *e_min : auto_lower_bound(problem, steps);
  if (!(lo < energy)) throw Error("count_by_energy: e_min must lie below E");
  return static_cast<int>(energy_flow_window(problem, lo, energy, steps).net_flow);
}

SpaceCountResult count_by_space_report(const ContinuumProblem& problem, double energy,
                                       int steps) {
  if ((stereo(problem.psi1) + Matrix::Identity(problem.fiber, problem.fiber)).norm() >
      1e-8)
    throw NotDirichletRightError(
        "count_by_space: right boundary condition must be Dirichlet");
  if (problem.kind == ProblemKind::GeneralHamiltonian) {
    const ClassicalHamiltonian ham = build_hamiltonian(problem, energy);
    for (int g = 0; g <= kValidationGrid; ++g) {
      const double x = static_cast<double>(g) / kValidationGrid;
      const Matrix h = ham.eval(x);
      const Matrix lr = h.bottomRightCorner(problem.fiber, problem.fiber);
      if (lambda_min(-lr) <= 0.0)
        throw PositivityViolatedError(
            "count_by_space: lower-right block of H is not negative definite");
    }
  }

  SpaceCountResult res;
  for (int attempt = 0;; ++attempt) {
    res.path = pruefer_path(problem, energy, steps);
    res.report = spectral_flow(res.path, M_PI);
    const bool negative =
        std::any_of(res.report.crossings.begin(), res.report.crossings.end(),
                    [](const Crossing& c) { return c.direction < 0; });
    if (!negative || attempt >= 3) break;
    steps *= 2;  // negative crossings signal integration inaccuracy
  }
  res.count = static_cast<int>(res.report.net_flow);
  return res;
}

int count_by_space(const ContinuumProblem& problem, double energy, int steps) {
  return count_by_space_report(problem, energy, steps).count;
}

std::vector<LocatedEigenvalue> locate_eigenvalues(const ContinuumProblem& problem,
                                                  double a, double b, double tol_e,
                                                  int steps) {
  if (!(a < b)) throw Error("locate_eigenvalues: need a < b");
  struct Window {
    double lo, hi;
    int count;
  };
  std::vector<LocatedEigenvalue> out;
  std::deque<Window> work;
  const int total =
      static_cast<int>(energy_flow_window(problem, a, b, steps).net_flow);
  work.push_back({a, b, total});
  while (!work.empty()) {
    const Window w = work.front();
    work.pop_front();
    if (w.count == 0) continue;
    if (w.hi - w.lo <= tol_e) {
      out.push_back({(w.lo + w.hi) / 2.0, w.count});
      continue;
    }
    const double mid = (w.lo + w.hi) / 2.0;
    const int left =
        static_cast<int>(energy_flow_window(problem, w.lo, mid, steps).net_flow);
    work.push_back({w.lo, mid, left});
    work.push_back({mid, w.hi, w.count - left});
  }
  std::sort(out.begin(), out.end(),
            [](const LocatedEigenvalue& x, const LocatedEigenvalue& y) {
              return x.value < y.value;
            });
  return out;
}

double check_energy_monotonicity(const ContinuumProblem& problem, double energy,
                                 double x, double d_energy, int steps) {
  const auto u_at = [&](double e) {
    const FundamentalPath fp = integrate_fundamental(problem, e, steps, x);
    return stereo(act(GroupElement(fp.transfers.back()), problem.psi0));
  };
  const Matrix u0 = u_at(energy);
  const Matrix du = (u_at(energy + d_energy) - u_at(energy - d_energy)) /
                    (2.0 * d_energy);
  const Matrix a = hermitize(u0.adjoint() * du / Complex(0.0, 1.0));
  return herm_eig(a).values.minCoeff();
}

std::vector<int> check_space_positivity_at_minus_one(const ContinuumProblem& problem,
                                                     double energy,
                                                     const FlowReport& report) {
  (void)energy;
  if (problem.kind != ProblemKind::SturmLiouville)
    throw Error(
        "check_space_positivity_at_minus_one: requires Sturm-Liouville data");
  std::vector<int> dirs;
  dirs.reserve(report.crossings.size());
  for (const Crossing& c : report.crossings) {
    if (c.direction < 0)
      throw NegativeCrossingDetectedError(
          "crossing through -1 in the negative sense at parameter " +
          std::to_string(c.param));
    dirs.push_back(c.direction);
  }
  return dirs;
}

std::vector<double> check_low_energy_asymptotics(const ContinuumProblem& problem,
                                                 double x,
                                                 const std::vector<double>& energies,
                                                 int steps) {
  if (!(x > 0.0))
    throw Error("check_low_energy_asymptotics: need x > 0");
  std::vector<double> out;
  out.reserve(energies.size());
  for (double e : energies) {
    const FundamentalPath fp = integrate_fundamental(problem, e, steps, x);
    out.push_back(distance_to_minus_one(
        stereo(act(GroupElement(fp.transfers.back()), problem.psi0))));
  }
  return out;
}

}  // namespace pruefer
