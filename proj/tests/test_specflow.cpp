#include "pruefer/specflow.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace pruefer;
using testutil::random_hermitian;
using testutil::random_unitary;

namespace {

Matrix phase_matrix(double phi) {
  Matrix m(1, 1);
  m << std::polar(1.0, phi);
  return m;
}

// Exact flow for t in [0,1] -> e^{iKt}: tracks are t * k_j with k_j the
// eigenvalues of K, so the count follows from the lifted-copy indices.
long linear_generator_flow(const Matrix& k, double target) {
  const auto snap = [&](double y) {
    const double d = wrap_phase(y - target);
    return (std::abs(d) <= tol::phase) ? y - d : y;
  };
  const auto idx = [&](double y) {
    return static_cast<long>(std::floor((snap(y) - target) / (2.0 * M_PI) + 1e-12));
  };
  long flow = 0;
  const HermEig eig = herm_eig(k);
  for (Eigen::Index j = 0; j < eig.values.size(); ++j)
    flow += idx(eig.values(j)) - idx(0.0);
  return flow;
}

}  // namespace

TEST_CASE("track_phases on simple paths") {
  SUBCASE("constant path gives constant tracks") {
    std::mt19937_64 rng(5);
    const Matrix u = random_unitary(rng, 3);
    const UnitaryPhasePath path = track_phases({u, u, u}, {0.0, 0.5, 1.0});
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(path.tracks(0, j) == doctest::Approx(path.tracks(2, j)));
    }
  }

  SUBCASE("single track continues through the branch point") {
    std::vector<Matrix> units;
    std::vector<double> params;
    for (int k = 0; k <= 10; ++k) {
      const double t = k / 10.0;
      params.push_back(t);
      units.push_back(phase_matrix(M_PI - 1.0 + 2.0 * t));
    }
    const UnitaryPhasePath path = track_phases(units, params);
    CHECK(path.tracks(0, 0) == doctest::Approx(M_PI - 1.0));
    CHECK(path.tracks(10, 0) == doctest::Approx(M_PI + 1.0));
  }

  SUBCASE("two monotone tracks of opposite slope") {
    std::vector<Matrix> units;
    std::vector<double> params;
    for (int k = 0; k <= 20; ++k) {
      const double t = k / 20.0;
      params.push_back(t);
      Matrix u = Matrix::Zero(2, 2);
      u(0, 0) = std::polar(1.0, M_PI * t);
      u(1, 1) = std::polar(1.0, -M_PI * t);
      units.push_back(u);
    }
    const UnitaryPhasePath path = track_phases(units, params);
    const double up = path.tracks(20, 0) - path.tracks(0, 0);
    const double down = path.tracks(20, 1) - path.tracks(0, 1);
    CHECK(std::abs(up + down) <= 1e-9);
    CHECK(std::abs(std::abs(up) - M_PI) <= 1e-9);
  }

  SUBCASE("coarse step is rejected with the offending index") {
    std::vector<Matrix> units = {phase_matrix(0.0), phase_matrix(0.1),
                                 phase_matrix(1.5)};
    try {
      track_phases(units, {0.0, 0.5, 1.0});
      FAIL("expected StepTooCoarseError");
    } catch (const StepTooCoarseError& e) {
      CHECK(e.index == 1);
    }
  }
}

TEST_CASE("spectral_flow counts passages with the closed-right convention") {
  SUBCASE("constant path has zero flow") {
    std::mt19937_64 rng(7);
    const Matrix u = random_unitary(rng, 2);
    const UnitaryPhasePath path = track_phases({u, u}, {0.0, 1.0});
    CHECK(spectral_flow(path, M_PI).net_flow == 0);
    CHECK(spectral_flow(path, 0.0).net_flow == 0);
  }

  SUBCASE("upward passage through pi") {
    std::vector<Matrix> units;
    std::vector<double> params;
    for (int k = 0; k <= 10; ++k) {
      params.push_back(k / 10.0);
      units.push_back(phase_matrix(M_PI - 1.0 + 2.0 * (k / 10.0)));
    }
    const FlowReport fr = spectral_flow(track_phases(units, params), M_PI);
    CHECK(fr.net_flow == 1);
    REQUIRE(fr.crossings.size() == 1);
    CHECK(fr.crossings[0].direction == 1);
    CHECK(fr.crossings[0].param == doctest::Approx(0.5));
  }

  SUBCASE("downward passage counts negatively") {
    std::vector<Matrix> units;
    std::vector<double> params;
    for (int k = 0; k <= 10; ++k) {
      params.push_back(k / 10.0);
      units.push_back(phase_matrix(M_PI + 0.5 - (k / 10.0)));
    }
    const FlowReport fr = spectral_flow(track_phases(units, params), M_PI);
    CHECK(fr.net_flow == -1);
  }

  SUBCASE("arrival at the target counts, departure does not") {
    std::vector<Matrix> arrive = {phase_matrix(M_PI - 0.4), phase_matrix(M_PI - 0.2),
                                  phase_matrix(M_PI)};
    const FlowReport up = spectral_flow(track_phases(arrive, {0, 0.5, 1.0}), M_PI);
    CHECK(up.net_flow == 1);
    CHECK(up.endpoint_hits_end == 1);

    std::vector<Matrix> depart = {phase_matrix(M_PI), phase_matrix(M_PI + 0.2),
                                  phase_matrix(M_PI + 0.4)};
    const FlowReport away =
        spectral_flow(track_phases(depart, {0, 0.5, 1.0}), M_PI);
    CHECK(away.net_flow == 0);
    CHECK(away.endpoint_hits_begin == 1);
  }
}

TEST_CASE("flow of linear unitary paths matches the closed form") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 25; ++iter) {
    const Eigen::Index l = 1 + iter % 3;
    Matrix k = random_hermitian(rng, l);
    k *= 4.0;  // several turns
    const UnitaryGenerator gen = [&k](double t) {
      return expm(Complex(0, 1) * (t * k));
    };
    for (double target : {0.0, M_PI, 1.1}) {
      const UnitaryPhasePath path = refine_adaptively(gen, 0.0, 1.0);
      const long flow = spectral_flow(path, target).net_flow;
      CHECK(flow == linear_generator_flow(k, target));
    }
  }
}

TEST_CASE("homotopy additivity and invariances") {
  std::mt19937_64 rng(19);
  const Matrix k = 5.0 * random_hermitian(rng, 2);
  const UnitaryGenerator gen = [&k](double t) {
    return expm(Complex(0, 1) * (t * k));
  };
  const double target = M_PI;

  SUBCASE("flow over [a,c] splits exactly at any interior point") {
    for (double b : {0.3, 0.5, 0.77}) {
      const long left =
          spectral_flow(refine_adaptively(gen, 0.0, b), target).net_flow;
      const long right =
          spectral_flow(refine_adaptively(gen, b, 1.0), target).net_flow;
      const long whole =
          spectral_flow(refine_adaptively(gen, 0.0, 1.0), target).net_flow;
      CHECK(left + right == whole);
    }
  }

  SUBCASE("concatenating a constant tail changes nothing") {
    const UnitaryGenerator padded = [&](double t) {
      return gen(std::min(t, 1.0));
    };
    const long base =
        spectral_flow(refine_adaptively(gen, 0.0, 1.0), target).net_flow;
    const long tail =
        spectral_flow(refine_adaptively(padded, 0.0, 1.5), target).net_flow;
    CHECK(base == tail);
  }

  SUBCASE("conjugation by a fixed unitary leaves the flow unchanged") {
    const Matrix w = random_unitary(rng, 2);
    const UnitaryGenerator conj = [&](double t) {
      return Matrix(w.adjoint() * gen(t) * w);
    };
    const long base =
        spectral_flow(refine_adaptively(gen, 0.0, 1.0), target).net_flow;
    const long rotated =
        spectral_flow(refine_adaptively(conj, 0.0, 1.0), target).net_flow;
    CHECK(base == rotated);
  }
}

TEST_CASE("refine_adaptively behaviour") {
  SUBCASE("smooth slow generator needs no interior samples") {
    Matrix k(1, 1);
    k << 0.3;
    const UnitaryGenerator gen = [&k](double t) {
      return expm(Complex(0, 1) * (t * k));
    };
    const UnitaryPhasePath path = refine_adaptively(gen, 0.0, 1.0);
    CHECK(path.samples() == 2);
  }

  SUBCASE("avoided crossing forces bisection") {
    const UnitaryGenerator gen = [](double t) {
      Matrix h(2, 2);
      h << 1.0 + 3.0 * (t - 0.5), 0.03, 0.03, 1.0 - 3.0 * (t - 0.5);
      return expm(Complex(0, 1) * h);
    };
    const UnitaryPhasePath path =
        refine_adaptively(gen, 0.0, 1.0, tol::dtheta_max, 24, {0.25, 0.5, 0.75});
    CHECK(path.samples() > 5);
  }

  SUBCASE("discontinuous generator exhausts the refinement") {
    const UnitaryGenerator gen = [](double t) {
      return phase_matrix(t < 0.5 ? 0.0 : M_PI);
    };
    CHECK_THROWS_AS(refine_adaptively(gen, 0.0, 1.0, tol::dtheta_max, 12),
                    RefinementExhaustedError);
  }
}

TEST_CASE("csv dump") {
  std::vector<Matrix> units = {phase_matrix(0.1), phase_matrix(0.2)};
  const UnitaryPhasePath path = track_phases(units, {0.0, 1.0});
  std::ostringstream os;
  write_path_csv(path, os);
  const std::string text = os.str();
  CHECK(text.rfind("param,track_0\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
