#include "pruefer/specflow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

namespace pruefer {

namespace {

double circ_dist(double a, double b) { return std::abs(wrap_phase(a - b)); }

// Lifted-copy index of y relative to target: floor((y - theta)/2pi) with a
// guard that pulls values within 1e-9 of an exact multiple onto it.
long copy_index(double y, double theta) {
  const double q = (y - theta) / (2.0 * M_PI);
  const double r = std::round(q);
  if (std::abs(q - r) < 1e-9) return static_cast<long>(r);
  return static_cast<long>(std::floor(q));
}

std::vector<double> wrapped_phases(const Matrix& u) {
  const UnitaryEig eig = unitary_eig(u);
  std::vector<double> out(eig.phases.data(), eig.phases.data() + eig.phases.size());
  return out;
}

}  // namespace

std::vector<double> assign_phases(const std::vector<double>& base,
                                  const std::vector<double>& fresh) {
  const std::size_t n = base.size();
  if (fresh.size() != n)
    throw Error("assign_phases: multiset sizes differ");
  std::vector<int> pick_for(n);

  if (n <= 8) {
    const std::size_t full = (std::size_t{1} << n) - 1;
    std::vector<double> dp(full + 1, std::numeric_limits<double>::infinity());
    std::vector<int> last(full + 1, -1);
    dp[0] = 0.0;
    for (std::size_t mask = 0; mask <= full; ++mask) {
      if (!std::isfinite(dp[mask])) continue;
      const std::size_t i = static_cast<std::size_t>(std::popcount(mask));
      if (i == n) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask & (std::size_t{1} << j)) continue;
        const double c = dp[mask] + circ_dist(fresh[j], base[i]);
        if (c < dp[mask | (std::size_t{1} << j)]) {
          dp[mask | (std::size_t{1} << j)] = c;
          last[mask | (std::size_t{1} << j)] = static_cast<int>(j);
        }
      }
    }
    std::size_t mask = full;
    for (std::size_t i = n; i-- > 0;) {
      pick_for[i] = last[mask];
      mask ^= std::size_t{1} << pick_for[i];
    }
  } else {
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      int best = -1;
      double bestc = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double c = circ_dist(fresh[j], base[i]);
        if (c < bestc) { bestc = c; best = static_cast<int>(j); }
      }
      used[best] = true;
      pick_for[i] = best;
    }
  }

  std::vector<double> delta(n);
  for (std::size_t i = 0; i < n; ++i)
    delta[i] = wrap_phase(fresh[pick_for[i]] - base[i]);
  return delta;
}

UnitaryPhasePath track_phases(const std::vector<Matrix>& unitaries,
                              const std::vector<double>& params,
                              double dtheta_max) {
  if (unitaries.size() != params.size() || params.size() < 2)
    throw Error("track_phases: need >= 2 samples with matching parameters");
  for (std::size_t k = 1; k < params.size(); ++k)
    if (!(params[k] > params[k - 1]))
      throw Error("track_phases: parameters must be strictly ascending");

  const Eigen::Index l = unitaries.front().rows();
  UnitaryPhasePath path;
  path.params = params;
  path.unitaries = unitaries;
  path.tracks.resize(static_cast<Eigen::Index>(params.size()), l);

  const std::vector<double> first = wrapped_phases(unitaries.front());
  for (Eigen::Index j = 0; j < l; ++j) path.tracks(0, j) = first[j];

  for (std::size_t k = 1; k < params.size(); ++k) {
    std::vector<double> base(l), cur = wrapped_phases(unitaries[k]);
    for (Eigen::Index j = 0; j < l; ++j)
      base[j] = wrap_phase(path.tracks(static_cast<Eigen::Index>(k) - 1, j));
    const std::vector<double> delta = assign_phases(base, cur);
    for (Eigen::Index j = 0; j < l; ++j) {
      if (std::abs(delta[j]) > dtheta_max) throw StepTooCoarseError(k - 1);
      path.tracks(static_cast<Eigen::Index>(k), j) =
          path.tracks(static_cast<Eigen::Index>(k) - 1, j) + delta[j];
    }
  }
  return path;
}

FlowReport spectral_flow(const UnitaryPhasePath& path, double target_phase,
                         double tol_phase) {
  FlowReport report;
  const Eigen::Index l = path.fiber();
  const Eigen::Index last = static_cast<Eigen::Index>(path.samples()) - 1;

  const auto snap = [&](double x) {
    const double d = wrap_phase(x - target_phase);
    return (std::abs(d) <= tol_phase) ? x - d : x;
  };

  for (Eigen::Index j = 0; j < l; ++j) {
    if (circ_dist(path.tracks(0, j), target_phase) <= tol_phase)
      ++report.endpoint_hits_begin;
    if (circ_dist(path.tracks(last, j), target_phase) <= tol_phase)
      ++report.endpoint_hits_end;

    const double s = snap(path.tracks(0, j));
    const double e = snap(path.tracks(last, j));
    report.net_flow += copy_index(e, target_phase) - copy_index(s, target_phase);

    // per-step crossing localization (diagnostic; sums to net_flow)
    long prev = copy_index(s, target_phase);
    for (Eigen::Index k = 1; k <= last; ++k) {
      const double a = (k == 1) ? s : path.tracks(k - 1, j);
      const double b = (k == last) ? e : path.tracks(k, j);
      const long cur = copy_index(b, target_phase);
      while (prev != cur) {
        const int dir = (cur > prev) ? +1 : -1;
        const long m = (dir > 0) ? prev + 1 : prev;
        const double theta_l = target_phase + 2.0 * M_PI * static_cast<double>(m);
        double t = path.params[k];
        if (std::abs(b - a) > 0) {
          const double frac = (theta_l - a) / (b - a);
          t = path.params[k - 1] + (path.params[k] - path.params[k - 1]) *
                                       std::clamp(frac, 0.0, 1.0);
        }
        report.crossings.push_back({t, static_cast<int>(j), dir});
        prev += dir;
      }
    }
  }

  std::sort(report.crossings.begin(), report.crossings.end(),
            [](const Crossing& a, const Crossing& b) { return a.param < b.param; });

  // flag crossings that are numerically coincident at the target
  for (std::size_t c = 1; c < report.crossings.size(); ++c) {
    const double sep = report.crossings[c].param - report.crossings[c - 1].param;
    // convert the phase window into parameter units with a local speed scale
    const double span = path.params.back() - path.params.front();
    const double speed = 2.0 * M_PI * static_cast<double>(l) / std::max(span, 1e-300);
    if (sep * speed < 10.0 * tol_phase)
      report.tight_clusters.push_back(report.crossings[c].param);
  }
  return report;
}

UnitaryPhasePath refine_adaptively(const UnitaryGenerator& gen, double a,
                                   double b, double dtheta_max, int max_depth,
                                   std::vector<double> initial) {
  if (!(b > a)) throw Error("refine_adaptively: need a < b");

  struct Node {
    double param;
    int depth;
  };
  std::vector<Node> grid;
  grid.push_back({a, 0});
  std::sort(initial.begin(), initial.end());
  for (double x : initial)
    if (x > a && x < b) grid.push_back({x, 0});
  grid.push_back({b, 0});

  std::map<double, Matrix> cache;
  const auto unit_at = [&](double x) -> const Matrix& {
    auto it = cache.find(x);
    if (it == cache.end()) it = cache.emplace(x, gen(x)).first;
    return it->second;
  };
  const auto coarse = [&](double x0, double x1) {
    const std::vector<double> p0 = wrapped_phases(unit_at(x0));
    const std::vector<double> p1 = wrapped_phases(unit_at(x1));
    const std::vector<double> d = assign_phases(p0, p1);
    double m = 0.0;
    for (double v : d) m = std::max(m, std::abs(v));
    return m > dtheta_max;
  };

  for (std::size_t k = 0; k + 1 < grid.size();) {
    if (!coarse(grid[k].param, grid[k + 1].param)) {
      ++k;
      continue;
    }
    const int depth = std::max(grid[k].depth, grid[k + 1].depth);
    if (depth >= max_depth)
      throw RefinementExhaustedError(
          "refine_adaptively: max bisection depth reached near parameter " +
          std::to_string(grid[k].param));
    const double mid = 0.5 * (grid[k].param + grid[k + 1].param);
    grid.insert(grid.begin() + static_cast<std::ptrdiff_t>(k) + 1,
                {mid, depth + 1});
  }

  std::vector<double> params;
  std::vector<Matrix> units;
  params.reserve(grid.size());
  for (const Node& n : grid) {
    params.push_back(n.param);
    units.push_back(unit_at(n.param));
  }
  return track_phases(units, params, dtheta_max);
}

void write_path_csv(const UnitaryPhasePath& path, std::ostream& os) {
  os << "param";
  for (Eigen::Index j = 0; j < path.fiber(); ++j) os << ",track_" << j;
  os << "\n";
  char buf[64];
  for (std::size_t k = 0; k < path.samples(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g", path.params[k]);
    os << buf;
    for (Eigen::Index j = 0; j < path.fiber(); ++j) {
      std::snprintf(buf, sizeof buf, "%.12g",
                    path.tracks(static_cast<Eigen::Index>(k), j));
      os << ',' << buf;
    }
    os << "\n";
  }
}

}  // namespace pruefer
