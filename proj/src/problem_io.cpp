#include "pruefer/problem_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace pruefer {

namespace {

using nlohmann::json;

Complex parse_entry(const json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2)
    return Complex(e[0].get<double>(), e[1].get<double>());
  throw InputError("problem file: matrix entries must be numbers or [re, im]");
}

Matrix parse_matrix(const json& m, Eigen::Index rows, Eigen::Index cols) {
  if (!m.is_array() || static_cast<Eigen::Index>(m.size()) != rows)
    throw InputError("problem file: bad matrix row count");
  Matrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = m[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InputError("problem file: bad matrix column count");
    for (Eigen::Index c = 0; c < cols; ++c)
      out(r, c) = parse_entry(row[static_cast<std::size_t>(c)]);
  }
  return out;
}

// piecewise-linear interpolant over an ascending grid covering [0, 1]
MatrixFn table_interpolant(std::vector<double> xs, std::vector<Matrix> values) {
  if (xs.size() < 2 || xs.size() != values.size())
    throw InputError("problem file: coefficient table needs matching x and values");
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (!(xs[k] > xs[k - 1]))
      throw InputError("problem file: table x values must be ascending");
  if (xs.front() > 0.0 || xs.back() < 1.0)
    throw InputError("problem file: table must cover [0, 1]");
  return [xs = std::move(xs), values = std::move(values)](double x) -> Matrix {
    if (x <= xs.front()) return values.front();
    if (x >= xs.back()) return values.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
    return (1.0 - w) * values[hi - 1] + w * values[hi];
  };
}

MatrixFn load_table(const json& tables, const std::string& key,
                    const std::vector<double>& xs, Eigen::Index dim) {
  if (!tables.contains(key))
    throw InputError("problem file: missing coefficient table \"" + key + "\"");
  const json& arr = tables[key];
  if (!arr.is_array() || arr.size() != xs.size())
    throw InputError("problem file: table \"" + key + "\" length mismatch");
  std::vector<Matrix> values;
  values.reserve(arr.size());
  for (const json& m : arr) values.push_back(parse_matrix(m, dim, dim));
  return table_interpolant(xs, std::move(values));
}

LoadedProblem parse_continuum(const json& j) {
  const Eigen::Index l = j.at("L").get<Eigen::Index>();
  if (l < 1) throw InputError("problem file: L must be positive");
  const std::string kind = j.at("kind").get<std::string>();
  LagrangianFrame psi0(parse_matrix(j.at("psi0"), 2 * l, l));
  LagrangianFrame psi1(parse_matrix(j.at("psi1"), 2 * l, l));

  const json& tables = j.at("tables");
  std::vector<double> xs = tables.at("x").get<std::vector<double>>();

  LoadedProblem out;
  if (kind == "sturm_liouville") {
    out.continuum = ContinuumProblem::sturm_liouville(
        l, load_table(tables, "p", xs, l), load_table(tables, "q", xs, l),
        load_table(tables, "v", xs, l), std::move(psi0), std::move(psi1));
  } else if (kind == "general_hamiltonian") {
    out.continuum = ContinuumProblem::general(
        l, load_table(tables, "V", xs, 2 * l), load_table(tables, "P", xs, 2 * l),
        std::move(psi0), std::move(psi1));
  } else {
    throw InputError("problem file: unknown kind \"" + kind + "\"");
  }
  return out;
}

LoadedProblem parse_jacobi(const json& j) {
  const Eigen::Index l = j.at("L").get<Eigen::Index>();
  const int n = j.at("N").get<int>();
  if (l < 1 || n < 2) throw InputError("problem file: need L >= 1 and N >= 2");
  const json& vj = j.at("V");
  const json& tj = j.at("T");
  if (static_cast<int>(vj.size()) != n || static_cast<int>(tj.size()) != n - 1)
    throw InputError("problem file: expected N potentials and N-1 hoppings");
  std::vector<Matrix> v, t;
  for (const json& m : vj) v.push_back(parse_matrix(m, l, l));
  for (const json& m : tj) t.push_back(parse_matrix(m, l, l));
  LoadedProblem out;
  out.jacobi = BlockJacobiOperator(std::move(v), std::move(t));
  return out;
}

}  // namespace

LoadedProblem parse_problem_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("problem file: JSON parse error: ") + e.what());
  }
  try {
    if (j.contains("builtin")) return load_problem(j["builtin"].get<std::string>());
    if (j.contains("V") && j.contains("T")) return parse_jacobi(j);
    if (j.contains("kind")) return parse_continuum(j);
  } catch (const json::exception& e) {
    throw InputError(std::string("problem file: ") + e.what());
  }
  throw InputError("problem file: expected a continuum or Jacobi description");
}

LoadedProblem load_problem(const std::string& name_or_path) {
  LoadedProblem out;
  if (name_or_path == "free_scalar") {
    out.continuum = ContinuumProblem::free_scalar();
    return out;
  }
  if (name_or_path == "paper_example_sec7") {
    out.continuum = ContinuumProblem::paper_example_sec7();
    return out;
  }
  static const std::regex chain_re(R"(free_chain\((\d+)\))");
  std::smatch m;
  if (std::regex_match(name_or_path, m, chain_re)) {
    out.jacobi = BlockJacobiOperator::free_chain(std::stoi(m[1].str()));
    return out;
  }
  std::ifstream in(name_or_path);
  if (!in)
    throw InputError("cannot open problem \"" + name_or_path +
                     "\" (not a builtin name or readable file)");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_json(ss.str());
}

}  // namespace pruefer
