#ifndef PRUEFER_PROBLEM_IO_HPP
#define PRUEFER_PROBLEM_IO_HPP

// Problem loading: builtin names ("free_scalar", "paper_example_sec7",
// "free_chain(N)") or JSON files.
//
// Continuum file: { "kind": "sturm_liouville" | "general_hamiltonian",
//   "L": int, "psi0": 2L x L array, "psi1": 2L x L array,
//   "tables": { "x": [...], "p": [...], "q": [...], "v": [...] } }
// with complex entries written as [re, im] (bare numbers are real) and
// coefficient tables interpolated piecewise-linearly in x.  General kind
// uses tables "V" and "P" of 2L x 2L matrices.  A file may also be
// { "builtin": "<name>" }.
//
// Jacobi file: { "L": int, "N": int, "V": [N matrices], "T": [N-1 matrices] }.

#include "pruefer/contsys.hpp"
#include "pruefer/jacobi.hpp"

#include <optional>
#include <string>

namespace pruefer {

struct InputError : Error { using Error::Error; };

struct LoadedProblem {
  std::optional<ContinuumProblem> continuum;
  std::optional<BlockJacobiOperator> jacobi;

  bool is_continuum() const { return continuum.has_value(); }
  bool is_jacobi() const { return jacobi.has_value(); }
};

// Resolve a builtin name or load a JSON problem file.
LoadedProblem load_problem(const std::string& name_or_path);

// Parse the JSON text of a problem description.
LoadedProblem parse_problem_json(const std::string& text);

}  // namespace pruefer

#endif
