#pragma once

// Brute-force discrete least squares over the same quadrature inner product
// the solvers use, for cross-checking them on small instances.

#include <cstddef>
#include <vector>

#include "ridge/domain.hpp"
#include "ridge/solution.hpp"
#include "ridge/weighted.hpp"

namespace ridge {

/// Row per tensor node, column per (ridge axis i, axis-i node k). Entries are
/// sqrt(W) * w_i*(y) * e_ik(y_i), with e_ik the k-th Lagrange cardinal
/// function of axis i and W the tensor quadrature weight.
struct DiscreteLSModel {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t r = 0;
  std::size_t q = 0;
  std::vector<double> design;  // row-major rows x cols
  std::vector<double> rhs;     // sqrt(W) * f*
  std::vector<double> sqrt_weights;
};

DiscreteLSModel build_ls_model(const WeightedProblem& p);

struct OracleResult {
  std::vector<double> coefficients;  // column order of the model
  double residual_norm = 0.0;        // ||f* - approximant||_{L2(Y)}
  std::size_t rank = 0;
  std::vector<double> approximant;   // node values of the fitted sum
};

/// Minimum-norm least-squares fit by complete orthogonal decomposition,
/// treating pivots below 1e-10 of the largest as zero.
OracleResult solve_ls(const DiscreteLSModel& model);

/// Components and E(f) of the oracle fit, packaged like a solver result.
ApproxSolution oracle_solution(const WeightedProblem& p, const OracleResult& result);

struct CompareReport {
  double solver_error = 0.0;
  double oracle_error = 0.0;
  double error_gap = 0.0;        // |E_solver - E_oracle|
  double approximant_gap = 0.0;  // max node-wise difference of the fitted sums
};

CompareReport compare(const WeightedProblem& p, const ApproxSolution& sol,
                      const OracleResult& oracle);

}  // namespace ridge
