#pragma once

// Exact solvers for discrete optimal transport: the assignment problem
// (equal-size, uniform weights) and the balanced transportation problem
// (network simplex). Both return dual potentials so callers can certify
// optimality through complementary slackness.

#include <cstddef>
#include <vector>

namespace affperm {

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct AssignmentResult {
  /// column assigned to each row
  std::vector<int> column_of_row;
  double cost = 0;
  /// row_potential[i] + col_potential[j] <= cost(i, j), equality on the assignment
  std::vector<double> row_potential;
  std::vector<double> col_potential;
};

/// Minimum-cost perfect matching on a square cost matrix (shortest augmenting
/// paths with potentials, O(n^3)).
AssignmentResult solve_assignment(const Matrix& cost);

struct TransportResult {
  Matrix flow;
  double cost = 0;
  std::vector<double> supply_potential;
  std::vector<double> demand_potential;
  long pivots = 0;
};

/// Minimum-cost flow from `supply` to `demand` (equal totals) with cost(i, j)
/// per unit on each source/sink pair. Primal network simplex on the bipartite
/// graph, block-search pricing, strongly feasible leaving-arc rule.
TransportResult solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                                const Matrix& cost);

struct Certificate {
  double primal = 0;
  double dual = 0;
  /// max over cells of (u_i + v_j - c_ij), clipped at 0
  double dual_infeasibility = 0;
  /// max over cells with positive flow of |c_ij - u_i - v_j|
  double slackness_violation = 0;
  /// max marginal mismatch
  double marginal_error = 0;

  bool certified(double tol = 1e-9) const {
    return dual_infeasibility <= tol && slackness_violation <= tol && marginal_error <= tol;
  }
};

Certificate certify(const std::vector<double>& supply, const std::vector<double>& demand, const Matrix& cost,
                    const Matrix& flow, const std::vector<double>& u, const std::vector<double>& v);

}  // namespace affperm
