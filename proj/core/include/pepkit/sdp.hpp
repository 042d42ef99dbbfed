#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <string>
#include <vector>

namespace pepkit {

// Linear-matrix-inequality minimization over scalar variables:
//
//   minimize    objective' x
//   subject to  lmi_constant + sum_j x_j lmi_coeffs[j]  >=  0  (PSD),
//               x_j >= 0 for j in nonnegative_vars,
//               ineq_lhs x + ineq_rhs >= 0 componentwise,
//               eq_lhs x = eq_rhs.
//
// All LMI matrices must be symmetric (checked to 1e-12, relative) and share
// one dimension.  Scalar inequalities are folded into the cone as 1x1
// diagonal blocks by the solver; equalities are eliminated in a presolve
// step, so the interior-point core only ever sees a single PSD cone.
struct SdpProblem {
  Eigen::VectorXd objective;
  Eigen::SparseMatrix<double> lmi_constant;
  std::vector<Eigen::SparseMatrix<double>> lmi_coeffs;
  std::vector<int> nonnegative_vars;
  Eigen::MatrixXd ineq_lhs;  // 0x0 when absent
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq_lhs;    // 0x0 when absent
  Eigen::VectorXd eq_rhs;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int lmi_dim() const { return static_cast<int>(lmi_constant.rows()); }
};

enum class SdpStatus { kOptimal, kInfeasible, kUnbounded, kMaxIterations };
std::string to_string(SdpStatus s);

struct SolveConfig {
  double tolerance = 1e-8;  // on relative gap and scaled residuals
  int max_iterations = 200;
  int verbosity = 0;                      // 1: per-iteration line on stderr
  std::ostream* iteration_log = nullptr;  // CSV: iteration,gap,primal_res,dual_res
};

struct SdpSolution {
  SdpStatus status = SdpStatus::kMaxIterations;
  Eigen::VectorXd x;
  double objective_value = 0.0;
  int iterations = 0;
  // Residuals of the internal conic form at the returned point; status
  // kOptimal means all three are below the configured tolerance.
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

// Dense primal-dual interior-point method (HKM scaling, predictor-corrector).
// Deterministic: identical inputs give identical iterates.  Sized for LMI
// dimensions up to a few hundred; the Schur complement is formed densely.
SdpSolution solve_sdp(const SdpProblem& p, const SolveConfig& cfg = {});

// Smallest eigenvalue of a symmetric matrix.  Throws std::invalid_argument
// when max|M - M'| exceeds 1e-12 * max(1, max|M|).
double min_eigenvalue(const Eigen::MatrixXd& m);
bool is_psd(const Eigen::MatrixXd& m, double tol = 1e-9);

}  // namespace pepkit
