#pragma once

#include <Eigen/Dense>

#include <string>

#include "pepkit/schedule.hpp"
#include "pepkit/sdp.hpp"

namespace pepkit {

// Gram-space constraint matrices of the worst-case performance problem for a
// schedule of length N.  With the scaled trajectory data
//
//   ghat_i = f'(x_i) / (L R),   delta_i = (f(x_i) - f*) / (L R^2),
//   nu = (x* - x_0) / R,        R = ||x_0 - x*||,
//
// and G the (N+1) x d matrix whose rows are ghat_0..ghat_N, the co-coercivity
// constraints of the performance problem read
//
//   tr(G' a(i,j) G) <= delta_i - delta_j                 (i < j)
//   tr(G' b(i,j) G) <= delta_i - delta_j                 (j < i)
//   tr(G' c(i) G)   <= delta_i
//   tr(G' d(i) G) + <nu, G' u_i> <= -delta_i
//
// where u_i is the i-th canonical basis vector of R^(N+1).  All matrices are
// (N+1) x (N+1) symmetric and are built on demand (each costs O(N^2)).
class PepMatrices {
 public:
  explicit PepMatrices(StepSchedule schedule);

  int steps() const { return schedule_.steps(); }
  const StepSchedule& schedule() const { return schedule_; }

  Eigen::MatrixXd a(int i, int j) const;  // 0 <= i < j <= N
  Eigen::MatrixXd b(int i, int j) const;  // 0 <= j < i <= N
  Eigen::MatrixXd c(int i) const;         // 0 <= i <= N
  Eigen::MatrixXd d(int i) const;         // 0 <= i <= N

 private:
  StepSchedule schedule_;
};

PepMatrices build_constraint_matrices(const StepSchedule& s);

// Multipliers of the dual bound problem.  Valid certificates satisfy the
// equalities tau_0 = lambda_1, tau_i = lambda_{i+1} - lambda_i (1 <= i < N),
// tau_N = 1 - lambda_N, with lambda >= 0 and tau >= 0; the proven bound
// factor is t/2.
struct DualCertificate {
  Eigen::VectorXd lambda;  // lambda_1..lambda_N
  Eigen::VectorXd tau;     // tau_0..tau_N
  double t = 0.0;

  double factor() const { return 0.5 * t; }
};

// tau implied by the multiplier equalities.
Eigen::VectorXd lambda_to_tau(const Eigen::VectorXd& lambda);

struct MultiplierCheck {
  bool ok = false;
  double max_equality_residual = 0.0;
  double min_component = 0.0;  // most negative lambda/tau entry (0 if none)
  std::string detail;          // human-readable description of violations
};
MultiplierCheck check_multiplier_set(const DualCertificate& cert, double tol = 1e-9);

// The bordered (N+2) x (N+2) dual matrix
//
//   [ sum_i lambda_i a(i-1,i) + sum_i tau_i d(i)   tau/2 ]
//   [ tau'/2                                       t/2   ]
//
// Only the consecutive a-family and the d-family enter; the certificate
// proves f(x_N) - f* <= (t/2) L R^2 when this matrix is PSD.  Throws
// std::invalid_argument naming the first violated equality when (lambda,
// tau) breaks the multiplier equalities by more than eq_tol.
Eigen::MatrixXd assemble_dual_lmi(const PepMatrices& m, const DualCertificate& cert,
                                  double eq_tol = 1e-7);

// For constant-step gradient schedules the weighted constraint sum splits
// into two fixed matrices:  2 (sum lambda_i a(i-1,i) + sum tau_i d(i))
// = (1-h) s0 + h s1, with tau = lambda_to_tau(lambda) = q.
struct GmDualMatrices {
  Eigen::MatrixXd s0;  // tridiagonal block
  Eigen::MatrixXd s1;  // dense block
  Eigen::VectorXd q;   // border weights
};
GmDualMatrices build_gm_dual_matrices(int n, const Eigen::VectorXd& lambda);

// The dual bound problem as an SDP over x = (lambda_1..lambda_N, t) with tau
// eliminated through the equalities: minimize t/2 subject to the bordered
// LMI, lambda >= 0 and tau(lambda) >= 0.
SdpProblem dual_sdp_problem(const PepMatrices& m);

// Certificate from a solution vector of dual_sdp_problem.
DualCertificate certificate_from_solution(const PepMatrices& m, const Eigen::VectorXd& x);

// Row-major text dump, 17 significant digits, one row per line.
std::string dump_matrix(const Eigen::MatrixXd& m);

}  // namespace pepkit
