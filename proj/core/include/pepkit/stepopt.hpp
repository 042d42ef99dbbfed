#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "pepkit/bounds.hpp"
#include "pepkit/schedule.hpp"
#include "pepkit/sdp.hpp"

namespace pepkit {

// Linearized step-size optimization: treat the products
// r_{i,k} = lambda_i h_k^(i) + tau_i sum_{t=k+1..i} h_k^(t) as free
// variables and minimize t/2 subject to the same bordered LMI.  Variables
// are ordered (r_{1,0}, r_{2,0}, r_{2,1}, ..., r_{n,n-1}, lambda_1..lambda_n, t).
SdpProblem build_lin(int n);

struct LinSolution {
  int n = 0;
  double factor = 0.0;            // t/2 at the optimum
  Eigen::MatrixXd r;              // n x n lower-triangular, r(i-1, k)
  Eigen::VectorXd lambda;         // lambda_1..lambda_n
  Eigen::VectorXd tau;            // tau_0..tau_n (from the multiplier-set map)
  SdpStatus status = SdpStatus::kOptimal;
  double gap = 0.0;
  int iterations = 0;
};
LinSolution solve_lin(int n, const SolveConfig& cfg = {});

enum class RecoveryPath { kBackSubstitution, kForwardSolve };

std::string to_string(RecoveryPath path);

// Un-linearizes a LinSolution into step coefficients.  Tries the
// back-substitution rule
//   h_k^(i) = (tau_i sum_{t=k+1..i-1} h_k^(t) - r_{i,k}) / lambda_i
// first; if substituting the result back into the r definition leaves a
// large residual, falls back to the forward solve
//   h_k^(i) = (r_{i,k} - tau_i sum_{t=k+1..i-1} h_k^(t)) / (lambda_i + tau_i).
// Throws std::runtime_error if neither path reproduces r.
struct RecoveredSchedule {
  StepSchedule schedule;
  RecoveryPath path;
  double substitution_residual = 0.0;  // max |r - r(h)| over entries
};
RecoveredSchedule recover_steps(const LinSolution& sol, double tol = 1e-6);

// Certifies the recovered schedule through the ordinary dual SDP and
// compares against the relaxation value.
struct CrosscheckReport {
  double lin_factor = 0.0;
  double schedule_factor = 0.0;
  double difference = 0.0;  // |lin - schedule|
  SdpStatus status = SdpStatus::kOptimal;
};
CrosscheckReport crosscheck(const LinSolution& sol, const RecoveredSchedule& rec,
                            const SolveConfig& cfg = {});

// Pretty-prints a schedule as update rules
//   x_i <- x_{i-1} + (c/L) g(x_k) + ...
// with aligned signed coefficients, one line per step.
std::string render_schedule(const StepSchedule& s, int digits = 4);

}  // namespace pepkit
