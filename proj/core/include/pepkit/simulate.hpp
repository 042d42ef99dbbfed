#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pepkit/schedule.hpp"

namespace pepkit {

struct Evaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

// First-order oracle for an L-smooth convex function on R^dim.
class FunctionOracle {
 public:
  using EvalFn = std::function<Evaluation(const Eigen::VectorXd&)>;

  FunctionOracle(int dim, double lipschitz, EvalFn eval);

  int dim() const { return dim_; }
  double lipschitz() const { return lipschitz_; }
  Evaluation operator()(const Eigen::VectorXd& x) const;

  // Known-minimizer metadata; set by the built-in test functions.
  void set_minimizer(Eigen::VectorXd minimizer, double optimal_value);
  const std::optional<Eigen::VectorXd>& minimizer() const { return minimizer_; }
  std::optional<double> optimal_value() const { return optimal_value_; }

 private:
  int dim_;
  double lipschitz_;
  EvalFn eval_;
  std::optional<Eigen::VectorXd> minimizer_;
  std::optional<double> optimal_value_;
};

// Worst-case instance for constant-step gradient descent: with
// kappa = 1/(2nh+1), the function is the quadratic (L/2)||x||^2 inside
// radius kappa*R and the affine-norm L R (kappa ||x/R|| - kappa^2/2)
// outside; minimum 0 at the origin.  Gradient descent started at distance R
// lands exactly on the factor 1/(4nh+2).
FunctionOracle phi1_oracle(int n, double h, double lipschitz, double radius, int dim = 4);

// f(x) = (L/2) ||x||^2; gradient descent from distance R attains the factor
// (1-h)^(2n) / 2.
FunctionOracle phi2_oracle(double lipschitz, int dim = 4);

// f(x) = 1/2 x' Q x with symmetric 0 <= Q <= L I, largest eigenvalue
// exactly L, minimizer at the origin; deterministic in the seed.
FunctionOracle random_quadratic_oracle(int dim, double lipschitz, std::uint64_t seed);

struct Trajectory {
  StepSchedule schedule;
  double lipschitz = 1.0;
  std::vector<Eigen::VectorXd> points;  // x_0..x_N
  std::vector<double> values;
  std::vector<Eigen::VectorXd> gradients;
  std::optional<Eigen::VectorXd> minimizer;
  std::optional<double> optimal_value;

  int steps() const { return schedule.steps(); }
  // max relative deviation of the recorded points from the schedule
  // recurrence applied to the recorded gradients.
  double reconstruction_residual() const;
};

// Runs x_i = x_{i-1} - (1/L) sum_k h_k^(i) g(x_k) for i = 1..N and records
// points, values and gradients (N+1 of each).  Throws std::runtime_error
// naming the step if a non-finite value or gradient is produced.
Trajectory run_fo(const FunctionOracle& oracle, const StepSchedule& s,
                  const Eigen::VectorXd& x0);

// Two-sequence accelerated method, run in its native form:
//   y_1 = x_0;  x_i = y_i - (1/L) g(y_i);
//   y_{i+1} = x_i + ((t_i - 1)/t_{i+1}) (x_i - x_{i-1}).
// Gradients are evaluated at the auxiliary points y_i only.
struct FgmTrajectory {
  Eigen::VectorXd start;                  // x_0
  std::vector<Eigen::VectorXd> main;      // x_1..x_n
  std::vector<Eigen::VectorXd> aux;       // y_1..y_n (y_1 = x_0)
  std::vector<double> main_values;
  std::vector<double> aux_values;
  std::vector<Eigen::VectorXd> gradients;  // g(y_1)..g(y_n)
};
FgmTrajectory run_fgm_native(const FunctionOracle& oracle, int n,
                             const Eigen::VectorXd& x0);

// Samples random point pairs and evaluates
//   (1/2L) ||g_x - g_y||^2 - (f(x) - f(y) - <g_y, x - y>);
// positive values are violations of the smooth-convex class inequality.
struct CocoercivityReport {
  int pairs = 0;
  int violations = 0;
  double max_violation = 0.0;
};
CocoercivityReport cocoercivity_check(const FunctionOracle& oracle, int num_pairs,
                                      std::uint64_t seed, double tol = 1e-9);

// Evaluates all four Gram-space constraint families on a simulated
// trajectory (see pep.hpp for the scaling).  Requires minimizer metadata
// with ||x_0 - x*|| > 0; throws std::invalid_argument otherwise.
struct FeasibilityReport {
  double max_violation_a = 0.0;
  double max_violation_b = 0.0;
  double max_violation_c = 0.0;
  double max_violation_d = 0.0;
  double final_delta = 0.0;  // (f(x_N) - f*) / (L R^2)

  double max_violation() const;
};
FeasibilityReport primal_feasibility_check(const Trajectory& t);

// CSV columns: step,value,gradient_norm,distance_to_opt.  The distance
// column is left empty when the trajectory has no minimizer metadata.
void write_trajectory_csv(const Trajectory& t, std::ostream& os);

}  // namespace pepkit
