#include "pepkit/stepopt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pepkit/pep.hpp"

namespace pepkit {

namespace {

int r_index(int i, int k) {
  // Row-major position of r_{i,k} (1 <= i, 0 <= k < i) in the variable list.
  return (i - 1) * i / 2 + k;
}

// tau(lambda) as a matrix/offset pair, matching lambda_to_tau.
void tau_affine(int n, Eigen::MatrixXd* t, Eigen::VectorXd* t0) {
  *t = Eigen::MatrixXd::Zero(n + 1, n);
  (*t)(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    (*t)(i, i) = 1.0;
    (*t)(i, i - 1) = -1.0;
  }
  (*t)(n, n - 1) = -1.0;
  *t0 = Eigen::VectorXd::Zero(n + 1);
  (*t0)(n) = 1.0;
}

// Substitutes a candidate schedule back into the bilinear definition of r
// and returns the largest absolute mismatch.
double substitution_residual(const std::vector<std::vector<double>>& rows,
                             const Eigen::MatrixXd& r, const Eigen::VectorXd& lambda,
                             const Eigen::VectorXd& tau) {
  const int n = static_cast<int>(lambda.size());
  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    for (int k = 0; k < i; ++k) {
      double chain = 0.0;  // sum_{t=k+1}^{i} h_k^(t)
      for (int t = k + 1; t <= i; ++t) {
        chain += rows[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(k)];
      }
      const double rebuilt =
          lambda(i - 1) * rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)] +
          tau(i) * chain;
      worst = std::max(worst, std::abs(rebuilt - r(i - 1, k)));
    }
  }
  return worst;
}

bool rows_finite(const std::vector<std::vector<double>>& rows) {
  for (const auto& row : rows) {
    for (double v : row) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

}  // namespace

std::string to_string(RecoveryPath path) {
  return path == RecoveryPath::kBackSubstitution ? "back-substitution" : "forward-solve";
}

SdpProblem build_lin(int n) {
  if (n < 1) throw std::invalid_argument("build_lin: n must be positive");
  const int num_r = n * (n + 1) / 2;
  const int num_vars = num_r + n + 1;
  const int dim = n + 2;
  Eigen::MatrixXd t;
  Eigen::VectorXd t0;
  tau_affine(n, &t, &t0);

  SdpProblem p;
  p.objective = Eigen::VectorXd::Zero(num_vars);
  p.objective(num_vars - 1) = 0.5;

  Eigen::MatrixXd f0 = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i <= n; ++i) f0(i, i) += 0.5 * t0(i);
  f0.block(0, n + 1, n + 1, 1) += 0.5 * t0;
  f0.block(n + 1, 0, 1, n + 1) += 0.5 * t0.transpose();
  p.lmi_constant = f0.sparseView();

  p.lmi_coeffs.reserve(static_cast<std::size_t>(num_vars));
  for (int i = 1; i <= n; ++i) {
    for (int k = 0; k < i; ++k) {
      Eigen::MatrixXd f = Eigen::MatrixXd::Zero(dim, dim);
      f(i, k) = 0.5;
      f(k, i) = 0.5;
      p.lmi_coeffs.push_back(f.sparseView());
    }
  }
  for (int j = 0; j < n; ++j) {
    const int i = j + 1;  // lambda_{j+1} weights the (x_{i-1}, x_i) pair
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(dim, dim);
    f(i - 1, i - 1) += 0.5;
    f(i, i) += 0.5;
    f(i - 1, i) -= 0.5;
    f(i, i - 1) -= 0.5;
    for (int row = 0; row <= n; ++row) f(row, row) += 0.5 * t(row, j);
    f.block(0, n + 1, n + 1, 1) += 0.5 * t.col(j);
    f.block(n + 1, 0, 1, n + 1) += 0.5 * t.col(j).transpose();
    p.lmi_coeffs.push_back(f.sparseView());
  }
  {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(dim, dim);
    f(n + 1, n + 1) = 0.5;
    p.lmi_coeffs.push_back(f.sparseView());
  }

  p.nonnegative_vars.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) p.nonnegative_vars[static_cast<std::size_t>(j)] = num_r + j;

  p.ineq_lhs = Eigen::MatrixXd::Zero(n + 1, num_vars);
  p.ineq_lhs.block(0, num_r, n + 1, n) = t;
  p.ineq_rhs = t0;
  return p;
}

LinSolution solve_lin(int n, const SolveConfig& cfg) {
  const SdpProblem p = build_lin(n);
  const SdpSolution sol = solve_sdp(p, cfg);
  const int num_r = n * (n + 1) / 2;
  LinSolution out;
  out.n = n;
  out.factor = sol.objective_value;
  out.r = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int k = 0; k < i; ++k) out.r(i - 1, k) = sol.x(r_index(i, k));
  }
  out.lambda = sol.x.segment(num_r, n);
  out.tau = lambda_to_tau(out.lambda);
  out.status = sol.status;
  out.gap = sol.duality_gap;
  out.iterations = sol.iterations;
  return out;
}

RecoveredSchedule recover_steps(const LinSolution& sol, double tol) {
  const int n = sol.n;
  if (n < 1 || sol.lambda.size() != n || sol.tau.size() != n + 1 || sol.r.rows() != n) {
    throw std::invalid_argument("recover_steps: malformed solution");
  }

  const auto chain_sum = [](const std::vector<std::vector<double>>& rows, int i, int k) {
    double s = 0.0;  // sum_{t=k+1}^{i-1} h_k^(t)
    for (int t = k + 1; t <= i - 1; ++t) {
      s += rows[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(k)];
    }
    return s;
  };

  // First try dividing by lambda alone, then the variant that also moves
  // the diagonal tau term to the left-hand side.
  std::vector<std::vector<double>> back(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    back[static_cast<std::size_t>(i - 1)].resize(static_cast<std::size_t>(i));
    for (int k = 0; k < i; ++k) {
      const double lam = sol.lambda(i - 1);
      back[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)] =
          (lam != 0.0) ? (sol.tau(i) * chain_sum(back, i, k) - sol.r(i - 1, k)) / lam : 0.0;
    }
  }
  double back_res = rows_finite(back)
                        ? substitution_residual(back, sol.r, sol.lambda, sol.tau)
                        : std::numeric_limits<double>::infinity();
  if (back_res <= tol) {
    return RecoveredSchedule{StepSchedule(std::move(back)), RecoveryPath::kBackSubstitution,
                             back_res};
  }

  std::vector<std::vector<double>> fwd(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    fwd[static_cast<std::size_t>(i - 1)].resize(static_cast<std::size_t>(i));
    for (int k = 0; k < i; ++k) {
      const double den = sol.lambda(i - 1) + sol.tau(i);
      fwd[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)] =
          (std::abs(den) > 1e-14)
              ? (sol.r(i - 1, k) - sol.tau(i) * chain_sum(fwd, i, k)) / den
              : 0.0;
    }
  }
  double fwd_res = rows_finite(fwd)
                       ? substitution_residual(fwd, sol.r, sol.lambda, sol.tau)
                       : std::numeric_limits<double>::infinity();
  if (fwd_res <= tol) {
    return RecoveredSchedule{StepSchedule(std::move(fwd)), RecoveryPath::kForwardSolve, fwd_res};
  }

  std::ostringstream os;
  os << "recover_steps: substitution residuals " << back_res << " (back-substitution) and "
     << fwd_res << " (forward solve) both exceed tolerance " << tol;
  throw std::runtime_error(os.str());
}

CrosscheckReport crosscheck(const LinSolution& sol, const RecoveredSchedule& rec,
                            const SolveConfig& cfg) {
  const NumericBound nb = numeric_bound(rec.schedule, cfg);
  CrosscheckReport rep;
  rep.lin_factor = sol.factor;
  rep.schedule_factor = nb.factor;
  rep.difference = std::abs(rep.lin_factor - rep.schedule_factor);
  rep.status = nb.status;
  return rep;
}

std::string render_schedule(const StepSchedule& s, int digits) {
  digits = std::clamp(digits, 1, 17);
  std::ostringstream os;
  char buf[64];
  for (int i = 1; i <= s.steps(); ++i) {
    os << "x_" << i << " <- x_" << i - 1;
    for (int k = 0; k < i; ++k) {
      const double h = s.coeff(i, k);
      if (h == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.*f", digits, std::abs(h));
      os << (h > 0.0 ? " - (" : " + (") << buf << "/L) g(x_" << k << ")";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace pepkit
