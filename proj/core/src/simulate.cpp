#include "pepkit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "pepkit/pep.hpp"

namespace pepkit {

FunctionOracle::FunctionOracle(int dim, double lipschitz, EvalFn eval)
    : dim_(dim), lipschitz_(lipschitz), eval_(std::move(eval)) {
  if (dim_ < 1) throw std::invalid_argument("FunctionOracle: dim must be positive");
  if (!(lipschitz_ > 0.0) || !std::isfinite(lipschitz_)) {
    throw std::invalid_argument("FunctionOracle: lipschitz constant must be positive");
  }
  if (!eval_) throw std::invalid_argument("FunctionOracle: evaluation callback required");
}

Evaluation FunctionOracle::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("FunctionOracle: point has wrong dimension");
  }
  return eval_(x);
}

void FunctionOracle::set_minimizer(Eigen::VectorXd minimizer, double optimal_value) {
  if (minimizer.size() != dim_) {
    throw std::invalid_argument("FunctionOracle: minimizer has wrong dimension");
  }
  minimizer_ = std::move(minimizer);
  optimal_value_ = optimal_value;
}

FunctionOracle phi1_oracle(int n, double h, double lipschitz, double radius, int dim) {
  if (n < 1) throw std::invalid_argument("phi1_oracle: n must be positive");
  if (!(h > 0.0)) throw std::invalid_argument("phi1_oracle: h must be positive");
  if (!(lipschitz > 0.0) || !(radius > 0.0)) {
    throw std::invalid_argument("phi1_oracle: lipschitz and radius must be positive");
  }
  const double kappa = 1.0 / (2.0 * n * h + 1.0);
  const double lip = lipschitz;
  const double r = radius;
  FunctionOracle oracle(dim, lip, [kappa, lip, r](const Eigen::VectorXd& x) {
    Evaluation e;
    const double norm_y = x.norm() / r;
    if (norm_y >= kappa) {
      e.value = lip * r * r * (kappa * norm_y - 0.5 * kappa * kappa);
      e.gradient = (lip * r * kappa / x.norm()) * x;
    } else {
      e.value = 0.5 * lip * x.squaredNorm();
      e.gradient = lip * x;
    }
    return e;
  });
  oracle.set_minimizer(Eigen::VectorXd::Zero(dim), 0.0);
  return oracle;
}

FunctionOracle phi2_oracle(double lipschitz, int dim) {
  if (!(lipschitz > 0.0)) throw std::invalid_argument("phi2_oracle: lipschitz must be positive");
  const double lip = lipschitz;
  FunctionOracle oracle(dim, lip, [lip](const Eigen::VectorXd& x) {
    Evaluation e;
    e.value = 0.5 * lip * x.squaredNorm();
    e.gradient = lip * x;
    return e;
  });
  oracle.set_minimizer(Eigen::VectorXd::Zero(dim), 0.0);
  return oracle;
}

FunctionOracle random_quadratic_oracle(int dim, double lipschitz, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_quadratic_oracle: dim must be positive");
  if (!(lipschitz > 0.0)) {
    throw std::invalid_argument("random_quadratic_oracle: lipschitz must be positive");
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd raw(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) raw(i, j) = normal(gen);
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd evals(dim);
  evals(0) = lipschitz;  // top eigenvalue pinned so the constant is tight
  for (int i = 1; i < dim; ++i) evals(i) = lipschitz * unif(gen);
  Eigen::MatrixXd q = basis * evals.asDiagonal() * basis.transpose();
  q = 0.5 * (q + q.transpose()).eval();
  FunctionOracle oracle(dim, lipschitz, [q](const Eigen::VectorXd& x) {
    Evaluation e;
    e.gradient = q * x;
    e.value = 0.5 * x.dot(e.gradient);
    return e;
  });
  oracle.set_minimizer(Eigen::VectorXd::Zero(dim), 0.0);
  return oracle;
}

namespace {

Evaluation checked_eval(const FunctionOracle& oracle, const Eigen::VectorXd& x, int step) {
  Evaluation e = oracle(x);
  if (!std::isfinite(e.value)) {
    std::ostringstream os;
    os << "run_fo: non-finite value at step " << step;
    throw std::runtime_error(os.str());
  }
  if (!e.gradient.allFinite() || e.gradient.size() != x.size()) {
    std::ostringstream os;
    os << "run_fo: non-finite or misshapen gradient at step " << step;
    throw std::runtime_error(os.str());
  }
  return e;
}

}  // namespace

double Trajectory::reconstruction_residual() const {
  const int n = schedule.steps();
  if (static_cast<int>(points.size()) != n + 1 || static_cast<int>(gradients.size()) != n + 1) {
    throw std::invalid_argument("reconstruction_residual: trajectory is incomplete");
  }
  double worst = 0.0;
  Eigen::VectorXd xhat = points[0];
  for (int i = 1; i <= n; ++i) {
    for (int k = 0; k < i; ++k) {
      xhat -= (schedule.coeff(i, k) / lipschitz) * gradients[static_cast<std::size_t>(k)];
    }
    const double scale = std::max(1.0, points[static_cast<std::size_t>(i)].norm());
    worst = std::max(worst, (xhat - points[static_cast<std::size_t>(i)]).norm() / scale);
    xhat = points[static_cast<std::size_t>(i)];
  }
  return worst;
}

Trajectory run_fo(const FunctionOracle& oracle, const StepSchedule& s,
                  const Eigen::VectorXd& x0) {
  if (x0.size() != oracle.dim()) {
    throw std::invalid_argument("run_fo: start point has wrong dimension");
  }
  const int n = s.steps();
  Trajectory t{s};
  t.lipschitz = oracle.lipschitz();
  t.points.reserve(static_cast<std::size_t>(n) + 1);
  t.values.reserve(static_cast<std::size_t>(n) + 1);
  t.gradients.reserve(static_cast<std::size_t>(n) + 1);

  t.points.push_back(x0);
  Evaluation e0 = checked_eval(oracle, x0, 0);
  t.values.push_back(e0.value);
  t.gradients.push_back(std::move(e0.gradient));

  for (int i = 1; i <= n; ++i) {
    Eigen::VectorXd x = t.points.back();
    for (int k = 0; k < i; ++k) {
      x -= (s.coeff(i, k) / t.lipschitz) * t.gradients[static_cast<std::size_t>(k)];
    }
    if (!x.allFinite()) {
      std::ostringstream os;
      os << "run_fo: non-finite iterate at step " << i;
      throw std::runtime_error(os.str());
    }
    Evaluation e = checked_eval(oracle, x, i);
    t.points.push_back(std::move(x));
    t.values.push_back(e.value);
    t.gradients.push_back(std::move(e.gradient));
  }
  t.minimizer = oracle.minimizer();
  t.optimal_value = oracle.optimal_value();
  return t;
}

FgmTrajectory run_fgm_native(const FunctionOracle& oracle, int n, const Eigen::VectorXd& x0) {
  if (n < 1) throw std::invalid_argument("run_fgm_native: n must be positive");
  if (x0.size() != oracle.dim()) {
    throw std::invalid_argument("run_fgm_native: start point has wrong dimension");
  }
  const std::vector<double> t = fgm_t_sequence(n);
  const double lip = oracle.lipschitz();

  FgmTrajectory out;
  out.start = x0;
  Eigen::VectorXd y = x0;
  Eigen::VectorXd x_prev = x0;
  for (int i = 1; i <= n; ++i) {
    Evaluation ey = checked_eval(oracle, y, i);
    Eigen::VectorXd x = y - ey.gradient / lip;
    Evaluation ex = checked_eval(oracle, x, i);
    out.aux.push_back(y);
    out.aux_values.push_back(ey.value);
    out.gradients.push_back(std::move(ey.gradient));
    out.main.push_back(x);
    out.main_values.push_back(ex.value);
    if (i < n) {
      const double ratio =
          (t[static_cast<std::size_t>(i - 1)] - 1.0) / t[static_cast<std::size_t>(i)];
      y = x + ratio * (x - x_prev);
    }
    x_prev = std::move(x);
  }
  return out;
}

CocoercivityReport cocoercivity_check(const FunctionOracle& oracle, int num_pairs,
                                      std::uint64_t seed, double tol) {
  if (num_pairs < 1) throw std::invalid_argument("cocoercivity_check: need at least one pair");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double lip = oracle.lipschitz();
  CocoercivityReport rep;
  rep.pairs = num_pairs;
  for (int p = 0; p < num_pairs; ++p) {
    Eigen::VectorXd x(oracle.dim()), y(oracle.dim());
    for (int i = 0; i < oracle.dim(); ++i) {
      x(i) = 3.0 * normal(gen);
      y(i) = 3.0 * normal(gen);
    }
    const Evaluation ex = oracle(x);
    const Evaluation ey = oracle(y);
    const double lower = (ex.gradient - ey.gradient).squaredNorm() / (2.0 * lip);
    const double actual = ex.value - ey.value - ey.gradient.dot(x - y);
    const double violation = lower - actual;
    if (violation > tol) ++rep.violations;
    rep.max_violation = std::max(rep.max_violation, violation);
  }
  return rep;
}

double FeasibilityReport::max_violation() const {
  return std::max({max_violation_a, max_violation_b, max_violation_c, max_violation_d});
}

FeasibilityReport primal_feasibility_check(const Trajectory& t) {
  if (!t.minimizer.has_value() || !t.optimal_value.has_value()) {
    throw std::invalid_argument("primal_feasibility_check: trajectory lacks minimizer data");
  }
  const int n = t.schedule.steps();
  if (static_cast<int>(t.points.size()) != n + 1) {
    throw std::invalid_argument("primal_feasibility_check: trajectory is incomplete");
  }
  const Eigen::VectorXd& star = *t.minimizer;
  const double radius = (t.points[0] - star).norm();
  if (!(radius > 0.0)) {
    throw std::invalid_argument("primal_feasibility_check: start point coincides with minimizer");
  }
  const double lip = t.lipschitz;
  const int dim = static_cast<int>(star.size());

  Eigen::MatrixXd g(n + 1, dim);
  Eigen::VectorXd delta(n + 1);
  for (int i = 0; i <= n; ++i) {
    g.row(i) = t.gradients[static_cast<std::size_t>(i)].transpose() / (lip * radius);
    delta(i) = (t.values[static_cast<std::size_t>(i)] - *t.optimal_value) /
               (lip * radius * radius);
  }
  const Eigen::VectorXd nu = (star - t.points[0]) / radius;
  const Eigen::MatrixXd gram = g * g.transpose();

  const PepMatrices m(t.schedule);
  const double lowest = std::numeric_limits<double>::lowest();
  double worst_a = lowest, worst_b = lowest, worst_c = lowest, worst_d = lowest;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      const Eigen::MatrixXd mat = (i < j) ? m.a(i, j) : m.b(i, j);
      const double viol = mat.cwiseProduct(gram).sum() - (delta(i) - delta(j));
      if (i < j) {
        worst_a = std::max(worst_a, viol);
      } else {
        worst_b = std::max(worst_b, viol);
      }
    }
  }
  for (int i = 0; i <= n; ++i) {
    worst_c = std::max(worst_c, m.c(i).cwiseProduct(gram).sum() - delta(i));
    worst_d = std::max(worst_d, m.d(i).cwiseProduct(gram).sum() + g.row(i).dot(nu) + delta(i));
  }
  FeasibilityReport rep;
  rep.max_violation_a = worst_a;
  rep.max_violation_b = worst_b;
  rep.max_violation_c = worst_c;
  rep.max_violation_d = worst_d;
  rep.final_delta = delta(n);
  return rep;
}

void write_trajectory_csv(const Trajectory& t, std::ostream& os) {
  os << "step,value,gradient_norm,distance_to_opt\n";
  char buf[64];
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    os << i;
    std::snprintf(buf, sizeof(buf), ",%.15g", t.values[i]);
    os << buf;
    std::snprintf(buf, sizeof(buf), ",%.15g", t.gradients[i].norm());
    os << buf;
    if (t.minimizer.has_value()) {
      std::snprintf(buf, sizeof(buf), ",%.15g", (t.points[i] - *t.minimizer).norm());
      os << buf;
    } else {
      os << ",";
    }
    os << "\n";
  }
}

}  // namespace pepkit
