#include "pepkit/positivity.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "pepkit/pep.hpp"

namespace pepkit {

namespace {

Eigen::VectorXd certificate_lambda(int n) {
  Eigen::VectorXd lambda(n);
  for (int i = 1; i <= n; ++i) lambda(i - 1) = static_cast<double>(i) / (2 * n + 1 - i);
  return lambda;
}

double rel(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace

MinorSequence::MinorSequence(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("MinorSequence: n must be positive");
  const Eigen::VectorXd lam = certificate_lambda(n);
  lambda_.assign(lam.data(), lam.data() + n);
}

double MinorSequence::d(int i) const {
  if (i < 0 || i > n_) throw std::out_of_range("MinorSequence::d index");
  return (i < n_) ? 2.0 * lambda_[static_cast<std::size_t>(i)] : 1.0;
}

double MinorSequence::a(int i) const {
  if (i < 1 || i > n_) throw std::out_of_range("MinorSequence::a index");
  if (i < n_) return lambda_[static_cast<std::size_t>(i)] - lambda_[static_cast<std::size_t>(i - 1)];
  return 1.0 / (n_ + 1);
}

double MinorSequence::alpha_from_elimination(int k) const {
  if (k < 2 || k > n_) throw std::out_of_range("MinorSequence::alpha index");
  const double ak = a(k), ak1 = a(k - 1), dk1 = d(k - 1);
  return d(k) - 2.0 * ak * ak / ak1 + ak * ak * dk1 / (ak1 * ak1);
}

double MinorSequence::beta_from_elimination(int k) const {
  if (k < 2 || k > n_) throw std::out_of_range("MinorSequence::beta index");
  const double ak = a(k), ak1 = a(k - 1), dk1 = d(k - 1);
  const double w = 1.0 - dk1 / ak1;
  return ak * ak * w * w;
}

double MinorSequence::alpha_closed(int k) const {
  if (k < 2 || k > n_) throw std::out_of_range("MinorSequence::alpha index");
  const double n = n_;
  if (k < n_) {
    const double den = 2.0 * n - k;
    return 4.0 * ((2.0 * n + 1.0) * k - static_cast<double>(k) * k - 1.0) / (den * den);
  }
  const double den = 2.0 * n + 1.0;
  return 3.0 * (2.0 * n * n + 2.0 * n - 1.0) / (den * den);
}

double MinorSequence::beta_closed(int k) const {
  if (k < 2 || k > n_) throw std::out_of_range("MinorSequence::beta index");
  const double n = n_;
  if (k < n_) {
    const double num = 4.0 * k * n - 2.0 * n - 2.0 * static_cast<double>(k) * k + 4.0 * k - 1.0;
    const double d1 = 2.0 * n - k;
    const double d2 = 2.0 * n - k + 1.0;
    return num * num / (d1 * d1 * d2 * d2);
  }
  const double num = 2.0 * n * n + 2.0 * n - 1.0;
  const double d1 = n + 1.0;
  const double d2 = 2.0 * n + 1.0;
  return num * num / (d1 * d1 * d2 * d2);
}

double MinorSequence::f(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("MinorSequence::f index");
  const double den = 2.0 * n_ - i;
  return (2.0 * n_ + 1.0) * (2.0 * n_ + 1.0) / (den * den);
}

double MinorSequence::g(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("MinorSequence::g index");
  return 2.0 * n_ - 2.0 * i - 1.0;
}

double MinorSequence::x(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("MinorSequence::x index");
  return 1.0 / (2.0 * n_ + 4.0 * n_ * i - 2.0 * static_cast<double>(i) * i + 1.0);
}

double MinorSequence::y(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("MinorSequence::y index");
  const double den = 2.0 * n_ + 1.0 - i;
  return (2.0 * n_ + 4.0 * n_ * i - 2.0 * static_cast<double>(i) * i + 1.0) / (den * den);
}

Eigen::MatrixXd MinorSequence::matrix() const {
  Eigen::MatrixXd m(n_ + 1, n_ + 1);
  for (int i = 0; i <= n_; ++i) {
    for (int j = 0; j <= n_; ++j) {
      m(i, j) = (i == j) ? d(i) : a(std::max(i, j));
    }
  }
  return m;
}

std::vector<double> MinorSequence::determinants_by_recursion() const {
  std::vector<double> det(static_cast<std::size_t>(n_) + 1);
  det[0] = d(0);
  if (n_ >= 1) det[1] = d(0) * d(1) - a(1) * a(1);
  for (int k = 2; k <= n_; ++k) {
    det[static_cast<std::size_t>(k)] =
        alpha_from_elimination(k) * det[static_cast<std::size_t>(k - 1)] -
        beta_from_elimination(k) * det[static_cast<std::size_t>(k - 2)];
  }
  return det;
}

std::vector<double> MinorSequence::determinants_closed_form() const {
  std::vector<double> det(static_cast<std::size_t>(n_) + 1);
  double sum_x = 0.0;
  double prod_y = 1.0;
  for (int k = 0; k < n_; ++k) {
    sum_x += x(k);
    prod_y *= y(k);
    det[static_cast<std::size_t>(k)] = f(k) * (1.0 + g(k) * sum_x) * prod_y;
  }
  const double corner = (2.0 * n_ + 1.0) * (2.0 * n_ + 1.0) / ((n_ + 1.0) * (n_ + 1.0));
  det[static_cast<std::size_t>(n_)] = corner * prod_y;
  return det;
}

std::vector<double> MinorSequence::determinants_direct() const {
  const Eigen::MatrixXd m = matrix();
  std::vector<double> det(static_cast<std::size_t>(n_) + 1);
  for (int k = 0; k <= n_; ++k) {
    det[static_cast<std::size_t>(k)] = m.topLeftCorner(k + 1, k + 1).determinant();
  }
  return det;
}

double s0_quadratic_identity(int n, int num_samples, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("s0_quadratic_identity: n must be positive");
  if (num_samples < 1) throw std::invalid_argument("s0_quadratic_identity: need samples");
  const Eigen::VectorXd lambda = certificate_lambda(n);
  const GmDualMatrices gm = build_gm_dual_matrices(n, lambda);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < num_samples; ++s) {
    Eigen::VectorXd v(n + 1);
    for (int i = 0; i <= n; ++i) v(i) = normal(gen);
    const double quad = v.dot(gm.s0 * v);
    double expanded = lambda(0) * v(0) * v(0) + (1.0 - lambda(n - 1)) * v(n) * v(n);
    for (int i = 0; i < n; ++i) {
      const double diff = v(i + 1) - v(i);
      expanded += lambda(i) * diff * diff;
    }
    for (int i = 1; i < n; ++i) {
      expanded += (lambda(i) - lambda(i - 1)) * v(i) * v(i);
    }
    worst = std::max(worst, rel(quad, expanded));
  }
  return worst;
}

PdSuiteReport dual_pd_suite(int det_max_n, int eig_max_n, double det_tol, double identity_tol) {
  if (det_max_n < 1 || eig_max_n < 1) {
    throw std::invalid_argument("dual_pd_suite: sweep bounds must be positive");
  }
  PdSuiteReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();

  const auto push = [&rep](const std::string& name, int n, int k, double residual, bool pass) {
    rep.entries.push_back(IdentityRecord{name, n, k, residual, pass});
  };

  for (int n = 1; n <= det_max_n; ++n) {
    const MinorSequence seq(n);
    const std::vector<double> rec = seq.determinants_by_recursion();
    const std::vector<double> closed = seq.determinants_closed_form();
    const std::vector<double> direct = seq.determinants_direct();

    double worst_rec = 0.0, worst_closed = 0.0;
    int arg_rec = 0, arg_closed = 0;
    for (int k = 0; k <= n; ++k) {
      const double scale = std::abs(direct[static_cast<std::size_t>(k)]);
      const double e_rec =
          std::abs(rec[static_cast<std::size_t>(k)] - direct[static_cast<std::size_t>(k)]) /
          std::max(scale, 1e-300);
      const double e_closed =
          std::abs(closed[static_cast<std::size_t>(k)] - direct[static_cast<std::size_t>(k)]) /
          std::max(scale, 1e-300);
      if (e_rec > worst_rec) {
        worst_rec = e_rec;
        arg_rec = k;
      }
      if (e_closed > worst_closed) {
        worst_closed = e_closed;
        arg_closed = k;
      }
    }
    push("determinant-recursion", n, arg_rec, worst_rec, worst_rec <= det_tol);
    push("determinant-closed-form", n, arg_closed, worst_closed, worst_closed <= det_tol);
    rep.max_det_mismatch = std::max({rep.max_det_mismatch, worst_rec, worst_closed});

    if (n >= 2) {
      double worst_coef = 0.0;
      int arg_coef = 2;
      for (int k = 2; k <= n; ++k) {
        const double ea = rel(seq.alpha_from_elimination(k), seq.alpha_closed(k));
        const double eb = rel(seq.beta_from_elimination(k), seq.beta_closed(k));
        if (std::max(ea, eb) > worst_coef) {
          worst_coef = std::max(ea, eb);
          arg_coef = k;
        }
      }
      push("recursion-coefficients", n, arg_coef, worst_coef, worst_coef <= identity_tol);
      rep.max_identity_residual = std::max(rep.max_identity_residual, worst_coef);
    }

    // Induction identities for the closed form: the constant and the
    // coefficient of the running x-sum, for the interior steps and for the
    // final corner step.
    if (n >= 3) {
      double worst1 = 0.0, worst2 = 0.0;
      int arg1 = 2, arg2 = 2;
      for (int k = 2; k <= n - 1; ++k) {
        const double lhs1 = seq.alpha_closed(k) * seq.f(k - 1) * (1.0 + seq.g(k - 1) * seq.x(k - 1)) -
                            seq.beta_closed(k) / seq.y(k - 1) * seq.f(k - 2);
        const double rhs1 =
            seq.f(k) * seq.y(k) * (1.0 + seq.g(k) * seq.x(k - 1) + seq.g(k) * seq.x(k));
        const double lhs2 = seq.alpha_closed(k) * seq.f(k - 1) * seq.g(k - 1) -
                            seq.beta_closed(k) / seq.y(k - 1) * seq.f(k - 2) * seq.g(k - 2);
        const double rhs2 = seq.f(k) * seq.g(k) * seq.y(k);
        const double e1 = rel(lhs1, rhs1);
        const double e2 = rel(lhs2, rhs2);
        if (e1 > worst1) {
          worst1 = e1;
          arg1 = k;
        }
        if (e2 > worst2) {
          worst2 = e2;
          arg2 = k;
        }
      }
      push("induction-step-constant", n, arg1, worst1, worst1 <= identity_tol);
      push("induction-step-coefficient", n, arg2, worst2, worst2 <= identity_tol);
      rep.max_identity_residual = std::max({rep.max_identity_residual, worst1, worst2});
    }
    if (n >= 2) {
      const int k = n;
      const double corner = (2.0 * n + 1.0) * (2.0 * n + 1.0) / ((n + 1.0) * (n + 1.0));
      const double lhs3 = seq.alpha_closed(k) * seq.f(k - 1) * (1.0 + seq.g(k - 1) * seq.x(k - 1)) -
                          seq.beta_closed(k) / seq.y(k - 1) * seq.f(k - 2);
      const double lhs4 = seq.alpha_closed(k) * seq.f(k - 1) * seq.g(k - 1) -
                          seq.beta_closed(k) / seq.y(k - 1) * seq.f(k - 2) * seq.g(k - 2);
      const double e3 = rel(lhs3, corner);
      const double e4 = std::abs(lhs4);
      push("induction-final-constant", n, k, e3, e3 <= identity_tol);
      push("induction-final-coefficient", n, k, e4, e4 <= identity_tol);
      rep.max_identity_residual = std::max({rep.max_identity_residual, e3, e4});
    }

    const double quad = s0_quadratic_identity(n);
    push("tridiagonal-sum-of-squares", n, 0, quad, quad <= identity_tol);
    rep.max_identity_residual = std::max(rep.max_identity_residual, quad);
  }

  const double h_grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int n = 1; n <= eig_max_n; ++n) {
    const GmDualMatrices gm = build_gm_dual_matrices(n, certificate_lambda(n));
    double min_eig = std::numeric_limits<double>::infinity();
    int arg_h = 0;
    for (int hi = 0; hi < 5; ++hi) {
      const double h = h_grid[hi];
      const Eigen::MatrixXd combo = (1.0 - h) * gm.s0 + h * gm.s1;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(combo, Eigen::EigenvaluesOnly);
      const double ev = es.eigenvalues().minCoeff();
      if (ev < min_eig) {
        min_eig = ev;
        arg_h = hi;
      }
    }
    push("combination-positive-definite", n, arg_h, min_eig, min_eig > 0.0);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, min_eig);
  }

  rep.pass = true;
  for (const auto& e : rep.entries) rep.pass = rep.pass && e.pass;
  return rep;
}

std::string pd_suite_report_json(const PdSuiteReport& report) {
  nlohmann::json doc;
  doc["pass"] = report.pass;
  doc["max_det_mismatch"] = report.max_det_mismatch;
  doc["max_identity_residual"] = report.max_identity_residual;
  doc["min_eigenvalue"] = report.min_eigenvalue;
  doc["entries"] = nlohmann::json::array();
  for (const auto& e : report.entries) {
    doc["entries"].push_back({{"identity", e.identity},
                              {"N", e.n},
                              {"k", e.k},
                              {"residual", e.residual},
                              {"pass", e.pass}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace pepkit
