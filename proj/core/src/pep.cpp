#include "pepkit/pep.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pepkit {

namespace {

void check_index(int i, int n, const char* what) {
  if (i < 0 || i > n) {
    std::ostringstream os;
    os << what << " index " << i << " outside 0.." << n;
    throw std::out_of_range(os.str());
  }
}

// The (N+1) x N linear map and offset with tau = T lambda + t0 on the
// multiplier equalities.
Eigen::MatrixXd tau_map(int n) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n + 1, n);
  t(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    t(i, i) = 1.0;
    t(i, i - 1) = -1.0;
  }
  t(n, n - 1) = -1.0;
  return t;
}

Eigen::VectorXd tau_offset(int n) {
  Eigen::VectorXd t0 = Eigen::VectorXd::Zero(n + 1);
  t0(n) = 1.0;
  return t0;
}

}  // namespace

PepMatrices::PepMatrices(StepSchedule schedule) : schedule_(std::move(schedule)) {}

Eigen::MatrixXd PepMatrices::a(int i, int j) const {
  const int n = steps();
  check_index(i, n, "a row");
  check_index(j, n, "a column");
  if (i >= j) throw std::out_of_range("a(i, j) requires i < j");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m(i, i) += 0.5;
  m(j, j) += 0.5;
  m(i, j) -= 0.5;
  m(j, i) -= 0.5;
  for (int t = i + 1; t <= j; ++t) {
    for (int k = 0; k < t; ++k) {
      const double v = 0.5 * schedule_.coeff(t, k);
      m(j, k) += v;
      m(k, j) += v;
    }
  }
  return m;
}

Eigen::MatrixXd PepMatrices::b(int i, int j) const {
  const int n = steps();
  check_index(i, n, "b row");
  check_index(j, n, "b column");
  if (j >= i) throw std::out_of_range("b(i, j) requires j < i");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m(i, i) += 0.5;
  m(j, j) += 0.5;
  m(i, j) -= 0.5;
  m(j, i) -= 0.5;
  for (int t = j + 1; t <= i; ++t) {
    for (int k = 0; k < t; ++k) {
      const double v = 0.5 * schedule_.coeff(t, k);
      m(j, k) -= v;
      m(k, j) -= v;
    }
  }
  return m;
}

Eigen::MatrixXd PepMatrices::c(int i) const {
  const int n = steps();
  check_index(i, n, "c");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m(i, i) = 0.5;
  return m;
}

Eigen::MatrixXd PepMatrices::d(int i) const {
  const int n = steps();
  check_index(i, n, "d");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m(i, i) += 0.5;
  for (int t = 1; t <= i; ++t) {
    for (int k = 0; k < t; ++k) {
      const double v = 0.5 * schedule_.coeff(t, k);
      m(i, k) += v;
      m(k, i) += v;
    }
  }
  return m;
}

PepMatrices build_constraint_matrices(const StepSchedule& s) { return PepMatrices(s); }

Eigen::VectorXd lambda_to_tau(const Eigen::VectorXd& lambda) {
  const int n = static_cast<int>(lambda.size());
  if (n < 1) throw std::invalid_argument("lambda_to_tau: lambda must be non-empty");
  Eigen::VectorXd tau(n + 1);
  tau(0) = lambda(0);
  for (int i = 1; i < n; ++i) tau(i) = lambda(i) - lambda(i - 1);
  tau(n) = 1.0 - lambda(n - 1);
  return tau;
}

MultiplierCheck check_multiplier_set(const DualCertificate& cert, double tol) {
  const int n = static_cast<int>(cert.lambda.size());
  if (n < 1 || cert.tau.size() != n + 1) {
    throw std::invalid_argument("check_multiplier_set: need lambda_1..lambda_N and tau_0..tau_N");
  }
  MultiplierCheck out;
  std::ostringstream detail;
  const Eigen::VectorXd expected = lambda_to_tau(cert.lambda);
  for (int i = 0; i <= n; ++i) {
    const double r = std::abs(cert.tau(i) - expected(i));
    if (r > out.max_equality_residual) out.max_equality_residual = r;
    if (r > tol) detail << "tau[" << i << "] off its equality by " << r << "; ";
  }
  double min_comp = 0.0;
  for (int i = 0; i < n; ++i) min_comp = std::min(min_comp, cert.lambda(i));
  for (int i = 0; i <= n; ++i) min_comp = std::min(min_comp, cert.tau(i));
  out.min_component = min_comp;
  if (min_comp < -tol) detail << "negative multiplier " << min_comp << "; ";
  out.ok = out.max_equality_residual <= tol && min_comp >= -tol;
  out.detail = detail.str();
  return out;
}

Eigen::MatrixXd assemble_dual_lmi(const PepMatrices& m, const DualCertificate& cert,
                                  double eq_tol) {
  const int n = m.steps();
  if (cert.lambda.size() != n || cert.tau.size() != n + 1) {
    throw std::invalid_argument("assemble_dual_lmi: certificate size does not match schedule");
  }
  const Eigen::VectorXd expected = lambda_to_tau(cert.lambda);
  for (int i = 0; i <= n; ++i) {
    const double r = std::abs(cert.tau(i) - expected(i));
    if (!(r <= eq_tol)) {
      std::ostringstream os;
      os << "assemble_dual_lmi: multiplier equality for tau[" << i << "] violated by " << r;
      throw std::invalid_argument(os.str());
    }
  }
  Eigen::MatrixXd lmi = Eigen::MatrixXd::Zero(n + 2, n + 2);
  Eigen::MatrixXd top = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 1; i <= n; ++i) top += cert.lambda(i - 1) * m.a(i - 1, i);
  for (int i = 0; i <= n; ++i) top += cert.tau(i) * m.d(i);
  lmi.topLeftCorner(n + 1, n + 1) = top;
  lmi.block(0, n + 1, n + 1, 1) = 0.5 * cert.tau;
  lmi.block(n + 1, 0, 1, n + 1) = 0.5 * cert.tau.transpose();
  lmi(n + 1, n + 1) = 0.5 * cert.t;
  return lmi;
}

GmDualMatrices build_gm_dual_matrices(int n, const Eigen::VectorXd& lambda) {
  if (n < 1 || lambda.size() != n) {
    throw std::invalid_argument("build_gm_dual_matrices: lambda must have n >= 1 entries");
  }
  GmDualMatrices out;
  out.q = lambda_to_tau(lambda);
  out.s0 = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) {
    out.s0(i, i) = 2.0 * lambda(i);
    out.s0(i, i + 1) = -lambda(i);
    out.s0(i + 1, i) = -lambda(i);
  }
  out.s0(n, n) = 1.0;
  out.s1 = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i == j) {
        out.s1(i, i) = (i < n) ? 2.0 * lambda(i) : 1.0;
      } else {
        out.s1(i, j) = out.q(std::max(i, j));
      }
    }
  }
  return out;
}

SdpProblem dual_sdp_problem(const PepMatrices& m) {
  const int n = m.steps();
  const int dim = n + 2;
  const Eigen::MatrixXd t = tau_map(n);
  const Eigen::VectorXd t0 = tau_offset(n);

  SdpProblem p;
  p.objective = Eigen::VectorXd::Zero(n + 1);
  p.objective(n) = 0.5;

  Eigen::MatrixXd f0 = Eigen::MatrixXd::Zero(dim, dim);
  f0.topLeftCorner(n + 1, n + 1) = t0(n) * m.d(n);
  f0.block(0, n + 1, n + 1, 1) = 0.5 * t0;
  f0.block(n + 1, 0, 1, n + 1) = 0.5 * t0.transpose();
  p.lmi_constant = f0.sparseView();

  p.lmi_coeffs.reserve(n + 1);
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd fj = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd top = m.a(j, j + 1);
    for (int i = 0; i <= n; ++i) {
      if (t(i, j) != 0.0) top += t(i, j) * m.d(i);
    }
    fj.topLeftCorner(n + 1, n + 1) = top;
    fj.block(0, n + 1, n + 1, 1) = 0.5 * t.col(j);
    fj.block(n + 1, 0, 1, n + 1) = 0.5 * t.col(j).transpose();
    p.lmi_coeffs.push_back(fj.sparseView());
  }
  Eigen::MatrixXd ft = Eigen::MatrixXd::Zero(dim, dim);
  ft(n + 1, n + 1) = 0.5;
  p.lmi_coeffs.push_back(ft.sparseView());

  p.nonnegative_vars.resize(n);
  for (int j = 0; j < n; ++j) p.nonnegative_vars[static_cast<std::size_t>(j)] = j;

  p.ineq_lhs = Eigen::MatrixXd::Zero(n + 1, n + 1);
  p.ineq_lhs.leftCols(n) = t;
  p.ineq_rhs = t0;
  return p;
}

DualCertificate certificate_from_solution(const PepMatrices& m, const Eigen::VectorXd& x) {
  const int n = m.steps();
  if (x.size() != n + 1) {
    throw std::invalid_argument("certificate_from_solution: expected lambda_1..lambda_N and t");
  }
  DualCertificate cert;
  cert.lambda = x.head(n);
  cert.tau = lambda_to_tau(cert.lambda);
  cert.t = x(n);
  return cert;
}

std::string dump_matrix(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j > 0) os << " ";
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace pepkit
