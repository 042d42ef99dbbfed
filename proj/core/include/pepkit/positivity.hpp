#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace pepkit {

// Leading-principal-minor analysis of the dense matrix S1 from
// build_gm_dual_matrices(n, .) at the certificate multipliers
// lambda_i = i/(2n+1-i).  The matrix has diagonal d_0..d_n and the
// broken-arrow fill pattern S1(i,j) = a_max(i,j) off the diagonal, which
// makes its leading minors satisfy a three-term recursion
//   det M_k = alpha_k det M_{k-1} - beta_k det M_{k-2}
// with coefficients and solution available in closed form.
class MinorSequence {
 public:
  explicit MinorSequence(int n);  // n >= 1

  int n() const { return n_; }
  double d(int i) const;  // diagonal, i = 0..n
  double a(int i) const;  // fill value of row i, i = 1..n

  // Recursion coefficients, k = 2..n.  The first pair is computed from
  // d and a by eliminating the shared fill structure; the second is the
  // simplified rational form.  They must agree.
  double alpha_from_elimination(int k) const;
  double beta_from_elimination(int k) const;
  double alpha_closed(int k) const;
  double beta_closed(int k) const;

  // Building blocks of the closed-form determinant, i = 0..n-1:
  //   det M_k = f_k (1 + g_k sum_{i<=k} x_i) prod_{i<=k} y_i   (k < n)
  //   det M_n = (2n+1)^2/(n+1)^2 prod_{i<n} y_i.
  double f(int i) const;
  double g(int i) const;
  double x(int i) const;
  double y(int i) const;

  Eigen::MatrixXd matrix() const;  // the full (n+1) x (n+1) matrix

  // det M_0..det M_n three ways: by the recursion, by the closed form,
  // and by LU factorization of the actual leading blocks.
  std::vector<double> determinants_by_recursion() const;
  std::vector<double> determinants_closed_form() const;
  std::vector<double> determinants_direct() const;

 private:
  int n_;
  std::vector<double> lambda_;  // lambda_1..lambda_n
};

// Max relative residual, over random vectors, between x' S0 x and its
// sum-of-squares expansion
//   sum lambda_{i+1} (x_{i+1}-x_i)^2 + lambda_1 x_0^2
//   + sum (lambda_{i+1}-lambda_i) x_i^2 + (1-lambda_n) x_n^2.
double s0_quadratic_identity(int n, int num_samples = 25, std::uint64_t seed = 7);

struct IdentityRecord {
  std::string identity;
  int n = 0;
  int k = 0;          // position of the worst residual (minor index, h-grid
                      // index for eigenvalue entries)
  double residual = 0.0;
  bool pass = false;
};

struct PdSuiteReport {
  std::vector<IdentityRecord> entries;
  double max_det_mismatch = 0.0;
  double max_identity_residual = 0.0;
  double min_eigenvalue = 0.0;  // over every matrix checked
  bool pass = false;
};

// Full verification sweep:
//  * determinant agreement (recursion vs direct, closed form vs direct)
//    and coefficient agreement for n = 1..det_max_n;
//  * the four algebraic identities behind the closed-form induction for
//    n = 2..det_max_n;
//  * the sum-of-squares expansion of S0;
//  * positive definiteness of (1-h) S0 + h S1 for h in
//    {0, 0.25, 0.5, 0.75, 1} for n = 1..eig_max_n.
PdSuiteReport dual_pd_suite(int det_max_n = 20, int eig_max_n = 200,
                            double det_tol = 1e-9, double identity_tol = 1e-10);

// JSON document with one entry per record: {identity, N, k, residual, pass}.
std::string pd_suite_report_json(const PdSuiteReport& report);

}  // namespace pepkit
