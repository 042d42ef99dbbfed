#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "pepkit/pep.hpp"
#include "pepkit/schedule.hpp"
#include "pepkit/sdp.hpp"

using namespace pepkit;

namespace {

Eigen::SparseMatrix<double> sparse(const Eigen::MatrixXd& dense) {
  Eigen::SparseMatrix<double> s = dense.sparseView();
  return s;
}

// min t subject to t*I + C >= 0; optimum is -lambda_min(C).
SdpProblem eigenvalue_problem(const Eigen::MatrixXd& c) {
  SdpProblem p;
  p.objective = Eigen::VectorXd::Ones(1);
  p.lmi_constant = sparse(c);
  p.lmi_coeffs.push_back(
      sparse(Eigen::MatrixXd::Identity(c.rows(), c.cols())));
  return p;
}

}  // namespace

TEST_CASE("scalar cone: min t with [t] >= 0") {
  const SdpProblem p = eigenvalue_problem(Eigen::MatrixXd::Zero(1, 1));
  const SdpSolution sol = solve_sdp(p);
  CHECK(sol.status == SdpStatus::kOptimal);
  CHECK(std::abs(sol.objective_value) < 1e-7);
  CHECK(std::abs(sol.x(0)) < 1e-7);
}

TEST_CASE("2x2 cone: largest eigenvalue of the off-diagonal flip") {
  Eigen::MatrixXd c(2, 2);
  c << 0, 1, 1, 0;
  const SdpSolution sol = solve_sdp(eigenvalue_problem(c));
  CHECK(sol.status == SdpStatus::kOptimal);
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("dual bound problem at the smallest size") {
  const PepMatrices m(gm_schedule(1, 1.0));
  const SdpSolution sol = solve_sdp(dual_sdp_problem(m));
  REQUIRE(sol.status == SdpStatus::kOptimal);
  CHECK(sol.objective_value == doctest::Approx(1.0 / 6.0).epsilon(1e-6));

  // The recovered certificate keeps the assembled matrix in the cone up to
  // solver accuracy.
  const DualCertificate cert = certificate_from_solution(m, sol.x);
  const Eigen::MatrixXd lmi = assemble_dual_lmi(m, cert);
  CHECK(min_eigenvalue(lmi) > -1e-7);
}

TEST_CASE("determinism: repeated solves bit-identical") {
  const PepMatrices m(gm_schedule(4, 0.8));
  const SdpProblem p = dual_sdp_problem(m);
  const SdpSolution first = solve_sdp(p);
  const SdpSolution second = solve_sdp(p);
  REQUIRE(first.status == SdpStatus::kOptimal);
  CHECK(second.status == first.status);
  CHECK(second.iterations == first.iterations);
  CHECK(second.objective_value == first.objective_value);
  REQUIRE(second.x.size() == first.x.size());
  for (int i = 0; i < first.x.size(); ++i) CHECK(second.x(i) == first.x(i));
}

TEST_CASE("objective scaling scales the reported value") {
  const PepMatrices m(gm_schedule(2, 1.0));
  SdpProblem p = dual_sdp_problem(m);
  const SdpSolution base = solve_sdp(p);
  p.objective *= 2.0;
  const SdpSolution scaled = solve_sdp(p);
  REQUIRE(base.status == SdpStatus::kOptimal);
  REQUIRE(scaled.status == SdpStatus::kOptimal);
  CHECK(scaled.objective_value ==
        doctest::Approx(2.0 * base.objective_value).epsilon(1e-6));
}

TEST_CASE("negative step renders the dual infeasible") {
  const PepMatrices m(gm_schedule(1, -1.0));
  const SdpSolution sol = solve_sdp(dual_sdp_problem(m));
  CHECK(sol.status == SdpStatus::kInfeasible);
}

TEST_CASE("symmetric eigenvalue helpers") {
  CHECK(min_eigenvalue(Eigen::MatrixXd::Identity(3, 3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  Eigen::MatrixXd flip(2, 2);
  flip << 0, 1, 1, 0;
  CHECK(min_eigenvalue(flip) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(!is_psd(flip));
  CHECK(is_psd(Eigen::MatrixXd::Identity(2, 2)));

  Eigen::MatrixXd skew(2, 2);
  skew << 0, 1, -1, 0;
  CHECK_THROWS_AS(min_eigenvalue(skew), std::invalid_argument);
}

TEST_CASE("nonnegative variables fold into the cone") {
  SdpProblem p;
  p.objective = Eigen::VectorXd::Ones(1);
  p.lmi_constant = sparse(Eigen::MatrixXd::Identity(1, 1));
  p.lmi_coeffs.push_back(sparse(Eigen::MatrixXd::Zero(1, 1)));
  p.nonnegative_vars = {0};
  const SdpSolution sol = solve_sdp(p);
  CHECK(sol.status == SdpStatus::kOptimal);
  CHECK(std::abs(sol.x(0)) < 1e-7);
}

TEST_CASE("equality rows are eliminated in presolve") {
  // min x subject to x + y = 1, diag(x, y) >= 0: optimum (0, 1).
  SdpProblem p;
  p.objective = Eigen::VectorXd::Zero(2);
  p.objective(0) = 1.0;
  p.lmi_constant = sparse(Eigen::MatrixXd::Zero(2, 2));
  Eigen::MatrixXd e00 = Eigen::MatrixXd::Zero(2, 2);
  e00(0, 0) = 1.0;
  Eigen::MatrixXd e11 = Eigen::MatrixXd::Zero(2, 2);
  e11(1, 1) = 1.0;
  p.lmi_coeffs = {sparse(e00), sparse(e11)};
  p.eq_lhs = Eigen::MatrixXd::Ones(1, 2);
  p.eq_rhs = Eigen::VectorXd::Ones(1);
  const SdpSolution sol = solve_sdp(p);
  REQUIRE(sol.status == SdpStatus::kOptimal);
  CHECK(std::abs(sol.x(0)) < 1e-6);
  CHECK(sol.x(1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("scalar inequality rows join the cone") {
  // min -x subject to x <= 1: optimum at the boundary.
  SdpProblem p;
  p.objective = -Eigen::VectorXd::Ones(1);
  p.lmi_constant = sparse(Eigen::MatrixXd::Identity(1, 1));
  p.lmi_coeffs.push_back(sparse(Eigen::MatrixXd::Zero(1, 1)));
  p.ineq_lhs = -Eigen::MatrixXd::Ones(1, 1);
  p.ineq_rhs = Eigen::VectorXd::Ones(1);
  const SdpSolution sol = solve_sdp(p);
  REQUIRE(sol.status == SdpStatus::kOptimal);
  CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("iteration log is CSV with a fixed header") {
  const PepMatrices m(gm_schedule(2, 1.0));
  std::ostringstream log;
  SolveConfig cfg;
  cfg.iteration_log = &log;
  const SdpSolution sol = solve_sdp(dual_sdp_problem(m), cfg);
  REQUIRE(sol.status == SdpStatus::kOptimal);
  std::istringstream lines(log.str());
  std::string header;
  REQUIRE(std::getline(lines, header));
  CHECK(header == "iteration,gap,primal_res,dual_res");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == sol.iterations + 1);  // initial point is logged too
}

TEST_CASE("iteration cap reports max-iterations") {
  const PepMatrices m(gm_schedule(5, 1.0));
  SolveConfig cfg;
  cfg.max_iterations = 2;
  const SdpSolution sol = solve_sdp(dual_sdp_problem(m), cfg);
  CHECK(sol.status == SdpStatus::kMaxIterations);
  CHECK(sol.iterations == 2);
}

TEST_CASE("status names") {
  CHECK(to_string(SdpStatus::kOptimal) == "optimal");
  CHECK(to_string(SdpStatus::kInfeasible) == "infeasible");
  CHECK(to_string(SdpStatus::kUnbounded) == "unbounded");
}
