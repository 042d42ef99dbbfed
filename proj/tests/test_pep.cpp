#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "pepkit/bounds.hpp"
#include "pepkit/pep.hpp"
#include "pepkit/schedule.hpp"

using namespace pepkit;

namespace {

Eigen::MatrixXd outer(const Eigen::VectorXd& v) { return v * v.transpose(); }

Eigen::VectorXd basis(int size, int i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(size);
  e(i) = 1.0;
  return e;
}

// Random certificate with nondecreasing lambda in [0, 1] and tau filled in
// through the equality map, so it lies in the feasible multiplier set.
DualCertificate random_feasible_certificate(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = uni(rng);
  std::sort(lambda.data(), lambda.data() + n);
  DualCertificate cert;
  cert.lambda = lambda;
  cert.tau = lambda_to_tau(lambda);
  cert.t = uni(rng);
  return cert;
}

}  // namespace

TEST_CASE("constraint matrices: boundary members") {
  const PepMatrices m(hbm_schedule(4, 1.0, 0.5));
  const int dim = 5;

  Eigen::MatrixXd c0 = Eigen::MatrixXd::Zero(dim, dim);
  c0(0, 0) = 0.5;
  CHECK((m.c(0) - c0).cwiseAbs().maxCoeff() == 0.0);

  CHECK((m.d(0) - 0.5 * outer(basis(dim, 0))).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant-step reduction of the constraint matrices") {
  // For the single-step schedule the general interpolation matrices must
  // collapse to the simple forms with h on the band.
  for (int n : {1, 2, 3, 5, 8, 12}) {
    for (double h : {0.3, 1.0, 1.7}) {
      const PepMatrices m(gm_schedule(n, h));
      const int dim = n + 1;
      const auto band = [&](int row, int k) -> Eigen::MatrixXd {
        return 0.5 * h *
               (basis(dim, row) * basis(dim, k).transpose() +
                basis(dim, k) * basis(dim, row).transpose());
      };
      for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
          Eigen::MatrixXd a = 0.5 * outer(basis(dim, i) - basis(dim, j));
          Eigen::MatrixXd b = 0.5 * outer(basis(dim, j) - basis(dim, i));
          for (int k = i; k < j; ++k) a += band(j, k);  // weights on the later point
          for (int k = i; k < j; ++k) b -= band(i, k);  // weights on the earlier one

          CHECK((m.a(i, j) - a).cwiseAbs().maxCoeff() < 1e-15);
          CHECK((m.b(j, i) - b).cwiseAbs().maxCoeff() < 1e-15);
        }
        Eigen::MatrixXd d = 0.5 * outer(basis(dim, i));
        for (int k = 0; k < i; ++k) d += band(i, k);
        CHECK((m.d(i) - d).cwiseAbs().maxCoeff() < 1e-15);
      }
    }
  }
}

TEST_CASE("tridiagonal and dense dual matrices at small sizes") {
  {
    const double lam = 0.37;
    Eigen::VectorXd lambda(1);
    lambda << lam;
    const GmDualMatrices g = build_gm_dual_matrices(1, lambda);
    Eigen::MatrixXd s0(2, 2), s1(2, 2);
    s0 << 2 * lam, -lam, -lam, 1;
    s1 << 2 * lam, 1 - lam, 1 - lam, 1;
    CHECK((g.s0 - s0).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((g.s1 - s1).cwiseAbs().maxCoeff() < 1e-15);
  }
  {
    Eigen::VectorXd lambda(2);
    lambda << 0.25, 2.0 / 3.0;
    const GmDualMatrices g = build_gm_dual_matrices(2, lambda);
    CHECK(g.q.size() == 3);
    CHECK(g.q(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.q(1) == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
    CHECK(g.q(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("multiplier map and membership") {
  CHECK_THROWS_AS(lambda_to_tau(Eigen::VectorXd()), std::invalid_argument);

  const Eigen::VectorXd zero_tau = lambda_to_tau(Eigen::VectorXd::Zero(2));
  REQUIRE(zero_tau.size() == 3);
  CHECK(zero_tau(0) == 0.0);
  CHECK(zero_tau(1) == 0.0);
  CHECK(zero_tau(2) == 1.0);

  Eigen::VectorXd lambda(2);
  lambda << 0.25, 2.0 / 3.0;
  const Eigen::VectorXd tau = lambda_to_tau(lambda);
  CHECK(tau(0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(tau(1) == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  CHECK(tau(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  DualCertificate decreasing;
  decreasing.lambda = Eigen::VectorXd(2);
  decreasing.lambda << 0.5, 0.25;
  decreasing.tau = lambda_to_tau(decreasing.lambda);
  decreasing.t = 0.1;
  const MultiplierCheck check = check_multiplier_set(decreasing);
  CHECK(!check.ok);
  CHECK(check.min_component < 0.0);
}

TEST_CASE("assembled LMI equals the two-matrix combination for constant steps") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int n = 1; n <= 10; ++n) {
    const double h = 0.2 + 1.5 * uni(rng);
    const DualCertificate cert = random_feasible_certificate(n, rng);
    const PepMatrices m(gm_schedule(n, h));
    const Eigen::MatrixXd lmi = assemble_dual_lmi(m, cert);
    const GmDualMatrices g = build_gm_dual_matrices(n, cert.lambda);

    const Eigen::MatrixXd combo = (1.0 - h) * g.s0 + h * g.s1;
    CHECK((2.0 * lmi.topLeftCorner(n + 1, n + 1) - combo).cwiseAbs().maxCoeff() < 1e-13);
    for (int i = 0; i <= n; ++i) {
      CHECK(lmi(i, n + 1) == doctest::Approx(0.5 * g.q(i)).epsilon(1e-13));
    }
    CHECK(lmi(n + 1, n + 1) == doctest::Approx(0.5 * cert.t).epsilon(1e-13));
  }
}

TEST_CASE("boundary certificate assembles; violated equalities are named") {
  const PepMatrices m(gm_schedule(3, 1.0));
  DualCertificate zero;
  zero.lambda = Eigen::VectorXd::Zero(3);
  zero.tau = lambda_to_tau(zero.lambda);
  zero.t = 1.0;
  CHECK_NOTHROW(assemble_dual_lmi(m, zero));

  DualCertificate broken = zero;
  broken.tau(1) = 0.25;
  try {
    assemble_dual_lmi(m, broken);
    FAIL("expected an equality violation");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("tau[1]") != std::string::npos);
  }
}

TEST_CASE("closed-form certificate kernel at the smallest size") {
  const PepMatrices m(gm_schedule(1, 1.0));
  const Eigen::MatrixXd lmi = assemble_dual_lmi(m, gm_certificate(1, 1.0));
  Eigen::Vector3d u(1.0, 1.0, -3.0);
  CHECK((lmi * u).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rank-one reduction of the quadratic trace objective") {
  // min over full X of tr(X'QX + 2ba'X) equals the minimum over the
  // rank-one family v b', both solvable in closed form via Q's
  // pseudoinverse; the common value is -(a'Q+a)||b||^2.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 8; ++trial) {
    const int d = 2 + trial % 5;
    const int cols = 1 + trial % 3;
    Eigen::MatrixXd base(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) base(i, j) = gauss(rng);
    const Eigen::MatrixXd q = base * base.transpose();
    Eigen::VectorXd a(d);
    for (int i = 0; i < d; ++i) a(i) = gauss(rng);
    a = q * a;  // keep a in the range of q so the minimum is attained
    Eigen::VectorXd b(cols);
    for (int i = 0; i < cols; ++i) b(i) = gauss(rng);

    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(q);
    const Eigen::MatrixXd full_min = -cod.pseudoInverse() * a * b.transpose();
    const double full_value =
        (full_min.transpose() * q * full_min).trace() +
        2.0 * (b * a.transpose() * full_min).trace();

    const Eigen::VectorXd v = -cod.pseudoInverse() * a;
    const double family_value =
        b.squaredNorm() * (v.dot(q * v) + 2.0 * a.dot(v));

    const double reference = -a.dot(cod.pseudoInverse() * a) * b.squaredNorm();
    CHECK(full_value == doctest::Approx(reference).epsilon(1e-8));
    CHECK(family_value == doctest::Approx(reference).epsilon(1e-8));
  }
}

TEST_CASE("matrix dump carries full precision") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = gauss(rng);

  std::istringstream in(dump_matrix(m));
  double value;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      REQUIRE(static_cast<bool>(in >> value));
      CHECK(value == m(i, j));  // 17 significant digits round-trip doubles
    }
  }
}
