#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "json.hpp"
#include "pepkit/bounds.hpp"
#include "pepkit/schedule.hpp"
#include "pepkit/simulate.hpp"

using namespace pepkit;

TEST_CASE("closed-form factor and its domain") {
  CHECK(analytic_gm_bound(1, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(analytic_gm_bound(5, 1.0) == doctest::Approx(1.0 / 22.0).epsilon(1e-15));
  CHECK(analytic_gm_bound(10, 0.5) == doctest::Approx(1.0 / 22.0).epsilon(1e-15));
  CHECK_THROWS_AS(analytic_gm_bound(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(analytic_gm_bound(1, 1.5), std::domain_error);
  CHECK_THROWS_AS(analytic_gm_bound(1, -0.5), std::domain_error);
  CHECK_THROWS_AS(analytic_gm_bound(0, 1.0), std::domain_error);
}

TEST_CASE("reference factors") {
  CHECK(classical_gm_reference(4) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(fgm_reference(3) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(lower_oracle_reference(3) ==
        doctest::Approx(3.0 / 512.0).epsilon(1e-15));
}

TEST_CASE("closed-form certificate structure") {
  const DualCertificate cert = gm_certificate(3, 1.0);
  REQUIRE(cert.lambda.size() == 3);
  CHECK(cert.lambda(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(cert.lambda(1) == doctest::Approx(2.0 / 5.0).epsilon(1e-15));
  CHECK(cert.lambda(2) == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
  CHECK(cert.t == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(cert.factor() == doctest::Approx(analytic_gm_bound(3, 1.0)).epsilon(1e-15));
  for (int i = 0; i + 1 < cert.lambda.size(); ++i)
    CHECK(cert.lambda(i) < cert.lambda(i + 1));
}

TEST_CASE("certificate verification accepts the closed form") {
  for (int n : {1, 2, 5, 12}) {
    for (double h : {0.25, 0.6, 1.0}) {
      const CertificateCheck check =
          verify_certificate(gm_schedule(n, h), gm_certificate(n, h));
      CHECK(check.multipliers_ok);
      CHECK(check.lmi_min_eigenvalue >= -1e-9);
      CHECK(check.pass);
      CHECK(check.factor == doctest::Approx(analytic_gm_bound(n, h)).epsilon(1e-15));
    }
  }
}

TEST_CASE("certificate verification rejects tampering") {
  const StepSchedule s = gm_schedule(3, 1.0);
  DualCertificate cert = gm_certificate(3, 1.0);
  cert.t *= 0.5;  // claims a better factor than the worst case allows
  CHECK(!verify_certificate(s, cert).pass);

  DualCertificate bad_multiplier = gm_certificate(3, 1.0);
  bad_multiplier.lambda(2) = 1.5;
  bad_multiplier.tau = lambda_to_tau(bad_multiplier.lambda);
  const CertificateCheck check = verify_certificate(s, bad_multiplier);
  CHECK(!check.multipliers_ok);
  CHECK(!check.pass);
}

TEST_CASE("certificate outside the analytic step range fails the cone") {
  // At h = 1.9 the quadratic instance attains (1-h)^(2n)/2, well above the
  // extrapolated closed-form factor, so the matrix must leave the cone.
  const CertificateCheck check =
      verify_certificate(gm_schedule(2, 1.9), gm_certificate(2, 1.9));
  CHECK(check.lmi_min_eigenvalue < -1e-9);
  CHECK(!check.pass);
}

TEST_CASE("numeric bound matches the closed form on its domain") {
  for (int n : {1, 3, 8}) {
    for (double h : {0.3, 1.0}) {
      const NumericBound nb = numeric_bound(gm_schedule(n, h));
      REQUIRE(nb.status == SdpStatus::kOptimal);
      CHECK(nb.factor == doctest::Approx(analytic_gm_bound(n, h)).epsilon(1e-6));
      CHECK(verify_certificate(gm_schedule(n, h), nb.certificate, 1e-7).pass);
    }
  }
}

TEST_CASE("numeric bound decreases with n and dominates the simulation") {
  double previous = 1.0;
  for (int n = 1; n <= 6; ++n) {
    const NumericBound nb = numeric_bound(gm_schedule(n, 1.0));
    REQUIRE(nb.status == SdpStatus::kOptimal);
    CHECK(nb.factor < previous);
    previous = nb.factor;

    const FunctionOracle oracle = phi1_oracle(n, 1.0, 1.0, 1.0);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(oracle.dim());
    x0(0) = 1.0;
    const double attained = run_fo(oracle, gm_schedule(n, 1.0), x0).values.back();
    CHECK(attained <= nb.factor + 1e-7);
  }
}

TEST_CASE("accelerated schedules beat the classical reference") {
  for (int n : {2, 5, 10, 40}) {
    const NumericBound nb = numeric_bound(fgm_schedule(n, FgmVariant::kMain));
    REQUIRE(nb.status == SdpStatus::kOptimal);
    CHECK(nb.factor <= fgm_reference(n) + 1e-6);
  }
}

TEST_CASE("zero-step factor") {
  CHECK(zero_step_bound() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("conjectured factor agrees on the analytic range") {
  for (int n : {1, 4}) {
    for (double h : {0.4, 1.0}) {
      const ConjectureReport rep = conjecture_explorer(n, h);
      REQUIRE(rep.status == SdpStatus::kOptimal);
      const double expected = 0.5 * std::max(1.0 / (2.0 * n * h + 1.0),
                                             std::pow(1.0 - h, 2.0 * n));
      CHECK(rep.conjectured == doctest::Approx(expected).epsilon(1e-12));
      CHECK(rep.numeric == doctest::Approx(rep.conjectured).epsilon(1e-5));
      CHECK(rep.gap == doctest::Approx(rep.numeric - rep.conjectured).epsilon(1e-12));
    }
  }
}

TEST_CASE("conjectured factor beyond the analytic range stays a lower bound") {
  const ConjectureReport rep = conjecture_explorer(2, 1.9);
  REQUIRE(rep.status == SdpStatus::kOptimal);
  const double expected =
      0.5 * std::max(1.0 / (2.0 * 2 * 1.9 + 1.0), std::pow(0.9, 4.0));
  CHECK(rep.conjectured == doctest::Approx(expected).epsilon(1e-12));
  // Simulated instances can never exceed the certified worst case.
  CHECK(rep.attained_phi1 <= rep.numeric + 1e-8);
  CHECK(rep.attained_phi2 <= rep.numeric + 1e-8);
  CHECK(rep.numeric >= rep.attained_phi2 - 1e-8);
}

TEST_CASE("bound table serialization") {
  std::vector<BoundReport> rows(2);
  rows[0].method = "gm";
  rows[0].n = 5;
  rows[0].parameters = "h=1";
  rows[0].factor = 1.0 / 22.0;
  rows[0].inverse_factor = 22.0;
  rows[0].source = BoundSource::kAnalytic;
  rows[1].method = "hbm";
  rows[1].n = 2;
  rows[1].parameters = "alpha=1;beta=0.5";
  rows[1].factor = 0.125;
  rows[1].inverse_factor = 8.0;
  rows[1].source = BoundSource::kNumeric;
  rows[1].gap = 1e-9;

  std::ostringstream os;
  write_bound_table_csv(rows, os);
  std::istringstream lines(os.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "method,n,parameters,factor,inverse_factor,source,status,gap");
  REQUIRE(std::getline(lines, line));
  CHECK(line.find("gm,5,h=1,") == 0);
  CHECK(line.find("analytic") != std::string::npos);
  REQUIRE(std::getline(lines, line));
  CHECK(line.find("hbm,2,") == 0);
  CHECK(line.find("alpha=1;beta=0.5") != std::string::npos);
  CHECK(line.find("dual-sdp") != std::string::npos);
  CHECK(!std::getline(lines, line));

  const nlohmann::json doc = nlohmann::json::parse(bound_table_json(rows));
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 2);
  CHECK(doc[0]["method"] == "gm");
  CHECK(doc[0]["source"] == "analytic");
  CHECK(doc[0]["status"] == "optimal");
  CHECK(doc[1]["inverse_factor"].get<double>() == doctest::Approx(8.0));
}

TEST_CASE("fields with separators are quoted") {
  std::vector<BoundReport> rows(1);
  rows[0].method = "file:steps,v2.json";
  rows[0].n = 1;
  rows[0].parameters = "a=1,b=2";
  std::ostringstream os;
  write_bound_table_csv(rows, os);
  std::istringstream lines(os.str());
  std::string line;
  REQUIRE(std::getline(lines, line));  // header
  REQUIRE(std::getline(lines, line));
  CHECK(line.find("\"file:steps,v2.json\"") != std::string::npos);
  CHECK(line.find("\"a=1,b=2\"") != std::string::npos);
}

TEST_CASE("source names") {
  CHECK(to_string(BoundSource::kAnalytic) == "analytic");
  CHECK(to_string(BoundSource::kNumeric) == "dual-sdp");
  CHECK(to_string(BoundSource::kReference) == "reference");
}
