#include "pepkit/bounds.hpp"

#include "pepkit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pepkit {

namespace {

std::string format_double(double v, int digits) {
  digits = std::clamp(digits, 3, 17);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\u%04x", c);
      out += buf;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string to_string(BoundSource source) {
  switch (source) {
    case BoundSource::kAnalytic: return "analytic";
    case BoundSource::kReference: return "reference";
    default: return "dual-sdp";
  }
}

double analytic_gm_bound(int n, double h) {
  if (n < 1) throw std::domain_error("analytic_gm_bound: n must be positive");
  if (!(h > 0.0 && h <= 1.0)) {
    throw std::domain_error("analytic_gm_bound: closed form is only proven for 0 < h <= 1");
  }
  return 1.0 / (4.0 * n * h + 2.0);
}

DualCertificate gm_certificate(int n, double h) {
  if (n < 1) throw std::domain_error("gm_certificate: n must be positive");
  if (!(h > 0.0)) throw std::domain_error("gm_certificate: h must be positive");
  DualCertificate cert;
  cert.lambda.resize(n);
  for (int i = 1; i <= n; ++i) cert.lambda(i - 1) = static_cast<double>(i) / (2 * n + 1 - i);
  cert.tau = lambda_to_tau(cert.lambda);
  cert.t = 1.0 / (2.0 * n * h + 1.0);
  return cert;
}

CertificateCheck verify_certificate(const StepSchedule& s, const DualCertificate& cert,
                                    double tol) {
  CertificateCheck out;
  const MultiplierCheck mc = check_multiplier_set(cert, tol);
  out.multipliers_ok = mc.ok;
  out.multiplier_residual = mc.max_equality_residual;
  const PepMatrices m = build_constraint_matrices(s);
  const Eigen::MatrixXd lmi =
      assemble_dual_lmi(m, cert, std::numeric_limits<double>::infinity());
  out.lmi_min_eigenvalue = min_eigenvalue(lmi);
  out.factor = cert.factor();
  out.pass = out.multipliers_ok && out.lmi_min_eigenvalue >= -tol;
  return out;
}

NumericBound numeric_bound(const StepSchedule& s, const SolveConfig& cfg) {
  const PepMatrices m = build_constraint_matrices(s);
  const SdpProblem prob = dual_sdp_problem(m);
  const SdpSolution sol = solve_sdp(prob, cfg);
  NumericBound out;
  out.factor = sol.objective_value;
  out.certificate = certificate_from_solution(m, sol.x);
  out.status = sol.status;
  out.gap = sol.duality_gap;
  out.iterations = sol.iterations;
  return out;
}

double zero_step_bound() { return 0.5; }

ConjectureReport conjecture_explorer(int n, double h, const SolveConfig& cfg) {
  if (n < 1) throw std::domain_error("conjecture_explorer: n must be positive");
  if (!(h > 0.0)) throw std::domain_error("conjecture_explorer: h must be positive");
  ConjectureReport rep;
  rep.n = n;
  rep.h = h;
  rep.conjectured =
      0.5 * std::max(1.0 / (2.0 * n * h + 1.0), std::pow(std::abs(1.0 - h), 2 * n));
  const NumericBound nb = numeric_bound(gm_schedule(n, h), cfg);
  rep.numeric = nb.factor;
  rep.gap = rep.numeric - rep.conjectured;
  rep.status = nb.status;

  const StepSchedule gm = gm_schedule(n, h);
  const FunctionOracle o1 = phi1_oracle(n, h, 1.0, 1.0);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(o1.dim());
  x0(0) = 1.0;
  rep.attained_phi1 = run_fo(o1, gm, x0).values.back();
  rep.attained_phi2 = run_fo(phi2_oracle(1.0), gm, x0).values.back();
  return rep;
}

double classical_gm_reference(int n) {
  if (n < 1) throw std::domain_error("classical_gm_reference: n must be positive");
  return 1.0 / (2.0 * n);
}

double fgm_reference(int n) {
  if (n < 1) throw std::domain_error("fgm_reference: n must be positive");
  return 2.0 / (static_cast<double>(n + 1) * (n + 1));
}

double lower_oracle_reference(int n) {
  if (n < 1) throw std::domain_error("lower_oracle_reference: n must be positive");
  return 3.0 / (32.0 * (n + 1.0) * (n + 1.0));
}

void write_bound_table_csv(const std::vector<BoundReport>& rows, std::ostream& os, int digits) {
  os << "method,n,parameters,factor,inverse_factor,source,status,gap\n";
  for (const auto& r : rows) {
    os << csv_field(r.method) << "," << r.n << "," << csv_field(r.parameters) << ","
       << format_double(r.factor, digits) << "," << format_double(r.inverse_factor, digits)
       << "," << to_string(r.source) << "," << to_string(r.status) << ","
       << format_double(r.gap, digits) << "\n";
  }
}

std::string bound_table_json(const std::vector<BoundReport>& rows, int digits) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i > 0) os << ",";
    os << "\n  {\"method\": \"" << json_escape(r.method) << "\", \"n\": " << r.n
       << ", \"parameters\": \"" << json_escape(r.parameters) << "\""
       << ", \"factor\": " << format_double(r.factor, digits)
       << ", \"inverse_factor\": " << format_double(r.inverse_factor, digits)
       << ", \"source\": \"" << to_string(r.source) << "\""
       << ", \"status\": \"" << to_string(r.status) << "\""
       << ", \"gap\": " << format_double(r.gap, digits) << "}";
  }
  os << "\n]\n";
  return os.str();
}

}  // namespace pepkit
