#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pepkit/pep.hpp"
#include "pepkit/schedule.hpp"
#include "pepkit/sdp.hpp"

namespace pepkit {

enum class BoundSource { kAnalytic, kNumeric, kReference };

std::string to_string(BoundSource source);

// A certified worst-case factor c for a method: f(x_N) - f* <= c L R^2.
struct BoundReport {
  std::string method;
  int n = 0;
  std::string parameters;   // human-readable, e.g. "h=1" or "alpha=1;beta=0.5"
  double factor = 0.0;
  double inverse_factor = 0.0;  // 1/factor, the scale used in the tables
  BoundSource source = BoundSource::kNumeric;
  SdpStatus status = SdpStatus::kOptimal;
  double gap = 0.0;         // duality gap of the solve; 0 for analytic bounds
};

// Closed-form factor 1/(4nh+2) for constant-step gradient descent,
// valid for 0 < h <= 1.  Throws std::domain_error outside that range.
double analytic_gm_bound(int n, double h);

// The closed-form dual certificate behind analytic_gm_bound:
// lambda_i = i/(2n+1-i), tau = lambda_to_tau(lambda), t = 1/(2nh+1).
DualCertificate gm_certificate(int n, double h);

struct CertificateCheck {
  bool multipliers_ok = false;
  double multiplier_residual = 0.0;
  double lmi_min_eigenvalue = 0.0;
  double factor = 0.0;
  bool pass = false;  // multipliers_ok && lmi_min_eigenvalue >= -tol
};

// Validates a dual certificate against a schedule: multiplier-set membership
// plus positive semidefiniteness of the assembled bordered matrix.
CertificateCheck verify_certificate(const StepSchedule& s, const DualCertificate& cert,
                                    double tol = 1e-9);

// Solves the dual SDP for the schedule and returns the certified factor
// together with the recovered certificate.
struct NumericBound {
  double factor = 0.0;
  DualCertificate certificate;
  SdpStatus status = SdpStatus::kOptimal;
  double gap = 0.0;
  int iterations = 0;
};
NumericBound numeric_bound(const StepSchedule& s, const SolveConfig& cfg = {});

// Worst-case factor for the method that returns x_0 untouched (n = 0 steps,
// or the auxiliary accelerated point at n = 1): the bordered matrix is
// [[1/2, 1/2], [1/2, t/2]] and the best factor is 1/2.
double zero_step_bound();

// Observed-vs-conjectured worst case for gradient descent at a given h:
// candidate factor (1/2) max(1/(2nh+1), (1-h)^(2n)) against the numeric
// dual value and the factors attained by simulating the two hard instances.
struct ConjectureReport {
  int n = 0;
  double h = 0.0;
  double conjectured = 0.0;
  double numeric = 0.0;
  double attained_phi1 = 0.0;  // simulated on the piecewise instance
  double attained_phi2 = 0.0;  // simulated on the pure quadratic
  double gap = 0.0;            // numeric - conjectured
  SdpStatus status = SdpStatus::kOptimal;
};
ConjectureReport conjecture_explorer(int n, double h, const SolveConfig& cfg = {});

// Reference factors from the classical analyses; reported alongside the
// certified bounds but never asserted against them.
double classical_gm_reference(int n);    // 1/(2n)
double fgm_reference(int n);             // 2/(n+1)^2
double lower_oracle_reference(int n);    // 3/(32 (n+1)^2)

// CSV columns: method,n,parameters,factor,inverse_factor,source,status,gap.
void write_bound_table_csv(const std::vector<BoundReport>& rows, std::ostream& os,
                           int digits = 6);
std::string bound_table_json(const std::vector<BoundReport>& rows, int digits = 6);

}  // namespace pepkit
