#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pepkit {

// Lower-triangular step coefficients of an n-step fixed-step first-order
// method on an L-smooth convex function:
//
//   x_i = x_{i-1} - (1/L) * sum_{k=0}^{i-1} h_k^(i) * g(x_k),   i = 1..n,
//
// stored as rows()[i-1] = (h_0^(i), ..., h_{i-1}^(i)).  Row i has exactly i
// entries; every finite triangle is a valid schedule.
class StepSchedule {
 public:
  // Throws std::invalid_argument if the triangle is empty, a row has the
  // wrong length, or any coefficient is not finite.
  explicit StepSchedule(std::vector<std::vector<double>> rows);

  int steps() const { return static_cast<int>(rows_.size()); }

  // h_k^(i) with 1 <= i <= steps(), 0 <= k <= i-1.
  double coeff(int i, int k) const;

  const std::vector<std::vector<double>>& rows() const { return rows_; }

  // The common step size h if every row is (0, ..., 0, h), i.e. the schedule
  // is plain gradient descent; nullopt otherwise.
  std::optional<double> constant_step() const;

  bool operator==(const StepSchedule& other) const { return rows_ == other.rows_; }

 private:
  std::vector<std::vector<double>> rows_;
};

// Gradient descent with constant step: h_k^(i) = step for k = i-1, else 0.
StepSchedule gm_schedule(int n, double step);

// Heavy-ball momentum x_{i+1} = x_i - (alpha/L) g(x_i) + beta (x_i - x_{i-1})
// unrolled to triangular form: h_k^(i) = alpha * beta^(i-1-k).  Parameters
// outside 0 <= beta < 1, 0 < alpha < 2(1+beta) trigger a warning on stderr
// but are not rejected.
StepSchedule hbm_schedule(int n, double alpha, double beta);

enum class FgmVariant {
  kMain,  // bound targets the main iterate x_n; n rows
  kAux,   // bound targets the auxiliary iterate y_n; n-1 rows
};

// Fast gradient method written as a triangle.  The two-sequence form
//   y_1 = x_0,
//   x_i = y_i - (1/L) g(y_i),
//   y_{i+1} = x_i + ((t_i - 1)/t_{i+1}) (x_i - x_{i-1})
// is unrolled so that each iterate is x_0 minus a combination of the
// gradients g(y_1), g(y_2), ... seen so far; see fgm_t_sequence for the
// t recursion.  kMain ends at x_n (n gradients, n rows), kAux at y_n
// (n-1 rows).  kAux with n == 1 has zero rows and is rejected
// (std::invalid_argument).
StepSchedule fgm_schedule(int n, FgmVariant variant = FgmVariant::kMain);

// t_1..t_n with t_1 = 1 and t_{i+1} = (1 + sqrt(1 + 4 t_i^2)) / 2.
std::vector<double> fgm_t_sequence(int n);

// File format: JSON object {"n": N, "rows": [[...], ...]} with row i-1
// holding i numbers; doubles are written so that they round-trip exactly.
std::string schedule_to_json(const StepSchedule& s);
// Throws std::runtime_error naming the offending row/entry on malformed input.
StepSchedule schedule_from_json(const std::string& text);

void save_schedule(const StepSchedule& s, const std::filesystem::path& path);
StepSchedule load_schedule(const std::filesystem::path& path);

}  // namespace pepkit
