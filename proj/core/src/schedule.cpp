#include "pepkit/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace pepkit {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

StepSchedule::StepSchedule(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) {
    throw std::invalid_argument("schedule must have at least one row");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != i + 1) {
      std::ostringstream os;
      os << "schedule row " << i + 1 << " must have " << i + 1 << " entries, got "
         << rows_[i].size();
      throw std::invalid_argument(os.str());
    }
    for (std::size_t k = 0; k < rows_[i].size(); ++k) {
      if (!std::isfinite(rows_[i][k])) {
        std::ostringstream os;
        os << "schedule row " << i + 1 << " entry " << k << " is not finite";
        throw std::invalid_argument(os.str());
      }
    }
  }
}

double StepSchedule::coeff(int i, int k) const {
  if (i < 1 || i > steps() || k < 0 || k >= i) {
    std::ostringstream os;
    os << "coefficient (" << i << ", " << k << ") outside triangle of " << steps() << " rows";
    throw std::out_of_range(os.str());
  }
  return rows_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)];
}

std::optional<double> StepSchedule::constant_step() const {
  const double h = rows_[0][0];
  for (const auto& row : rows_) {
    if (row.back() != h) return std::nullopt;
    for (std::size_t k = 0; k + 1 < row.size(); ++k) {
      if (row[k] != 0.0) return std::nullopt;
    }
  }
  return h;
}

StepSchedule gm_schedule(int n, double step) {
  if (n < 1) throw std::invalid_argument("gm_schedule: n must be positive");
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rows[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), 0.0);
    rows[static_cast<std::size_t>(i)].back() = step;
  }
  return StepSchedule(std::move(rows));
}

StepSchedule hbm_schedule(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("hbm_schedule: n must be positive");
  if (!(beta >= 0.0 && beta < 1.0 && alpha > 0.0 && alpha < 2.0 * (1.0 + beta))) {
    std::cerr << "warning: heavy-ball parameters alpha=" << alpha << ", beta=" << beta
              << " lie outside the stability region 0 <= beta < 1, 0 < alpha < 2(1+beta)\n";
  }
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    auto& row = rows[static_cast<std::size_t>(i - 1)];
    row.resize(static_cast<std::size_t>(i));
    for (int k = 0; k < i; ++k) {
      row[static_cast<std::size_t>(k)] = alpha * std::pow(beta, i - 1 - k);
    }
  }
  return StepSchedule(std::move(rows));
}

std::vector<double> fgm_t_sequence(int n) {
  if (n < 1) throw std::invalid_argument("fgm_t_sequence: n must be positive");
  std::vector<double> t(static_cast<std::size_t>(n));
  t[0] = 1.0;
  for (int i = 1; i < n; ++i) {
    t[static_cast<std::size_t>(i)] =
        0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t[static_cast<std::size_t>(i - 1)] *
                                         t[static_cast<std::size_t>(i - 1)]));
  }
  return t;
}

StepSchedule fgm_schedule(int n, FgmVariant variant) {
  if (n < 1) throw std::invalid_argument("fgm_schedule: n must be positive");
  if (variant == FgmVariant::kAux && n == 1) {
    throw std::invalid_argument(
        "fgm_schedule: the auxiliary iterate at n = 1 is the start point and has no rows");
  }
  const std::vector<double> t = fgm_t_sequence(n);
  // Rows of the chain ending at y_n; row i maps x_{i-1} -> x_i = y_{i+1}.
  std::vector<std::vector<double>> rows;
  std::vector<double> prev;
  for (int i = 1; i <= n - 1; ++i) {
    const double ratio = (t[static_cast<std::size_t>(i - 1)] - 1.0) / t[static_cast<std::size_t>(i)];
    std::vector<double> row(static_cast<std::size_t>(i));
    for (int k = 0; k <= i - 3; ++k) {
      row[static_cast<std::size_t>(k)] = ratio * prev[static_cast<std::size_t>(k)];
    }
    if (i >= 2) row[static_cast<std::size_t>(i - 2)] = ratio * (prev[static_cast<std::size_t>(i - 2)] - 1.0);
    row[static_cast<std::size_t>(i - 1)] = 1.0 + ratio;
    prev = row;
    rows.push_back(std::move(row));
  }
  if (variant == FgmVariant::kMain) {
    // Final descent step y_n -> x_n uses only the newest gradient.
    std::vector<double> last(static_cast<std::size_t>(n), 0.0);
    last.back() = 1.0;
    rows.push_back(std::move(last));
  }
  return StepSchedule(std::move(rows));
}

std::string schedule_to_json(const StepSchedule& s) {
  std::ostringstream os;
  os << "{\"n\": " << s.steps() << ", \"rows\": [";
  for (int i = 0; i < s.steps(); ++i) {
    if (i > 0) os << ", ";
    os << "[";
    const auto& row = s.rows()[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) os << ", ";
      os << format_double(row[k]);
    }
    os << "]";
  }
  os << "]}";
  return os.str();
}

StepSchedule schedule_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("schedule JSON: parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("rows")) {
    throw std::runtime_error("schedule JSON: expected an object with \"n\" and \"rows\"");
  }
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
    throw std::runtime_error("schedule JSON: \"n\" must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(j["n"].get<long long>());
  const auto& rows_json = j["rows"];
  if (!rows_json.is_array() || rows_json.size() != n) {
    std::ostringstream os;
    os << "schedule JSON: \"rows\" must be an array of " << n << " rows";
    throw std::runtime_error(os.str());
  }
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row_json = rows_json[i];
    if (!row_json.is_array() || row_json.size() != i + 1) {
      std::ostringstream os;
      os << "schedule JSON: row " << i + 1 << " must be an array of " << i + 1 << " numbers";
      throw std::runtime_error(os.str());
    }
    rows[i].resize(i + 1);
    for (std::size_t k = 0; k <= i; ++k) {
      if (!row_json[k].is_number()) {
        std::ostringstream os;
        os << "schedule JSON: row " << i + 1 << " entry " << k << " is not a number";
        throw std::runtime_error(os.str());
      }
      rows[i][k] = row_json[k].get<double>();
    }
  }
  return StepSchedule(std::move(rows));
}

void save_schedule(const StepSchedule& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << schedule_to_json(s) << "\n";
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

StepSchedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return schedule_from_json(buffer.str());
}

}  // namespace pepkit
