// pepkit: certified worst-case bounds for fixed-step first-order methods.
//
// Subcommands:
//   bound     certified factor per method over an n-grid
//   optimize  best fixed-step schedule per n via the step-size SDP
//   verify    invariant suites (gradient / appendix / fgm-equiv / cocoercivity)
//   table     inverse factors side by side, one column per method

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pepkit/bounds.hpp"
#include "pepkit/pep.hpp"
#include "pepkit/positivity.hpp"
#include "pepkit/schedule.hpp"
#include "pepkit/sdp.hpp"
#include "pepkit/simulate.hpp"
#include "pepkit/stepopt.hpp"

namespace {

using namespace pepkit;

struct RunConfig {
  std::string method = "gm";
  std::vector<int> grid = {1, 2, 3, 4, 5, 10, 20, 40};
  double h = 1.0;
  double alpha = 1.0;
  double beta = 0.5;
  std::string variant;  // empty: both chains for fgm
  double tol = 1e-8;
  int max_iter = 200;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 12345;
  int digits = 6;
  int verbose = 0;
  std::string iter_log;
  std::string suite = "all";
  std::string schedule_dir = ".";
  bool render = false;
  bool with_optimal = false;
};

SolveConfig solver_config(const RunConfig& cfg, std::ofstream* log_stream) {
  SolveConfig sc;
  sc.tolerance = cfg.tol;
  sc.max_iterations = cfg.max_iter;
  sc.verbosity = cfg.verbose;
  if (log_stream != nullptr && log_stream->is_open()) sc.iteration_log = log_stream;
  return sc;
}

// Sink for the table output: --out path or stdout.
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string format_params(const char* fmt, double a, double b = 0.0) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

BoundReport reference_row(const std::string& method, int n, std::string parameters,
                          double factor) {
  BoundReport row;
  row.method = method;
  row.n = n;
  row.parameters = std::move(parameters);
  row.factor = factor;
  row.inverse_factor = 1.0 / factor;
  row.source = BoundSource::kReference;
  row.status = SdpStatus::kOptimal;
  return row;
}

BoundReport numeric_row(const std::string& method, int n, std::string parameters,
                        const StepSchedule& s, const SolveConfig& sc) {
  BoundReport row;
  row.method = method;
  row.n = n;
  row.parameters = std::move(parameters);
  row.source = BoundSource::kNumeric;
  const NumericBound nb = numeric_bound(s, sc);
  row.factor = nb.factor;
  row.inverse_factor = nb.factor > 0.0 ? 1.0 / nb.factor : 0.0;
  row.status = nb.status;
  row.gap = nb.gap;
  return row;
}

bool row_ok(const BoundReport& row) {
  return row.status == SdpStatus::kOptimal && row.factor > 0.0;
}

void emit_rows(const RunConfig& cfg, const std::vector<BoundReport>& rows) {
  OutputSink sink(cfg.out);
  if (cfg.format == "json") {
    sink.stream() << bound_table_json(rows, cfg.digits) << "\n";
  } else {
    write_bound_table_csv(rows, sink.stream(), cfg.digits);
  }
}

// --- bound ------------------------------------------------------------

int cmd_bound(const RunConfig& cfg) {
  std::ofstream log_stream;
  if (!cfg.iter_log.empty()) log_stream.open(cfg.iter_log);
  const SolveConfig sc = solver_config(cfg, &log_stream);

  std::vector<BoundReport> rows;
  if (cfg.method == "gm") {
    for (int n : cfg.grid) {
      BoundReport row;
      row.method = "gm";
      row.n = n;
      row.parameters = format_params("h=%g", cfg.h);
      try {
        row.factor = analytic_gm_bound(n, cfg.h);
        row.inverse_factor = 1.0 / row.factor;
        row.source = BoundSource::kAnalytic;
        rows.push_back(row);
      } catch (const std::domain_error&) {
        rows.push_back(numeric_row("gm", n, row.parameters, gm_schedule(n, cfg.h), sc));
      }
    }
    for (int n : cfg.grid) {
      rows.push_back(reference_row("gm-classical", n, "h=1", classical_gm_reference(n)));
    }
  } else if (cfg.method == "hbm") {
    for (int n : cfg.grid) {
      rows.push_back(numeric_row("hbm", n,
                                 format_params("alpha=%g;beta=%g", cfg.alpha, cfg.beta),
                                 hbm_schedule(n, cfg.alpha, cfg.beta), sc));
    }
  } else if (cfg.method == "fgm") {
    const bool want_main = cfg.variant.empty() || cfg.variant == "main";
    const bool want_aux = cfg.variant.empty() || cfg.variant == "aux";
    if (want_main) {
      for (int n : cfg.grid) {
        rows.push_back(numeric_row("fgm-main", n, "", fgm_schedule(n, FgmVariant::kMain), sc));
      }
    }
    if (want_aux) {
      for (int n : cfg.grid) {
        if (n == 1) {
          // The length-1 auxiliary method returns the start point; its
          // worst case has the closed form 1/2.
          BoundReport row;
          row.method = "fgm-aux";
          row.n = 1;
          row.factor = zero_step_bound();
          row.inverse_factor = 1.0 / row.factor;
          row.source = BoundSource::kAnalytic;
          rows.push_back(row);
        } else {
          rows.push_back(numeric_row("fgm-aux", n, "", fgm_schedule(n, FgmVariant::kAux), sc));
        }
      }
    }
    for (int n : cfg.grid) {
      rows.push_back(reference_row("fgm-reference", n, "", fgm_reference(n)));
    }
  } else if (cfg.method.rfind("file:", 0) == 0) {
    const std::string path = cfg.method.substr(5);
    const StepSchedule s = load_schedule(path);
    rows.push_back(numeric_row("file", static_cast<int>(s.steps()), "path=" + path, s, sc));
  } else {
    std::cerr << "unknown method: " << cfg.method << "\n";
    return 1;
  }

  emit_rows(cfg, rows);
  for (const auto& row : rows) {
    if (!row_ok(row)) {
      std::cerr << "warning: " << row.method << " n=" << row.n
                << " did not certify (status " << to_string(row.status) << ")\n";
    }
  }
  return std::all_of(rows.begin(), rows.end(), row_ok) ? 0 : 2;
}

// --- optimize ---------------------------------------------------------

int cmd_optimize(const RunConfig& cfg) {
  std::ofstream log_stream;
  if (!cfg.iter_log.empty()) log_stream.open(cfg.iter_log);
  const SolveConfig sc = solver_config(cfg, &log_stream);

  std::vector<BoundReport> rows;
  bool all_ok = true;
  for (int n : cfg.grid) {
    BoundReport row;
    row.method = "optimal";
    row.n = n;
    row.source = BoundSource::kNumeric;
    const LinSolution sol = solve_lin(n, sc);
    row.factor = sol.factor;
    row.inverse_factor = sol.factor > 0.0 ? 1.0 / sol.factor : 0.0;
    row.status = sol.status;
    row.gap = sol.gap;
    if (sol.status == SdpStatus::kOptimal) {
      try {
        const RecoveredSchedule rec = recover_steps(sol);
        const CrosscheckReport check = crosscheck(sol, rec, sc);
        row.parameters = "recovery=" + to_string(rec.path);
        if (check.status != SdpStatus::kOptimal ||
            std::abs(check.difference) > 1e-4) {
          row.parameters += ";crosscheck=failed";
          all_ok = false;
        }
        const auto path = std::filesystem::path(cfg.schedule_dir) /
                          ("optimal_n" + std::to_string(n) + ".json");
        save_schedule(rec.schedule, path);
        if (cfg.render) {
          std::cerr << "n=" << n << " (certified factor " << row.factor << "):\n"
                    << render_schedule(rec.schedule) << "\n";
        }
      } catch (const std::exception& e) {
        row.parameters = std::string("recovery=failed: ") + e.what();
        all_ok = false;
      }
    } else {
      all_ok = false;
    }
    rows.push_back(row);
  }

  emit_rows(cfg, rows);
  return all_ok ? 0 : 2;
}

// --- verify -----------------------------------------------------------

void collect(std::vector<IdentityRecord>& into, IdentityRecord rec) {
  into.push_back(std::move(rec));
}

// Closed-form factor vs the dual SDP, plus the closed-form certificate,
// over a small (n, h) grid.
void gradient_suite(const RunConfig& cfg, std::vector<IdentityRecord>& records) {
  const std::vector<double> h_grid = {0.1, 0.5, 1.0};
  SolveConfig sc;
  sc.tolerance = cfg.tol;
  sc.max_iterations = cfg.max_iter;
  for (int n = 1; n <= 12; ++n) {
    for (std::size_t hi = 0; hi < h_grid.size(); ++hi) {
      const double h = h_grid[hi];
      const double analytic = analytic_gm_bound(n, h);
      const NumericBound nb = numeric_bound(gm_schedule(n, h), sc);
      const double diff = std::abs(nb.factor - analytic);
      collect(records, {"gm-analytic-vs-dual", n, static_cast<int>(hi), diff,
                        nb.status == SdpStatus::kOptimal && diff <= 1e-5});

      const CertificateCheck check =
          verify_certificate(gm_schedule(n, h), gm_certificate(n, h));
      const double residual =
          std::max(check.multiplier_residual, std::max(0.0, -check.lmi_min_eigenvalue));
      collect(records, {"gm-certificate", n, static_cast<int>(hi), residual, check.pass});
    }
  }
}

// Native two-sequence recursion vs the coefficient table, on random
// well-conditioned quadratics.
void fgm_equiv_suite(const RunConfig& cfg, std::vector<IdentityRecord>& records) {
  for (int case_id = 0; case_id < 20; ++case_id) {
    const int dim = 2 + case_id % 7;
    const int n = 1 + case_id % 15;
    const FunctionOracle oracle =
        random_quadratic_oracle(dim, 1.0, cfg.seed + static_cast<std::uint64_t>(case_id));
    std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * (case_id + 1)));
    std::normal_distribution<double> gauss;
    Eigen::VectorXd x0(dim);
    for (int i = 0; i < dim; ++i) x0(i) = gauss(rng);

    const FgmTrajectory native = run_fgm_native(oracle, n, x0);
    const Trajectory main_run = run_fo(oracle, fgm_schedule(n, FgmVariant::kMain), x0);
    double worst = 0.0;
    {
      const double native_last = native.main_values.back();
      const double table_last = main_run.values.back();
      worst = std::abs(native_last - table_last) /
              std::max(1.0, std::abs(native_last));
    }
    if (n >= 2) {
      const Trajectory aux_run = run_fo(oracle, fgm_schedule(n, FgmVariant::kAux), x0);
      const double native_last = native.aux_values.back();
      const double table_last = aux_run.values.back();
      worst = std::max(worst, std::abs(native_last - table_last) /
                                  std::max(1.0, std::abs(native_last)));
    }
    collect(records, {"fgm-trajectory-equivalence", n, case_id, worst, worst <= 1e-8});
  }
}

// Smooth-convex interpolation inequality on sampled point pairs, for each
// oracle family the tests rely on.
void cocoercivity_suite(const RunConfig& cfg, std::vector<IdentityRecord>& records) {
  struct Case {
    std::string name;
    FunctionOracle oracle;
  };
  std::vector<Case> cases;
  cases.push_back({"phi1", phi1_oracle(5, 1.0, 1.0, 1.0)});
  cases.push_back({"phi2", phi2_oracle(1.0)});
  for (int i = 0; i < 3; ++i) {
    cases.push_back({"quadratic-" + std::to_string(i),
                     random_quadratic_oracle(3 + 2 * i, 1.0, cfg.seed + 100 + i)});
  }
  int case_id = 0;
  for (const auto& c : cases) {
    const CocoercivityReport report = cocoercivity_check(c.oracle, 200, cfg.seed);
    collect(records, {"cocoercivity-" + c.name, c.oracle.dim(), case_id,
                      report.max_violation, report.violations == 0});
    ++case_id;
  }
}

int cmd_verify(const RunConfig& cfg) {
  std::vector<IdentityRecord> records;
  const bool all = cfg.suite == "all";
  if (all || cfg.suite == "gradient") gradient_suite(cfg, records);
  if (all || cfg.suite == "appendix") {
    const PdSuiteReport report = dual_pd_suite();
    records.insert(records.end(), report.entries.begin(), report.entries.end());
  }
  if (all || cfg.suite == "fgm-equiv") fgm_equiv_suite(cfg, records);
  if (all || cfg.suite == "cocoercivity") cocoercivity_suite(cfg, records);
  if (records.empty()) {
    std::cerr << "unknown suite: " << cfg.suite << "\n";
    return 1;
  }

  const bool pass =
      std::all_of(records.begin(), records.end(), [](const IdentityRecord& r) { return r.pass; });

  OutputSink sink(cfg.out);
  if (cfg.format == "json") {
    PdSuiteReport wrapper;
    wrapper.entries = records;
    wrapper.pass = pass;
    for (const auto& r : records) {
      wrapper.max_identity_residual = std::max(wrapper.max_identity_residual, r.residual);
    }
    sink.stream() << pd_suite_report_json(wrapper) << "\n";
  } else {
    for (const auto& r : records) {
      char line[160];
      std::snprintf(line, sizeof(line), "%-34s N=%-4d k=%-4d residual=%-12.3e %s\n",
                    r.identity.c_str(), r.n, r.k, r.residual, r.pass ? "pass" : "FAIL");
      sink.stream() << line;
    }
    sink.stream() << (pass ? "all checks passed\n" : "FAILURES present\n");
  }
  return pass ? 0 : 1;
}

// --- table ------------------------------------------------------------

int cmd_table(const RunConfig& cfg) {
  std::ofstream log_stream;
  if (!cfg.iter_log.empty()) log_stream.open(cfg.iter_log);
  const SolveConfig sc = solver_config(cfg, &log_stream);

  struct Row {
    int n;
    std::vector<std::pair<std::string, double>> cells;  // column -> inverse factor
  };
  std::vector<Row> table;
  bool all_ok = true;
  for (int n : cfg.grid) {
    Row row{n, {}};
    row.cells.emplace_back("gm", 1.0 / analytic_gm_bound(n, cfg.h));
    const auto push_numeric = [&](const std::string& name, const StepSchedule& s) {
      const NumericBound nb = numeric_bound(s, sc);
      if (nb.status != SdpStatus::kOptimal) all_ok = false;
      row.cells.emplace_back(name, nb.factor > 0.0 ? 1.0 / nb.factor : 0.0);
    };
    push_numeric("hbm", hbm_schedule(n, cfg.alpha, cfg.beta));
    push_numeric("fgm_main", fgm_schedule(n, FgmVariant::kMain));
    if (n == 1) {
      row.cells.emplace_back("fgm_aux", 1.0 / zero_step_bound());
    } else {
      push_numeric("fgm_aux", fgm_schedule(n, FgmVariant::kAux));
    }
    row.cells.emplace_back("fgm_reference", 1.0 / fgm_reference(n));
    if (cfg.with_optimal) {
      const LinSolution sol = solve_lin(n, sc);
      if (sol.status != SdpStatus::kOptimal) all_ok = false;
      row.cells.emplace_back("optimal", sol.factor > 0.0 ? 1.0 / sol.factor : 0.0);
    }
    table.push_back(std::move(row));
  }

  OutputSink sink(cfg.out);
  std::ostream& os = sink.stream();
  if (cfg.format == "json") {
    os << "[";
    for (std::size_t i = 0; i < table.size(); ++i) {
      os << (i == 0 ? "" : ",") << "\n  {\"n\": " << table[i].n;
      for (const auto& [name, value] : table[i].cells) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", cfg.digits, value);
        os << ", \"" << name << "\": " << buf;
      }
      os << "}";
    }
    os << "\n]\n";
  } else {
    os << "n";
    for (const auto& [name, value] : table.front().cells) os << "," << name;
    os << "\n";
    for (const auto& row : table) {
      os << row.n;
      for (const auto& [name, value] : row.cells) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", cfg.digits, value);
        os << "," << buf;
      }
      os << "\n";
    }
  }
  return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified worst-case bounds for fixed-step first-order methods"};
  app.require_subcommand(1);

  app.set_help_flag("--help", "print help");

  RunConfig cfg;
  const auto add_common = [&cfg](CLI::App* sub, bool with_method) {
    sub->set_help_flag("--help", "print help");  // keep --h free for the step length
    if (with_method) {
      sub->add_option("--method", cfg.method,
                      "gm, hbm, fgm, or file:<path> with a schedule JSON");
    }
    sub->add_option("--n", cfg.grid, "step counts (comma separated)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    sub->add_option("--h", cfg.h, "gm step length");
    sub->add_option("--alpha", cfg.alpha, "hbm gradient weight");
    sub->add_option("--beta", cfg.beta, "hbm momentum weight");
    sub->add_option("--variant", cfg.variant, "fgm chain: main or aux")
        ->check(CLI::IsMember({"main", "aux"}));
    sub->add_option("--tol", cfg.tol, "solver tolerance")->envname("PEPKIT_TOL");
    sub->add_option("--max-iter", cfg.max_iter, "solver iteration cap")
        ->envname("PEPKIT_MAX_ITER");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "write the table here instead of stdout");
    sub->add_option("--seed", cfg.seed, "seed for sampled checks");
    sub->add_option("--digits", cfg.digits, "significant digits in tables")
        ->check(CLI::Range(3, 17));
    sub->add_option("--verbose", cfg.verbose, "solver verbosity (0-2)")
        ->envname("PEPKIT_VERBOSE");
    sub->add_option("--iter-log", cfg.iter_log, "CSV file for solver iterations");
  };

  CLI::App* bound = app.add_subcommand("bound", "certified factor per method and n");
  add_common(bound, true);

  CLI::App* optimize =
      app.add_subcommand("optimize", "best fixed-step schedule per n");
  add_common(optimize, false);
  optimize->add_option("--schedule-dir", cfg.schedule_dir,
                       "directory for the recovered schedule files");
  optimize->add_flag("--render", cfg.render, "print readable update rules to stderr");

  CLI::App* verify = app.add_subcommand("verify", "run an invariant suite");
  add_common(verify, false);
  verify->add_option("--suite", cfg.suite,
                     "gradient, appendix, fgm-equiv, cocoercivity, or all")
      ->check(CLI::IsMember({"gradient", "appendix", "fgm-equiv", "cocoercivity", "all"}));

  CLI::App* table = app.add_subcommand("table", "inverse factors, one column per method");
  add_common(table, false);
  table->add_flag("--with-optimal", cfg.with_optimal,
                  "append the optimized-schedule column");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bound->parsed()) return cmd_bound(cfg);
    if (optimize->parsed()) return cmd_optimize(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (table->parsed()) return cmd_table(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
