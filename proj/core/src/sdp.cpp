#include "pepkit/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pepkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Entry {
  int p;
  int q;
  double v;
};

// Symmetric cone coefficient stored as its full nonzero list (both
// triangles), so trace inner products and rank-structured updates can walk
// the entries directly.
struct SparseSym {
  std::vector<Entry> entries;
  double frob = 0.0;

  void finish() {
    double s = 0.0;
    for (const auto& e : entries) s += e.v * e.v;
    frob = std::sqrt(s);
  }

  double dot(const Eigen::MatrixXd& m) const {
    double s = 0.0;
    for (const auto& e : entries) s += e.v * m(e.p, e.q);
    return s;
  }

  void add_to(Eigen::MatrixXd& m, double scale) const {
    for (const auto& e : entries) m(e.p, e.q) += scale * e.v;
  }
};

// Conic core problem.  The user problem  min c'x : F0 + sum x_j F_j >= 0
// is treated as the dual side
//   max b'y : C - sum y_j A_j >= 0      with C = F0, A_j = -F_j, b = -c,
// against the primal  min <C,X> : <A_j,X> = b_j, X >= 0.  The user
// objective value is -b'y.
struct Conic {
  int dim = 0;
  Eigen::VectorXd b;
  Eigen::MatrixXd c;
  std::vector<SparseSym> a;
};

struct ConicResult {
  SdpStatus status = SdpStatus::kMaxIterations;
  Eigen::VectorXd y;
  int iterations = 0;
  double gap = kInf;
  double pres = kInf;
  double dres = kInf;
};

void check_symmetric_dense(const Eigen::MatrixXd& m, const char* what, int index) {
  if (m.rows() == 0) return;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    std::ostringstream os;
    os << what;
    if (index >= 0) os << " " << index;
    os << " is not symmetric (max asymmetry " << asym << ")";
    throw std::invalid_argument(os.str());
  }
}

void validate_problem(const SdpProblem& p) {
  const int m = p.num_vars();
  const int dim = p.lmi_dim();
  if (p.lmi_constant.cols() != dim) {
    throw std::invalid_argument("solve_sdp: lmi_constant must be square");
  }
  if (static_cast<int>(p.lmi_coeffs.size()) != m) {
    throw std::invalid_argument("solve_sdp: need one lmi coefficient per variable");
  }
  for (int j = 0; j < m; ++j) {
    if (p.lmi_coeffs[static_cast<std::size_t>(j)].rows() != dim ||
        p.lmi_coeffs[static_cast<std::size_t>(j)].cols() != dim) {
      throw std::invalid_argument("solve_sdp: lmi coefficient dimension mismatch");
    }
  }
  for (int j : p.nonnegative_vars) {
    if (j < 0 || j >= m) throw std::invalid_argument("solve_sdp: nonnegative index out of range");
  }
  if (p.ineq_lhs.rows() > 0 &&
      (p.ineq_lhs.cols() != m || p.ineq_rhs.size() != p.ineq_lhs.rows())) {
    throw std::invalid_argument("solve_sdp: inequality block dimension mismatch");
  }
  if (p.eq_lhs.rows() > 0 && (p.eq_lhs.cols() != m || p.eq_rhs.size() != p.eq_lhs.rows())) {
    throw std::invalid_argument("solve_sdp: equality block dimension mismatch");
  }
  check_symmetric_dense(Eigen::MatrixXd(p.lmi_constant), "solve_sdp: lmi_constant", -1);
  for (int j = 0; j < m; ++j) {
    check_symmetric_dense(Eigen::MatrixXd(p.lmi_coeffs[static_cast<std::size_t>(j)]),
                          "solve_sdp: lmi coefficient", j);
  }
}

// Embeds the sign constraints and scalar inequalities as 1x1 diagonal
// blocks after the matrix block, producing a single cone.
Conic build_conic(const SdpProblem& p) {
  const int m = p.num_vars();
  const int base = p.lmi_dim();
  std::vector<int> nn;
  for (int j : p.nonnegative_vars) {
    if (std::find(nn.begin(), nn.end(), j) == nn.end()) nn.push_back(j);
  }
  const int num_nn = static_cast<int>(nn.size());
  const int num_ineq = static_cast<int>(p.ineq_lhs.rows());

  Conic cp;
  cp.dim = base + num_nn + num_ineq;
  cp.b = -p.objective;
  cp.c = Eigen::MatrixXd::Zero(cp.dim, cp.dim);
  if (base > 0) cp.c.topLeftCorner(base, base) = Eigen::MatrixXd(p.lmi_constant);
  for (int r = 0; r < num_ineq; ++r) {
    cp.c(base + num_nn + r, base + num_nn + r) = p.ineq_rhs(r);
  }

  cp.a.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    auto& aj = cp.a[static_cast<std::size_t>(j)];
    if (base > 0) {
      const Eigen::MatrixXd fj(p.lmi_coeffs[static_cast<std::size_t>(j)]);
      for (int col = 0; col < base; ++col) {
        for (int row = 0; row < base; ++row) {
          if (fj(row, col) != 0.0) aj.entries.push_back({row, col, -fj(row, col)});
        }
      }
    }
    for (int s = 0; s < num_nn; ++s) {
      if (nn[static_cast<std::size_t>(s)] == j) aj.entries.push_back({base + s, base + s, -1.0});
    }
    for (int r = 0; r < num_ineq; ++r) {
      if (p.ineq_lhs(r, j) != 0.0) {
        aj.entries.push_back({base + num_nn + r, base + num_nn + r, -p.ineq_lhs(r, j)});
      }
    }
    aj.finish();
  }
  return cp;
}

bool chol_pd(const Eigen::MatrixXd& m, Eigen::LLT<Eigen::MatrixXd>* llt) {
  llt->compute(m);
  if (llt->info() == Eigen::Success) return true;
  const double base = std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  double jitter = base * 1e-14;
  for (int k = 0; k < 8; ++k) {
    llt->compute(m + jitter * Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    if (llt->info() == Eigen::Success) return true;
    jitter *= 100.0;
  }
  return false;
}

// Largest a in (0, 1] with m + a dm positive definite, backed off by gamma
// from the exact boundary.
double max_step(const Eigen::MatrixXd& m, const Eigen::MatrixXd& dm, double gamma) {
  Eigen::LLT<Eigen::MatrixXd> llt(m.rows());
  if (!chol_pd(m, &llt)) return 0.0;
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd half = l.triangularView<Eigen::Lower>().solve(dm);
  const Eigen::MatrixXd w =
      l.triangularView<Eigen::Lower>().solve(half.transpose().eval());
  const Eigen::MatrixXd sym = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  const double lam = es.eigenvalues().minCoeff();
  double alpha = (lam < -1e-14) ? std::min(1.0, -gamma / lam) : 1.0;
  Eigen::LLT<Eigen::MatrixXd> probe(m.rows());
  for (int k = 0; k < 60 && alpha > 1e-14; ++k) {
    probe.compute(m + alpha * dm);
    if (probe.info() == Eigen::Success) return alpha;
    alpha *= 0.8;
  }
  return 0.0;
}

ConicResult solve_conic(const Conic& cp, const SolveConfig& cfg) {
  const int n = cp.dim;
  const int m = static_cast<int>(cp.b.size());
  ConicResult res;

  if (n == 0) {
    res.y = Eigen::VectorXd::Zero(m);
    res.status = (cp.b.norm() == 0.0) ? SdpStatus::kOptimal : SdpStatus::kUnbounded;
    res.gap = res.pres = res.dres = 0.0;
    return res;
  }
  if (m == 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cp.c, Eigen::EigenvaluesOnly);
    res.y = Eigen::VectorXd();
    res.status = (es.eigenvalues().minCoeff() >= -1e-9) ? SdpStatus::kOptimal
                                                        : SdpStatus::kInfeasible;
    res.gap = res.pres = res.dres = 0.0;
    return res;
  }

  double bscale = 0.0;
  double a_norm_max = 0.0;
  for (const auto& aj : cp.a) {
    a_norm_max = std::max(a_norm_max, aj.frob);
  }
  for (int j = 0; j < m; ++j) {
    bscale = std::max(bscale, std::abs(cp.b(j)) / (1.0 + cp.a[static_cast<std::size_t>(j)].frob));
  }
  const double cnorm = cp.c.norm();
  const double bnorm = cp.b.norm();
  const double xi = n * std::max(1.0, bscale);
  const double eta = std::max({1.0, cnorm, a_norm_max});

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd x = xi * id;
  Eigen::MatrixXd z = eta * id;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  const double tr_x0 = x.trace();

  ConicResult best;
  double best_score = kInf;
  bool header_written = false;

  int iter = 0;
  for (; iter < cfg.max_iterations; ++iter) {
    const double pobj = cp.c.cwiseProduct(x).sum();
    const double dobj = cp.b.dot(y);

    Eigen::MatrixXd rd = cp.c - z;
    for (int j = 0; j < m; ++j) cp.a[static_cast<std::size_t>(j)].add_to(rd, -y(j));
    Eigen::VectorXd rp(m);
    for (int j = 0; j < m; ++j) rp(j) = cp.b(j) - cp.a[static_cast<std::size_t>(j)].dot(x);

    const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pres = rp.norm() / (1.0 + bnorm);
    const double dres = rd.norm() / (1.0 + cnorm);
    const double score = std::max({relgap, pres, dres});

    if (score < best_score) {
      best_score = score;
      best.y = y;
      best.iterations = iter;
      best.gap = relgap;
      best.pres = pres;
      best.dres = dres;
    }
    if (cfg.iteration_log != nullptr) {
      if (!header_written) {
        (*cfg.iteration_log) << "iteration,gap,primal_res,dual_res\n";
        header_written = true;
      }
      char line[160];
      std::snprintf(line, sizeof(line), "%d,%.9e,%.9e,%.9e\n", iter, relgap, pres, dres);
      (*cfg.iteration_log) << line;
    }
    if (cfg.verbosity >= 1) {
      std::cerr << "sdp iter " << iter << ": gap=" << relgap << " pres=" << pres
                << " dres=" << dres << "\n";
    }

    if (relgap < cfg.tolerance && pres < cfg.tolerance && dres < cfg.tolerance) {
      res.status = SdpStatus::kOptimal;
      res.y = y;
      res.iterations = iter;
      res.gap = relgap;
      res.pres = pres;
      res.dres = dres;
      return res;
    }
    if (x.trace() / tr_x0 > 1e10) {
      res.status = SdpStatus::kInfeasible;
      res.y = y;
      res.iterations = iter;
      res.gap = relgap;
      res.pres = pres;
      res.dres = dres;
      return res;
    }
    if (-dobj < -1e12) {
      res.status = SdpStatus::kUnbounded;
      res.y = y;
      res.iterations = iter;
      res.gap = relgap;
      res.pres = pres;
      res.dres = dres;
      return res;
    }

    const double mu = x.cwiseProduct(z).sum() / n;

    Eigen::LLT<Eigen::MatrixXd> llt_z(n);
    if (!chol_pd(z, &llt_z)) break;
    const Eigen::MatrixXd zinv = llt_z.solve(id);

    // Schur complement B(i,j) = <A_j, X A_i Z^-1>; symmetric because X and
    // Z^-1 are.
    Eigen::MatrixXd bmat(m, m);
    Eigen::MatrixXd w(n, n);
    for (int i = 0; i < m; ++i) {
      w.setZero();
      for (const auto& e : cp.a[static_cast<std::size_t>(i)].entries) {
        w.noalias() += e.v * x.col(e.p) * zinv.row(e.q);
      }
      for (int j = i; j < m; ++j) {
        const double s = cp.a[static_cast<std::size_t>(j)].dot(w);
        bmat(i, j) = s;
        bmat(j, i) = s;
      }
    }
    // Tiny ridge keeps the factorization stable once the iterates polarize;
    // rank-revealing fallback if it still is not positive definite.
    bmat.diagonal().array() += 1e-14 * bmat.trace() / m;
    Eigen::LLT<Eigen::MatrixXd> bllt(bmat);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> bcod;
    const bool b_spd = (bllt.info() == Eigen::Success);
    if (!b_spd) bcod.compute(bmat);
    const auto solve_schur = [&](const Eigen::VectorXd& r) {
      return b_spd ? bllt.solve(r).eval() : bcod.solve(r).eval();
    };

    const Eigen::MatrixXd m_rd = zinv * rd * x;
    Eigen::VectorXd a_dot_zinv(m), a_dot_x(m), a_dot_mrd(m);
    for (int j = 0; j < m; ++j) {
      const auto& aj = cp.a[static_cast<std::size_t>(j)];
      a_dot_zinv(j) = aj.dot(zinv);
      a_dot_x(j) = aj.dot(x);
      a_dot_mrd(j) = aj.dot(m_rd);
    }

    const double gamma = (iter < 2) ? 0.9 : 0.98;

    // Predictor: sigma = 0, no correction term.
    const Eigen::VectorXd rhs_aff = rp + a_dot_x + a_dot_mrd;
    const Eigen::VectorXd dy_aff = solve_schur(rhs_aff);
    Eigen::MatrixXd dz_aff = rd;
    for (int j = 0; j < m; ++j) cp.a[static_cast<std::size_t>(j)].add_to(dz_aff, -dy_aff(j));
    Eigen::MatrixXd dx_aff = -x - zinv * dz_aff * x;
    dx_aff = 0.5 * (dx_aff + dx_aff.transpose()).eval();

    const double ap_aff = max_step(x, dx_aff, gamma);
    const double ad_aff = max_step(z, dz_aff, gamma);
    const double mu_aff =
        (x + ap_aff * dx_aff).cwiseProduct(z + ad_aff * dz_aff).sum() / n;
    const double ratio = std::min(1.0, std::max(0.0, mu_aff / mu));
    const double sigma = ratio * ratio * ratio;

    // Corrector with the cross term from the affine step.
    const Eigen::MatrixXd xi_corr = dz_aff * dx_aff;
    const Eigen::MatrixXd m_xi = zinv * xi_corr;
    Eigen::VectorXd rhs(m);
    for (int j = 0; j < m; ++j) {
      rhs(j) = rp(j) - sigma * mu * a_dot_zinv(j) +
               cp.a[static_cast<std::size_t>(j)].dot(m_xi) + a_dot_x(j) + a_dot_mrd(j);
    }
    const Eigen::VectorXd dy = solve_schur(rhs);
    Eigen::MatrixXd dz = rd;
    for (int j = 0; j < m; ++j) cp.a[static_cast<std::size_t>(j)].add_to(dz, -dy(j));
    Eigen::MatrixXd dx = sigma * mu * zinv - m_xi - x - zinv * dz * x;
    dx = 0.5 * (dx + dx.transpose()).eval();

    const double ap = max_step(x, dx, gamma);
    const double ad = max_step(z, dz, gamma);
    if (cfg.verbosity >= 2) {
      std::cerr << "  sigma=" << sigma << " mu=" << mu << " mu_aff=" << mu_aff
                << " ap_aff=" << ap_aff << " ad_aff=" << ad_aff << " ap=" << ap << " ad=" << ad
                << "\n";
    }
    if (ap == 0.0 && ad == 0.0) break;

    x += ap * dx;
    z += ad * dz;
    y += ad * dy;
    x = 0.5 * (x + x.transpose()).eval();
    z = 0.5 * (z + z.transpose()).eval();
  }

  best.status = (x.trace() / tr_x0 > 1e6) ? SdpStatus::kInfeasible : SdpStatus::kMaxIterations;
  best.iterations = iter;
  if (best.y.size() == 0) best.y = y;
  return best;
}

SdpSolution finish_solution(const SdpProblem& p, const ConicResult& r,
                            const Eigen::VectorXd& x_user) {
  SdpSolution out;
  out.status = r.status;
  out.x = x_user;
  out.objective_value = p.objective.dot(x_user);
  out.iterations = r.iterations;
  out.duality_gap = r.gap;
  out.primal_residual = r.pres;
  out.dual_residual = r.dres;
  return out;
}

// Eliminates eq_lhs x = eq_rhs through x = x_p + N w with N a kernel basis,
// then solves the reduced problem in w.
SdpSolution solve_with_equalities(const SdpProblem& p, const SolveConfig& cfg) {
  const int m = p.num_vars();
  const Eigen::VectorXd x_p = p.eq_lhs.colPivHouseholderQr().solve(p.eq_rhs);
  const double cons = (p.eq_lhs * x_p - p.eq_rhs).norm();
  if (cons > 1e-9 * (1.0 + p.eq_rhs.norm())) {
    SdpSolution out;
    out.status = SdpStatus::kInfeasible;
    out.x = x_p;
    out.objective_value = p.objective.dot(x_p);
    return out;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(p.eq_lhs);
  const int kernel_dim = static_cast<int>(lu.dimensionOfKernel());
  const int base = p.lmi_dim();

  Eigen::MatrixXd shifted_const = Eigen::MatrixXd::Zero(base, base);
  if (base > 0) {
    shifted_const = Eigen::MatrixXd(p.lmi_constant);
    for (int j = 0; j < m; ++j) {
      if (x_p(j) != 0.0) {
        shifted_const += x_p(j) * Eigen::MatrixXd(p.lmi_coeffs[static_cast<std::size_t>(j)]);
      }
    }
  }

  if (kernel_dim == 0) {
    // Unique point; feasibility decides the status.
    bool ok = true;
    if (base > 0) ok = min_eigenvalue(shifted_const) >= -1e-9;
    for (int j : p.nonnegative_vars) ok = ok && x_p(j) >= -1e-9;
    if (p.ineq_lhs.rows() > 0) {
      ok = ok && ((p.ineq_lhs * x_p + p.ineq_rhs).minCoeff() >= -1e-9);
    }
    SdpSolution out;
    out.status = ok ? SdpStatus::kOptimal : SdpStatus::kInfeasible;
    out.x = x_p;
    out.objective_value = p.objective.dot(x_p);
    out.duality_gap = out.primal_residual = out.dual_residual = 0.0;
    return out;
  }

  const Eigen::MatrixXd nullsp = lu.kernel();
  SdpProblem red;
  red.objective = nullsp.transpose() * p.objective;
  red.lmi_constant = shifted_const.sparseView();
  red.lmi_coeffs.reserve(static_cast<std::size_t>(kernel_dim));
  for (int i = 0; i < kernel_dim; ++i) {
    Eigen::MatrixXd fi = Eigen::MatrixXd::Zero(base, base);
    for (int j = 0; j < m; ++j) {
      if (nullsp(j, i) != 0.0) {
        fi += nullsp(j, i) * Eigen::MatrixXd(p.lmi_coeffs[static_cast<std::size_t>(j)]);
      }
    }
    red.lmi_coeffs.push_back(fi.sparseView());
  }
  const int extra = static_cast<int>(p.nonnegative_vars.size());
  const int old_ineq = static_cast<int>(p.ineq_lhs.rows());
  red.ineq_lhs = Eigen::MatrixXd::Zero(old_ineq + extra, kernel_dim);
  red.ineq_rhs = Eigen::VectorXd::Zero(old_ineq + extra);
  if (old_ineq > 0) {
    red.ineq_lhs.topRows(old_ineq) = p.ineq_lhs * nullsp;
    red.ineq_rhs.head(old_ineq) = p.ineq_lhs * x_p + p.ineq_rhs;
  }
  for (int s = 0; s < extra; ++s) {
    const int j = p.nonnegative_vars[static_cast<std::size_t>(s)];
    red.ineq_lhs.row(old_ineq + s) = nullsp.row(j);
    red.ineq_rhs(old_ineq + s) = x_p(j);
  }

  const Conic cp = build_conic(red);
  const ConicResult r = solve_conic(cp, cfg);
  const Eigen::VectorXd x_user = (r.y.size() == kernel_dim) ? (x_p + nullsp * r.y).eval() : x_p;
  return finish_solution(p, r, x_user);
}

}  // namespace

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal:
      return "optimal";
    case SdpStatus::kInfeasible:
      return "infeasible";
    case SdpStatus::kUnbounded:
      return "unbounded";
    case SdpStatus::kMaxIterations:
      return "max-iterations";
  }
  return "unknown";
}

SdpSolution solve_sdp(const SdpProblem& p, const SolveConfig& cfg) {
  validate_problem(p);
  if (p.eq_lhs.rows() > 0) return solve_with_equalities(p, cfg);
  const Conic cp = build_conic(p);
  const ConicResult r = solve_conic(cp, cfg);
  const Eigen::VectorXd x_user =
      (r.y.size() == p.num_vars()) ? r.y : Eigen::VectorXd::Zero(p.num_vars());
  return finish_solution(p, r, x_user);
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("min_eigenvalue: matrix must be square and non-empty");
  }
  check_symmetric_dense(m, "min_eigenvalue: matrix", -1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const Eigen::MatrixXd& m, double tol) { return min_eigenvalue(m) >= -tol; }

}  // namespace pepkit
