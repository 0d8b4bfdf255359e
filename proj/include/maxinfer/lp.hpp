#pragma once

// Dense tableau simplex for small-to-moderate linear programs
//
//     minimize c'x  subject to  A x (<=, =, >=) b,  x >= lower.
//
// Problems are brought to standard form (shifted or split variables, one
// slack per inequality row). When every cost is nonnegative and there are no
// equality rows the all-slack basis is dual feasible and a dual simplex runs
// directly; this is the shape of the Dantzig selector program. Otherwise a
// two-phase primal simplex with artificial variables is used. Pricing is
// Dantzig's rule until a run of degenerate pivots trips the Bland fallback.
//
// Optimal results are re-derived from an LU factorization of the final basis
// against the original data and carry a primal/dual certificate. If the
// certificate fails the tableau is rebuilt from that factorization and the
// iterations resume.

#include "maxinfer/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxinfer::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

struct Problem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd bounds;
  std::vector<Sense> senses;
  /// Per-variable lower bounds; empty means all zero. -inf marks a free variable.
  Eigen::VectorXd lower;

  [[nodiscard]] Eigen::Index num_vars() const noexcept { return objective.size(); }
  [[nodiscard]] Eigen::Index num_rows() const noexcept { return constraints.rows(); }

  void validate() const {
    if (constraints.cols() != objective.size() && constraints.rows() > 0) {
      throw DimensionError("lp::Problem: constraint columns must match objective length");
    }
    if (bounds.size() != constraints.rows() ||
        static_cast<Eigen::Index>(senses.size()) != constraints.rows()) {
      throw DimensionError("lp::Problem: bounds and senses must have one entry per row");
    }
    if (lower.size() != 0 && lower.size() != objective.size()) {
      throw DimensionError("lp::Problem: lower bounds must have one entry per variable");
    }
    if (!objective.allFinite() || !constraints.allFinite() || !bounds.allFinite()) {
      throw std::domain_error("lp::Problem: data must be finite");
    }
    for (Eigen::Index j = 0; j < lower.size(); ++j) {
      if (std::isnan(lower(j)) || lower(j) == std::numeric_limits<double>::infinity()) {
        throw std::domain_error("lp::Problem: lower bounds must be finite or -inf");
      }
    }
  }

  [[nodiscard]] double lower_bound(Eigen::Index j) const { return lower.size() == 0 ? 0.0 : lower(j); }
};

struct Solution {
  Status status = Status::IterationLimit;
  Eigen::VectorXd x;
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  /// Row multipliers for the original constraints (sign convention: the
  /// Lagrangian is c'x - duals'(Ax - b)).
  Eigen::VectorXd duals;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  std::size_t iterations = 0;
};

struct Options {
  std::size_t iteration_limit = 50000;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-11;
  std::size_t degenerate_run_before_bland = 50;
};

namespace detail {

// Standard form: A_std u = b_std, u >= 0. Column map back to original vars.
struct StandardForm {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<double> row_sign;          // +1 or -1 applied to the original row
  std::vector<bool> is_equality;
  Eigen::Index structural = 0;           // number of structural columns
  std::vector<Eigen::Index> orig_var;    // structural column -> original var
  std::vector<double> var_sign;          // +1, or -1 for the negative part of a free var
  Eigen::VectorXd shift;                 // original lower bounds (0 for free vars)
};

inline StandardForm standardize(const Problem& prob) {
  StandardForm sf;
  const Eigen::Index nv = prob.num_vars();
  const Eigen::Index m = prob.num_rows();
  sf.shift = Eigen::VectorXd::Zero(nv);
  for (Eigen::Index j = 0; j < nv; ++j) {
    const double l = prob.lower_bound(j);
    if (std::isfinite(l)) {
      sf.shift(j) = l;
      sf.orig_var.push_back(j);
      sf.var_sign.push_back(1.0);
    } else {
      sf.orig_var.push_back(j);
      sf.var_sign.push_back(1.0);
      sf.orig_var.push_back(j);
      sf.var_sign.push_back(-1.0);
    }
  }
  sf.structural = static_cast<Eigen::Index>(sf.orig_var.size());
  Eigen::Index slacks = 0;
  for (Sense s : prob.senses) slacks += s == Sense::Equal ? 0 : 1;
  const Eigen::Index cols = sf.structural + slacks;
  sf.a = Eigen::MatrixXd::Zero(m, cols);
  sf.c = Eigen::VectorXd::Zero(cols);
  sf.b = Eigen::VectorXd::Zero(m);
  for (Eigen::Index k = 0; k < sf.structural; ++k) {
    const Eigen::Index j = sf.orig_var[static_cast<std::size_t>(k)];
    const double sign = sf.var_sign[static_cast<std::size_t>(k)];
    sf.c(k) = sign * prob.objective(j);
    if (m > 0) sf.a.col(k) = sign * prob.constraints.col(j);
  }
  const Eigen::VectorXd shifted =
      m > 0 ? Eigen::VectorXd(prob.bounds - prob.constraints * sf.shift) : Eigen::VectorXd(0);
  Eigen::Index slack = sf.structural;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Sense s = prob.senses[static_cast<std::size_t>(i)];
    const double sign = s == Sense::GreaterEqual ? -1.0 : 1.0;
    sf.row_sign.push_back(sign);
    sf.is_equality.push_back(s == Sense::Equal);
    sf.a.row(i).head(sf.structural) *= sign;
    sf.b(i) = sign * shifted(i);
    if (s != Sense::Equal) sf.a(i, slack++) = 1.0;
  }
  return sf;
}

class Tableau {
 public:
  Eigen::MatrixXd t;         // B^{-1} A over all columns (incl. artificials)
  Eigen::VectorXd rhs;       // B^{-1} b
  Eigen::VectorXd cost;      // current phase costs per column
  Eigen::VectorXd reduced;   // reduced costs
  std::vector<Eigen::Index> basis;
  std::size_t iterations = 0;

  void pivot(Eigen::Index r, Eigen::Index q) {
    const double piv = t(r, q);
    t.row(r) /= piv;
    rhs(r) /= piv;
    Eigen::VectorXd col = t.col(q);
    col(r) = 0.0;
    const Eigen::RowVectorXd prow = t.row(r);
    t.noalias() -= col * prow;
    rhs.noalias() -= col * rhs(r);
    t.col(q).setZero();
    t(r, q) = 1.0;
    const double dq = reduced(q);
    reduced.noalias() -= dq * prow.transpose();
    reduced(q) = 0.0;
    basis[static_cast<std::size_t>(r)] = q;
    ++iterations;
  }

  void recompute_reduced() {
    Eigen::VectorXd cb(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) cb(static_cast<Eigen::Index>(i)) = cost(basis[i]);
    reduced = cost - t.transpose() * cb;
    for (Eigen::Index q : basis) reduced(q) = 0.0;
  }
};

enum class Outcome { Done, Unbounded, Infeasible, Limit };

// Primal simplex over columns [0, active_cols).
inline Outcome primal_simplex(Tableau& tab, Eigen::Index active_cols, const Options& opt) {
  std::size_t degenerate_run = 0;
  const Eigen::Index m = tab.t.rows();
  for (;;) {
    if (tab.iterations >= opt.iteration_limit) return Outcome::Limit;
    const bool bland = degenerate_run >= opt.degenerate_run_before_bland;
    Eigen::Index q = -1;
    double best = -opt.optimality_tol;
    for (Eigen::Index j = 0; j < active_cols; ++j) {
      if (tab.reduced(j) < best) {
        q = j;
        if (bland) break;
        best = tab.reduced(j);
      }
    }
    if (q < 0) return Outcome::Done;
    Eigen::Index r = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = tab.t(i, q);
      if (a <= opt.pivot_tol) continue;
      const double cand = std::max(tab.rhs(i), 0.0) / a;
      if (r < 0 || cand < ratio - 1e-12) {
        r = i;
        ratio = cand;
      } else if (cand <= ratio + 1e-12) {
        const bool better = bland ? tab.basis[static_cast<std::size_t>(i)] <
                                        tab.basis[static_cast<std::size_t>(r)]
                                  : a > tab.t(r, q);
        if (better) {
          r = i;
          ratio = std::min(ratio, cand);
        }
      }
    }
    if (r < 0) return Outcome::Unbounded;
    degenerate_run = ratio <= opt.feasibility_tol ? degenerate_run + 1 : 0;
    tab.pivot(r, q);
  }
}

// Dual simplex: requires reduced costs >= 0 over [0, active_cols).
inline Outcome dual_simplex(Tableau& tab, Eigen::Index active_cols, const Options& opt) {
  std::size_t degenerate_run = 0;
  const Eigen::Index m = tab.t.rows();
  for (;;) {
    if (tab.iterations >= opt.iteration_limit) return Outcome::Limit;
    const bool bland = degenerate_run >= opt.degenerate_run_before_bland;
    Eigen::Index r = -1;
    double worst = -opt.feasibility_tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.rhs(i) >= -opt.feasibility_tol) continue;
      if (bland) {
        if (r < 0 || tab.basis[static_cast<std::size_t>(i)] < tab.basis[static_cast<std::size_t>(r)]) r = i;
      } else if (tab.rhs(i) < worst) {
        worst = tab.rhs(i);
        r = i;
      }
    }
    if (r < 0) return Outcome::Done;
    Eigen::Index q = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < active_cols; ++j) {
      const double a = tab.t(r, j);
      if (a >= -opt.pivot_tol) continue;
      const double cand = std::max(tab.reduced(j), 0.0) / -a;
      if (q < 0 || cand < ratio - 1e-12) {
        q = j;
        ratio = cand;
      } else if (cand <= ratio + 1e-12 && !bland && -a > -tab.t(r, q)) {
        q = j;
        ratio = std::min(ratio, cand);
      }
    }
    if (q < 0) return Outcome::Infeasible;
    degenerate_run = ratio <= opt.optimality_tol ? degenerate_run + 1 : 0;
    tab.pivot(r, q);
  }
}

struct Certificate {
  Eigen::VectorXd u;      // standard-form primal
  Eigen::VectorXd y;      // standard-form duals
  double primal_violation = 0.0;
  double dual_violation = 0.0;
  double gap = 0.0;
  bool ok = false;
};

inline Certificate certify(const StandardForm& sf, const std::vector<Eigen::Index>& basis,
                           const std::vector<Eigen::Index>& rows, const Options& opt) {
  Certificate cert;
  const Eigen::Index cols = sf.a.cols();
  const auto mb = static_cast<Eigen::Index>(rows.size());
  cert.u = Eigen::VectorXd::Zero(cols);
  cert.y = Eigen::VectorXd::Zero(sf.a.rows());
  if (mb > 0) {
    Eigen::MatrixXd bmat(mb, mb);
    Eigen::VectorXd bvec(mb);
    Eigen::VectorXd cb(mb);
    for (Eigen::Index i = 0; i < mb; ++i) {
      bvec(i) = sf.b(rows[static_cast<std::size_t>(i)]);
      for (Eigen::Index k = 0; k < mb; ++k) {
        bmat(i, k) = sf.a(rows[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(k)]);
      }
    }
    for (Eigen::Index k = 0; k < mb; ++k) cb(k) = sf.c(basis[static_cast<std::size_t>(k)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);
    Eigen::VectorXd xb = lu.solve(bvec);
    xb += lu.solve(bvec - bmat * xb);
    Eigen::PartialPivLU<Eigen::MatrixXd> lut(bmat.transpose());
    Eigen::VectorXd yb = lut.solve(cb);
    yb += lut.solve(cb - bmat.transpose() * yb);
    for (Eigen::Index k = 0; k < mb; ++k) {
      cert.u(basis[static_cast<std::size_t>(k)]) = std::max(xb(k), 0.0);
      cert.primal_violation = std::max(cert.primal_violation, -xb(k));
    }
    for (Eigen::Index i = 0; i < mb; ++i) cert.y(rows[static_cast<std::size_t>(i)]) = yb(i);
  }
  const Eigen::VectorXd residual = sf.a * cert.u - sf.b;
  const double bscale = 1.0 + (sf.b.size() > 0 ? sf.b.cwiseAbs().maxCoeff() : 0.0);
  cert.primal_violation =
      std::max(cert.primal_violation, residual.size() > 0 ? residual.cwiseAbs().maxCoeff() : 0.0) /
      bscale;
  const Eigen::VectorXd red = sf.c - sf.a.transpose() * cert.y;
  const double cscale = 1.0 + (sf.c.size() > 0 ? sf.c.cwiseAbs().maxCoeff() : 0.0);
  cert.dual_violation = red.size() > 0 ? std::max(0.0, -red.minCoeff()) / cscale : 0.0;
  const double primal_obj = sf.c.dot(cert.u);
  const double dual_obj = sf.b.dot(cert.y);
  cert.gap = std::fabs(primal_obj - dual_obj) / (1.0 + std::fabs(primal_obj));
  cert.ok = cert.primal_violation <= 1e-8 && cert.dual_violation <= 1e-6 && cert.gap <= 1e-6;
  (void)opt;
  return cert;
}

// Rebuild B^{-1}A and B^{-1}b from the original data for the current basis.
inline void refresh(Tableau& tab, const StandardForm& sf, const std::vector<Eigen::Index>& rows) {
  const auto mb = static_cast<Eigen::Index>(rows.size());
  if (mb == 0) return;
  Eigen::MatrixXd arows(mb, sf.a.cols());
  Eigen::VectorXd brows(mb);
  for (Eigen::Index i = 0; i < mb; ++i) {
    arows.row(i) = sf.a.row(rows[static_cast<std::size_t>(i)]);
    brows(i) = sf.b(rows[static_cast<std::size_t>(i)]);
  }
  Eigen::MatrixXd bmat(mb, mb);
  for (Eigen::Index k = 0; k < mb; ++k) bmat.col(k) = arows.col(tab.basis[static_cast<std::size_t>(k)]);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);
  tab.t.leftCols(sf.a.cols()) = lu.solve(arows);
  tab.rhs = lu.solve(brows);
  tab.recompute_reduced();
}

}  // namespace detail

inline Solution solve(const Problem& prob, const Options& opt = {}) {
  prob.validate();
  using namespace detail;
  const StandardForm sf = standardize(prob);
  const Eigen::Index m = sf.a.rows();
  const Eigen::Index cols = sf.a.cols();

  Solution sol;
  Tableau tab;
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(m));  // live original rows
  for (Eigen::Index i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;

  const bool has_equality = std::any_of(sf.is_equality.begin(), sf.is_equality.end(),
                                        [](bool e) { return e; });
  const bool dual_ready = !has_equality && (cols == 0 || sf.c.minCoeff() >= 0.0);

  auto finish = [&](Outcome outcome) -> bool {
    if (outcome == Outcome::Limit) {
      sol.status = Status::IterationLimit;
      return true;
    }
    if (outcome == Outcome::Unbounded) {
      sol.status = Status::Unbounded;
      return true;
    }
    if (outcome == Outcome::Infeasible) {
      sol.status = Status::Infeasible;
      return true;
    }
    return false;
  };

  if (dual_ready) {
    tab.t = sf.a;
    tab.rhs = sf.b;
    tab.cost = sf.c;
    tab.basis.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) tab.basis[static_cast<std::size_t>(i)] = sf.structural + i;
    tab.reduced = sf.c;
    if (finish(dual_simplex(tab, cols, opt))) {
      sol.iterations = tab.iterations;
      return sol;
    }
  } else {
    // Phase I: flip rows to nonnegative rhs, add artificials where the slack
    // cannot start basic.
    Eigen::MatrixXd a = sf.a;
    Eigen::VectorXd b = sf.b;
    std::vector<Eigen::Index> needs_art;
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(m), -1);
    Eigen::Index slack = sf.structural;
    for (Eigen::Index i = 0; i < m; ++i) {
      const bool eq = sf.is_equality[static_cast<std::size_t>(i)];
      const Eigen::Index my_slack = eq ? -1 : slack++;
      if (b(i) < 0.0) {
        a.row(i) *= -1.0;
        b(i) = -b(i);
        needs_art.push_back(i);
      } else if (eq) {
        needs_art.push_back(i);
      } else {
        basis[static_cast<std::size_t>(i)] = my_slack;
      }
    }
    const auto arts = static_cast<Eigen::Index>(needs_art.size());
    tab.t = Eigen::MatrixXd::Zero(m, cols + arts);
    tab.t.leftCols(cols) = a;
    tab.rhs = b;
    tab.cost = Eigen::VectorXd::Zero(cols + arts);
    for (Eigen::Index k = 0; k < arts; ++k) {
      const Eigen::Index i = needs_art[static_cast<std::size_t>(k)];
      tab.t(i, cols + k) = 1.0;
      tab.cost(cols + k) = 1.0;
      basis[static_cast<std::size_t>(i)] = cols + k;
    }
    tab.basis = basis;
    tab.recompute_reduced();
    if (arts > 0) {
      const Outcome phase1 = primal_simplex(tab, cols + arts, opt);
      if (phase1 == Outcome::Limit) {
        sol.status = Status::IterationLimit;
        sol.iterations = tab.iterations;
        return sol;
      }
      double infeasibility = 0.0;
      for (std::size_t i = 0; i < tab.basis.size(); ++i) {
        if (tab.basis[i] >= cols) infeasibility += std::max(0.0, tab.rhs(static_cast<Eigen::Index>(i)));
      }
      if (infeasibility > 1e-8 * (1.0 + (b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0))) {
        sol.status = Status::Infeasible;
        sol.iterations = tab.iterations;
        return sol;
      }
      // Drive zero-level artificials out of the basis; drop redundant rows.
      for (Eigen::Index i = tab.t.rows() - 1; i >= 0; --i) {
        if (tab.basis[static_cast<std::size_t>(i)] < cols) continue;
        Eigen::Index q = -1;
        double best = 1e-9;
        for (Eigen::Index j = 0; j < cols; ++j) {
          if (std::fabs(tab.t(i, j)) > best) {
            best = std::fabs(tab.t(i, j));
            q = j;
          }
        }
        if (q >= 0) {
          tab.pivot(i, q);
        } else {
          const Eigen::Index last = tab.t.rows() - 1;
          if (i != last) {
            tab.t.row(i).swap(tab.t.row(last));
            std::swap(tab.rhs(i), tab.rhs(last));
            std::swap(tab.basis[static_cast<std::size_t>(i)], tab.basis[static_cast<std::size_t>(last)]);
            std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(last)]);
          }
          tab.t.conservativeResize(last, Eigen::NoChange);
          tab.rhs.conservativeResize(last);
          tab.basis.pop_back();
          rows.pop_back();
        }
      }
    }
    tab.t.conservativeResize(Eigen::NoChange, cols);
    tab.cost = sf.c;
    tab.recompute_reduced();
    if (finish(primal_simplex(tab, cols, opt))) {
      sol.iterations = tab.iterations;
      return sol;
    }
  }

  Certificate cert = certify(sf, tab.basis, rows, opt);
  for (int attempt = 0; attempt < 3 && !cert.ok; ++attempt) {
    refresh(tab, sf, rows);
    bool primal_ok = tab.rhs.size() == 0 || tab.rhs.minCoeff() >= -opt.feasibility_tol;
    Outcome outcome = Outcome::Done;
    if (primal_ok) {
      outcome = primal_simplex(tab, cols, opt);
    } else if (tab.reduced.minCoeff() >= -opt.optimality_tol) {
      outcome = dual_simplex(tab, cols, opt);
    } else {
      break;
    }
    if (finish(outcome)) {
      sol.iterations = tab.iterations;
      return sol;
    }
    cert = certify(sf, tab.basis, rows, opt);
  }

  sol.status = Status::Optimal;
  sol.iterations = tab.iterations;
  const Eigen::Index nv = prob.num_vars();
  sol.x = sf.shift;
  for (Eigen::Index k = 0; k < sf.structural; ++k) {
    sol.x(sf.orig_var[static_cast<std::size_t>(k)]) += sf.var_sign[static_cast<std::size_t>(k)] * cert.u(k);
  }
  sol.objective_value = prob.objective.dot(sol.x);
  sol.duals = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) sol.duals(i) = sf.row_sign[static_cast<std::size_t>(i)] * cert.y(i);
  double violation = 0.0;
  if (m > 0) {
    const Eigen::VectorXd ax = prob.constraints * sol.x;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double d = ax(i) - prob.bounds(i);
      switch (prob.senses[static_cast<std::size_t>(i)]) {
        case Sense::LessEqual: violation = std::max(violation, d); break;
        case Sense::GreaterEqual: violation = std::max(violation, -d); break;
        case Sense::Equal: violation = std::max(violation, std::fabs(d)); break;
      }
    }
  }
  for (Eigen::Index j = 0; j < nv; ++j) violation = std::max(violation, prob.lower_bound(j) - sol.x(j));
  sol.primal_residual = violation;
  sol.dual_residual = cert.dual_violation;
  sol.duality_gap = cert.gap;
  return sol;
}

inline Solution solve(const Problem& prob, std::size_t iteration_limit) {
  Options opt;
  opt.iteration_limit = iteration_limit;
  return solve(prob, opt);
}

/// Plain-text dump: header "lp <rows> <vars>", an "obj" row, a "lower" row,
/// then one "row <sense> <rhs> <coefficients...>" line per constraint.
inline void write_text(std::ostream& os, const Problem& prob) {
  os.precision(17);
  os << "lp " << prob.num_rows() << ' ' << prob.num_vars() << '\n' << "obj";
  for (Eigen::Index j = 0; j < prob.num_vars(); ++j) os << ' ' << prob.objective(j);
  os << "\nlower";
  for (Eigen::Index j = 0; j < prob.num_vars(); ++j) {
    const double l = prob.lower_bound(j);
    if (std::isfinite(l)) {
      os << ' ' << l;
    } else {
      os << " -inf";
    }
  }
  os << '\n';
  for (Eigen::Index i = 0; i < prob.num_rows(); ++i) {
    const Sense s = prob.senses[static_cast<std::size_t>(i)];
    os << "row " << (s == Sense::LessEqual ? "<=" : s == Sense::Equal ? "=" : ">=") << ' '
       << prob.bounds(i);
    for (Eigen::Index j = 0; j < prob.num_vars(); ++j) os << ' ' << prob.constraints(i, j);
    os << '\n';
  }
}

inline Problem read_text(std::istream& is) {
  auto number = [](const std::string& tok) {
    if (tok == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(tok);
  };
  std::string tag;
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  if (!(is >> tag >> m >> n) || tag != "lp" || m < 0 || n < 0) {
    throw std::invalid_argument("lp::read_text: bad header");
  }
  Problem prob;
  prob.objective.resize(n);
  prob.lower.resize(n);
  prob.constraints.resize(m, n);
  prob.bounds.resize(m);
  std::string tok;
  if (!(is >> tag) || tag != "obj") throw std::invalid_argument("lp::read_text: missing obj row");
  for (Eigen::Index j = 0; j < n; ++j) {
    is >> tok;
    prob.objective(j) = number(tok);
  }
  if (!(is >> tag) || tag != "lower") throw std::invalid_argument("lp::read_text: missing lower row");
  for (Eigen::Index j = 0; j < n; ++j) {
    is >> tok;
    prob.lower(j) = number(tok);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    std::string sense;
    if (!(is >> tag >> sense >> tok) || tag != "row") throw std::invalid_argument("lp::read_text: bad row");
    prob.senses.push_back(sense == "<=" ? Sense::LessEqual : sense == "=" ? Sense::Equal : Sense::GreaterEqual);
    prob.bounds(i) = number(tok);
    for (Eigen::Index j = 0; j < n; ++j) {
      is >> tok;
      prob.constraints(i, j) = number(tok);
    }
  }
  if (!is) throw std::invalid_argument("lp::read_text: truncated input");
  return prob;
}

}  // namespace maxinfer::lp
