#pragma once

// Brute-force reference computations shared by the unit and acceptance
// suites. Nothing here calls into the library code paths being checked.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

/// min ||b||_1 s.t. |corr - gram b|_inf <= slack, by enumerating every vertex
/// of the lifted polyhedron {(b, t) : -t <= b <= t, |corr - gram b| <= slack}.
/// Exponential in p; meant for p <= 3. Returns +inf when infeasible.
inline double dantzig_l1_by_vertices(const Eigen::MatrixXd& gram, const Eigen::VectorXd& corr,
                                     double slack, Eigen::VectorXd* argmin = nullptr) {
  const int p = static_cast<int>(gram.rows());
  const int vars = 2 * p;
  // Rows of G (b, t) <= h.
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4 * p, vars);
  Eigen::VectorXd h(4 * p);
  for (int j = 0; j < p; ++j) {
    g(j, j) = 1.0;
    g(j, p + j) = -1.0;  // b_j - t_j <= 0
    h(j) = 0.0;
    g(p + j, j) = -1.0;
    g(p + j, p + j) = -1.0;  // -b_j - t_j <= 0
    h(p + j) = 0.0;
    g.block(2 * p + j, 0, 1, p) = gram.row(j);  // gram b <= corr + slack
    h(2 * p + j) = corr(j) + slack;
    g.block(3 * p + j, 0, 1, p) = -gram.row(j);  // -gram b <= slack - corr
    h(3 * p + j) = slack - corr(j);
  }
  const int rows = 4 * p;
  std::vector<int> pick(vars);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == vars) {
      Eigen::MatrixXd sys(vars, vars);
      Eigen::VectorXd rhs(vars);
      for (int k = 0; k < vars; ++k) {
        sys.row(k) = g.row(pick[k]);
        rhs(k) = h(pick[k]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
      if (lu.rank() < vars) return;
      const Eigen::VectorXd x = lu.solve(rhs);
      if (((g * x - h).array() > 1e-9).any()) return;
      const double obj = x.tail(p).sum();
      if (obj < best) {
        best = obj;
        if (argmin) *argmin = x.head(p);
      }
      return;
    }
    for (int i = start; i <= rows - (vars - depth); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

/// Grid search for min ||b||_1 over feasible b in [-radius, radius]^p.
inline double dantzig_l1_by_grid(const Eigen::MatrixXd& gram, const Eigen::VectorXd& corr,
                                 double slack, double radius, int steps) {
  const int p = static_cast<int>(gram.rows());
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd b(p);
  std::vector<int> idx(p, 0);
  for (;;) {
    for (int j = 0; j < p; ++j) b(j) = -radius + 2.0 * radius * idx[j] / steps;
    if ((corr - gram * b).cwiseAbs().maxCoeff() <= slack) best = std::min(best, b.cwiseAbs().sum());
    int k = 0;
    while (k < p && ++idx[k] > steps) idx[k++] = 0;
    if (k == p) break;
  }
  return best;
}

inline double soft_threshold(double v, double t) {
  return v > t ? v - t : (v < -t ? v + t : 0.0);
}

/// Grid minimum of ||gram d||_inf / ||d||_I over the cube surface, restricted
/// to the tangent cone of {d : ||beta + d||_1 <= ||beta||_1}. component < 0
/// selects the prediction norm.
inline double kappa_by_grid(const Eigen::MatrixXd& gram, const Eigen::VectorXd& beta, int component,
                            int steps) {
  const int p = static_cast<int>(gram.rows());
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd d(p);
  std::vector<int> idx(p, 0);
  for (;;) {
    double top = 0.0;
    for (int j = 0; j < p; ++j) {
      d(j) = -1.0 + 2.0 * idx[j] / steps;
      top = std::max(top, std::fabs(d(j)));
    }
    if (top == 1.0) {
      double deriv = 0.0;
      for (int j = 0; j < p; ++j) {
        deriv += beta(j) != 0.0 ? (beta(j) > 0 ? d(j) : -d(j)) : std::fabs(d(j));
      }
      if (deriv <= 1e-12) {
        const Eigen::VectorXd gd = gram * d;
        const double denom = component < 0 ? std::sqrt(std::max(0.0, d.dot(gd))) : std::fabs(d(component));
        if (denom > 1e-12) best = std::min(best, gd.cwiseAbs().maxCoeff() / denom);
      }
    }
    int k = 0;
    while (k < p && ++idx[k] > steps) idx[k++] = 0;
    if (k == p) break;
  }
  return best;
}

}  // namespace oracle
