#pragma once

// Adaptive specification test of a linear mean model E[y_i] = v_i' beta.
//
// Test functions z_ij are made orthogonal to the regressors and scaled to
// E_n[z_ij^2] = 1. The statistic is the studentized max
//     T = max_j |sum_i z_ij eps_i / sqrt(n)| / sqrt(E_n[z_ij^2 eps_i^2])
// over OLS residuals eps, and its critical value is the multiplier bootstrap
// quantile of the same expression with eps_i replaced by eps_i e_i.

#include "maxinfer/linalg.hpp"
#include "maxinfer/max_stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxinfer::spectest {

struct SpecTestInput {
  DataMatrix v;
  Eigen::VectorXd y;
  DataMatrix p_raw;

  void validate() const {
    const Eigen::Index n = v.rows();
    if (y.size() != n || p_raw.rows() != n) {
      throw DimensionError("SpecTestInput: v, y and test functions disagree on n");
    }
    if (!y.allFinite()) throw std::domain_error("SpecTestInput: non-finite response");
    if (v.cols() > n) throw DimensionError("SpecTestInput: more regressors than observations");
    const Eigen::MatrixXd gram = v.values().transpose() * v.values() / static_cast<double>(n);
    const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().minCoeff();
    if (!(smallest > 1e-10)) {
      throw std::domain_error("SpecTestInput: E_n[v v'] is singular (min eigenvalue " +
                              std::to_string(smallest) + ")");
    }
  }
};

struct TestFunctions {
  Eigen::MatrixXd z;                 // n x kept.size()
  std::vector<Eigen::Index> kept;     // raw column of each output column
  std::vector<Eigen::Index> dropped;  // raw columns lying in span(V)
};

inline constexpr double kDropTolerance = 1e-10;

/// Residualizes each raw column against span(V) and rescales it to unit
/// empirical second moment.
inline TestFunctions build_test_functions(const SpecTestInput& input) {
  input.validate();
  const Eigen::MatrixXd& v = input.v.values();
  const Eigen::MatrixXd& raw = input.p_raw.values();
  const Eigen::LDLT<Eigen::MatrixXd> gram(v.transpose() * v);
  auto project_out = [&](const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
    return m - v * gram.solve(v.transpose() * m);
  };
  // A second pass removes what rounding left behind in the first.
  const Eigen::MatrixXd resid = project_out(project_out(raw));

  TestFunctions out;
  const double n = static_cast<double>(v.rows());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const double before = raw.col(j).norm();
    const double after = resid.col(j).norm();
    if (!(after > kDropTolerance * before)) {
      out.dropped.push_back(j);
    } else {
      keep.push_back(j);
    }
  }
  if (keep.empty()) throw std::domain_error("build_test_functions: every test function lies in span(V)");
  out.z.resize(v.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto col = resid.col(keep[k]);
    out.z.col(static_cast<Eigen::Index>(k)) = col / std::sqrt(col.squaredNorm() / n);
  }
  out.kept = std::move(keep);
  return out;
}

// Built-in test-function families. Each covariate with a nonzero range is
// mapped affinely onto [-1, 1]; constant columns (an intercept) are skipped.

namespace detail {

inline std::vector<Eigen::VectorXd> rescaled_covariates(const Eigen::MatrixXd& v) {
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double lo = v.col(k).minCoeff();
    const double hi = v.col(k).maxCoeff();
    if (!(hi > lo)) continue;
    out.push_back(((v.col(k).array() - lo) * (2.0 / (hi - lo)) - 1.0).matrix());
  }
  if (out.empty()) throw std::domain_error("test function family: no non-constant covariate");
  return out;
}

/// Columns P_0..P_degree of the Legendre recurrence.
inline Eigen::MatrixXd legendre_table(const Eigen::VectorXd& u, int degree) {
  Eigen::MatrixXd t(u.size(), degree + 1);
  t.col(0).setOnes();
  if (degree >= 1) t.col(1) = u;
  for (int k = 1; k < degree; ++k) {
    t.col(k + 1) = ((2.0 * k + 1.0) * u.cwiseProduct(t.col(k)) - k * t.col(k - 1)) / (k + 1.0);
  }
  return t;
}

/// Columns T_0..T_degree of the Chebyshev recurrence.
inline Eigen::MatrixXd chebyshev_table(const Eigen::VectorXd& u, int degree) {
  Eigen::MatrixXd t(u.size(), degree + 1);
  t.col(0).setOnes();
  if (degree >= 1) t.col(1) = u;
  for (int k = 1; k < degree; ++k) t.col(k + 1) = 2.0 * u.cwiseProduct(t.col(k)) - t.col(k - 1);
  return t;
}

/// Univariate terms of each covariate and pairwise products, in order of
/// total degree, truncated to `size` columns.
template <typename Table>
Eigen::MatrixXd polynomial_family(const Eigen::MatrixXd& v, Eigen::Index size, Table&& table) {
  if (size < 1) throw std::invalid_argument("polynomial family: size must be >= 1");
  const auto u = rescaled_covariates(v);
  const int max_degree = static_cast<int>(size) + 1;
  std::vector<Eigen::MatrixXd> tables;
  for (const auto& c : u) tables.push_back(table(c, max_degree));
  Eigen::MatrixXd out(v.rows(), size);
  Eigen::Index filled = 0;
  const auto d = static_cast<int>(u.size());
  for (int degree = 1; filled < size; ++degree) {
    for (int c = 0; c < d && filled < size; ++c) out.col(filled++) = tables[c].col(degree);
    for (int a = 1; a < degree && filled < size; ++a) {
      for (int c = 0; c < d && filled < size; ++c) {
        for (int e = c + 1; e < d && filled < size; ++e) {
          out.col(filled++) = tables[c].col(a).cwiseProduct(tables[e].col(degree - a));
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Legendre polynomials of each covariate plus pairwise products.
inline Eigen::MatrixXd legendre_family(const Eigen::MatrixXd& v, Eigen::Index size) {
  return detail::polynomial_family(v, size, detail::legendre_table);
}

/// Chebyshev polynomials of each covariate plus pairwise products. Every term
/// is bounded by 1 on the whole range, so no single observation dominates a
/// normalized column.
inline Eigen::MatrixXd chebyshev_family(const Eigen::MatrixXd& v, Eigen::Index size) {
  return detail::polynomial_family(v, size, detail::chebyshev_table);
}

/// Cubic B-spline bumps on uniform knots over [-1, 1]; `size` columns split
/// as evenly as possible across covariates (at least 4 each).
inline Eigen::MatrixXd bspline_family(const Eigen::MatrixXd& v, Eigen::Index size) {
  const auto u = detail::rescaled_covariates(v);
  const auto d = static_cast<Eigen::Index>(u.size());
  if (size < 4 * d) throw std::invalid_argument("bspline_family: need at least 4 columns per covariate");
  constexpr int order = 4;
  Eigen::MatrixXd out(v.rows(), size);
  Eigen::Index filled = 0;
  for (Eigen::Index c = 0; c < d; ++c) {
    const Eigen::Index basis = size / d + (c < size % d ? 1 : 0);
    const Eigen::Index interior = basis - order;
    // Clamped knot vector with `interior` equally spaced interior knots.
    std::vector<double> knots;
    for (int k = 0; k < order; ++k) knots.push_back(-1.0);
    for (Eigen::Index k = 1; k <= interior; ++k) {
      knots.push_back(-1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(interior + 1));
    }
    for (int k = 0; k < order; ++k) knots.push_back(1.0);
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      // Right endpoint belongs to the last nonempty span.
      const double x = std::min(u[static_cast<std::size_t>(c)](i), std::nextafter(1.0, 0.0));
      std::vector<double> b(knots.size() - 1, 0.0);
      for (std::size_t k = 0; k + 1 < knots.size(); ++k) b[k] = (knots[k] <= x && x < knots[k + 1]) ? 1.0 : 0.0;
      for (int ord = 2; ord <= order; ++ord) {
        for (std::size_t k = 0; k + ord < knots.size(); ++k) {
          double val = 0.0;
          const double l = knots[k + ord - 1] - knots[k];
          const double r = knots[k + ord] - knots[k + 1];
          if (l > 0) val += (x - knots[k]) / l * b[k];
          if (r > 0) val += (knots[k + ord] - x) / r * b[k + 1];
          b[k] = val;
        }
      }
      for (Eigen::Index k = 0; k < basis; ++k) out(i, filled + k) = b[static_cast<std::size_t>(k)];
    }
    filled += basis;
  }
  return out;
}

enum class Family { Chebyshev, Legendre, BSpline };

inline Eigen::MatrixXd make_family(Family family, const Eigen::MatrixXd& v, Eigen::Index size) {
  switch (family) {
    case Family::Chebyshev: return chebyshev_family(v, size);
    case Family::Legendre: return legendre_family(v, size);
    case Family::BSpline: break;
  }
  return bspline_family(v, size);
}

struct SpecTestResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  bool reject = false;
  std::vector<double> per_function_scores;  // NaN where the studentizer vanished
  std::vector<Eigen::Index> kept;            // raw column per score
  std::vector<Eigen::Index> dropped;         // raw columns in span(V)
  std::vector<Eigen::Index> degenerate;      // raw columns with zero studentizer
};

/// Relative size below which E_n[z^2 eps^2]^{1/2} counts as zero.
inline constexpr double kDegenerateTolerance = 1e-10;

inline SpecTestResult run_spec_test(const SpecTestInput& input, double alpha, const BootstrapConfig& config) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
  config.validate();
  const TestFunctions tf = build_test_functions(input);
  const Eigen::Index n = tf.z.rows();
  const double nd = static_cast<double>(n);
  const OlsFit fit = ols_fit(input.v.values(), input.y);
  const Eigen::VectorXd& eps = fit.residuals;
  const double y_scale = std::sqrt(input.y.squaredNorm() / nd);

  SpecTestResult out;
  out.kept = tf.kept;
  out.dropped = tf.dropped;
  out.per_function_scores.assign(tf.kept.size(), std::numeric_limits<double>::quiet_NaN());
  const Eigen::MatrixXd scores = tf.z.array().colwise() * eps.array();
  std::vector<Eigen::Index> used;
  std::vector<double> scale;
  for (Eigen::Index j = 0; j < scores.cols(); ++j) {
    const double s = std::sqrt(scores.col(j).squaredNorm() / nd);
    if (!(s > kDegenerateTolerance * y_scale)) {
      out.degenerate.push_back(tf.kept[static_cast<std::size_t>(j)]);
      continue;
    }
    used.push_back(j);
    scale.push_back(s);
    out.per_function_scores[static_cast<std::size_t>(j)] = std::fabs(scores.col(j).sum()) / std::sqrt(nd) / s;
  }
  if (used.empty()) return out;

  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(used.size()));
  for (std::size_t k = 0; k < used.size(); ++k) {
    x.col(static_cast<Eigen::Index>(k)) = scores.col(used[k]);
    out.statistic = std::max(out.statistic, out.per_function_scores[static_cast<std::size_t>(used[k])]);
  }
  BootstrapConfig boot = config;
  boot.variant = MaxStatVariant::studentized(scale);
  out.critical_value = make_quantile_estimate(multiplier_replicates(x, boot), 1.0 - alpha).value;
  out.reject = out.statistic > out.critical_value;
  return out;
}

}  // namespace maxinfer::spectest
