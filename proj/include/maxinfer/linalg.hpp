#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxinfer {

/// Raised when input dimensions or shapes disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotPsdError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// n x p block of observations; row i is x_i, column j is coordinate j.
/// Always nonempty with finite entries.
class DataMatrix {
 public:
  explicit DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
      throw DimensionError("DataMatrix: need at least one row and one column");
    }
    if (!values_.allFinite()) throw std::domain_error("DataMatrix: entries must be finite");
  }

  [[nodiscard]] Eigen::Index rows() const noexcept { return values_.rows(); }
  [[nodiscard]] Eigen::Index cols() const noexcept { return values_.cols(); }
  [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
  [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

 private:
  Eigen::MatrixXd values_;
};

/// Column-pivoted Cholesky factor of a PSD matrix. `lower` is p x rank and is
/// stored in the original coordinate order, so lower * lower^T approximates
/// the factored matrix directly.
struct PsdFactor {
  Eigen::MatrixXd lower;
  std::vector<Eigen::Index> pivots;
  Eigen::Index rank = 0;

  [[nodiscard]] Eigen::Index dimension() const noexcept { return lower.rows(); }
  [[nodiscard]] Eigen::MatrixXd reconstruct() const { return lower * lower.transpose(); }
};

inline PsdFactor psd_factor(const Eigen::MatrixXd& matrix) {
  const Eigen::Index p = matrix.rows();
  if (p == 0 || matrix.cols() != p) throw DimensionError("psd_factor: matrix must be square");
  if (!matrix.allFinite()) throw std::domain_error("psd_factor: entries must be finite");
  const double max_diag = matrix.diagonal().cwiseAbs().maxCoeff();
  const double scale = std::max(max_diag, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale)) {
    throw std::domain_error("psd_factor: matrix is not symmetric");
  }
  const double tol = 1e-8 * max_diag;

  Eigen::MatrixXd work = 0.5 * (matrix + matrix.transpose());
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) perm[static_cast<std::size_t>(i)] = i;
  // Factor columns in permuted order; L(k, :) refers to permuted row k.
  Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd diag = work.diagonal();
  Eigen::Index rank = 0;

  for (Eigen::Index k = 0; k < p; ++k) {
    Eigen::Index best = k;
    for (Eigen::Index i = k + 1; i < p; ++i) {
      if (diag(i) > diag(best)) best = i;
    }
    for (Eigen::Index i = k; i < p; ++i) {
      if (diag(i) < -tol) {
        throw NotPsdError("psd_factor: matrix has a negative pivot " + std::to_string(diag(i)));
      }
    }
    if (diag(best) <= tol) break;
    if (best != k) {
      std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(best)]);
      std::swap(diag(k), diag(best));
      factor.row(k).swap(factor.row(best));
    }
    const double pivot = std::sqrt(diag(k));
    factor(k, k) = pivot;
    const Eigen::Index pk = perm[static_cast<std::size_t>(k)];
    for (Eigen::Index i = k + 1; i < p; ++i) {
      const Eigen::Index pi = perm[static_cast<std::size_t>(i)];
      double v = work(pi, pk);
      v -= factor.row(i).head(k).dot(factor.row(k).head(k));
      factor(i, k) = v / pivot;
      diag(i) -= factor(i, k) * factor(i, k);
    }
    ++rank;
  }

  PsdFactor out;
  out.rank = rank;
  out.pivots = perm;
  out.lower = Eigen::MatrixXd::Zero(p, rank);
  for (Eigen::Index k = 0; k < p; ++k) {
    out.lower.row(perm[static_cast<std::size_t>(k)]) = factor.row(k).head(rank);
  }
  return out;
}

/// Rescales every column to unit empirical second moment E_n[z_j^2] = 1.
/// Zero columns are rejected.
inline Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd out = z;
  const double n = static_cast<double>(z.rows());
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double second_moment = z.col(j).squaredNorm() / n;
    if (!(second_moment > 0.0)) {
      throw std::domain_error("normalize_columns: column " + std::to_string(j) + " is zero");
    }
    out.col(j) /= std::sqrt(second_moment);
  }
  return out;
}

struct OlsFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;
  bool full_rank = true;
};

/// Least-squares fit of y on the columns of x via column-pivoted QR.
/// `full_rank` is false when x has numerically dependent columns; the
/// coefficients are then a basic solution.
inline OlsFit ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw DimensionError("ols_fit: row count mismatch");
  OlsFit fit;
  if (x.cols() == 0) {
    fit.coefficients = Eigen::VectorXd(0);
    fit.residuals = y;
    return fit;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  fit.full_rank = qr.rank() == x.cols();
  fit.coefficients = qr.solve(y);
  fit.residuals = y - x * fit.coefficients;
  return fit;
}

}  // namespace maxinfer
