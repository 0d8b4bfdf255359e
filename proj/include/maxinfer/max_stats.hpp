#pragma once

// Maximum-of-sums statistics and the bootstrap engines built on them.
//
// For an n x p data block the basic statistic is
//     T0 = max_j n^{-1/2} sum_i x_ij
// and its multiplier analog replaces x_ij by x_ij * e_i with e_i ~ N(0, 1).
// All replicate engines evaluate blocks of kReplicateBlock replicates at a
// time as one dense product (weights x data). Replicate r always draws its
// weights from stream r of the configured seed and the block shape does not
// depend on the thread count, so results are bit-identical for any degree of
// parallelism.

#include "maxinfer/linalg.hpp"
#include "maxinfer/parallel.hpp"
#include "maxinfer/quantile.hpp"
#include "maxinfer/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxinfer {

enum class MaxStatKind { SignedMax, AbsoluteMax, Studentized };

inline const char* to_string(MaxStatKind kind) noexcept {
  switch (kind) {
    case MaxStatKind::SignedMax: return "signed";
    case MaxStatKind::AbsoluteMax: return "absolute";
    case MaxStatKind::Studentized: return "studentized";
  }
  return "unknown";
}

/// Which maximum to take over the coordinate sums. Studentized divides the
/// absolute sum of coordinate j by studentizer[j]; the scale is always
/// supplied by the caller.
struct MaxStatVariant {
  MaxStatKind kind = MaxStatKind::SignedMax;
  std::vector<double> studentizer;

  static MaxStatVariant signed_max() { return {MaxStatKind::SignedMax, {}}; }
  static MaxStatVariant absolute_max() { return {MaxStatKind::AbsoluteMax, {}}; }
  static MaxStatVariant studentized(std::vector<double> scale) {
    MaxStatVariant v{MaxStatKind::Studentized, std::move(scale)};
    for (double s : v.studentizer) {
      if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::domain_error("MaxStatVariant: studentizer entries must be positive");
      }
    }
    return v;
  }

  void validate(Eigen::Index p) const {
    if (kind != MaxStatKind::Studentized) return;
    if (static_cast<Eigen::Index>(studentizer.size()) != p) {
      throw DimensionError("MaxStatVariant: studentizer length " +
                           std::to_string(studentizer.size()) + " != p " + std::to_string(p));
    }
    for (double s : studentizer) {
      if (!(s > 0.0)) throw std::domain_error("MaxStatVariant: studentizer entries must be positive");
    }
  }

  /// Max over the already normalized coordinate sums.
  template <typename Derived>
  [[nodiscard]] double reduce(const Eigen::DenseBase<Derived>& sums) const {
    double best = -std::numeric_limits<double>::infinity();
    const Eigen::Index p = sums.size();
    switch (kind) {
      case MaxStatKind::SignedMax:
        for (Eigen::Index j = 0; j < p; ++j) best = std::max(best, static_cast<double>(sums(j)));
        break;
      case MaxStatKind::AbsoluteMax:
        for (Eigen::Index j = 0; j < p; ++j) best = std::max(best, std::fabs(sums(j)));
        break;
      case MaxStatKind::Studentized:
        for (Eigen::Index j = 0; j < p; ++j) {
          best = std::max(best, std::fabs(sums(j)) / studentizer[static_cast<std::size_t>(j)]);
        }
        break;
    }
    return best;
  }
};

struct BootstrapConfig {
  std::size_t replications = 1000;
  std::uint64_t seed = 0;
  MaxStatVariant variant;
  unsigned threads = 1;

  void validate() const {
    if (replications < 1) throw std::invalid_argument("BootstrapConfig: replications must be >= 1");
  }
};

struct QuantileEstimate {
  double level = 0.0;
  double value = 0.0;
  std::size_t replications = 0;
  std::vector<double> replicate_values;  // ascending

  [[nodiscard]] double standard_error() const {
    return quantile_standard_error(replicate_values, level);
  }
};

inline QuantileEstimate make_quantile_estimate(std::vector<double> replicates, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("quantile level must lie in (0, 1)");
  std::sort(replicates.begin(), replicates.end());
  QuantileEstimate q;
  q.level = level;
  q.replications = replicates.size();
  q.value = sorted_quantile(replicates, level);
  q.replicate_values = std::move(replicates);
  return q;
}

inline constexpr std::size_t kReplicateBlock = 64;

/// Fills `weights` (block x n) for replicates [first, first + block) and
/// hands each row of weights * data / sqrt(n) to `sink(replicate, row)`.
template <typename WeightFill, typename Sink>
void weighted_sum_replicates(const Eigen::MatrixXd& data, std::size_t replications,
                             unsigned threads, WeightFill&& fill, Sink&& sink) {
  const Eigen::Index n = data.rows();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const std::size_t blocks = (replications + kReplicateBlock - 1) / kReplicateBlock;
  parallel_for(blocks, threads, [&](std::size_t block) {
    const std::size_t first = block * kReplicateBlock;
    const auto rows = static_cast<Eigen::Index>(std::min(kReplicateBlock, replications - first));
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> weights(rows, n);
    for (Eigen::Index r = 0; r < rows; ++r) {
      fill(first + static_cast<std::size_t>(r), std::span<double>(weights.row(r).data(), n));
    }
    const Eigen::MatrixXd sums = (weights * data) * inv_sqrt_n;
    for (Eigen::Index r = 0; r < rows; ++r) sink(first + static_cast<std::size_t>(r), sums.row(r));
  });
}

inline void fill_normal(std::uint64_t seed, std::size_t replicate, std::span<double> out) {
  SeededRng rng(seed, replicate);
  for (double& w : out) w = rng.normal();
}

inline void fill_resample_counts(std::uint64_t seed, std::size_t replicate, std::span<double> out) {
  SeededRng rng(seed, replicate);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) out[rng.uniform_index(out.size())] += 1.0;
}

/// T0 = max_j n^{-1/2} sum_i x_ij under the given variant.
inline double compute_max_stat(const DataMatrix& data, const MaxStatVariant& variant) {
  variant.validate(data.cols());
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(data.rows()));
  const Eigen::RowVectorXd sums = data.values().colwise().sum() * inv_sqrt_n;
  return variant.reduce(sums);
}

/// W0 = max_j n^{-1/2} sum_i x_ij e_i for one multiplier vector.
inline double compute_w0(const DataMatrix& data, std::span<const double> multipliers,
                         const MaxStatVariant& variant) {
  variant.validate(data.cols());
  if (static_cast<Eigen::Index>(multipliers.size()) != data.rows()) {
    throw DimensionError("compute_w0: multiplier length must equal n");
  }
  const Eigen::Map<const Eigen::RowVectorXd> e(multipliers.data(), data.rows());
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(data.rows()));
  const Eigen::RowVectorXd sums = (e * data.values()) * inv_sqrt_n;
  return variant.reduce(sums);
}

/// Replicates of W0 with fresh N(0, 1) multipliers; replicate r uses stream r.
inline std::vector<double> multiplier_replicates(const Eigen::MatrixXd& data,
                                                 const BootstrapConfig& config) {
  config.validate();
  config.variant.validate(data.cols());
  std::vector<double> out(config.replications);
  weighted_sum_replicates(
      data, config.replications, config.threads,
      [&](std::size_t r, std::span<double> w) { fill_normal(config.seed, r, w); },
      [&](std::size_t r, const auto& sums) { out[r] = config.variant.reduce(sums); });
  return out;
}

/// Multiplier bootstrap estimate c_W0(level): the conditional `level`-quantile
/// of W0 given the data.
inline QuantileEstimate multiplier_bootstrap_quantile(const DataMatrix& data, double level,
                                                      const BootstrapConfig& config) {
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("level must lie in (0, 1)");
  return make_quantile_estimate(multiplier_replicates(data.values(), config), level);
}

/// Column means computed as x_0j + mean(x_ij - x_0j), exact when all rows agree.
inline Eigen::RowVectorXd shifted_column_means(const Eigen::MatrixXd& x) {
  const Eigen::RowVectorXd anchor = x.row(0);
  const Eigen::RowVectorXd offset =
      (x.rowwise() - anchor).colwise().sum() / static_cast<double>(x.rows());
  return anchor + offset;
}

inline Eigen::MatrixXd center_columns(const Eigen::MatrixXd& x) {
  return x.rowwise() - shifted_column_means(x);
}

/// One Efron bootstrap draw T0* = max_j n^{-1/2} sum_i (x*_ij - E_n[x_ij]).
inline double empirical_bootstrap_stat(const DataMatrix& data, SeededRng& rng,
                                       const MaxStatVariant& variant) {
  variant.validate(data.cols());
  const Eigen::MatrixXd centered = center_columns(data.values());
  const Eigen::Index n = data.rows();
  Eigen::RowVectorXd sums = Eigen::RowVectorXd::Zero(data.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    sums += centered.row(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n))));
  }
  return variant.reduce(sums / std::sqrt(static_cast<double>(n)));
}

/// Replicates of T0*; replicate r resamples rows with stream r.
inline std::vector<double> empirical_bootstrap_replicates(const DataMatrix& data,
                                                          const BootstrapConfig& config) {
  config.validate();
  config.variant.validate(data.cols());
  const Eigen::MatrixXd centered = center_columns(data.values());
  std::vector<double> out(config.replications);
  weighted_sum_replicates(
      centered, config.replications, config.threads,
      [&](std::size_t r, std::span<double> w) { fill_resample_counts(config.seed, r, w); },
      [&](std::size_t r, const auto& sums) { out[r] = config.variant.reduce(sums); });
  return out;
}

inline QuantileEstimate empirical_bootstrap_quantile(const DataMatrix& data, double level,
                                                     const BootstrapConfig& config) {
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("level must lie in (0, 1)");
  return make_quantile_estimate(empirical_bootstrap_replicates(data, config), level);
}

/// Gaussian analog Z0 for a fixed design with known per-observation noise
/// scale: max_j n^{-1/2} sum_i z_ij * scale_i * e_i. Exact and O(n p) per
/// replicate; no covariance factorization.
inline QuantileEstimate simulate_z0_design(const Eigen::MatrixXd& design,
                                           const Eigen::VectorXd& noise_scale, double level,
                                           const BootstrapConfig& config) {
  if (noise_scale.size() != design.rows()) {
    throw DimensionError("simulate_z0_design: noise scale length must equal n");
  }
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("level must lie in (0, 1)");
  const Eigen::MatrixXd scaled = noise_scale.asDiagonal() * design;
  return make_quantile_estimate(multiplier_replicates(scaled, config), level);
}

inline QuantileEstimate simulate_z0_design(const Eigen::MatrixXd& design, double sigma,
                                           double level, const BootstrapConfig& config) {
  if (!(sigma >= 0.0)) throw std::domain_error("simulate_z0_design: sigma must be >= 0");
  return simulate_z0_design(design, Eigen::VectorXd::Constant(design.rows(), sigma), level,
                            config);
}

/// Gaussian analog Z0 = max_j Y_j with Y ~ N(0, covariance), sampled as
/// Y = L g through the pivoted Cholesky factor. Replicate r draws g from
/// stream r.
inline QuantileEstimate simulate_z0_covariance(const Eigen::MatrixXd& covariance, double level,
                                               const BootstrapConfig& config) {
  config.validate();
  config.variant.validate(covariance.rows());
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("level must lie in (0, 1)");
  const PsdFactor factor = psd_factor(covariance);
  const Eigen::Index p = covariance.rows();
  const Eigen::Index rank = factor.rank;
  std::vector<double> out(config.replications);
  const std::size_t blocks = (config.replications + kReplicateBlock - 1) / kReplicateBlock;
  parallel_for(blocks, config.threads, [&](std::size_t block) {
    const std::size_t first = block * kReplicateBlock;
    const auto cols =
        static_cast<Eigen::Index>(std::min(kReplicateBlock, config.replications - first));
    Eigen::MatrixXd draws(rank, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      fill_normal(config.seed, first + static_cast<std::size_t>(c),
                  std::span<double>(draws.col(c).data(), static_cast<std::size_t>(rank)));
    }
    const Eigen::MatrixXd y =
        rank > 0 ? Eigen::MatrixXd(factor.lower * draws) : Eigen::MatrixXd::Zero(p, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      out[first + static_cast<std::size_t>(c)] = config.variant.reduce(y.col(c));
    }
  });
  return make_quantile_estimate(std::move(out), level);
}

/// Delta = max_{j,k} |E_n[x_ij x_ik] - sigma_jk|.
inline double covariance_gap(const DataMatrix& data, const Eigen::MatrixXd& population) {
  if (population.rows() != data.cols() || population.cols() != data.cols()) {
    throw DimensionError("covariance_gap: population covariance must be p x p");
  }
  const Eigen::MatrixXd empirical =
      (data.values().transpose() * data.values()) / static_cast<double>(data.rows());
  return (empirical - population).cwiseAbs().maxCoeff();
}

/// F_beta(z) = beta^{-1} log sum_j exp(beta z_j), evaluated as
/// max z + beta^{-1} log sum_j exp(beta (z_j - max z)).
inline double smooth_max(std::span<const double> z, double beta) {
  if (z.empty()) throw std::invalid_argument("smooth_max: empty input");
  if (!(beta > 0.0)) throw std::domain_error("smooth_max: beta must be positive");
  const double top = *std::max_element(z.begin(), z.end());
  double acc = 0.0;
  for (double v : z) acc += std::exp(beta * (v - top));
  const double gap = std::log(acc) / beta;
  double f = top + gap;
  // rounding of top + gap may overshoot; keep f - top <= gap
  if (f - top > gap) f = std::nextafter(f, top);
  return f;
}

/// Exact two-sample Kolmogorov-Smirnov distance sup_t |F_a(t) - F_b(t)| with
/// right-continuous empirical CDFs, scanning the merged sorted samples.
inline double ks_distance(std::span<const double> samples_a, std::span<const double> samples_b) {
  if (samples_a.empty() || samples_b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> a(samples_a.begin(), samples_a.end());
  std::vector<double> b(samples_b.begin(), samples_b.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < a.size() || j < b.size()) {
    double t = 0.0;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
      t = a[i];
    } else {
      t = b[j];
    }
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

/// Levy concentration estimate sup_z #{|s - z| <= width} / N.
inline double anticoncentration_diagnostic(std::span<const double> samples, double width) {
  if (samples.empty()) throw std::invalid_argument("anticoncentration_diagnostic: empty sample");
  if (!(width > 0.0)) throw std::domain_error("anticoncentration_diagnostic: width must be positive");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  std::size_t best = 0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < s.size(); ++lo) {
    hi = std::max(hi, lo);
    while (hi + 1 < s.size() && s[hi + 1] - s[lo] <= 2.0 * width) ++hi;
    best = std::max(best, hi - lo + 1);
  }
  return static_cast<double>(best) / static_cast<double>(s.size());
}

}  // namespace maxinfer
