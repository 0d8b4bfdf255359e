#pragma once

// Stepdown multiple testing with multiplier bootstrap critical values.
//
// Hypotheses H_j : beta_j <= beta0_j (or equality when two-sided) are tested
// with t_j = sqrt(n) (beta_hat_j - beta0_j). Step l rejects every surviving j
// with t_j above the (1 - alpha)-quantile of max_{j in w(l)} of the bootstrap
// sums, and the procedure stops at the first step with no new rejections.

#include "maxinfer/linalg.hpp"
#include "maxinfer/max_stats.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace maxinfer::stepdown {

struct MhtProblem {
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd beta_null;
  DataMatrix influence;  // rows are per-observation influence estimates
  bool two_sided = false;

  void validate() const {
    const Eigen::Index p = influence.cols();
    if (beta_hat.size() != p || beta_null.size() != p) {
      throw DimensionError("MhtProblem: beta_hat, beta_null and influence disagree on p");
    }
    if (!beta_hat.allFinite() || !beta_null.allFinite()) {
      throw std::domain_error("MhtProblem: non-finite coefficient");
    }
  }

  [[nodiscard]] Eigen::VectorXd statistics() const {
    const double root_n = std::sqrt(static_cast<double>(influence.rows()));
    Eigen::VectorXd t = root_n * (beta_hat - beta_null);
    if (two_sided) t = t.cwiseAbs();
    return t;
  }

  /// Sample-means case: beta_hat is the column mean and the influence
  /// estimates are the demeaned observations.
  static MhtProblem from_sample_means(const DataMatrix& x, Eigen::VectorXd beta_null,
                                      bool two_sided = false) {
    const Eigen::RowVectorXd means = shifted_column_means(x.values());
    return MhtProblem{means.transpose(), std::move(beta_null),
                      DataMatrix(x.values().rowwise() - means), two_sided};
  }
};

struct StepdownResult {
  std::vector<bool> rejected;
  std::vector<std::optional<int>> rejection_step;
  std::vector<double> critical_values;
  int steps = 0;

  [[nodiscard]] std::size_t rejection_count() const {
    std::size_t k = 0;
    for (bool r : rejected) k += r ? 1 : 0;
    return k;
  }
};

/// Multiplier sums (1/sqrt n) sum_i xhat_ij e_i for every replicate, drawn once
/// and shared by all active sets.
class BootstrapSums {
 public:
  BootstrapSums(const DataMatrix& influence, const BootstrapConfig& config, bool absolute)
      : sums_(static_cast<Eigen::Index>(config.replications), influence.cols()), absolute_(absolute) {
    config.validate();
    weighted_sum_replicates(
        influence.values(), config.replications, config.threads,
        [&](std::size_t r, std::span<double> w) { fill_normal(config.seed, r, w); },
        [&](std::size_t r, const auto& row) { sums_.row(static_cast<Eigen::Index>(r)) = row; });
  }

  /// Conditional `level`-quantile of max_{j in active} of the sums.
  [[nodiscard]] double critical_value(const std::vector<Eigen::Index>& active, double level) const {
    if (active.empty()) throw std::invalid_argument("critical_value: empty active set");
    if (!(level > 0.0 && level < 1.0)) throw std::domain_error("level must lie in (0, 1)");
    std::vector<double> maxima(static_cast<std::size_t>(sums_.rows()));
    for (Eigen::Index r = 0; r < sums_.rows(); ++r) {
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j : active) {
        if (j < 0 || j >= sums_.cols()) throw DimensionError("critical_value: index out of range");
        const double v = absolute_ ? std::fabs(sums_(r, j)) : sums_(r, j);
        best = std::max(best, v);
      }
      maxima[static_cast<std::size_t>(r)] = best;
    }
    return empirical_quantile(maxima, level);
  }

  [[nodiscard]] const Eigen::MatrixXd& sums() const noexcept { return sums_; }

 private:
  Eigen::MatrixXd sums_;
  bool absolute_;
};

inline double stepdown_critical_value(const DataMatrix& influence,
                                      const std::vector<Eigen::Index>& active_set, double alpha,
                                      const BootstrapConfig& config, bool two_sided = false) {
  if (active_set.empty()) throw std::invalid_argument("stepdown_critical_value: empty active set");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
  return BootstrapSums(influence, config, two_sided).critical_value(active_set, 1.0 - alpha);
}

inline StepdownResult run_stepdown(const MhtProblem& problem, double alpha,
                                   const BootstrapConfig& config) {
  problem.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
  const BootstrapSums sums(problem.influence, config, problem.two_sided);
  const Eigen::VectorXd t = problem.statistics();
  const auto p = static_cast<std::size_t>(t.size());

  StepdownResult out;
  out.rejected.assign(p, false);
  out.rejection_step.assign(p, std::nullopt);
  std::vector<Eigen::Index> active(p);
  for (std::size_t j = 0; j < p; ++j) active[j] = static_cast<Eigen::Index>(j);

  while (!active.empty()) {
    ++out.steps;
    const double c = sums.critical_value(active, 1.0 - alpha);
    out.critical_values.push_back(c);
    std::vector<Eigen::Index> survivors;
    for (Eigen::Index j : active) {
      if (t(j) > c) {
        out.rejected[static_cast<std::size_t>(j)] = true;
        out.rejection_step[static_cast<std::size_t>(j)] = out.steps;
      } else {
        survivors.push_back(j);
      }
    }
    if (survivors.size() == active.size()) break;
    active = std::move(survivors);
  }
  return out;
}

/// Rewrites each two-sided hypothesis as the pair (+j, -j) of one-sided ones;
/// coordinate j maps to columns j and p + j. The first step coincides with
/// the two-sided run. Later steps can only be more conservative, because a
/// pair member stays active after its twin is rejected.
inline MhtProblem doubled_one_sided(const MhtProblem& problem) {
  problem.validate();
  const Eigen::Index p = problem.influence.cols();
  const Eigen::Index n = problem.influence.rows();
  Eigen::VectorXd bh(2 * p), b0(2 * p);
  bh << problem.beta_hat, -problem.beta_hat;
  b0 << problem.beta_null, -problem.beta_null;
  Eigen::MatrixXd x(n, 2 * p);
  x << problem.influence.values(), -problem.influence.values();
  return MhtProblem{std::move(bh), std::move(b0), DataMatrix(std::move(x)), false};
}

}  // namespace maxinfer::stepdown
