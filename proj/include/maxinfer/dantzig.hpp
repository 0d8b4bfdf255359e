#pragma once

// Dantzig selector
//
//     beta_hat in argmin ||b||_1  s.t.  sqrt(n) max_j |E_n[z_ij (y_i - z_i'b)]| <= lambda
//
// solved as a linear program in the split variables b = b+ - b-, together
// with three data-driven penalty rules (canonical union bound, simulated
// Gaussian analog, two-stage multiplier bootstrap), a sampled upper bound on
// the identifiability factor, confidence rectangles, and the joint
// significance test "reject beta = 0 iff beta_hat != 0".

#include "maxinfer/linalg.hpp"
#include "maxinfer/lp.hpp"
#include "maxinfer/max_stats.hpp"
#include "maxinfer/normal.hpp"
#include "maxinfer/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxinfer::dantzig {

/// Design with E_n[z_ij^2] = 1 for every column, plus the response.
class RegressionData {
 public:
  RegressionData(Eigen::MatrixXd z, Eigen::VectorXd y) : z_(std::move(z)), y_(std::move(y)) {
    if (z_.rows() < 1 || z_.cols() < 1) throw DimensionError("RegressionData: empty design");
    if (z_.rows() != y_.size()) throw DimensionError("RegressionData: y length must equal n");
    if (!z_.allFinite() || !y_.allFinite()) throw std::domain_error("RegressionData: non-finite data");
    const double n = static_cast<double>(z_.rows());
    for (Eigen::Index j = 0; j < z_.cols(); ++j) {
      if (std::fabs(z_.col(j).squaredNorm() / n - 1.0) > 1e-8) {
        throw std::domain_error("RegressionData: column " + std::to_string(j) +
                                " is not normalized to E_n[z^2] = 1");
      }
    }
  }

  /// Rescales the columns of a raw design before validating.
  static RegressionData normalized(const Eigen::MatrixXd& raw_z, Eigen::VectorXd y) {
    return {normalize_columns(raw_z), std::move(y)};
  }

  [[nodiscard]] const Eigen::MatrixXd& z() const noexcept { return z_; }
  [[nodiscard]] const Eigen::VectorXd& y() const noexcept { return y_; }
  [[nodiscard]] Eigen::Index n() const noexcept { return z_.rows(); }
  [[nodiscard]] Eigen::Index p() const noexcept { return z_.cols(); }

 private:
  Eigen::MatrixXd z_;
  Eigen::VectorXd y_;
};

enum class PenaltyKind { Canonical, Gar, MultiplierBootstrap, Fixed };
enum class ResidualMode { PrelimDantzig, PostSelectionOls };

inline const char* to_string(PenaltyKind k) noexcept {
  switch (k) {
    case PenaltyKind::Canonical: return "canonical";
    case PenaltyKind::Gar: return "gar";
    case PenaltyKind::MultiplierBootstrap: return "mb";
    case PenaltyKind::Fixed: return "fixed";
  }
  return "unknown";
}

inline const char* to_string(ResidualMode m) noexcept {
  return m == ResidualMode::PrelimDantzig ? "prelim_dantzig" : "post_selection_ols";
}

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::Canonical;
  double alpha = 0.05;
  /// Noise scale (Canonical, Gar) or its known upper bound (preliminary MB stage).
  std::optional<double> sigma;
  /// Per-observation noise scale for the Gaussian analog; overrides sigma for Gar.
  std::optional<Eigen::VectorXd> noise_scale;
  std::optional<BootstrapConfig> bootstrap;
  ResidualMode residual_mode = ResidualMode::PrelimDantzig;
  /// Level of the preliminary canonical fit in the MB rule; 1/n when unset.
  std::optional<double> prelim_alpha;
  /// Used by PenaltyKind::Fixed only.
  std::optional<double> lambda;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("PenaltySpec: alpha must lie in (0, 1)");
    if (sigma && !(*sigma > 0.0)) throw std::domain_error("PenaltySpec: sigma must be positive");
    switch (kind) {
      case PenaltyKind::Canonical:
        if (!sigma) throw std::invalid_argument("PenaltySpec: canonical penalty requires sigma");
        break;
      case PenaltyKind::Gar:
        if (!sigma && !noise_scale) throw std::invalid_argument("PenaltySpec: GAR penalty requires sigma");
        if (!bootstrap) throw std::invalid_argument("PenaltySpec: GAR penalty requires a bootstrap config");
        break;
      case PenaltyKind::MultiplierBootstrap:
        if (!sigma) throw std::invalid_argument("PenaltySpec: MB penalty requires sigma for its first stage");
        if (!bootstrap) throw std::invalid_argument("PenaltySpec: MB penalty requires a bootstrap config");
        break;
      case PenaltyKind::Fixed:
        if (!lambda || !(*lambda >= 0.0)) throw std::invalid_argument("PenaltySpec: fixed penalty requires lambda >= 0");
        break;
    }
  }
};

struct DantzigResult {
  Eigen::VectorXd beta_hat;
  double lambda = 0.0;
  PenaltyKind penalty_kind = PenaltyKind::Fixed;
  lp::Status status = lp::Status::IterationLimit;
  /// max(0, sqrt(n) max_j |E_n[z_ij (y_i - z_i'beta_hat)]| - lambda).
  double constraint_residual = 0.0;
  std::size_t lp_iterations = 0;
};

/// sqrt(n) max_j |E_n[z_ij (y_i - z_i'b)]|.
inline double score_sup_norm(const RegressionData& data, const Eigen::VectorXd& b) {
  const double n = static_cast<double>(data.n());
  const Eigen::VectorXd score = data.z().transpose() * (data.y() - data.z() * b) / n;
  return std::sqrt(n) * score.cwiseAbs().maxCoeff();
}

inline double prediction_norm(const Eigen::MatrixXd& z, const Eigen::VectorXd& delta) {
  return std::sqrt((z * delta).squaredNorm() / static_cast<double>(z.rows()));
}

/// The Dantzig program as an LP over (b+, b-), 2p variables and 2p rows.
inline lp::Problem dantzig_program(const RegressionData& data, double lambda) {
  const Eigen::Index p = data.p();
  const double n = static_cast<double>(data.n());
  const Eigen::MatrixXd gram = data.z().transpose() * data.z() / n;
  const Eigen::VectorXd corr = data.z().transpose() * data.y() / n;
  const double slack = lambda / std::sqrt(n);
  lp::Problem prob;
  prob.objective = Eigen::VectorXd::Ones(2 * p);
  prob.constraints.resize(2 * p, 2 * p);
  prob.constraints.topLeftCorner(p, p) = gram;
  prob.constraints.topRightCorner(p, p) = -gram;
  prob.constraints.bottomLeftCorner(p, p) = -gram;
  prob.constraints.bottomRightCorner(p, p) = gram;
  prob.bounds.resize(2 * p);
  prob.bounds.head(p) = corr.array() + slack;
  prob.bounds.tail(p) = slack - corr.array();
  prob.senses.assign(static_cast<std::size_t>(2 * p), lp::Sense::LessEqual);
  return prob;
}

inline DantzigResult fit_dantzig(const RegressionData& data, double lambda,
                                 PenaltyKind kind = PenaltyKind::Fixed, const lp::Options& options = {}) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("fit_dantzig: lambda must be finite and >= 0");
  }
  const Eigen::Index p = data.p();
  DantzigResult result;
  result.lambda = lambda;
  result.penalty_kind = kind;
  const auto sol = lp::solve(dantzig_program(data, lambda), options);
  result.status = sol.status;
  result.lp_iterations = sol.iterations;
  if (sol.status != lp::Status::Optimal) {
    result.beta_hat = Eigen::VectorXd::Zero(p);
    result.constraint_residual = std::numeric_limits<double>::infinity();
    return result;
  }
  result.beta_hat = sol.x.head(p) - sol.x.tail(p);
  result.constraint_residual = std::max(0.0, score_sup_norm(data, result.beta_hat) - lambda);
  return result;
}

/// c_0(1 - alpha) = sigma * Phi^{-1}(1 - alpha / (2p)).
inline double canonical_penalty(double sigma, double alpha, Eigen::Index p) {
  if (!(sigma > 0.0)) throw std::domain_error("canonical_penalty: sigma must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("canonical_penalty: alpha must lie in (0, 1)");
  if (p < 1) throw std::domain_error("canonical_penalty: p must be >= 1");
  return sigma * normal_quantile(1.0 - alpha / (2.0 * static_cast<double>(p)));
}

/// c_Z0(1 - alpha): simulated quantile of sqrt(n) max_j |E_n[z_ij sigma_i e_i]|.
inline QuantileEstimate gar_penalty(const Eigen::MatrixXd& z, const Eigen::VectorXd& noise_scale,
                                    double alpha, BootstrapConfig config) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("gar_penalty: alpha must lie in (0, 1)");
  config.variant = MaxStatVariant::absolute_max();
  return simulate_z0_design(z, noise_scale, 1.0 - alpha, config);
}

inline QuantileEstimate gar_penalty(const Eigen::MatrixXd& z, double sigma, double alpha,
                                    const BootstrapConfig& config) {
  if (!(sigma > 0.0)) throw std::domain_error("gar_penalty: sigma must be positive");
  return gar_penalty(z, Eigen::VectorXd::Constant(z.rows(), sigma), alpha, config);
}

struct MbPenalty {
  QuantileEstimate quantile;
  DantzigResult preliminary;
  Eigen::VectorXd residuals;
  /// Post-selection OLS was rank deficient; preliminary residuals were used.
  bool ols_fallback = false;
};

/// Two-stage multiplier bootstrap penalty c_W(1 - alpha).
inline MbPenalty mb_penalty(const RegressionData& data, const PenaltySpec& spec) {
  if (spec.kind != PenaltyKind::MultiplierBootstrap) {
    throw std::invalid_argument("mb_penalty: spec.kind must be MultiplierBootstrap");
  }
  spec.validate();
  const double prelim_alpha = spec.prelim_alpha.value_or(1.0 / static_cast<double>(data.n()));
  MbPenalty out;
  out.preliminary = fit_dantzig(data, canonical_penalty(*spec.sigma, prelim_alpha, data.p()),
                                PenaltyKind::Canonical);
  if (out.preliminary.status != lp::Status::Optimal) {
    throw std::runtime_error(std::string("mb_penalty: preliminary fit failed: ") +
                             lp::to_string(out.preliminary.status));
  }
  out.residuals = data.y() - data.z() * out.preliminary.beta_hat;
  if (spec.residual_mode == ResidualMode::PostSelectionOls) {
    std::vector<Eigen::Index> selected;
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      if (out.preliminary.beta_hat(j) != 0.0) selected.push_back(j);
    }
    const auto k = static_cast<Eigen::Index>(selected.size());
    if (k < data.n()) {
      Eigen::MatrixXd zs(data.n(), k);
      for (Eigen::Index c = 0; c < k; ++c) zs.col(c) = data.z().col(selected[static_cast<std::size_t>(c)]);
      const auto fit = ols_fit(zs, data.y());
      if (fit.full_rank) {
        out.residuals = fit.residuals;
      } else {
        out.ols_fallback = true;
      }
    } else {
      out.ols_fallback = true;
    }
  }
  BootstrapConfig cfg = *spec.bootstrap;
  cfg.variant = MaxStatVariant::absolute_max();
  const Eigen::MatrixXd scores = out.residuals.asDiagonal() * data.z();
  out.quantile = make_quantile_estimate(multiplier_replicates(scores, cfg), 1.0 - spec.alpha);
  return out;
}

struct PenaltyChoice {
  double lambda = 0.0;
  std::optional<QuantileEstimate> quantile;
  bool ols_fallback = false;
};

inline PenaltyChoice choose_penalty(const RegressionData& data, const PenaltySpec& spec) {
  spec.validate();
  PenaltyChoice choice;
  switch (spec.kind) {
    case PenaltyKind::Canonical:
      choice.lambda = canonical_penalty(*spec.sigma, spec.alpha, data.p());
      break;
    case PenaltyKind::Gar: {
      const Eigen::VectorXd scale =
          spec.noise_scale ? *spec.noise_scale : Eigen::VectorXd::Constant(data.n(), *spec.sigma);
      choice.quantile = gar_penalty(data.z(), scale, spec.alpha, *spec.bootstrap);
      choice.lambda = choice.quantile->value;
      break;
    }
    case PenaltyKind::MultiplierBootstrap: {
      auto mb = mb_penalty(data, spec);
      choice.lambda = mb.quantile.value;
      choice.ols_fallback = mb.ols_fallback;
      choice.quantile = std::move(mb.quantile);
      break;
    }
    case PenaltyKind::Fixed:
      choice.lambda = *spec.lambda;
      break;
  }
  return choice;
}

inline DantzigResult fit_with_penalty(const RegressionData& data, const PenaltySpec& spec) {
  const auto choice = choose_penalty(data, spec);
  return fit_dantzig(data, choice.lambda, spec.kind);
}

/// Rejects beta = 0 iff the penalized fit has a coefficient above 1e-8 in magnitude.
inline bool portmanteau_test(const RegressionData& data, const PenaltySpec& spec) {
  const auto fit = fit_with_penalty(data, spec);
  if (fit.status != lp::Status::Optimal) {
    throw std::runtime_error(std::string("portmanteau_test: fit failed: ") + lp::to_string(fit.status));
  }
  return fit.beta_hat.cwiseAbs().maxCoeff() > 1e-8;
}

enum class NormKind { Prediction, Component };

struct KappaEstimate {
  NormKind norm_kind = NormKind::Prediction;
  Eigen::Index component = 0;
  /// Minimum sampled ratio: an upper bound on the identifiability factor.
  double value = std::numeric_limits<double>::infinity();
  std::size_t samples_used = 0;
  bool is_upper_bound = true;
};

/// max_j |E_n[z_ij z_i'delta]| / ||delta||_I, or +inf when ||delta||_I = 0.
inline double kappa_ratio(const Eigen::MatrixXd& gram, const Eigen::VectorXd& delta, NormKind kind,
                          Eigen::Index component) {
  const Eigen::VectorXd g = gram * delta;
  double denom = 0.0;
  if (kind == NormKind::Prediction) {
    denom = std::sqrt(std::max(0.0, delta.dot(g)));
  } else {
    denom = std::fabs(delta(component));
  }
  if (!(denom > 1e-14 * std::max(1.0, delta.cwiseAbs().maxCoeff()))) {
    return std::numeric_limits<double>::infinity();
  }
  return g.cwiseAbs().maxCoeff() / denom;
}

/// Moves a direction into the tangent cone of the restricted set
/// {delta : ||beta + delta||_1 <= ||beta||_1}; the ratio is scale invariant,
/// so the cone and the set give the same infimum.
inline void project_to_restricted_cone(const Eigen::VectorXd& beta, Eigen::VectorXd& delta) {
  double derivative = 0.0;
  Eigen::Index support = 0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) {
      derivative += (beta(j) > 0 ? 1.0 : -1.0) * delta(j);
      ++support;
    } else {
      derivative += std::fabs(delta(j));
    }
  }
  if (derivative <= 0.0 || support == 0) return;
  const double shift = derivative / static_cast<double>(support);
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) delta(j) -= (beta(j) > 0 ? 1.0 : -1.0) * shift;
  }
}

/// Sampled upper bound on kappa_I(beta). Coordinate directions come first,
/// then n_samples random (Gaussian, half of them sparsified) directions from
/// `rng`, each moved into the restricted cone. The running minimum is
/// nonincreasing in the number of samples.
inline KappaEstimate estimate_kappa(const RegressionData& data, const Eigen::VectorXd& beta,
                                    NormKind norm_kind, Eigen::Index component,
                                    std::size_t n_samples, SeededRng& rng) {
  if (beta.size() != data.p()) throw DimensionError("estimate_kappa: beta length must equal p");
  if (n_samples < 1) throw std::invalid_argument("estimate_kappa: n_samples must be >= 1");
  if (norm_kind == NormKind::Component && (component < 0 || component >= data.p())) {
    throw std::out_of_range("estimate_kappa: component index out of range");
  }
  KappaEstimate est;
  est.norm_kind = norm_kind;
  est.component = component;
  if (beta.cwiseAbs().maxCoeff() == 0.0) return est;  // restricted set is {0}

  const Eigen::Index p = data.p();
  const Eigen::MatrixXd gram = data.z().transpose() * data.z() / static_cast<double>(data.n());
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (beta(j) != 0.0) support.push_back(j);
  }
  auto consider = [&](Eigen::VectorXd delta) {
    project_to_restricted_cone(beta, delta);
    est.value = std::min(est.value, kappa_ratio(gram, delta, norm_kind, component));
    ++est.samples_used;
  };
  for (Eigen::Index k = 0; k < p; ++k) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(p);
      d(k) = sign;
      consider(std::move(d));
    }
  }
  for (std::size_t s = 0; s < n_samples; ++s) {
    Eigen::VectorXd d(p);
    for (Eigen::Index j = 0; j < p; ++j) d(j) = rng.normal();
    if (s % 2 == 1) {
      // Keep the support plus a few random off-support coordinates.
      Eigen::VectorXd sparse = Eigen::VectorXd::Zero(p);
      for (Eigen::Index j : support) sparse(j) = d(j);
      const std::size_t extra = 1 + rng.uniform_index(support.size() + 1);
      for (std::size_t e = 0; e < extra; ++e) {
        const auto j = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(p)));
        sparse(j) = d(j);
      }
      d = sparse;
    }
    consider(std::move(d));
  }
  return est;
}

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// I_j = beta_hat_j -/+ 2 lambda / (sqrt(n) kappa_j).
inline std::vector<Interval> confidence_rectangle(const DantzigResult& result,
                                                  const Eigen::VectorXd& kappa, Eigen::Index n) {
  if (kappa.size() != result.beta_hat.size()) {
    throw DimensionError("confidence_rectangle: one kappa per coefficient required");
  }
  if (n < 1) throw std::domain_error("confidence_rectangle: n must be >= 1");
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(kappa.size()));
  for (Eigen::Index j = 0; j < kappa.size(); ++j) {
    if (!(kappa(j) > 0.0)) throw std::domain_error("confidence_rectangle: kappa entries must be positive");
    const double half = 2.0 * result.lambda / (std::sqrt(static_cast<double>(n)) * kappa(j));
    out.push_back({result.beta_hat(j) - half, result.beta_hat(j) + half});
  }
  return out;
}

}  // namespace maxinfer::dantzig
