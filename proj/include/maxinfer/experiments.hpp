#pragma once

// Monte Carlo harness: P-P data for T0 against Z0, Dantzig prediction-error
// tables, multiplier bootstrap coverage, empirical-vs-multiplier agreement
// and stepdown FWER. Every experiment is a pure function of its config.
// Replication r draws from streams derived from (seed, tag, r) and results
// are reduced in replication order, so the thread count never changes output.

#include "maxinfer/dantzig.hpp"
#include "maxinfer/io.hpp"
#include "maxinfer/max_stats.hpp"
#include "maxinfer/parallel.hpp"
#include "maxinfer/rng.hpp"
#include "maxinfer/stepdown.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxinfer::experiments {

enum class Noise { Gaussian, StudentT5Normalized, StudentT4, StudentT4Normalized };

inline const char* to_string(Noise n) noexcept {
  switch (n) {
    case Noise::Gaussian: return "gaussian";
    case Noise::StudentT5Normalized: return "t5_normalized";
    case Noise::StudentT4: return "t4";
    case Noise::StudentT4Normalized: return "t4_normalized";
  }
  return "?";
}

inline Noise noise_from_string(const std::string& s) {
  for (Noise n : {Noise::Gaussian, Noise::StudentT5Normalized, Noise::StudentT4, Noise::StudentT4Normalized}) {
    if (s == to_string(n)) return n;
  }
  throw std::invalid_argument("unknown noise '" + s + "'");
}

inline double draw_noise(SeededRng& rng, Noise noise) {
  switch (noise) {
    case Noise::Gaussian: return rng.normal();
    case Noise::StudentT5Normalized: return student_t(rng, 5, true);
    case Noise::StudentT4: return student_t(rng, 4, false);
    case Noise::StudentT4Normalized: return student_t(rng, 4, true);
  }
  return 0.0;
}

/// Standard deviation of one draw_noise() value.
inline double noise_sd(Noise noise) { return noise == Noise::StudentT4 ? std::sqrt(2.0) : 1.0; }

namespace tag {
inline constexpr std::uint64_t design = 1, noise = 2, bootstrap = 3, support = 4, gaussian = 5, inner = 6;
}

struct McDesign {
  Eigen::Index n = 100;
  Eigen::Index p = 250;
  double rho = 0.0;
  double sigma0 = 0.5;
  Noise noise = Noise::StudentT5Normalized;
  double gamma = 0.0;
  std::size_t reps = 500;
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 2 || p < 2) throw std::invalid_argument("McDesign: need n >= 2 and p >= 2");
    if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("McDesign: rho must lie in [0, 1)");
    if (!(sigma0 > 0.0)) throw std::domain_error("McDesign: sigma0 must be positive");
    if (!std::isfinite(gamma)) throw std::domain_error("McDesign: gamma must be finite");
    if (reps < 1) throw std::invalid_argument("McDesign: reps must be >= 1");
  }
};

/// Intercept plus p - 1 equicorrelated Gaussian columns, each scaled to
/// E_n[z^2] = 1.
inline Eigen::MatrixXd equicorrelated_design(Eigen::Index n, Eigen::Index p, double rho, SeededRng& rng) {
  Eigen::MatrixXd z(n, p);
  const double a = std::sqrt(rho), b = std::sqrt(1.0 - rho);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i, 0) = 1.0;
    const double common = rng.normal();
    for (Eigen::Index j = 1; j < p; ++j) z(i, j) = a * common + b * rng.normal();
  }
  return normalize_columns(z);
}

/// sigma0 * 2 exp(gamma z_i2) / (1 + exp(gamma z_i2)).
inline Eigen::VectorXd noise_scale(const Eigen::MatrixXd& z, double sigma0, double gamma) {
  Eigen::VectorXd s(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double g = gamma * z(i, 1);
    // 2 e^g / (1 + e^g) written to stay finite for large |g|.
    s(i) = sigma0 * 2.0 / (1.0 + std::exp(-g));
  }
  return s;
}

// ---------------------------------------------------------------------------
// P-P data

struct PpPlotData {
  std::vector<double> cdf_t0;  // F_T0 at each pooled point
  std::vector<double> cdf_z0;
  double ks = 0.0;
  std::vector<double> t0;  // sorted draws
  std::vector<double> z0;
};

struct PpPlotConfig {
  Eigen::Index n = 400;
  Eigen::Index p = 200;
  std::size_t reps = 5000;
  std::uint64_t seed = 0;
  Noise noise = Noise::StudentT4;
  unsigned threads = 1;
};

/// Paired empirical CDFs over the pooled sorted sample.
inline PpPlotData pp_from_samples(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  PpPlotData out;
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());
  std::size_t ia = 0, ib = 0;
  for (double t : pooled) {
    while (ia < a.size() && a[ia] <= t) ++ia;
    while (ib < b.size() && b[ib] <= t) ++ib;
    const double fa = static_cast<double>(ia) / static_cast<double>(a.size());
    const double fb = static_cast<double>(ib) / static_cast<double>(b.size());
    out.cdf_t0.push_back(fa);
    out.cdf_z0.push_back(fb);
    out.ks = std::max(out.ks, std::fabs(fa - fb));
  }
  out.t0 = std::move(a);
  out.z0 = std::move(b);
  return out;
}

/// T0 = max_j n^{-1/2} sum_i z_ij eps_i against Z0 with eps replaced by
/// matched-scale Gaussian draws; z is U[0,1] and drawn once.
inline PpPlotData run_ppplot(const PpPlotConfig& cfg) {
  if (cfg.reps < 100) throw std::invalid_argument("run_ppplot: reps must be >= 100");
  if (cfg.n < 1 || cfg.p < 1) throw std::invalid_argument("run_ppplot: n and p must be positive");
  SeededRng zr(derive_seed(cfg.seed, tag::design));
  Eigen::MatrixXd z(cfg.n, cfg.p);
  for (Eigen::Index i = 0; i < cfg.n; ++i)
    for (Eigen::Index j = 0; j < cfg.p; ++j) z(i, j) = zr.uniform();

  const auto signed_max = MaxStatVariant::signed_max();
  const std::uint64_t noise_seed = derive_seed(cfg.seed, tag::noise);
  const std::uint64_t gauss_seed = derive_seed(cfg.seed, tag::gaussian);
  const double scale = noise_sd(cfg.noise);
  std::vector<double> t0(cfg.reps), z0(cfg.reps);
  weighted_sum_replicates(
      z, cfg.reps, cfg.threads,
      [&](std::size_t r, std::span<double> w) {
        SeededRng rng(noise_seed, r);
        for (double& x : w) x = draw_noise(rng, cfg.noise);
      },
      [&](std::size_t r, const auto& sums) { t0[r] = signed_max.reduce(sums); });
  weighted_sum_replicates(
      z, cfg.reps, cfg.threads,
      [&](std::size_t r, std::span<double> w) {
        fill_normal(gauss_seed, r, w);
        for (double& x : w) x *= scale;
      },
      [&](std::size_t r, const auto& sums) { z0[r] = signed_max.reduce(sums); });
  return pp_from_samples(std::move(t0), std::move(z0));
}

/// Asymptotic 95% critical value of the two-sample KS statistic.
inline double ks_critical_95(std::size_t m, std::size_t n) {
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  return 1.3581 * std::sqrt((md + nd) / (md * nd));
}

/// Null standard deviation of the two-sample KS statistic (Kolmogorov law
/// sd 0.2603 rescaled).
inline double ks_standard_error(std::size_t m, std::size_t n) {
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  return 0.2603 * std::sqrt((md + nd) / (md * nd));
}

// ---------------------------------------------------------------------------
// Dantzig prediction-error tables

struct PenaltySummary {
  dantzig::PenaltyKind kind = dantzig::PenaltyKind::Canonical;
  double mean_error = 0.0;
  double standard_error = 0.0;
  double mean_lambda = 0.0;
  std::size_t failures = 0;
  std::size_t completed = 0;
};

struct DantzigTableResult {
  McDesign design;
  std::size_t sparsity = 0;
  std::vector<PenaltySummary> penalties;

  [[nodiscard]] const PenaltySummary& get(dantzig::PenaltyKind k) const {
    for (const auto& s : penalties)
      if (s.kind == k) return s;
    throw std::out_of_range("penalty not in table");
  }
};

struct DantzigTableConfig {
  McDesign design;
  std::size_t sparsity = 5;
  double coefficient = 1.0;
  std::vector<dantzig::PenaltyKind> penalties{dantzig::PenaltyKind::Canonical, dantzig::PenaltyKind::Gar,
                                              dantzig::PenaltyKind::MultiplierBootstrap};
  double alpha = 0.05;
  std::size_t bootstrap_reps = 1000;
  unsigned threads = 1;
};

/// s coefficients of magnitude `coefficient` with random signs on a random support.
inline Eigen::VectorXd sparse_coefficients(Eigen::Index p, std::size_t s, double coefficient, SeededRng& rng) {
  if (static_cast<Eigen::Index>(s) > p) throw std::invalid_argument("sparsity exceeds p");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(p));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (std::size_t k = 0; k < s; ++k) {
    const auto pick = k + rng.uniform_index(static_cast<std::uint64_t>(idx.size() - k));
    std::swap(idx[k], idx[pick]);
    beta(idx[k]) = rng.uniform() < 0.5 ? -coefficient : coefficient;
  }
  return beta;
}

inline DantzigTableResult run_dantzig_table(const DantzigTableConfig& cfg) {
  using dantzig::PenaltyKind;
  const McDesign& d = cfg.design;
  d.validate();
  for (auto k : cfg.penalties) {
    if (k == PenaltyKind::Fixed) throw std::invalid_argument("run_dantzig_table: fixed penalty not supported");
  }
  const std::size_t kinds = cfg.penalties.size();
  std::vector<double> errors(d.reps * kinds, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> lambdas(d.reps * kinds, std::numeric_limits<double>::quiet_NaN());
  // Upper bound on the noise scale used by the canonical rule.
  const double sigma_bar = d.sigma0 * (d.gamma != 0.0 ? 2.0 : 1.0);

  parallel_for(d.reps, cfg.threads, [&](std::size_t r) {
    SeededRng design_rng(derive_seed(d.seed, tag::design, r));
    SeededRng noise_rng(derive_seed(d.seed, tag::noise, r));
    SeededRng support_rng(derive_seed(d.seed, tag::support, r));
    const Eigen::MatrixXd z = equicorrelated_design(d.n, d.p, d.rho, design_rng);
    const Eigen::VectorXd beta = sparse_coefficients(d.p, cfg.sparsity, cfg.coefficient, support_rng);
    const Eigen::VectorXd scale = noise_scale(z, d.sigma0, d.gamma);
    Eigen::VectorXd y = z * beta;
    for (Eigen::Index i = 0; i < d.n; ++i) y(i) += scale(i) * draw_noise(noise_rng, d.noise);
    const dantzig::RegressionData data(z, y);

    BootstrapConfig boot;
    boot.replications = cfg.bootstrap_reps;
    boot.seed = derive_seed(d.seed, tag::bootstrap, r);
    for (std::size_t k = 0; k < kinds; ++k) {
      dantzig::PenaltySpec spec;
      spec.kind = cfg.penalties[k];
      spec.alpha = cfg.alpha;
      spec.bootstrap = boot;
      switch (spec.kind) {
        case PenaltyKind::Canonical:
          spec.sigma = sigma_bar;
          break;
        case PenaltyKind::Gar:
          spec.noise_scale = scale;
          break;
        case PenaltyKind::MultiplierBootstrap:
          spec.sigma = sigma_bar;
          spec.prelim_alpha = cfg.alpha;
          spec.residual_mode = dantzig::ResidualMode::PostSelectionOls;
          break;
        case PenaltyKind::Fixed:
          break;
      }
      try {
        const auto fit = dantzig::fit_with_penalty(data, spec);
        if (fit.status != lp::Status::Optimal) continue;
        errors[r * kinds + k] = dantzig::prediction_norm(z, fit.beta_hat - beta);
        lambdas[r * kinds + k] = fit.lambda;
      } catch (const std::runtime_error&) {
        // Counted as a failure below.
      }
    }
  });

  DantzigTableResult out;
  out.design = d;
  out.sparsity = cfg.sparsity;
  for (std::size_t k = 0; k < kinds; ++k) {
    PenaltySummary s;
    s.kind = cfg.penalties[k];
    double sum = 0.0, sumsq = 0.0, lam = 0.0;
    for (std::size_t r = 0; r < d.reps; ++r) {
      const double e = errors[r * kinds + k];
      if (std::isnan(e)) {
        ++s.failures;
        continue;
      }
      ++s.completed;
      sum += e;
      sumsq += e * e;
      lam += lambdas[r * kinds + k];
    }
    if (s.completed > 0) {
      const double m = static_cast<double>(s.completed);
      s.mean_error = sum / m;
      s.mean_lambda = lam / m;
      const double var = s.completed > 1 ? std::max(0.0, (sumsq - m * s.mean_error * s.mean_error) / (m - 1.0)) : 0.0;
      s.standard_error = std::sqrt(var / m);
    }
    out.penalties.push_back(s);
  }
  return out;
}

/// The 16 cells of one noise table: gamma x sigma0 x rho.
inline std::vector<McDesign> table_cells(const McDesign& base) {
  std::vector<McDesign> cells;
  for (double gamma : {0.0, 1.0})
    for (double sigma0 : {0.5, 1.0})
      for (double rho : {0.0, 0.5, 0.9, 0.99}) {
        McDesign c = base;
        c.gamma = gamma;
        c.sigma0 = sigma0;
        c.rho = rho;
        cells.push_back(c);
      }
  return cells;
}

// ---------------------------------------------------------------------------
// Bootstrap coverage and agreement

enum class DataKind { BoundedMixture, Gaussian };

inline const char* to_string(DataKind k) noexcept {
  return k == DataKind::Gaussian ? "gaussian" : "bounded_mixture";
}

inline DataKind data_kind_from_string(const std::string& s) {
  if (s == "gaussian") return DataKind::Gaussian;
  if (s == "bounded_mixture") return DataKind::BoundedMixture;
  throw std::invalid_argument("unknown data kind '" + s + "'");
}

/// Mean-zero, unit-variance rows. BoundedMixture mixes a shared Rademacher
/// factor with independent U[-sqrt 3, sqrt 3] noise (weights 1/2 each in
/// variance), so |x_ij| <= (1 + sqrt 3) / sqrt 2.
inline Eigen::MatrixXd simulate_means_data(Eigen::Index n, Eigen::Index p, DataKind kind, SeededRng& rng) {
  Eigen::MatrixXd x(n, p);
  const double h = std::sqrt(0.5);
  const double root3 = std::sqrt(3.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (kind == DataKind::Gaussian) {
      for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
      continue;
    }
    const double common = rng.uniform() < 0.5 ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = h * common + h * root3 * (2.0 * rng.uniform() - 1.0);
  }
  return x;
}

struct CoverageConfig {
  Eigen::Index n = 400;
  Eigen::Index p = 200;
  double alpha = 0.05;
  std::size_t outer_reps = 2000;
  std::size_t inner_reps = 1000;
  DataKind data = DataKind::BoundedMixture;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct CoverageResult {
  double coverage = 0.0;
  double standard_error = 0.0;
  std::size_t outer_reps = 0;
};

/// Monte Carlo estimate of Pr(T0 <= c_W0(1 - alpha)).
inline CoverageResult run_coverage(const CoverageConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
  if (cfg.outer_reps < 1 || cfg.inner_reps < 1) throw std::invalid_argument("reps must be >= 1");
  std::vector<char> covered(cfg.outer_reps, 0);
  parallel_for(cfg.outer_reps, cfg.threads, [&](std::size_t r) {
    SeededRng rng(derive_seed(cfg.seed, tag::design, r));
    const DataMatrix x(simulate_means_data(cfg.n, cfg.p, cfg.data, rng));
    BootstrapConfig boot;
    boot.replications = cfg.inner_reps;
    boot.seed = derive_seed(cfg.seed, tag::bootstrap, r);
    const double t0 = compute_max_stat(x, boot.variant);
    covered[r] = t0 <= multiplier_bootstrap_quantile(x, 1.0 - cfg.alpha, boot).value ? 1 : 0;
  });
  CoverageResult out;
  out.outer_reps = cfg.outer_reps;
  const double hits = static_cast<double>(std::count(covered.begin(), covered.end(), char{1}));
  out.coverage = hits / static_cast<double>(cfg.outer_reps);
  out.standard_error = std::sqrt(out.coverage * (1.0 - out.coverage) / static_cast<double>(cfg.outer_reps));
  return out;
}

struct AgreementConfig {
  Eigen::Index n = 400;
  Eigen::Index p = 100;
  double level = 0.95;
  std::size_t datasets = 200;
  std::size_t bootstrap_reps = 2000;
  double tolerance_se = 3.0;
  DataKind data = DataKind::BoundedMixture;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct AgreementResult {
  double fraction_within = 0.0;
  std::vector<double> empirical_quantiles;
  std::vector<double> multiplier_quantiles;
  std::vector<double> combined_se;
};

/// Per dataset, compares the `level`-quantiles of T0* (Efron) and W0
/// (multiplier) against sqrt(se_1^2 + se_2^2).
inline AgreementResult run_bootstrap_agreement(const AgreementConfig& cfg) {
  AgreementResult out;
  out.empirical_quantiles.resize(cfg.datasets);
  out.multiplier_quantiles.resize(cfg.datasets);
  out.combined_se.resize(cfg.datasets);
  parallel_for(cfg.datasets, cfg.threads, [&](std::size_t r) {
    SeededRng rng(derive_seed(cfg.seed, tag::design, r));
    const DataMatrix x(simulate_means_data(cfg.n, cfg.p, cfg.data, rng));
    BootstrapConfig boot;
    boot.replications = cfg.bootstrap_reps;
    boot.seed = derive_seed(cfg.seed, tag::bootstrap, r);
    const auto w = multiplier_bootstrap_quantile(x, cfg.level, boot);
    boot.seed = derive_seed(cfg.seed, tag::inner, r);
    const auto e = empirical_bootstrap_quantile(x, cfg.level, boot);
    out.multiplier_quantiles[r] = w.value;
    out.empirical_quantiles[r] = e.value;
    out.combined_se[r] = std::hypot(w.standard_error(), e.standard_error());
  });
  std::size_t within = 0;
  for (std::size_t r = 0; r < cfg.datasets; ++r) {
    if (std::fabs(out.multiplier_quantiles[r] - out.empirical_quantiles[r]) <= cfg.tolerance_se * out.combined_se[r]) {
      ++within;
    }
  }
  out.fraction_within = static_cast<double>(within) / static_cast<double>(cfg.datasets);
  return out;
}

// ---------------------------------------------------------------------------
// Stepdown FWER

struct FwerConfig {
  Eigen::Index n = 400;
  Eigen::Index true_nulls = 100;
  Eigen::Index false_nulls = 0;
  double effect = 0.0;  // mean shift of the false nulls
  double rho = 0.5;
  double alpha = 0.05;
  std::size_t runs = 2000;
  std::size_t bootstrap_reps = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct FwerResult {
  double fwer = 0.0;
  double power = 0.0;  // mean fraction of false nulls rejected
  std::size_t runs = 0;
};

/// One-sided H_j : mu_j <= 0 on equicorrelated Gaussian rows; the first
/// true_nulls coordinates have mu_j = 0, the rest mu_j = effect.
inline FwerResult run_fwer(const FwerConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("run_fwer: runs must be >= 1");
  const Eigen::Index p = cfg.true_nulls + cfg.false_nulls;
  if (p < 1) throw std::invalid_argument("run_fwer: no hypotheses");
  std::vector<char> any_false(cfg.runs, 0);
  std::vector<double> power(cfg.runs, 0.0);
  const double a = std::sqrt(cfg.rho), b = std::sqrt(1.0 - cfg.rho);
  parallel_for(cfg.runs, cfg.threads, [&](std::size_t r) {
    SeededRng rng(derive_seed(cfg.seed, tag::design, r));
    Eigen::MatrixXd x(cfg.n, p);
    for (Eigen::Index i = 0; i < cfg.n; ++i) {
      const double common = rng.normal();
      for (Eigen::Index j = 0; j < p; ++j) {
        x(i, j) = a * common + b * rng.normal() + (j >= cfg.true_nulls ? cfg.effect : 0.0);
      }
    }
    const auto prob = stepdown::MhtProblem::from_sample_means(DataMatrix(std::move(x)), Eigen::VectorXd::Zero(p));
    BootstrapConfig boot;
    boot.replications = cfg.bootstrap_reps;
    boot.seed = derive_seed(cfg.seed, tag::bootstrap, r);
    const auto res = stepdown::run_stepdown(prob, cfg.alpha, boot);
    for (Eigen::Index j = 0; j < cfg.true_nulls; ++j) {
      if (res.rejected[static_cast<std::size_t>(j)]) any_false[r] = 1;
    }
    if (cfg.false_nulls > 0) {
      std::size_t hits = 0;
      for (Eigen::Index j = cfg.true_nulls; j < p; ++j) hits += res.rejected[static_cast<std::size_t>(j)] ? 1 : 0;
      power[r] = static_cast<double>(hits) / static_cast<double>(cfg.false_nulls);
    }
  });
  FwerResult out;
  out.runs = cfg.runs;
  out.fwer = static_cast<double>(std::count(any_false.begin(), any_false.end(), char{1})) /
             static_cast<double>(cfg.runs);
  out.power = cfg.false_nulls > 0 ? std::accumulate(power.begin(), power.end(), 0.0) / static_cast<double>(cfg.runs)
                                  : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// CSV emission. Column layouts:
//   P-P data:       cdf_t0,cdf_z0
//   Dantzig table:  noise,gamma,sigma0,rho,n,p,reps,penalty,mean_error,standard_error,mean_lambda,failures
//   coverage:       n,p,alpha,data,outer_reps,inner_reps,coverage,standard_error
//   agreement:      dataset,empirical_quantile,multiplier_quantile,combined_se
//   FWER:           n,true_nulls,false_nulls,effect,rho,alpha,runs,fwer,power

inline io::Table to_table(const PpPlotData& d) {
  io::Table t{{"cdf_t0", "cdf_z0"}, {}};
  for (std::size_t k = 0; k < d.cdf_t0.size(); ++k) t.add_row({d.cdf_t0[k], d.cdf_z0[k]});
  return t;
}

inline const std::vector<std::string>& dantzig_table_columns() {
  static const std::vector<std::string> cols{"noise", "gamma", "sigma0", "rho", "n", "p", "reps",
                                             "penalty", "mean_error", "standard_error", "mean_lambda", "failures"};
  return cols;
}

inline void append_rows(io::Table& t, const DantzigTableResult& r) {
  for (const auto& s : r.penalties) {
    t.add_row({std::string(to_string(r.design.noise)), r.design.gamma, r.design.sigma0, r.design.rho,
               static_cast<std::int64_t>(r.design.n), static_cast<std::int64_t>(r.design.p),
               static_cast<std::int64_t>(r.design.reps), std::string(dantzig::to_string(s.kind)), s.mean_error,
               s.standard_error, s.mean_lambda, static_cast<std::int64_t>(s.failures)});
  }
}

inline io::Table to_table(const std::vector<DantzigTableResult>& results) {
  io::Table t{dantzig_table_columns(), {}};
  for (const auto& r : results) append_rows(t, r);
  return t;
}

inline io::Table to_table(const CoverageConfig& cfg, const CoverageResult& r) {
  io::Table t{{"n", "p", "alpha", "data", "outer_reps", "inner_reps", "coverage", "standard_error"}, {}};
  t.add_row({static_cast<std::int64_t>(cfg.n), static_cast<std::int64_t>(cfg.p), cfg.alpha,
             std::string(to_string(cfg.data)), static_cast<std::int64_t>(cfg.outer_reps),
             static_cast<std::int64_t>(cfg.inner_reps), r.coverage, r.standard_error});
  return t;
}

inline io::Table to_table(const AgreementResult& r) {
  io::Table t{{"dataset", "empirical_quantile", "multiplier_quantile", "combined_se"}, {}};
  for (std::size_t k = 0; k < r.empirical_quantiles.size(); ++k) {
    t.add_row({static_cast<std::int64_t>(k), r.empirical_quantiles[k], r.multiplier_quantiles[k], r.combined_se[k]});
  }
  return t;
}

inline io::Table to_table(const FwerConfig& cfg, const FwerResult& r) {
  io::Table t{{"n", "true_nulls", "false_nulls", "effect", "rho", "alpha", "runs", "fwer", "power"}, {}};
  t.add_row({static_cast<std::int64_t>(cfg.n), static_cast<std::int64_t>(cfg.true_nulls),
             static_cast<std::int64_t>(cfg.false_nulls), cfg.effect, cfg.rho, cfg.alpha,
             static_cast<std::int64_t>(r.runs), r.fwer, r.power});
  return t;
}

template <typename... Result>
void emit_csv(const std::filesystem::path& path, const Result&... result) {
  io::write_table(path, to_table(result...));
}

}  // namespace maxinfer::experiments
